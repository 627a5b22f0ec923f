use mindist::codes::{random_code, tensor, DEFAULT_BUDGET};
use mindist::csp::{gen_noisy, gen_planted};
use mindist::io;
use mindist::reduction::build_ncp2;
use mindist::verify::{check_claim12, check_fact2};
use mindist::Gf;
use proptest::prelude::*;

/// `min_beta sum_c (1 if c holds else 3)`, straight from the assignments.
fn ncp_oracle(psi: &mindist::MaxNandInstance) -> usize {
    (0..1u32 << psi.n())
        .map(|t| {
            let bits: Vec<u8> = (0..psi.n()).map(|v| ((t >> v) & 1) as u8).collect();
            psi.constraints().iter().map(|c| if c.holds(&bits) { 1 } else { 3 }).sum()
        })
        .min()
        .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn instance_text_round_trips(n in 2usize..8, extra in 0usize..6, seed in any::<u64>()) {
        let (psi, _) = gen_planted(n, n + extra, seed).unwrap();
        prop_assert_eq!(io::parse_instance(&io::format_instance(&psi)).unwrap(), psi);
    }

    #[test]
    fn code_text_round_trips(q in prop::sample::select(vec![2u32, 3, 4, 5, 7]), k in 1usize..4, extra in 0usize..4, seed in any::<u64>()) {
        let c = random_code(&Gf::new(q).unwrap(), k + extra, k, seed).unwrap();
        prop_assert_eq!(io::parse_code(&io::format_code(&c)).unwrap(), c);
    }

    #[test]
    fn ncp_weight_matches_assignment_oracle(n in 2usize..6, extra in 0usize..4, flip in 0.0f64..0.6, seed in any::<u64>()) {
        let psi = gen_noisy(n, n + extra, flip, seed).unwrap();
        let art = build_ncp2(&psi).unwrap();
        let w = art.affine().unwrap().ncp_min_weight(DEFAULT_BUDGET).unwrap();
        prop_assert_eq!(w.distance.finite(), Some(ncp_oracle(&psi)));
    }

    #[test]
    fn exact_distance_matches_naive_enumeration(q in prop::sample::select(vec![2u32, 3, 4, 8, 9]), k in 1usize..4, extra in 0usize..4, seed in any::<u64>()) {
        let f = Gf::new(q).unwrap();
        let c = random_code(&f, k + extra, k, seed).unwrap();
        let naive = f
            .vectors(k)
            .filter(|m| m.iter().any(|&x| x != 0))
            .map(|m| c.generator().vec_mul(&m).unwrap().weight())
            .min()
            .unwrap();
        prop_assert_eq!(c.min_distance_exact(DEFAULT_BUDGET).unwrap().distance.finite(), Some(naive));
    }

    #[test]
    fn tensor_distance_multiplies(q in prop::sample::select(vec![2u32, 3]), k1 in 1usize..3, k2 in 1usize..3, seed in any::<u64>()) {
        let f = Gf::new(q).unwrap();
        let c1 = random_code(&f, k1 + 2, k1, seed).unwrap();
        let c2 = random_code(&f, k2 + 3, k2, seed ^ 0x5555).unwrap();
        prop_assert!(check_fact2(&c1, &c2, DEFAULT_BUDGET).unwrap().pass);
        prop_assert_eq!(tensor(&c1, &c2).unwrap().dim(), k1 * k2);
    }

    #[test]
    fn symmetric_subcode_is_large(q in prop::sample::select(vec![2u32, 3]), k in 1usize..5, extra in 0usize..3, seed in any::<u64>()) {
        let c = random_code(&Gf::new(q).unwrap(), k + extra, k, seed).unwrap();
        let r = check_claim12(&c).unwrap();
        prop_assert!(r.pass);
        prop_assert_eq!(r.measured.as_u64().unwrap() as usize, k * (k + 1) / 2);
    }
}
