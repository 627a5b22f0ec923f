use mindist::codes::simplex_code;
use mindist::csp::{contradiction_padded, gen_planted};
use mindist::linalg::FVector;
use mindist::prg::EvaluationSet;
use mindist::reduction::{build_mindist2, build_mindistq, intended_codeword, QaryIndex, ReductionArtifact};
use mindist::{Elem, Gf};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn q3_desk(psi: &mindist::MaxNandInstance, r: usize) -> ReductionArtifact {
    let f3 = Gf::new(3).unwrap();
    build_mindistq(psi, &EvaluationSet::exhaustive(&f3, 2).unwrap(), r).unwrap()
}

fn lift_rows(art: &ReductionArtifact) -> Vec<FVector> {
    (0..art.lift().rows())
        .map(|i| FVector::new(art.field(), art.lift().row(i).to_vec()))
        .collect()
}

#[test]
fn every_lift_row_solves_the_system() {
    let art = q3_desk(&contradiction_padded(2).unwrap(), 2);
    for v in lift_rows(&art) {
        assert!(art.system().violations(&v).unwrap().is_empty());
    }
}

#[test]
fn moments_of_z_reproduce_y() {
    let art = q3_desk(&contradiction_padded(2).unwrap(), 1);
    let f = art.field().clone();
    let ix = QaryIndex::from_layout(art.layout(), 3);
    for v in lift_rows(&art) {
        let v = v.entries();
        for i in 0..9 {
            for j in 0..9 {
                for e in 0..3u64 {
                    for g in 0..3u64 {
                        let mut acc = 0;
                        for x in 0..3u8 {
                            for y in 0..3u8 {
                                let t = f.mul(f.pow(x, e), f.pow(y, g));
                                acc = f.add(acc, f.mul(t, v[ix.z(i, j, x as usize, y as usize)]));
                            }
                        }
                        assert_eq!(acc, v[ix.yef(e as usize, g as usize, i, j)]);
                    }
                }
            }
        }
    }
}

#[test]
fn nonzero_y0_makes_every_block_nonzero() {
    let psi = contradiction_padded(2).unwrap();
    let art = q3_desk(&psi, 1);
    let ix = QaryIndex::from_layout(art.layout(), 3);
    let rows = lift_rows(&art);
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut seen = 0;
    while seen < 300 {
        let mut v = FVector::new(art.field(), vec![0; art.layout().total()]);
        for r in &rows {
            let c: Elem = rng.gen_range(0..3);
            v = v.add(&r.scale(c));
        }
        if v.entries()[ix.y0()] == 0 {
            continue;
        }
        seen += 1;
        let e = v.entries();
        for i in 0..9 {
            for j in 0..9 {
                assert!((0..3).any(|x| (0..3).any(|y| e[ix.z(i, j, x, y)] != 0)));
            }
        }
        for c in 0..psi.m() {
            assert!((0..2).any(|a| (0..2).any(|b| e[ix.s(c, a, b)] != 0)));
        }
    }
}

#[test]
fn binary_intended_codeword_blocks() {
    let (psi, beta) = gen_planted(3, 5, 8).unwrap();
    let art = build_mindist2(&psi, &simplex_code(3).unwrap(), 3).unwrap();
    let w = intended_codeword(&art, &beta).unwrap();
    assert_eq!(w.weight(), 49 + 15);
    assert_eq!(art.output_len(), 4 * 49 + 4 * 15);
    // Z blocks are 4 wide, each S block is 4 variables repeated r times
    let (zs, ss) = w.output.entries().split_at(4 * 49);
    for (k, blk) in zs.chunks(4).enumerate() {
        assert_eq!(blk.iter().filter(|&&x| x != 0).count(), 1, "Z block {k}");
    }
    for (k, blk) in ss.chunks(12).enumerate() {
        assert_eq!(blk.iter().filter(|&&x| x != 0).count(), 3, "S block {k}");
    }
}

#[test]
fn qary_intended_weight_and_length() {
    let (psi, beta) = gen_planted(2, 2, 4).unwrap();
    let art = q3_desk(&psi, 5);
    let w = intended_codeword(&art, &beta).unwrap();
    assert_eq!(w.weight(), 81 + 10);
    assert_eq!(art.output_len(), 9 * 81 + 4 * 5 * 2);
}
