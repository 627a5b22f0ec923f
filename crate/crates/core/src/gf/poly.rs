use super::{Elem, Gf};

/// Univariate polynomial over F_q, coefficients lowest degree first.
///
/// Used for modulus validation and for building extension fields F_{q^t}
/// inside the small-bias construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly {
    field: Gf,
    coeffs: Vec<Elem>,
}

impl Poly {
    pub fn new(field: &Gf, mut coeffs: Vec<Elem>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Poly {
            field: field.clone(),
            coeffs,
        }
    }

    pub fn coeffs(&self) -> &[Elem] {
        &self.coeffs
    }

    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::new(&self.field, Vec::new());
        }
        let f = &self.field;
        let mut out = vec![0; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = f.add(out[i + j], f.mul(a, b));
            }
        }
        Poly::new(f, out)
    }

    /// Remainder of division by a nonzero `divisor`.
    pub fn rem(&self, divisor: &Poly) -> Poly {
        let f = &self.field;
        let dd = divisor.degree().expect("division by the zero polynomial");
        let lead_inv = f.inv(divisor.coeffs[dd]).expect("nonzero leading coefficient");
        let mut r = self.coeffs.clone();
        while r.len() > dd {
            let top = r.len() - 1;
            let c = f.mul(r[top], lead_inv);
            if c != 0 {
                for (i, &d) in divisor.coeffs.iter().enumerate() {
                    let k = top - dd + i;
                    r[k] = f.sub(r[k], f.mul(c, d));
                }
            }
            r.pop();
            while r.last() == Some(&0) {
                r.pop();
            }
        }
        Poly::new(f, r)
    }

    /// Trial division by every monic polynomial of degree `1..=deg/2`.
    pub fn is_irreducible(&self) -> bool {
        let Some(deg) = self.degree() else {
            return false;
        };
        if deg == 0 {
            return false;
        }
        for d in 1..=deg / 2 {
            for lower in self.field.vectors(d) {
                let mut c: Vec<Elem> = lower.into_iter().rev().collect();
                c.push(1);
                if self.rem(&Poly::new(&self.field, c)).is_zero() {
                    return false;
                }
            }
        }
        true
    }

    /// The lexicographically first monic irreducible polynomial of degree `t`
    /// (lower coefficients compared from the constant term upward).
    pub fn first_irreducible(field: &Gf, t: usize) -> Poly {
        for lower in field.vectors(t) {
            let mut c: Vec<Elem> = lower.into_iter().rev().collect();
            c.push(1);
            let p = Poly::new(field, c);
            if p.is_irreducible() {
                return p;
            }
        }
        unreachable!("irreducible polynomials exist in every degree")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binary_irreducibles() {
        let f2 = Gf::binary();
        assert!(Poly::new(&f2, vec![1, 1, 1]).is_irreducible());
        // x^2 + 1 = (x + 1)^2
        assert!(!Poly::new(&f2, vec![1, 0, 1]).is_irreducible());
        assert!(Poly::new(&f2, vec![1, 1, 0, 1]).is_irreducible());
        assert_eq!(Poly::first_irreducible(&f2, 2).coeffs(), &[1, 1, 1]);
    }

    #[test]
    fn remainder() {
        let f3 = Gf::new(3).unwrap();
        // (x^2 + 1) mod (x + 1) = 2 over F_3
        let r = Poly::new(&f3, vec![1, 0, 1]).rem(&Poly::new(&f3, vec![1, 1]));
        assert_eq!(r.coeffs(), &[2]);
    }

    #[test]
    fn irreducible_over_extension_base() {
        let f4 = Gf::new(4).unwrap();
        let p = Poly::first_irreducible(&f4, 3);
        assert_eq!(p.degree(), Some(3));
        assert!(p.is_irreducible());
    }
}
