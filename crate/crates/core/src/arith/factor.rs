use algebraics::polynomial::Polynomial;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;

use super::{Field, Rat, UPoly};

fn to_integer_poly(p: &UPoly<Rat>) -> Polynomial<BigInt> {
    let l = p
        .coeffs()
        .iter()
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let v: Vec<BigInt> = p
        .coeffs()
        .iter()
        .map(|c| (c * Rat::from_integer(l.clone())).to_integer())
        .collect();
    Polynomial::from(v)
}

/// Factorization of a nonzero polynomial over Q into monic irreducible
/// factors with multiplicities, ordered by degree and then coefficients.
pub fn factor_over_q(p: &UPoly<Rat>) -> Vec<(UPoly<Rat>, usize)> {
    if p.is_constant() {
        return Vec::new();
    }
    // The backend misses splittings of non-monic inputs, so factor the
    // monic a^{n-1}·P(y/a) and substitute y = a·x back.
    let int = to_integer_poly(p);
    let c = int.clone().into_coefficients();
    let n = c.len() - 1;
    let a = c[n].clone();
    let mut scale = BigInt::one();
    let mut monic = vec![BigInt::one(); n + 1];
    for i in (0..n).rev() {
        monic[i] = &c[i] * &scale;
        scale *= &a;
    }
    let a = Rat::from_integer(a);
    let mut out: Vec<(UPoly<Rat>, usize)> = Polynomial::from(monic)
        .factor()
        .polynomial_factors
        .into_iter()
        .map(|f| {
            let mut s = Rat::one();
            let c: Vec<Rat> = f
                .polynomial
                .into_coefficients()
                .into_iter()
                .map(|v| {
                    let t = Rat::from_integer(v) * &s;
                    s *= &a;
                    t
                })
                .collect();
            (UPoly::from_coeffs(c).monic(), f.power)
        })
        .filter(|(f, _)| !f.is_constant())
        .collect();
    out.sort_by(|a, b| {
        a.0.deg()
            .cmp(&b.0.deg())
            .then_with(|| format!("{}", a.0).cmp(&format!("{}", b.0)))
    });
    out
}

/// Distinct rational roots, sorted ascending.
pub fn rational_roots(p: &UPoly<Rat>) -> Vec<Rat> {
    let mut r: Vec<Rat> = factor_over_q(p)
        .into_iter()
        .filter(|(f, _)| f.deg() == 1)
        .map(|(f, _)| f.coeffs()[0].fneg())
        .collect();
    r.sort();
    r
}

/// Product of the distinct monic irreducible factors.
pub fn squarefree_part(p: &UPoly<Rat>) -> UPoly<Rat> {
    let g = p.gcd(&p.derivative());
    if g.is_zero() {
        return p.monic();
    }
    p.exact_div(&g).monic()
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rint;

    #[test]
    fn splits_non_monic_factors() {
        // (3x⁴ − 2x² − 2x − 4)(6x³ − 2x − 1)
        let p = UPoly::from_ints(&[4, 10, 6, -20, -15, -18, 0, 18]);
        let f = factor_over_q(&p);
        assert_eq!(f.len(), 2);
        assert_eq!(f[0].0, UPoly::from_ints(&[-1, -2, 0, 6]).monic());
    }

    #[test]
    fn splits_factor_left_whole_by_backend() {
        let p = UPoly::from_ints(&[936, -2280, 3492, -15000, 18570, -8226, 43827, -33816, -2889, -61170, 11187, 7128, 42120, 17010, 10935]);
        let f = factor_over_q(&p);
        let degs: Vec<(isize, usize)> = f.iter().map(|(g, k)| (g.deg(), *k)).collect();
        assert_eq!(degs, vec![(2, 1), (3, 1), (3, 1), (3, 2)]);
        let prod = f.iter().fold(UPoly::constant(p.lc().unwrap().clone()), |acc, (g, k)| &acc * &g.pow(*k));
        assert_eq!(prod, p);
    }

    #[test]
    fn factors_example_leading_coefficient() {
        // x (4x-1)(4x+1)(16x³+24x²+5x+1)
        let p = &(&UPoly::from_ints(&[0, 1]) * &UPoly::from_ints(&[-1, 0, 16]))
            * &UPoly::from_ints(&[1, 5, 24, 16]);
        let f = factor_over_q(&p);
        assert_eq!(f.len(), 4);
        assert_eq!(f[3].0.deg(), 3);
        let roots = rational_roots(&p);
        assert_eq!(roots, vec![crate::arith::rat(-1, 4), rint(0), crate::arith::rat(1, 4)]);
    }

    #[test]
    fn multiplicities() {
        let p = &UPoly::from_ints(&[1, 1]).pow(3) * &UPoly::from_ints(&[1, -34, 1]);
        let f = factor_over_q(&p);
        assert_eq!(f, vec![(UPoly::from_ints(&[1, 1]), 3), (UPoly::from_ints(&[1, -34, 1]), 1)]);
        assert_eq!(squarefree_part(&p), &UPoly::from_ints(&[1, 1]) * &UPoly::from_ints(&[1, -34, 1]));
    }
}
