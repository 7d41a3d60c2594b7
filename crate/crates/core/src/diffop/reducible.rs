use crate::arith::{rint, solve_linear, Field, Rat, RatFun, UPoly};

use super::place::{indicial_exponents, indicial_exponents_algebraic, singularities, Place};
use super::QOp;

const MAX_COMBOS: usize = 1 << 12;

/// Polynomial solutions of degree ≤ n: a basis of the solution space.
fn polynomial_solutions(l: &QOp, n: usize) -> Vec<UPoly<Rat>> {
    let one = rint(1);
    let images: Vec<RatFun<Rat>> = (0..=n)
        .map(|k| l.apply(&RatFun::from_poly(UPoly::monomial(one.clone(), k), &one)))
        .collect();
    let mut den = UPoly::from_ints(&[1]);
    for r in &images {
        let g = den.gcd(r.den());
        den = (&den * r.den()).exact_div(&g);
    }
    let polys: Vec<UPoly<Rat>> = images.iter().map(|r| (r.num() * &den).exact_div(r.den())).collect();
    let rows_n = polys.iter().filter_map(|p| p.degree()).max().map_or(0, |d| d + 1);
    if rows_n == 0 {
        return (0..=n).map(|k| UPoly::monomial(one.clone(), k)).collect();
    }
    let zero = rint(0);
    let rows: Vec<Vec<Rat>> = (0..rows_n)
        .map(|i| polys.iter().map(|p| p.coeff_or_zero(i, &zero)).collect())
        .collect();
    match solve_linear(&rows, &vec![zero.clone(); rows_n], n + 1, &zero) {
        Some(s) => s.kernel.into_iter().map(UPoly::from_coeffs).collect(),
        None => Vec::new(),
    }
}

/// A first-order right factor ∂ − u with u ∈ Q(x) of an order-2 regular
/// singular operator, found as a solution Π m_p^{e_p}·P(x) with each e_p a
/// local exponent. Places with irrational exponents are not searched.
pub fn exponential_right_factor(l: &QOp) -> Option<RatFun<Rat>> {
    let one = rint(1);
    let mut places: Vec<(UPoly<Rat>, [Rat; 2])> = Vec::new();
    for p in singularities(l) {
        match &p {
            Place::Infinity => {}
            Place::Rational(a) => {
                let e = indicial_exponents(l, &p).ok()?;
                places.push((UPoly::from_coeffs(vec![-a.clone(), one.clone()]), [e.e1, e.e2]));
            }
            Place::Algebraic(m) => {
                let e = indicial_exponents_algebraic(l, m).ok()?;
                let (e1, e2) = (e.e1.to_rational()?, e.e2.to_rational()?);
                places.push((m.monic(), [e1, e2]));
            }
        }
    }
    let inf = indicial_exponents(l, &Place::Infinity).ok()?;
    if places.len() > MAX_COMBOS.trailing_zeros() as usize {
        return None;
    }
    for mask in 0..(1usize << places.len()) {
        let mut r = RatFun::from_ints(&[0], &[1]);
        let mut weight = rint(0);
        for (i, (m, e)) in places.iter().enumerate() {
            let ei = &e[(mask >> i) & 1];
            let mr = RatFun::from_poly(m.clone(), &one);
            r = r.fadd(&RatFun::from_poly(m.derivative(), &one).fdiv(&mr).unwrap().fmul(&RatFun::from_rat(ei.clone())));
            weight += ei * Rat::from_integer(m.degree().unwrap().into());
        }
        for einf in [&inf.e1, &inf.e2] {
            let n = -einf - &weight;
            if !n.is_integer() || n < rint(0) {
                continue;
            }
            let n: usize = n.to_integer().try_into().ok()?;
            let shifted = l.exp_product(&r.fneg());
            if let Some(p) = polynomial_solutions(&shifted, n).into_iter().next() {
                let pr = RatFun::from_poly(p.clone(), &one);
                return Some(r.fadd(&RatFun::from_poly(p.derivative(), &one).fdiv(&pr).unwrap()));
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::DiffField;
    use crate::testutil::*;

    #[test]
    fn irreducible_examples_have_no_factor() {
        assert!(exponential_right_factor(&rational_pullback_op()).is_none());
        assert!(exponential_right_factor(&gauge_op()).is_none());
    }

    #[test]
    fn finds_power_and_polynomial_solutions() {
        // (∂ + 1/(2x))·(∂ − 3/x)
        let right = QOp::new(vec![rf(&[-3], &[0, 1]), rf(&[1], &[1])]);
        let left = QOp::new(vec![rf(&[1], &[0, 2]), rf(&[1], &[1])]);
        let l = left.mul(&right);
        let divides = |l: &QOp, u: RatFun<Rat>| {
            let f = QOp::new(vec![u.fneg(), rf(&[1], &[1])]);
            l.right_divide(&f).1.is_zero()
        };
        assert!(divides(&l, exponential_right_factor(&l).unwrap()));
        // (∂ + 1/x)·(∂ − y′/y) with y = x² + 1
        let y = rf(&[1, 0, 1], &[1]);
        let g = QOp::new(vec![y.derive().fdiv(&y).unwrap().fneg(), rf(&[1], &[1])]);
        let l = QOp::new(vec![rf(&[1], &[0, 1]), rf(&[1], &[1])]).mul(&g);
        assert!(l.apply(&y).is_zero());
        assert!(divides(&l, exponential_right_factor(&l).unwrap()));
    }
}
