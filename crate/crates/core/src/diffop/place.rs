use std::fmt;
use std::sync::Arc;

use crate::arith::{factor_over_q, rat_sqrt, rint, Field, NfElem, Rat, RatFun, UPoly};

use super::{DiffOp, DiffOpError, QOp};

/// A point of P¹ over the rationals, or a Galois orbit of algebraic points
/// given by an irreducible minimal polynomial.
#[derive(Clone, PartialEq)]
pub enum Place {
    Rational(Rat),
    Infinity,
    Algebraic(UPoly<Rat>),
}

impl Place {
    /// Number of geometric points in the orbit.
    pub fn degree(&self) -> usize {
        match self {
            Place::Algebraic(m) => m.degree().unwrap(),
            _ => 1,
        }
    }

    pub fn is_algebraic(&self) -> bool {
        matches!(self, Place::Algebraic(_))
    }
}

impl fmt::Debug for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Rational(a) => write!(f, "{a}"),
            Place::Infinity => write!(f, "infinity"),
            Place::Algebraic(m) => write!(f, "RootOf({})", m.render("x")),
        }
    }
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// The Möbius map sending 0 to the place: x ↦ x + p, or x ↦ 1/x.
pub fn local_coordinate(p: &Place) -> Result<RatFun<Rat>, DiffOpError> {
    match p {
        Place::Rational(a) => Ok(RatFun::new(
            UPoly::from_coeffs(vec![a.clone(), rint(1)]),
            UPoly::from_ints(&[1]),
        )),
        Place::Infinity => Ok(RatFun::from_ints(&[1], &[0, 1])),
        Place::Algebraic(_) => Err(DiffOpError::AlgebraicPlace),
    }
}

/// Move a rational place or infinity to x = 0.
pub fn move_point_to_zero(l: &QOp, p: &Place) -> Result<QOp, DiffOpError> {
    match p {
        Place::Rational(a) if num_traits::Zero::is_zero(a) => Ok(l.clone()),
        _ => l.change_of_variables(&local_coordinate(p)?),
    }
}

/// Move one root z of an irreducible m to 0, over Q[z]/(m).
pub fn move_algebraic_to_zero(l: &QOp, m: &UPoly<Rat>) -> DiffOp<RatFun<NfElem>> {
    let m = Arc::new(m.monic());
    let z = NfElem::generator(m.clone());
    let one = z.one_like();
    let shift = RatFun::from_poly(UPoly::from_coeffs(vec![z, one.clone()]), &one);
    l.map(|a| {
        a.map(|c| NfElem::from_rat(c.clone(), m.clone()))
            .compose(&shift)
    })
}

/// Singular places: roots of the leading coefficient (after clearing
/// denominators) grouped by irreducible factor, then infinity if singular.
pub fn singularities(l: &QOp) -> Vec<Place> {
    let p = l.primitive();
    let mut out = Vec::new();
    for (f, _) in factor_over_q(p.lc().num()) {
        if f.degree() == Some(1) {
            out.push(Place::Rational(-f.coeffs()[0].clone()));
        } else {
            out.push(Place::Algebraic(f));
        }
    }
    let inf = move_point_to_zero(l, &Place::Infinity).unwrap().primitive();
    if num_traits::Zero::is_zero(&inf.lc().num().coeff_or_zero(0, &rint(0))) {
        out.push(Place::Infinity);
    }
    out
}

/// Local data of an operator at x = 0: L(x^λ) = Σ_k F_k(λ) x^{λ+k}.
pub struct LocalOp<K> {
    /// Polynomial coefficients A_i after clearing denominators.
    pub polys: Vec<UPoly<K>>,
    /// Smallest k with F_k ≠ 0.
    pub k0: isize,
    one: K,
}

impl<K: Field> LocalOp<K> {
    pub fn new(l: &DiffOp<RatFun<K>>) -> Self {
        let one = l.lc().num().lc().unwrap().one_like();
        let mut den = UPoly::constant(one.clone());
        for a in l.coeffs() {
            let g = den.gcd(a.den());
            den = (&den * a.den()).exact_div(&g);
        }
        let polys: Vec<UPoly<K>> = l
            .coeffs()
            .iter()
            .map(|a| (a.num() * &den).exact_div(a.den()))
            .collect();
        let k0 = polys
            .iter()
            .enumerate()
            .filter_map(|(i, p)| p.valuation().map(|v| v as isize - i as isize))
            .min()
            .unwrap();
        LocalOp { polys, k0, one }
    }

    pub fn order(&self) -> usize {
        self.polys.len() - 1
    }

    pub fn one(&self) -> &K {
        &self.one
    }

    /// F_{k₀+t}(λ) evaluated at a point.
    pub fn f_at(&self, t: usize, lam: &K) -> K {
        let k = self.k0 + t as isize;
        let mut acc = self.one.zero_like();
        let mut fall = self.one.clone();
        for (i, p) in self.polys.iter().enumerate() {
            if i > 0 {
                fall = fall.fmul(&lam.fsub(&self.one.from_int_like(i as i64 - 1)));
            }
            let j = k + i as isize;
            if j >= 0 {
                let c = p.coeff_or_zero(j as usize, &self.one);
                if !c.is_zero() {
                    acc = acc.fadd(&c.fmul(&fall));
                }
            }
        }
        acc
    }

    /// F_{k₀+t} as a polynomial in λ.
    pub fn f_poly(&self, t: usize) -> UPoly<K> {
        let k = self.k0 + t as isize;
        let mut acc = UPoly::zero();
        let mut fall = UPoly::constant(self.one.clone());
        for (i, p) in self.polys.iter().enumerate() {
            if i > 0 {
                let lin = UPoly::from_coeffs(vec![
                    self.one.from_int_like(-(i as i64 - 1)),
                    self.one.clone(),
                ]);
                fall = &fall * &lin;
            }
            let j = k + i as isize;
            if j >= 0 {
                let c = p.coeff_or_zero(j as usize, &self.one);
                acc = &acc + &fall.scale(&c);
            }
        }
        acc
    }

    pub fn indicial(&self) -> UPoly<K> {
        self.f_poly(0)
    }

    /// Regular or regular singular at 0.
    pub fn is_regular_singular(&self) -> bool {
        self.indicial().degree() == Some(self.order())
    }
}

/// Roots e₁, e₂ of an order-2 indicial polynomial with e₂ − e₁ = Δ ≥ 0.
#[derive(Clone, Debug, PartialEq)]
pub struct Exponents<K> {
    pub e1: K,
    pub e2: K,
    pub delta: Rat,
}

/// Exponents of λ² + bλ + c (after making monic) when the difference is a
/// rational number.
pub fn exponent_pair<K: Field>(ind: &UPoly<K>) -> Result<Exponents<K>, DiffOpError> {
    if ind.degree() != Some(2) {
        return Err(DiffOpError::Irregular);
    }
    let m = ind.monic();
    let one = m.lc().unwrap().clone();
    let b = m.coeff_or_zero(1, &one);
    let c = m.coeff_or_zero(0, &one);
    let disc = b.fmul(&b).fsub(&c.fmul(&one.from_int_like(4)));
    let d = disc.to_rational().ok_or(DiffOpError::IrrationalExponents)?;
    let delta = rat_sqrt(&d).ok_or(DiffOpError::IrrationalExponents)?;
    let dk = one.from_rat_like(&delta).unwrap();
    let half = one.from_rat_like(&crate::arith::rat(1, 2)).unwrap();
    let e1 = b.fneg().fsub(&dk).fmul(&half);
    let e2 = b.fneg().fadd(&dk).fmul(&half);
    Ok(Exponents { e1, e2, delta })
}

/// Exponents of an order-2 operator at a place.
pub fn indicial_exponents(l: &QOp, p: &Place) -> Result<Exponents<Rat>, DiffOpError> {
    let local = LocalOp::new(&move_point_to_zero(l, p)?);
    if !local.is_regular_singular() {
        return Err(DiffOpError::Irregular);
    }
    exponent_pair(&local.indicial())
}

/// Exponents at an algebraic place, in Q[z]/(m).
pub fn indicial_exponents_algebraic(l: &QOp, m: &UPoly<Rat>) -> Result<Exponents<NfElem>, DiffOpError> {
    let local = LocalOp::new(&move_algebraic_to_zero(l, m));
    if !local.is_regular_singular() {
        return Err(DiffOpError::Irregular);
    }
    exponent_pair(&local.indicial())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;
    use crate::testutil::*;

    #[test]
    fn singular_places_of_rational_example() {
        let s = singularities(&rational_pullback_op());
        assert_eq!(s.len(), 4);
        for p in [rint(0), rint(1), rint(-1)] {
            assert!(s.contains(&Place::Rational(p)));
        }
        assert!(s.contains(&Place::Infinity));
    }

    #[test]
    fn d_squared_is_singular_only_at_infinity() {
        let d2 = QOp::new(vec![rf(&[0], &[1]), rf(&[0], &[1]), rf(&[1], &[1])]);
        assert_eq!(singularities(&d2), vec![Place::Infinity]);
    }

    #[test]
    fn singular_places_with_cubic_factor() {
        let s = singularities(&gauge_op());
        assert!(s.contains(&Place::Rational(rat(1, 4))));
        assert!(s.contains(&Place::Rational(rat(-1, 4))));
        assert!(s.contains(&Place::Rational(rint(0))));
        assert!(s.contains(&Place::Algebraic(poly(&[1, 5, 24, 16]).monic())));
        assert!(s.contains(&Place::Infinity));
        assert_eq!(s.len(), 5);
    }

    #[test]
    fn exponents_at_zero_and_infinity() {
        let e = indicial_exponents(&rational_pullback_op(), &Place::Rational(rint(0))).unwrap();
        assert_eq!((e.e1, e.e2), (rint(0), rat(1, 3)));
        let e = indicial_exponents(&gauss_op(), &Place::Infinity).unwrap();
        assert_eq!((e.e1, e.e2), (rat(5, 42), rat(11, 42)));
        let e = indicial_exponents(&gauss_op(), &Place::Rational(rint(2))).unwrap();
        assert_eq!((e.e1, e.e2, e.delta), (rint(0), rint(1), rint(1)));
    }

    #[test]
    fn exponents_at_cubic_roots() {
        let e = indicial_exponents_algebraic(&gauge_op(), &poly(&[1, 5, 24, 16])).unwrap();
        assert_eq!(e.delta, rint(2));
        assert_eq!(e.e1.as_rational(), Some(rint(0)));
    }

    #[test]
    fn exponents_at_quadratic_roots() {
        let e = indicial_exponents_algebraic(&algebraic_pullback_op(), &poly(&[1, -34, 1])).unwrap();
        assert_eq!(e.delta, rat(1, 2));
    }

    #[test]
    fn shifting_moves_singularities() {
        let l = move_point_to_zero(&rational_pullback_op(), &Place::Rational(rint(1))).unwrap();
        let s = singularities(&l);
        for p in [rint(0), rint(-1), rint(-2)] {
            assert!(s.contains(&Place::Rational(p)));
        }
        let d2 = QOp::new(vec![rf(&[0], &[1]), rf(&[0], &[1]), rf(&[1], &[1])]);
        let m = move_point_to_zero(&d2, &Place::Infinity).unwrap();
        assert!(singularities(&m).contains(&Place::Rational(rint(0))));
    }

    #[test]
    fn airy_is_irregular_at_infinity() {
        let airy = QOp::new(vec![rf(&[0, -1], &[1]), rf(&[0], &[1]), rf(&[1], &[1])]);
        assert!(indicial_exponents(&airy, &Place::Infinity).is_err());
    }
}
