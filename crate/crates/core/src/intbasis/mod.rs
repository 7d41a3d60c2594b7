//! Integral bases of second-order regular singular operators, their
//! normalization at infinity, and the gauge-reduction driver.

mod local;

pub use local::{Element, Frame, Gen, Lift};

use crate::arith::{rint, Field, Rat, RatFun, UPoly};
use crate::diffop::{singularities, DiffOpError, GaugeOperator, Place, QOp};
use crate::frobenius::is_regular_singular;
use crate::quotient::{find_2f1, SolveConfig, SolveError, SolveReport};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum IntBasisError {
    #[error("series precision exhausted")]
    Precision,
    #[error("exponents are not rational")]
    IrrationalExponents,
    #[error("operator must be order 2 and regular singular")]
    NotRegularSingular,
    #[error(transparent)]
    DiffOp(#[from] DiffOpError),
}

const START_PREC: usize = 16;
const MAX_PREC: usize = 256;
const MAX_STEPS: usize = 200;

/// Two operators b₀ + b₁∂ generating the integral elements as a Q[x]-module.
#[derive(Clone, Debug, PartialEq)]
pub struct IntegralBasis {
    pub elements: [Element; 2],
    pub normalized: bool,
}

/// Pole orders at infinity of Bᵢ(Yⱼ).
#[derive(Clone, Debug, PartialEq)]
pub struct PoleProfile {
    pub orders: [[Rat; 2]; 2],
    pub m: Rat,
    pub location: (usize, usize),
    pub n: Rat,
}

impl PoleProfile {
    fn from_orders(orders: [[Rat; 2]; 2]) -> Self {
        let mut location = (0, 0);
        for i in 0..2 {
            for j in 0..2 {
                if orders[i][j] > orders[location.0][location.1] {
                    location = (i, j);
                }
            }
        }
        let m = orders[location.0][location.1].clone();
        let n = orders[1 - location.0][location.1].clone();
        PoleProfile { orders, m, location, n }
    }

    pub fn total(&self) -> Rat {
        self.orders.iter().flatten().sum()
    }

    /// No entry grew and at least one shrank.
    fn improves_on(&self, old: &PoleProfile) -> bool {
        let pairs = || self.orders.iter().flatten().zip(old.orders.iter().flatten());
        pairs().all(|(a, b)| a <= b) && pairs().any(|(a, b)| a < b)
    }
}

fn prf(p: UPoly<Rat>) -> RatFun<Rat> {
    RatFun::from_poly(p, &rint(1))
}

fn scaled(b: &Element, s: &RatFun<Rat>) -> Element {
    GaugeOperator::new(b.r0.fmul(s), b.r1.fmul(s))
}

fn combined(a: &Element, b: &Element, s: &RatFun<Rat>) -> Element {
    GaugeOperator::new(a.r0.fadd(&b.r0.fmul(s)), a.r1.fadd(&b.r1.fmul(s)))
}

/// The local parameter as a polynomial: x − a, or the minimal polynomial.
fn local_poly(p: &Place) -> UPoly<Rat> {
    match p {
        Place::Rational(a) => UPoly::from_coeffs(vec![-a.clone(), rint(1)]),
        Place::Algebraic(m) => m.monic(),
        Place::Infinity => unreachable!("infinity has no local polynomial"),
    }
}

/// Make both elements integral at the place, then enlarge the module there
/// until no combination divided by t_p stays integral.
fn maximize<K: Lift>(frame: &Frame<K>, tp: &UPoly<Rat>, basis: &mut [Element; 2]) -> Result<(), IntBasisError> {
    let t = prf(tp.clone());
    for b in basis.iter_mut() {
        let v = frame.min_valuation(b);
        if v < rint(0) {
            let k: u32 = (-v).ceil().to_integer().try_into().unwrap();
            *b = scaled(b, &prf(tp.pow(k as usize)));
        }
    }
    let tinv = t.finv().unwrap();
    for _ in 0..MAX_STEPS {
        let Some(c) = frame.improvement(basis)? else {
            return Ok(());
        };
        let i = if c[1].is_zero() { 0 } else { 1 };
        let ci = c[i].finv().unwrap();
        let other = prf(c[1 - i].fmul(&ci).lift().rem(tp));
        basis[i] = scaled(&combined(&basis[i], &basis[1 - i], &other), &tinv);
    }
    Err(IntBasisError::Precision)
}

fn maximize_at(l: &QOp, p: &Place, basis: &mut [Element; 2]) -> Result<(), IntBasisError> {
    let tp = local_poly(p);
    let mut a = START_PREC;
    loop {
        let res = match p {
            Place::Algebraic(m) => maximize(&Frame::algebraic(l, m, a)?, &tp, basis),
            _ => maximize(&Frame::rational(l, p, a)?, &tp, basis),
        };
        match res {
            Err(IntBasisError::Precision) if a < MAX_PREC => a *= 2,
            r => return r,
        }
    }
}

fn check_input(l: &QOp) -> Result<(), IntBasisError> {
    if l.order() != 2 || !is_regular_singular(l) {
        return Err(IntBasisError::NotRegularSingular);
    }
    Ok(())
}

fn unit_basis() -> [Element; 2] {
    [
        GaugeOperator::new(RatFun::from_ints(&[1], &[1]), RatFun::from_ints(&[0], &[1])),
        GaugeOperator::new(RatFun::from_ints(&[0], &[1]), RatFun::from_ints(&[1], &[1])),
    ]
}

/// A basis integral and maximal at the finite place `p`, starting from
/// [1, ∂].
pub fn local_integral_basis(l: &QOp, p: &Place) -> Result<[Element; 2], IntBasisError> {
    check_input(l)?;
    let mut basis = unit_basis();
    maximize_at(l, p, &mut basis)?;
    Ok(basis)
}

/// Integral basis over Q[x]. Corrections at one place only involve powers
/// of its local polynomial, which are units at every other place.
pub fn global_integral_basis(l: &QOp) -> Result<IntegralBasis, IntBasisError> {
    check_input(l)?;
    let mut basis = unit_basis();
    for p in singularities(l) {
        if p != Place::Infinity {
            maximize_at(l, &p, &mut basis)?;
        }
    }
    Ok(IntegralBasis {
        elements: basis,
        normalized: false,
    })
}

/// Re(v_p(Bᵢ(y))) ≥ 0 at every finite singular place.
pub fn is_integral(l: &QOp, basis: &[Element; 2]) -> Result<bool, IntBasisError> {
    for p in singularities(l) {
        let ok = match &p {
            Place::Infinity => continue,
            Place::Algebraic(m) => check_frame(&Frame::algebraic(l, m, 2 * START_PREC)?, basis)?,
            _ => check_frame(&Frame::rational(l, &p, 2 * START_PREC)?, basis)?,
        };
        if !ok {
            return Ok(false);
        }
    }
    Ok(true)
}

fn check_frame<K: Field>(frame: &Frame<K>, basis: &[Element; 2]) -> Result<bool, IntBasisError> {
    for b in basis {
        if frame.min_valuation(b) < rint(0) {
            return Ok(false);
        }
    }
    Ok(true)
}

fn profile(frame: &Frame<Rat>, basis: &[Element; 2]) -> Result<PoleProfile, IntBasisError> {
    let o = |i: usize, j: usize| -frame.apply(&basis[i], j).valuation();
    Ok(PoleProfile::from_orders([[o(0, 0), o(0, 1)], [o(1, 0), o(1, 1)]]))
}

/// Pole orders at infinity of the basis applied to the local solutions there.
pub fn pole_profile(l: &QOp, basis: &[Element; 2]) -> Result<PoleProfile, IntBasisError> {
    profile(&Frame::rational(l, &Place::Infinity, 2 * START_PREC)?, basis)
}

/// The constant C making Bᵢ(Yⱼ) − C·x^{m−n}·B_k(Yⱼ) lose its top term.
fn cancelling_constant(frame: &Frame<Rat>, bi: &Element, bk: &Element, j: usize) -> Result<Option<Rat>, IntBasisError> {
    let (Some(a), Some(b)) = (frame.apply(bi, j).leading(), frame.apply(bk, j).leading()) else {
        return Ok(None);
    };
    let p = if b[0].is_zero() { 1 } else { 0 };
    let c = a[p].fdiv(&b[p]).unwrap();
    Ok((a[1 - p] == c.fmul(&b[1 - p])).then_some(c))
}

fn normalize_with(
    frame: &Frame<Rat>,
    mut basis: [Element; 2],
    totals: &mut Vec<Rat>,
) -> Result<[Element; 2], IntBasisError> {
    totals.clear();
    for _ in 0..MAX_STEPS {
        let prof = profile(frame, &basis)?;
        totals.push(prof.total());
        let mut spots: Vec<(usize, usize)> = (0..2)
            .flat_map(|i| (0..2).map(move |j| (i, j)))
            .filter(|&(i, j)| prof.orders[i][j] == prof.m)
            .collect();
        spots.sort_by_key(|&ij| ij != prof.location);
        let mut next = None;
        for (i, j) in spots {
            let k = 1 - i;
            let e = &prof.m - &prof.orders[k][j];
            if !e.is_integer() {
                continue;
            }
            let Some(c) = cancelling_constant(frame, &basis[i], &basis[k], j)? else {
                continue;
            };
            let e: usize = e.to_integer().try_into().unwrap();
            let s = prf(UPoly::monomial(-c, e));
            let mut cand = basis.clone();
            cand[i] = combined(&basis[i], &basis[k], &s);
            if profile(frame, &cand)?.improves_on(&prof) {
                next = Some(cand);
                break;
            }
        }
        match next {
            Some(b) => basis = b,
            None => return Ok(basis),
        }
    }
    Ok(basis)
}

/// Lower the pole orders at infinity by unimodular updates
/// Bᵢ ← Bᵢ − C·x^{m−n}·B_k until no update is an improvement.
pub fn normalize_at_infinity(l: &QOp, basis: &IntegralBasis) -> Result<IntegralBasis, IntBasisError> {
    normalize_traced(l, basis).map(|(b, _)| b)
}

/// [`normalize_at_infinity`] with the pole-order total before each step.
pub fn normalize_traced(l: &QOp, basis: &IntegralBasis) -> Result<(IntegralBasis, Vec<Rat>), IntBasisError> {
    let mut a = 2 * START_PREC;
    let mut totals = Vec::new();
    loop {
        let frame = Frame::rational(l, &Place::Infinity, a)?;
        match normalize_with(&frame, basis.elements.clone(), &mut totals) {
            Ok(elements) => {
                let b = IntegralBasis {
                    elements,
                    normalized: true,
                };
                return Ok((b, totals));
            }
            Err(IntBasisError::Precision) if a < MAX_PREC => a *= 2,
            Err(e) => return Err(e),
        }
    }
}

/// Solutions as a gauge image of a pulled-back Gauss function: first
/// directly, then after gauge transforming by each element of the
/// normalized integral basis.
pub fn hypergeometricsols(l: &QOp, cfg: &SolveConfig) -> Result<SolveReport, SolveError> {
    let mut report = find_2f1(l, cfg)?;
    if !report.solutions.is_empty() {
        return Ok(report);
    }
    let gauged = gauge_search(l, cfg)?;
    report.diagnostics.extend(gauged.diagnostics);
    report.solutions = gauged.solutions;
    Ok(report)
}

/// Solutions through a gauge transformation by an integral basis element.
pub fn gauge_search(l: &QOp, cfg: &SolveConfig) -> Result<SolveReport, SolveError> {
    if l.order() != 2 {
        return Err(SolveError::NotOrderTwo);
    }
    if !is_regular_singular(l) {
        return Err(SolveError::NotRegularSingular);
    }
    let mut report = SolveReport::default();
    let basis = match global_integral_basis(l).and_then(|b| normalize_at_infinity(l, &b)) {
        Ok(b) => b,
        Err(e) => {
            report.diagnostics.push(format!("integral basis: {e}"));
            return Ok(report);
        }
    };
    // smallest poles at infinity first
    let order: Vec<usize> = match pole_profile(l, &basis.elements) {
        Ok(p) => {
            let key = |i: usize| p.orders[i].iter().max().cloned().unwrap();
            let mut o = vec![0, 1];
            o.sort_by_key(|&i| key(i));
            o
        }
        Err(_) => vec![0, 1],
    };
    for k in order {
        let g = &basis.elements[k];
        let lt = match l.gauge_transform(g) {
            Ok(lt) => lt,
            Err(e) => {
                report.diagnostics.push(format!("gauge by B{k}: {e}"));
                continue;
            }
        };
        let sub = find_2f1(&lt, cfg)?;
        report.diagnostics.extend(sub.diagnostics.into_iter().map(|d| format!("B{k}: {d}")));
        if sub.solutions.is_empty() {
            continue;
        }
        let h = match l.inverse_gauge(g) {
            Ok(h) => h,
            Err(e) => {
                report.diagnostics.push(format!("inverse gauge of B{k}: {e}"));
                continue;
            }
        };
        report.solutions = sub
            .solutions
            .into_iter()
            .map(|mut s| {
                s.gauge = Some(h.clone());
                s
            })
            .collect();
        return Ok(report);
    }
    report.diagnostics.push("no basis element gave a gauge transformation".into());
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::*;

    fn el(r0: RatFun<Rat>, r1: RatFun<Rat>) -> Element {
        GaugeOperator::new(r0, r1)
    }

    fn op(c: Vec<RatFun<Rat>>) -> QOp {
        QOp::new(c)
    }

    fn zero() -> RatFun<Rat> {
        rf(&[0], &[1])
    }

    /// Polynomial 2×2 T with `to` = T·`from`, if it exists.
    fn transition(from: &[Element; 2], to: &[Element; 2]) -> Option<[[RatFun<Rat>; 2]; 2]> {
        let det = from[0].r0.fmul(&from[1].r1).fsub(&from[0].r1.fmul(&from[1].r0));
        let mut t: Vec<[RatFun<Rat>; 2]> = Vec::new();
        for g in to {
            // g = a·from₀ + b·from₁
            let a = g.r0.fmul(&from[1].r1).fsub(&g.r1.fmul(&from[1].r0)).fdiv(&det)?;
            let b = from[0].r0.fmul(&g.r1).fsub(&from[0].r1.fmul(&g.r0)).fdiv(&det)?;
            t.push([a, b]);
        }
        Some([t[0].clone(), t[1].clone()])
    }

    fn unimodular(t: &[[RatFun<Rat>; 2]; 2]) -> bool {
        let det = t[0][0].fmul(&t[1][1]).fsub(&t[0][1].fmul(&t[1][0]));
        t.iter().flatten().all(|e| e.is_polynomial()) && det.is_constant() && !det.is_zero()
    }

    fn same_module(a: &[Element; 2], b: &[Element; 2]) -> bool {
        transition(a, b).is_some_and(|t| unimodular(&t))
    }

    #[test]
    fn log_point_needs_x_times_d() {
        // x∂² + ∂: solutions 1, log x
        let l = op(vec![zero(), rf(&[1], &[0, 1]), rf(&[1], &[1])]);
        let b = local_integral_basis(&l, &Place::Rational(rint(0))).unwrap();
        let want = [el(rf(&[1], &[1]), zero()), el(zero(), rf(&[0, 1], &[1]))];
        assert!(same_module(&b, &want));
    }

    #[test]
    fn regular_point_keeps_unit_basis() {
        let l = op(vec![zero(), zero(), rf(&[1], &[1])]);
        let b = local_integral_basis(&l, &Place::Rational(rint(3))).unwrap();
        assert!(same_module(&b, &unit_basis()));
    }

    #[test]
    fn half_integer_exponents() {
        // exponents {0, 1/2}: ∂ drops to x^{−1/2}
        let l = op(vec![zero(), RatFun::new(poly(&[1]), poly(&[0, 2])), rf(&[1], &[1])]);
        let b = local_integral_basis(&l, &Place::Rational(rint(0))).unwrap();
        assert!(same_module(&b, &[el(rf(&[1], &[1]), zero()), el(zero(), rf(&[0, 1], &[1]))]));
        // exponents {0, 5/2}: ∂/x is still integral
        let l = op(vec![zero(), RatFun::new(poly(&[-3]), poly(&[0, 2])), rf(&[1], &[1])]);
        let b = local_integral_basis(&l, &Place::Rational(rint(0))).unwrap();
        assert!(same_module(&b, &[el(rf(&[1], &[1]), zero()), el(zero(), rf(&[1], &[0, 1]))]));
    }

    #[test]
    fn twist_of_d2_is_undone() {
        // solutions x^{-3/2}·{1, x}: the basis must carry x^{3/2}-worth of zeros
        let l = op(vec![zero(), zero(), rf(&[1], &[1])]).exp_product(&rf(&[-3], &[0, 2]));
        let g = global_integral_basis(&l).unwrap();
        assert!(is_integral(&l, &g.elements).unwrap());
        assert!(!is_integral(&l, &unit_basis()).unwrap());
    }

    fn reference_basis() -> [Element; 2] {
        let cx = poly(&[0, 1, 5, 24, 16]);
        let b0 = el(
            RatFun::new(poly(&[-2147483648, -10737418241, -51539607556, -34359738400]), cx.clone()),
            RatFun::new(poly(&[0, 0, -1, 0, 16]), cx.clone()),
        );
        let (r0, r1) = gauge_b1();
        [b0, el(r0, r1)]
    }

    #[test]
    fn gauge_example_basis() {
        let l = gauge_op();
        let g = global_integral_basis(&l).unwrap();
        assert!(is_integral(&l, &g.elements).unwrap());
        assert!(same_module(&g.elements, &reference_basis()));
        let n = normalize_at_infinity(&l, &g).unwrap();
        assert!(n.normalized);
        assert!(same_module(&n.elements, &g.elements));
        let before = pole_profile(&l, &g.elements).unwrap();
        let after = pole_profile(&l, &n.elements).unwrap();
        assert!(after.total() <= before.total());
        let (r0, r1) = gauge_b1();
        let proportional = n.elements.iter().any(|b| {
            let c = b.r1.fdiv(&r1).unwrap();
            c.is_constant() && b.r0 == r0.fmul(&c)
        });
        assert!(proportional, "{:?}", n.elements);
    }
}
