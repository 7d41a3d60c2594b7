//! The quotient method: pullbacks f from quotients of local solutions,
//! found modulo a prime, lifted, reconstructed and certified exactly.

mod data;
mod lift;
mod sweep;

pub use data::{build_quotients, QuotientData, QuotientMode};
pub use lift::{hensel_step, lift_and_reconstruct, LiftState};
pub use sweep::{sweep_c, thread_count, Relation, SweepHit};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::arith::{factor_over_q, is_integer, rat_sqrt, rint, DiffField, Field, QuadExt, QuadModulus, Rat, RatFun, UPoly};
use crate::candidates::{find_expdiffs, ghdo_from_triple, CandidateTriple, GhdoParams, SingularStructure};
use crate::diffop::{DiffOp, DiffOpError, GaugeOperator, Place, QOp, Substitute};
use crate::frobenius::{classify_all, is_regular_singular};
use crate::series::SeriesError;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum QuotientError {
    #[error("unsupported expansion point")]
    Unsupported,
    #[error("quotient has negative powers")]
    NegativePowers,
    #[error("a denominator vanishes modulo the prime")]
    BadPrime,
    #[error("inconsistent lifting system")]
    Inconsistent,
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    DiffOp(#[from] DiffOpError),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SolveError {
    #[error("operator must have order 2")]
    NotOrderTwo,
    #[error("operator is not regular singular")]
    NotRegularSingular,
    #[error("no rational true singularity to expand at")]
    Unsupported,
    #[error(transparent)]
    DiffOp(#[from] DiffOpError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolveConfig {
    pub prime: u64,
    pub retry_prime: Option<u64>,
    pub afmax: usize,
    pub max_lift_bits: u64,
    pub threads: Option<usize>,
}

impl Default for SolveConfig {
    fn default() -> Self {
        SolveConfig {
            prime: 4099,
            retry_prime: Some(7919),
            afmax: 2,
            max_lift_bits: 2000,
            threads: None,
        }
    }
}

/// Which root of the minimal polynomial is meant: the branch through the
/// expansion point with f = leading·t^valuation + … in the local parameter.
#[derive(Clone, Debug, PartialEq)]
pub struct Branch {
    pub place: Place,
    pub valuation: usize,
    pub leading: Rat,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Pullback {
    Rational(RatFun<Rat>),
    /// a₀ + a₁y + a₂y² with integer coefficients.
    Algebraic { minpoly: [UPoly<Rat>; 3], branch: Branch },
}

#[derive(Clone, Debug, PartialEq)]
pub enum Prefactor {
    Rational(RatFun<Rat>),
    Algebraic(QuadExt),
}

/// Solutions exp(∫r)·₂F₁(a₁, a₂; b₁; f), optionally through a gauge
/// transformation r₀ + r₁∂.
#[derive(Clone, Debug, PartialEq)]
pub struct HypSolution {
    pub params: GhdoParams,
    pub pullback: Pullback,
    pub r: Prefactor,
    pub gauge: Option<GaugeOperator<RatFun<Rat>>>,
    pub certified: bool,
    pub a_f: usize,
    pub d: usize,
}

#[derive(Clone, Debug, Default)]
pub struct SolveReport {
    pub solutions: Vec<HypSolution>,
    pub diagnostics: Vec<String>,
}

/// r with M·(∂ ↦ ∂ − r) = L for monic order-2 M, L.
pub fn recover_r<F: DiffField>(m: &DiffOp<F>, l: &DiffOp<F>) -> Option<F> {
    let (m, l) = (m.monic(), l.monic());
    if m.order() != 2 || l.order() != 2 {
        return None;
    }
    let two = m.coeff(1).from_int_like(2);
    let r = m.coeff(1).fsub(&l.coeff(1)).fdiv(&two)?;
    (m.exp_product(&r) == l).then_some(r)
}

/// The local parameter t as a function of x.
fn parameter_of(p: &Place) -> RatFun<Rat> {
    match p {
        Place::Rational(a) => RatFun::new(UPoly::from_coeffs(vec![-a.clone(), rint(1)]), UPoly::from_ints(&[1])),
        _ => RatFun::from_ints(&[1], &[0, 1]),
    }
}

fn certify_rational(l: &QOp, lb: &QOp, f: &RatFun<Rat>) -> Option<RatFun<Rat>> {
    if f.is_constant() {
        return None;
    }
    let m = lb.change_of_variables(f).ok()?;
    recover_r(&m, &l.monic())
}

/// Scale polynomials to integer coefficients with content 1 and a positive
/// leading coefficient in the last nonzero entry.
fn primitive_polys(ps: &[UPoly<Rat>]) -> Vec<UPoly<Rat>> {
    let mut den = BigInt::one();
    let mut num = BigInt::zero();
    for c in ps.iter().flat_map(|p| p.coeffs()) {
        den = den.lcm(c.denom());
        num = num.gcd(c.numer());
    }
    if num.is_zero() {
        return ps.to_vec();
    }
    // gcd of the numerators over lcm of the denominators is the content
    let mut s = Rat::new(den, num);
    if ps.iter().rev().find_map(|p| p.lc()).is_some_and(|lc| lc.is_negative()) {
        s = -s;
    }
    ps.iter().map(|p| p.scale(&s)).collect()
}

fn is_square_poly(p: &UPoly<Rat>) -> bool {
    let Some(lc) = p.lc() else { return true };
    if factor_over_q(p).iter().any(|(_, m)| m % 2 == 1) {
        return false;
    }
    let content: Rat = factor_over_q(p)
        .iter()
        .fold(lc.clone(), |acc, (f, m)| acc / f.lc().unwrap().pow(*m as i32));
    rat_sqrt(&content).is_some()
}

fn certify_algebraic(l: &QOp, lb: &QOp, rel: &Relation<Rat>, p: &Place) -> Option<([UPoly<Rat>; 3], QuadExt)> {
    if rel.y_degree() != 2 {
        return None;
    }
    let t = parameter_of(p);
    let one = rint(1);
    let parts: Vec<RatFun<Rat>> = rel
        .coeffs
        .iter()
        .map(|c| RatFun::from_poly(UPoly::from_coeffs(c.clone()), &one).compose(&t))
        .collect();
    let mut den = UPoly::from_ints(&[1]);
    for r in &parts {
        let g = den.gcd(r.den());
        den = (&den * r.den()).exact_div(&g);
    }
    let polys: Vec<UPoly<Rat>> = parts
        .iter()
        .map(|r| (r.num() * &den).exact_div(r.den()))
        .collect();
    let polys = primitive_polys(&polys);
    if polys[2].is_zero() {
        return None;
    }
    let disc = &(&polys[1] * &polys[1]) - &(&(&polys[0] * &polys[2]) * &UPoly::from_ints(&[4]));
    if is_square_poly(&disc) {
        return None;
    }
    let minpoly = [polys[0].clone(), polys[1].clone(), polys[2].clone()];
    let modulus = QuadModulus::from_poly_coeffs(&minpoly)?;
    let f = QuadExt::generator(modulus);
    let m = lb.change_of_variables(&f).ok()?;
    let r = recover_r(&m, &l.lift_to(&f))?;
    Some((minpoly, r))
}

/// Rational true singularities, non-integer exponent differences first,
/// then by height.
fn expansion_points(s: &SingularStructure) -> Vec<(Place, Rat, bool)> {
    let mut pts: Vec<(Place, Rat, bool)> = s
        .true_points
        .iter()
        .filter(|p| !p.place.is_algebraic())
        .map(|p| (p.place.clone(), p.delta.clone(), p.logarithmic))
        .collect();
    let key = |p: &(Place, Rat, bool)| {
        let (h, inf, a) = match &p.0 {
            Place::Rational(a) => (a.numer().abs().max(a.denom().clone()), false, a.clone()),
            _ => (BigInt::one(), true, rint(0)),
        };
        (p.2 || is_integer(&p.1), h, inf, a.abs(), a)
    };
    pts.sort_by_key(key);
    pts
}

/// The aligned slot first, then integer slots, then the rest descending.
fn aligned(alphas: &[Rat; 3], idx: usize) -> [Rat; 3] {
    let mut rest: Vec<Rat> = (0..3).filter(|&i| i != idx).map(|i| alphas[i].clone()).collect();
    rest.sort_by(|x, y| is_integer(y).cmp(&is_integer(x)).then(y.cmp(x)));
    [alphas[idx].clone(), rest[0].clone(), rest[1].clone()]
}

/// (slot index, mode, candidate valuations) for a point against a triple.
fn alignments(t: &CandidateTriple, delta: &Rat, log: bool) -> Vec<(usize, QuotientMode, Vec<usize>)> {
    let mut out = Vec::new();
    let mut seen: Vec<&Rat> = Vec::new();
    for (i, a) in t.alphas.iter().enumerate() {
        if seen.contains(&a) {
            continue;
        }
        seen.push(a);
        if log {
            if Zero::is_zero(delta) && Zero::is_zero(a) {
                out.push((i, QuotientMode::Log, (1..=t.d).collect()));
            }
        } else if !Zero::is_zero(a) && !is_integer(a) {
            let v = delta / a;
            if is_integer(&v) && v >= rint(1) && v <= rint(t.d as i64) {
                let v = crate::arith::rat_to_i64(&v).unwrap() as usize;
                out.push((i, QuotientMode::NonLog, vec![v]));
            }
        }
    }
    out
}

enum Outcome {
    Found(Box<HypSolution>),
    /// Every alignment swept cleanly without a single hit.
    Rejected,
    Inconclusive,
}

struct Attempt<'a> {
    l: &'a QOp,
    cfg: &'a SolveConfig,
    diag: &'a mut Vec<String>,
}

impl Attempt<'_> {
    fn run(&mut self, t: &CandidateTriple, place: &Place, delta: &Rat, log: bool) -> Outcome {
        if log && !Zero::is_zero(delta) {
            self.diag.push(format!("{place}: logarithmic quotient with negative powers"));
            return Outcome::Inconclusive;
        }
        let aligns = alignments(t, delta, log);
        let mut clean = !aligns.is_empty();
        for (idx, mode, vs) in aligns {
            let triple = aligned(&t.alphas, idx);
            let Some(params) = ghdo_from_triple(&triple).into_iter().next() else {
                clean = false;
                continue;
            };
            let lb = params.operator();
            let a = 2 * (t.a_f + 1) * (t.d + 1) + 6;
            let qd = match build_quotients(self.l, &lb, place, a, mode) {
                Ok(q) => q,
                Err(e) => {
                    self.diag.push(format!("{place}: {e}"));
                    clean = false;
                    continue;
                }
            };
            let primes: Vec<u64> = std::iter::once(self.cfg.prime).chain(self.cfg.retry_prime).collect();
            for ell in primes {
                let mut any_hit = false;
                let mut bad = false;
                for &v in &vs {
                    let hits = match sweep_c(&qd, ell, t.d, t.a_f, v, self.cfg.threads) {
                        Ok(h) => h,
                        Err(e) => {
                            self.diag.push(format!("prime {ell}: {e}"));
                            bad = true;
                            break;
                        }
                    };
                    any_hit |= !hits.is_empty();
                    for hit in &hits {
                        let found = lift_and_reconstruct(&qd, v, ell, hit, self.cfg.max_lift_bits, |c, rel| {
                            self.certify(t, &params, &lb, place, v, c, rel)
                        });
                        match found {
                            Ok(Some(s)) => return Outcome::Found(Box::new(s)),
                            Ok(None) => {}
                            Err(e) => self.diag.push(format!("lift at prime {ell}: {e}")),
                        }
                    }
                }
                clean &= !any_hit && !bad;
                if any_hit && !bad {
                    break;
                }
            }
        }
        if clean {
            Outcome::Rejected
        } else {
            Outcome::Inconclusive
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn certify(
        &self,
        t: &CandidateTriple,
        params: &GhdoParams,
        lb: &QOp,
        place: &Place,
        v: usize,
        c: &Rat,
        rel: &Relation<Rat>,
    ) -> Option<HypSolution> {
        let tpar = parameter_of(place);
        let (pullback, r) = if t.a_f == 1 {
            let one = rint(1);
            let a = RatFun::from_poly(UPoly::from_coeffs(rel.coeffs[0].clone()), &one);
            let b = RatFun::from_poly(UPoly::from_coeffs(rel.coeffs[1].clone()), &one).fneg();
            let f = a.fdiv(&b)?.compose(&tpar);
            let r = certify_rational(self.l, lb, &f)?;
            (Pullback::Rational(f), Prefactor::Rational(r))
        } else {
            let (minpoly, r) = certify_algebraic(self.l, lb, rel, place)?;
            let branch = Branch {
                place: place.clone(),
                valuation: v,
                leading: c.clone(),
            };
            (Pullback::Algebraic { minpoly, branch }, Prefactor::Algebraic(r))
        };
        Some(HypSolution {
            params: params.clone(),
            pullback,
            r,
            gauge: None,
            certified: true,
            a_f: t.a_f,
            d: t.d,
        })
    }
}

/// Exact re-certification: the parameters, pullback, prefactor and gauge
/// of `s` reproduce `l`.
pub fn verify_solution(l: &QOp, s: &HypSolution) -> bool {
    let lb = s.params.operator();
    match (&s.pullback, &s.r) {
        (Pullback::Rational(f), Prefactor::Rational(r)) => {
            if f.is_constant() {
                return false;
            }
            let Ok(m) = lb.change_of_variables(f) else { return false };
            let m = m.exp_product(r);
            match &s.gauge {
                None => m.monic() == l.monic(),
                Some(h) => m.gauge_transform(h).is_ok_and(|t| t.same_up_to_factor(l)),
            }
        }
        (Pullback::Algebraic { minpoly, .. }, Prefactor::Algebraic(r)) => {
            let Some(modulus) = QuadModulus::from_poly_coeffs(minpoly) else { return false };
            let f = QuadExt::generator(modulus.clone());
            let r = QuadExt::new(r.c0.clone(), r.c1.clone(), modulus);
            let Ok(m) = lb.change_of_variables(&f) else { return false };
            let m = m.exp_product(&r);
            let lf = l.lift_to(&f);
            match &s.gauge {
                None => m.monic() == lf.monic(),
                Some(h) => {
                    let h = GaugeOperator::new(f.lift(&h.r0), f.lift(&h.r1));
                    m.gauge_transform(&h).is_ok_and(|t| t.same_up_to_factor(&lf))
                }
            }
        }
        _ => false,
    }
}

/// Search for solutions exp(∫r)·₂F₁(a₁, a₂; b₁; f) with f of algebraic
/// degree at most `cfg.afmax`.
pub fn find_2f1(l: &QOp, cfg: &SolveConfig) -> Result<SolveReport, SolveError> {
    if l.order() != 2 {
        return Err(SolveError::NotOrderTwo);
    }
    if !is_regular_singular(l) {
        return Err(SolveError::NotRegularSingular);
    }
    let structure = SingularStructure::from_classes(&classify_all(l)?);
    let points = expansion_points(&structure);
    if points.is_empty() {
        return Err(SolveError::Unsupported);
    }
    let mut report = SolveReport::default();
    for a_f in 1..=cfg.afmax {
        let cands = match find_expdiffs(&structure, a_f) {
            Ok(c) => c,
            Err(e) => {
                report.diagnostics.push(e.to_string());
                return Ok(report);
            }
        };
        report.diagnostics.push(format!("a_f = {a_f}: {} candidates", cands.len()));
        let mut attempt = Attempt {
            l,
            cfg,
            diag: &mut report.diagnostics,
        };
        let mut found = None;
        'cands: for t in &cands {
            for (place, delta, log) in &points {
                match attempt.run(t, place, delta, *log) {
                    Outcome::Found(s) => {
                        found = Some(*s);
                        break 'cands;
                    }
                    // a correct candidate always leaves a hit at a usable point
                    Outcome::Rejected => continue 'cands,
                    Outcome::Inconclusive => {}
                }
            }
        }
        if let Some(s) = found {
            report.solutions.push(s);
            return Ok(report);
        }
    }
    Ok(report)
}


#[cfg(test)]
mod lift_tests {
    use super::*;
    use crate::arith::{rat, rint, Fp, Rat};
    use num_bigint::BigInt;
    use num_integer::Integer;
    use crate::series::PowerSeries;
    use crate::testutil::*;

    fn fp_row(r: &[Fp]) -> Vec<u64> {
        r.iter().map(|v| v.value()).collect()
    }

    fn ex11_quotients(params: GhdoParams) -> QuotientData {
        build_quotients(&rational_pullback_op(), &params.operator(), &Place::Rational(rint(0)), 18, QuotientMode::NonLog).unwrap()
    }

    #[test]
    fn sweep_accepts_only_the_leading_coefficient() {
        let qd = ex11_quotients(GhdoParams::new(rat(5, 42), rat(11, 42), rat(2, 3)));
        assert_eq!(qd.forced_valuation(), Some(1));
        let hits = sweep_c(&qd, 4099, 2, 1, 1, None).unwrap();
        assert_eq!(hits.iter().map(|h| h.c0).collect::<Vec<_>>(), vec![4]);
        let rel = &hits[0].relation;
        assert_eq!(fp_row(&rel.coeffs[0]), vec![0, 4, 0]);
        assert_eq!(fp_row(&rel.coeffs[1]), vec![4098, 4097, 4098]);
    }

    #[test]
    fn wrong_candidate_sweeps_empty() {
        let qd = ex11_quotients(GhdoParams::new(rat(1, 5), rat(1, 5), rat(2, 3)));
        assert!(sweep_c(&qd, 4099, 2, 1, 1, None).unwrap().is_empty());
    }

    #[test]
    fn self_quotient_is_identity_at_level_one() {
        let l = gauss_op();
        let qd = build_quotients(&l, &l, &Place::Rational(rint(0)), 12, QuotientMode::NonLog).unwrap();
        let hits = sweep_c(&qd, 4099, 1, 1, 1, None).unwrap();
        assert_eq!(hits.len(), 1);
        assert_eq!(hits[0].c0, 1);
        let (c, rel) = LiftState::from_hit(4099, &hits[0]).reconstruct().unwrap();
        assert_eq!(c, rint(1));
        assert_eq!(rel.coeffs, vec![vec![rint(0), rint(1)], vec![rint(-1), rint(0)]]);
    }

    fn geometric(r: Rat, n: usize) -> Vec<Rat> {
        let mut out = vec![rint(1)];
        for _ in 1..n {
            let last = out.last().unwrap() * &r;
            out.push(last);
        }
        out
    }

    /// u = (1+x)⁻² and U = (1+x/3)/(1+2x/3)², so that f = W(C·Y) is
    /// x/(x+3) exactly when C = 1/3.
    fn synthetic() -> QuotientData {
        let one = rint(1);
        let n = 5;
        let ser = |mut c: Vec<Rat>| {
            c.resize(n, rint(0));
            PowerSeries::new(c, &one)
        };
        let sq = |s: PowerSeries<Rat>| s.mul(&s);
        let base = ser(vec![rint(1)]).div(&sq(ser(vec![rint(1), rint(1)]))).unwrap();
        let input = ser(vec![rint(1), rat(1, 3)])
            .div(&sq(ser(vec![rint(1), rat(2, 3)])))
            .unwrap();
        QuotientData {
            mode: QuotientMode::NonLog,
            alpha: rint(1),
            delta: rint(1),
            base,
            input,
            prec: n,
        }
    }

    #[test]
    fn hensel_step_matches_direct_computation() {
        let qd = synthetic();
        let hits = sweep_c(&qd, 5, 1, 1, 1, None).unwrap();
        assert_eq!(hits.len(), 1);
        assert_eq!(hits[0].c0, 2);
        let s1 = LiftState::from_hit(5, &hits[0]);
        let s2 = hensel_step(&s1, &qd, 1).unwrap();
        let m = BigInt::from(25);
        let red = |v: &BigInt| v.mod_floor(&m);
        assert_eq!(red(&s2.c), BigInt::from(17));
        let rows: Vec<Vec<BigInt>> = s2.relation.coeffs.iter().map(|r| r.iter().map(red).collect()).collect();
        let b = |v: i64| BigInt::from(v);
        assert_eq!(rows, vec![vec![b(0), b(17)], vec![b(24), b(8)]]);
        let s3 = hensel_step(&s2, &qd, 1).unwrap();
        let (c, rel) = s3.reconstruct().unwrap();
        assert_eq!(c, rat(1, 3));
        assert_eq!(rel.coeffs, vec![vec![rint(0), rat(1, 3)], vec![rint(-1), rat(-1, 3)]]);
    }

    #[test]
    fn exact_relation_is_stationary() {
        let one = rint(1);
        let qd = QuotientData {
            mode: QuotientMode::NonLog,
            alpha: rint(1),
            delta: rint(1),
            base: PowerSeries::one(6, &one),
            input: PowerSeries::new(geometric(rint(-1), 6), &one),
            prec: 6,
        };
        let hits = sweep_c(&qd, 7, 1, 1, 1, None).unwrap();
        let s1 = LiftState::from_hit(7, &hits[0]);
        let s2 = hensel_step(&s1, &qd, 1).unwrap();
        assert_eq!(s1.c, s2.c);
        assert_eq!(s1.relation, s2.relation);
    }

    #[test]
    fn recover_r_cases() {
        let l = rational_pullback_op();
        assert_eq!(recover_r(&l, &l), Some(rf(&[0], &[1])));
        let f = rf(&[0, 4], &[1, 2, 1]);
        let lb = GhdoParams::new(rat(5, 42), rat(11, 42), rat(2, 3)).operator();
        let m = lb.change_of_variables(&f).unwrap();
        assert_eq!(recover_r(&m, &l), Some(RatFun::new(poly(&[-5]), poly(&[21, 21]))));
        let wrong = lb.change_of_variables(&rf(&[0, 5], &[1, 2, 1])).unwrap();
        assert_eq!(recover_r(&wrong, &l), None);
    }
}
