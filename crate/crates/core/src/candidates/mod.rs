//! Candidate Gauss operators and pullback degrees.

mod search;

use std::collections::BTreeSet;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::arith::{is_integer, rat_to_i64, rint, Rat, RatFun, UPoly};
use crate::diffop::{Place, QOp};
use crate::frobenius::{SingClass, SingKind};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CandidateError {
    #[error("fewer than three true singularities ({0})")]
    TooFewTrueSingularities(usize),
    #[error("exponent data too large for candidate enumeration")]
    TooLarge,
}

/// A singular place with its exponent difference.
#[derive(Clone, Debug, PartialEq)]
pub struct SingularPoint {
    pub place: Place,
    pub delta: Rat,
    pub logarithmic: bool,
}

impl SingularPoint {
    /// Number of geometric points in the place.
    pub fn weight(&self) -> usize {
        self.place.degree()
    }
}

/// Exponent-difference data of an input operator.
#[derive(Clone, Debug, PartialEq)]
pub struct SingularStructure {
    pub true_points: Vec<SingularPoint>,
    pub removable: Vec<SingularPoint>,
    pub n_true: usize,
    pub covol: Rat,
}

impl SingularStructure {
    pub fn from_classes(classes: &[SingClass]) -> Self {
        let mut true_points = Vec::new();
        let mut removable = Vec::new();
        let mut deltas = Vec::new();
        for c in classes {
            let p = SingularPoint {
                place: c.place.clone(),
                delta: c.delta.clone(),
                logarithmic: c.kind == SingKind::TrueLog,
            };
            deltas.push((c.delta.clone(), p.weight()));
            match c.kind {
                SingKind::TrueLog | SingKind::TrueNonLog => true_points.push(p),
                SingKind::Removable => removable.push(p),
                SingKind::False | SingKind::Regular => {}
            }
        }
        let n_true = true_points.iter().map(|p| p.weight()).sum();
        SingularStructure {
            true_points,
            removable,
            n_true,
            covol: covol(&deltas),
        }
    }

    pub fn has_log(&self) -> bool {
        self.true_points.iter().any(|p| p.logarithmic)
    }

    fn log_deltas(&self) -> impl Iterator<Item = &SingularPoint> {
        self.true_points.iter().filter(|p| p.logarithmic)
    }
}

/// Exponent differences α₀, α₁, α∞ of a Gauss operator with a candidate
/// pullback degree d and algebraic degree a_f.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CandidateTriple {
    pub alphas: [Rat; 3],
    pub d: usize,
    pub a_f: usize,
}

impl CandidateTriple {
    fn denominator_lcm(&self) -> num_bigint::BigInt {
        self.alphas
            .iter()
            .fold(num_bigint::BigInt::one(), |l, a| l.lcm(a.denom()))
    }
}

/// Gauss operator parameters (a₁, a₂; b₁).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GhdoParams {
    pub a1: Rat,
    pub a2: Rat,
    pub b1: Rat,
}

impl GhdoParams {
    pub fn new(a1: Rat, a2: Rat, b1: Rat) -> Self {
        GhdoParams { a1, a2, b1 }
    }

    /// None of a₁, a₂, b₁−a₁, b₁−a₂ is an integer.
    pub fn is_irreducible(&self) -> bool {
        ![
            &self.a1,
            &self.a2,
            &(&self.b1 - &self.a1),
            &(&self.b1 - &self.a2),
        ]
        .iter()
        .any(|v| is_integer(v))
    }

    /// x(1−x)∂² + (b₁ − (a₁+a₂+1)x)∂ − a₁a₂
    pub fn operator(&self) -> QOp {
        let one = rint(1);
        let p = |c: Vec<Rat>| RatFun::from_poly(UPoly::from_coeffs(c), &one);
        QOp::new(vec![
            p(vec![-(&self.a1 * &self.a2)]),
            p(vec![self.b1.clone(), -(&self.a1 + &self.a2 + rint(1))]),
            p(vec![rint(0), rint(1), rint(-1)]),
        ])
    }

    /// Exponent differences at 0, 1, ∞.
    pub fn exponent_differences(&self) -> [Rat; 3] {
        [
            (rint(1) - &self.b1).abs(),
            (&self.b1 - &self.a1 - &self.a2).abs(),
            (&self.a1 - &self.a2).abs(),
        ]
    }
}

/// Initial bound on deg f from the number of true singularities.
pub fn degree_bound(n_true: usize, has_log: bool) -> Result<usize, CandidateError> {
    if n_true < 3 {
        return Err(CandidateError::TooFewTrueSingularities(n_true));
    }
    Ok(if has_log {
        6 * (n_true - 2)
    } else {
        36 * n_true - 84
    })
}

/// −2 + Σ (1 − Δ) over places, each weighted by its number of points.
pub fn covol(deltas: &[(Rat, usize)]) -> Rat {
    deltas.iter().fold(rint(-2), |acc, (d, w)| {
        acc + (rint(1) - d) * rint(*w as i64)
    })
}

/// Integer exponent differences of a candidate and the pullback degree
/// they force, if any.
#[derive(Clone, Debug, PartialEq)]
pub struct IntegerCover {
    pub slots: Vec<i64>,
    pub degree: Option<usize>,
}

/// Candidate integer slots (k of them) covering the logarithmic points.
pub fn cover_logs(s: &SingularStructure, a_f: usize, k: usize) -> Vec<IntegerCover> {
    let logs: Vec<&SingularPoint> = s.log_deltas().collect();
    if logs.is_empty() {
        return if k == 0 {
            vec![IntegerCover {
                slots: vec![],
                degree: None,
            }]
        } else {
            vec![]
        };
    }
    if k == 0 {
        return vec![];
    }
    let has_zero = logs.iter().any(|p| p.delta.is_zero());
    let mut allowed: BTreeSet<i64> = BTreeSet::new();
    if has_zero {
        allowed.insert(0);
    }
    for p in &logs {
        let m = rat_to_i64(&(&p.delta * rint(a_f as i64))).unwrap();
        for q in 1..=m {
            if m % q == 0 {
                allowed.insert(q);
            }
        }
    }
    let allowed: Vec<i64> = allowed.into_iter().collect();
    let log_sum: Rat = logs
        .iter()
        .map(|p| &p.delta * rint(p.weight() as i64))
        .fold(rint(0), |a, b| a + b);
    let mut out = Vec::new();
    let mut tuple = Vec::new();
    multisets(&allowed, k, 0, &mut tuple, &mut |t| {
        if has_zero != t.contains(&0) {
            return;
        }
        let sum: i64 = t.iter().sum();
        let degree = if sum != 0 {
            let d = &log_sum * rint(a_f as i64) / rint(sum);
            match rat_to_i64(&d) {
                Some(d) if d >= 1 => Some(d as usize),
                _ => return,
            }
        } else {
            None
        };
        out.push(IntegerCover {
            slots: t.to_vec(),
            degree,
        });
    });
    out
}

fn multisets(
    items: &[i64],
    k: usize,
    start: usize,
    cur: &mut Vec<i64>,
    f: &mut impl FnMut(&[i64]),
) {
    if cur.len() == k {
        f(cur);
        return;
    }
    for i in start..items.len() {
        cur.push(items[i]);
        multisets(items, k, i, cur, f);
        cur.pop();
    }
}

/// Candidate triples [α₀, α₁, α∞, d] for algebraic degree a_f, with the
/// exponent differences stored in descending order.
pub fn find_expdiffs(s: &SingularStructure, a_f: usize) -> Result<Vec<CandidateTriple>, CandidateError> {
    let search = search::Search::new(s, a_f)?;
    let mut out: Vec<CandidateTriple> = search
        .run(s)
        .into_iter()
        .map(|(al, d)| CandidateTriple {
            alphas: [search::to_rat(&al[0]), search::to_rat(&al[1]), search::to_rat(&al[2])],
            d,
            a_f,
        })
        .collect();
    out.sort_by(|x, y| {
        x.d.cmp(&y.d)
            .then_with(|| x.denominator_lcm().cmp(&y.denominator_lcm()))
            .then_with(|| y.alphas.cmp(&x.alphas))
    });
    Ok(out)
}

/// Parameters realizing (α₀, α₁, α∞), canonical sign choice first,
/// deduplicated modulo a₁ ↔ a₂ and filtered for irreducibility.
pub fn ghdo_from_triple(alphas: &[Rat; 3]) -> Vec<GhdoParams> {
    let mut out: Vec<GhdoParams> = Vec::new();
    let half = Rat::new(1.into(), 2.into());
    for s0 in [1, -1] {
        for s1 in [1, -1] {
            for si in [1, -1] {
                let b1 = rint(1) - &alphas[0] * rint(s0);
                let sum = &b1 - &alphas[1] * rint(s1);
                let diff = -(&alphas[2] * rint(si));
                let a1 = (&sum + &diff) * &half;
                let a2 = (&sum - &diff) * &half;
                let p = GhdoParams::new(a1, a2, b1);
                let dup = out.iter().any(|q| {
                    q.b1 == p.b1 && ((q.a1 == p.a1 && q.a2 == p.a2) || (q.a1 == p.a2 && q.a2 == p.a1))
                });
                if !dup && p.is_irreducible() {
                    out.push(p);
                }
            }
        }
    }
    out
}
