//! Candidate enumeration over machine-size rationals.

use std::collections::BTreeSet;

use num_rational::Ratio;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::Rat;

use super::{cover_logs, degree_bound, CandidateError, SingularStructure};

type Q = Ratio<i128>;

fn q(n: i64) -> Q {
    Q::from_integer(n as i128)
}

fn to_q(r: &Rat) -> Result<Q, CandidateError> {
    match (r.numer().to_i128(), r.denom().to_i128()) {
        (Some(n), Some(d)) if n.abs() < 1 << 40 && d < 1 << 40 => Ok(Q::new(n, d)),
        _ => Err(CandidateError::TooLarge),
    }
}

pub(super) fn to_rat(v: &Q) -> Rat {
    Rat::new((*v.numer()).into(), (*v.denom()).into())
}

struct Pt {
    delta: Q,
    log: bool,
    weight: usize,
}

pub(super) struct Search {
    true_pts: Vec<Pt>,
    all_pts: Vec<Pt>,
    covol: Q,
    a_f: usize,
    bound: usize,
}

/// {a_f·v/b : v ∈ vals, 1 ≤ b ≤ d}, positive non-integers only.
fn gamma(vals: &[Q], a_f: usize, d: usize) -> BTreeSet<Q> {
    let mut out = BTreeSet::new();
    for v in vals {
        for b in 1..=d {
            let g = v * q(a_f as i64) / q(b as i64);
            if g.is_positive() && !g.is_integer() {
                out.insert(g);
            }
        }
    }
    out
}

/// Σ 1/denominator over the non-integer entries is below 1.
pub(super) fn schwarz_ok(alphas: &[Q; 3]) -> bool {
    let s: Q = alphas
        .iter()
        .filter(|a| !a.is_integer())
        .map(|a| Q::new(1, *a.denom()))
        .sum();
    s < Q::one()
}

/// Some sign choice gives an irreducible Gauss operator.
pub(super) fn realizable(al: &[Q; 3]) -> bool {
    let half = Q::new(1, 2);
    for s0 in [1, -1] {
        for s1 in [1, -1] {
            let b1 = q(1) - al[0] * q(s0);
            let sum = b1 - al[1] * q(s1);
            let diff = -al[2];
            let a1 = (sum + diff) * half;
            let a2 = (sum - diff) * half;
            if ![a1, a2, b1 - a1, b1 - a2].iter().any(|v| v.is_integer()) {
                return true;
            }
        }
    }
    false
}

/// Is Δ = α·j/a_f for an integer 1 ≤ j ≤ d?
fn explains(alpha: &Q, delta: &Q, a_f: usize, d: usize) -> bool {
    if alpha.is_zero() {
        return false;
    }
    let j = delta * q(a_f as i64) / alpha;
    j.is_integer() && j >= q(1) && j <= q(d as i64)
}

/// Can d be written as a sum of a sublist of `items` plus any number of
/// copies of `free`?
fn subset_sum(items: &[usize], free: Option<usize>, d: usize) -> bool {
    let mut reach = vec![false; d + 1];
    reach[0] = true;
    for &it in items {
        if it == 0 || it > d {
            continue;
        }
        for s in (it..=d).rev() {
            if reach[s - it] {
                reach[s] = true;
            }
        }
    }
    if let Some(f) = free.filter(|&f| f > 0) {
        for s in f..=d {
            if reach[s - f] {
                reach[s] = true;
            }
        }
    }
    reach[d]
}

impl Search {
    pub(super) fn new(s: &SingularStructure, a_f: usize) -> Result<Self, CandidateError> {
        let conv = |p: &super::SingularPoint| -> Result<Pt, CandidateError> {
            Ok(Pt {
                delta: to_q(&p.delta)?,
                log: p.logarithmic,
                weight: p.weight(),
            })
        };
        let true_pts = s.true_points.iter().map(conv).collect::<Result<Vec<_>, _>>()?;
        let all_pts = s
            .true_points
            .iter()
            .chain(s.removable.iter())
            .map(conv)
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Search {
            true_pts,
            all_pts,
            covol: to_q(&s.covol)?,
            a_f,
            bound: degree_bound(s.n_true, s.has_log())?,
        })
    }

    /// Every point above the slot v has Δ = v·e; the ramification indices
    /// over that fiber sum to d. Points with Δ = 1 are unlimited.
    fn d_v_ok(&self, v: &Q, d: usize) -> bool {
        let mut items = Vec::new();
        for p in &self.all_pts {
            let k = p.delta / v;
            if k.is_integer() && k.is_positive() {
                let k = k.to_integer() as usize;
                items.extend(std::iter::repeat(k).take(p.weight.min(d)));
            }
        }
        let inv = v.recip();
        let free = inv.is_integer().then(|| inv.to_integer() as usize);
        subset_sum(&items, free, d)
    }

    fn is_valid(&self, al: &[Q; 3], d: usize) -> bool {
        let a_f = self.a_f;
        if al.iter().any(|a| a.is_negative()) || !schwarz_ok(al) {
            return false;
        }
        for p in &self.true_pts {
            let ok = if p.log {
                if p.delta.is_zero() {
                    al.iter().any(|a| a.is_zero())
                } else {
                    al.iter().any(|a| a.is_integer() && explains(a, &p.delta, a_f, d))
                }
            } else {
                al.iter()
                    .any(|a| (a_f > 1 || !a.is_integer()) && explains(a, &p.delta, a_f, d))
            };
            if !ok {
                return false;
            }
        }
        if a_f == 1 && !al.iter().filter(|a| !a.is_zero()).all(|v| self.d_v_ok(v, d)) {
            return false;
        }
        realizable(al)
    }

    fn last_slot(&self, a: &Q, b: &Q, d: usize) -> Q {
        q(1) - a - b - self.covol * q(self.a_f as i64) / q(d as i64)
    }

    /// Smallest d for which the Covol slot can be positive.
    fn d_floor(&self, a: &Q, b: &Q) -> Option<usize> {
        let room = q(1) - a - b;
        let k = self.covol * q(self.a_f as i64);
        if !k.is_positive() {
            return room.is_positive().then_some(1);
        }
        if !room.is_positive() {
            return None;
        }
        Some((k / room).floor().to_integer() as usize + 1)
    }

    /// Third slots r = a_f·m/j explaining Δ = m, paired with the degree d
    /// forced by the Covol relation 1 − a − b − r = Covol·a_f/d, d ≥ j.
    fn third_slot(&self, a: &Q, b: &Q, m: &Q, lo: usize, hi: usize) -> Vec<(Q, usize)> {
        let k = self.covol * q(self.a_f as i64);
        let am = *m * q(self.a_f as i64);
        let room = q(1) - a - b;
        let slack = room - k / q(hi as i64);
        let mut out = Vec::new();
        if !slack.is_positive() {
            return out;
        }
        let jlo = (am / slack).ceil().to_integer().max(1) as usize;
        let jhi = ((k + am) / room).floor().to_integer().min(hi as i128) as usize;
        for j in jlo..=jhi {
            let r = am / q(j as i64);
            let t = room - r;
            if !t.is_positive() || r.is_integer() {
                continue;
            }
            let d = k / t;
            if !d.is_integer() {
                continue;
            }
            let d = d.to_integer() as usize;
            if d >= lo && d <= hi && d >= j {
                out.push((r, d));
            }
        }
        out
    }

    pub(super) fn run(&self, s: &SingularStructure) -> Vec<([Q; 3], usize)> {
        let a_f = self.a_f;
        let bound = self.bound;
        let mut s_n: Vec<Q> = self
            .true_pts
            .iter()
            .filter(|p| !p.log)
            .map(|p| p.delta)
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        s_n.dedup();
        let mut s_rb: Vec<Q> = self
            .all_pts
            .iter()
            .skip(self.true_pts.len())
            .map(|p| p.delta)
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        s_rb.push(q(1));
        let mut fiber_deltas: BTreeSet<Q> = self.all_pts.iter().map(|p| p.delta).filter(|d| d.is_positive()).collect();
        fiber_deltas.insert(q(1));
        let mut found: BTreeSet<([Q; 3], usize)> = BTreeSet::new();
        let mut push = |al: [Q; 3], d: usize| {
            if self.is_valid(&al, d) {
                let mut a = al;
                a.sort_by(|x, y| y.cmp(x));
                found.insert((a, d));
            }
        };
        for k in 0..=3 {
            for cover in cover_logs(s, a_f, k) {
                let (dlo, dhi) = match cover.degree {
                    Some(d) if d <= bound => (d, d),
                    Some(_) => continue,
                    None => (1, bound),
                };
                let ints: Vec<Q> = cover.slots.iter().map(|&v| q(v)).collect();
                let gamma1 = match s_n.last() {
                    Some(m) => gamma(&[*m], a_f, dhi),
                    None => gamma(&s_rb, a_f, dhi),
                };
                let k_cov = self.covol * q(a_f as i64);
                let fits = |a: &Q, b: &Q, d: usize| {
                    let r = self.last_slot(a, b, d);
                    (r.is_positive() && !r.is_integer()).then_some(r)
                };
                match k {
                    3 => {
                        for d in dlo..=dhi {
                            if self.last_slot(&ints[0], &ints[1], d) == ints[2] {
                                push([ints[0], ints[1], ints[2]], d);
                            }
                        }
                    }
                    2 => {
                        for d in dlo..=dhi {
                            if let Some(r) = fits(&ints[0], &ints[1], d) {
                                push([ints[0], ints[1], r], d);
                            }
                        }
                    }
                    1 => {
                        for a1 in &gamma1 {
                            let Some(lo) = self.d_floor(&ints[0], a1) else { continue };
                            for d in dlo.max(lo)..=dhi {
                                if let Some(r) = fits(&ints[0], a1, d) {
                                    push([ints[0], *a1, r], d);
                                }
                            }
                        }
                    }
                    _ => {
                        for a1 in &gamma1 {
                            let omega: Vec<Q> = s_n
                                .iter()
                                .filter(|dl| !explains(a1, dl, a_f, dhi))
                                .cloned()
                                .collect();
                            let gamma2 = match omega.last() {
                                Some(m) => gamma(&[*m], a_f, dhi),
                                None => {
                                    let mut g = gamma(&s_rb, a_f, dhi);
                                    if let Some(m) = s_n.last() {
                                        g.extend(gamma(&[*m], a_f, dhi));
                                    }
                                    g
                                }
                            };
                            for a2 in &gamma2 {
                                if !schwarz_ok(&[*a1, *a2, q(0)]) {
                                    continue;
                                }
                                let Some(lo) = self.d_floor(a1, a2) else { continue };
                                let lo = dlo.max(lo);
                                let rest = s_n
                                    .iter()
                                    .rev()
                                    .find(|dl| !explains(a1, dl, a_f, dhi) && !explains(a2, dl, a_f, dhi));
                                match rest {
                                    Some(m) if k_cov.is_positive() => {
                                        for (r, d) in self.third_slot(a1, a2, m, lo, dhi) {
                                            push([*a1, *a2, r], d);
                                        }
                                    }
                                    None if a_f == 1 && k_cov.is_positive() => {
                                        // every point above r has Δ = r·e for some listed Δ or 1
                                        for m in &fiber_deltas {
                                            for (r, d) in self.third_slot(a1, a2, m, lo, dhi) {
                                                push([*a1, *a2, r], d);
                                            }
                                        }
                                    }
                                    _ => {
                                        for d in lo..=dhi {
                                            if let Some(r) = fits(a1, a2, d) {
                                                push([*a1, *a2, r], d);
                                            }
                                        }
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
        found.into_iter().collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn schwarz_rejects_spherical() {
        let h = Q::new(1, 2);
        assert!(!schwarz_ok(&[h, h, h]));
        assert!(schwarz_ok(&[Q::new(1, 3), Q::new(2, 7), Q::new(1, 7)]));
    }

    #[test]
    fn realizability() {
        assert!(realizable(&[q(0), q(0), q(0)]));
        // α₀ = α₁ = α∞ = 1 forces an integer parameter
        assert!(!realizable(&[q(1), q(1), q(1)]));
    }

    #[test]
    fn subset_sums() {
        assert!(subset_sum(&[1, 1], Some(3), 2));
        assert!(!subset_sum(&[2], None, 3));
        assert!(subset_sum(&[2], Some(3), 5));
    }
}
