use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::Zero;

use crate::arith::{ratnum_reconstruct, solve_linear, Field, Fp, Rat, Zn};
use crate::series::PowerSeries;

use super::data::{evaluate, QuotientData};
use super::sweep::{Relation, SweepHit};
use super::QuotientError;

/// Lifting state at level n: C and the relation coefficients mod ℓⁿ.
#[derive(Clone, Debug)]
pub struct LiftState {
    pub ell: u64,
    pub level: u32,
    pub c: BigInt,
    pub relation: Relation<BigInt>,
}

impl LiftState {
    pub fn from_hit(ell: u64, hit: &SweepHit) -> Self {
        // balanced representatives keep a pivot of −1 equal to −1 at every level
        let rep = |f: &Fp| {
            let v = BigInt::from(f.value());
            if 2 * f.value() > ell {
                v - BigInt::from(ell)
            } else {
                v
            }
        };
        LiftState {
            ell,
            level: 1,
            c: BigInt::from(hit.c0),
            relation: Relation {
                coeffs: hit
                    .relation
                    .coeffs
                    .iter()
                    .map(|row| row.iter().map(rep).collect())
                    .collect(),
                pivot: hit.relation.pivot,
            },
        }
    }

    pub fn modulus(&self) -> BigUint {
        BigUint::from(self.ell).pow(self.level)
    }

    /// Balanced rational reconstruction of C and every coefficient.
    pub fn reconstruct(&self) -> Option<(Rat, Relation<Rat>)> {
        let m = Arc::new(self.modulus());
        let rr = |v: &BigInt| ratnum_reconstruct(&Zn::from_bigint(v, m.clone()));
        let coeffs = self
            .relation
            .coeffs
            .iter()
            .map(|row| row.iter().map(rr).collect::<Option<Vec<Rat>>>())
            .collect::<Option<Vec<_>>>()?;
        Some((
            rr(&self.c)?,
            Relation {
                coeffs,
                pivot: self.relation.pivot,
            },
        ))
    }
}

fn to_zn(r: &Relation<BigInt>, m: &Arc<BigUint>) -> Relation<Zn> {
    Relation {
        coeffs: r
            .coeffs
            .iter()
            .map(|row| row.iter().map(|v| Zn::from_bigint(v, m.clone())).collect())
            .collect(),
        pivot: r.pivot,
    }
}

fn to_fp(r: &Relation<BigInt>, ell: u64) -> Relation<Fp> {
    let l = BigInt::from(ell);
    Relation {
        coeffs: r
            .coeffs
            .iter()
            .map(|row| {
                row.iter()
                    .map(|v| Fp::new(v.mod_floor(&l).try_into().unwrap(), ell))
                    .collect()
            })
            .collect(),
        pivot: r.pivot,
    }
}

/// (s / ℓⁿ) mod ℓ for a residue that must be divisible by ℓⁿ.
fn divide_down(s: &Zn, ln: &BigUint, ell: u64) -> Option<Fp> {
    let (q, r) = s.value().div_rem(ln);
    if !r.is_zero() {
        return None;
    }
    let q = q % BigUint::from(ell);
    Some(Fp::new(q.try_into().unwrap(), ell))
}

/// One Hensel step: from (C, P) mod ℓⁿ to mod ℓⁿ⁺¹.
///
/// With h = f(C) and ℓⁿh′ = f(C + ℓⁿ) − f(C) mod ℓⁿ⁺¹, solves over F_ℓ
/// Σ_j P̃_j h^j + c₁·h′·∂_yP(h) ≡ −(Σ_j P_j h^j)/ℓⁿ for the corrections
/// P̃ (pivot fixed) and c₁.
pub fn hensel_step(state: &LiftState, qd: &QuotientData, v: usize) -> Result<LiftState, QuotientError> {
    let ell = state.ell;
    let ln = state.modulus();
    let m1 = Arc::new(&ln * BigUint::from(ell));
    let like = Zn::new(BigUint::zero(), m1.clone());
    let (w, y) = qd.images(&like, v)?;
    let c = Zn::from_bigint(&state.c, m1.clone());
    let h = evaluate(&w, &y, &c)?;
    let h2 = evaluate(&w, &y, &c.fadd(&Zn::new(ln.clone(), m1.clone())))?;
    let a = h.prec().min(h2.prec());
    let fp0 = Fp::new(0, ell);
    let mut hd = Vec::with_capacity(a);
    let mut h0 = Vec::with_capacity(a);
    for t in 0..a {
        let diff = h2.coeff(t).fsub(&h.coeff(t));
        hd.push(divide_down(&diff, &ln, ell).ok_or(QuotientError::Inconsistent)?);
        let v0: u64 = (h.coeff(t).value() % BigUint::from(ell)).try_into().unwrap();
        h0.push(Fp::new(v0, ell));
    }
    let h = h.truncate(a);
    let resid = to_zn(&state.relation, &m1).eval(&h);
    let rhs: Vec<Fp> = (0..a)
        .map(|t| divide_down(&resid.coeff(t), &ln, ell).map(|r| r.fneg()))
        .collect::<Option<_>>()
        .ok_or(QuotientError::Inconsistent)?;

    let pbar = to_fp(&state.relation, ell);
    let h0 = PowerSeries::new(h0, &fp0);
    let hd = PowerSeries::new(hd, &fp0);
    let deg = pbar.y_degree();
    let mut pows = vec![PowerSeries::one(a, &fp0)];
    for j in 1..=deg {
        pows.push(pows[j - 1].mul(&h0));
    }
    // ∂_yP(h₀)
    let mut dp = PowerSeries::zero(a, &fp0);
    for j in 1..=deg {
        let mut cj = pbar.coeffs[j].clone();
        cj.resize(a, fp0.clone());
        cj.truncate(a);
        let term = PowerSeries::new(cj, &fp0)
            .mul(&pows[j - 1])
            .scale(&fp0.from_int_like(j as i64));
        dp = dp.add(&term);
    }
    let ccol = hd.mul(&dp);
    let width = pbar.width();
    let unknowns: Vec<(usize, usize)> = (0..=deg)
        .flat_map(|j| (0..width).map(move |i| (j, i)))
        .filter(|&ji| ji != pbar.pivot)
        .collect();
    let rows: Vec<Vec<Fp>> = (0..a)
        .map(|t| {
            let mut row: Vec<Fp> = unknowns
                .iter()
                .map(|&(j, i)| {
                    if i <= t {
                        pows[j].coeff(t - i)
                    } else {
                        fp0.clone()
                    }
                })
                .collect();
            row.push(ccol.coeff(t));
            row
        })
        .collect();
    let sol = solve_linear(&rows, &rhs, unknowns.len() + 1, &fp0).ok_or(QuotientError::Inconsistent)?;
    let lnb = BigInt::from(ln);
    let mut next = state.relation.clone();
    for (k, &(j, i)) in unknowns.iter().enumerate() {
        next.coeffs[j][i] += &lnb * BigInt::from(sol.particular[k].value());
    }
    let c1 = BigInt::from(sol.particular[unknowns.len()].value());
    Ok(LiftState {
        ell,
        level: state.level + 1,
        c: &state.c + &lnb * c1,
        relation: next,
    })
}

/// Lift a sweep hit level by level, attempting rational reconstruction at
/// every level (including the first) and handing each new reconstruction
/// to `accept`. Gives up once ℓⁿ exceeds `max_bits` bits or a rejected
/// reconstruction repeats.
pub fn lift_and_reconstruct<T>(
    qd: &QuotientData,
    v: usize,
    ell: u64,
    hit: &SweepHit,
    max_bits: u64,
    mut accept: impl FnMut(&Rat, &Relation<Rat>) -> Option<T>,
) -> Result<Option<T>, QuotientError> {
    let mut state = LiftState::from_hit(ell, hit);
    let mut last: Option<Relation<Rat>> = None;
    loop {
        if let Some((c, rel)) = state.reconstruct() {
            // a stable reconstruction that was already rejected is final
            if last.as_ref() == Some(&rel) {
                return Ok(None);
            }
            if let Some(out) = accept(&c, &rel) {
                return Ok(Some(out));
            }
            last = Some(rel);
        }
        if state.modulus().bits() > max_bits {
            return Ok(None);
        }
        state = hensel_step(&state, qd, v)?;
    }
}
