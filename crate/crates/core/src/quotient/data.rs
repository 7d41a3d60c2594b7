use crate::arith::{is_integer, rat_to_i64, Field, Rat};
use crate::diffop::{move_point_to_zero, Place, QOp};
use crate::frobenius::{formal_solutions_at_zero, FormalBasis};
use crate::series::PowerSeries;

use super::QuotientError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QuotientMode {
    NonLog,
    Log,
}

/// Local quotient data at the expansion point (moved to 0).
///
/// NonLog: the Gauss quotient is q = x^α·u and the input quotient is
/// Q = x^Δ·U. Log (both exponent differences 0): y₂/y₁ = log x + h for
/// the Gauss operator and log x + H for the input, so g = x·exp(h) and
/// G = x·exp(H).
///
/// In both modes the pullback is f = W(C·Y) with W the compositional
/// inverse of x·u^{1/α} (resp. g) and Y = x^v·U^{1/α} (resp. G^v).
#[derive(Clone, Debug)]
pub struct QuotientData {
    pub mode: QuotientMode,
    pub alpha: Rat,
    pub delta: Rat,
    /// u (NonLog) or h (Log).
    pub base: PowerSeries<Rat>,
    /// U (NonLog) or H (Log).
    pub input: PowerSeries<Rat>,
    pub prec: usize,
}

impl QuotientData {
    /// v₀(f) forced by the exponents, if any.
    pub fn forced_valuation(&self) -> Option<usize> {
        match self.mode {
            QuotientMode::NonLog => {
                let v = &self.delta / &self.alpha;
                rat_to_i64(&v).filter(|&v| v >= 1).map(|v| v as usize)
            }
            QuotientMode::Log => None,
        }
    }

    /// Images of (W, Y) over a coefficient field or residue ring.
    pub fn images<K: Field>(&self, like: &K, v: usize) -> Result<(PowerSeries<K>, PowerSeries<K>), QuotientError> {
        let red = |s: &PowerSeries<Rat>| {
            s.try_map(|c| like.from_rat_like(c), like)
                .ok_or(QuotientError::BadPrime)
        };
        let base = red(&self.base)?;
        let input = red(&self.input)?;
        let one = like.one_like();
        let a = self.prec;
        let (w, y) = match self.mode {
            QuotientMode::NonLog => {
                let ia = like
                    .from_rat_like(&self.alpha.recip())
                    .ok_or(QuotientError::BadPrime)?;
                let w = base.pow_field(&ia, one.clone())?.shift(1);
                let y = input.pow_field(&ia, one)?.shift(v);
                (w, y)
            }
            QuotientMode::Log => {
                let g = base.exp()?.shift(1);
                let vk = like.from_int_like(v as i64);
                let y = input.scale(&vk).exp()?.shift(v);
                (g, y)
            }
        };
        Ok((w.truncate(a).reversion()?, y.truncate(a)))
    }
}

/// The normalized ratio part2/part1 of two power series bodies.
fn unit_ratio(num: &PowerSeries<Rat>, den: &PowerSeries<Rat>) -> Result<PowerSeries<Rat>, QuotientError> {
    let r = num.div(den)?;
    let c0 = r.coeff(0);
    let ic = c0.finv().ok_or(QuotientError::Unsupported)?;
    Ok(r.scale(&ic))
}

fn quotient_part(b: &FormalBasis<Rat>, mode: QuotientMode) -> Result<PowerSeries<Rat>, QuotientError> {
    match mode {
        QuotientMode::NonLog => {
            if b.logarithmic || is_integer(b.delta()) {
                return Err(QuotientError::Unsupported);
            }
            unit_ratio(&b.y[1].part0, &b.y[0].part0)
        }
        QuotientMode::Log => {
            if !b.logarithmic {
                return Err(QuotientError::Unsupported);
            }
            if !num_traits::Zero::is_zero(b.delta()) {
                return Err(QuotientError::NegativePowers);
            }
            Ok(b.y[1].part0.div(&b.y[0].part0)?)
        }
    }
}

/// Quotient data for the input operator at a rational place `p` against a
/// Gauss operator whose aligned exponent difference sits at 0.
pub fn build_quotients(
    l_inp: &QOp,
    l_b: &QOp,
    p: &Place,
    a: usize,
    mode: QuotientMode,
) -> Result<QuotientData, QuotientError> {
    if p.is_algebraic() {
        return Err(QuotientError::Unsupported);
    }
    let local = move_point_to_zero(l_inp, p)?;
    let bi = formal_solutions_at_zero(&local, a)?;
    let bb = formal_solutions_at_zero(l_b, a)?;
    let base = quotient_part(&bb, mode)?;
    let input = quotient_part(&bi, mode)?;
    Ok(QuotientData {
        mode,
        alpha: bb.delta().clone(),
        delta: bi.delta().clone(),
        base,
        input,
        prec: a,
    })
}

/// f = W(C·Y) truncated to the working precision.
pub fn evaluate<K: Field>(w: &PowerSeries<K>, y: &PowerSeries<K>, c: &K) -> Result<PowerSeries<K>, QuotientError> {
    Ok(w.compose(&y.scale(c))?)
}
