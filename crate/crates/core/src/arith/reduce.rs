use std::sync::Arc;

use num_bigint::BigUint;
use thiserror::Error;

use super::{Field, Fp, Rat, Zn};

/// A denominator vanished modulo the chosen prime.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("denominator divisible by the prime {0}")]
pub struct BadPrime(pub u64);

/// Image of a rational number in F_p.
pub fn reduce_rat(r: &Rat, p: u64) -> Result<Fp, BadPrime> {
    Fp::new(0, p).from_rat_like(r).ok_or(BadPrime(p))
}

/// Image of a rational number in Z/NZ; fails when the denominator is not a
/// unit (for N = ℓⁿ, when ℓ divides it).
pub fn reduce_rat_zn(r: &Rat, n: &Arc<BigUint>, prime: u64) -> Result<Zn, BadPrime> {
    Zn::new(BigUint::from(0u32), n.clone())
        .from_rat_like(r)
        .ok_or(BadPrime(prime))
}
