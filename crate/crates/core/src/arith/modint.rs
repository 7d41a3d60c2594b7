use std::fmt;
use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{Field, Rat};

/// Element of the prime field F_p, p < 2^63.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Fp {
    v: u64,
    p: u64,
}

impl Fp {
    pub fn new(v: u64, p: u64) -> Self {
        Fp { v: v % p, p }
    }

    pub fn from_i64(v: i64, p: u64) -> Self {
        Fp {
            v: v.rem_euclid(p as i64) as u64,
            p,
        }
    }

    pub fn value(&self) -> u64 {
        self.v
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    fn mulmod(a: u64, b: u64, p: u64) -> u64 {
        ((a as u128 * b as u128) % p as u128) as u64
    }
}

impl fmt::Debug for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.v, self.p)
    }
}

impl fmt::Display for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.v)
    }
}

impl Field for Fp {
    fn zero_like(&self) -> Self {
        Fp { v: 0, p: self.p }
    }
    fn one_like(&self) -> Self {
        Fp { v: 1 % self.p, p: self.p }
    }
    fn is_zero(&self) -> bool {
        self.v == 0
    }
    fn fadd(&self, o: &Self) -> Self {
        debug_assert_eq!(self.p, o.p);
        let s = self.v + o.v;
        Fp {
            v: if s >= self.p { s - self.p } else { s },
            p: self.p,
        }
    }
    fn fsub(&self, o: &Self) -> Self {
        debug_assert_eq!(self.p, o.p);
        Fp {
            v: if self.v >= o.v {
                self.v - o.v
            } else {
                self.v + self.p - o.v
            },
            p: self.p,
        }
    }
    fn fmul(&self, o: &Self) -> Self {
        Fp {
            v: Self::mulmod(self.v, o.v, self.p),
            p: self.p,
        }
    }
    fn fneg(&self) -> Self {
        Fp {
            v: if self.v == 0 { 0 } else { self.p - self.v },
            p: self.p,
        }
    }
    fn finv(&self) -> Option<Self> {
        if self.v == 0 {
            return None;
        }
        let e = (self.v as i128).extended_gcd(&(self.p as i128));
        if e.gcd != 1 {
            return None;
        }
        Some(Fp {
            v: e.x.rem_euclid(self.p as i128) as u64,
            p: self.p,
        })
    }
    fn from_int_like(&self, n: i64) -> Self {
        Fp::from_i64(n, self.p)
    }
    fn from_rat_like(&self, r: &Rat) -> Option<Self> {
        let p = BigInt::from(self.p);
        let n = r.numer().mod_floor(&p).to_u64()?;
        let d = r.denom().mod_floor(&p).to_u64()?;
        Fp { v: d, p: self.p }
            .finv()
            .map(|di| Fp { v: n, p: self.p }.fmul(&di))
    }
}

/// Element of the residue ring Z/NZ for an arbitrary modulus N ≥ 2
/// (used for prime powers ℓⁿ during lifting).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Zn {
    v: BigUint,
    n: Arc<BigUint>,
}

impl Zn {
    pub fn new(v: BigUint, n: Arc<BigUint>) -> Self {
        Zn { v: v % n.as_ref(), n }
    }

    pub fn from_bigint(v: &BigInt, n: Arc<BigUint>) -> Self {
        let m = BigInt::from(n.as_ref().clone());
        let r = v.mod_floor(&m).to_biguint().expect("nonnegative residue");
        Zn { v: r, n }
    }

    pub fn value(&self) -> &BigUint {
        &self.v
    }

    pub fn modulus(&self) -> &Arc<BigUint> {
        &self.n
    }
}

impl fmt::Debug for Zn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.v, self.n)
    }
}

impl Field for Zn {
    fn zero_like(&self) -> Self {
        Zn {
            v: BigUint::zero(),
            n: self.n.clone(),
        }
    }
    fn one_like(&self) -> Self {
        Zn {
            v: BigUint::one() % self.n.as_ref(),
            n: self.n.clone(),
        }
    }
    fn is_zero(&self) -> bool {
        self.v.is_zero()
    }
    fn fadd(&self, o: &Self) -> Self {
        let s = &self.v + &o.v;
        let v = if &s >= self.n.as_ref() {
            s - self.n.as_ref()
        } else {
            s
        };
        Zn { v, n: self.n.clone() }
    }
    fn fsub(&self, o: &Self) -> Self {
        let v = if self.v >= o.v {
            &self.v - &o.v
        } else {
            &self.v + self.n.as_ref() - &o.v
        };
        Zn { v, n: self.n.clone() }
    }
    fn fmul(&self, o: &Self) -> Self {
        Zn {
            v: (&self.v * &o.v) % self.n.as_ref(),
            n: self.n.clone(),
        }
    }
    fn fneg(&self) -> Self {
        if self.v.is_zero() {
            self.clone()
        } else {
            Zn {
                v: self.n.as_ref() - &self.v,
                n: self.n.clone(),
            }
        }
    }
    fn finv(&self) -> Option<Self> {
        let a = BigInt::from(self.v.clone());
        let m = BigInt::from(self.n.as_ref().clone());
        let e = a.extended_gcd(&m);
        if !e.gcd.abs().is_one() {
            return None;
        }
        Some(Zn::from_bigint(&e.x, self.n.clone()))
    }
    fn from_int_like(&self, k: i64) -> Self {
        Zn::from_bigint(&BigInt::from(k), self.n.clone())
    }
    fn from_rat_like(&self, r: &Rat) -> Option<Self> {
        let d = Zn::from_bigint(r.denom(), self.n.clone()).finv()?;
        Some(Zn::from_bigint(r.numer(), self.n.clone()).fmul(&d))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    #[test]
    fn fp_inverse_and_rationals() {
        let a = Fp::new(6, 13);
        assert_eq!(a.finv().unwrap().value(), 11);
        let r = Fp::new(0, 13).from_rat_like(&rat(55, 1176)).unwrap();
        assert_eq!(r.value(), 7);
        assert!(Fp::new(0, 13).from_rat_like(&rat(1, 13)).is_none());
    }

    #[test]
    fn zn_unit_and_nonunit() {
        let n = Arc::new(BigUint::from(121u32));
        let three = Zn::new(BigUint::from(3u32), n.clone());
        assert_eq!(three.finv().unwrap().value(), &BigUint::from(81u32));
        let eleven = Zn::new(BigUint::from(11u32), n);
        assert!(eleven.finv().is_none());
    }
}
