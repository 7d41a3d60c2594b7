//! Exact coefficient arithmetic: rationals, prime fields and residue rings,
//! univariate polynomials, rational functions, number fields and quadratic
//! extensions of Q(x), plus the reconstruction primitives used by lifting.

mod factor;
mod linalg;
mod modint;
mod numfield;
mod poly;
mod quadext;
mod ratfun;
mod reconstruct;
mod reduce;

use std::fmt::Debug;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub use factor::{factor_over_q, rational_roots, squarefree_part};
pub use linalg::{solve_linear, AffineSolution};
pub use modint::{Fp, Zn};
pub use numfield::NfElem;
pub use poly::UPoly;
pub use quadext::{QuadExt, QuadModulus};
pub use ratfun::RatFun;
pub use reconstruct::{ratfun_reconstruct, ratnum_reconstruct, ratnum_reconstruct_bounded};
pub use reduce::{reduce_rat, reduce_rat_zn, BadPrime};

/// Arbitrary-precision rational number.
pub type Rat = BigRational;

/// Field (or, for [`Zn`], commutative ring) operations on values that may
/// carry their own context, such as a modulus.
///
/// Constants are produced relative to an existing element (`zero_like`,
/// `from_int_like`) so that context-carrying types need no global state.
pub trait Field: Clone + PartialEq + Debug + Send + Sync {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn is_zero(&self) -> bool;
    fn is_one(&self) -> bool {
        *self == self.one_like()
    }
    fn fadd(&self, other: &Self) -> Self;
    fn fsub(&self, other: &Self) -> Self;
    fn fmul(&self, other: &Self) -> Self;
    fn fneg(&self) -> Self;
    /// Multiplicative inverse; `None` for zero or non-units.
    fn finv(&self) -> Option<Self>;
    fn from_int_like(&self, n: i64) -> Self;
    /// Image of a rational constant; `None` when its denominator is not
    /// invertible in this ring.
    fn from_rat_like(&self, r: &Rat) -> Option<Self>;

    fn fdiv(&self, other: &Self) -> Option<Self> {
        other.finv().map(|i| self.fmul(&i))
    }

    /// The element as a rational number, for fields containing Q where
    /// that is decidable.
    fn to_rational(&self) -> Option<Rat> {
        None
    }

    fn fpow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = self.one_like();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.fmul(&base);
            }
            base = base.fmul(&base);
            e >>= 1;
        }
        acc
    }
}

/// A field equipped with a derivation d/dx.
pub trait DiffField: Field {
    fn derive(&self) -> Self;
}

impl Field for Rat {
    fn zero_like(&self) -> Self {
        Rat::zero()
    }
    fn one_like(&self) -> Self {
        Rat::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_one(&self) -> bool {
        One::is_one(self)
    }
    fn fadd(&self, other: &Self) -> Self {
        self + other
    }
    fn fsub(&self, other: &Self) -> Self {
        self - other
    }
    fn fmul(&self, other: &Self) -> Self {
        self * other
    }
    fn fneg(&self) -> Self {
        -self
    }
    fn finv(&self) -> Option<Self> {
        if Zero::is_zero(self) {
            None
        } else {
            Some(self.recip())
        }
    }
    fn from_int_like(&self, n: i64) -> Self {
        Rat::from_integer(BigInt::from(n))
    }
    fn to_rational(&self) -> Option<Rat> {
        Some(self.clone())
    }
    fn from_rat_like(&self, r: &Rat) -> Option<Self> {
        Some(r.clone())
    }
}

/// `n/d` as an exact rational.
pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Integer `n` as a rational.
pub fn rint(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn is_integer(r: &Rat) -> bool {
    r.denom().is_one()
}

/// Exact rational square root, if one exists.
pub fn rat_sqrt(r: &Rat) -> Option<Rat> {
    if r.is_negative() {
        return None;
    }
    let n = r.numer().sqrt();
    let d = r.denom().sqrt();
    if &(&n * &n) == r.numer() && &(&d * &d) == r.denom() {
        Some(Rat::new(n, d))
    } else {
        None
    }
}

/// Floor of a rational as `i64` (panics on overflow, exponents are small).
pub fn rat_floor(r: &Rat) -> i64 {
    i64::try_from(r.floor().to_integer()).expect("exponent out of range")
}

/// Rational as `i64` when it is an integer that fits.
pub fn rat_to_i64(r: &Rat) -> Option<i64> {
    if is_integer(r) {
        i64::try_from(r.to_integer()).ok()
    } else {
        None
    }
}

/// Gcd of two nonnegative rationals: gcd(a/b, c/d) = gcd(ad, cb)/(bd).
pub fn rat_gcd(a: &Rat, b: &Rat) -> Rat {
    use num_integer::Integer;
    let num = (a.numer() * b.denom()).gcd(&(b.numer() * a.denom()));
    Rat::new(num, a.denom() * b.denom())
}

/// Least common multiple of two positive integers.
pub fn lcm_u64(a: u64, b: u64) -> u64 {
    use num_integer::Integer;
    a.lcm(&b)
}
