use std::fmt;

use num_integer::Integer;

use crate::arith::{rint, Field, Rat};

use super::{PowerSeries, SeriesError};

/// Truncated Puiseux series t^v·B(t) with t = x^{1/ρ}.
///
/// The body B is a power series in t known modulo t^len, so the series is
/// known up to (but excluding) the exponent (v + len)/ρ. The leading body
/// coefficient is nonzero unless every known coefficient is zero.
#[derive(Clone, PartialEq)]
pub struct PuiseuxSeries<K> {
    rho: u64,
    val: i64,
    body: PowerSeries<K>,
}

impl<K: Field> PuiseuxSeries<K> {
    pub fn new(rho: u64, val: i64, body: PowerSeries<K>) -> Self {
        assert!(rho > 0);
        let mut s = PuiseuxSeries { rho, val, body };
        s.strip();
        s
    }

    /// An ordinary power series viewed as a Puiseux series.
    pub fn from_power(body: PowerSeries<K>) -> Self {
        Self::new(1, 0, body)
    }

    /// c·x^e known up to exponent `order`.
    pub fn monomial(c: K, e: &Rat, order: &Rat) -> Self {
        let rho = e.denom().lcm(order.denom());
        let rho = u64::try_from(rho).expect("ramification fits in u64");
        let re = Rat::from_integer(rho.into());
        let val = crate::arith::rat_to_i64(&(e * &re)).unwrap();
        let end = crate::arith::rat_to_i64(&(order * &re)).unwrap();
        let len = (end - val).max(0) as usize;
        let mut b = PowerSeries::zero(len, &c);
        if len > 0 {
            b.set_coeff(0, c);
        }
        Self::new(rho, val, b)
    }

    fn strip(&mut self) {
        if let Some(k) = self.body.valuation() {
            if k > 0 {
                self.body = self.body.unshift(k).unwrap();
                self.val += k as i64;
            }
        }
    }

    pub fn ramification(&self) -> u64 {
        self.rho
    }

    pub fn body(&self) -> &PowerSeries<K> {
        &self.body
    }

    pub fn is_zero(&self) -> bool {
        self.body.is_zero()
    }

    /// Exponent of the leading term.
    pub fn offset(&self) -> Rat {
        Rat::new(self.val.into(), (self.rho as i64).into())
    }

    /// First exponent that is not known.
    pub fn order(&self) -> Rat {
        Rat::new(
            (self.val + self.body.prec() as i64).into(),
            (self.rho as i64).into(),
        )
    }

    pub fn leading_coeff(&self) -> K {
        self.body.coeff(0)
    }

    /// Coefficient of x^e (zero if e is off the lattice or not known).
    pub fn coeff_at(&self, e: &Rat) -> K {
        let s = e * Rat::from_integer((self.rho as i64).into()) - Rat::from_integer(self.val.into());
        if !s.is_integer() || s < rint(0) {
            return self.body.zero_elem().clone();
        }
        let k = crate::arith::rat_to_i64(&s).unwrap() as usize;
        self.body.coeff(k)
    }

    /// Re-express with ramification ρ·m.
    pub fn refine(&self, m: u64) -> Self {
        if m == 1 {
            return self.clone();
        }
        let z = self.body.zero_elem();
        let len = self.body.prec() * m as usize;
        let mut c = vec![z.clone(); len];
        for (k, a) in self.body.coeffs().iter().enumerate() {
            c[k * m as usize] = a.clone();
        }
        PuiseuxSeries {
            rho: self.rho * m,
            val: self.val * m as i64,
            body: PowerSeries::new(c, z),
        }
    }

    /// Reduce the ramification as far as the nonzero exponents allow,
    /// dropping any precision not expressible on the coarser lattice.
    pub fn normalize(&self) -> Self {
        let mut g = self.rho;
        g = g.gcd(&self.val.unsigned_abs());
        for (k, a) in self.body.coeffs().iter().enumerate() {
            if !a.is_zero() {
                g = g.gcd(&(k as u64));
            }
        }
        if g <= 1 {
            return self.clone();
        }
        let gs = g as usize;
        let len = self.body.prec() / gs;
        let c = (0..len).map(|j| self.body.coeff(j * gs)).collect();
        PuiseuxSeries {
            rho: self.rho / g,
            val: self.val / g as i64,
            body: PowerSeries::new(c, self.body.zero_elem()),
        }
    }

    fn align(&self, o: &Self) -> (Self, Self) {
        let r = self.rho.lcm(&o.rho);
        (self.refine(r / self.rho), o.refine(r / o.rho))
    }

    pub fn add(&self, o: &Self) -> Self {
        let (a, b) = self.align(o);
        let v = a.val.min(b.val);
        let end = (a.val + a.body.prec() as i64).min(b.val + b.body.prec() as i64);
        let len = (end - v).max(0) as usize;
        let z = a.body.zero_elem();
        let at = |s: &Self, i: i64| -> K {
            let k = i - s.val;
            if k < 0 {
                z.clone()
            } else {
                s.body.coeff(k as usize)
            }
        };
        let c = (0..len as i64)
            .map(|i| at(&a, v + i).fadd(&at(&b, v + i)))
            .collect();
        Self::new(a.rho, v, PowerSeries::new(c, z)).normalize()
    }

    pub fn neg(&self) -> Self {
        Self::new(self.rho, self.val, self.body.neg())
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn scale(&self, c: &K) -> Self {
        Self::new(self.rho, self.val, self.body.scale(c))
    }

    pub fn mul(&self, o: &Self) -> Self {
        let (a, b) = self.align(o);
        Self::new(a.rho, a.val + b.val, a.body.mul(&b.body)).normalize()
    }

    pub fn inv(&self) -> Result<Self, SeriesError> {
        if self.is_zero() {
            return Err(SeriesError::DivisionByZero);
        }
        Ok(Self::new(self.rho, -self.val, self.body.inv()?))
    }

    pub fn div(&self, o: &Self) -> Result<Self, SeriesError> {
        Ok(self.mul(&o.inv()?))
    }

    /// s^e. The leading coefficient's e-th power is taken from `root` when
    /// supplied; otherwise the leading coefficient must be 1 or e an integer.
    pub fn pow_rational(&self, e: &Rat, root: Option<K>) -> Result<Self, SeriesError> {
        if self.is_zero() {
            return Err(SeriesError::DivisionByZero);
        }
        let c = self.leading_coeff();
        let unit = self.body.scale(&c.finv().ok_or(SeriesError::NotInvertible)?);
        let ek = c.from_rat_like(e).ok_or(SeriesError::BadPrime)?;
        let lead = match root {
            Some(r) => r,
            None if c.is_one() => c.clone(),
            None if e.is_integer() => {
                let n = crate::arith::rat_to_i64(e).ok_or(SeriesError::NoRoot)?;
                let p = c.fpow(n.unsigned_abs());
                if n < 0 {
                    p.finv().ok_or(SeriesError::NotInvertible)?
                } else {
                    p
                }
            }
            None => return Err(SeriesError::NoRoot),
        };
        let one = c.one_like();
        let b = unit.pow_field(&ek, one)?.scale(&lead);
        let nu = self.offset() * e;
        let m = u64::try_from(nu.denom().clone()).unwrap();
        let m = m / m.gcd(&self.rho);
        let base = Self {
            rho: self.rho,
            val: 0,
            body: b,
        }
        .refine(m);
        let rho = base.rho;
        let val = crate::arith::rat_to_i64(&(nu * Rat::from_integer((rho as i64).into()))).unwrap();
        Ok(Self::new(rho, val, base.body).normalize())
    }

    /// outer(inner). When outer is ramified, `root` supplies the chosen
    /// ρ-th root of inner's leading coefficient.
    pub fn compose(outer: &Self, inner: &Self, root: Option<K>) -> Result<Self, SeriesError> {
        if inner.is_zero() || inner.offset() <= rint(0) {
            return Err(SeriesError::Valuation);
        }
        let r = Rat::new(1.into(), (outer.rho as i64).into());
        let s = inner.pow_rational(&r, root)?;
        // s = t^v·S(t) with v > 0 is a power series in t
        let v = s.val as usize;
        let sp = s.body.shift(v);
        let b = outer.body.compose(&sp)?;
        let head = s.pow_int(outer.val)?;
        let bp = Self::new(s.rho, 0, b);
        Ok(head.mul(&bp))
    }

    pub fn pow_int(&self, n: i64) -> Result<Self, SeriesError> {
        let p = Self::new(self.rho, self.val * n.abs(), self.body.pow_int(n.unsigned_abs() as usize));
        if n < 0 {
            p.inv()
        } else {
            Ok(p)
        }
    }

    /// Compositional inverse of q = x^α·U with U a power series in x with
    /// U(0) = 1. Returns q⁻¹ as a Puiseux series in the same variable, so
    /// that q⁻¹(q(x)) = x to the guaranteed order.
    pub fn invert_functional(&self, alpha: &Rat) -> Result<Self, SeriesError> {
        if self.is_zero() || *alpha <= rint(0) || self.offset() != *alpha {
            return Err(SeriesError::Valuation);
        }
        if !self.leading_coeff().is_one() {
            return Err(SeriesError::NotInvertible);
        }
        let inva = alpha.recip();
        let u = self.pow_rational(&inva, None)?.normalize();
        if u.rho != 1 || u.val != 1 {
            return Err(SeriesError::Ramified);
        }
        let w = u.body.shift(1).reversion()?;
        // W(T^{1/α})
        let num = u64::try_from(alpha.numer().clone()).unwrap();
        let den = u64::try_from(alpha.denom().clone()).unwrap();
        let ws = Self::new(1, 1, w.unshift(1)?);
        let step = Self {
            rho: num,
            val: ws.val * den as i64,
            body: Self {
                rho: 1,
                val: 0,
                body: ws.body,
            }
            .refine(den)
            .body,
        };
        Ok(step.normalize())
    }
}

impl<K: Field> fmt::Debug for PuiseuxSeries<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "x^({}/{})*[{:?}] + O(x^{})",
            self.val,
            self.rho,
            self.body.coeffs(),
            self.order()
        )
    }
}
