use std::fmt;

use crate::arith::{Field, Rat};

use super::SeriesError;

/// Truncated power series Σ c_k x^k known modulo x^N, N = `prec()`.
#[derive(Clone, PartialEq)]
pub struct PowerSeries<K> {
    c: Vec<K>,
    zero: K,
}

impl<K: Field> PowerSeries<K> {
    /// Series with the given coefficients, known modulo x^len.
    pub fn new(c: Vec<K>, like: &K) -> Self {
        PowerSeries {
            c,
            zero: like.zero_like(),
        }
    }

    pub fn zero(prec: usize, like: &K) -> Self {
        Self::new(vec![like.zero_like(); prec], like)
    }

    pub fn one(prec: usize, like: &K) -> Self {
        let mut s = Self::zero(prec, like);
        if prec > 0 {
            s.c[0] = like.one_like();
        }
        s
    }

    /// The series x, known modulo x^prec.
    pub fn x(prec: usize, like: &K) -> Self {
        let mut s = Self::zero(prec, like);
        if prec > 1 {
            s.c[1] = like.one_like();
        }
        s
    }

    pub fn prec(&self) -> usize {
        self.c.len()
    }

    pub fn coeffs(&self) -> &[K] {
        &self.c
    }

    pub fn into_coeffs(self) -> Vec<K> {
        self.c
    }

    pub fn zero_elem(&self) -> &K {
        &self.zero
    }

    /// Coefficient of x^k (zero past the known range).
    pub fn coeff(&self, k: usize) -> K {
        self.c.get(k).cloned().unwrap_or_else(|| self.zero.clone())
    }

    pub fn set_coeff(&mut self, k: usize, v: K) {
        if k < self.c.len() {
            self.c[k] = v;
        }
    }

    pub fn truncate(&self, n: usize) -> Self {
        let mut c = self.c.clone();
        c.truncate(n);
        Self::new(c, &self.zero)
    }

    /// True when every known coefficient vanishes.
    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|a| a.is_zero())
    }

    /// Index of the first nonzero known coefficient.
    pub fn valuation(&self) -> Option<usize> {
        self.c.iter().position(|a| !a.is_zero())
    }

    pub fn map<L: Field>(&self, f: impl Fn(&K) -> L, like: &L) -> PowerSeries<L> {
        PowerSeries::new(self.c.iter().map(f).collect(), like)
    }

    pub fn try_map<L: Field>(&self, f: impl Fn(&K) -> Option<L>, like: &L) -> Option<PowerSeries<L>> {
        let c = self.c.iter().map(f).collect::<Option<Vec<_>>>()?;
        Some(PowerSeries::new(c, like))
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.prec().min(o.prec());
        Self::new((0..n).map(|k| self.c[k].fadd(&o.c[k])).collect(), &self.zero)
    }

    pub fn sub(&self, o: &Self) -> Self {
        let n = self.prec().min(o.prec());
        Self::new((0..n).map(|k| self.c[k].fsub(&o.c[k])).collect(), &self.zero)
    }

    pub fn neg(&self) -> Self {
        Self::new(self.c.iter().map(|a| a.fneg()).collect(), &self.zero)
    }

    pub fn scale(&self, s: &K) -> Self {
        Self::new(self.c.iter().map(|a| a.fmul(s)).collect(), &self.zero)
    }

    /// Product truncated to the common precision.
    pub fn mul(&self, o: &Self) -> Self {
        let n = self.prec().min(o.prec());
        self.mul_to(o, n)
    }

    /// Product computed modulo x^n (n not exceeding the provable order).
    pub fn mul_to(&self, o: &Self, n: usize) -> Self {
        let mut out = vec![self.zero.clone(); n];
        for (i, a) in self.c.iter().enumerate().take(n) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.c.iter().enumerate().take(n - i) {
                out[i + j] = out[i + j].fadd(&a.fmul(b));
            }
        }
        Self::new(out, &self.zero)
    }

    /// Multiply by x^k, raising the precision by k.
    pub fn shift(&self, k: usize) -> Self {
        let mut c = vec![self.zero.clone(); k];
        c.extend(self.c.iter().cloned());
        Self::new(c, &self.zero)
    }

    /// Divide by x^k; the first k coefficients must vanish.
    pub fn unshift(&self, k: usize) -> Result<Self, SeriesError> {
        if self.c.iter().take(k).any(|a| !a.is_zero()) {
            return Err(SeriesError::Valuation);
        }
        Ok(Self::new(self.c.iter().skip(k).cloned().collect(), &self.zero))
    }

    /// Multiplicative inverse; the constant term must be a unit.
    pub fn inv(&self) -> Result<Self, SeriesError> {
        let n = self.prec();
        if n == 0 {
            return Ok(self.clone());
        }
        let i0 = self.c[0].finv().ok_or(SeriesError::NotInvertible)?;
        let mut g = Vec::with_capacity(n);
        g.push(i0.clone());
        for k in 1..n {
            let mut acc = self.zero.clone();
            for j in 1..=k {
                acc = acc.fadd(&self.c[j].fmul(&g[k - j]));
            }
            g.push(acc.fneg().fmul(&i0));
        }
        Ok(Self::new(g, &self.zero))
    }

    pub fn div(&self, o: &Self) -> Result<Self, SeriesError> {
        Ok(self.mul(&o.inv()?))
    }

    pub fn derivative(&self) -> Self {
        let c = self
            .c
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, a)| a.fmul(&a.from_int_like(k as i64)))
            .collect();
        Self::new(c, &self.zero)
    }

    /// Antiderivative with zero constant term.
    pub fn integral(&self) -> Result<Self, SeriesError> {
        let mut c = vec![self.zero.clone()];
        for (k, a) in self.c.iter().enumerate() {
            let d = self.zero.from_int_like(k as i64 + 1);
            c.push(a.fdiv(&d).ok_or(SeriesError::BadPrime)?);
        }
        Ok(Self::new(c, &self.zero))
    }

    pub fn pow_int(&self, e: usize) -> Self {
        let mut acc = Self::one(self.prec(), &self.zero);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// self^e for an exponent e in the coefficient field, with `lead` the
    /// chosen value of c₀^e. Uses the recurrence from f·g′ = e·f′·g.
    pub fn pow_field(&self, e: &K, lead: K) -> Result<Self, SeriesError> {
        let n = self.prec();
        if n == 0 {
            return Ok(self.clone());
        }
        let i0 = self.c[0].finv().ok_or(SeriesError::NotInvertible)?;
        let mut g = Vec::with_capacity(n);
        g.push(lead);
        for m in 1..n {
            let mut acc = self.zero.clone();
            for k in 1..=m {
                if self.c[k].is_zero() {
                    continue;
                }
                let w = e
                    .fmul(&e.from_int_like(k as i64))
                    .fsub(&e.from_int_like((m - k) as i64));
                acc = acc.fadd(&w.fmul(&self.c[k]).fmul(&g[m - k]));
            }
            let inv_m = self
                .zero
                .from_int_like(m as i64)
                .finv()
                .ok_or(SeriesError::BadPrime)?;
            g.push(acc.fmul(&inv_m).fmul(&i0));
        }
        Ok(Self::new(g, &self.zero))
    }

    /// self^e for rational e; the constant term must be 1 unless e is an
    /// integer.
    pub fn pow_rat(&self, e: &Rat) -> Result<Self, SeriesError> {
        let ek = self.zero.from_rat_like(e).ok_or(SeriesError::BadPrime)?;
        let c0 = self.coeff(0);
        let lead = if c0.is_one() {
            c0
        } else if e.is_integer() {
            let n = crate::arith::rat_to_i64(e).ok_or(SeriesError::NoRoot)?;
            let p = c0.fpow(n.unsigned_abs());
            if n < 0 {
                p.finv().ok_or(SeriesError::NotInvertible)?
            } else {
                p
            }
        } else {
            return Err(SeriesError::NoRoot);
        };
        self.pow_field(&ek, lead)
    }

    /// exp of a series with zero constant term.
    pub fn exp(&self) -> Result<Self, SeriesError> {
        if !self.coeff(0).is_zero() {
            return Err(SeriesError::Valuation);
        }
        let n = self.prec();
        let mut g = Vec::with_capacity(n);
        if n == 0 {
            return Ok(self.clone());
        }
        g.push(self.zero.one_like());
        for m in 1..n {
            let mut acc = self.zero.clone();
            for k in 1..=m {
                let t = self.c[k].fmul(&self.zero.from_int_like(k as i64));
                acc = acc.fadd(&t.fmul(&g[m - k]));
            }
            let inv_m = self
                .zero
                .from_int_like(m as i64)
                .finv()
                .ok_or(SeriesError::BadPrime)?;
            g.push(acc.fmul(&inv_m));
        }
        Ok(Self::new(g, &self.zero))
    }

    /// log of a series with constant term 1.
    pub fn log(&self) -> Result<Self, SeriesError> {
        if !self.coeff(0).is_one() {
            return Err(SeriesError::NotInvertible);
        }
        let q = self.derivative().mul(&self.inv()?.truncate(self.prec() - 1));
        q.integral()
    }

    /// self(inner) for inner with zero constant term. If self is known mod
    /// x^N, inner mod x^M with valuation v ≥ 1, the result is known mod
    /// x^min(N·v, M).
    pub fn compose(&self, inner: &Self) -> Result<Self, SeriesError> {
        let v = match inner.valuation() {
            Some(0) => return Err(SeriesError::Valuation),
            Some(v) => v,
            None => inner.prec().max(1),
        };
        let n = (self.prec().saturating_mul(v)).min(inner.prec());
        let inner = inner.truncate(n);
        let mut acc = Self::zero(n, &self.zero);
        for a in self.c.iter().take(n.div_ceil(v).max(1)).rev() {
            acc = acc.mul_to(&inner, n);
            if n > 0 {
                acc.c[0] = acc.c[0].fadd(a);
            }
        }
        Ok(acc)
    }

    /// Compositional inverse of a series c₁x + c₂x² + … with c₁ a unit,
    /// by Newton iteration g ↦ g − (s(g) − x)/s′(g).
    pub fn reversion(&self) -> Result<Self, SeriesError> {
        let n = self.prec();
        if n < 2 {
            return Err(SeriesError::Valuation);
        }
        if !self.c[0].is_zero() {
            return Err(SeriesError::Valuation);
        }
        let i1 = self.c[1].finv().ok_or(SeriesError::NotInvertible)?;
        let ds = self.derivative();
        let mut g = Self::x(2, &self.zero).scale(&i1);
        let mut m = 2;
        while m < n {
            let h = m;
            m = (2 * m).min(n);
            let gm = g.pad(m);
            let sg = self.truncate(m).compose(&gm)?;
            // s(g) − x vanishes to order h, so s′(g) is needed only mod x^{m−h}
            let err = sg.sub(&Self::x(m, &self.zero)).unshift(h)?;
            let dsg = ds.truncate(m - h).compose(&gm.truncate(m - h))?;
            g = gm.sub(&err.div(&dsg)?.shift(h));
        }
        Ok(g)
    }

    /// Same coefficients with zeros appended up to precision m (used where
    /// the extra terms are recomputed afterwards).
    fn pad(&self, m: usize) -> Self {
        let mut c = self.c.clone();
        c.resize(m, self.zero.clone());
        Self::new(c, &self.zero)
    }
}

impl<K: fmt::Debug> fmt::Debug for PowerSeries<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} + O(x^{})", self.c, self.c.len())
    }
}
