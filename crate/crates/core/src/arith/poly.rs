use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::Signed;

use super::{Field, Rat};

/// Dense univariate polynomial; `coeffs[i]` multiplies x^i.
///
/// Trailing zeros are always trimmed, so the zero polynomial has no
/// coefficients at all.
#[derive(Clone, PartialEq)]
pub struct UPoly<K> {
    coeffs: Vec<K>,
}

impl<K: Field> UPoly<K> {
    pub fn from_coeffs(mut coeffs: Vec<K>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UPoly { coeffs }
    }

    pub fn zero() -> Self {
        UPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: K) -> Self {
        Self::from_coeffs(vec![c])
    }

    /// c·x^k
    pub fn monomial(c: K, k: usize) -> Self {
        let mut v = vec![c.zero_like(); k + 1];
        v[k] = c;
        Self::from_coeffs(v)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with the convention deg 0 = -1.
    pub fn deg(&self) -> isize {
        self.coeffs.len() as isize - 1
    }

    pub fn coeffs(&self) -> &[K] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<K> {
        self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Option<&K> {
        self.coeffs.get(i)
    }

    /// Coefficient of x^i, using `like` to build a zero when absent.
    pub fn coeff_or_zero(&self, i: usize, like: &K) -> K {
        self.coeffs
            .get(i)
            .cloned()
            .unwrap_or_else(|| like.zero_like())
    }

    pub fn lc(&self) -> Option<&K> {
        self.coeffs.last()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn scale(&self, c: &K) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|a| a.fmul(c)).collect())
    }

    /// Multiply by x^k.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let z = self.coeffs[0].zero_like();
        let mut v = vec![z; k];
        v.extend(self.coeffs.iter().cloned());
        UPoly { coeffs: v }
    }

    pub fn monic(&self) -> Self {
        match self.lc() {
            None => Self::zero(),
            Some(l) => self.scale(&l.finv().expect("leading coefficient is a unit")),
        }
    }

    /// Euclidean division; the divisor's leading coefficient must be a unit.
    pub fn divrem(&self, other: &Self) -> (Self, Self) {
        let dl = other.lc().expect("division by zero polynomial");
        let inv = dl.finv().expect("non-invertible leading coefficient");
        let dd = other.coeffs.len() - 1;
        if self.coeffs.len() < other.coeffs.len() {
            return (Self::zero(), self.clone());
        }
        let mut r = self.coeffs.clone();
        let zero = dl.zero_like();
        let mut q = vec![zero; r.len() - dd];
        for i in (0..q.len()).rev() {
            let c = r[i + dd].fmul(&inv);
            if c.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                r[i + j] = r[i + j].fsub(&c.fmul(b));
            }
            q[i] = c;
        }
        r.truncate(dd);
        (Self::from_coeffs(q), Self::from_coeffs(r))
    }

    pub fn rem(&self, other: &Self) -> Self {
        self.divrem(other).1
    }

    /// Exact quotient; panics when the remainder is nonzero.
    pub fn exact_div(&self, other: &Self) -> Self {
        let (q, r) = self.divrem(other);
        assert!(r.is_zero(), "inexact polynomial division");
        q
    }

    /// Monic gcd (zero when both are zero).
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Extended gcd: returns (g, s, t) with s·self + t·other = g, g monic.
    pub fn xgcd(&self, other: &Self) -> (Self, Self, Self) {
        let one = match self.lc().or(other.lc()) {
            Some(c) => c.one_like(),
            None => return (Self::zero(), Self::zero(), Self::zero()),
        };
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (Self::constant(one.clone()), Self::zero());
        let (mut t0, mut t1) = (Self::zero(), Self::constant(one));
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1);
            r0 = std::mem::replace(&mut r1, r);
            let s = &s0 - &(&q * &s1);
            s0 = std::mem::replace(&mut s1, s);
            let t = &t0 - &(&q * &t1);
            t0 = std::mem::replace(&mut t1, t);
        }
        let inv = r0.lc().unwrap().finv().unwrap();
        (r0.scale(&inv), s0.scale(&inv), t0.scale(&inv))
    }

    pub fn eval(&self, x: &K) -> K {
        let mut acc = x.zero_like();
        for c in self.coeffs.iter().rev() {
            acc = acc.fmul(x).fadd(c);
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        Self::from_coeffs(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c.fmul(&c.from_int_like(i as i64)))
                .collect(),
        )
    }

    /// self(inner(x))
    pub fn compose(&self, inner: &Self) -> Self {
        let mut acc = Self::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * inner) + &Self::constant(c.clone());
        }
        acc
    }

    pub fn pow(&self, e: usize) -> Self {
        let mut acc = match self.coeffs.first().or(self.lc()) {
            Some(c) => Self::constant(c.one_like()),
            None => return if e == 0 { panic!("0^0") } else { Self::zero() },
        };
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Lowest index with a nonzero coefficient.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn map<L: Field>(&self, f: impl Fn(&K) -> L) -> UPoly<L> {
        UPoly::from_coeffs(self.coeffs.iter().map(f).collect())
    }

    pub fn try_map<L: Field>(&self, f: impl Fn(&K) -> Option<L>) -> Option<UPoly<L>> {
        self.coeffs
            .iter()
            .map(f)
            .collect::<Option<Vec<_>>>()
            .map(UPoly::from_coeffs)
    }
}

impl<K: Field> Add for &UPoly<K> {
    type Output = UPoly<K>;
    fn add(self, o: &UPoly<K>) -> UPoly<K> {
        let (long, short) = if self.coeffs.len() >= o.coeffs.len() {
            (self, o)
        } else {
            (o, self)
        };
        let mut v = long.coeffs.clone();
        for (a, b) in v.iter_mut().zip(short.coeffs.iter()) {
            *a = a.fadd(b);
        }
        UPoly::from_coeffs(v)
    }
}

impl<K: Field> Sub for &UPoly<K> {
    type Output = UPoly<K>;
    fn sub(self, o: &UPoly<K>) -> UPoly<K> {
        self + &(-o)
    }
}

impl<K: Field> Neg for &UPoly<K> {
    type Output = UPoly<K>;
    fn neg(self) -> UPoly<K> {
        UPoly {
            coeffs: self.coeffs.iter().map(|c| c.fneg()).collect(),
        }
    }
}

impl<K: Field> Mul for &UPoly<K> {
    type Output = UPoly<K>;
    fn mul(self, o: &UPoly<K>) -> UPoly<K> {
        if self.is_zero() || o.is_zero() {
            return UPoly::zero();
        }
        let z = self.coeffs[0].zero_like();
        let mut v = vec![z; self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                v[i + j] = v[i + j].fadd(&a.fmul(b));
            }
        }
        UPoly::from_coeffs(v)
    }
}

impl<K: Field> fmt::Debug for UPoly<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "UPoly{:?}", self.coeffs)
    }
}

impl UPoly<Rat> {
    pub fn from_ints(c: &[i64]) -> Self {
        Self::from_coeffs(c.iter().map(|&n| super::rint(n)).collect())
    }

    pub fn x() -> Self {
        Self::from_ints(&[0, 1])
    }

    /// Render with the given variable name, highest degree first.
    pub fn render(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if num_traits::Zero::is_zero(c) {
                continue;
            }
            let neg = c.is_negative();
            let a = c.abs();
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let one = num_traits::One::is_one(&a);
            let cs = if a.denom() == &num_bigint::BigInt::from(1) {
                a.numer().to_string()
            } else {
                format!("{}/{}", a.numer(), a.denom())
            };
            match i {
                0 => out.push_str(&cs),
                _ => {
                    if !one {
                        out.push_str(&cs);
                        out.push('*');
                    }
                    out.push_str(var);
                    if i > 1 {
                        out.push_str(&format!("^{i}"));
                    }
                }
            }
        }
        out
    }
}

impl fmt::Display for UPoly<Rat> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render("x"))
    }
}
