use std::fmt;

use super::{DiffField, Field, Rat, UPoly};

/// Reduced rational function N/D with D monic and gcd(N, D) = 1.
#[derive(Clone, PartialEq)]
pub struct RatFun<K> {
    num: UPoly<K>,
    den: UPoly<K>,
}

impl<K: Field> RatFun<K> {
    pub fn new(num: UPoly<K>, den: UPoly<K>) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        if num.is_zero() {
            let one = den.lc().unwrap().one_like();
            return RatFun {
                num,
                den: UPoly::constant(one),
            };
        }
        let g = num.gcd(&den);
        let (mut n, mut d) = if g.is_constant() {
            (num, den)
        } else {
            (num.exact_div(&g), den.exact_div(&g))
        };
        let l = d.lc().unwrap().finv().expect("unit leading coefficient");
        if !l.is_one() {
            n = n.scale(&l);
            d = d.scale(&l);
        }
        RatFun { num: n, den: d }
    }

    pub fn from_poly(p: UPoly<K>, one: &K) -> Self {
        RatFun {
            num: p,
            den: UPoly::constant(one.one_like()),
        }
    }

    pub fn constant(c: K) -> Self {
        let one = c.one_like();
        RatFun {
            num: UPoly::constant(c),
            den: UPoly::constant(one),
        }
    }

    pub fn num(&self) -> &UPoly<K> {
        &self.num
    }

    pub fn den(&self) -> &UPoly<K> {
        &self.den
    }

    fn one_elem(&self) -> K {
        self.den.lc().unwrap().one_like()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_constant()
    }

    pub fn is_constant(&self) -> bool {
        self.num.is_constant() && self.den.is_constant()
    }

    /// Constant value if this is a constant.
    pub fn as_constant(&self) -> Option<K> {
        if self.is_constant() {
            Some(self.num.coeff_or_zero(0, &self.one_elem()))
        } else {
            None
        }
    }

    /// Value at a point, `None` at a pole.
    pub fn eval(&self, x: &K) -> Option<K> {
        self.num.eval(x).fdiv(&self.den.eval(x))
    }

    /// self(g)
    pub fn compose(&self, g: &Self) -> Self {
        let horner = |p: &UPoly<K>| {
            let mut acc = self.zero_like();
            for c in p.coeffs().iter().rev() {
                acc = acc.fmul(g).fadd(&RatFun::constant(c.clone()));
            }
            acc
        };
        horner(&self.num)
            .fdiv(&horner(&self.den))
            .expect("composition hits a pole")
    }

    pub fn map<L: Field>(&self, f: impl Fn(&K) -> L) -> RatFun<L> {
        RatFun::new(self.num.map(&f), self.den.map(&f))
    }

    /// Degree as a map P¹ → P¹: max(deg N, deg D).
    pub fn map_degree(&self) -> usize {
        self.num.degree().unwrap_or(0).max(self.den.degree().unwrap_or(0))
    }
}

impl<K: Field> Field for RatFun<K> {
    fn zero_like(&self) -> Self {
        RatFun {
            num: UPoly::zero(),
            den: UPoly::constant(self.one_elem()),
        }
    }
    fn one_like(&self) -> Self {
        RatFun::constant(self.one_elem())
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
    fn fadd(&self, o: &Self) -> Self {
        if self.den == o.den {
            return RatFun::new(&self.num + &o.num, self.den.clone());
        }
        RatFun::new(
            &(&self.num * &o.den) + &(&o.num * &self.den),
            &self.den * &o.den,
        )
    }
    fn fsub(&self, o: &Self) -> Self {
        self.fadd(&o.fneg())
    }
    fn fmul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return self.zero_like();
        }
        RatFun::new(&self.num * &o.num, &self.den * &o.den)
    }
    fn fneg(&self) -> Self {
        RatFun {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
    fn finv(&self) -> Option<Self> {
        if self.num.is_zero() {
            None
        } else {
            Some(RatFun::new(self.den.clone(), self.num.clone()))
        }
    }
    fn from_int_like(&self, n: i64) -> Self {
        RatFun::constant(self.one_elem().from_int_like(n))
    }
    fn from_rat_like(&self, r: &Rat) -> Option<Self> {
        self.one_elem().from_rat_like(r).map(RatFun::constant)
    }
}

impl<K: Field> DiffField for RatFun<K> {
    fn derive(&self) -> Self {
        let n = &(&self.num.derivative() * &self.den) - &(&self.num * &self.den.derivative());
        RatFun::new(n, &self.den * &self.den)
    }
}

impl<K: Field> fmt::Debug for RatFun<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?})/({:?})", self.num, self.den)
    }
}

impl RatFun<Rat> {
    pub fn x() -> Self {
        RatFun::from_poly(UPoly::x(), &super::rint(1))
    }

    pub fn from_rat(r: Rat) -> Self {
        RatFun::constant(r)
    }

    pub fn from_ints(num: &[i64], den: &[i64]) -> Self {
        RatFun::new(UPoly::from_ints(num), UPoly::from_ints(den))
    }

    /// Render as an exact expression in `var`.
    pub fn render(&self, var: &str) -> String {
        let n = self.num.render(var);
        if self.den.is_constant() {
            return n;
        }
        let n = if self.num.coeffs().iter().filter(|c| !num_traits::Zero::is_zero(*c)).count() > 1 {
            format!("({n})")
        } else {
            n
        };
        let d = self.den.render(var);
        let d = if d.contains([' ', '*', '/']) { format!("({d})") } else { d };
        format!("{n}/{d}")
    }
}

impl fmt::Display for RatFun<Rat> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render("x"))
    }
}
