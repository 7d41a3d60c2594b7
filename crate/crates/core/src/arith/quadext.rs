use std::fmt;
use std::sync::Arc;

use super::{DiffField, Field, Rat, RatFun, UPoly};

/// Defining data of a quadratic extension Q(x)[y]/(y² + p₁y + p₀).
#[derive(PartialEq)]
pub struct QuadModulus {
    pub p1: RatFun<Rat>,
    pub p0: RatFun<Rat>,
    /// dy/dx expressed in the extension, as (c₀, c₁).
    dy: (RatFun<Rat>, RatFun<Rat>),
}

impl fmt::Debug for QuadModulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "y^2 + ({})*y + ({})", self.p1, self.p0)
    }
}

impl QuadModulus {
    /// From the polynomial a₂y² + a₁y + a₀ (a_j ∈ Q(x)); returns `None` when
    /// the discriminant vanishes (not squarefree) or a₂ = 0.
    pub fn new(a2: &RatFun<Rat>, a1: &RatFun<Rat>, a0: &RatFun<Rat>) -> Option<Arc<Self>> {
        let inv = a2.finv()?;
        let p1 = a1.fmul(&inv);
        let p0 = a0.fmul(&inv);
        let disc = p1.fmul(&p1).fsub(&p0.fmul(&p0.from_int_like(4)));
        if disc.is_zero() {
            return None;
        }
        // y' = -(p1' y + p0') / (2y + p1); invert 2y + p1 via its conjugate.
        // (2y + p1)(-2y - p1) = -(4y² + 4p1 y + p1²) = 4p0 - p1² = -disc
        let two = p1.from_int_like(2);
        let num = (p0.derive().fneg(), p1.derive().fneg());
        let conj = (p1.fneg(), two.fneg());
        let ndisc = disc.fneg();
        let prod = mul_raw(&num, &conj, &p1, &p0);
        let ninv = ndisc.finv()?;
        let dy = (prod.0.fmul(&ninv), prod.1.fmul(&ninv));
        Some(Arc::new(QuadModulus { p1, p0, dy }))
    }

    /// From a minimal polynomial given by polynomial coefficients [a₀, a₁, a₂].
    pub fn from_poly_coeffs(a: &[UPoly<Rat>; 3]) -> Option<Arc<Self>> {
        let one = super::rint(1);
        let f = |p: &UPoly<Rat>| RatFun::from_poly(p.clone(), &one);
        Self::new(&f(&a[2]), &f(&a[1]), &f(&a[0]))
    }

    pub fn discriminant(&self) -> RatFun<Rat> {
        self.p1
            .fmul(&self.p1)
            .fsub(&self.p0.fmul(&self.p0.from_int_like(4)))
    }
}

fn mul_raw(
    a: &(RatFun<Rat>, RatFun<Rat>),
    b: &(RatFun<Rat>, RatFun<Rat>),
    p1: &RatFun<Rat>,
    p0: &RatFun<Rat>,
) -> (RatFun<Rat>, RatFun<Rat>) {
    // y² = -p1 y - p0
    let c0 = a.0.fmul(&b.0);
    let c1 = a.0.fmul(&b.1).fadd(&a.1.fmul(&b.0));
    let c2 = a.1.fmul(&b.1);
    (c0.fsub(&c2.fmul(p0)), c1.fsub(&c2.fmul(p1)))
}

/// Element c₀ + c₁·y of a quadratic extension of Q(x).
#[derive(Clone)]
pub struct QuadExt {
    pub c0: RatFun<Rat>,
    pub c1: RatFun<Rat>,
    modulus: Arc<QuadModulus>,
}

impl PartialEq for QuadExt {
    fn eq(&self, o: &Self) -> bool {
        self.c0 == o.c0 && self.c1 == o.c1
    }
}

impl fmt::Debug for QuadExt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) + ({})*y", self.c0, self.c1)
    }
}

impl QuadExt {
    pub fn new(c0: RatFun<Rat>, c1: RatFun<Rat>, modulus: Arc<QuadModulus>) -> Self {
        QuadExt { c0, c1, modulus }
    }

    pub fn generator(modulus: Arc<QuadModulus>) -> Self {
        let z = modulus.p1.zero_like();
        let o = modulus.p1.one_like();
        QuadExt::new(z, o, modulus)
    }

    pub fn from_base(c: RatFun<Rat>, modulus: Arc<QuadModulus>) -> Self {
        let z = c.zero_like();
        QuadExt::new(c, z, modulus)
    }

    pub fn modulus(&self) -> &Arc<QuadModulus> {
        &self.modulus
    }

    /// The element as a base-field value, when c₁ = 0.
    pub fn as_base(&self) -> Option<&RatFun<Rat>> {
        if self.c1.is_zero() {
            Some(&self.c0)
        } else {
            None
        }
    }

    /// Evaluate a rational function of Q(x) at this element.
    pub fn eval_ratfun(&self, f: &RatFun<Rat>) -> Self {
        let horner = |p: &UPoly<Rat>| {
            let mut acc = self.zero_like();
            for c in p.coeffs().iter().rev() {
                acc = acc
                    .fmul(self)
                    .fadd(&QuadExt::from_base(RatFun::constant(c.clone()), self.modulus.clone()));
            }
            acc
        };
        horner(f.num())
            .fdiv(&horner(f.den()))
            .expect("evaluation at a pole")
    }
}

impl Field for QuadExt {
    fn zero_like(&self) -> Self {
        QuadExt::new(self.c0.zero_like(), self.c0.zero_like(), self.modulus.clone())
    }
    fn one_like(&self) -> Self {
        QuadExt::new(self.c0.one_like(), self.c0.zero_like(), self.modulus.clone())
    }
    fn is_zero(&self) -> bool {
        self.c0.is_zero() && self.c1.is_zero()
    }
    fn fadd(&self, o: &Self) -> Self {
        QuadExt::new(self.c0.fadd(&o.c0), self.c1.fadd(&o.c1), self.modulus.clone())
    }
    fn fsub(&self, o: &Self) -> Self {
        QuadExt::new(self.c0.fsub(&o.c0), self.c1.fsub(&o.c1), self.modulus.clone())
    }
    fn fmul(&self, o: &Self) -> Self {
        let (c0, c1) = mul_raw(
            &(self.c0.clone(), self.c1.clone()),
            &(o.c0.clone(), o.c1.clone()),
            &self.modulus.p1,
            &self.modulus.p0,
        );
        QuadExt::new(c0, c1, self.modulus.clone())
    }
    fn fneg(&self) -> Self {
        QuadExt::new(self.c0.fneg(), self.c1.fneg(), self.modulus.clone())
    }
    fn finv(&self) -> Option<Self> {
        if self.c1.is_zero() {
            return self
                .c0
                .finv()
                .map(|i| QuadExt::from_base(i, self.modulus.clone()));
        }
        // conjugate of c0 + c1 y is (c0 - c1 p1) - c1 y
        let m = &self.modulus;
        let conj0 = self.c0.fsub(&self.c1.fmul(&m.p1));
        let conj1 = self.c1.fneg();
        let norm = self
            .c0
            .fmul(&self.c0)
            .fsub(&self.c0.fmul(&self.c1).fmul(&m.p1))
            .fadd(&self.c1.fmul(&self.c1).fmul(&m.p0));
        let ni = norm.finv()?;
        Some(QuadExt::new(conj0.fmul(&ni), conj1.fmul(&ni), m.clone()))
    }
    fn from_int_like(&self, n: i64) -> Self {
        QuadExt::from_base(self.c0.from_int_like(n), self.modulus.clone())
    }
    fn from_rat_like(&self, r: &Rat) -> Option<Self> {
        Some(QuadExt::from_base(RatFun::from_rat(r.clone()), self.modulus.clone()))
    }
}

impl DiffField for QuadExt {
    fn derive(&self) -> Self {
        let dy = QuadExt::new(
            self.modulus.dy.0.clone(),
            self.modulus.dy.1.clone(),
            self.modulus.clone(),
        );
        let base = QuadExt::new(self.c0.derive(), self.c1.derive(), self.modulus.clone());
        base.fadd(&QuadExt::from_base(self.c1.clone(), self.modulus.clone()).fmul(&dy))
    }
}
