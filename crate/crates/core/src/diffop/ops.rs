use std::fmt;

use crate::arith::{solve_linear, DiffField, Field, QuadExt, Rat, RatFun};

use super::DiffOpError;

/// Linear differential operator Σ A_i ∂^i with coefficients in a
/// differential field, stored lowest order first.
#[derive(Clone, PartialEq)]
pub struct DiffOp<F> {
    c: Vec<F>,
}

/// Gauge operator r₁∂ + r₀.
#[derive(Clone, Debug, PartialEq)]
pub struct GaugeOperator<F> {
    pub r0: F,
    pub r1: F,
}

impl<F: DiffField> GaugeOperator<F> {
    pub fn new(r0: F, r1: F) -> Self {
        GaugeOperator { r0, r1 }
    }

    pub fn as_op(&self) -> DiffOp<F> {
        DiffOp::new(vec![self.r0.clone(), self.r1.clone()])
    }

    pub fn is_identity(&self) -> bool {
        self.r1.is_zero() && self.r0.is_one()
    }
}

impl<F: DiffField> DiffOp<F> {
    /// From coefficients [A₀, …, A_n]; trailing zeros are dropped.
    pub fn new(mut c: Vec<F>) -> Self {
        while c.len() > 1 && c.last().is_some_and(|a| a.is_zero()) {
            c.pop();
        }
        DiffOp { c }
    }

    pub fn scalar(a: F) -> Self {
        DiffOp { c: vec![a] }
    }

    /// The operator ∂.
    pub fn d(like: &F) -> Self {
        DiffOp {
            c: vec![like.zero_like(), like.one_like()],
        }
    }

    pub fn order(&self) -> usize {
        self.c.len() - 1
    }

    pub fn coeffs(&self) -> &[F] {
        &self.c
    }

    pub fn coeff(&self, i: usize) -> F {
        self.c.get(i).cloned().unwrap_or_else(|| self.c[0].zero_like())
    }

    pub fn lc(&self) -> &F {
        self.c.last().unwrap()
    }

    pub fn is_zero(&self) -> bool {
        self.c.len() == 1 && self.c[0].is_zero()
    }

    fn zero_like(&self) -> F {
        self.c[0].zero_like()
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.c.len().max(o.c.len());
        Self::new((0..n).map(|i| self.coeff(i).fadd(&o.coeff(i))).collect())
    }

    pub fn sub(&self, o: &Self) -> Self {
        let n = self.c.len().max(o.c.len());
        Self::new((0..n).map(|i| self.coeff(i).fsub(&o.coeff(i))).collect())
    }

    /// Left multiplication by a coefficient.
    pub fn scale(&self, a: &F) -> Self {
        Self::new(self.c.iter().map(|b| a.fmul(b)).collect())
    }

    /// ∂·self
    fn d_times(&self) -> Self {
        let mut out = vec![self.zero_like(); self.c.len() + 1];
        for (j, b) in self.c.iter().enumerate() {
            out[j] = out[j].fadd(&b.derive());
            out[j + 1] = out[j + 1].fadd(b);
        }
        Self::new(out)
    }

    /// Product in the Ore ring, ∂·a = a·∂ + a′.
    pub fn mul(&self, o: &Self) -> Self {
        let mut acc = Self::scalar(self.zero_like());
        let mut di = o.clone();
        for (i, a) in self.c.iter().enumerate() {
            if i > 0 {
                di = di.d_times();
            }
            if !a.is_zero() {
                acc = acc.add(&di.scale(a));
            }
        }
        acc
    }

    /// (Q, R) with self = Q·b + R and ord R < ord b.
    pub fn right_divide(&self, b: &Self) -> (Self, Self) {
        assert!(!b.is_zero(), "division by the zero operator");
        let m = b.order();
        let ilc = b.lc().finv().expect("nonzero leading coefficient");
        let mut q = Self::scalar(self.zero_like());
        let mut r = self.clone();
        while !r.is_zero() && r.order() >= m {
            let k = r.order() - m;
            let t = r.lc().fmul(&ilc);
            let mut tc = vec![self.zero_like(); k + 1];
            tc[k] = t;
            let term = Self::new(tc);
            r = r.sub(&term.mul(b));
            q = q.add(&term);
        }
        (q, r)
    }

    /// Remainder of ∂·r modulo b (r of order < ord b).
    fn d_rem(r: &Self, b: &Self) -> Self {
        r.d_times().right_divide(b).1
    }

    /// Least common left multiple, monic.
    pub fn lclm(&self, b: &Self) -> Self {
        let (na, nb) = (self.order(), b.order());
        let z = self.zero_like();
        let one = z.one_like();
        let vec_of = |ra: &Self, rb: &Self| -> Vec<F> {
            let mut v: Vec<F> = (0..na).map(|i| ra.coeff(i)).collect();
            v.extend((0..nb).map(|i| rb.coeff(i)));
            v
        };
        let mut ra = Self::scalar(one.clone()).right_divide(self).1;
        let mut rb = Self::scalar(one.clone()).right_divide(b).1;
        let mut cols = vec![vec_of(&ra, &rb)];
        for m in 1..=na + nb {
            ra = Self::d_rem(&ra, self);
            rb = Self::d_rem(&rb, b);
            let target = vec_of(&ra, &rb);
            // Σ_{k<m} c_k v_k = −v_m
            let rows: Vec<Vec<F>> = (0..na + nb)
                .map(|i| cols.iter().map(|v| v[i].clone()).collect())
                .collect();
            let rhs: Vec<F> = target.iter().map(|t| t.fneg()).collect();
            if let Some(sol) = solve_linear(&rows, &rhs, m, &z) {
                let mut c = sol.particular;
                c.push(one.clone());
                return Self::new(c);
            }
            cols.push(target);
        }
        unreachable!("lclm exists with order at most ord A + ord B")
    }

    /// Monic representative (leading coefficient 1).
    pub fn monic(&self) -> Self {
        let i = self.lc().finv().expect("nonzero operator");
        self.scale(&i)
    }

    /// Equality up to left multiplication by a nonzero coefficient.
    pub fn same_up_to_factor(&self, o: &Self) -> bool {
        self.order() == o.order() && self.monic() == o.monic()
    }

    /// Apply to an element of the coefficient field.
    pub fn apply(&self, y: &F) -> F {
        let mut acc = y.zero_like();
        let mut dy = y.clone();
        for (i, a) in self.c.iter().enumerate() {
            if i > 0 {
                dy = dy.derive();
            }
            acc = acc.fadd(&a.fmul(&dy));
        }
        acc
    }

    /// Substitute ∂ ↦ ∂ − r: annihilates exp(∫r)·y for y ∈ V(self).
    pub fn exp_product(&self, r: &F) -> Self {
        let shift = Self::new(vec![r.fneg(), r.one_like()]);
        let mut acc = Self::scalar(self.zero_like());
        let mut pw = Self::scalar(r.one_like());
        for (i, a) in self.c.iter().enumerate() {
            if i > 0 {
                pw = shift.mul(&pw);
            }
            acc = acc.add(&pw.scale(a));
        }
        acc
    }

    /// lclm(self, G) right-divided by G; maps V(self) onto V(result) via G.
    pub fn gauge_transform(&self, g: &GaugeOperator<F>) -> Result<Self, DiffOpError> {
        let gop = g.as_op();
        if gop.is_zero() {
            return Err(DiffOpError::ZeroGauge);
        }
        if gop.order() == 0 {
            // y ↦ r₀y is an exp-product with r = r₀′/r₀
            let r = g.r0.derive().fdiv(&g.r0).unwrap();
            return Ok(self.exp_product(&r));
        }
        if self.right_divide(&gop).1.is_zero() {
            return Err(DiffOpError::Reducible);
        }
        let m = self.lclm(&gop);
        let (q, r) = m.right_divide(&gop);
        debug_assert!(r.is_zero());
        Ok(q)
    }

    /// H = s₁∂ + s₀ with H·G ≡ 1 modulo left multiples of self (order 2).
    pub fn inverse_gauge(&self, g: &GaugeOperator<F>) -> Result<GaugeOperator<F>, DiffOpError> {
        assert_eq!(self.order(), 2, "inverse gauge is for order-2 operators");
        let z = self.zero_like();
        let one = z.one_like();
        let gop = g.as_op();
        // remainders of G and ∂·G modulo self
        let r0 = gop.right_divide(self).1;
        let r1 = gop.d_times().right_divide(self).1;
        let rows = vec![
            vec![r0.coeff(0), r1.coeff(0)],
            vec![r0.coeff(1), r1.coeff(1)],
        ];
        let sol = solve_linear(&rows, &[one, z.clone()], 2, &z).ok_or(DiffOpError::Reducible)?;
        if !sol.kernel.is_empty() {
            return Err(DiffOpError::Reducible);
        }
        let s = sol.particular;
        Ok(GaugeOperator::new(s[0].clone(), s[1].clone()))
    }

    pub fn map<G: DiffField>(&self, f: impl Fn(&F) -> G) -> DiffOp<G> {
        DiffOp::new(self.c.iter().map(f).collect())
    }
}

/// Coefficient fields into which rational functions of x can be
/// substituted, a ↦ a(self).
pub trait Substitute: DiffField {
    fn substitute_into(&self, a: &RatFun<Rat>) -> Self;
    fn lift(&self, a: &RatFun<Rat>) -> Self;
}

impl Substitute for RatFun<Rat> {
    fn substitute_into(&self, a: &RatFun<Rat>) -> Self {
        a.compose(self)
    }
    fn lift(&self, a: &RatFun<Rat>) -> Self {
        a.clone()
    }
}

impl Substitute for QuadExt {
    fn substitute_into(&self, a: &RatFun<Rat>) -> Self {
        self.eval_ratfun(a)
    }
    fn lift(&self, a: &RatFun<Rat>) -> Self {
        QuadExt::from_base(a.clone(), self.modulus().clone())
    }
}

impl DiffOp<RatFun<Rat>> {
    /// Operator annihilating y(f) for every y ∈ V(self): (x, ∂) ↦ (f, ∂/f′).
    pub fn change_of_variables<F: Substitute>(&self, f: &F) -> Result<DiffOp<F>, DiffOpError> {
        let df = f.derive();
        let idf = df.finv().ok_or(DiffOpError::ConstantPullback)?;
        let step = DiffOp::new(vec![f.zero_like(), idf]);
        let mut acc = DiffOp::scalar(f.zero_like());
        let mut pw = DiffOp::scalar(f.one_like());
        for (i, a) in self.c.iter().enumerate() {
            if i > 0 {
                pw = step.mul(&pw);
            }
            acc = acc.add(&pw.scale(&f.substitute_into(a)));
        }
        Ok(acc.monic())
    }

    /// Embed into a larger coefficient field.
    pub fn lift_to<F: Substitute>(&self, like: &F) -> DiffOp<F> {
        DiffOp::new(self.c.iter().map(|a| like.lift(a)).collect())
    }

    /// Polynomial coefficients with integer content 1 and positive leading
    /// coefficient.
    pub fn primitive(&self) -> Self {
        use num_integer::Integer;
        use num_traits::{One, Signed, Zero};
        let one = crate::arith::rint(1);
        let mut den = crate::arith::UPoly::from_ints(&[1]);
        for a in &self.c {
            let g = den.gcd(a.den());
            den = (&den * a.den()).exact_div(&g);
        }
        let polys: Vec<_> = self
            .c
            .iter()
            .map(|a| (a.num() * &den).exact_div(a.den()))
            .collect();
        let mut l = num_bigint::BigInt::one();
        for p in &polys {
            for c in p.coeffs() {
                l = l.lcm(c.denom());
            }
        }
        let mut g = num_bigint::BigInt::zero();
        for p in &polys {
            for c in p.coeffs() {
                g = g.gcd(&(c.numer() * (&l / c.denom())));
            }
        }
        let mut s = Rat::new(l, if g.is_zero() { One::one() } else { g });
        if polys.last().unwrap().lc().is_some_and(|c| c.is_negative()) {
            s = -s;
        }
        DiffOp::new(
            polys
                .iter()
                .map(|p| RatFun::from_poly(p.scale(&s), &one))
                .collect(),
        )
    }

    /// Render as A₂*Dx^2 + A₁*Dx + A₀ with polynomial coefficients.
    pub fn render(&self) -> String {
        let p = self.primitive();
        let mut out = String::new();
        for (i, a) in p.c.iter().enumerate().rev() {
            if a.is_zero() {
                continue;
            }
            let s = a.render("x");
            let terms = a.num().coeffs().iter().filter(|c| !num_traits::Zero::is_zero(*c)).count();
            let (neg, coef) = match s.strip_prefix('-') {
                Some(rest) if terms == 1 => (true, rest.to_string()),
                _ if terms > 1 => (false, format!("({s})")),
                _ => (false, s),
            };
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            out.push_str(&match (i, coef.as_str()) {
                (0, _) => coef,
                (1, "1") => "Dx".to_string(),
                (1, _) => format!("{coef}*Dx"),
                (_, "1") => format!("Dx^{i}"),
                _ => format!("{coef}*Dx^{i}"),
            });
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }
}

impl<F: fmt::Debug> fmt::Debug for DiffOp<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DiffOp{:?}", self.c)
    }
}
