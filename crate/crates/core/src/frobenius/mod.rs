//! Local solutions at regular singular points and singularity types.

use crate::arith::{is_integer, rat_to_i64, rint, Field, NfElem, Rat, RatFun, UPoly};
use crate::diffop::{
    exponent_pair, move_algebraic_to_zero, move_point_to_zero, singularities, DiffOp, DiffOpError,
    Exponents, LocalOp, Place, QOp,
};
use crate::series::{LogSeries, PowerSeries};

/// Two local solutions at x = 0.
///
/// Without logarithms y₁, y₂ have the exponents e₁ ≤ e₂ and unit leading
/// coefficients. With a logarithm y₁ is the log-free solution (exponent
/// e₂) and y₂ = y₁·log x + y₁·h with h(0) = 0.
#[derive(Clone, Debug)]
pub struct FormalBasis<K> {
    pub exponents: Exponents<K>,
    pub logarithmic: bool,
    pub y: [LogSeries<K>; 2],
}

impl<K: Field> FormalBasis<K> {
    pub fn delta(&self) -> &Rat {
        &self.exponents.delta
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SingKind {
    Regular,
    False,
    Removable,
    TrueNonLog,
    TrueLog,
}

impl SingKind {
    pub fn is_true(self) -> bool {
        matches!(self, SingKind::TrueNonLog | SingKind::TrueLog)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SingClass {
    pub place: Place,
    pub delta: Rat,
    pub kind: SingKind,
}

struct Recurrence<K> {
    local: LocalOp<K>,
    polys: Vec<UPoly<K>>,
    dpolys: Vec<UPoly<K>>,
}

impl<K: Field> Recurrence<K> {
    fn new(local: LocalOp<K>) -> Self {
        Recurrence {
            local,
            polys: Vec::new(),
            dpolys: Vec::new(),
        }
    }

    fn ensure(&mut self, t: usize) {
        while self.polys.len() <= t {
            let p = self.local.f_poly(self.polys.len());
            self.dpolys.push(p.derivative());
            self.polys.push(p);
        }
    }

    fn f(&mut self, t: usize, lam: &K) -> K {
        self.ensure(t);
        self.polys[t].eval(lam)
    }

    fn df(&mut self, t: usize, lam: &K) -> K {
        self.ensure(t);
        self.dpolys[t].eval(lam)
    }

    fn one(&self) -> K {
        self.local.one().clone()
    }

    fn shifted(&self, e: &K, k: i64) -> K {
        e.fadd(&e.from_int_like(k))
    }

    /// Σ_{t=1}^{n} F_t(e + n − t)·c_{n−t}
    fn tail(&mut self, e: &K, c: &[K], n: usize) -> K {
        let mut acc = self.one().zero_like();
        for t in 1..=n {
            let ct = &c[n - t];
            if ct.is_zero() {
                continue;
            }
            let lam = self.shifted(e, (n - t) as i64);
            acc = acc.fadd(&self.f(t, &lam).fmul(ct));
        }
        acc
    }

    /// Coefficients of x^e·Σ c_k x^k with c₀ = 1; `free` lists indices where
    /// F₀(e + k) vanishes, and the obstruction there is returned.
    fn plain(&mut self, e: &K, a: usize, stop: Option<usize>) -> (Vec<K>, Option<K>) {
        let one = self.one();
        let mut c = vec![one.clone()];
        for n in 1..a {
            let rhs = self.tail(e, &c, n).fneg();
            if Some(n) == stop {
                if !rhs.is_zero() {
                    return (c, Some(rhs));
                }
                c.push(one.zero_like());
                continue;
            }
            let d = self.f(0, &self.shifted(e, n as i64));
            c.push(rhs.fdiv(&d).expect("indicial polynomial vanishes off the exponents"));
        }
        (c, None)
    }
}

/// Local solutions at x = 0 of an order-2 operator, `a` terms each.
pub fn formal_solutions_at_zero<K: Field>(
    l: &DiffOp<RatFun<K>>,
    a: usize,
) -> Result<FormalBasis<K>, DiffOpError> {
    assert_eq!(l.order(), 2, "formal solutions are for order-2 operators");
    let local = LocalOp::new(l);
    if !local.is_regular_singular() {
        return Err(DiffOpError::Irregular);
    }
    let ex = exponent_pair(&local.indicial())?;
    let mut rec = Recurrence::new(local);
    let one = rec.one();
    let like = one.zero_like();
    let a = a.max(1);
    if !is_integer(&ex.delta) {
        let (c1, _) = rec.plain(&ex.e1, a, None);
        let (c2, _) = rec.plain(&ex.e2, a, None);
        let y1 = LogSeries::plain(ex.e1.clone(), PowerSeries::new(c1, &like));
        let y2 = LogSeries::plain(ex.e2.clone(), PowerSeries::new(c2, &like));
        return Ok(FormalBasis {
            exponents: ex,
            logarithmic: false,
            y: [y1, y2],
        });
    }
    let nn = rat_to_i64(&ex.delta).unwrap() as usize;
    let (ca, _) = rec.plain(&ex.e2, a, None);
    let mut b: Vec<K>;
    let beta: K;
    if nn > 0 {
        let (cb, obstruction) = rec.plain(&ex.e1, a, Some(nn));
        match obstruction {
            None => {
                let y1 = LogSeries::plain(ex.e1.clone(), PowerSeries::new(cb, &like));
                let y2 = LogSeries::plain(ex.e2.clone(), PowerSeries::new(ca, &like));
                return Ok(FormalBasis {
                    exponents: ex,
                    logarithmic: false,
                    y: [y1, y2],
                });
            }
            Some(ob) => {
                // β·F₀′(e₂) + obstruction-tail = 0 at n = N
                let d0 = rec.df(0, &ex.e2);
                beta = ob.fdiv(&d0).expect("simple root of the indicial polynomial");
                b = cb;
                b.push(like.clone());
            }
        }
    } else {
        beta = one.clone();
        b = vec![like.clone()];
    }
    // b_n F₀(e₁+n) = −Σ_{t≥1} F_t(e₁+n−t) b_{n−t} − β Σ_{t≥0} F_t′(e₂+n−N−t) a_{n−N−t}
    let total = a + nn;
    for n in b.len()..total {
        let mut rhs = rec.tail(&ex.e1, &b, n).fneg();
        let m = n - nn;
        let mut lsum = like.clone();
        for t in 0..=m {
            let at = &ca[m - t];
            let lam = rec.shifted(&ex.e2, (m - t) as i64);
            lsum = lsum.fadd(&rec.df(t, &lam).fmul(at));
        }
        rhs = rhs.fsub(&beta.fmul(&lsum));
        let d = rec.f(0, &rec.shifted(&ex.e1, n as i64));
        b.push(rhs.fdiv(&d).expect("indicial polynomial vanishes off the exponents"));
    }
    // normalize: divide by β, then remove the x^N·y₁ component so h(0) = 0
    let ibeta = beta.finv().unwrap();
    let mut s0: Vec<K> = b.iter().map(|v| v.fmul(&ibeta)).collect();
    let yb = PowerSeries::new(ca.clone(), &like);
    let hs = PowerSeries::new(s0.clone(), &like).div(&yb).unwrap();
    let c = hs.coeff(nn);
    for (k, av) in ca.iter().enumerate() {
        if k + nn < s0.len() {
            s0[k + nn] = s0[k + nn].fsub(&c.fmul(av));
        }
    }
    s0.truncate(a);
    let mut s1 = vec![like.clone(); nn.min(a)];
    s1.extend(ca.iter().take(a.saturating_sub(nn)).cloned());
    let y1 = LogSeries::plain(ex.e2.clone(), PowerSeries::new(ca, &like));
    let y2 = LogSeries::new(
        ex.e1.clone(),
        PowerSeries::new(s0, &like),
        PowerSeries::new(s1, &like),
    );
    Ok(FormalBasis {
        exponents: ex,
        logarithmic: true,
        y: [y1, y2],
    })
}

/// Local solutions at a rational place or infinity, in its local parameter.
pub fn formal_solutions(l: &QOp, p: &Place, a: usize) -> Result<FormalBasis<Rat>, DiffOpError> {
    formal_solutions_at_zero(&move_point_to_zero(l, p)?, a)
}

/// True iff L is singular at the place.
pub fn is_singular_at(l: &QOp, p: &Place) -> bool {
    let lc = l.primitive().lc().num().clone();
    match p {
        Place::Rational(a) => num_traits::Zero::is_zero(&lc.eval(a)),
        Place::Infinity => singularities(l).contains(&Place::Infinity),
        Place::Algebraic(m) => lc.rem(m).is_zero(),
    }
}

/// Exponent difference and log status at a place.
fn local_data(l: &QOp, p: &Place) -> Result<(Rat, bool), DiffOpError> {
    fn probe<K: Field>(op: &DiffOp<RatFun<K>>) -> Result<(Rat, bool), DiffOpError> {
        let local = LocalOp::new(op);
        if !local.is_regular_singular() {
            return Err(DiffOpError::Irregular);
        }
        let ex = exponent_pair(&local.indicial())?;
        if !is_integer(&ex.delta) {
            return Ok((ex.delta, false));
        }
        let n = rat_to_i64(&ex.delta).unwrap() as usize;
        let b = formal_solutions_at_zero(op, n + 1)?;
        Ok((ex.delta, b.logarithmic))
    }
    match p {
        Place::Algebraic(m) => probe::<NfElem>(&move_algebraic_to_zero(l, m)),
        _ => probe(&move_point_to_zero(l, p)?),
    }
}

/// Type of a place per its exponent difference and logarithms.
pub fn classify_singularity(l: &QOp, p: &Place) -> Result<SingClass, DiffOpError> {
    let (delta, log) = local_data(l, p)?;
    let kind = if !is_singular_at(l, p) {
        SingKind::Regular
    } else if log || !is_integer(&delta) {
        if log {
            SingKind::TrueLog
        } else {
            SingKind::TrueNonLog
        }
    } else if delta == rint(1) {
        SingKind::False
    } else {
        SingKind::Removable
    };
    Ok(SingClass {
        place: p.clone(),
        delta,
        kind,
    })
}

/// Classification of every singular place.
pub fn classify_all(l: &QOp) -> Result<Vec<SingClass>, DiffOpError> {
    singularities(l)
        .iter()
        .map(|p| classify_singularity(l, p))
        .collect()
}

/// Every singularity, including infinity, is regular singular.
pub fn is_regular_singular(l: &QOp) -> bool {
    singularities(l).iter().all(|p| match p {
        Place::Algebraic(m) => LocalOp::new(&move_algebraic_to_zero(l, m)).is_regular_singular(),
        _ => move_point_to_zero(l, p).is_ok_and(|m| LocalOp::new(&m).is_regular_singular()),
    })
}
