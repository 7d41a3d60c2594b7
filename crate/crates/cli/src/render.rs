//! Human-readable forms of rational functions and prefactors.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use hypsolve::arith::{factor_over_q, rint, Field, Rat, RatFun, UPoly};

fn compact(p: &UPoly<Rat>) -> String {
    p.render("x").replace(' ', "")
}

fn rat_str(r: &Rat) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// f scaled to integer coefficients with gcd 1, and the scale used.
fn primitive(f: &UPoly<Rat>) -> (UPoly<Rat>, Rat) {
    let l = f.coeffs().iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let g = f.coeffs().iter().fold(BigInt::zero(), |acc, c| acc.gcd(&(c * Rat::from_integer(l.clone())).to_integer()));
    let s = Rat::new(l, g);
    (f.scale(&s), s)
}

/// Irreducible integer factors with multiplicities, and the leftover
/// rational content.
fn integer_factors(p: &UPoly<Rat>) -> (Vec<(UPoly<Rat>, usize)>, Rat) {
    let mut c = p.lc().unwrap().clone();
    let mut out = Vec::new();
    for (f, k) in factor_over_q(p) {
        let (f, s) = primitive(&f);
        for _ in 0..k {
            c /= &s;
        }
        out.push((f, k));
    }
    (out, c)
}

/// c times a product of integer factors with multiplicities.
fn product(c: &Rat, fs: &[(UPoly<Rat>, usize)]) -> (String, usize) {
    let mut parts = Vec::new();
    for (f, k) in fs.iter().cloned() {
        let base = if f.degree() == Some(1) && Zero::is_zero(&f.coeffs()[0]) {
            "x".to_string()
        } else {
            format!("({})", compact(&f))
        };
        parts.push(if k > 1 { format!("{base}^{k}") } else { base });
    }
    let n = parts.len() + usize::from(!One::is_one(c));
    if parts.is_empty() {
        return (rat_str(c), n);
    }
    let body = parts.join("*");
    let s = if One::is_one(c) {
        body
    } else if *c == rint(-1) {
        format!("-{body}")
    } else {
        format!("{}*{body}", rat_str(c))
    };
    (s, n)
}

/// A rational function as (content)·Π factors / Π factors.
pub fn factored(r: &RatFun<Rat>) -> String {
    if r.is_zero() {
        return "0".into();
    }
    let (nf, cn) = integer_factors(r.num());
    let (df, cd) = integer_factors(r.den());
    let c = cn / cd;
    let (num, _) = product(&Rat::from_integer(c.numer().clone()), &nf);
    if df.is_empty() && c.is_integer() {
        return num;
    }
    let (den, n) = product(&Rat::from_integer(c.denom().clone()), &df);
    if n > 1 {
        format!("{num}/({den})")
    } else {
        format!("{num}/{den}")
    }
}

/// r = Σ eᵢ·mᵢ′/mᵢ with constant eᵢ, if r has that shape.
pub fn log_combination(r: &RatFun<Rat>) -> Option<Vec<(UPoly<Rat>, Rat)>> {
    if r.is_zero() {
        return Some(Vec::new());
    }
    if r.num().deg() >= r.den().deg() {
        return None;
    }
    let mut out = Vec::new();
    for (m, k) in factor_over_q(r.den()) {
        if k > 1 {
            return None;
        }
        let cof = r.den().exact_div(&m);
        let w = (&cof * &m.derivative()).rem(&m);
        let (_, s, _) = w.xgcd(&m);
        let res = (r.num() * &s).rem(&m);
        if !res.is_constant() {
            return None;
        }
        out.push((m, res.coeff_or_zero(0, &rint(0))));
    }
    let one = rint(1);
    let sum = out.iter().fold(RatFun::from_rat(rint(0)), |acc, (m, e)| {
        let md = RatFun::from_poly(m.derivative(), &one);
        acc.fadd(&md.fdiv(&RatFun::from_poly(m.clone(), &one)).unwrap().fmul(&RatFun::from_rat(e.clone())))
    });
    (sum == *r).then_some(out)
}

/// exp(∫r dx), as a product of powers when possible.
pub fn prefactor(r: &RatFun<Rat>) -> String {
    let Some(terms) = log_combination(r) else {
        return format!("exp(∫({}) dx)", r.render("x"));
    };
    if terms.is_empty() {
        return "1".into();
    }
    terms
        .iter()
        .map(|(m, e)| {
            let m = &primitive(m).0;
            let base = if m.degree() == Some(1) && Zero::is_zero(&m.coeffs()[0]) {
                "x".to_string()
            } else {
                format!("({})", compact(m))
            };
            if One::is_one(e) {
                base
            } else if e.is_integer() && e > &rint(0) {
                format!("{base}^{}", rat_str(e))
            } else {
                format!("{base}^({})", rat_str(e))
            }
        })
        .collect::<Vec<_>>()
        .join("*")
}
