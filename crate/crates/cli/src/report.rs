//! Reports, their JSON form and the text layout.

use serde_json::{json, Value};

use hypsolve::arith::{QuadExt, QuadModulus, Rat, RatFun, UPoly};
use hypsolve::candidates::GhdoParams;
use hypsolve::diffop::{GaugeOperator, Place};
use hypsolve::quotient::{Branch, HypSolution, Prefactor, Pullback};

use crate::parse::parse_ratfun;
use crate::render::{factored, prefactor};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Status {
    Solved,
    NoSolutionFound,
    Unsupported,
    InvalidInput,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Solved => "solved",
            Status::NoSolutionFound => "no-solution-found",
            Status::Unsupported => "unsupported",
            Status::InvalidInput => "invalid-input",
        }
    }

    pub fn exit_code(self) -> i32 {
        self as i32
    }
}

#[derive(Clone, Debug)]
pub struct Report {
    pub status: Status,
    /// The parsed operator in canonical form.
    pub operator: Option<String>,
    pub solutions: Vec<HypSolution>,
    pub messages: Vec<String>,
    pub elapsed_ms: u128,
}

fn rat_str(r: &Rat) -> String {
    r.to_string()
}

fn parse_rat(v: &Value) -> Result<Rat, String> {
    v.as_str()
        .ok_or("expected a string")?
        .parse()
        .map_err(|_| format!("bad rational {v}"))
}

fn ratfun(v: &Value) -> Result<RatFun<Rat>, String> {
    parse_ratfun(v.as_str().ok_or("expected a string")?).map_err(|e| e.to_string())
}

fn poly(v: &Value) -> Result<UPoly<Rat>, String> {
    let r = ratfun(v)?;
    if !r.is_polynomial() {
        return Err(format!("expected a polynomial, got {v}"));
    }
    Ok(r.num().clone())
}

fn place_json(p: &Place) -> Value {
    match p {
        Place::Rational(a) => json!(rat_str(a)),
        Place::Infinity => json!("infinity"),
        Place::Algebraic(m) => json!({ "root_of": m.render("x") }),
    }
}

fn place_from(v: &Value) -> Result<Place, String> {
    if let Some(m) = v.get("root_of") {
        return Ok(Place::Algebraic(poly(m)?));
    }
    match v.as_str() {
        Some("infinity") => Ok(Place::Infinity),
        _ => Ok(Place::Rational(parse_rat(v)?)),
    }
}

pub fn solution_json(s: &HypSolution) -> Value {
    let p = &s.params;
    let pullback = match &s.pullback {
        Pullback::Rational(f) => json!({ "type": "rational", "expr": factored(f) }),
        Pullback::Algebraic { minpoly, branch } => json!({
            "type": "algebraic",
            "minpoly": minpoly.iter().map(|c| factored(&RatFun::from_poly(c.clone(), &Rat::from_integer(1.into())))).collect::<Vec<_>>(),
            "branch": {
                "place": place_json(&branch.place),
                "valuation": branch.valuation,
                "leading": rat_str(&branch.leading),
            },
        }),
    };
    let r = match &s.r {
        Prefactor::Rational(r) => json!(factored(r)),
        Prefactor::Algebraic(q) => json!({ "c0": factored(&q.c0), "c1": factored(&q.c1) }),
    };
    let gauge = match &s.gauge {
        Some(g) => json!({ "r0": factored(&g.r0), "r1": factored(&g.r1) }),
        None => Value::Null,
    };
    json!({
        "params": [rat_str(&p.a1), rat_str(&p.a2), rat_str(&p.b1)],
        "pullback": pullback,
        "r": r,
        "gauge": gauge,
        "certified": s.certified,
        "a_f": s.a_f,
        "d": s.d,
    })
}

/// Inverse of [`solution_json`].
pub fn solution_from_json(v: &Value) -> Result<HypSolution, String> {
    let params = v["params"].as_array().filter(|a| a.len() == 3).ok_or("params must have three entries")?;
    let params = GhdoParams::new(parse_rat(&params[0])?, parse_rat(&params[1])?, parse_rat(&params[2])?);
    let pb = &v["pullback"];
    let (pullback, r) = match pb["type"].as_str() {
        Some("rational") => (Pullback::Rational(ratfun(&pb["expr"])?), Prefactor::Rational(ratfun(&v["r"])?)),
        Some("algebraic") => {
            let m = pb["minpoly"].as_array().filter(|a| a.len() == 3).ok_or("minpoly must have three entries")?;
            let minpoly = [poly(&m[0])?, poly(&m[1])?, poly(&m[2])?];
            let modulus = QuadModulus::from_poly_coeffs(&minpoly).ok_or("minpoly is not quadratic")?;
            let b = &pb["branch"];
            let branch = Branch {
                place: place_from(&b["place"])?,
                valuation: b["valuation"].as_u64().ok_or("bad valuation")? as usize,
                leading: parse_rat(&b["leading"])?,
            };
            let r = QuadExt::new(ratfun(&v["r"]["c0"])?, ratfun(&v["r"]["c1"])?, modulus);
            (Pullback::Algebraic { minpoly, branch }, Prefactor::Algebraic(r))
        }
        _ => return Err("unknown pullback type".into()),
    };
    let gauge = match &v["gauge"] {
        Value::Null => None,
        g => Some(GaugeOperator::new(ratfun(&g["r0"])?, ratfun(&g["r1"])?)),
    };
    Ok(HypSolution {
        params,
        pullback,
        r,
        gauge,
        certified: v["certified"].as_bool().unwrap_or(false),
        a_f: v["a_f"].as_u64().unwrap_or(1) as usize,
        d: v["d"].as_u64().unwrap_or(0) as usize,
    })
}

impl Report {
    pub fn to_json(&self) -> Value {
        json!({
            "status": self.status.as_str(),
            "operator": self.operator,
            "solutions": self.solutions.iter().map(solution_json).collect::<Vec<_>>(),
            "diagnostics": {
                "messages": self.messages,
                "elapsed_ms": self.elapsed_ms as u64,
            },
        })
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("status: {}\n", self.status.as_str());
        if let Some(op) = &self.operator {
            out.push_str(&format!("operator: {op}\n"));
        }
        for (i, s) in self.solutions.iter().enumerate() {
            out.push_str(&format!("solution {}:\n", i + 1));
            for line in solution_text(s) {
                out.push_str(&format!("  {line}\n"));
            }
        }
        for m in &self.messages {
            out.push_str(&format!("note: {m}\n"));
        }
        out.push_str(&format!("time: {} ms\n", self.elapsed_ms));
        out
    }
}

fn solution_text(s: &HypSolution) -> Vec<String> {
    let p = &s.params;
    let mut lines = Vec::new();
    let (f, pre) = match (&s.pullback, &s.r) {
        (Pullback::Rational(f), Prefactor::Rational(r)) => (factored(f), prefactor(r)),
        (Pullback::Algebraic { minpoly, .. }, Prefactor::Algebraic(r)) => {
            let one = Rat::from_integer(1.into());
            let c = |i: usize| factored(&RatFun::from_poly(minpoly[i].clone(), &one));
            lines.push(format!("f: root of ({})*f^2 + ({})*f + ({}) = 0", c(2), c(1), c(0)));
            let r = format!("{} + ({})*f", factored(&r.c0), factored(&r.c1));
            ("f".to_string(), format!("exp(∫({r}) dx)"))
        }
        _ => ("?".to_string(), "?".to_string()),
    };
    let y = format!("{pre} * 2F1({}, {}; {}; {f})", p.a1, p.a2, p.b1);
    match &s.gauge {
        None => lines.push(format!("y = {y}")),
        Some(g) => {
            lines.push(format!("y = ({})*u + ({})*u'", factored(&g.r0), factored(&g.r1)));
            lines.push(format!("u = {y}"));
        }
    }
    if !s.certified {
        lines.push("uncertified".into());
    }
    lines
}
