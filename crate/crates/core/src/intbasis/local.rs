//! Expansions of B(y) at a place, for B = b₀ + b₁∂ and local solutions y.

use std::sync::Arc;

use num_traits::Zero;

use crate::arith::{Field, NfElem, Rat, RatFun, UPoly};
use crate::diffop::{local_coordinate, move_algebraic_to_zero, move_point_to_zero, GaugeOperator, Place, QOp};
use crate::frobenius::formal_solutions_at_zero;
use crate::series::{LogSeries, PowerSeries};

use super::IntBasisError;

pub type Element = GaugeOperator<RatFun<Rat>>;

/// Field elements that come from polynomials in the place's generator.
pub trait Lift: Field {
    fn lift(&self) -> UPoly<Rat>;
}

impl Lift for Rat {
    fn lift(&self) -> UPoly<Rat> {
        UPoly::constant(self.clone())
    }
}

impl Lift for NfElem {
    fn lift(&self) -> UPoly<Rat> {
        self.rep().clone()
    }
}

/// t^ν·Σ (c₀ᵢ + c₁ᵢ·log t)·tⁱ, known to `len()` terms.
#[derive(Clone, Debug)]
pub struct Gen<K> {
    pub nu: Rat,
    pub c: [Vec<K>; 2],
}

impl<K: Field> Gen<K> {
    fn from_log(y: &LogSeries<K>) -> Result<Self, IntBasisError> {
        let nu = y.nu.to_rational().ok_or(IntBasisError::IrrationalExponents)?;
        let n = y.prec();
        Ok(Gen {
            nu,
            c: [
                (0..n).map(|i| y.part0.coeff(i)).collect(),
                (0..n).map(|i| y.part1.coeff(i)).collect(),
            ],
        })
    }

    pub fn len(&self) -> usize {
        self.c[0].len().min(self.c[1].len())
    }

    /// Index of the first nonzero term.
    pub fn lead_index(&self) -> Option<usize> {
        (0..self.len()).find(|&i| !self.c[0][i].is_zero() || !self.c[1][i].is_zero())
    }

    /// Valuation, or the lower bound ν + len() when every known term
    /// vanishes.
    pub fn valuation(&self) -> Rat {
        let i = self.lead_index().unwrap_or(self.len());
        &self.nu + Rat::from_integer(i.into())
    }

    /// Coefficients (non-log, log) at the leading term.
    pub fn leading(&self) -> Option<[K; 2]> {
        let i = self.lead_index()?;
        Some([self.c[0][i].clone(), self.c[1][i].clone()])
    }

    fn derivative(&self, like: &K) -> Self {
        let n = self.len();
        let mut d0 = Vec::with_capacity(n);
        let mut d1 = Vec::with_capacity(n);
        for i in 0..n {
            let e = like.from_rat_like(&(&self.nu + Rat::from_integer(i.into()))).unwrap();
            d0.push(e.fmul(&self.c[0][i]).fadd(&self.c[1][i]));
            d1.push(e.fmul(&self.c[1][i]));
        }
        Gen {
            nu: &self.nu - Rat::from_integer(1.into()),
            c: [d0, d1],
        }
    }

    fn mul_laurent(&self, s: i64, g: &[K]) -> Self {
        let n = self.len().min(g.len());
        let conv = |a: &[K]| -> Vec<K> {
            (0..n)
                .map(|k| {
                    (0..=k).fold(g[0].zero_like(), |acc, i| acc.fadd(&a[i].fmul(&g[k - i])))
                })
                .collect()
        };
        Gen {
            nu: &self.nu + Rat::from_integer(s.into()),
            c: [conv(&self.c[0]), conv(&self.c[1])],
        }
    }

    pub fn scale(&self, s: &K) -> Self {
        Gen {
            nu: self.nu.clone(),
            c: [
                self.c[0].iter().map(|v| v.fmul(s)).collect(),
                self.c[1].iter().map(|v| v.fmul(s)).collect(),
            ],
        }
    }

    /// Both series over the smaller exponent; the exponents must differ by
    /// an integer.
    pub fn align(a: &Self, b: &Self) -> (Rat, [Vec<K>; 2], [Vec<K>; 2]) {
        let d = (&a.nu - &b.nu).to_integer();
        let d: i64 = d.try_into().unwrap();
        let like = a.c[0].first().or(b.c[0].first()).unwrap().zero_like();
        let pad = |g: &Self, k: usize| -> [Vec<K>; 2] {
            let f = |v: &Vec<K>| {
                let mut out = vec![like.clone(); k];
                out.extend(v.iter().cloned());
                out
            };
            [f(&g.c[0]), f(&g.c[1])]
        };
        let (nu, mut pa, mut pb) = if d >= 0 {
            (b.nu.clone(), pad(a, d as usize), pad(b, 0))
        } else {
            (a.nu.clone(), pad(a, 0), pad(b, (-d) as usize))
        };
        let n = pa[0].len().min(pb[0].len());
        for v in pa.iter_mut().chain(pb.iter_mut()) {
            v.truncate(n);
        }
        (nu, pa, pb)
    }

    pub fn add(&self, o: &Self) -> Self {
        let (nu, a, b) = Self::align(self, o);
        let s = |x: &[K], y: &[K]| x.iter().zip(y).map(|(p, q)| p.fadd(q)).collect();
        Gen {
            nu,
            c: [s(&a[0], &b[0]), s(&a[1], &b[1])],
        }
    }
}

/// Laurent expansion t^s·Σ gᵢtⁱ of a nonzero rational function, n terms.
fn laurent<K: Field>(g: &RatFun<K>, n: usize) -> (i64, Vec<K>) {
    let zero = g.num().lc().unwrap().zero_like();
    let vn = g.num().valuation().unwrap();
    let vd = g.den().valuation().unwrap();
    let take = |p: &UPoly<K>, v: usize| {
        let mut c = p.coeffs()[v..].to_vec();
        c.resize(n.max(c.len()), zero.clone());
        c.truncate(n);
        PowerSeries::new(c, &zero)
    };
    let q = take(g.num(), vn).div(&take(g.den(), vd)).unwrap();
    (vn as i64 - vd as i64, q.into_coeffs())
}

type Coord<K> = Box<dyn Fn(&RatFun<Rat>) -> RatFun<K>>;

/// Local solutions at a place with the map from global coefficients to the
/// local parameter.
pub struct Frame<K> {
    pub sols: [Gen<K>; 2],
    coord: Coord<K>,
    infinity: bool,
    prec: usize,
    like: K,
}

impl Frame<Rat> {
    /// A rational place or infinity.
    pub fn rational(l: &QOp, p: &Place, a: usize) -> Result<Self, IntBasisError> {
        let basis = formal_solutions_at_zero(&move_point_to_zero(l, p)?, a)?;
        let shift = local_coordinate(p)?;
        let moved = !matches!(p, Place::Rational(c) if Zero::is_zero(c));
        Ok(Frame {
            sols: [Gen::from_log(&basis.y[0])?, Gen::from_log(&basis.y[1])?],
            coord: Box::new(move |g| if moved { g.compose(&shift) } else { g.clone() }),
            infinity: matches!(p, Place::Infinity),
            prec: a,
            like: Rat::zero(),
        })
    }
}

impl Frame<NfElem> {
    /// One root of an irreducible m, over Q[z]/(m).
    pub fn algebraic(l: &QOp, m: &UPoly<Rat>, a: usize) -> Result<Self, IntBasisError> {
        let basis = formal_solutions_at_zero(&move_algebraic_to_zero(l, m), a)?;
        let md = Arc::new(m.monic());
        let z = NfElem::generator(md.clone());
        let like = z.zero_like();
        let shift = RatFun::from_poly(UPoly::from_coeffs(vec![z, like.one_like()]), &like.one_like());
        Ok(Frame {
            sols: [Gen::from_log(&basis.y[0])?, Gen::from_log(&basis.y[1])?],
            coord: Box::new(move |g| {
                g.map(|c| NfElem::from_rat(c.clone(), md.clone()))
                    .compose(&shift)
            }),
            infinity: false,
            prec: a,
            like,
        })
    }
}

impl<K: Field> Frame<K> {
    pub fn like(&self) -> &K {
        &self.like
    }

    /// B(y_j) in the local parameter.
    pub fn apply(&self, b: &Element, j: usize) -> Gen<K> {
        let y = &self.sols[j];
        let mut acc: Option<Gen<K>> = None;
        let r0 = (self.coord)(&b.r0);
        if !r0.is_zero() {
            let (s, g) = laurent(&r0, self.prec);
            acc = Some(y.mul_laurent(s, &g));
        }
        let r1 = (self.coord)(&b.r1);
        if !r1.is_zero() {
            let mut dy = y.derivative(&self.like);
            if self.infinity {
                // ∂ₓ = −t²∂ₜ
                dy = dy.scale(&self.like.one_like().fneg());
                dy.nu += Rat::from_integer(2.into());
            }
            let (s, g) = laurent(&r1, self.prec);
            let term = dy.mul_laurent(s, &g);
            acc = Some(match acc {
                Some(a) => a.add(&term),
                None => term,
            });
        }
        acc.expect("zero basis element")
    }

    /// min_j v(B(y_j)).
    pub fn min_valuation(&self, b: &Element) -> Rat {
        self.apply(b, 0).valuation().min(self.apply(b, 1).valuation())
    }

    /// Constants (c₀, c₁) ≠ 0 with v(c₀B₀(y) + c₁B₁(y)) ≥ 1 for every
    /// local solution y.
    pub fn improvement(&self, basis: &[Element; 2]) -> Result<Option<[K; 2]>, IntBasisError> {
        let mut rows: Vec<Vec<K>> = Vec::new();
        for j in 0..2 {
            let a = self.apply(&basis[0], j);
            let b = self.apply(&basis[1], j);
            let (nu, pa, pb) = Gen::align(&a, &b);
            let n = pa[0].len();
            let one = Rat::from_integer(1.into());
            // terms t^{ν+i} with ν + i < 1
            let need = if nu >= one {
                0
            } else {
                (&one - &nu).ceil().to_integer().try_into().unwrap()
            };
            if need >= n {
                return Err(IntBasisError::Precision);
            }
            for i in 0..need {
                for part in 0..2 {
                    rows.push(vec![pa[part][i].clone(), pb[part][i].clone()]);
                }
            }
        }
        let z = self.like.clone();
        if rows.is_empty() {
            return Ok(Some([z.one_like(), z]));
        }
        let rhs = vec![z.clone(); rows.len()];
        let sol = crate::arith::solve_linear(&rows, &rhs, 2, &z);
        Ok(sol.and_then(|s| s.kernel.into_iter().next()).map(|k| [k[0].clone(), k[1].clone()]))
    }
}
