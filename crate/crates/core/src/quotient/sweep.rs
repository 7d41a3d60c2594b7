use rayon::prelude::*;

use crate::arith::{ratfun_reconstruct, solve_linear, Field, Fp};
use crate::series::PowerSeries;

use super::data::{evaluate, QuotientData};
use super::QuotientError;

/// A polynomial relation Σ_j P_j(x)·y^j = 0 satisfied by the pullback.
///
/// `coeffs[j][i]` is the coefficient of x^i·y^j. The coefficient at
/// `pivot` stays fixed while lifting.
#[derive(Clone, Debug, PartialEq)]
pub struct Relation<K> {
    pub coeffs: Vec<Vec<K>>,
    pub pivot: (usize, usize),
}

impl<K: Field> Relation<K> {
    pub fn y_degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn width(&self) -> usize {
        self.coeffs[0].len()
    }

    /// Σ_j P_j·h^j as a series of the same precision as h.
    pub fn eval(&self, h: &PowerSeries<K>) -> PowerSeries<K> {
        let like = h.zero_elem();
        let n = h.prec();
        let mut acc = PowerSeries::zero(n, like);
        for pj in self.coeffs.iter().rev() {
            let mut c = pj.clone();
            c.resize(n, like.zero_like());
            c.truncate(n);
            acc = acc.mul(h).add(&PowerSeries::new(c, like));
        }
        acc
    }
}

/// An accepted residue of the leading coefficient C with the relation it
/// reconstructs modulo ℓ.
#[derive(Clone, Debug)]
pub struct SweepHit {
    pub c0: u64,
    pub relation: Relation<Fp>,
}

/// Does the homogeneous system have a nonzero solution mod p?
fn has_kernel(mut rows: Vec<Vec<u64>>, ncols: usize, p: u64) -> bool {
    let mulmod = |a: u64, b: u64| ((a as u128 * b as u128) % p as u128) as u64;
    let mut rank = 0;
    for col in 0..ncols {
        let Some(pr) = (rank..rows.len()).find(|&i| rows[i][col] != 0) else {
            continue;
        };
        rows.swap(rank, pr);
        let inv = Fp::new(rows[rank][col], p).finv().unwrap().value();
        let piv: Vec<u64> = rows[rank].iter().map(|&v| mulmod(v, inv)).collect();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == rank || row[col] == 0 {
                continue;
            }
            let c = row[col];
            for (x, &pv) in row.iter_mut().zip(&piv).skip(col) {
                *x = (*x + p - mulmod(c, pv)) % p;
            }
        }
        rows[rank] = piv;
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rank < ncols
}

/// Rational relation A − B·y with B(0) = 1.
fn rational_relation(f: &[Fp], d: usize) -> Option<Relation<Fp>> {
    // Σ_{i≤d} B_i f_{j−i} = 0 for d < j < n
    let p = f[0].modulus();
    let rows: Vec<Vec<u64>> = (d + 1..f.len())
        .map(|j| (0..=d).map(|i| f[j - i].value()).collect())
        .collect();
    if !has_kernel(rows, d + 1, p) {
        return None;
    }
    let r = ratfun_reconstruct(f, d, d)?;
    if r.num().is_zero() {
        return None;
    }
    let zero = f[0].zero_like();
    let s = r.den().coeff_or_zero(0, &zero).finv()?;
    let pad = |p: &crate::arith::UPoly<Fp>, neg: bool| {
        let mut c: Vec<Fp> = p
            .coeffs()
            .iter()
            .map(|v| if neg { v.fmul(&s).fneg() } else { v.fmul(&s) })
            .collect();
        c.resize(d + 1, zero.clone());
        c
    };
    Some(Relation {
        coeffs: vec![pad(r.num(), false), pad(r.den(), true)],
        pivot: (1, 0),
    })
}

/// Smallest-degree quadratic relation Σ_{j≤2} P_j·y^j ≡ 0 mod x^n with
/// deg P_j ≤ d, normalized to 1 at its first nonzero coefficient.
fn quadratic_relation(f: &[Fp], d: usize) -> Option<Relation<Fp>> {
    let n = f.len();
    let zero = f[0].zero_like();
    let fs = PowerSeries::new(f.to_vec(), &zero);
    let pw = [PowerSeries::one(n, &zero), fs.clone(), fs.mul(&fs)];
    let kernel = |dx: usize| {
        let w = dx + 1;
        let rows: Vec<Vec<Fp>> = (0..n)
            .map(|t| {
                let mut row = vec![zero.clone(); 3 * w];
                for (j, p) in pw.iter().enumerate() {
                    for i in 0..w.min(t + 1) {
                        row[j * w + i] = p.coeff(t - i);
                    }
                }
                row
            })
            .collect();
        solve_linear(&rows, &vec![zero.clone(); n], 3 * w, &zero).map(|s| s.kernel)
    };
    // most residues have no relation at all; check the full degree first
    let p = f[0].modulus();
    let w = d + 1;
    let rows: Vec<Vec<u64>> = (0..n)
        .map(|t| {
            let mut row = vec![0; 3 * w];
            for (j, s) in pw.iter().enumerate() {
                for i in 0..w.min(t + 1) {
                    row[j * w + i] = s.coeff(t - i).value();
                }
            }
            row
        })
        .collect();
    if !has_kernel(rows, 3 * w, p) {
        return None;
    }
    for dx in 1..=d {
        let w = dx + 1;
        let ker = kernel(dx)?;
        match ker.len() {
            0 => continue,
            1 => {}
            _ => return None,
        }
        let k = &ker[0];
        if k[2 * w..].iter().all(|c| c.is_zero()) {
            return None;
        }
        let piv = k.iter().position(|c| !c.is_zero())?;
        let s = k[piv].finv()?;
        let mut coeffs: Vec<Vec<Fp>> = (0..3)
            .map(|j| k[j * w..(j + 1) * w].iter().map(|c| c.fmul(&s)).collect())
            .collect();
        for c in coeffs.iter_mut() {
            c.resize(d + 1, zero.clone());
        }
        return Some(Relation {
            coeffs,
            pivot: (piv / w, piv % w),
        });
    }
    None
}

/// Worker count from HYP_SOLVE_THREADS, else rayon's default.
pub fn thread_count(cfg: Option<usize>) -> Option<usize> {
    cfg.or_else(|| {
        std::env::var("HYP_SOLVE_THREADS")
            .ok()
            .and_then(|s| s.parse().ok())
            .filter(|&n: &usize| n > 0)
    })
}

/// Try every C ∈ {1..ℓ−1}: evaluate f = W(C·Y) mod (ℓ, x^a) and keep the C
/// whose pullback image satisfies a relation of the expected shape.
pub fn sweep_c(
    qd: &QuotientData,
    ell: u64,
    d: usize,
    a_f: usize,
    v: usize,
    threads: Option<usize>,
) -> Result<Vec<SweepHit>, QuotientError> {
    let like = Fp::new(0, ell);
    let (w, y) = qd.images(&like, v)?;
    let a = qd.prec;
    let n0 = a.min((a_f + 1) * (d + 1) + 8);
    // table[k][j] = W_k·(Y^k)_j, so that f_j(C) = Σ_k table[k][j]·C^k
    let yt = y.truncate(n0);
    let kmax = (n0 - 1) / v.max(1);
    let mut table: Vec<Vec<Fp>> = Vec::with_capacity(kmax + 1);
    let mut pw = PowerSeries::one(n0, &like);
    for k in 0..=kmax {
        let wk = w.coeff(k);
        table.push(pw.coeffs().iter().map(|c| c.fmul(&wk)).collect());
        pw = pw.mul(&yt);
    }
    let run = |c: u64| -> Option<SweepHit> {
        let cc = Fp::new(c, ell);
        let f: Vec<Fp> = (0..n0)
            .map(|j| {
                table
                    .iter()
                    .rev()
                    .fold(like.clone(), |acc, row| acc.fmul(&cc).fadd(&row[j]))
            })
            .collect();
        let rel = if a_f == 1 {
            rational_relation(&f, d)?
        } else {
            quadratic_relation(&f, d)?
        };
        let full = evaluate(&w, &y, &cc).ok()?;
        if !rel.eval(&full).is_zero() {
            return None;
        }
        Some(SweepHit { c0: c, relation: rel })
    };
    let hits = match thread_count(threads) {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|_| QuotientError::Unsupported)?
            .install(|| (1..ell).into_par_iter().filter_map(run).collect()),
        None => (1..ell).into_par_iter().filter_map(run).collect(),
    };
    Ok(hits)
}
