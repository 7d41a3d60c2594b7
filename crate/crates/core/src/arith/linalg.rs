use super::Field;

/// All solutions of a linear system: `particular + span(kernel)`.
#[derive(Clone, Debug, PartialEq)]
pub struct AffineSolution<K> {
    pub particular: Vec<K>,
    pub kernel: Vec<Vec<K>>,
}

/// Gaussian elimination over a field. `rows` is the coefficient matrix with
/// `ncols` columns; returns `None` when the system is inconsistent.
///
/// `like` supplies the field context for constants when the matrix is empty.
pub fn solve_linear<K: Field>(
    rows: &[Vec<K>],
    rhs: &[K],
    ncols: usize,
    like: &K,
) -> Option<AffineSolution<K>> {
    assert_eq!(rows.len(), rhs.len());
    let zero = like.zero_like();
    let mut a: Vec<Vec<K>> = rows
        .iter()
        .zip(rhs)
        .map(|(r, b)| {
            debug_assert_eq!(r.len(), ncols);
            let mut row = r.clone();
            row.push(b.clone());
            row
        })
        .collect();
    let mut pivots: Vec<usize> = Vec::new();
    let mut rank = 0;
    for col in 0..ncols {
        let Some(pr) = (rank..a.len()).find(|&i| !a[i][col].is_zero()) else {
            continue;
        };
        a.swap(rank, pr);
        let inv = a[rank][col].finv().expect("pivot must be a unit");
        for v in a[rank].iter_mut() {
            *v = v.fmul(&inv);
        }
        let prow = a[rank].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i == rank || row[col].is_zero() {
                continue;
            }
            let f = row[col].clone();
            for (v, p) in row.iter_mut().zip(prow.iter()).skip(col) {
                *v = v.fsub(&f.fmul(p));
            }
        }
        pivots.push(col);
        rank += 1;
        if rank == a.len() {
            break;
        }
    }
    if a[rank..].iter().any(|row| !row[ncols].is_zero()) {
        return None;
    }
    let mut particular = vec![zero.clone(); ncols];
    for (r, &c) in pivots.iter().enumerate() {
        particular[c] = a[r][ncols].clone();
    }
    let mut kernel = Vec::new();
    for free in (0..ncols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![zero.clone(); ncols];
        v[free] = like.one_like();
        for (r, &c) in pivots.iter().enumerate() {
            v[c] = a[r][free].fneg();
        }
        kernel.push(v);
    }
    Some(AffineSolution { particular, kernel })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::Fp;

    fn f7(v: i64) -> Fp {
        Fp::from_i64(v, 7)
    }

    #[test]
    fn identity_gives_rhs() {
        let m = vec![vec![f7(1), f7(0)], vec![f7(0), f7(1)]];
        let s = solve_linear(&m, &[f7(3), f7(5)], 2, &f7(0)).unwrap();
        assert_eq!(s.particular, vec![f7(3), f7(5)]);
        assert!(s.kernel.is_empty());
    }

    #[test]
    fn zero_matrix_nonzero_rhs_is_inconsistent() {
        let m = vec![vec![f7(0), f7(0)]];
        assert!(solve_linear(&m, &[f7(1)], 2, &f7(0)).is_none());
    }

    #[test]
    fn two_by_three_matches_brute_force() {
        let m = vec![vec![f7(1), f7(2), f7(3)], vec![f7(4), f7(5), f7(6)]];
        let b = [f7(1), f7(2)];
        let mut brute = Vec::new();
        for x in 0..7 {
            for y in 0..7 {
                for z in 0..7 {
                    let v = [f7(x), f7(y), f7(z)];
                    let ok = m.iter().zip(b.iter()).all(|(row, bi)| {
                        row.iter()
                            .zip(v.iter())
                            .fold(f7(0), |acc, (a, c)| acc.fadd(&a.fmul(c)))
                            == *bi
                    });
                    if ok {
                        brute.push(v);
                    }
                }
            }
        }
        let s = solve_linear(&m, &b, 3, &f7(0)).unwrap();
        assert_eq!(s.kernel.len(), 1);
        assert_eq!(brute.len(), 7);
        for t in 0..7 {
            let v: Vec<Fp> = (0..3)
                .map(|i| s.particular[i].fadd(&f7(t).fmul(&s.kernel[0][i])))
                .collect();
            assert!(brute.iter().any(|w| w.as_slice() == v.as_slice()));
        }
    }
}
