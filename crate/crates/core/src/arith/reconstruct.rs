use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{Field, Rat, RatFun, UPoly, Zn};

/// Padé-type reconstruction of N/D from a truncated series.
///
/// `s` holds the coefficients of the series modulo x^a (a = `s.len()`).
/// Returns N/D with deg N ≤ `nbound`, deg D ≤ `dbound`, D(0) ≠ 0 and
/// N ≡ D·s mod x^a, computed by stopping the extended Euclidean algorithm
/// on (x^a, s) at the first remainder of degree ≤ `nbound`.
pub fn ratfun_reconstruct<K: Field>(s: &[K], nbound: usize, dbound: usize) -> Option<RatFun<K>> {
    let a = s.len();
    let one = s.first()?.one_like();
    let mut r0 = UPoly::monomial(one.clone(), a);
    let mut r1 = UPoly::from_coeffs(s.to_vec());
    let mut t0: UPoly<K> = UPoly::zero();
    let mut t1 = UPoly::constant(one.clone());
    while r1.deg() > nbound as isize {
        let (q, r) = r0.divrem(&r1);
        r0 = std::mem::replace(&mut r1, r);
        let t = &t0 - &(&q * &t1);
        t0 = std::mem::replace(&mut t1, t);
    }
    if t1.deg() > dbound as isize {
        return None;
    }
    let d0 = t1.coeff_or_zero(0, &one);
    if d0.is_zero() {
        return None;
    }
    // N and D must be coprime for the pair to be the reduced answer.
    if !r1.is_zero() && !r1.gcd(&t1).is_constant() {
        return None;
    }
    Some(RatFun::new(r1, t1))
}

/// Rational number reconstruction with the balanced bound sqrt(m/2) on
/// both numerator and denominator.
pub fn ratnum_reconstruct(r: &Zn) -> Option<Rat> {
    let m = r.modulus().as_ref();
    let bound = (m / BigUint::from(2u32)).sqrt();
    let b = BigInt::from(bound);
    ratnum_reconstruct_bounded(r, &b, &b)
}

/// Find p/q with |p| ≤ `nbound`, 0 < q ≤ `dbound`, gcd(q, m) = 1 and
/// q·r ≡ p (mod m).
pub fn ratnum_reconstruct_bounded(r: &Zn, nbound: &BigInt, dbound: &BigInt) -> Option<Rat> {
    let m = BigInt::from(r.modulus().as_ref().clone());
    let mut r0 = m.clone();
    let mut r1 = BigInt::from(r.value().clone());
    let mut t0 = BigInt::zero();
    let mut t1 = BigInt::one();
    while &r1 > nbound {
        let (q, rr) = r0.div_rem(&r1);
        r0 = std::mem::replace(&mut r1, rr);
        let t = &t0 - &q * &t1;
        t0 = std::mem::replace(&mut t1, t);
    }
    if t1.is_zero() || &t1.abs() > dbound || !t1.gcd(&m).is_one() {
        return None;
    }
    if t1.is_negative() {
        t1 = -t1;
        r1 = -r1;
    }
    Some(Rat::new(r1, t1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{rat, Fp};
    use std::sync::Arc;

    fn fp(v: i64, p: u64) -> Fp {
        Fp::from_i64(v, p)
    }

    #[test]
    fn geometric_series_mod_7() {
        let s: Vec<Fp> = (0..6).map(|_| fp(1, 7)).collect();
        let f = ratfun_reconstruct(&s, 1, 1).unwrap();
        let expect = RatFun::new(
            UPoly::from_coeffs(vec![fp(1, 7)]),
            UPoly::from_coeffs(vec![fp(1, 7), fp(-1, 7)]),
        );
        assert_eq!(f, expect);
    }

    #[test]
    fn polynomial_returns_itself() {
        let mut s = vec![fp(3, 5), fp(2, 5)];
        s.extend((0..4).map(|_| fp(0, 5)));
        let f = ratfun_reconstruct(&s, 1, 1).unwrap();
        assert!(f.is_polynomial());
        assert_eq!(f.num(), &UPoly::from_coeffs(vec![fp(3, 5), fp(2, 5)]));
    }

    /// Brute force: does any (deg ≤ 1)/(deg ≤ 1) with D(0) ≠ 0 match s mod x^6?
    fn exists_11_form(s: &[Fp], p: u64) -> bool {
        for n0 in 0..p {
            for n1 in 0..p {
                for d0 in 1..p {
                    for d1 in 0..p {
                        // check N ≡ D s mod x^6
                        let ok = (0..s.len()).all(|k| {
                            let mut ds = fp(0, p);
                            ds = ds.fadd(&fp(d0 as i64, p).fmul(&s[k]));
                            if k >= 1 {
                                ds = ds.fadd(&fp(d1 as i64, p).fmul(&s[k - 1]));
                            }
                            let n = match k {
                                0 => fp(n0 as i64, p),
                                1 => fp(n1 as i64, p),
                                _ => fp(0, p),
                            };
                            ds == n
                        });
                        if ok {
                            return true;
                        }
                    }
                }
            }
        }
        false
    }

    #[test]
    fn generic_series_has_no_11_form() {
        let s: Vec<Fp> = [1, 2, 0, 3, 1, 4].iter().map(|&v| fp(v, 5)).collect();
        assert!(!exists_11_form(&s, 5));
        assert!(ratfun_reconstruct(&s, 1, 1).is_none());
    }

    fn zn(v: u64, m: u64) -> Zn {
        Zn::new(BigUint::from(v), Arc::new(BigUint::from(m)))
    }

    #[test]
    fn ratnum_examples() {
        assert_eq!(ratnum_reconstruct(&zn(0, 97)), Some(rat(0, 1)));
        assert_eq!(ratnum_reconstruct(&zn(81, 121)), Some(rat(1, 3)));
        // |p|, q ≤ 2 exhaustively: residues of 0, ±1, ±2, ±1/2 mod 11
        let reachable: Vec<u64> = vec![0, 1, 10, 2, 9, 6, 5];
        assert!(!reachable.contains(&4));
        assert_eq!(ratnum_reconstruct(&zn(4, 11)), None);
    }
}
