//! Operators shared by unit tests.

use crate::arith::{RatFun, UPoly};
use crate::diffop::QOp;

pub fn rf(num: &[i64], den: &[i64]) -> RatFun<crate::arith::Rat> {
    RatFun::from_ints(num, den)
}

pub fn poly(c: &[i64]) -> UPoly<crate::arith::Rat> {
    UPoly::from_ints(c)
}

/// 147x(x−1)(x+1)∂² + (266x² − 42x − 98)∂ + 20x − 5
pub fn rational_pullback_op() -> QOp {
    QOp::new(vec![
        rf(&[-5, 20], &[1]),
        rf(&[-98, -42, 266], &[1]),
        rf(&[0, -147, 0, 147], &[1]),
    ])
}

/// Gauss operator for (5/42, 11/42; 2/3).
pub fn gauss_op() -> QOp {
    QOp::new(vec![
        rf(&[55], &[1]),
        rf(&[-1176, 2436], &[1]),
        rf(&[0, -1764, 1764], &[1]),
    ])
}

/// ∂² + (x⁴ − 44x³ + 1206x² − 44x + 1)/(4(x² − 34x + 1)²x²)
pub fn algebraic_pullback_op() -> QOp {
    let s = poly(&[1, -34, 1]);
    let den = &(&(&s * &s) * &poly(&[0, 0, 1])) * &poly(&[4]);
    QOp::new(vec![
        RatFun::new(poly(&[1, -44, 1206, -44, 1]), den),
        rf(&[0], &[1]),
        rf(&[1], &[1]),
    ])
}

fn cubic() -> UPoly<crate::arith::Rat> {
    poly(&[1, 5, 24, 16])
}

/// The order-2 operator that needs a gauge transformation before it has a
/// pullback solution.
pub fn gauge_op() -> QOp {
    let d = &(&poly(&[0, 1]) * &poly(&[-1, 0, 16])) * &cubic();
    let d0 = &d * &poly(&[0, 1]);
    QOp::new(vec![
        RatFun::new(poly(&[-1, -8, -60, -128, 64, 512]), d0),
        RatFun::new(poly(&[1, 10, 88, 64, -384, -512]), d),
        rf(&[1], &[1]),
    ])
}

/// Gauge operator taking `gauge_op` to `gauged_op`, as (r₀, r₁).
pub fn gauge_b1() -> (RatFun<crate::arith::Rat>, RatFun<crate::arith::Rat>) {
    let cx = &cubic() * &poly(&[0, 1]);
    (
        RatFun::new(poly(&[-1, -4, -32]), cx.clone()),
        RatFun::new(poly(&[0, -1, 0, 16]), cx),
    )
}

/// ∂² + (48x² − 1)/(x(16x² − 1))∂ + 16/(16x² − 1)
pub fn gauged_op() -> QOp {
    QOp::new(vec![
        rf(&[16], &[-1, 0, 16]),
        rf(&[-1, 0, 48], &[0, -1, 0, 16]),
        rf(&[1], &[1]),
    ])
}
