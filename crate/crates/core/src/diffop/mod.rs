//! Linear differential operators over rational functions.

mod ops;
mod place;
mod reducible;

pub use ops::{DiffOp, GaugeOperator, Substitute};
pub use reducible::exponential_right_factor;
pub use place::{
    exponent_pair, indicial_exponents, indicial_exponents_algebraic, local_coordinate,
    move_algebraic_to_zero, move_point_to_zero, singularities, Exponents, LocalOp, Place,
};

use crate::arith::{Rat, RatFun};

/// Operators with coefficients in Q(x).
pub type QOp = DiffOp<RatFun<Rat>>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DiffOpError {
    #[error("gauge operator is zero")]
    ZeroGauge,
    #[error("operator is reducible")]
    Reducible,
    #[error("pullback function is constant")]
    ConstantPullback,
    #[error("expansion at an algebraic place is not supported")]
    AlgebraicPlace,
    #[error("irregular singularity")]
    Irregular,
    #[error("exponent difference is not rational")]
    IrrationalExponents,
}
