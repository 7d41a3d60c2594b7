//! Truncated power, Puiseux and logarithmic series.

mod logseries;
mod power;
mod puiseux;

pub use logseries::LogSeries;
pub use power::PowerSeries;
pub use puiseux::PuiseuxSeries;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SeriesError {
    #[error("division by a zero series")]
    DivisionByZero,
    #[error("leading coefficient is not invertible")]
    NotInvertible,
    #[error("series has the wrong valuation for this operation")]
    Valuation,
    #[error("no root of the leading coefficient was supplied")]
    NoRoot,
    #[error("a denominator vanishes modulo the working prime")]
    BadPrime,
    #[error("series is ramified where an ordinary series is required")]
    Ramified,
}
