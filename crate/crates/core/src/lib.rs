pub mod arith;
pub mod candidates;
pub mod diffop;
pub mod frobenius;
pub mod intbasis;
pub mod quotient;
pub mod series;

#[cfg(test)]
mod testutil;
