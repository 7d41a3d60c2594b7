use std::fmt;

use crate::arith::Field;

use super::PowerSeries;

/// Truncated local solution t^ν·(S₀(t) + S₁(t)·log t) in the local
/// parameter t of a place. S₁ = 0 exactly when the solution is free of
/// logarithms.
#[derive(Clone, PartialEq)]
pub struct LogSeries<K> {
    pub nu: K,
    pub part0: PowerSeries<K>,
    pub part1: PowerSeries<K>,
}

impl<K: Field> LogSeries<K> {
    pub fn new(nu: K, part0: PowerSeries<K>, part1: PowerSeries<K>) -> Self {
        LogSeries { nu, part0, part1 }
    }

    /// A log-free solution t^ν·S₀.
    pub fn plain(nu: K, part0: PowerSeries<K>) -> Self {
        let z = PowerSeries::zero(part0.prec(), part0.zero_elem());
        LogSeries::new(nu, part0, z)
    }

    pub fn is_logarithmic(&self) -> bool {
        !self.part1.is_zero()
    }

    pub fn prec(&self) -> usize {
        self.part0.prec().min(self.part1.prec())
    }
}

impl<K: fmt::Debug> fmt::Debug for LogSeries<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "t^({:?})*({:?} + {:?}*log(t))", self.nu, self.part0, self.part1)
    }
}
