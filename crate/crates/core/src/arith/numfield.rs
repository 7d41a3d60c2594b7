use std::fmt;
use std::sync::Arc;

use super::{Field, Rat, UPoly};

/// Element of the number field Q[z]/(m(z)) for an irreducible monic m.
///
/// Houses exponent data at algebraic (non-rational) singular places.
#[derive(Clone, PartialEq)]
pub struct NfElem {
    rep: UPoly<Rat>,
    modulus: Arc<UPoly<Rat>>,
}

impl NfElem {
    pub fn new(rep: UPoly<Rat>, modulus: Arc<UPoly<Rat>>) -> Self {
        let rep = rep.rem(&modulus);
        NfElem { rep, modulus }
    }

    /// The generator z (a root of the modulus).
    pub fn generator(modulus: Arc<UPoly<Rat>>) -> Self {
        Self::new(UPoly::x(), modulus)
    }

    pub fn from_rat(r: Rat, modulus: Arc<UPoly<Rat>>) -> Self {
        Self::new(UPoly::constant(r), modulus)
    }

    pub fn rep(&self) -> &UPoly<Rat> {
        &self.rep
    }

    pub fn modulus(&self) -> &Arc<UPoly<Rat>> {
        &self.modulus
    }

    /// The element as a rational number, when it lies in Q.
    pub fn as_rational(&self) -> Option<Rat> {
        if self.rep.is_constant() {
            Some(self.rep.coeff_or_zero(0, &super::rint(0)))
        } else {
            None
        }
    }
}

impl fmt::Debug for NfElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] mod ({})", self.rep.render("z"), self.modulus.render("z"))
    }
}

impl Field for NfElem {
    fn zero_like(&self) -> Self {
        NfElem {
            rep: UPoly::zero(),
            modulus: self.modulus.clone(),
        }
    }
    fn one_like(&self) -> Self {
        NfElem {
            rep: UPoly::from_ints(&[1]),
            modulus: self.modulus.clone(),
        }
    }
    fn is_zero(&self) -> bool {
        self.rep.is_zero()
    }
    fn fadd(&self, o: &Self) -> Self {
        NfElem {
            rep: &self.rep + &o.rep,
            modulus: self.modulus.clone(),
        }
    }
    fn fsub(&self, o: &Self) -> Self {
        NfElem {
            rep: &self.rep - &o.rep,
            modulus: self.modulus.clone(),
        }
    }
    fn fmul(&self, o: &Self) -> Self {
        NfElem::new(&self.rep * &o.rep, self.modulus.clone())
    }
    fn fneg(&self) -> Self {
        NfElem {
            rep: -&self.rep,
            modulus: self.modulus.clone(),
        }
    }
    fn finv(&self) -> Option<Self> {
        if self.rep.is_zero() {
            return None;
        }
        let (g, s, _) = self.rep.xgcd(&self.modulus);
        if !g.is_constant() {
            return None;
        }
        Some(NfElem::new(s, self.modulus.clone()))
    }
    fn from_int_like(&self, n: i64) -> Self {
        NfElem::from_rat(super::rint(n), self.modulus.clone())
    }
    fn from_rat_like(&self, r: &Rat) -> Option<Self> {
        Some(NfElem::from_rat(r.clone(), self.modulus.clone()))
    }
    fn to_rational(&self) -> Option<Rat> {
        self.as_rational()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sqrt2_arithmetic() {
        let m = Arc::new(UPoly::from_ints(&[-2, 0, 1]));
        let z = NfElem::generator(m);
        assert_eq!(z.fmul(&z).as_rational(), Some(super::super::rint(2)));
        let w = z.fadd(&z.one_like());
        let inv = w.finv().unwrap();
        assert!(w.fmul(&inv).is_one());
    }
}
