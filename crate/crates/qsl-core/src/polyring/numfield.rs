//! Q[t]/(m) for an irreducible m, used when line directions live in a cubic field.

use std::sync::Arc;

use num_complex::Complex64;
use num_traits::Zero;

use super::field::Field;
use super::rational::Rational;
use super::upoly::UPoly;

#[derive(Clone, Debug)]
pub struct NfElem {
    modulus: Arc<UPoly<Rational>>,
    value: UPoly<Rational>,
}

impl PartialEq for NfElem {
    fn eq(&self, o: &Self) -> bool {
        self.value == o.value
    }
}

impl NfElem {
    pub fn new(modulus: &Arc<UPoly<Rational>>, value: UPoly<Rational>) -> Self {
        NfElem {
            modulus: modulus.clone(),
            value: value.rem(modulus),
        }
    }

    /// The class of t.
    pub fn generator(modulus: &Arc<UPoly<Rational>>) -> Self {
        Self::new(modulus, UPoly::from_ints(&[0, 1]))
    }

    pub fn modulus(&self) -> &Arc<UPoly<Rational>> {
        &self.modulus
    }

    pub fn value(&self) -> &UPoly<Rational> {
        &self.value
    }

    pub fn as_rational(&self) -> Option<Rational> {
        match self.value.degree() {
            None => Some(Rational::zero()),
            Some(0) => Some(self.value.coeff(0)),
            _ => None,
        }
    }

    /// Value under the embedding t ↦ `root`.
    pub fn embed(&self, root: Complex64) -> Complex64 {
        let mut r = Complex64::new(0.0, 0.0);
        for a in self.value.to_complex().iter().rev() {
            r = r * root + a;
        }
        r
    }
}

impl Field for NfElem {
    fn zero_like(&self) -> Self {
        NfElem {
            modulus: self.modulus.clone(),
            value: UPoly::from_rationals(vec![]),
        }
    }
    fn one_like(&self) -> Self {
        NfElem {
            modulus: self.modulus.clone(),
            value: UPoly::from_ints(&[1]),
        }
    }
    fn is_zero_elem(&self) -> bool {
        self.value.is_zero()
    }
    fn add(&self, o: &Self) -> Self {
        NfElem {
            modulus: self.modulus.clone(),
            value: self.value.add(&o.value),
        }
    }
    fn sub(&self, o: &Self) -> Self {
        NfElem {
            modulus: self.modulus.clone(),
            value: self.value.sub(&o.value),
        }
    }
    fn mul(&self, o: &Self) -> Self {
        Self::new(&self.modulus, self.value.mul(&o.value))
    }
    fn div(&self, o: &Self) -> Self {
        assert!(!o.is_zero_elem(), "division by zero in number field");
        let (g, s, _) = o.value.xgcd(&self.modulus);
        assert_eq!(g.degree(), Some(0), "modulus is not irreducible");
        self.mul(&NfElem::new(&self.modulus, s))
    }
    fn neg(&self) -> Self {
        NfElem {
            modulus: self.modulus.clone(),
            value: self.value.scale(&-Rational::from_integer(1.into())),
        }
    }
    fn from_rational(&self, q: &Rational) -> Self {
        NfElem {
            modulus: self.modulus.clone(),
            value: UPoly::from_rationals(vec![q.clone()]),
        }
    }
}
