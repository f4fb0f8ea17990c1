use std::fmt::Debug;

use num_complex::Complex64;
use num_traits::{One, Zero};

use super::rational::{to_f64, Rational};

/// The small amount of field structure the univariate routines need.
pub trait Field: Clone + PartialEq + Debug {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn is_zero_elem(&self) -> bool;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn div(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn from_rational(&self, q: &Rational) -> Self;

    fn is_one_elem(&self) -> bool {
        self == &self.one_like()
    }
}

/// Evaluation under a chosen complex embedding.
pub trait Embed {
    fn to_complex(&self) -> Complex64;
}

impl Field for Rational {
    fn zero_like(&self) -> Self {
        Rational::zero()
    }
    fn one_like(&self) -> Self {
        Rational::one()
    }
    fn is_zero_elem(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn div(&self, o: &Self) -> Self {
        self / o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn from_rational(&self, q: &Rational) -> Self {
        q.clone()
    }
}

impl Embed for Rational {
    fn to_complex(&self) -> Complex64 {
        Complex64::new(to_f64(self), 0.0)
    }
}
