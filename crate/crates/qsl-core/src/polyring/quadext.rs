//! Numbers `base + coeff·√radicand`.

use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Signed, Zero};

use super::field::{Embed, Field};
use super::rational::{
    fmt_rational, rational_sqrt, sqrt_parts, squarefree_split, to_f64, Rational,
};

/// An element of Q(√r). Rationals carry radicand 1 until they meet an
/// irrational operand.
#[derive(Clone, Debug)]
pub struct QuadExtScalar {
    pub base: Rational,
    pub coeff: Rational,
    pub radicand: BigInt,
}

impl QuadExtScalar {
    pub fn rational(q: Rational) -> Self {
        QuadExtScalar {
            base: q,
            coeff: Rational::zero(),
            radicand: BigInt::one(),
        }
    }

    pub fn from_int(n: i64) -> Self {
        Self::rational(Rational::from_integer(BigInt::from(n)))
    }

    /// `base + coeff·√r` for an arbitrary nonzero integer `r` (squares are pulled out).
    pub fn new(base: Rational, coeff: Rational, r: &BigInt) -> Self {
        assert!(!r.is_zero(), "radicand must be nonzero");
        let (s, sf) = squarefree_split(r);
        let coeff = coeff * Rational::from_integer(s);
        if sf.is_one() {
            return Self::rational(base + coeff);
        }
        QuadExtScalar {
            base,
            coeff,
            radicand: sf,
        }
    }

    /// √q as an element of Q(√r).
    pub fn sqrt_rational(q: &Rational) -> Self {
        if q.is_zero() {
            return Self::rational(Rational::zero());
        }
        let (c, r) = sqrt_parts(q);
        Self::new(Rational::zero(), c, &r)
    }

    pub fn is_rational(&self) -> bool {
        self.coeff.is_zero()
    }

    pub fn as_rational(&self) -> Option<Rational> {
        if self.is_rational() {
            Some(self.base.clone())
        } else {
            None
        }
    }

    pub fn is_real(&self) -> bool {
        self.coeff.is_zero() || self.radicand.is_positive()
    }

    pub fn conj(&self) -> Self {
        QuadExtScalar {
            base: self.base.clone(),
            coeff: -self.coeff.clone(),
            radicand: self.radicand.clone(),
        }
    }

    /// Radicand of the extension this value lives in, 1 for rationals.
    pub fn field_radicand(&self) -> BigInt {
        if self.is_rational() {
            BigInt::one()
        } else {
            self.radicand.clone()
        }
    }

    /// base² − r·coeff², the field norm.
    pub fn norm(&self) -> Rational {
        &self.base * &self.base
            - Rational::from_integer(self.radicand.clone()) * &self.coeff * &self.coeff
    }

    fn common_radicand(&self, o: &Self) -> BigInt {
        match (self.is_rational(), o.is_rational()) {
            (true, true) => {
                if self.radicand.is_one() {
                    o.radicand.clone()
                } else {
                    self.radicand.clone()
                }
            }
            (true, false) => o.radicand.clone(),
            (false, true) => self.radicand.clone(),
            (false, false) => {
                assert_eq!(
                    self.radicand, o.radicand,
                    "mixed quadratic extensions are not supported"
                );
                self.radicand.clone()
            }
        }
    }

    /// Real part sign for real values: exact.
    pub fn real_sign(&self) -> i32 {
        assert!(self.is_real());
        let b = self.base.signum();
        let c = self.coeff.signum();
        if c.is_zero() {
            return sgn(&b);
        }
        if b.is_zero() || b == c {
            return sgn(&c);
        }
        // base and coeff·√r have opposite signs; compare squares
        let lhs = &self.base * &self.base;
        let rhs = Rational::from_integer(self.radicand.clone()) * &self.coeff * &self.coeff;
        if lhs > rhs {
            sgn(&b)
        } else {
            sgn(&c)
        }
    }

    /// A square root inside the same field, if one exists.
    pub fn sqrt_in_field(&self) -> Option<Self> {
        if self.is_rational() {
            if let Some(s) = rational_sqrt(&self.base) {
                return Some(QuadExtScalar {
                    base: s,
                    coeff: Rational::zero(),
                    radicand: self.radicand.clone(),
                });
            }
            // √q = c·√r lies in Q(√r) when q/r is a rational square
            if !self.radicand.is_one() {
                let r = Rational::from_integer(self.radicand.clone());
                if let Some(c) = rational_sqrt(&(&self.base / &r)) {
                    return Some(QuadExtScalar {
                        base: Rational::zero(),
                        coeff: c,
                        radicand: self.radicand.clone(),
                    });
                }
            }
            return None;
        }
        // (x + y√r)² = x² + r y² + 2xy√r
        let n = rational_sqrt(&self.norm())?;
        let two = Rational::from_integer(BigInt::from(2));
        for cand in [(&self.base + &n) / &two, (&self.base - &n) / &two] {
            if cand.is_zero() {
                continue;
            }
            if let Some(x) = rational_sqrt(&cand) {
                let y = &self.coeff / (&two * &x);
                return Some(QuadExtScalar {
                    base: x,
                    coeff: y,
                    radicand: self.radicand.clone(),
                });
            }
        }
        None
    }
}

fn sgn(q: &Rational) -> i32 {
    if q.is_zero() {
        0
    } else if q.is_positive() {
        1
    } else {
        -1
    }
}

impl PartialEq for QuadExtScalar {
    fn eq(&self, o: &Self) -> bool {
        self.base == o.base
            && self.coeff == o.coeff
            && (self.coeff.is_zero() || self.radicand == o.radicand)
    }
}

impl Eq for QuadExtScalar {}

impl Field for QuadExtScalar {
    fn zero_like(&self) -> Self {
        QuadExtScalar {
            base: Rational::zero(),
            coeff: Rational::zero(),
            radicand: self.radicand.clone(),
        }
    }
    fn one_like(&self) -> Self {
        QuadExtScalar {
            base: Rational::one(),
            coeff: Rational::zero(),
            radicand: self.radicand.clone(),
        }
    }
    fn is_zero_elem(&self) -> bool {
        self.base.is_zero() && self.coeff.is_zero()
    }
    fn add(&self, o: &Self) -> Self {
        QuadExtScalar {
            radicand: self.common_radicand(o),
            base: &self.base + &o.base,
            coeff: &self.coeff + &o.coeff,
        }
    }
    fn sub(&self, o: &Self) -> Self {
        QuadExtScalar {
            radicand: self.common_radicand(o),
            base: &self.base - &o.base,
            coeff: &self.coeff - &o.coeff,
        }
    }
    fn mul(&self, o: &Self) -> Self {
        let r = self.common_radicand(o);
        let rq = Rational::from_integer(r.clone());
        QuadExtScalar {
            base: &self.base * &o.base + rq * &self.coeff * &o.coeff,
            coeff: &self.base * &o.coeff + &self.coeff * &o.base,
            radicand: r,
        }
    }
    fn div(&self, o: &Self) -> Self {
        let n = o.norm();
        assert!(!n.is_zero(), "division by zero in quadratic extension");
        let inv = QuadExtScalar {
            base: &o.base / &n,
            coeff: -(&o.coeff / &n),
            radicand: o.radicand.clone(),
        };
        self.mul(&inv)
    }
    fn neg(&self) -> Self {
        QuadExtScalar {
            base: -self.base.clone(),
            coeff: -self.coeff.clone(),
            radicand: self.radicand.clone(),
        }
    }
    fn from_rational(&self, q: &Rational) -> Self {
        QuadExtScalar {
            base: q.clone(),
            coeff: Rational::zero(),
            radicand: self.radicand.clone(),
        }
    }
}

impl Embed for QuadExtScalar {
    fn to_complex(&self) -> Complex64 {
        let b = to_f64(&self.base);
        if self.coeff.is_zero() {
            return Complex64::new(b, 0.0);
        }
        let c = to_f64(&self.coeff);
        let r = to_f64(&Rational::from_integer(self.radicand.clone()));
        if r >= 0.0 {
            Complex64::new(b + c * r.sqrt(), 0.0)
        } else {
            Complex64::new(b, c * (-r).sqrt())
        }
    }
}

impl fmt::Display for QuadExtScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeff.is_zero() {
            return write!(f, "{}", fmt_rational(&self.base));
        }
        let c = if self.coeff.is_one() {
            String::new()
        } else if (-self.coeff.clone()).is_one() {
            "-".to_string()
        } else {
            format!("{}*", fmt_rational(&self.coeff))
        };
        let root = format!("sqrt({})", self.radicand);
        if self.base.is_zero() {
            write!(f, "{c}{root}")
        } else if self.coeff.is_negative() {
            let a = -self.coeff.clone();
            let c = if a.is_one() {
                String::new()
            } else {
                format!("{}*", fmt_rational(&a))
            };
            write!(f, "{} - {c}{root}", fmt_rational(&self.base))
        } else {
            write!(f, "{} + {c}{root}", fmt_rational(&self.base))
        }
    }
}
