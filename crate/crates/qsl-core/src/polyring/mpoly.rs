//! Sparse multivariate polynomials over Q.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::rational::{fmt_rational, gcd_numerators, lcm_denominators, Rational};

pub type Vars = Arc<[String]>;

pub fn vars(names: &[&str]) -> Vars {
    names.iter().map(|s| s.to_string()).collect::<Vec<_>>().into()
}

/// Exponent vector, ordered graded-lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(n: usize) -> Self {
        Monomial(vec![0; n])
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    fn div(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct MPoly {
    vars: Vars,
    terms: BTreeMap<Monomial, Rational>,
}

impl MPoly {
    pub fn zero(vars: &Vars) -> Self {
        MPoly {
            vars: vars.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(vars: &Vars, c: Rational) -> Self {
        let mut p = Self::zero(vars);
        if !c.is_zero() {
            p.terms.insert(Monomial::one(vars.len()), c);
        }
        p
    }

    pub fn one(vars: &Vars) -> Self {
        Self::constant(vars, Rational::one())
    }

    pub fn var(vars: &Vars, name: &str) -> Self {
        let i = vars
            .iter()
            .position(|v| v == name)
            .unwrap_or_else(|| panic!("unknown variable {name}"));
        Self::var_at(vars, i)
    }

    pub fn var_at(vars: &Vars, i: usize) -> Self {
        let mut e = vec![0; vars.len()];
        e[i] = 1;
        Self::monomial(vars, Monomial(e), Rational::one())
    }

    pub fn monomial(vars: &Vars, m: Monomial, c: Rational) -> Self {
        assert_eq!(m.0.len(), vars.len());
        let mut p = Self::zero(vars);
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    pub fn from_terms(vars: &Vars, terms: impl IntoIterator<Item = (Vec<u32>, Rational)>) -> Self {
        let mut p = Self::zero(vars);
        for (e, c) in terms {
            p.add_term(Monomial(e), c);
        }
        p
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, e: &[u32]) -> Rational {
        self.terms
            .get(&Monomial(e.to_vec()))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get() + c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.degree() == 0)
    }

    pub fn constant_value(&self) -> Option<Rational> {
        if self.is_constant() {
            Some(self.coeff(&vec![0; self.vars.len()]))
        } else {
            None
        }
    }

    /// Total degree; 0 for the zero polynomial.
    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|m| m.degree()).max().unwrap_or(0)
    }

    pub fn degree_in(&self, i: usize) -> u32 {
        self.terms.keys().map(|m| m.0[i]).max().unwrap_or(0)
    }

    pub fn involves(&self, i: usize) -> bool {
        self.terms.keys().any(|m| m.0[i] > 0)
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next_back()
    }

    pub fn leading_coeff(&self) -> Rational {
        self.leading_term()
            .map(|(_, c)| c.clone())
            .unwrap_or_else(Rational::zero)
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut d = None;
        for m in self.terms.keys() {
            match d {
                None => d = Some(m.degree()),
                Some(d0) if d0 != m.degree() => return false,
                _ => {}
            }
        }
        true
    }

    pub fn scale(&self, c: &Rational) -> MPoly {
        if c.is_zero() {
            return Self::zero(&self.vars);
        }
        MPoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> MPoly {
        let mut r = Self::one(&self.vars);
        let mut b = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                r = &r * &b;
            }
            n >>= 1;
            if n > 0 {
                b = &b * &b;
            }
        }
        r
    }

    pub fn derivative(&self, i: usize) -> MPoly {
        let mut r = Self::zero(&self.vars);
        for (m, c) in &self.terms {
            let e = m.0[i];
            if e > 0 {
                let mut m2 = m.clone();
                m2.0[i] -= 1;
                r.add_term(m2, c * Rational::from_integer(BigInt::from(e)));
            }
        }
        r
    }

    pub fn derivative_n(&self, i: usize, n: u32) -> MPoly {
        let mut r = self.clone();
        for _ in 0..n {
            if r.is_zero() {
                break;
            }
            r = r.derivative(i);
        }
        r
    }

    /// Substitutes a rational value for variable `i`; the variable list is kept.
    pub fn eval_var(&self, i: usize, v: &Rational) -> MPoly {
        let mut r = Self::zero(&self.vars);
        for (m, c) in &self.terms {
            let e = m.0[i];
            let mut m2 = m.clone();
            m2.0[i] = 0;
            let mut f = c.clone();
            for _ in 0..e {
                f *= v;
            }
            r.add_term(m2, f);
        }
        r
    }

    /// Evaluates at a full point.
    pub fn eval(&self, point: &[Rational]) -> Rational {
        assert_eq!(point.len(), self.vars.len());
        let mut s = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (e, x) in m.0.iter().zip(point) {
                for _ in 0..*e {
                    t *= x;
                }
            }
            s += t;
        }
        s
    }

    /// Substitutes `g` (over the same variables) for variable `i`.
    pub fn substitute(&self, i: usize, g: &MPoly) -> MPoly {
        assert!(Arc::ptr_eq(&self.vars, &g.vars) || self.vars == g.vars);
        let coeffs = self.coefficients_in(i);
        // Horner in g
        let mut r = Self::zero(&self.vars);
        for c in coeffs.iter().rev() {
            r = &(&r * g) + c;
        }
        r
    }

    /// Coefficients as a polynomial in variable `i`: entry `k` multiplies `v_i^k`.
    pub fn coefficients_in(&self, i: usize) -> Vec<MPoly> {
        let d = self.degree_in(i) as usize;
        let mut out = vec![Self::zero(&self.vars); d + 1];
        if self.is_zero() {
            return out;
        }
        for (m, c) in &self.terms {
            let e = m.0[i] as usize;
            let mut m2 = m.clone();
            m2.0[i] = 0;
            out[e].add_term(m2, c.clone());
        }
        out
    }

    pub fn from_coefficients_in(vars: &Vars, i: usize, coeffs: &[MPoly]) -> MPoly {
        let mut r = Self::zero(vars);
        for (k, c) in coeffs.iter().enumerate() {
            for (m, a) in &c.terms {
                let mut m2 = m.clone();
                m2.0[i] += k as u32;
                r.add_term(m2, a.clone());
            }
        }
        r
    }

    /// Homogeneous component of total degree `d` in the variables `idx`.
    pub fn part_of_degree(&self, idx: &[usize], d: u32) -> MPoly {
        let mut r = Self::zero(&self.vars);
        for (m, c) in &self.terms {
            let k: u32 = idx.iter().map(|&i| m.0[i]).sum();
            if k == d {
                r.add_term(m.clone(), c.clone());
            }
        }
        r
    }

    /// Maximum total degree in the variables `idx`.
    pub fn degree_in_set(&self, idx: &[usize]) -> u32 {
        self.terms
            .keys()
            .map(|m| idx.iter().map(|&i| m.0[i]).sum())
            .max()
            .unwrap_or(0)
    }

    /// Re-expresses the polynomial over another variable list, matching names.
    /// Panics if a variable that actually occurs is missing from `target`.
    pub fn with_vars(&self, target: &Vars) -> MPoly {
        let map: Vec<Option<usize>> = self
            .vars
            .iter()
            .map(|v| target.iter().position(|t| t == v))
            .collect();
        let mut r = Self::zero(target);
        for (m, c) in &self.terms {
            let mut e = vec![0; target.len()];
            for (k, &x) in m.0.iter().enumerate() {
                if x > 0 {
                    let j = map[k].unwrap_or_else(|| {
                        panic!("variable {} not present in target", self.vars[k])
                    });
                    e[j] += x;
                }
            }
            r.add_term(Monomial(e), c.clone());
        }
        r
    }

    /// Renames variables positionally.
    pub fn rename(&self, target: &Vars) -> MPoly {
        assert_eq!(target.len(), self.vars.len());
        MPoly {
            vars: target.clone(),
            terms: self.terms.clone(),
        }
    }

    /// Exact division; `None` if `d` does not divide `self`.
    pub fn exact_div(&self, d: &MPoly) -> Option<MPoly> {
        assert!(!d.is_zero(), "division by zero polynomial");
        let (lm, lc) = d.leading_term().map(|(m, c)| (m.clone(), c.clone()))?;
        let mut rem = self.clone();
        let mut q = Self::zero(&self.vars);
        while let Some((m, c)) = rem.leading_term().map(|(m, c)| (m.clone(), c.clone())) {
            if !lm.divides(&m) {
                return None;
            }
            let qm = m.div(&lm);
            let qc = c / &lc;
            let t = Self::monomial(&self.vars, qm, qc);
            rem = &rem - &(&t * d);
            q = &q + &t;
        }
        Some(q)
    }

    /// Scaled to be primitive over Z with positive leading coefficient.
    pub fn normalize(&self) -> MPoly {
        if self.is_zero() {
            return self.clone();
        }
        let l = lcm_denominators(self.terms.values());
        let lq = Rational::from_integer(l);
        let scaled: Vec<Rational> = self.terms.values().map(|c| c * &lq).collect();
        let g = gcd_numerators(scaled.iter());
        let mut f = lq / Rational::from_integer(g);
        if self.leading_coeff().is_negative() {
            f = -f;
        }
        self.scale(&f)
    }

    /// Monic in the grlex leading term.
    pub fn monic(&self) -> MPoly {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(&(Rational::one() / self.leading_coeff()))
    }

    /// Content over Q: the rational `c` with `self = c * normalize(self)`.
    pub fn rational_content(&self) -> Rational {
        if self.is_zero() {
            return Rational::zero();
        }
        let n = self.normalize();
        let (m, c) = self.leading_term().unwrap();
        c / n.terms.get(m).unwrap()
    }

    fn combine(&self, other: &MPoly, sign: bool) -> MPoly {
        assert!(
            self.vars == other.vars,
            "variable mismatch: {:?} vs {:?}",
            self.vars,
            other.vars
        );
        let mut r = self.clone();
        for (m, c) in &other.terms {
            r.add_term(m.clone(), if sign { c.clone() } else { -c.clone() });
        }
        r
    }

    fn product(&self, other: &MPoly) -> MPoly {
        assert!(
            self.vars == other.vars,
            "variable mismatch: {:?} vs {:?}",
            self.vars,
            other.vars
        );
        let mut r = Self::zero(&self.vars);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                r.add_term(m1.mul(m2), c1 * c2);
            }
        }
        r
    }
}

impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.terms.iter().rev() {
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            let mut parts = Vec::new();
            for (k, &e) in m.0.iter().enumerate() {
                match e {
                    0 => {}
                    1 => parts.push(self.vars[k].clone()),
                    _ => parts.push(format!("{}^{}", self.vars[k], e)),
                }
            }
            if parts.is_empty() {
                write!(f, "{}", fmt_rational(&a))?;
            } else if a.is_one() {
                write!(f, "{}", parts.join("*"))?;
            } else {
                write!(f, "{}*{}", fmt_rational(&a), parts.join("*"))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MPoly[{}]({})", self.vars.join(","), self)
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $body:expr) => {
        impl $tr<&MPoly> for &MPoly {
            type Output = MPoly;
            fn $m(self, o: &MPoly) -> MPoly {
                $body(self, o)
            }
        }
        impl $tr<MPoly> for MPoly {
            type Output = MPoly;
            fn $m(self, o: MPoly) -> MPoly {
                $body(&self, &o)
            }
        }
        impl $tr<&MPoly> for MPoly {
            type Output = MPoly;
            fn $m(self, o: &MPoly) -> MPoly {
                $body(&self, o)
            }
        }
        impl $tr<MPoly> for &MPoly {
            type Output = MPoly;
            fn $m(self, o: MPoly) -> MPoly {
                $body(self, &o)
            }
        }
    };
}

binop!(Add, add, |a: &MPoly, b: &MPoly| a.combine(b, true));
binop!(Sub, sub, |a: &MPoly, b: &MPoly| a.combine(b, false));
binop!(Mul, mul, |a: &MPoly, b: &MPoly| a.product(b));

impl Neg for MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        self.scale(&-Rational::one())
    }
}

impl Neg for &MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        self.scale(&-Rational::one())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::rational::{ri, rq};

    fn xy() -> (Vars, MPoly, MPoly) {
        let v = vars(&["x", "y"]);
        let x = MPoly::var(&v, "x");
        let y = MPoly::var(&v, "y");
        (v, x, y)
    }

    #[test]
    fn grlex_order() {
        let a = Monomial(vec![2, 0]);
        let b = Monomial(vec![1, 1]);
        let c = Monomial(vec![0, 3]);
        assert!(a > b);
        assert!(c > a);
    }

    #[test]
    fn arithmetic_and_display() {
        let (v, x, y) = xy();
        let p = &(&x * &x) - &MPoly::constant(&v, ri(1));
        let q = &(&x + &y).pow(2) - &(&(&x * &x) + &(&y * &y));
        assert_eq!(q, (&x * &y).scale(&ri(2)));
        assert_eq!(p.to_string(), "x^2 - 1");
        assert_eq!((&x * &y).scale(&rq(-3, 2)).to_string(), "-3/2*x*y");
    }

    #[test]
    fn division() {
        let (_, x, y) = xy();
        let a = &(&x * &x) - &(&y * &y);
        let b = &x - &y;
        assert_eq!(a.exact_div(&b), Some(&x + &y));
        assert_eq!(a.exact_div(&(&x + &(&y * &y))), None);
    }

    #[test]
    fn substitution_and_coefficients() {
        let (v, x, y) = xy();
        let p = &(&x * &x) + &(&x * &y);
        let s = p.substitute(0, &(&y + &MPoly::one(&v)));
        let y1 = &y + &MPoly::one(&v);
        assert_eq!(s, y1.pow(2) + &y1 * &y);
        let c = p.coefficients_in(0);
        assert_eq!(c.len(), 3);
        assert_eq!(c[1], y);
        assert_eq!(MPoly::from_coefficients_in(&v, 0, &c), p);
    }

    #[test]
    fn normalization() {
        let (_, x, y) = xy();
        let p = (&x - &y.scale(&rq(2, 3))).scale(&rq(-3, 5));
        assert_eq!(p.normalize(), &x.scale(&ri(3)) - &y.scale(&ri(2)));
        let back = p.normalize().scale(&p.rational_content());
        assert_eq!(back, p);
    }
}
