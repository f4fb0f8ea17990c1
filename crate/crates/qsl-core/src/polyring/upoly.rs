//! Dense univariate polynomials over a field.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Signed, Zero};

use super::field::{Embed, Field};
use super::rational::{ri, to_f64, Rational};

#[derive(Clone, Debug, PartialEq)]
pub struct UPoly<F: Field> {
    /// `c[k]` multiplies `t^k`; no trailing zeros.
    c: Vec<F>,
    zero: F,
}

impl<F: Field> UPoly<F> {
    pub fn new(coeffs: Vec<F>, zero: F) -> Self {
        let zero = zero.zero_like();
        let mut p = UPoly { c: coeffs, zero };
        p.trim();
        p
    }

    pub fn zero(zero: &F) -> Self {
        UPoly {
            c: vec![],
            zero: zero.zero_like(),
        }
    }

    pub fn constant(v: F) -> Self {
        let z = v.zero_like();
        Self::new(vec![v], z)
    }

    /// t − r
    pub fn linear_root(r: &F) -> Self {
        Self::new(vec![r.neg(), r.one_like()], r.zero_like())
    }

    fn trim(&mut self) {
        while self.c.last().is_some_and(|x| x.is_zero_elem()) {
            self.c.pop();
        }
    }

    pub fn coeffs(&self) -> &[F] {
        &self.c
    }

    pub fn coeff(&self, k: usize) -> F {
        self.c.get(k).cloned().unwrap_or_else(|| self.zero.clone())
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        if self.c.is_empty() {
            None
        } else {
            Some(self.c.len() - 1)
        }
    }

    pub fn lc(&self) -> F {
        self.c.last().cloned().unwrap_or_else(|| self.zero.clone())
    }

    pub fn zero_elem(&self) -> &F {
        &self.zero
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.c.len().max(o.c.len());
        let v = (0..n).map(|k| self.coeff(k).add(&o.coeff(k))).collect();
        Self::new(v, self.zero.clone())
    }

    pub fn sub(&self, o: &Self) -> Self {
        let n = self.c.len().max(o.c.len());
        let v = (0..n).map(|k| self.coeff(k).sub(&o.coeff(k))).collect();
        Self::new(v, self.zero.clone())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero(&self.zero);
        }
        let mut v = vec![self.zero.clone(); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            for (j, b) in o.c.iter().enumerate() {
                v[i + j] = v[i + j].add(&a.mul(b));
            }
        }
        Self::new(v, self.zero.clone())
    }

    pub fn scale(&self, s: &F) -> Self {
        Self::new(self.c.iter().map(|a| a.mul(s)).collect(), self.zero.clone())
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let l = self.lc();
        Self::new(self.c.iter().map(|a| a.div(&l)).collect(), self.zero.clone())
    }

    pub fn derivative(&self) -> Self {
        let v = self
            .c
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, a)| a.mul(&a.from_rational(&ri(k as i64))))
            .collect();
        Self::new(v, self.zero.clone())
    }

    pub fn eval(&self, x: &F) -> F {
        let mut r = self.zero.clone();
        for a in self.c.iter().rev() {
            r = r.mul(x).add(a);
        }
        r
    }

    pub fn divrem(&self, d: &Self) -> (Self, Self) {
        assert!(!d.is_zero(), "division by zero polynomial");
        let dd = d.c.len() - 1;
        let ld = d.lc();
        let mut r = self.c.clone();
        if r.len() <= dd {
            return (Self::zero(&self.zero), self.clone());
        }
        let mut q = vec![self.zero.clone(); r.len() - dd];
        for k in (dd..r.len()).rev() {
            let f = r[k].div(&ld);
            if f.is_zero_elem() {
                continue;
            }
            for (j, b) in d.c.iter().enumerate() {
                r[k - dd + j] = r[k - dd + j].sub(&f.mul(b));
            }
            q[k - dd] = f;
        }
        r.truncate(dd);
        (
            Self::new(q, self.zero.clone()),
            Self::new(r, self.zero.clone()),
        )
    }

    pub fn rem(&self, d: &Self) -> Self {
        self.divrem(d).1
    }

    /// Exact quotient, `None` if the division leaves a remainder.
    pub fn exact_div(&self, d: &Self) -> Option<Self> {
        let (q, r) = self.divrem(d);
        if r.is_zero() {
            Some(q)
        } else {
            None
        }
    }

    /// Monic gcd.
    pub fn gcd(&self, o: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Extended gcd: (g, s, t) with s·self + t·o = g monic.
    pub fn xgcd(&self, o: &Self) -> (Self, Self, Self) {
        let one = Self::constant(self.zero.one_like());
        let zero = Self::zero(&self.zero);
        let (mut r0, mut r1) = (self.clone(), o.clone());
        let (mut s0, mut s1) = (one.clone(), zero.clone());
        let (mut t0, mut t1) = (zero, one);
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1);
            r0 = r1;
            r1 = r;
            let s2 = s0.sub(&q.mul(&s1));
            s0 = s1;
            s1 = s2;
            let t2 = t0.sub(&q.mul(&t1));
            t0 = t1;
            t1 = t2;
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let l = r0.lc();
        let inv = l.one_like().div(&l);
        (r0.scale(&inv), s0.scale(&inv), t0.scale(&inv))
    }

    /// Yun's squarefree decomposition: pairs (factor, multiplicity), factors monic.
    pub fn squarefree(&self) -> Vec<(Self, u32)> {
        let mut out = Vec::new();
        if self.degree().unwrap_or(0) == 0 {
            return out;
        }
        let f = self.monic();
        let d = f.derivative();
        let mut a = f.gcd(&d);
        let mut b = f.divrem(&a).0;
        let mut c = d.divrem(&a).0;
        let mut k = 1;
        loop {
            let bd = b.derivative();
            let e = c.sub(&bd);
            if e.is_zero() {
                if b.degree().unwrap_or(0) > 0 {
                    out.push((b.monic(), k));
                }
                break;
            }
            a = b.gcd(&e);
            if a.degree().unwrap_or(0) > 0 {
                out.push((a.clone(), k));
            }
            b = b.divrem(&a).0;
            c = e.divrem(&a).0;
            k += 1;
            if b.degree().unwrap_or(0) == 0 {
                break;
            }
        }
        out
    }

    /// Roots of a degree ≤ 2 polynomial that lie in the coefficient field,
    /// given a square-root oracle. `None` if a root needs a larger field.
    pub fn small_roots(&self, sqrt: impl Fn(&F) -> Option<F>) -> Option<Vec<F>> {
        match self.degree() {
            None | Some(0) => Some(vec![]),
            Some(1) => Some(vec![self.c[0].neg().div(&self.c[1])]),
            Some(2) => {
                let (c0, c1, c2) = (&self.c[0], &self.c[1], &self.c[2]);
                let four = c2.from_rational(&ri(4));
                let two = c2.from_rational(&ri(2));
                let disc = c1.mul(c1).sub(&four.mul(c2).mul(c0));
                let s = sqrt(&disc)?;
                let den = two.mul(c2);
                let r1 = c1.neg().add(&s).div(&den);
                let r2 = c1.neg().sub(&s).div(&den);
                if r1 == r2 {
                    Some(vec![r1])
                } else {
                    Some(vec![r1, r2])
                }
            }
            _ => None,
        }
    }
}

impl<F: Field + Embed> UPoly<F> {
    pub fn to_complex(&self) -> Vec<Complex64> {
        self.c.iter().map(|a| a.to_complex()).collect()
    }
}

impl UPoly<Rational> {
    pub fn from_rationals(v: Vec<Rational>) -> Self {
        Self::new(v, Rational::zero())
    }

    pub fn from_ints(v: &[i64]) -> Self {
        Self::from_rationals(v.iter().map(|&k| ri(k)).collect())
    }

    fn sign_at(&self, x: &Rational) -> i32 {
        let v = self.eval(x);
        if v.is_zero() {
            0
        } else if v.is_positive() {
            1
        } else {
            -1
        }
    }

    pub fn sturm_sequence(&self) -> Vec<Self> {
        let mut seq = vec![self.clone(), self.derivative()];
        while !seq.last().unwrap().is_zero() {
            let n = seq.len();
            let r = seq[n - 2].rem(&seq[n - 1]);
            if r.is_zero() {
                break;
            }
            seq.push(r.scale(&-Rational::one()));
        }
        seq
    }

    fn sign_changes(seq: &[Self], x: &Rational) -> usize {
        let signs: Vec<i32> = seq
            .iter()
            .map(|p| p.sign_at(x))
            .filter(|&s| s != 0)
            .collect();
        signs.windows(2).filter(|w| w[0] != w[1]).count()
    }

    /// A bound B with every real root in (−B, B).
    pub fn cauchy_bound(&self) -> Rational {
        let l = self.lc().abs();
        let m = self
            .c
            .iter()
            .map(|a| a.abs() / &l)
            .fold(Rational::zero(), |a, b| if b > a { b } else { a });
        m + Rational::one()
    }

    /// Number of distinct real roots in (a, b].
    pub fn count_roots_in(&self, a: &Rational, b: &Rational) -> usize {
        if self.degree().unwrap_or(0) == 0 {
            return 0;
        }
        let seq = self.sturm_sequence();
        Self::sign_changes(&seq, a).saturating_sub(Self::sign_changes(&seq, b))
    }

    pub fn count_real_roots(&self) -> usize {
        if self.degree().unwrap_or(0) == 0 {
            return 0;
        }
        let b = self.cauchy_bound();
        self.count_roots_in(&-b.clone(), &b)
    }

    /// Isolating intervals (a, b] of the distinct real roots, each of width < `eps`.
    pub fn isolate_real_roots(&self, eps: &Rational) -> Vec<(Rational, Rational)> {
        if self.degree().unwrap_or(0) == 0 {
            return vec![];
        }
        let seq = self.sturm_sequence();
        let b = self.cauchy_bound();
        let mut out = Vec::new();
        let mut stack = vec![(-b.clone(), b)];
        while let Some((lo, hi)) = stack.pop() {
            let n = Self::sign_changes(&seq, &lo).saturating_sub(Self::sign_changes(&seq, &hi));
            if n == 0 {
                continue;
            }
            if n == 1 && (&hi - &lo) < *eps {
                out.push((lo, hi));
                continue;
            }
            let mid = (&lo + &hi) / ri(2);
            stack.push((mid.clone(), hi));
            stack.push((lo, mid));
        }
        out.sort_by(|a, b| a.0.cmp(&b.0));
        out
    }

    /// All rational roots (distinct).
    pub fn rational_roots(&self) -> Vec<Rational> {
        if self.degree().unwrap_or(0) == 0 {
            return vec![];
        }
        // work with a primitive integer multiple so denominators divide the leading coefficient
        let l = super::rational::lcm_denominators(self.c.iter());
        let ints: Vec<BigInt> = self
            .c
            .iter()
            .map(|a| (a * Rational::from_integer(l.clone())).to_integer())
            .collect();
        let lc = ints.last().unwrap().abs();
        let p = Self::from_rationals(ints.iter().map(|k| Rational::from_integer(k.clone())).collect());
        let sf = p.divrem(&p.gcd(&p.derivative())).0;
        let eps = Rational::new(BigInt::one(), lc.clone());
        let lcq = Rational::from_integer(lc);
        let mut roots = Vec::new();
        for (lo, hi) in sf.isolate_real_roots(&eps) {
            // a rational root is k/lc for an integer k
            let k = (&lo * &lcq).floor() + Rational::one();
            let cand = &k / &lcq;
            if cand > lo && cand <= hi && sf.eval(&cand).is_zero() {
                roots.push(cand);
            }
        }
        roots
    }

    /// Splits into rational linear factors (as roots with multiplicity) and
    /// the leftover monic factors without rational roots (with multiplicity).
    pub fn split_rational(&self) -> (Vec<(Rational, u32)>, Vec<(Self, u32)>) {
        let mut lin = Vec::new();
        let mut rest = Vec::new();
        for (f, m) in self.squarefree() {
            let mut g = f;
            for r in g.rational_roots() {
                lin.push((r.clone(), m));
                g = g.divrem(&Self::linear_root(&r)).0;
            }
            if g.degree().unwrap_or(0) > 0 {
                rest.push((g.monic(), m));
            }
        }
        lin.sort_by(|a, b| a.0.cmp(&b.0));
        (lin, rest)
    }

    /// Complex roots by Aberth iteration, polished with Newton steps.
    pub fn complex_roots(&self) -> Vec<Complex64> {
        let n = match self.degree() {
            None | Some(0) => return vec![],
            Some(n) => n,
        };
        let c: Vec<Complex64> = self.monic().c.iter().map(|a| Complex64::new(to_f64(a), 0.0)).collect();
        let eval = |z: Complex64| -> (Complex64, Complex64) {
            let mut p = Complex64::new(0.0, 0.0);
            let mut d = Complex64::new(0.0, 0.0);
            for a in c.iter().rev() {
                d = d * z + p;
                p = p * z + a;
            }
            (p, d)
        };
        let radius = to_f64(&self.monic().cauchy_bound()).max(1.0);
        let mut z: Vec<Complex64> = (0..n)
            .map(|k| {
                let ang = 2.0 * std::f64::consts::PI * (k as f64) / (n as f64) + 0.4;
                Complex64::from_polar(radius * 0.5, ang)
            })
            .collect();
        for _ in 0..500 {
            let mut moved = 0.0f64;
            for i in 0..n {
                let (p, d) = eval(z[i]);
                if p.norm() == 0.0 {
                    continue;
                }
                let ratio = p / d;
                let s: Complex64 = (0..n)
                    .filter(|&j| j != i)
                    .map(|j| Complex64::new(1.0, 0.0) / (z[i] - z[j]))
                    .sum();
                let w = ratio / (Complex64::new(1.0, 0.0) - ratio * s);
                z[i] -= w;
                moved = moved.max(w.norm());
            }
            if moved < 1e-15 {
                break;
            }
        }
        z
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::rational::rq;

    #[test]
    fn division_and_gcd() {
        // (t-1)(t-2) and (t-1)(t+3)
        let a = UPoly::from_ints(&[2, -3, 1]);
        let b = UPoly::from_ints(&[-3, 2, 1]);
        assert_eq!(a.gcd(&b), UPoly::from_ints(&[-1, 1]));
        let (q, r) = a.divrem(&UPoly::from_ints(&[-1, 1]));
        assert!(r.is_zero());
        assert_eq!(q, UPoly::from_ints(&[-2, 1]));
    }

    #[test]
    fn squarefree_parts() {
        // (t-1)^2 (t+2)^3 t
        let l1 = UPoly::from_ints(&[-1, 1]);
        let l2 = UPoly::from_ints(&[2, 1]);
        let t = UPoly::from_ints(&[0, 1]);
        let p = l1.mul(&l1).mul(&l2).mul(&l2).mul(&l2).mul(&t);
        let sf = p.squarefree();
        assert_eq!(sf.len(), 3);
        assert_eq!(sf[0], (t, 1));
        assert_eq!(sf[1], (l1, 2));
        assert_eq!(sf[2], (l2, 3));
    }

    #[test]
    fn roots() {
        // 6t^3 - 5t^2 - 2t + 1 = (t-1)(2t+1)(3t-1)
        let p = UPoly::from_ints(&[1, -2, -5, 6]);
        assert_eq!(p.rational_roots(), vec![rq(-1, 2), rq(1, 3), ri(1)]);
        assert_eq!(p.count_real_roots(), 3);
        let q = UPoly::from_ints(&[1, 0, 1]);
        assert_eq!(q.count_real_roots(), 0);
        assert!(q.rational_roots().is_empty());
        let (lin, rest) = UPoly::from_ints(&[-2, 0, 1]).mul(&UPoly::from_ints(&[-3, 1])).split_rational();
        assert_eq!(lin, vec![(ri(3), 1)]);
        assert_eq!(rest, vec![(UPoly::from_ints(&[-2, 0, 1]), 1)]);
    }

    #[test]
    fn complex_roots_of_cubic() {
        let p = UPoly::from_ints(&[-2, 0, 0, 1]);
        let z = p.complex_roots();
        for r in z {
            assert!((r * r * r - 2.0).norm() < 1e-10);
        }
    }
}
