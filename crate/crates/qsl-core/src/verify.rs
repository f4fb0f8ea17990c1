//! Brute-force invariant lines and the perturbation families.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_complex::Complex64;
use num_traits::{One, Zero};

use crate::classify::{classify, consistency_check, ConfigLabel, ConsistencyReport};
use crate::comitants::{Comitants, Name};
use crate::invlines::{
    binary_form_points, cofactor, extract_lines, numeric_lines, Coeffs, InvariantLine, Provenance,
};
use crate::polyring::field::{Embed, Field};
use crate::polyring::lines::{factor_into_lines, normalize_line, LineTriple};
use crate::polyring::mpoly::{vars, MPoly};
use crate::polyring::numfield::NfElem;
use crate::polyring::parse::parse_poly;
use crate::polyring::quadext::QuadExtScalar;
use crate::polyring::rational::{fmt_rational, ri, Rational};
use crate::polyring::upoly::UPoly;
use crate::system::{homogenize_xy, xy_vars, xyz_vars, QuadraticSystem, Validity};

/// Tolerance for comparing numerically computed lines.
pub const NUMERIC_TOL: f64 = 1e-6;

/// Outcome of matching the cofactor identity in one direction.
enum Hit<F> {
    /// w, with cofactor (r, s, t).
    Line(F, [F; 3]),
    /// λw² − σw + c₀ = 0 with t = σ − λw.
    Quadratic { lambda: F, sigma: F, c0: F },
}

fn coeff<F: Field>(like: &F, q: &Rational) -> F {
    like.from_rational(q)
}

/// Lines u·x + v·y + w = 0 with the given direction.
fn direction_hits<F: Field>(s: &QuadraticSystem, u: &F, v: &F) -> Vec<Hit<F>> {
    let a = &s.a;
    let two = ri(2);
    let f = |i: usize, k: &Rational| u.mul(&coeff(u, &(&a[i] * k))).add(&v.mul(&coeff(u, &(&a[i + 6] * k))));
    let one = Rational::one();
    let (c0, a10, a01, f20, f11, f02) = (
        f(0, &one),
        f(1, &one),
        f(2, &one),
        f(3, &one),
        f(4, &two),
        f(5, &one),
    );
    // u·p₂ + v·q₂ = (ux + vy)(rx + sy)
    let (r, sc) = if !u.is_zero_elem() {
        let r = f20.div(u);
        (r.clone(), f11.sub(&v.mul(&r)).div(u))
    } else {
        let sc = f02.div(v);
        (f11.div(v), sc)
    };
    if u.mul(&r) != f20 || u.mul(&sc).add(&v.mul(&r)) != f11 || v.mul(&sc) != f02 {
        return vec![];
    }
    // r·w + u·t = A10, s·w + v·t = A01
    let det = r.mul(v).sub(&u.mul(&sc));
    if !det.is_zero_elem() {
        let w = a10.mul(v).sub(&u.mul(&a01)).div(&det);
        let t = r.mul(&a01).sub(&sc.mul(&a10)).div(&det);
        if w.mul(&t) == c0 {
            return vec![Hit::Line(w, [r, sc, t])];
        }
        return vec![];
    }
    // (r, s) = λ(u, v)
    let lambda = if !u.is_zero_elem() { r.div(u) } else { sc.div(v) };
    if a10.mul(v) != a01.mul(u) {
        return vec![];
    }
    let sigma = if !u.is_zero_elem() { a10.div(u) } else { a01.div(v) };
    if lambda.is_zero_elem() {
        if sigma.is_zero_elem() {
            // u·p + v·q ≡ 0 only happens for degenerate systems
            return vec![];
        }
        let w = c0.div(&sigma);
        return vec![Hit::Line(w, [r, sc, sigma])];
    }
    vec![Hit::Quadratic { lambda, sigma, c0 }]
}

fn complex_quadratic(a: Complex64, b: Complex64, c: Complex64) -> [Complex64; 2] {
    let d = (b * b - a * c * 4.0).sqrt();
    [(-b + d) / (a * 2.0), (-b - d) / (a * 2.0)]
}

fn numeric_line(u: Complex64, v: Complex64, w: Complex64) -> InvariantLine {
    let lead = if u.norm() > 1e-300 { u } else { v };
    InvariantLine {
        coeffs: Coeffs::Numeric([u / lead, v / lead, w / lead]),
        multiplicity: 1,
        cofactor: None,
        at_infinity: false,
        provenance: Provenance::VerifiedSimple,
    }
}

fn exact_line(s: &QuadraticSystem, l: LineTriple) -> InvariantLine {
    let l = normalize_line(&l);
    let k = cofactor(s, &l);
    debug_assert!(k.is_some(), "oracle line fails the cofactor identity");
    InvariantLine {
        coeffs: Coeffs::Exact(l),
        multiplicity: 1,
        cofactor: k,
        at_infinity: false,
        provenance: Provenance::VerifiedSimple,
    }
}

/// All affine invariant lines, each once, straight from the cofactor identity.
pub fn oracle_lines(s: &QuadraticSystem) -> Vec<InvariantLine> {
    let mut out: Vec<InvariantLine> = Vec::new();
    let c2 = Comitants::of(s).get(Name::C2);
    if c2.is_zero() {
        // every direction is a candidate; only parallel classes through p₂, q₂ matter
        return oracle_any_direction(s);
    }
    let pts = binary_form_points(&c2);
    for (pt, _) in &pts.points {
        let Coeffs::Exact(t) = pt else { continue };
        // point [a : b : 0] ↔ direction (−v, u) = (a, b)
        let (u, v) = (t[1].clone(), t[0].neg());
        for hit in direction_hits(s, &u, &v) {
            match hit {
                Hit::Line(w, _) => out.push(exact_line(s, [u.clone(), v.clone(), w])),
                Hit::Quadratic { lambda, sigma, c0, .. } => {
                    let disc = sigma.mul(&sigma).sub(&ri(4).to_qe().mul(&lambda).mul(&c0));
                    let root = disc.sqrt_in_field().or_else(|| {
                        disc.as_rational().filter(|_| u.is_rational() && v.is_rational()).map(|d| QuadExtScalar::sqrt_rational(&d))
                    });
                    match root {
                        Some(r) => {
                            let two_l = lambda.add(&lambda);
                            let mut ws = vec![sigma.add(&r).div(&two_l)];
                            if !r.is_zero_elem() {
                                ws.push(sigma.sub(&r).div(&two_l));
                            }
                            for w in ws {
                                out.push(exact_line(s, [u.clone(), v.clone(), w]));
                            }
                        }
                        None => {
                            let [w1, w2] = complex_quadratic(
                                lambda.to_complex(),
                                -sigma.to_complex(),
                                c0.to_complex(),
                            );
                            for w in [w1, w2] {
                                out.push(numeric_line(u.to_complex(), v.to_complex(), w));
                            }
                        }
                    }
                }
            }
        }
    }
    // an irreducible cubic factor of C₂: directions in Q[t]/(m)
    let cubic = cubic_factor(&c2);
    if let Some(m) = cubic {
        let m = Arc::new(m);
        let t = NfElem::generator(&m);
        // point [t : 1 : 0] ↔ (u, v) = (1, −t)
        let u = t.one_like();
        let v = t.neg();
        let roots = m.complex_roots();
        for hit in direction_hits(s, &u, &v) {
            for &z in &roots {
                let (uc, vc) = (u.embed(z), v.embed(z));
                match &hit {
                    Hit::Line(w, _) => out.push(numeric_line(uc, vc, w.embed(z))),
                    Hit::Quadratic { lambda, sigma, c0, .. } => {
                        let ws = complex_quadratic(lambda.embed(z), -sigma.embed(z), c0.embed(z));
                        for w in ws {
                            out.push(numeric_line(uc, vc, w));
                        }
                    }
                }
            }
        }
    }
    dedup_lines(out)
}

trait ToQe {
    fn to_qe(&self) -> QuadExtScalar;
}

impl ToQe for Rational {
    fn to_qe(&self) -> QuadExtScalar {
        QuadExtScalar::rational(self.clone())
    }
}

fn cubic_factor(c2: &MPoly) -> Option<UPoly<Rational>> {
    let v = xyz_vars();
    let h = c2.rename(&vars(&["X", "Y"])).with_vars(&v);
    let r = factor_into_lines(&h).residue;
    if r.total_degree() != 3 {
        return None;
    }
    Some(UPoly::from_rationals((0..=3).map(|i| r.coeff(&[i, 3 - i, 0])).collect()).monic())
}

/// C₂ ≡ 0, so p₂ = x·ℓ and q₂ = y·ℓ and every direction passes the quadratic test.
/// Directions (1, τ) then satisfy one polynomial equation in τ.
fn oracle_any_direction(s: &QuadraticSystem) -> Vec<InvariantLine> {
    let a = &s.a;
    let qe = |q: &Rational| QuadExtScalar::rational(q.clone());
    let mut out = Vec::new();
    let try_dir = |u: QuadExtScalar, v: QuadExtScalar, out: &mut Vec<InvariantLine>| {
        for hit in direction_hits(s, &u, &v) {
            if let Hit::Line(w, _) = hit {
                out.push(exact_line(s, [u.clone(), v.clone(), w]));
            }
        }
    };
    try_dir(qe(&Rational::zero()), qe(&Rational::one()), &mut out);
    // ℓ = αx + βy from p₂ = x·ℓ
    let (alpha, beta) = (a[3].clone(), &a[4] * ri(2));
    if !alpha.is_zero() {
        try_dir(qe(&alpha), qe(&beta), &mut out);
    }
    // (A10·τ − A01)(α·A01 − β·A10) − c₀(τ)(ατ − β)² with A10 = a10 + τ b10, A01 = a01 + τ b01
    let lin = |c0: &Rational, c1: &Rational| UPoly::from_rationals(vec![c0.clone(), c1.clone()]);
    let a10 = lin(&a[1], &a[7]);
    let a01 = lin(&a[2], &a[8]);
    let c0 = lin(&a[0], &a[6]);
    let tau = lin(&Rational::zero(), &Rational::one());
    let det = lin(&-beta.clone(), &alpha);
    let k = UPoly::constant;
    let eq = a10
        .mul(&tau)
        .sub(&a01)
        .mul(&k(alpha.clone()).mul(&a01).sub(&k(beta.clone()).mul(&a10)))
        .sub(&c0.mul(&det).mul(&det));
    if eq.is_zero() {
        return dedup_lines(out);
    }
    let (rat, rest) = eq.split_rational();
    for (t, _) in rat {
        try_dir(qe(&Rational::one()), qe(&t), &mut out);
    }
    for (f, _) in rest {
        if f.degree() == Some(2) {
            let (q0, q1, q2) = (f.coeff(0), f.coeff(1), f.coeff(2));
            let r = QuadExtScalar::sqrt_rational(&(&q1 * &q1 - ri(4) * &q2 * &q0));
            for sg in [1, -1] {
                let t = qe(&-q1.clone()).add(&r.mul(&qe(&ri(sg)))).div(&qe(&(&q2 * ri(2))));
                try_dir(qe(&Rational::one()), t, &mut out);
            }
        } else {
            for t in f.complex_roots() {
                let ev = |p: &UPoly<Rational>| -> Complex64 {
                    p.coeffs().iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| acc * t + c.to_complex())
                };
                let d = ev(&det);
                let w = (ev(&a10) * t - ev(&a01)) / d;
                out.push(numeric_line(Complex64::new(1.0, 0.0), t, w));
            }
        }
    }
    dedup_lines(out)
}

pub fn same_line(a: &Coeffs, b: &Coeffs) -> bool {
    if let (Coeffs::Exact(x), Coeffs::Exact(y)) = (a, b) {
        return normalize_line(x) == normalize_line(y);
    }
    let (x, y) = (a.to_complex(), b.to_complex());
    let nx = x.iter().find(|z| z.norm() > 1e-12).copied().unwrap();
    let ny = y.iter().find(|z| z.norm() > 1e-12).copied().unwrap();
    let scale = x.iter().map(|z| (z / nx).norm()).fold(1.0, f64::max);
    x.iter()
        .zip(&y)
        .all(|(p, q)| (p / nx - q / ny).norm() <= NUMERIC_TOL * scale)
}

fn dedup_lines(v: Vec<InvariantLine>) -> Vec<InvariantLine> {
    let mut out: Vec<InvariantLine> = Vec::new();
    for l in v {
        if !out.iter().any(|o| same_line(&o.coeffs, &l.coeffs)) {
            out.push(l);
        }
    }
    out
}

/// Distinct-set difference a \ b.
pub fn set_minus(a: &[Coeffs], b: &[Coeffs]) -> Vec<Coeffs> {
    a.iter()
        .filter(|x| !b.iter().any(|y| same_line(x, y)))
        .cloned()
        .collect()
}

fn eval_field<F: Field>(f: &MPoly, pt: &[F]) -> F {
    let z = pt[0].zero_like();
    let mut acc = z.clone();
    for (m, c) in f.terms() {
        let mut t = z.from_rational(c);
        for (e, x) in m.0.iter().zip(pt) {
            for _ in 0..*e {
                t = t.mul(x);
            }
        }
        acc = acc.add(&t);
    }
    acc
}

fn eval_complex(f: &MPoly, pt: &[Complex64]) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for (m, c) in f.terms() {
        let mut t = Complex64::new(crate::polyring::rational::to_f64(c), 0.0);
        for (e, x) in m.0.iter().zip(pt) {
            t *= x.powu(*e);
        }
        acc += t;
    }
    acc
}

/// Whether a binary form vanishes at the direction (−v, u) of the line.
fn vanishes_on_direction(f: &MPoly, l: &Coeffs) -> bool {
    match l {
        Coeffs::Exact(t) => eval_field(f, &[t[1].neg(), t[0].clone()]).is_zero_elem(),
        Coeffs::Numeric(c) => {
            let scale = f.terms().map(|(_, k)| crate::polyring::rational::to_f64(k).abs()).fold(1.0, f64::max);
            eval_complex(f, &[-c[1], c[0]]).norm() <= NUMERIC_TOL * scale * (1.0 + c[0].norm() + c[1].norm()).powi(3)
        }
    }
}

/// Direction classes of a set of affine lines (parallel lines share a class).
pub fn direction_classes(lines: &[Coeffs]) -> Vec<Vec<Coeffs>> {
    let mut classes: Vec<Vec<Coeffs>> = Vec::new();
    let dir = |c: &Coeffs| -> Coeffs {
        match c {
            Coeffs::Exact(t) => {
                let z = t[0].zero_like();
                Coeffs::Exact(normalize_line(&[t[0].clone(), t[1].clone(), z]))
            }
            Coeffs::Numeric(c) => Coeffs::Numeric([c[0], c[1], Complex64::new(0.0, 0.0)]),
        }
    };
    for l in lines {
        let d = dir(l);
        match classes.iter_mut().find(|cl| same_line(&dir(&cl[0]), &d)) {
            Some(cl) => cl.push(l.clone()),
            None => classes.push(vec![l.clone()]),
        }
    }
    classes
}

/// Necessary conditions every set of invariant lines must satisfy.
pub fn necessity_failures(s: &QuadraticSystem, lines: &[Coeffs]) -> Vec<String> {
    let c = Comitants::of(s);
    let mut out = Vec::new();
    let c2 = c.get(Name::C2);
    let d = c.get(Name::D);
    for l in lines {
        if !vanishes_on_direction(&c2, l) {
            out.push(format!("C2 does not vanish on the direction of {l:?}"));
        }
        if !vanishes_on_direction(&d, l) {
            out.push(format!("D does not vanish on the direction of {l:?}"));
        }
    }
    let classes = direction_classes(lines);
    let n_dirs = classes.len();
    for (k, name) in [(1, Name::B1), (2, Name::B2), (3, Name::B3)] {
        if n_dirs >= k && !c.is_zero(name) {
            out.push(format!("{n_dirs} directions but {name} != 0"));
        }
    }
    let parallel = classes.iter().filter(|cl| cl.len() >= 2).count();
    if parallel >= 1 && !c.is_zero(Name::Theta) {
        out.push("parallel lines but theta != 0".into());
    }
    if parallel >= 2 && !c.is_zero(Name::N) {
        out.push("two parallel pairs but N != 0".into());
    }
    out
}

#[derive(Debug, Clone)]
pub struct CrossReport {
    pub pipeline: Vec<Coeffs>,
    pub oracle: Vec<Coeffs>,
    pub only_pipeline: Vec<Coeffs>,
    pub only_oracle: Vec<Coeffs>,
    pub necessity: Vec<String>,
    pub consistency: Option<ConsistencyReport>,
    pub errors: Vec<String>,
}

impl CrossReport {
    pub fn matched(&self) -> bool {
        self.only_pipeline.is_empty() && self.only_oracle.is_empty()
    }

    pub fn ok(&self) -> bool {
        self.matched()
            && self.necessity.is_empty()
            && self.errors.is_empty()
            && self.consistency.as_ref().map(|c| c.ok()).unwrap_or(true)
    }
}

pub fn cross_validate(s: &QuadraticSystem) -> CrossReport {
    let mut errors = Vec::new();
    let oracle: Vec<Coeffs> = oracle_lines(s).into_iter().map(|l| l.coeffs).collect();
    let (pipeline, consistency) = match extract_lines(s) {
        Ok(cfg) => {
            errors.extend(cfg.warnings.iter().cloned());
            if cfg.m_il > 6 {
                errors.push(format!("M_IL = {} exceeds 6", cfg.m_il));
            }
            let cons = match classify(s) {
                Ok((label, _)) if label.is_config() => Some(consistency_check(s, label, &cfg)),
                Ok(_) => None,
                Err(e) => {
                    errors.push(e.to_string());
                    None
                }
            };
            (cfg.affine().map(|l| l.coeffs.clone()).collect::<Vec<_>>(), cons)
        }
        Err(e) => {
            errors.push(e.to_string());
            (vec![], None)
        }
    };
    CrossReport {
        only_pipeline: set_minus(&pipeline, &oracle),
        only_oracle: set_minus(&oracle, &pipeline),
        necessity: necessity_failures(s, &oracle),
        pipeline,
        oracle,
        consistency,
        errors,
    }
}

/// A perturbed family from the tables, over the variables g, e, x, y.
#[derive(Debug, Clone, Copy)]
pub struct PerturbationFamily {
    pub label: ConfigLabel,
    pub p: &'static str,
    pub q: &'static str,
    /// Each entry F stands for the lines of F = 0.
    pub lines: &'static [&'static str],
}

macro_rules! fam {
    ($k:literal, $six:literal, $p:literal, $q:literal, [$($l:literal),*]) => {
        PerturbationFamily {
            label: if $six { ConfigLabel::Config6($k) } else { ConfigLabel::Config5($k) },
            p: $p,
            q: $q,
            lines: &[$($l),*],
        }
    };
}

/// Every row with a known perturbation, lines as listed.
pub fn perturbation_families() -> Vec<PerturbationFamily> {
    vec![
        fam!(5, true, "x^2-e^2", "y^2-e^2", ["x^2-e^2", "y^2-e^2", "y-x"]),
        fam!(6, true, "2*x*y", "e^2-x^2+y^2", ["x", "(y-e)^2+x^2", "(y+e)^2+x^2"]),
        fam!(7, true, "-1+x^2", "2*y*(e*y+1)", ["x^2-1", "e*y+1", "y", "x-2*e*y-1"]),
        fam!(8, true, "1-x^2", "-2*x*y-e*y^2", ["y", "x^2-1", "(x+e*y)^2-1"]),
        fam!(9, true, "-1-x^2", "-2*x*y-e*y^2", ["y", "x^2+1", "(x+e*y)^2+1"]),
        fam!(10, true, "(1-e)^2*x^2-e^2", "(2*e^2*y+1)*(2*e*y+1)",
            ["(1-e)^2*x^2-e^2", "2*e*y+1", "2*e^2*y+1", "(e-1)^2*x-4*e^3*y-e*(e+1)"]),
        fam!(11, true, "x+e*x^2", "y-x^2-2*e*x*y-2*e^2*y^2",
            ["x", "e*x+1", "x+e*y", "x+2*e*y", "e*x+2*e^2*y-1"]),
        fam!(7, false, "(x+1)*(e*x+1)", "(e-1)*x*y+y^2", ["y", "x+1", "y-x-1", "e*x+1"]),
        fam!(8, false, "(x+e)*(g*x+e)", "(g-1)*x*y+y^2", ["y", "x+e", "y-x-e", "g*x+e"]),
        fam!(9, false, "2*x*(e*x+1)", "1+2*e*x-x^2+2*e*x*y-y^2", ["x", "e*x+1", "(y+1)^2+x^2"]),
        fam!(10, false, "4*g*e^2+e*(g^2+4)*x+g*x^2", "e^2*(4-g^2)-x^2+g*x*y-y^2",
            ["x+g*e", "g*x+4*e", "(x+g*e)^2+(y+2*e)^2"]),
        fam!(11, false, "e*x+x^2+(1+e)*x*y", "y+y^2", ["x", "y+1", "y", "x+e*y+e"]),
        fam!(12, false, "x^2-1", "y^2-e^2", ["x^2-1", "y^2-e^2"]),
        fam!(13, false, "g*(x^2-1)", "2*y*(e*y+1)", ["y", "x^2-1", "e*y+1"]),
        fam!(14, false, "(x+1)*(g*x+1)", "(g-1)*x*y-e*y^2", ["x+1", "g*x+1", "y", "x+e*y+1"]),
        fam!(15, false, "g*(x^2+1)", "2*y*(e*y+1)", ["y", "x^2+1", "e*y+1"]),
        fam!(16, false, "x^2+1", "y^2-e^2", ["x^2+1", "y^2-e^2"]),
        fam!(17, false, "x^2-e^2", "2*y*(e*y+1)", ["y", "x^2-e^2", "e*y+1"]),
        fam!(18, false, "(x+1)*(e*x+1)", "(e-1)*x*y-e*y^2", ["x+1", "e*x+1", "y", "x+e*y+1"]),
        fam!(19, false, "e^2*x+x^2+(1+e)*x*y", "e*y+y^2", ["x", "y", "y+e", "x+e*y+e^2"]),
        fam!(20, false, "x^2-1", "1-e^2*y^2", ["x^2-1", "e^2*y^2-1"]),
        fam!(21, false, "(x+1)*(x+4*e*x-1)", "(x+2*y)*(1+4*e*y)",
            ["x+1", "x*(1+4*e)-1", "4*e*y+1", "x-8*e*y-1"]),
        fam!(22, false, "1-x^2", "1-2*x*y-e*y^2", ["x^2-1", "(x+e*y)^2-(1+e)"]),
        fam!(23, false, "(1+e)*(x-1+2*e)*(x+1-2*e)",
            "(4*e^2-3)+(1+2*e)*y-x^2+(1-2*e)*x*y-2*e^2*y^2",
            ["x^2-(1-2*e)^2", "x+e*y-1", "x+2*e*y-1-2*e"]),
        fam!(24, false, "x^2+1", "1-e^2*y^2", ["x^2+1", "e^2*y^2-1"]),
        fam!(25, false, "-1-x^2", "1-2*x*y-e*y^2", ["x^2+1", "(x+e*y)^2+(1-e)"]),
        fam!(26, false, "g+(2*g*e-1)*x-2*e*x^2",
            "(2*g*e+1)*y-x^2-6*g*e^2*x*y+3*e^2*(1+2*g*e-3*g^2*e^2)*y^2",
            ["x-g", "3*e*(x+e*(3*g*e+1)*y)+1", "2*e*x+1", "e*(x+3*e*(g*e-1)*y)-1"]),
        fam!(27, false, "1+x+e*x^2", "y-x^2-2*e*x*y-2*e^2*y^2",
            ["1+x+e^2*x^2", "e*(x+2*e*y)^2-(x+2*e*y)-1"]),
        fam!(28, false, "(e-1)*e^2+2*e^3*x+(1-e)*(1-2*e+3*e^2)*x^2",
            "(1-e)*(2*e^2*y+1)*(x+2*e*y+1)",
            ["(e-1)*x-e", "2*e^2*y+1", "(1-2*e+3*e^2)*x-e*(1-e)", "(e-1)^2*x-4*e^3*y-e*(e+1)"]),
        fam!(29, false, "e^2-x^2", "1-2*x*y-e*y^2", ["x^2-e^2", "(x+e*y)^2-(e^2+e)"]),
        fam!(30, false, "1+e*x+e^3*x^2", "g+e*y-x^2-2*e^3*x*y-2*e^6*y^2",
            ["1+e*x+e^3*x^2", "e^3*(x+2*e^3*y)^2-e*(x+2*e^3*y)-1-2*g*e^3"]),
    ]
}

pub fn family_for(label: ConfigLabel) -> Option<PerturbationFamily> {
    perturbation_families().into_iter().find(|f| f.label == label)
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PerturbError {
    #[error("{0} has no perturbation family")]
    NoFamily(ConfigLabel),
    #[error("epsilon must be nonzero with |epsilon| <= 1/2")]
    Epsilon,
    #[error("perturbed system is degenerate at epsilon = {0}")]
    Degenerate(String),
}

fn gexy() -> crate::polyring::mpoly::Vars {
    vars(&["g", "e", "x", "y"])
}

fn specialize(text: &str, g: &Rational, e: &Rational) -> MPoly {
    parse_poly(text, &gexy())
        .expect("family entry parses")
        .eval_var(0, g)
        .eval_var(1, e)
        .with_vars(&xy_vars())
}

fn family_system(f: &PerturbationFamily, g: &Rational, e: &Rational) -> QuadraticSystem {
    QuadraticSystem::from_polys(&specialize(f.p, g, e), &specialize(f.q, g, e))
        .expect("family is quadratic")
}

/// Lines of F = 0 for F in x, y.
fn lines_of(f: &MPoly) -> (Vec<Coeffs>, Vec<u32>) {
    let d = f.total_degree();
    if d == 0 {
        return (vec![], vec![]);
    }
    let h = homogenize_xy(f, &xyz_vars(), d);
    let fact = factor_into_lines(&h);
    let mut out = Vec::new();
    let mut mult = Vec::new();
    for lf in fact.lines {
        if lf.line[0].is_zero_elem() && lf.line[1].is_zero_elem() {
            continue;
        }
        out.push(Coeffs::Exact(lf.line));
        mult.push(lf.exponent);
    }
    if !fact.residue.is_constant() {
        for (l, m) in numeric_lines(&fact.residue) {
            out.push(Coeffs::Numeric(l));
            mult.push(m);
        }
    }
    (out, mult)
}

#[derive(Debug, Clone)]
pub struct PerturbationReport {
    pub label: ConfigLabel,
    pub epsilon: Rational,
    pub g: Option<Rational>,
    pub expected: Vec<Coeffs>,
    pub found: Vec<Coeffs>,
    pub missing: Vec<Coeffs>,
    pub extra: Vec<Coeffs>,
    /// Limit lines at ε = 0 against the unperturbed configuration.
    pub limit_diagnostics: Vec<String>,
}

impl PerturbationReport {
    pub fn ok(&self) -> bool {
        self.missing.is_empty() && self.extra.is_empty() && self.limit_diagnostics.is_empty()
    }
}

/// The perturbation family of `label` at ε against the oracle, and its ε → 0 limit.
pub fn perturbation_check(
    label: ConfigLabel,
    params: &BTreeMap<String, Rational>,
    eps: &Rational,
) -> Result<PerturbationReport, PerturbError> {
    let fam = family_for(label).ok_or(PerturbError::NoFamily(label))?;
    if eps.is_zero() || eps.exceeds_half() {
        return Err(PerturbError::Epsilon);
    }
    let g = params.get("g").cloned();
    let gv = g.clone().unwrap_or_else(Rational::zero);
    let s = family_system(&fam, &gv, eps);
    if s.validate() != Validity::Ok {
        return Err(PerturbError::Degenerate(fmt_rational(eps)));
    }
    let mut expected: Vec<Coeffs> = Vec::new();
    for t in fam.lines {
        for l in lines_of(&specialize(t, &gv, eps)).0 {
            if !expected.iter().any(|e| same_line(e, &l)) {
                expected.push(l);
            }
        }
    }
    let found: Vec<Coeffs> = oracle_lines(&s).into_iter().map(|l| l.coeffs).collect();
    let limit_diagnostics = limit_check(&fam, &gv);
    Ok(PerturbationReport {
        label,
        epsilon: eps.clone(),
        g,
        missing: set_minus(&expected, &found),
        extra: set_minus(&found, &expected),
        expected,
        found,
        limit_diagnostics,
    })
}

trait HalfBound {
    fn exceeds_half(&self) -> bool;
}

impl HalfBound for Rational {
    fn exceeds_half(&self) -> bool {
        let a = if self < &Rational::zero() { -self.clone() } else { self.clone() };
        a > Rational::new(1.into(), 2.into())
    }
}

/// Printed lines at ε → 0 land on the unperturbed lines with their multiplicities,
/// the rest on Z = 0.
fn limit_check(fam: &PerturbationFamily, g: &Rational) -> Vec<String> {
    let mut out = Vec::new();
    let zero = Rational::zero();
    let base = family_system(fam, g, &zero);
    match classify(&base) {
        Ok((l, _)) if l == fam.label => {}
        Ok((l, _)) => out.push(format!("family at e=0 classifies as {l}, not {}", fam.label)),
        Err(e) => out.push(format!("family at e=0: {e}")),
    }
    let cfg = match extract_lines(&base) {
        Ok(c) => c,
        Err(e) => {
            out.push(e.to_string());
            return out;
        }
    };
    let v = gexy();
    let mut limits: Vec<(Coeffs, u32)> = Vec::new();
    let mut to_infinity = 0u32;
    for t in fam.lines {
        let f = parse_poly(t, &v).unwrap().eval_var(0, g);
        // lowest power of e with a nonzero coefficient
        let cs = f.coefficients_in(1);
        let lead = cs.iter().find(|c| !c.is_zero()).expect("nonzero line equation");
        let at_eps = f.eval_var(1, &Rational::new(1.into(), 7.into())).with_vars(&xy_vars());
        let lim = lead.with_vars(&xy_vars());
        to_infinity += at_eps.total_degree() - lim.total_degree();
        let (ls, ms) = lines_of(&lim);
        for (l, m) in ls.into_iter().zip(ms) {
            match limits.iter_mut().find(|(x, _)| same_line(x, &l)) {
                Some(e) => e.1 += m,
                None => limits.push((l, m)),
            }
        }
    }
    for l in cfg.affine() {
        let got = limits
            .iter()
            .find(|(x, _)| same_line(x, &l.coeffs))
            .map(|(_, m)| *m)
            .unwrap_or(0);
        if got != l.multiplicity {
            out.push(format!("{l}: {got} perturbed lines converge to it"));
        }
    }
    for (x, _) in &limits {
        if !cfg.affine().any(|l| same_line(&l.coeffs, x)) {
            out.push(format!("limit line {x:?} is not invariant at e=0"));
        }
    }
    let mz = cfg.infinity_multiplicity();
    if to_infinity != mz - 1 {
        out.push(format!("{to_infinity} lines escape to Z=0, M(Z)-1 = {}", mz - 1));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::rational::rq;

    fn sys(p: &str, q: &str) -> QuadraticSystem {
        let v = xy_vars();
        QuadraticSystem::from_polys(&parse_poly(p, &v).unwrap(), &parse_poly(q, &v).unwrap()).unwrap()
    }

    #[test]
    fn oracle_examples() {
        let l = oracle_lines(&sys("x^2-1", "y^2-1"));
        assert_eq!(l.len(), 5);
        assert!(l.iter().all(|x| !x.coeffs.is_numeric()));
        let l = oracle_lines(&sys("1+2*x*y", "-x^2+y^2"));
        assert_eq!(l.len(), 4);
        assert!(l.iter().all(|x| x.coeffs.is_numeric() && !x.is_real()));
        assert!(oracle_lines(&sys("1", "-x^2")).is_empty());
    }

    #[test]
    fn cubic_directions() {
        // C₂ = −(x³ − 2y³)·… irreducible over Q
        let s = sys("x^2+y^2", "x*y-2*y^2+x^2");
        let c = cross_validate(&s);
        assert!(c.matched(), "{c:?}");
    }

    #[test]
    fn perturbation_rows() {
        let e = rq(1, 2);
        let _ = e;
        let r = perturbation_check(ConfigLabel::Config6(5), &BTreeMap::new(), &rq(1, 5)).unwrap();
        assert!(r.ok(), "{r:?}");
        assert_eq!(r.found.len(), 5);
        let r = perturbation_check(ConfigLabel::Config6(10), &BTreeMap::new(), &rq(1, 7)).unwrap();
        assert!(r.ok(), "{r:?}");
        let g = BTreeMap::from([("g".to_string(), rq(2, 1))]);
        let r = perturbation_check(ConfigLabel::Config5(13), &g, &rq(1, 5)).unwrap();
        assert!(r.ok(), "{r:?}");
        let r = perturbation_check(ConfigLabel::Config5(22), &BTreeMap::new(), &rq(1, 7)).unwrap();
        assert!(r.ok(), "{r:?}");
    }

    #[test]
    fn cross_validation_on_examples() {
        for (p, q) in [("x^2-1", "y^2-1"), ("1-x^2", "-2*x*y"), ("x", "y-x^2"), ("x^2+x+y", "y^2+3*x-1")] {
            let c = cross_validate(&sys(p, q));
            assert!(c.ok(), "{p}, {q}: {c:?}");
        }
    }
}
