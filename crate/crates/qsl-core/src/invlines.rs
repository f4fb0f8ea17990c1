//! Invariant lines from the E-polynomials, with multiplicities and divisors.

use std::fmt;

use num_complex::Complex64;
use num_traits::{One, Zero};

use crate::comitants::{Comitants, Name};
use crate::polyring::field::{Embed, Field};
use crate::polyring::lines::{factor_into_lines, line_is_real, normalize_line, LineTriple};
use crate::polyring::mpoly::{vars, MPoly, Monomial, Vars};
use crate::polyring::ops::{gcd, multiplicity, resultant, resultant_formal};
use crate::polyring::quadext::QuadExtScalar;
use crate::polyring::rational::{ri, to_f64, Rational};
use crate::polyring::upoly::UPoly;
use crate::system::{homogenize_xy, PolySystem, QuadraticSystem};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LinesError {
    #[error("E-polynomial degenerately zero")]
    ZeroE,
    #[error("C2 vanishes identically")]
    ZeroC2,
    #[error("no separating projection centre among the candidates")]
    NoCentre,
}

/// Line or point coordinates, exact when possible.
#[derive(Debug, Clone, PartialEq)]
pub enum Coeffs {
    Exact(LineTriple),
    Numeric([Complex64; 3]),
}

impl Coeffs {
    pub fn to_complex(&self) -> [Complex64; 3] {
        match self {
            Coeffs::Exact(t) => [t[0].to_complex(), t[1].to_complex(), t[2].to_complex()],
            Coeffs::Numeric(c) => *c,
        }
    }

    pub fn is_numeric(&self) -> bool {
        matches!(self, Coeffs::Numeric(_))
    }

    pub fn exact(&self) -> Option<&LineTriple> {
        match self {
            Coeffs::Exact(t) => Some(t),
            Coeffs::Numeric(_) => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    VerifiedSimple,
    GcdExponent,
    PerturbationConfirmed,
}

impl Provenance {
    pub fn as_str(self) -> &'static str {
        match self {
            Provenance::VerifiedSimple => "verified-simple",
            Provenance::GcdExponent => "gcd-exponent",
            Provenance::PerturbationConfirmed => "perturbation-confirmed",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct InvariantLine {
    /// (u, v, w) of uX + vY + wZ, first nonzero entry 1 when exact.
    pub coeffs: Coeffs,
    pub multiplicity: u32,
    /// (r, s, t) with u·p + v·q = (ux + vy + w)(rx + sy + t); affine lines only.
    pub cofactor: Option<LineTriple>,
    pub at_infinity: bool,
    pub provenance: Provenance,
}

impl InvariantLine {
    pub fn is_real(&self) -> bool {
        match &self.coeffs {
            Coeffs::Exact(t) => line_is_real(t),
            Coeffs::Numeric(c) => {
                let lead = c.iter().find(|z| z.norm() > 1e-12).copied().unwrap();
                c.iter().all(|z| (z / lead).im.abs() < 1e-9)
            }
        }
    }
}

impl fmt::Display for InvariantLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.at_infinity {
            return write!(f, "Z = 0 (m={})", self.multiplicity);
        }
        match &self.coeffs {
            Coeffs::Exact(t) => write!(
                f,
                "({})x + ({})y + ({}) = 0 (m={})",
                t[0], t[1], t[2], self.multiplicity
            ),
            Coeffs::Numeric(c) => write!(
                f,
                "~({:.6})x + ({:.6})y + ({:.6}) = 0 (m={})",
                c[0], c[1], c[2], self.multiplicity
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SingularPoint {
    pub line: usize,
    pub x: QuadExtScalar,
    pub y: QuadExtScalar,
    pub multiplicity: u32,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LineConfiguration {
    pub lines: Vec<InvariantLine>,
    pub m_il: u32,
    pub n_c: u32,
    pub n_r: u32,
    pub gcd_degree: u32,
    pub singular_annotations: Vec<SingularPoint>,
    pub warnings: Vec<String>,
}

impl LineConfiguration {
    pub fn affine(&self) -> impl Iterator<Item = &InvariantLine> {
        self.lines.iter().filter(|l| !l.at_infinity)
    }

    pub fn infinity_multiplicity(&self) -> u32 {
        self.lines
            .iter()
            .find(|l| l.at_infinity)
            .map(|l| l.multiplicity)
            .unwrap_or(1)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Divisor {
    pub points: Vec<(Coeffs, u32)>,
}

impl Divisor {
    pub fn degree(&self) -> u32 {
        self.points.iter().map(|(_, m)| m).sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DczType {
    ThreeReal,
    OneRealTwoComplex,
    DoublePlusSimple,
    Triple,
    Undefined,
}

impl DczType {
    pub fn as_str(self) -> &'static str {
        match self {
            DczType::ThreeReal => "w1+w2+w3",
            DczType::OneRealTwoComplex => "w1c+w2c+w3",
            DczType::DoublePlusSimple => "2w1+w2",
            DczType::Triple => "3w",
            DczType::Undefined => "undefined",
        }
    }
}

/// Variables params ++ [x, y] of `sys` with x0, y0 renamed back to x, y.
fn untranslate(f: &MPoly, target: &Vars) -> MPoly {
    // f lives over params ++ [x0, y0, x, y] and no longer involves x, y
    let n = f.vars().len();
    let mut out = MPoly::zero(target);
    for (m, c) in f.terms() {
        assert!(m.0[n - 2] == 0 && m.0[n - 1] == 0, "Γ still involves x', y'");
        let mut e = m.0[..n - 4].to_vec();
        e.push(m.0[n - 4]);
        e.push(m.0[n - 3]);
        out = out + MPoly::monomial(target, Monomial(e), c.clone());
    }
    out
}

/// (Ẽ₁, Ẽ₂) over the variables of `sys`.
pub fn e_polynomials_poly(sys: &PolySystem) -> (MPoly, MPoly) {
    let moved = sys.translate_symbolic();
    let c = Comitants::new(&moved);
    let c0 = c.get(Name::C0);
    let (ix, iy) = moved.xy();
    let yv = MPoly::var_at(moved.vars(), iy);
    let mut out = Vec::new();
    for (i, name) in [(1usize, Name::C1), (2, Name::C2)] {
        let ci = c.get(name);
        let r = resultant_formal(&ci, &c0, ix, i + 1, 1);
        let g = r
            .exact_div(&yv.pow(i as u32 + 1))
            .expect("division by y'^(i+1) must be exact");
        out.push(untranslate(&g, sys.vars()));
    }
    let e2 = out.pop().unwrap();
    let e1 = out.pop().unwrap();
    (e1, e2)
}

pub fn e_polynomials(s: &QuadraticSystem) -> (MPoly, MPoly) {
    e_polynomials_poly(&s.to_poly_system())
}

fn projective_vars(sys: &PolySystem) -> Vars {
    let n = sys.vars().len();
    let mut names: Vec<&str> = sys.vars()[..n - 2].iter().map(|s| s.as_str()).collect();
    names.extend(["X", "Y", "Z"]);
    vars(&names)
}

/// (E₁, E₂) = (Z⁵Ẽ₁, Z⁶Ẽ₂)(X/Z, Y/Z).
pub fn homogeneous_e(sys: &PolySystem) -> (MPoly, MPoly) {
    let (e1, e2) = e_polynomials_poly(sys);
    let v = projective_vars(sys);
    (homogenize_xy(&e1, &v, 5), homogenize_xy(&e2, &v, 6))
}

pub fn gcd_h_poly(sys: &PolySystem) -> Result<MPoly, LinesError> {
    let (e1, e2) = homogeneous_e(sys);
    if e1.is_zero() || e2.is_zero() {
        return Err(LinesError::ZeroE);
    }
    Ok(gcd(&e1, &e2))
}

pub fn gcd_h(s: &QuadraticSystem) -> Result<MPoly, LinesError> {
    gcd_h_poly(&s.to_poly_system())
}

fn qe(q: &Rational) -> QuadExtScalar {
    QuadExtScalar::rational(q.clone())
}

/// Solves u·p + v·q = (ux + vy + w)(rx + sy + t) for the cofactor.
pub fn cofactor(s: &QuadraticSystem, line: &LineTriple) -> Option<LineTriple> {
    let [u, v, w] = line;
    let a = &s.a;
    let two = ri(2);
    // coefficients of F = u p + v q: f00, f10, f01, f20, f11, f02
    let f = |i: usize, k: &Rational| u.mul(&qe(&(&a[i] * k))).add(&v.mul(&qe(&(&a[i + 6] * k))));
    let one = Rational::one();
    let (f00, f10, f01, f20, f11, f02) = (
        f(0, &one),
        f(1, &one),
        f(2, &one),
        f(3, &one),
        f(4, &two),
        f(5, &one),
    );
    let (r, s_) = if !u.is_zero_elem() {
        let r = f20.div(u);
        let s_ = f11.sub(&v.mul(&r)).div(u);
        (r, s_)
    } else if !v.is_zero_elem() {
        let s_ = f02.div(v);
        let r = f11.sub(&u.mul(&s_)).div(v);
        (r, s_)
    } else {
        return None;
    };
    // F1 − w(rx + sy) = t(ux + vy)
    let l10 = f10.sub(&w.mul(&r));
    let l01 = f01.sub(&w.mul(&s_));
    let t = if !u.is_zero_elem() {
        l10.div(u)
    } else {
        l01.div(v)
    };
    let ok = f20 == u.mul(&r)
        && f11 == u.mul(&s_).add(&v.mul(&r))
        && f02 == v.mul(&s_)
        && l10 == u.mul(&t)
        && l01 == v.mul(&t)
        && f00 == w.mul(&t);
    ok.then(|| [r, s_, t])
}

/// Lines from gcd(E₁, E₂), each checked against the cofactor identity.
pub fn extract_lines(s: &QuadraticSystem) -> Result<LineConfiguration, LinesError> {
    let c = Comitants::of(s);
    if c.is_zero(Name::C2) {
        return Err(LinesError::ZeroC2);
    }
    let h = gcd_h(s)?;
    let gcd_degree = h.total_degree();
    let fact = factor_into_lines(&h);
    let mut warnings = Vec::new();
    let mut lines = Vec::new();
    let mut z_exp = 0;
    for lf in &fact.lines {
        let l = &lf.line;
        if l[0].is_zero_elem() && l[1].is_zero_elem() {
            z_exp = lf.exponent;
            continue;
        }
        match cofactor(s, l) {
            Some(k) => lines.push(InvariantLine {
                coeffs: Coeffs::Exact(l.clone()),
                multiplicity: lf.exponent,
                cofactor: Some(k),
                at_infinity: false,
                provenance: if lf.exponent == 1 {
                    Provenance::VerifiedSimple
                } else {
                    Provenance::GcdExponent
                },
            }),
            None => warnings.push(format!(
                "gcd factor ({})X + ({})Y + ({})Z fails the cofactor identity; dropped",
                l[0], l[1], l[2]
            )),
        }
    }
    if !fact.residue.is_constant() {
        let found = numeric_lines(&fact.residue);
        let covered: u32 = found.iter().map(|(_, m)| m).sum();
        for (l, m) in found {
            if numeric_cofactor_ok(s, &l) {
                lines.push(InvariantLine {
                    coeffs: Coeffs::Numeric(l),
                    multiplicity: m,
                    cofactor: None,
                    at_infinity: false,
                    provenance: if m == 1 {
                        Provenance::VerifiedSimple
                    } else {
                        Provenance::GcdExponent
                    },
                });
            } else {
                warnings.push(format!(
                    "numeric gcd factor ({:.6})x + ({:.6})y + ({:.6}) fails the cofactor identity; dropped",
                    l[0], l[1], l[2]
                ));
            }
        }
        if covered < fact.residue.total_degree() {
            warnings.push(format!(
                "gcd has a non-line residue of degree {}: {}",
                fact.residue.total_degree(),
                fact.residue
            ));
        }
    }
    let z = |q: i64| QuadExtScalar::from_int(q);
    lines.push(InvariantLine {
        coeffs: Coeffs::Exact([z(0), z(0), z(1)]),
        multiplicity: 1 + z_exp,
        cofactor: None,
        at_infinity: true,
        provenance: if z_exp == 0 {
            Provenance::VerifiedSimple
        } else {
            Provenance::GcdExponent
        },
    });
    let m_il = lines.iter().map(|l| l.multiplicity).sum();
    let n_c = lines.len() as u32;
    let n_r = lines.iter().filter(|l| l.is_real()).count() as u32;
    let mut cfg = LineConfiguration {
        lines,
        m_il,
        n_c,
        n_r,
        gcd_degree,
        singular_annotations: Vec::new(),
        warnings,
    };
    cfg.singular_annotations = singular_points_on_lines(s, &cfg);
    Ok(cfg)
}

fn eval_c(f: &MPoly, pt: &[Complex64]) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for (m, c) in f.terms() {
        let mut t = Complex64::new(to_f64(c), 0.0);
        for (e, z) in m.0.iter().zip(pt) {
            t *= z.powu(*e);
        }
        acc += t;
    }
    acc
}

fn coeff_scale(f: &MPoly) -> f64 {
    f.terms().map(|(_, c)| to_f64(c).abs()).fold(0.0, f64::max)
}

fn shear(f: &MPoly, s: &Rational) -> MPoly {
    let v = f.vars().clone();
    let nx = &MPoly::var_at(&v, 0) + &MPoly::var_at(&v, 1).scale(s);
    f.substitute(0, &nx)
}

/// Splits a ternary form with no rational or quadratic line factors into
/// complex lines, when it is a product of lines at all.
pub fn numeric_lines(r: &MPoly) -> Vec<([Complex64; 3], u32)> {
    let d = r.total_degree();
    let mut sigma = Rational::zero();
    let mut g = r.clone();
    while g.coeff(&[d, 0, 0]).is_zero() {
        sigma += Rational::one();
        g = shear(r, &sigma);
    }
    let dx = g.derivative(0);
    let sq = g.exact_div(&gcd(&g, &dx)).unwrap();
    let e = sq.total_degree();
    // sq(t, 1, 0) and sq(t, 0, 1)
    let uni = |drop: usize| {
        let mut c = vec![Rational::zero(); e as usize + 1];
        for (m, k) in sq.terms() {
            if m.0[drop] == 0 {
                c[m.0[0] as usize] += k.clone();
            }
        }
        UPoly::from_rationals(c)
    };
    let dirs = uni(2).complex_roots();
    let mut offs = uni(1).complex_roots();
    let one = Complex64::new(1.0, 0.0);
    let scale = coeff_scale(&sq).max(1.0);
    let probes = [(one, one), (Complex64::new(2.0, 0.0), one), (Complex64::new(-1.0, 0.0), Complex64::new(3.0, 0.0))];
    let mut out = Vec::new();
    for a in dirs {
        let mut best: Option<(usize, f64)> = None;
        for (j, b) in offs.iter().enumerate() {
            let err: f64 = probes
                .iter()
                .map(|(y, z)| eval_c(&sq, &[a * y + b * z, *y, *z]).norm())
                .sum();
            if best.map(|(_, e)| err < e).unwrap_or(true) {
                best = Some((j, err));
            }
        }
        let Some((j, err)) = best else { break };
        if err > 1e-6 * scale {
            continue;
        }
        let b = offs.remove(j);
        // X' − aY − bZ in sheared coordinates
        let sig = Complex64::new(to_f64(&sigma), 0.0);
        let line = [one, -(a + sig), -b];
        // multiplicity in g from the order of vanishing across the line
        let pt = [a * 2.0 + b, Complex64::new(2.0, 0.0), one];
        let mut k = 0;
        let mut h = g.clone();
        while k < d && eval_c(&h, &pt).norm() <= 1e-6 * coeff_scale(&h).max(1.0) {
            h = h.derivative(0);
            k += 1;
        }
        out.push((line, k.max(1)));
    }
    out
}

/// u·p + v·q vanishes along the line, numerically.
fn numeric_cofactor_ok(s: &QuadraticSystem, l: &[Complex64; 3]) -> bool {
    let ps = s.to_poly_system();
    let (p, q) = (ps.p.clone(), ps.q.clone());
    let scale = s.a.iter().map(|c| to_f64(c).abs()).fold(1.0, f64::max);
    let (u, v, w) = (l[0], l[1], l[2]);
    (0..3).all(|i| {
        let t = Complex64::new(i as f64 - 1.0, 0.5);
        // a point on u x + v y + w = 0
        let (x, y) = if u.norm() > v.norm() {
            ((-w - v * t) / u, t)
        } else {
            (t, (-w - u * t) / v)
        };
        let f = u * eval_c(&p, &[x, y]) + v * eval_c(&q, &[x, y]);
        f.norm() <= 1e-7 * scale * (1.0 + x.norm() + y.norm()).powi(2)
    })
}

/// Points [x : y : 0] of C₂ = 0 and the type read off the comitants.
pub fn divisor_dcz(s: &QuadraticSystem) -> (Divisor, DczType) {
    let c = Comitants::of(s);
    let c2 = c.get(Name::C2);
    if c2.is_zero() {
        return (Divisor { points: vec![] }, DczType::Undefined);
    }
    let eta = c.get(Name::Eta).constant_value().unwrap();
    let tag = if eta > Rational::zero() {
        DczType::ThreeReal
    } else if eta < Rational::zero() {
        DczType::OneRealTwoComplex
    } else if !c.is_zero(Name::M) {
        DczType::DoublePlusSimple
    } else {
        DczType::Triple
    };
    (binary_form_points(&c2), tag)
}

/// Zeros [x : y : 0] of a binary form in x, y with multiplicities.
pub fn binary_form_points(f: &MPoly) -> Divisor {
    let v = vars(&["X", "Y", "Z"]);
    let h = f.rename(&vars(&["X", "Y"])).with_vars(&v);
    let fact = factor_into_lines(&h);
    let mut points = Vec::new();
    for lf in &fact.lines {
        let [u, w, _] = &lf.line;
        // uX + wY vanishes at [−w : u : 0]
        let p = normalize_line(&[w.neg(), u.clone(), u.zero_like()]);
        points.push((Coeffs::Exact(p), lf.exponent));
    }
    if !fact.residue.is_constant() {
        // irreducible cubic: roots of the dehomogenization, numerically
        let r = &fact.residue;
        let d = r.total_degree();
        let g = UPoly::from_rationals((0..=d).map(|i| r.coeff(&[i, d - i, 0])).collect());
        for t in g.complex_roots() {
            points.push((
                Coeffs::Numeric([t, Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)]),
                1,
            ));
        }
    }
    Divisor { points }
}

/// f(T(X', Y', Z')) for X = X' + ox·Y', Y = oy·Y' + Z', Z = Y'.
fn centre_change(f: &MPoly, ox: &Rational, oy: &Rational) -> MPoly {
    let v = f.vars().clone();
    let x = MPoly::var_at(&v, 0);
    let y = MPoly::var_at(&v, 1);
    let z = MPoly::var_at(&v, 2);
    let nx = &x + &y.scale(ox);
    let ny = &y.scale(oy) + &z;
    let nz = y.clone();
    let mut out = MPoly::zero(&v);
    for (m, c) in f.terms() {
        let t = &(&nx.pow(m.0[0]) * &ny.pow(m.0[1])) * &nz.pow(m.0[2]);
        out = out + t.scale(c);
    }
    out
}

/// I_w(P, Q) at the common points of P = Q = 0 on Z = 0.
pub fn infinite_intersection_numbers(s: &QuadraticSystem) -> Result<Divisor, LinesError> {
    let ps = s.to_poly_system();
    let (pp, qq) = ps.homogenize();
    let (p2, q2) = ps.part(2);
    let c = gcd(&p2, &q2);
    if c.total_degree() == 0 {
        return Ok(Divisor { points: vec![] });
    }
    let v = pp.vars().clone();
    let base = binary_form_points(&c);
    // c(X', Z') for each irreducible factor, rebuilt from the points
    let mut factors: Vec<(MPoly, Vec<Coeffs>)> = Vec::new();
    for (pt, _) in &base.points {
        let t = pt.exact().expect("common directions are at most quadratic");
        let (a, b) = (&t[0], &t[1]);
        // the factor b·X' − a·Z' vanishes at (X', Z') = (a, b)
        if a.is_rational() && b.is_rational() {
            let f = &MPoly::var_at(&v, 0).scale(&b.as_rational().unwrap())
                - &MPoly::var_at(&v, 2).scale(&a.as_rational().unwrap());
            factors.push((f, vec![pt.clone()]));
        } else if let Some(entry) = factors.iter_mut().find(|(_, pts)| {
            pts.len() == 1
                && pts[0]
                    .exact()
                    .map(|u| u[0] == a.conj() && u[1] == b.conj())
                    .unwrap_or(false)
        }) {
            entry.1.push(pt.clone());
        } else {
            // (bX' − aZ')(b̄X' − āZ') with rational coefficients
            let aa = a.mul(&a.conj()).as_rational().unwrap();
            let bb = b.mul(&b.conj()).as_rational().unwrap();
            let ab = a.mul(&b.conj()).add(&b.mul(&a.conj())).as_rational().unwrap();
            let f = MPoly::from_terms(
                &v,
                [(vec![2, 0, 0], bb), (vec![1, 0, 1], -ab), (vec![0, 0, 2], aa)],
            );
            factors.push((f, vec![pt.clone()]));
        }
    }
    let mut best: Option<Vec<u32>> = None;
    let mut tried = 0;
    for k in 1..=40i64 {
        let ox = ri(k);
        let oy = ri(k * k);
        let at = [ox.clone(), oy.clone(), Rational::one()];
        if pp.eval(&at).is_zero() || qq.eval(&at).is_zero() {
            continue;
        }
        tried += 1;
        let r = resultant(&centre_change(&pp, &ox, &oy), &centre_change(&qq, &ox, &oy), 1)
            .expect("centre off both curves keeps degree 2 in Y'");
        let ks: Vec<u32> = factors.iter().map(|(f, _)| multiplicity(&r, f).0).collect();
        best = Some(match best {
            None => ks,
            Some(b) => b.iter().zip(&ks).map(|(a, b)| (*a).min(*b)).collect(),
        });
        if tried == 10 {
            break;
        }
    }
    let best = best.ok_or(LinesError::NoCentre)?;
    let mut points = Vec::new();
    for ((_, pts), k) in factors.iter().zip(best) {
        for p in pts {
            points.push((p.clone(), k));
        }
    }
    Ok(Divisor { points })
}

/// Finite singular points on each real exact affine line.
pub fn singular_points_on_lines(s: &QuadraticSystem, cfg: &LineConfiguration) -> Vec<SingularPoint> {
    let mut out = Vec::new();
    for (idx, l) in cfg.lines.iter().enumerate() {
        if l.at_infinity || !l.is_real() {
            continue;
        }
        let Some(t) = l.coeffs.exact() else { continue };
        let t = normalize_line(t);
        let [u, v, w] = &t;
        let zero = u.zero_like();
        let one = u.one_like();
        // point on the line and a direction
        let (px, py) = if !u.is_zero_elem() {
            (w.neg().div(u), zero.clone())
        } else {
            (zero.clone(), w.neg().div(v))
        };
        let (dx, dy) = direction(u, v);
        let restrict = |off: usize| {
            let a = &s.a[off..off + 6];
            let two = ri(2);
            let lin = |c0: &QuadExtScalar, c1: &QuadExtScalar| UPoly::new(vec![c0.clone(), c1.clone()], zero.clone());
            let xt = lin(&px, &dx);
            let yt = lin(&py, &dy);
            let k = |q: &Rational| UPoly::constant(qe(q).add(&zero));
            let mut acc = k(&a[0]);
            acc = acc.add(&xt.mul(&k(&a[1])));
            acc = acc.add(&yt.mul(&k(&a[2])));
            acc = acc.add(&xt.mul(&xt).mul(&k(&a[3])));
            acc = acc.add(&xt.mul(&yt).mul(&k(&(&a[4] * &two))));
            acc.add(&yt.mul(&yt).mul(&k(&a[5])))
        };
        let g = restrict(0).gcd(&restrict(6));
        if g.degree().unwrap_or(0) == 0 {
            continue;
        }
        for (f, m) in g.squarefree() {
            let roots = f.small_roots(|d| d.sqrt_in_field()).unwrap_or_default();
            for r in roots {
                let x = px.add(&dx.mul(&r));
                let y = py.add(&dy.mul(&r));
                if x.is_real() && y.is_real() {
                    out.push(SingularPoint {
                        line: idx,
                        x,
                        y,
                        multiplicity: m,
                    });
                }
            }
        }
        let _ = &one;
    }
    out
}

/// Direction (−v, u) scaled to coprime integers with the first nonzero entry positive
/// when rational, else with the first nonzero entry 1.
fn direction(u: &QuadExtScalar, v: &QuadExtScalar) -> (QuadExtScalar, QuadExtScalar) {
    let (dx, dy) = (v.neg(), u.clone());
    if let (Some(a), Some(b)) = (dx.as_rational(), dy.as_rational()) {
        let l = crate::polyring::rational::lcm_denominators([&a, &b].into_iter());
        let lq = Rational::from_integer(l);
        let (ia, ib) = ((&a * &lq).to_integer(), (&b * &lq).to_integer());
        let g = num_integer::Integer::gcd(&ia, &ib);
        let mut s = Rational::from_integer(g);
        let first = if !ia.is_zero() { &ia } else { &ib };
        if first < &num_bigint::BigInt::zero() {
            s = -s;
        }
        return (qe(&(&a * &lq / &s)), qe(&(&b * &lq / &s)));
    }
    let lead = if !dx.is_zero_elem() { dx.clone() } else { dy.clone() };
    (dx.div(&lead), dy.div(&lead))
}

/// Largest number of invariant lines (with multiplicity) through one real
/// singular point on them; a diagram-support quantity.
pub fn max_point_multiplicity(cfg: &LineConfiguration) -> u32 {
    let mut best = 0;
    for p in &cfg.singular_annotations {
        let mut m = 0;
        for l in cfg.affine() {
            if let Some(t) = l.coeffs.exact() {
                if t[0].mul(&p.x).add(&t[1].mul(&p.y)).add(&t[2]).is_zero_elem() {
                    m += l.multiplicity;
                }
            }
        }
        best = best.max(m);
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::parse::parse_poly;
    use crate::system::xy_vars;

    fn sys(p: &str, q: &str) -> QuadraticSystem {
        let v = xy_vars();
        QuadraticSystem::from_polys(&parse_poly(p, &v).unwrap(), &parse_poly(q, &v).unwrap()).unwrap()
    }

    fn gcd_str(p: &str, q: &str) -> String {
        let h = gcd_h(&sys(p, q)).unwrap();
        h.monic().to_string()
    }

    fn expect(p: &str, q: &str, h: &str) {
        let v = xyz_vars3();
        assert_eq!(gcd_str(p, q), parse_poly(h, &v).unwrap().monic().to_string(), "{p}, {q}");
    }

    fn xyz_vars3() -> Vars {
        crate::system::xyz_vars()
    }

    #[test]
    fn known_gcds() {
        expect("x^2-1", "2*y", "Y*Z*(X-Z)^2*(X+Z)");
        expect("x^2", "1", "X^3*Z^2");
        expect("x", "y-x^2", "X^3*Z^2");
        expect("1-x^2", "-2*x*y", "Y*(X-Z)^2*(X+Z)^2");
        expect("x^2-1", "y^2-1", "(X-Y)*(X-Z)*(X+Z)*(Y-Z)*(Y+Z)");
        expect("x+1", "y-x^2", "Z^2*(X+Z)^2");
        expect("1", "-x^2", "Z^4");
    }

    #[test]
    fn configurations_reach_six() {
        for (p, q, n_c) in [
            ("x^2-1", "2*y", 4),
            ("x^2", "1", 2),
            ("x^2-1", "y^2-1", 6),
            ("x^2+1", "y^2+1", 6),
            ("2*x*y", "y^2-x^2-1", 6),
        ] {
            let c = extract_lines(&sys(p, q)).unwrap();
            assert!(c.warnings.is_empty(), "{:?}", c.warnings);
            assert_eq!(c.m_il, 6, "{p}, {q}");
            assert_eq!(c.n_c, n_c, "{p}, {q}");
        }
        let c = extract_lines(&sys("x^2+1", "y^2+1")).unwrap();
        assert_eq!(c.n_r, 2);
        assert!(c.affine().all(|l| l.cofactor.is_some()));
    }

    #[test]
    fn cofactor_identity() {
        let s = sys("x^2-1", "2*y");
        let q = |n| QuadExtScalar::from_int(n);
        let k = cofactor(&s, &[q(1), q(0), q(-1)]).unwrap();
        assert_eq!(k, [q(1), q(0), q(1)]);
        assert!(cofactor(&s, &[q(1), q(1), q(0)]).is_none());
    }

    #[test]
    fn dcz_and_intersections() {
        let (d, t) = divisor_dcz(&sys("x^2-1", "y^2-1"));
        assert_eq!(t, DczType::ThreeReal);
        assert_eq!(d.degree(), 3);
        let (_, t) = divisor_dcz(&sys("x", "y-x^2"));
        assert_eq!(t, DczType::Triple);
        let i = infinite_intersection_numbers(&sys("x^2-1", "2*y")).unwrap();
        assert_eq!(i.points.len(), 1);
        assert_eq!(i.points[0].1, 2);
        let i = infinite_intersection_numbers(&sys("x^2-1", "y^2-1")).unwrap();
        assert!(i.points.is_empty());
    }

    #[test]
    fn singular_points() {
        let c = extract_lines(&sys("x^2-1", "y^2-1")).unwrap();
        // four real saddles/nodes, each on two or three lines
        assert!(c.singular_annotations.len() >= 4);
        assert_eq!(max_point_multiplicity(&c), 3);
    }
}
