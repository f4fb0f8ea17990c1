//! Affine comitants of a quadratic system and their metadata.

use std::cell::RefCell;
use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Signed};

use crate::polyring::mpoly::{MPoly, Monomial};
use crate::polyring::ops::{determinant, discriminant_binary, hessian, jacobian, transvectant};
use crate::polyring::rational::{ri, rq, sign, Rational};
use crate::polyring::upoly::UPoly;
use crate::system::{apply_affine_poly, substitute_xy, AffineTransform, PolySystem, QuadraticSystem};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ComitantError {
    #[error("unknown comitant '{0}'")]
    UnknownName(String),
    #[error("sign undefined for odd form")]
    OddForm,
    #[error("sign undefined for a form with parameters")]
    Symbolic,
}

macro_rules! names {
    ($($v:ident => $s:literal),* $(,)?) => {
        #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
        pub enum Name { $($v),* }

        impl Name {
            pub const ALL: &'static [Name] = &[$(Name::$v),*];

            pub fn as_str(self) -> &'static str {
                match self { $(Name::$v => $s),* }
            }
        }

        impl FromStr for Name {
            type Err = ComitantError;
            fn from_str(s: &str) -> Result<Self, Self::Err> {
                match s {
                    $($s => Ok(Name::$v),)*
                    _ => Err(ComitantError::UnknownName(s.to_string())),
                }
            }
        }
    };
}

names! {
    C0 => "C0", C1 => "C1", C2 => "C2", D1 => "D1", D2 => "D2",
    Eta => "eta", M => "M", K => "K", Mu => "mu", N => "N", Theta => "theta",
    H => "H", D => "D",
    B1 => "B1", B2 => "B2", B3 => "B3",
    H1 => "H1", H2 => "H2", H3 => "H3", H4 => "H4", H5 => "H5", H6 => "H6",
    N1 => "N1", N2 => "N2", N3 => "N3", N4 => "N4", N5 => "N5", N6 => "N6",
}

impl fmt::Display for Name {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Variety on which a comitant is also translation invariant.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Variety {
    Always,
    EtaH,
    EtaHB3,
    MN,
    MNN3,
    MThetaB3,
    /// Not translation invariant anywhere (C₀, C₁, D₂).
    Never,
}

impl Variety {
    pub fn as_str(self) -> &'static str {
        match self {
            Variety::Always => "always",
            Variety::EtaH => "V(eta,H)",
            Variety::EtaHB3 => "V(eta,H,B3)",
            Variety::MN => "V(M,N)",
            Variety::MNN3 => "V(M,N,N3)",
            Variety::MThetaB3 => "V(M,theta,B3)",
            Variety::Never => "none",
        }
    }

    pub fn generators(self) -> &'static [Name] {
        match self {
            Variety::Always | Variety::Never => &[],
            Variety::EtaH => &[Name::Eta, Name::H],
            Variety::EtaHB3 => &[Name::Eta, Name::H, Name::B3],
            Variety::MN => &[Name::M, Name::N],
            Variety::MNN3 => &[Name::M, Name::N, Name::N3],
            Variety::MThetaB3 => &[Name::M, Name::Theta, Name::B3],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Meta {
    pub deg_a: u32,
    pub deg_xy: u32,
    pub weight: i32,
    pub validity: Variety,
}

const fn meta(deg_a: u32, deg_xy: u32, weight: i32, validity: Variety) -> Meta {
    Meta {
        deg_a,
        deg_xy,
        weight,
        validity,
    }
}

impl Name {
    pub fn meta(self) -> Meta {
        use Name::*;
        use Variety::*;
        match self {
            C0 => meta(1, 1, -1, Never),
            C1 => meta(1, 2, -1, Never),
            C2 => meta(1, 3, -1, Always),
            D1 => meta(1, 0, 0, MN),
            D2 => meta(1, 1, 0, Never),
            Eta | Mu | Theta => meta(4, 0, 2, Always),
            H | K | M | N => meta(2, 2, 0, Always),
            D => meta(3, 3, -1, Always),
            B1 => meta(12, 0, 3, Always),
            B2 => meta(8, 4, 0, Always),
            B3 => meta(4, 4, -1, Always),
            H1 => meta(6, 0, 2, Always),
            H2 => meta(3, 2, 0, Always),
            H3 => meta(4, 2, 0, Always),
            H4 => meta(6, 0, 2, Always),
            H5 => meta(8, 0, 2, Always),
            H6 => meta(8, 6, 0, Always),
            N1 => meta(3, 4, -1, EtaH),
            N2 => meta(3, 1, 0, EtaHB3),
            N3 => meta(2, 3, -1, MN),
            N4 => meta(2, 2, -1, MNN3),
            N5 => meta(4, 2, 0, EtaHB3),
            N6 => meta(3, 3, -1, MThetaB3),
        }
    }

    /// Rows of the degree/weight table (everything except C₀, C₁, D₂).
    pub fn in_table(self) -> bool {
        !matches!(self, Name::C0 | Name::C1 | Name::D2)
    }

    /// Factor multiplying the raw formula.
    pub fn calibration(self) -> Rational {
        match self {
            Name::D => ri(-1),
            Name::Mu => ri(2),
            _ => ri(1),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComitantValue {
    pub name: Name,
    pub value: MPoly,
    pub meta: Meta,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SignVerdict {
    Positive,
    Negative,
    Zero,
    Indefinite,
}

impl SignVerdict {
    pub fn as_str(self) -> &'static str {
        match self {
            SignVerdict::Positive => ">0",
            SignVerdict::Negative => "<0",
            SignVerdict::Zero => "=0",
            SignVerdict::Indefinite => "indefinite",
        }
    }
}

/// Lazily evaluated comitants of one system.
pub struct Comitants {
    sys: PolySystem,
    cache: RefCell<HashMap<Name, MPoly>>,
}

/// Coefficient of x^i y^j as a polynomial in the parameters.
fn coeff_xy(f: &MPoly, i: u32, j: u32) -> MPoly {
    let n = f.vars().len();
    let mut out = MPoly::zero(f.vars());
    for (m, c) in f.terms() {
        if m.0[n - 2] == i && m.0[n - 1] == j {
            let mut e = m.0.clone();
            e[n - 2] = 0;
            e[n - 1] = 0;
            out = out + MPoly::monomial(f.vars(), Monomial(e), c.clone());
        }
    }
    out
}

fn disc_or_zero(f: &MPoly) -> MPoly {
    if f.is_zero() {
        f.clone()
    } else {
        discriminant_binary(f).expect("binary form of degree 2 or 3")
    }
}

impl Comitants {
    pub fn new(sys: &PolySystem) -> Self {
        Comitants {
            sys: sys.clone(),
            cache: RefCell::new(HashMap::new()),
        }
    }

    pub fn of(s: &QuadraticSystem) -> Self {
        Self::new(&s.to_poly_system())
    }

    pub fn system(&self) -> &PolySystem {
        &self.sys
    }

    pub fn value(&self, name: Name) -> ComitantValue {
        ComitantValue {
            name,
            value: self.get(name),
            meta: name.meta(),
        }
    }

    pub fn is_zero(&self, name: Name) -> bool {
        self.get(name).is_zero()
    }

    pub fn get(&self, name: Name) -> MPoly {
        if let Some(v) = self.cache.borrow().get(&name) {
            return v.clone();
        }
        let v = self.compute(name);
        self.cache.borrow_mut().insert(name, v.clone());
        v
    }

    fn tr(&self, a: Name, b: Name, k: u32) -> MPoly {
        transvectant(&self.get(a), &self.get(b), k)
    }

    /// (D, H) from Φ = αP + βQ at (α, β) = (−y, x), before calibration.
    fn dh_raw(&self) -> (MPoly, MPoly) {
        let v = self.sys.vars().clone();
        let n = v.len();
        let alpha = -MPoly::var_at(&v, n - 1);
        let beta = MPoly::var_at(&v, n - 2);
        let (p, q) = (&self.sys.p, &self.sys.q);
        let half = rq(1, 2);
        let comb = |i: u32, j: u32, s: &Rational| {
            (&(&alpha * &coeff_xy(p, i, j)) + &(&beta * &coeff_xy(q, i, j))).scale(s)
        };
        let one = Rational::one();
        let c11 = comb(2, 0, &one);
        let c12 = comb(1, 1, &half);
        let c22 = comb(0, 2, &one);
        let c13 = comb(1, 0, &half);
        let c23 = comb(0, 1, &half);
        let c33 = comb(0, 0, &one);
        let m = vec![
            vec![c11.clone(), c12.clone(), c13.clone()],
            vec![c12.clone(), c22.clone(), c23.clone()],
            vec![c13, c23, c33],
        ];
        let d = determinant(m, &v).scale(&ri(4));
        let h = (&(&c11 * &c22) - &(&c12 * &c12)).scale(&ri(4));
        (d, h)
    }

    fn compute(&self, name: Name) -> MPoly {
        use Name::*;
        let (ix, iy) = self.sys.xy();
        let x = MPoly::var_at(self.sys.vars(), ix);
        let y = MPoly::var_at(self.sys.vars(), iy);
        let raw = match name {
            C0 | C1 | C2 => {
                let i = match name {
                    C0 => 0,
                    C1 => 1,
                    _ => 2,
                };
                let (pi, qi) = self.sys.part(i);
                &(&y * &pi) - &(&x * &qi)
            }
            D1 | D2 => {
                let (pi, qi) = self.sys.part(if name == D1 { 1 } else { 2 });
                &pi.derivative(ix) + &qi.derivative(iy)
            }
            Eta => disc_or_zero(&self.get(C2)),
            M => hessian(&self.get(C2)).scale(&ri(2)),
            K => {
                let (p2, q2) = self.sys.part(2);
                jacobian(&p2, &q2)
            }
            Mu => disc_or_zero(&self.get(K)),
            N => &self.get(K) + &self.get(H),
            Theta => disc_or_zero(&self.get(N)),
            D => self.dh_raw().0,
            H => self.dh_raw().1,
            B3 => self.tr(C2, D, 1),
            B2 => {
                let b3 = self.get(B3);
                &transvectant(&b3, &b3, 2) - &(&b3 * &self.tr(C2, D, 3)).scale(&ri(6))
            }
            B1 => transvectant(&self.get(B2), &self.get(B3), 4)
                .scale(&-(Rational::one() / Rational::from_integer((512 * 6561).into()))),
            H1 => {
                let c22 = self.tr(C2, C2, 2);
                -transvectant(&transvectant(&c22, &self.get(C2), 1), &self.get(D), 3)
            }
            H2 => {
                let n = self.get(N);
                let arg = &self.get(H).scale(&ri(2)) - &n;
                &transvectant(&self.get(C1), &arg, 1) - &(&self.get(D1) * &n).scale(&ri(2))
            }
            H3 => self.tr(C2, D, 2),
            H4 => transvectant(&self.tr(C2, D, 2), &self.tr(C2, D2, 1), 2),
            H5 => {
                let a = transvectant(&self.tr(C2, C2, 2), &self.tr(D, D, 2), 2);
                let b = transvectant(&self.tr(C2, D, 2), &self.tr(D, D2, 1), 2);
                &a + &b.scale(&ri(8))
            }
            H6 => {
                let n = self.get(N);
                let h2 = self.get(H2);
                &(&(&n * &n) * &self.tr(C2, D, 2)).scale(&ri(16))
                    + &(&(&h2 * &h2) * &self.tr(C2, C2, 2))
            }
            N1 => {
                let c1 = self.get(C1);
                &(&c1 * &self.tr(C2, C2, 2)) - &(&self.get(C2) * &self.tr(C1, C2, 2)).scale(&ri(2))
            }
            N2 => &(&self.get(D1) * &self.tr(C1, C2, 2))
                - &transvectant(&self.tr(C2, C2, 2), &self.get(C0), 1),
            N3 => self.tr(C2, C1, 1),
            N4 => &self.tr(C2, C0, 1).scale(&ri(4)) - &(&self.get(C1) * &self.get(D1)).scale(&ri(3)),
            N5 => {
                let t = &self.tr(D2, C1, 1) + &(&self.get(D1) * &self.get(D2));
                &(&t * &t) - &(&self.tr(C2, C2, 2) * &self.tr(C0, D2, 1)).scale(&ri(4))
            }
            N6 => {
                let d1 = self.get(D1);
                let bracket = &(&self.tr(C0, D2, 1).scale(&ri(8))
                    - &self.tr(C1, C1, 2).scale(&ri(3)))
                    + &(&d1 * &d1).scale(&ri(2));
                &self.get(D).scale(&ri(8)) + &(&self.get(C2) * &bracket)
            }
        };
        raw.scale(&name.calibration())
    }
}

/// All comitants of a numeric system, by name.
pub fn named_comitant(s: &QuadraticSystem, name: &str) -> Result<ComitantValue, ComitantError> {
    let n: Name = name.parse()?;
    Ok(Comitants::of(s).value(n))
}

pub fn base_comitants(s: &QuadraticSystem) -> [MPoly; 5] {
    let c = Comitants::of(s);
    [Name::C0, Name::C1, Name::C2, Name::D1, Name::D2].map(|n| c.get(n))
}

pub fn dh_comitants(s: &QuadraticSystem) -> (MPoly, MPoly) {
    let c = Comitants::of(s);
    (c.get(Name::D), c.get(Name::H))
}

/// Sign of a form with rational coefficients in x, y.
pub fn form_sign(f: &MPoly) -> Result<SignVerdict, ComitantError> {
    let n = f.vars().len();
    let (ix, iy) = (n - 2, n - 1);
    if (0..n - 2).any(|i| f.involves(i)) {
        return Err(ComitantError::Symbolic);
    }
    if f.is_zero() {
        return Ok(SignVerdict::Zero);
    }
    let d = f.degree_in_set(&[ix, iy]);
    if d == 0 {
        let c = f.constant_value().unwrap();
        return Ok(if c.is_positive() {
            SignVerdict::Positive
        } else {
            SignVerdict::Negative
        });
    }
    if d % 2 == 1 || !f.is_homogeneous() {
        return Err(ComitantError::OddForm);
    }
    let mut e = vec![0u32; n];
    let mut coeff = |i: u32, j: u32| {
        e[ix] = i;
        e[iy] = j;
        f.coeff(&e)
    };
    if d == 2 {
        let (a, b, c) = (coeff(2, 0), coeff(1, 1), coeff(0, 2));
        let disc = &b * &b - ri(4) * &a * &c;
        if disc.is_positive() {
            return Ok(SignVerdict::Indefinite);
        }
        return Ok(match sign(&(a + c)) {
            1 => SignVerdict::Positive,
            -1 => SignVerdict::Negative,
            _ => SignVerdict::Zero,
        });
    }
    // f(t, 1) together with the power of y dividing f
    let g = UPoly::from_rationals((0..=d).map(|i| coeff(i, d - i)).collect());
    let gd = g.degree().unwrap_or(0) as u32;
    if (d - gd) % 2 == 1 {
        return Ok(SignVerdict::Indefinite);
    }
    for (h, m) in g.squarefree() {
        if m % 2 == 1 && h.count_real_roots() > 0 {
            return Ok(SignVerdict::Indefinite);
        }
    }
    Ok(if g.lc().is_positive() {
        SignVerdict::Positive
    } else {
        SignVerdict::Negative
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MetadataReport {
    pub name: Name,
    pub deg_a: bool,
    pub deg_xy: bool,
    pub weight: bool,
}

impl MetadataReport {
    pub fn passed(&self) -> bool {
        self.deg_a && self.deg_xy && self.weight
    }
}

/// Three fixed unimodular and non-unimodular linear maps.
pub fn default_maps() -> Vec<AffineTransform> {
    [
        [[ri(2), ri(1)], [ri(-1), ri(3)]],
        [[ri(0), ri(1)], [ri(1), ri(0)]],
        [[rq(1, 2), ri(-2)], [ri(3), ri(1)]],
    ]
    .into_iter()
    .map(|m| AffineTransform::linear(m).unwrap())
    .collect()
}

/// U(r_g a, g(x, y)) − det(g)^(−χ) U(a, x, y) for a linear map g.
pub fn weight_defect(sys: &PolySystem, name: Name, weight: i32, g: &AffineTransform) -> MPoly {
    let u = Comitants::new(sys).get(name);
    let image = apply_affine_poly(sys, g);
    let ug = Comitants::new(&image).get(name);
    let (gx, gy) = g.forward_polys(sys.vars());
    let lhs = substitute_xy(&ug, &gx, &gy);
    let det = g.det();
    let mut f = Rational::one();
    for _ in 0..weight.unsigned_abs() {
        f *= &det;
    }
    if weight > 0 {
        f = Rational::one() / f;
    }
    &lhs - &u.scale(&f)
}

/// Checks degree in a, degree in x, y and the weight law against `meta`.
pub fn metadata_check_with(
    sys: &PolySystem,
    name: Name,
    meta: &Meta,
    maps: &[AffineTransform],
) -> MetadataReport {
    let u = Comitants::new(sys).get(name);
    let t = ri(2);
    let scaled = PolySystem::new(sys.p.scale(&t), sys.q.scale(&t));
    let us = Comitants::new(&scaled).get(name);
    let mut tp = Rational::one();
    for _ in 0..meta.deg_a {
        tp *= &t;
    }
    let deg_a = us == u.scale(&tp);
    let n = sys.vars().len();
    let deg_xy = u.is_zero()
        || u.terms()
            .all(|(m, _)| m.0[n - 2] + m.0[n - 1] == meta.deg_xy);
    let weight = maps
        .iter()
        .all(|g| weight_defect(sys, name, meta.weight, g).is_zero());
    MetadataReport {
        name,
        deg_a,
        deg_xy,
        weight,
    }
}

pub fn metadata_check(s: &QuadraticSystem, name: Name) -> MetadataReport {
    metadata_check_with(&s.to_poly_system(), name, &name.meta(), &default_maps())
}

/// U(translated system) − U(system), as a polynomial in x0, y0, x, y.
pub fn translation_defect(sys: &PolySystem, name: Name) -> MPoly {
    let moved = sys.translate_symbolic();
    let u = Comitants::new(sys).get(name).with_vars(moved.vars());
    &Comitants::new(&moved).get(name) - &u
}

/// True when every generator of the variety vanishes.
pub fn on_variety(c: &Comitants, v: Variety) -> bool {
    v != Variety::Never && v.generators().iter().all(|&g| c.is_zero(g))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::mpoly::vars;
    use crate::polyring::parse::parse_poly;

    fn family(params: &[&str], p: &str, q: &str) -> PolySystem {
        let mut names = params.to_vec();
        names.extend(["x", "y"]);
        let v = vars(&names);
        PolySystem::new(parse_poly(p, &v).unwrap(), parse_poly(q, &v).unwrap())
    }

    fn check(sys: &PolySystem, name: Name, expected: &str) {
        let got = Comitants::new(sys).get(name);
        assert_eq!(got, parse_poly(expected, sys.vars()).unwrap(), "{name}");
    }

    #[test]
    fn base_examples() {
        let s = family(&[], "x^2-1", "y^2-1");
        check(&s, Name::C2, "x^2*y - x*y^2");
        check(&s, Name::D2, "2*x + 2*y");
        check(&s, Name::C0, "x - y");
        let s = family(&[], "2*x*y", "y^2-x^2");
        check(&s, Name::C2, "x^3 + x*y^2");
        let s = family(&[], "x^2", "x*y + y^2");
        assert!(Comitants::new(&s).get(Name::C1).is_zero());
    }

    #[test]
    fn family_values() {
        check(&family(&["l"], "2*x*y", "l - x^2 + y^2"), Name::H1, "9216*l");
        let s = family(&["k", "c"], "k + c*x - x^2", "-2*x*y");
        check(&s, Name::H2, "16*c*x^2");
        check(&s, Name::H3, "32*k*x^2");
        let s = family(&["k", "e"], "k + x^2", "e*x + 2*y");
        check(&s, Name::N1, "8*e*x^4");
        check(&s, Name::N2, "16*(k+1)*x");
        check(&family(&["k"], "k + x^2", "2*y"), Name::N5, "-64*k*x^2");
        check(
            &family(&["k", "c", "l", "f"], "k + c*x", "l + f*y - x^2"),
            Name::N3,
            "3*(c-f)*x^3",
        );
        check(
            &family(&["l", "f"], "-f^2 + x^2", "l + f*y - x^2 + x*y"),
            Name::N6,
            "8*(l+3*f^2)*x^3",
        );
        check(
            &family(&["k", "c", "d", "g", "l"], "k + c*x + d*y + g*x^2", "l + (g-1)*x*y + y^2"),
            Name::Mu,
            "32*g^2",
        );
    }

    #[test]
    fn parallel_lines_kill_h() {
        // x = ±1 are invariant for VI.7; the T-comitant H vanishes at the direction
        let s = family(&[], "x^2-1", "2*y");
        let h = Comitants::new(&s).get(Name::H);
        assert!(h.is_zero());
        let s = family(&[], "x^2+x*y", "x^2+x*y");
        assert!(Comitants::new(&s).get(Name::D).is_zero());
    }

    #[test]
    fn signs() {
        let v = vars(&["x", "y"]);
        let f = |s: &str| form_sign(&parse_poly(s, &v).unwrap()).unwrap();
        assert_eq!(f("32*x^2"), SignVerdict::Positive);
        assert_eq!(f("x*y"), SignVerdict::Indefinite);
        assert_eq!(f("0"), SignVerdict::Zero);
        assert_eq!(f("-3"), SignVerdict::Negative);
        assert_eq!(f("-(x^2+y^2)^2"), SignVerdict::Negative);
        assert_eq!(f("x^2*(x-y)^2"), SignVerdict::Positive);
        assert_eq!(f("x^3*y"), SignVerdict::Indefinite);
        assert_eq!(f("y^2*(x^2-2*y^2)"), SignVerdict::Indefinite);
        assert!(form_sign(&parse_poly("x^3", &v).unwrap()).is_err());
    }

    #[test]
    fn metadata_on_a_system() {
        let s = family(&[], "1 + 2*x - x*y + 3*y^2", "-2 + y + x^2 - 2*x*y");
        for &n in Name::ALL {
            let r = metadata_check_with(&s, n, &n.meta(), &default_maps());
            assert!(r.passed(), "{r:?}");
        }
        let mut bad = Name::C2.meta();
        bad.weight = 1;
        assert!(!metadata_check_with(&s, Name::C2, &bad, &default_maps()).passed());
    }
}
