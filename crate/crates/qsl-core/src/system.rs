//! Quadratic systems, the affine action on them and their projective forms.

use std::fmt;

use num_traits::{One, Zero};

use crate::polyring::mpoly::{vars, MPoly, Monomial, Vars};
use crate::polyring::ops::gcd;
use crate::polyring::rational::{fmt_rational, Rational};

/// Coefficient order a00,a10,a01,a20,a11,a02,b00,b10,b01,b20,b11,b02.
pub const COEFF_NAMES: [&str; 12] = [
    "a00", "a10", "a01", "a20", "a11", "a02", "b00", "b10", "b01", "b20", "b11", "b02",
];

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SystemError {
    #[error("degree exceeds 2")]
    DegreeTooHigh,
    #[error("polynomial involves variables other than x, y")]
    ExtraVariables,
    #[error("singular linear part (det M = 0)")]
    SingularTransform,
    #[error("time scale must be nonzero")]
    ZeroTimescale,
    #[error("polynomials of unequal degree {0} and {1}")]
    UnequalDegrees(u32, u32),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Validity {
    Ok,
    Degenerate,
    NotQuadratic,
}

pub fn xy_vars() -> Vars {
    vars(&["x", "y"])
}

pub fn xyz_vars() -> Vars {
    vars(&["X", "Y", "Z"])
}

/// ẋ = p(x,y), ẏ = q(x,y) with rational coefficients, p₂ = a20x² + 2a11xy + a02y².
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct QuadraticSystem {
    pub a: [Rational; 12],
}

impl QuadraticSystem {
    pub fn from_coeffs(a: [Rational; 12]) -> Self {
        QuadraticSystem { a }
    }

    pub fn from_ints(a: [i64; 12]) -> Self {
        QuadraticSystem {
            a: a.map(|n| Rational::from_integer(n.into())),
        }
    }

    /// Reads p and q given as polynomials in x, y (in any variable order).
    pub fn from_polys(p: &MPoly, q: &MPoly) -> Result<Self, SystemError> {
        let mut a: [Rational; 12] = std::array::from_fn(|_| Rational::zero());
        for (k, f) in [p, q].into_iter().enumerate() {
            for (m, c) in f.terms() {
                let mut ex = 0;
                let mut ey = 0;
                for (i, &e) in m.0.iter().enumerate() {
                    if e == 0 {
                        continue;
                    }
                    match f.vars()[i].as_str() {
                        "x" => ex = e,
                        "y" => ey = e,
                        _ => return Err(SystemError::ExtraVariables),
                    }
                }
                if ex + ey > 2 {
                    return Err(SystemError::DegreeTooHigh);
                }
                let (slot, scale) = match (ex, ey) {
                    (0, 0) => (0, 1),
                    (1, 0) => (1, 1),
                    (0, 1) => (2, 1),
                    (2, 0) => (3, 1),
                    (1, 1) => (4, 2),
                    _ => (5, 1),
                };
                a[6 * k + slot] = c / Rational::from_integer(scale.into());
            }
        }
        Ok(QuadraticSystem { a })
    }

    fn half_poly(&self, off: usize, v: &Vars) -> MPoly {
        let a = &self.a[off..off + 6];
        let two = Rational::from_integer(2.into());
        MPoly::from_terms(
            v,
            [
                (vec![0, 0], a[0].clone()),
                (vec![1, 0], a[1].clone()),
                (vec![0, 1], a[2].clone()),
                (vec![2, 0], a[3].clone()),
                (vec![1, 1], &a[4] * &two),
                (vec![0, 2], a[5].clone()),
            ],
        )
    }

    pub fn p(&self) -> MPoly {
        self.half_poly(0, &xy_vars())
    }

    pub fn q(&self) -> MPoly {
        self.half_poly(6, &xy_vars())
    }

    pub fn to_poly_system(&self) -> PolySystem {
        PolySystem::new(self.p(), self.q())
    }

    pub fn validate(&self) -> Validity {
        let p = self.p();
        let q = self.q();
        if p.total_degree().max(q.total_degree()) < 2 {
            return Validity::NotQuadratic;
        }
        if gcd(&p, &q).total_degree() >= 1 {
            return Validity::Degenerate;
        }
        Validity::Ok
    }

    pub fn scaled(&self, t: &Rational) -> Self {
        QuadraticSystem {
            a: self.a.clone().map(|c| c * t),
        }
    }
}

impl fmt::Display for QuadraticSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x' = {}, y' = {}", self.p(), self.q())
    }
}

/// ẋ = p, ẏ = q over Q[params][x, y]; the variable list ends with x, y.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PolySystem {
    pub p: MPoly,
    pub q: MPoly,
}

impl PolySystem {
    pub fn new(p: MPoly, q: MPoly) -> Self {
        assert_eq!(p.vars(), q.vars(), "p and q must share variables");
        let n = p.vars().len();
        assert!(
            n >= 2 && p.vars()[n - 2] == "x" && p.vars()[n - 1] == "y",
            "variables must end with x, y"
        );
        PolySystem { p, q }
    }

    pub fn vars(&self) -> &Vars {
        self.p.vars()
    }

    pub fn xy(&self) -> (usize, usize) {
        let n = self.vars().len();
        (n - 2, n - 1)
    }

    /// Homogeneous parts (pᵢ, qᵢ) of degree i in x, y.
    pub fn part(&self, i: u32) -> (MPoly, MPoly) {
        let (ix, iy) = self.xy();
        (
            self.p.part_of_degree(&[ix, iy], i),
            self.q.part_of_degree(&[ix, iy], i),
        )
    }

    pub fn specialize(&self, name: &str, v: &Rational) -> PolySystem {
        let i = self.p.var_index(name).expect("unknown parameter");
        PolySystem {
            p: self.p.eval_var(i, v),
            q: self.q.eval_var(i, v),
        }
    }

    /// Drops parameters that no longer occur.
    pub fn to_quadratic(&self) -> Option<QuadraticSystem> {
        let (ix, iy) = self.xy();
        for f in [&self.p, &self.q] {
            for i in 0..self.vars().len() {
                if i != ix && i != iy && f.involves(i) {
                    return None;
                }
            }
        }
        let v = xy_vars();
        QuadraticSystem::from_polys(&self.p.with_vars(&v), &self.q.with_vars(&v)).ok()
    }

    /// p(x + x0, y + y0), q(x + x0, y + y0) with x0, y0 appended to the parameters.
    pub fn translate_symbolic(&self) -> PolySystem {
        let n = self.vars().len();
        let mut names: Vec<&str> = self.vars()[..n - 2].iter().map(|s| s.as_str()).collect();
        names.extend(["x0", "y0", "x", "y"]);
        let v = vars(&names);
        let x = MPoly::var(&v, "x");
        let y = MPoly::var(&v, "y");
        let gx = &x + &MPoly::var(&v, "x0");
        let gy = &y + &MPoly::var(&v, "y0");
        let p = substitute_xy(&self.p.with_vars(&v), &gx, &gy);
        let q = substitute_xy(&self.q.with_vars(&v), &gx, &gy);
        PolySystem::new(p, q)
    }

    /// (P, Q) = Z²(p, q)(X/Z, Y/Z) over params ++ [X, Y, Z].
    pub fn homogenize(&self) -> (MPoly, MPoly) {
        let n = self.vars().len();
        let mut names: Vec<&str> = self.vars()[..n - 2].iter().map(|s| s.as_str()).collect();
        names.extend(["X", "Y", "Z"]);
        let v = vars(&names);
        let h = |f: &MPoly| homogenize_xy(f, &v, 2);
        (h(&self.p), h(&self.q))
    }

    pub fn projectivize(&self) -> ProjectiveTriple {
        let (pp, qq) = self.homogenize();
        let v = pp.vars().clone();
        let xx = MPoly::var(&v, "X");
        let yy = MPoly::var(&v, "Y");
        let zz = MPoly::var(&v, "Z");
        let a = &zz * &qq;
        let b = -(&zz * &pp);
        let c = &(&yy * &pp) - &(&xx * &qq);
        let t = ProjectiveTriple { a, b, c };
        assert!(t.identity_residual().is_zero(), "A X + B Y + C Z must vanish");
        t
    }
}

/// Homogenizes f (last two variables x, y) to degree d over `target` = params ++ [X, Y, Z].
pub fn homogenize_xy(f: &MPoly, target: &Vars, d: u32) -> MPoly {
    let n = f.vars().len();
    let mut out = MPoly::zero(target);
    for (m, c) in f.terms() {
        let mut e = m.0[..n - 2].to_vec();
        let (i, j) = (m.0[n - 2], m.0[n - 1]);
        assert!(i + j <= d, "term of degree above {d}");
        e.extend([i, j, d - i - j]);
        out = out + MPoly::monomial(target, Monomial(e), c.clone());
    }
    out
}

/// f(gx, gy) where x, y are the last two variables of f; gx, gy share f's variables.
pub fn substitute_xy(f: &MPoly, gx: &MPoly, gy: &MPoly) -> MPoly {
    let v = f.vars().clone();
    let n = v.len();
    let dx = f.degree_in(n - 2) as usize;
    let dy = f.degree_in(n - 1) as usize;
    let mut px = vec![MPoly::one(&v)];
    for k in 1..=dx {
        px.push(&px[k - 1] * gx);
    }
    let mut py = vec![MPoly::one(&v)];
    for k in 1..=dy {
        py.push(&py[k - 1] * gy);
    }
    let mut out = MPoly::zero(&v);
    for (m, c) in f.terms() {
        let mut e = m.0.clone();
        let (i, j) = (e[n - 2] as usize, e[n - 1] as usize);
        e[n - 2] = 0;
        e[n - 1] = 0;
        let t = MPoly::monomial(&v, Monomial(e), c.clone());
        out = out + &(&t * &px[i]) * &py[j];
    }
    out
}

/// A = ZQ, B = −ZP, C = YP − XQ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProjectiveTriple {
    pub a: MPoly,
    pub b: MPoly,
    pub c: MPoly,
}

impl ProjectiveTriple {
    pub fn identity_residual(&self) -> MPoly {
        let v = self.a.vars();
        let xx = MPoly::var(v, "X");
        let yy = MPoly::var(v, "Y");
        let zz = MPoly::var(v, "Z");
        &(&(&self.a * &xx) + &(&self.b * &yy)) + &(&self.c * &zz)
    }
}

/// Shifts (L, M, N) by A·(X, Y, Z) so that the divergence vanishes.
pub fn darboux_normalize(
    l: &MPoly,
    m: &MPoly,
    n: &MPoly,
) -> Result<(MPoly, MPoly, MPoly), SystemError> {
    let degs = [l, m, n].map(|f| f.total_degree());
    let nonzero: Vec<u32> = [l, m, n]
        .iter()
        .zip(degs)
        .filter(|(f, _)| !f.is_zero())
        .map(|(_, d)| d)
        .collect();
    let deg = nonzero.first().copied().unwrap_or(0);
    if let Some(&d) = nonzero.iter().find(|&&d| d != deg) {
        return Err(SystemError::UnequalDegrees(deg, d));
    }
    let v = l.vars();
    let ix = l.var_index("X").unwrap();
    let iy = l.var_index("Y").unwrap();
    let iz = l.var_index("Z").unwrap();
    let div = &(&l.derivative(ix) + &m.derivative(iy)) + &n.derivative(iz);
    let a = div.scale(&-(Rational::one() / Rational::from_integer((deg + 2).into())));
    let l2 = l + &(&a * &MPoly::var_at(v, ix));
    let m2 = m + &(&a * &MPoly::var_at(v, iy));
    let n2 = n + &(&a * &MPoly::var_at(v, iz));
    let check = &(&l2.derivative(ix) + &m2.derivative(iy)) + &n2.derivative(iz);
    assert!(check.is_zero(), "normalized triple must be divergence free");
    Ok((l2, m2, n2))
}

/// New coordinates x̃ = M(x − B) and new time t̃ = timescale·t.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineTransform {
    pub m: [[Rational; 2]; 2],
    pub b: [Rational; 2],
    pub timescale: Rational,
}

impl AffineTransform {
    pub fn new(
        m: [[Rational; 2]; 2],
        b: [Rational; 2],
        timescale: Rational,
    ) -> Result<Self, SystemError> {
        let det = &m[0][0] * &m[1][1] - &m[0][1] * &m[1][0];
        if det.is_zero() {
            return Err(SystemError::SingularTransform);
        }
        if timescale.is_zero() {
            return Err(SystemError::ZeroTimescale);
        }
        Ok(AffineTransform { m, b, timescale })
    }

    pub fn identity() -> Self {
        let (o, z) = (Rational::one(), Rational::zero());
        AffineTransform {
            m: [[o.clone(), z.clone()], [z.clone(), o.clone()]],
            b: [z.clone(), z],
            timescale: o,
        }
    }

    /// Substitution x → x + b.
    pub fn translation(b1: Rational, b2: Rational) -> Self {
        AffineTransform {
            b: [b1, b2],
            ..Self::identity()
        }
    }

    pub fn linear(m: [[Rational; 2]; 2]) -> Result<Self, SystemError> {
        Self::new(m, [Rational::zero(), Rational::zero()], Rational::one())
    }

    pub fn det(&self) -> Rational {
        &self.m[0][0] * &self.m[1][1] - &self.m[0][1] * &self.m[1][0]
    }

    pub fn inverse_matrix(&self) -> [[Rational; 2]; 2] {
        let d = self.det();
        [
            [&self.m[1][1] / &d, -&self.m[0][1] / &d],
            [-&self.m[1][0] / &d, &self.m[0][0] / &d],
        ]
    }

    /// `self` applied after `first`.
    pub fn after(&self, first: &AffineTransform) -> AffineTransform {
        let m = mat_mul(&self.m, &first.m);
        let mi = first.inverse_matrix();
        let b = [
            &first.b[0] + &mi[0][0] * &self.b[0] + &mi[0][1] * &self.b[1],
            &first.b[1] + &mi[1][0] * &self.b[0] + &mi[1][1] * &self.b[1],
        ];
        AffineTransform {
            m,
            b,
            timescale: &self.timescale * &first.timescale,
        }
    }

    /// g(x) = M(x − B) as a pair of polynomials over the variables of `v`.
    pub fn forward_polys(&self, v: &Vars) -> (MPoly, MPoly) {
        let x = MPoly::var(v, "x");
        let y = MPoly::var(v, "y");
        let xs = &x - &MPoly::constant(v, self.b[0].clone());
        let ys = &y - &MPoly::constant(v, self.b[1].clone());
        (
            &xs.scale(&self.m[0][0]) + &ys.scale(&self.m[0][1]),
            &xs.scale(&self.m[1][0]) + &ys.scale(&self.m[1][1]),
        )
    }

    fn inverse_polys(&self, v: &Vars) -> (MPoly, MPoly) {
        let x = MPoly::var(v, "x");
        let y = MPoly::var(v, "y");
        let mi = self.inverse_matrix();
        (
            &(&x.scale(&mi[0][0]) + &y.scale(&mi[0][1])) + &MPoly::constant(v, self.b[0].clone()),
            &(&x.scale(&mi[1][0]) + &y.scale(&mi[1][1])) + &MPoly::constant(v, self.b[1].clone()),
        )
    }
}

fn mat_mul(a: &[[Rational; 2]; 2], b: &[[Rational; 2]; 2]) -> [[Rational; 2]; 2] {
    std::array::from_fn(|i| std::array::from_fn(|j| &a[i][0] * &b[0][j] + &a[i][1] * &b[1][j]))
}

/// (1/timescale)·M·(p, q)(g⁻¹(x̃)).
pub fn apply_affine_poly(s: &PolySystem, g: &AffineTransform) -> PolySystem {
    let v = s.vars().clone();
    let (ix, iy) = g.inverse_polys(&v);
    let p = substitute_xy(&s.p, &ix, &iy);
    let q = substitute_xy(&s.q, &ix, &iy);
    let k = Rational::one() / &g.timescale;
    let np = (&p.scale(&g.m[0][0]) + &q.scale(&g.m[0][1])).scale(&k);
    let nq = (&p.scale(&g.m[1][0]) + &q.scale(&g.m[1][1])).scale(&k);
    PolySystem::new(np, nq)
}

pub fn apply_affine(s: &QuadraticSystem, g: &AffineTransform) -> QuadraticSystem {
    apply_affine_poly(&s.to_poly_system(), g)
        .to_quadratic()
        .expect("affine image of a quadratic system is quadratic")
}

pub fn translate_symbolic(s: &QuadraticSystem) -> PolySystem {
    s.to_poly_system().translate_symbolic()
}

pub fn projectivize(s: &QuadraticSystem) -> ProjectiveTriple {
    s.to_poly_system().projectivize()
}

/// Coefficients printed in the documented order, for diagnostics.
pub fn coeff_listing(s: &QuadraticSystem) -> String {
    s.a.iter()
        .map(|c| fmt_rational(c))
        .collect::<Vec<_>>()
        .join(",")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::parse::parse_poly;
    use crate::polyring::rational::{ri, rq};

    fn sys(p: &str, q: &str) -> QuadraticSystem {
        let v = xy_vars();
        QuadraticSystem::from_polys(&parse_poly(p, &v).unwrap(), &parse_poly(q, &v).unwrap())
            .unwrap()
    }

    #[test]
    fn validation() {
        assert_eq!(sys("x^2-1", "y^2-1").validate(), Validity::Ok);
        assert_eq!(sys("x^2", "x*y").validate(), Validity::Degenerate);
        assert_eq!(sys("x", "y").validate(), Validity::NotQuadratic);
    }

    #[test]
    fn mixed_coefficient_is_halved() {
        let s = sys("2*x*y", "y^2-x^2-1");
        assert_eq!(s.a[4], ri(1));
        assert_eq!(s.a[9], ri(-1));
        assert_eq!(s.a[6], ri(-1));
        assert_eq!(s.p().to_string(), "2*x*y");
    }

    #[test]
    fn translation_and_composition() {
        let s = sys("x^2", "y^2");
        let t = apply_affine(&s, &AffineTransform::translation(ri(1), ri(0)));
        assert_eq!(t, sys("1 + 2*x + x^2", "y^2"));
        assert_eq!(apply_affine(&s, &AffineTransform::identity()), s);
        let vi1 = sys("x^2-1", "y^2-1");
        let swap = AffineTransform::linear([[ri(0), ri(1)], [ri(1), ri(0)]]).unwrap();
        assert_eq!(apply_affine(&vi1, &swap), vi1);

        let g1 = AffineTransform::new([[ri(2), ri(1)], [ri(0), ri(1)]], [ri(1), rq(-1, 2)], ri(3))
            .unwrap();
        let g2 = AffineTransform::new([[ri(1), ri(0)], [ri(-1), ri(3)]], [ri(0), ri(2)], rq(1, 2))
            .unwrap();
        let s = sys("1 + x - 2*x*y", "x^2 + 3*y");
        assert_eq!(
            apply_affine(&apply_affine(&s, &g1), &g2),
            apply_affine(&s, &g2.after(&g1))
        );
    }

    #[test]
    fn symbolic_translation() {
        let s = sys("x^2", "5");
        let t = translate_symbolic(&s);
        let v = t.vars().clone();
        let (p0, _) = t.part(0);
        assert_eq!(p0, parse_poly("x0^2", &v).unwrap());
        let (p1, _) = t.part(1);
        assert_eq!(p1, parse_poly("2*x0*x", &v).unwrap());
        assert_eq!(t.part(0).1, MPoly::constant(&v, ri(5)));
        let back = t.specialize("x0", &ri(0)).specialize("y0", &ri(0));
        assert_eq!(back.p.with_vars(&xy_vars()), s.p());
    }

    #[test]
    fn projective_triple() {
        let t = projectivize(&sys("x^2", "y^2"));
        let v = t.c.vars().clone();
        assert_eq!(t.c, parse_poly("X^2*Y - X*Y^2", &v).unwrap());
        let t = projectivize(&sys("x^2-1", "2*y"));
        assert_eq!(t.c, parse_poly("X^2*Y - Y*Z^2 - 2*X*Y*Z", &v).unwrap());
    }

    #[test]
    fn darboux() {
        let v = xyz_vars();
        let f = |s: &str| parse_poly(s, &v).unwrap();
        let (l, m, n) = darboux_normalize(&f("X^2"), &f("0"), &f("0")).unwrap();
        assert_eq!(l, f("1/2*X^2"));
        assert_eq!(m, f("-1/2*X*Y"));
        assert_eq!(n, f("-1/2*X*Z"));
        let (l, m, n) = darboux_normalize(&f("X*Z"), &f("Y*Z"), &f("Z^2")).unwrap();
        assert!(l.is_zero() && m.is_zero() && n.is_zero());
        assert!(darboux_normalize(&f("X"), &f("Y^2"), &f("0")).is_err());
    }

    #[test]
    fn rescaling_keeps_quadratic_part() {
        let s = sys("3 + 2*x - x*y", "-1 + y + x^2");
        let gamma = ri(2);
        let g = AffineTransform::new(
            [[rq(1, 2), ri(0)], [ri(0), rq(1, 2)]],
            [ri(0), ri(0)],
            gamma.clone(),
        )
        .unwrap();
        let t = apply_affine(&s, &g);
        for i in [3, 4, 5, 9, 10, 11] {
            assert_eq!(t.a[i], s.a[i]);
        }
        for i in [1, 2, 7, 8] {
            assert_eq!(t.a[i], &s.a[i] / &gamma);
        }
        for i in [0, 6] {
            assert_eq!(t.a[i], &s.a[i] / (&gamma * &gamma));
        }
    }
}
