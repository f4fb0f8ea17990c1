//! Splitting a ternary form into linear factors over Q and quadratic extensions.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::field::Field;
use super::mpoly::{MPoly, Monomial};
use super::ops::multiplicity;
use super::quadext::QuadExtScalar;
use super::rational::Rational;
use super::upoly::UPoly;

pub type LineTriple = [QuadExtScalar; 3];

#[derive(Clone, Debug)]
pub struct LineFactor {
    pub line: LineTriple,
    pub exponent: u32,
}

#[derive(Clone, Debug)]
pub struct LineFactorization {
    pub lines: Vec<LineFactor>,
    /// Product of the irreducible factors that are not (pairs of) lines; 1 if none.
    pub residue: MPoly,
    /// h = unit · Π lines^e · residue, with lines normalized.
    pub unit: Rational,
}

/// Scales so that the first nonzero coefficient is 1.
pub fn normalize_line(l: &LineTriple) -> LineTriple {
    let lead = l.iter().find(|c| !Field::is_zero_elem(*c)).expect("zero line");
    let inv = lead.one_like().div(lead);
    [l[0].mul(&inv), l[1].mul(&inv), l[2].mul(&inv)]
}

pub fn line_is_rational(l: &LineTriple) -> bool {
    l.iter().all(|c| c.is_rational())
}

pub fn line_is_real(l: &LineTriple) -> bool {
    normalize_line(l).iter().all(|c| c.is_real())
}

pub fn conj_line(l: &LineTriple) -> LineTriple {
    [l[0].conj(), l[1].conj(), l[2].conj()]
}

/// The rational linear form of a rational line over the given three variables.
pub fn rational_line_poly(l: &LineTriple, vars: &super::mpoly::Vars) -> MPoly {
    let mut p = MPoly::zero(vars);
    for (i, c) in l.iter().enumerate() {
        let q = c.as_rational().expect("line is not rational");
        p = &p + &MPoly::var_at(vars, i).scale(&q);
    }
    p
}

/// L·L̄ for a line with irrational coefficients; the result is rational.
pub fn pair_product(l: &LineTriple, vars: &super::mpoly::Vars) -> MPoly {
    let c = conj_line(l);
    let mut out = MPoly::zero(vars);
    for i in 0..3 {
        for j in i..3 {
            let s = if i == j {
                l[i].mul(&c[i])
            } else {
                l[i].mul(&c[j]).add(&l[j].mul(&c[i]))
            };
            let q = s.as_rational().expect("pair product must be rational");
            let mut e = vec![0u32; 3];
            e[i] += 1;
            e[j] += 1;
            out = &out + &MPoly::monomial(vars, Monomial(e), q);
        }
    }
    out
}

type Bi = Vec<Vec<QuadExtScalar>>;

fn bi_zero(n: usize, z: &QuadExtScalar) -> Bi {
    vec![vec![z.zero_like(); n]; n]
}

fn bi_mul(a: &Bi, b: &Bi, n: usize, z: &QuadExtScalar) -> Bi {
    let mut r = bi_zero(n, z);
    for i in 0..n {
        for j in 0..n {
            if Field::is_zero_elem(&a[i][j]) {
                continue;
            }
            for k in 0..n - i {
                for l in 0..n - j {
                    if Field::is_zero_elem(&b[k][l]) {
                        continue;
                    }
                    r[i + k][j + l] = r[i + k][j + l].add(&a[i][j].mul(&b[k][l]));
                }
            }
        }
    }
    r
}

/// Coefficients, as polynomials in w, of h restricted to the line X + vY + wZ = 0
/// (or Y + wZ = 0 when `horizontal`), parametrized by the free affine coordinate.
fn restriction_rows(h: &MPoly, v: &QuadExtScalar, horizontal: bool) -> Vec<UPoly<QuadExtScalar>> {
    let z = v.zero_like();
    let one = v.one_like();
    let d = h.total_degree() as usize;
    let n = d + 1;
    // X and Y as bivariate polys in (s, w)
    let mut xs = bi_zero(n, &z);
    let mut ys = bi_zero(n, &z);
    if horizontal {
        // Y = -w, X = s
        xs[1][0] = one.clone();
        ys[0][1] = one.neg();
    } else {
        // X = -v s - w, Y = s
        xs[1][0] = v.neg();
        xs[0][1] = one.neg();
        ys[1][0] = one.clone();
    }
    let mut xp = vec![bi_zero(n, &z)];
    xp[0][0][0] = one.clone();
    let mut yp = xp.clone();
    for k in 1..=d {
        xp.push(bi_mul(&xp[k - 1], &xs, n, &z));
        yp.push(bi_mul(&yp[k - 1], &ys, n, &z));
    }
    let mut acc = bi_zero(n, &z);
    for (m, c) in h.terms() {
        let t = bi_mul(&xp[m.0[0] as usize], &yp[m.0[1] as usize], n, &z);
        let cq = z.from_rational(c);
        for i in 0..n {
            for j in 0..n {
                if !Field::is_zero_elem(&t[i][j]) {
                    acc[i][j] = acc[i][j].add(&t[i][j].mul(&cq));
                }
            }
        }
    }
    acc.into_iter()
        .map(|row| UPoly::new(row, z.clone()))
        .filter(|p| !p.is_zero())
        .collect()
}

/// Roots (in w) of the lines through one direction, with multiplicities.
/// The flag is false when some factor needs a larger field than available.
fn lines_in_direction(
    h: &MPoly,
    v: &QuadExtScalar,
    horizontal: bool,
) -> (Vec<(QuadExtScalar, u32)>, bool) {
    let rows = restriction_rows(h, v, horizontal);
    let mut g = UPoly::zero(&v.zero_like());
    for r in &rows {
        g = g.gcd(r);
    }
    let mut out = Vec::new();
    let mut complete = true;
    if g.degree().unwrap_or(0) == 0 {
        return (out, complete);
    }
    let rational_dir = v.is_rational();
    for (f, m) in g.squarefree() {
        let roots = if rational_dir {
            f.small_roots(|d| d.as_rational().map(|q| QuadExtScalar::sqrt_rational(&q)))
                .or_else(|| {
                    let fr = UPoly::from_rationals(
                        f.coeffs().iter().map(|c| c.as_rational().unwrap()).collect(),
                    );
                    let rr = fr.rational_roots();
                    if rr.len() < f.degree().unwrap() {
                        complete = false;
                    }
                    Some(rr.into_iter().map(QuadExtScalar::rational).collect())
                })
        } else {
            f.small_roots(|d| d.sqrt_in_field())
        };
        match roots {
            Some(rs) => out.extend(rs.into_iter().map(|r| (r, m))),
            None => complete = false,
        }
    }
    (out, complete)
}

/// Factors a ternary form into lines over Q and quadratic extensions.
/// The third variable plays the role of Z.
pub fn factor_into_lines(h: &MPoly) -> LineFactorization {
    assert_eq!(h.vars().len(), 3, "factor_into_lines expects a ternary form");
    assert!(!h.is_zero(), "factor_into_lines of zero");
    let vars = h.vars().clone();
    let zv = MPoly::var_at(&vars, 2);
    let mut lines = Vec::new();
    // rational factors accumulated for the residue computation
    let mut factors: Vec<(MPoly, u32)> = Vec::new();

    let (kz, h1) = multiplicity(h, &zv);
    let q0 = |q: Rational| QuadExtScalar::rational(q);
    if kz > 0 {
        lines.push(LineFactor {
            line: [q0(Rational::zero()), q0(Rational::zero()), q0(Rational::one())],
            exponent: kz,
        });
        factors.push((zv.clone(), kz));
    }

    if h1.total_degree() > 0 {
        let d = h1.total_degree();
        let b = h1.eval_var(2, &Rational::zero());
        let mut fc = vec![Rational::zero(); d as usize + 1];
        for (m, c) in b.terms() {
            fc[m.0[0] as usize] = c.clone();
        }
        let f = UPoly::from_rationals(fc);
        let fdeg = f.degree().unwrap_or(0) as u32;

        let mut directions: Vec<(QuadExtScalar, bool)> = Vec::new();
        if fdeg < d {
            directions.push((q0(Rational::zero()), true));
        }
        let (lin, rest) = f.split_rational();
        for (r, _) in lin {
            directions.push((q0(-r), false));
        }
        for (g, _) in rest {
            if g.degree() == Some(2) {
                // X - θY with θ a root of g
                let (c0, c1) = (g.coeff(0), g.coeff(1));
                let disc = &c1 * &c1 - Rational::from_integer(BigInt::from(4)) * &c0;
                let s = QuadExtScalar::sqrt_rational(&disc);
                let half = Rational::new(BigInt::one(), BigInt::from(2));
                let theta = QuadExtScalar::rational(-c1 * &half).add(&s.mul(&QuadExtScalar::rational(half)));
                directions.push((theta.neg(), false));
            }
        }

        for (v, horizontal) in directions {
            let (ws, _) = lines_in_direction(&h1, &v, horizontal);
            for (w, m) in ws {
                let one = v.one_like();
                let raw = if horizontal {
                    [v.zero_like(), one, w.clone()]
                } else {
                    [one, v.clone(), w.clone()]
                };
                let l = normalize_line(&raw);
                if line_is_rational(&l) {
                    factors.push((rational_line_poly(&l, &vars), m));
                    lines.push(LineFactor { line: l, exponent: m });
                } else if v.is_rational() {
                    // parallel conjugate pair: both roots come out of the same factor
                    let c = conj_line(&l);
                    if !lines.iter().any(|x: &LineFactor| x.line == c) {
                        factors.push((pair_product(&l, &vars), m));
                    }
                    lines.push(LineFactor { line: l, exponent: m });
                } else {
                    factors.push((pair_product(&l, &vars), m));
                    let c = normalize_line(&conj_line(&l));
                    lines.push(LineFactor { line: l, exponent: m });
                    lines.push(LineFactor { line: c, exponent: m });
                }
            }
        }
    }

    let mut prod = MPoly::one(&vars);
    for (f, m) in &factors {
        prod = &prod * &f.pow(*m);
    }
    let rest = h.exact_div(&prod).expect("line factors must divide the form");
    let (residue, unit) = if rest.is_constant() {
        (MPoly::one(&vars), rest.constant_value().unwrap())
    } else {
        let n = rest.normalize();
        let u = rest.rational_content();
        (n, u)
    };
    LineFactorization {
        lines,
        residue,
        unit,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::mpoly::vars;
    use crate::polyring::rational::ri;

    fn xyz() -> (super::super::mpoly::Vars, MPoly, MPoly, MPoly) {
        let v = vars(&["X", "Y", "Z"]);
        let x = MPoly::var(&v, "X");
        let y = MPoly::var(&v, "Y");
        let z = MPoly::var(&v, "Z");
        (v, x, y, z)
    }

    fn rl(a: i64, b: i64, c: i64) -> LineTriple {
        [
            QuadExtScalar::from_int(a),
            QuadExtScalar::from_int(b),
            QuadExtScalar::from_int(c),
        ]
    }

    fn find(f: &LineFactorization, l: &LineTriple) -> Option<u32> {
        let n = normalize_line(l);
        f.lines.iter().find(|x| x.line == n).map(|x| x.exponent)
    }

    #[test]
    fn rational_lines_with_exponents() {
        let (_, x, y, z) = xyz();
        let a = &z * &z - &x * &x;
        let h = (&y * &a.pow(2)).scale(&ri(2));
        let f = factor_into_lines(&h);
        assert_eq!(f.lines.len(), 3);
        assert_eq!(find(&f, &rl(0, 1, 0)), Some(1));
        assert_eq!(find(&f, &rl(1, 0, -1)), Some(2));
        assert_eq!(find(&f, &rl(1, 0, 1)), Some(2));
        assert!(f.residue.is_constant());

        let h = &x.pow(3) * &z.pow(2);
        let f = factor_into_lines(&h);
        assert_eq!(find(&f, &rl(1, 0, 0)), Some(3));
        assert_eq!(find(&f, &rl(0, 0, 1)), Some(2));
    }

    #[test]
    fn conjugate_pair() {
        let (_, x, y, _) = xyz();
        let h = &x * &x + &y * &y;
        let f = factor_into_lines(&h);
        assert_eq!(f.lines.len(), 2);
        for l in &f.lines {
            assert_eq!(l.exponent, 1);
            assert!(!line_is_real(&l.line));
            assert_eq!(l.line[2], QuadExtScalar::from_int(0));
        }
    }

    #[test]
    fn parallel_irrational_pair_and_conic_residue() {
        let (_, x, y, z) = xyz();
        // (X^2 - 2Z^2) * (X^2 + Y^2 - Z^2)
        let pair = &x * &x - &(&z * &z).scale(&ri(2));
        let conic = &(&x * &x + &y * &y) - &(&z * &z);
        let f = factor_into_lines(&(&pair * &conic));
        assert_eq!(f.lines.len(), 2);
        assert!(f.lines.iter().all(|l| line_is_real(&l.line)));
        assert_eq!(f.residue, conic.normalize());
    }
}
