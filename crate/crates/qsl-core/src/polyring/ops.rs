use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::mpoly::MPoly;
use super::rational::{ri, Rational};
use super::upoly::UPoly;
use super::PolyError;

/// Positions of the distinguished variables x and y.
pub fn xy_index(f: &MPoly) -> (usize, usize) {
    let ix = f.var_index("x").expect("polynomial has no variable x");
    let iy = f.var_index("y").expect("polynomial has no variable y");
    (ix, iy)
}

fn binom(n: u32, k: u32) -> BigInt {
    let mut r = BigInt::one();
    for i in 0..k {
        r = r * (n - i) / (i + 1);
    }
    r
}

/// (f, g)^(k) in the distinguished variables x, y.
pub fn transvectant(f: &MPoly, g: &MPoly, k: u32) -> MPoly {
    let (ix, iy) = xy_index(f);
    let mut acc = MPoly::zero(f.vars());
    for h in 0..=k {
        let df = f.derivative_n(ix, k - h).derivative_n(iy, h);
        if df.is_zero() {
            continue;
        }
        let dg = g.derivative_n(ix, h).derivative_n(iy, k - h);
        if dg.is_zero() {
            continue;
        }
        let mut c = Rational::from_integer(binom(k, h));
        if h % 2 == 1 {
            c = -c;
        }
        acc = &acc + &(&df * &dg).scale(&c);
    }
    acc
}

pub fn jacobian(f: &MPoly, g: &MPoly) -> MPoly {
    let (ix, iy) = xy_index(f);
    &(&f.derivative(ix) * &g.derivative(iy)) - &(&f.derivative(iy) * &g.derivative(ix))
}

pub fn hessian(f: &MPoly) -> MPoly {
    let (ix, iy) = xy_index(f);
    let fxy = f.derivative(ix).derivative(iy);
    &(&f.derivative_n(ix, 2) * &f.derivative_n(iy, 2)) - &(&fxy * &fxy)
}

/// Determinant by fraction-free elimination.
pub fn determinant(mut m: Vec<Vec<MPoly>>, vars: &super::mpoly::Vars) -> MPoly {
    let n = m.len();
    if n == 0 {
        return MPoly::one(vars);
    }
    let mut negate = false;
    let mut prev = MPoly::one(vars);
    for k in 0..n.saturating_sub(1) {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(i) => {
                    m.swap(i, k);
                    negate = !negate;
                }
                None => return MPoly::zero(vars),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = &(&m[i][j] * &m[k][k]) - &(&m[i][k] * &m[k][j]);
                m[i][j] = t.exact_div(&prev).expect("Bareiss step must divide exactly");
            }
        }
        prev = m[k][k].clone();
    }
    let d = m[n - 1][n - 1].clone();
    if negate {
        -d
    } else {
        d
    }
}

/// Sylvester matrix determinant with prescribed (formal) degrees, f-rows first.
/// Coefficients above the actual degree are zero.
pub fn resultant_formal(f: &MPoly, g: &MPoly, var: usize, m: usize, n: usize) -> MPoly {
    let fc = f.coefficients_in(var);
    let gc = g.coefficients_in(var);
    assert!(fc.len() <= m + 1 && gc.len() <= n + 1, "formal degree below actual degree");
    let vars = f.vars().clone();
    let zero = MPoly::zero(&vars);
    let coef = |c: &Vec<MPoly>, k: usize| c.get(k).cloned().unwrap_or_else(|| zero.clone());
    let size = m + n;
    let mut rows = Vec::with_capacity(size);
    for i in 0..n {
        let mut row = vec![zero.clone(); size];
        for j in 0..=m {
            row[i + j] = coef(&fc, m - j);
        }
        rows.push(row);
    }
    for i in 0..m {
        let mut row = vec![zero.clone(); size];
        for j in 0..=n {
            row[i + j] = coef(&gc, n - j);
        }
        rows.push(row);
    }
    determinant(rows, &vars)
}

/// Resultant with respect to variable `var`, using actual degrees.
pub fn resultant(f: &MPoly, g: &MPoly, var: usize) -> Result<MPoly, PolyError> {
    let m = f.degree_in(var) as usize;
    let n = g.degree_in(var) as usize;
    if m == 0 || n == 0 || f.is_zero() || g.is_zero() {
        return Err(PolyError::ConstantOperand);
    }
    Ok(resultant_formal(f, g, var, m, n))
}

pub fn resultant_by_name(f: &MPoly, g: &MPoly, name: &str) -> Result<MPoly, PolyError> {
    let i = f
        .var_index(name)
        .ok_or_else(|| PolyError::UnknownVariable(name.to_string()))?;
    resultant(f, g, i)
}

fn trim(v: &mut Vec<MPoly>) {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
}

fn prem(a: &[MPoly], b: &[MPoly]) -> Vec<MPoly> {
    let db = b.len() - 1;
    let lb = &b[db];
    let mut r = a.to_vec();
    trim(&mut r);
    while !r.is_empty() && r.len() - 1 >= db {
        let lr = r.last().unwrap().clone();
        let shift = r.len() - 1 - db;
        for c in r.iter_mut() {
            *c = &*c * lb;
        }
        for (j, bc) in b.iter().enumerate() {
            r[shift + j] = &r[shift + j] - &(&lr * bc);
        }
        trim(&mut r);
    }
    r
}

fn content_of(coeffs: &[MPoly]) -> MPoly {
    let mut c = coeffs[0].clone();
    for x in &coeffs[1..] {
        if c.is_constant() && !c.is_zero() {
            break;
        }
        c = gcd_raw(&c, x);
    }
    c.normalize()
}

fn primitive(coeffs: &[MPoly]) -> Vec<MPoly> {
    let c = content_of(coeffs);
    coeffs
        .iter()
        .map(|x| x.exact_div(&c).expect("content divides"))
        .collect()
}

fn gcd_raw(f: &MPoly, g: &MPoly) -> MPoly {
    if f.is_zero() {
        return g.normalize();
    }
    if g.is_zero() {
        return f.normalize();
    }
    if f.is_constant() || g.is_constant() {
        return MPoly::one(f.vars());
    }
    let nv = f.vars().len();
    let v = (0..nv)
        .rev()
        .find(|&i| f.involves(i) || g.involves(i))
        .unwrap();
    if !f.involves(v) {
        return gcd_raw(f, &content_of(&g.coefficients_in(v)));
    }
    if !g.involves(v) {
        return gcd_raw(&content_of(&f.coefficients_in(v)), g);
    }
    let fc = f.coefficients_in(v);
    let gc = g.coefficients_in(v);
    let c = gcd_raw(&content_of(&fc), &content_of(&gc));
    let mut a = primitive(&fc);
    let mut b = primitive(&gc);
    if a.len() < b.len() {
        std::mem::swap(&mut a, &mut b);
    }
    loop {
        let r = prem(&a, &b);
        if r.is_empty() {
            break;
        }
        if r.len() == 1 {
            b = vec![MPoly::one(f.vars())];
            break;
        }
        a = b;
        b = primitive(&r);
    }
    let h = MPoly::from_coefficients_in(f.vars(), v, &primitive(&b));
    (&c * &h).normalize()
}

/// f with every variable except `keep` fixed at a point, as a univariate polynomial.
fn specialize_to(f: &MPoly, keep: usize, point: &[Rational]) -> UPoly<Rational> {
    let mut c = vec![Rational::zero(); f.degree_in(keep) as usize + 1];
    for (m, k) in f.terms() {
        let mut t = k.clone();
        for (i, e) in m.0.iter().enumerate() {
            if i != keep && *e > 0 {
                t *= num_traits::pow(point[i].clone(), *e as usize);
            }
        }
        c[m.0[keep] as usize] += t;
    }
    UPoly::from_rationals(c)
}

/// True when specializations prove f and g coprime. A common factor involving
/// variable v survives every specialization that keeps both leading
/// coefficients in v alive.
fn surely_coprime(f: &MPoly, g: &MPoly) -> bool {
    let n = f.vars().len();
    let point: Vec<Rational> = (0..n)
        .map(|i| Rational::new(BigInt::from(3 + 2 * i as i64), BigInt::from(7 + 4 * i as i64)))
        .collect();
    (0..n).all(|v| {
        if !f.involves(v) || !g.involves(v) {
            return true;
        }
        let a = specialize_to(f, v, &point);
        let b = specialize_to(g, v, &point);
        if a.degree() != Some(f.degree_in(v) as usize) || b.degree() != Some(g.degree_in(v) as usize) {
            return false;
        }
        a.gcd(&b).degree() == Some(0)
    })
}

/// A polynomial in the single variable `v` as a univariate polynomial.
fn to_upoly(f: &MPoly, v: usize) -> UPoly<Rational> {
    let mut c = vec![Rational::zero(); f.degree_in(v) as usize + 1];
    for (m, k) in f.terms() {
        c[m.0[v] as usize] += k.clone();
    }
    UPoly::from_rationals(c)
}

fn from_upoly(p: &UPoly<Rational>, vars: &super::mpoly::Vars, v: usize) -> MPoly {
    let mut e = vec![0u32; vars.len()];
    let mut out = MPoly::zero(vars);
    for (i, c) in p.coeffs().iter().enumerate() {
        e[v] = i as u32;
        out = out + MPoly::from_terms(vars, [(e.clone(), c.clone())]);
    }
    out
}

fn content_y(f: &MPoly, vx: usize, vy: usize) -> UPoly<Rational> {
    let mut c = UPoly::from_rationals(vec![]);
    for k in f.coefficients_in(vx) {
        c = c.gcd(&to_upoly(&k, vy));
    }
    c
}

/// Newton interpolation through (xs, ys).
fn interpolate(xs: &[Rational], ys: &[Rational]) -> UPoly<Rational> {
    let n = xs.len();
    let mut dd = ys.to_vec();
    for j in 1..n {
        for i in (j..n).rev() {
            dd[i] = (&dd[i] - &dd[i - 1]) / (&xs[i] - &xs[i - j]);
        }
    }
    let mut p = UPoly::from_rationals(vec![dd[n - 1].clone()]);
    for i in (0..n - 1).rev() {
        let lin = UPoly::from_rationals(vec![-xs[i].clone(), Rational::one()]);
        p = p.mul(&lin).add(&UPoly::from_rationals(vec![dd[i].clone()]));
    }
    p
}

/// Dense evaluation/interpolation gcd for polynomials in the two variables vx, vy.
fn gcd_two_vars(f: &MPoly, g: &MPoly, vx: usize, vy: usize) -> Option<MPoly> {
    let vars = f.vars().clone();
    let cf = content_y(f, vx, vy);
    let cg = content_y(g, vx, vy);
    let cont = from_upoly(&cf.gcd(&cg), &vars, vy);
    let pf = f.exact_div(&from_upoly(&cf, &vars, vy))?;
    let pg = g.exact_div(&from_upoly(&cg, &vars, vy))?;
    if pf.degree_in(vx) == 0 || pg.degree_in(vx) == 0 {
        return Some(cont);
    }
    let lf = to_upoly(pf.coefficients_in(vx).last().unwrap(), vy);
    let lg = to_upoly(pg.coefficients_in(vx).last().unwrap(), vy);
    let gamma = lf.gcd(&lg);
    let bound = gamma.degree().unwrap_or(0) + pf.degree_in(vy).min(pg.degree_in(vy)) as usize;
    let mut point = vec![Rational::zero(); vars.len()];
    let mut best: Option<usize> = None;
    let mut xs: Vec<Rational> = Vec::new();
    let mut images: Vec<UPoly<Rational>> = Vec::new();
    for k in 1..(4 * bound as i64 + 40) {
        let y = Rational::new(BigInt::from(k), BigInt::from(1 + (k % 5)));
        if lf.eval(&y).is_zero() || lg.eval(&y).is_zero() || xs.contains(&y) {
            continue;
        }
        point[vy] = y.clone();
        let h = specialize_to(&pf, vx, &point).gcd(&specialize_to(&pg, vx, &point));
        let d = h.degree().unwrap_or(0);
        match best {
            Some(b) if d > b => continue,
            Some(b) if d == b => {}
            _ => {
                best = Some(d);
                xs.clear();
                images.clear();
            }
        }
        if d == 0 {
            return Some(cont);
        }
        images.push(h.monic().scale(&gamma.eval(&y)));
        xs.push(y);
        if xs.len() == bound + 1 {
            let d = best.unwrap();
            let mut coeffs = Vec::new();
            for i in 0..=d {
                let ys: Vec<Rational> = images.iter().map(|h| h.coeff(i)).collect();
                coeffs.push(from_upoly(&interpolate(&xs, &ys), &vars, vy));
            }
            let cand = MPoly::from_coefficients_in(&vars, vx, &coeffs);
            let cc = content_y(&cand, vx, vy);
            let cand = cand.exact_div(&from_upoly(&cc, &vars, vy))?;
            if pf.exact_div(&cand).is_some() && pg.exact_div(&cand).is_some() {
                return Some(&cont * &cand);
            }
            // unlucky evaluation points: start over with fresh ones
            xs.clear();
            images.clear();
            best = None;
        }
    }
    None
}

fn homogenize_all(f: &MPoly, z: usize) -> MPoly {
    let d = f.total_degree();
    let mut out = MPoly::zero(f.vars());
    for (m, c) in f.terms() {
        let mut e = m.0.clone();
        e[z] += d - m.degree();
        out = out + MPoly::from_terms(f.vars(), [(e, c.clone())]);
    }
    out
}

fn gcd_dispatch(f: &MPoly, g: &MPoly) -> MPoly {
    let n = f.vars().len();
    let inv: Vec<usize> = (0..n).filter(|&i| f.involves(i) || g.involves(i)).collect();
    match inv.len() {
        2 => {
            if let Some(h) = gcd_two_vars(f, g, inv[0], inv[1]) {
                return h;
            }
        }
        3 if f.is_homogeneous() && g.is_homogeneous() => {
            let z = inv[2];
            let zv = MPoly::var_at(f.vars(), z);
            let (kf, f1) = multiplicity(f, &zv);
            let (kg, g1) = multiplicity(g, &zv);
            let one = Rational::one();
            let (a, b) = (f1.eval_var(z, &one), g1.eval_var(z, &one));
            if let Some(h) = gcd_two_vars(&a, &b, inv[0], inv[1]) {
                return &homogenize_all(&h, z) * &zv.pow(kf.min(kg));
            }
        }
        _ => {}
    }
    gcd_raw(f, g)
}

/// Normalized gcd: primitive over Z, positive grlex-leading coefficient.
pub fn gcd(f: &MPoly, g: &MPoly) -> MPoly {
    if f.is_zero() || g.is_zero() {
        return gcd_raw(f, g).normalize();
    }
    if surely_coprime(f, g) {
        return MPoly::one(f.vars());
    }
    gcd_dispatch(f, g).normalize()
}

/// Coefficients of a form homogeneous of degree `d` in x, y: entry `i` multiplies `x^i y^(d-i)`.
pub fn binary_coeffs(f: &MPoly, d: u32) -> Result<Vec<MPoly>, PolyError> {
    let (ix, iy) = xy_index(f);
    let mut out = vec![MPoly::zero(f.vars()); d as usize + 1];
    for (m, c) in f.terms() {
        if m.0[ix] + m.0[iy] != d {
            return Err(PolyError::NotHomogeneous(d));
        }
        let mut e = m.0.clone();
        let i = e[ix] as usize;
        e[ix] = 0;
        e[iy] = 0;
        out[i] = &out[i] + &MPoly::from_terms(f.vars(), [(e, c.clone())]);
    }
    Ok(out)
}

/// Discriminant of a binary quadratic or cubic form, explicit formulas.
pub fn discriminant_binary(f: &MPoly) -> Result<MPoly, PolyError> {
    let (ix, iy) = xy_index(f);
    let d = f.degree_in_set(&[ix, iy]);
    match d {
        2 => {
            let c = binary_coeffs(f, 2)?;
            let (a, b, cc) = (&c[2], &c[1], &c[0]);
            Ok(&(b * b) - &(a * cc).scale(&ri(4)))
        }
        3 => {
            let c = binary_coeffs(f, 3)?;
            let (a3, a2, a1, a0) = (&c[3], &c[2], &c[1], &c[0]);
            let t1 = (&(a3 * a2) * &(a1 * a0)).scale(&ri(18));
            let t2 = (&a2.pow(3) * a0).scale(&ri(-4));
            let t3 = &a2.pow(2) * &a1.pow(2);
            let t4 = (a3 * &a1.pow(3)).scale(&ri(-4));
            let t5 = (&a3.pow(2) * &a0.pow(2)).scale(&ri(-27));
            Ok(&(&(&(&t1 + &t2) + &t3) + &t4) + &t5)
        }
        _ => Err(PolyError::WrongDegree(d)),
    }
}

/// Exponent of `d` in `f`, together with the cofactor.
pub fn multiplicity(f: &MPoly, d: &MPoly) -> (u32, MPoly) {
    let mut k = 0;
    let mut cur = f.clone();
    if d.is_constant() {
        return (0, cur);
    }
    while !cur.is_zero() {
        match cur.exact_div(d) {
            Some(q) => {
                k += 1;
                cur = q;
            }
            None => break,
        }
    }
    (k, cur)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::mpoly::vars;

    #[test]
    fn transvectant_examples() {
        let v = vars(&["x", "y"]);
        let x = MPoly::var(&v, "x");
        let y = MPoly::var(&v, "y");
        let x2 = &x * &x;
        let y2 = &y * &y;
        assert_eq!(transvectant(&x2, &y2, 0), &x2 * &y2);
        let f = &(&x2 * &y) + &x;
        assert!(transvectant(&f, &f, 1).is_zero());
        assert_eq!(
            transvectant(&x.pow(3), &y.pow(3), 1),
            (&x2 * &y2).scale(&ri(9))
        );
    }

    #[test]
    fn resultant_examples() {
        let v = vars(&["x"]);
        let x = MPoly::var(&v, "x");
        let c = |k: i64| MPoly::constant(&v, ri(k));
        assert_eq!(resultant(&(&x - &c(2)), &(&x - &c(5)), 0).unwrap(), c(-3));
        assert_eq!(resultant(&(&(&x * &x) + &c(1)), &(&x - &c(1)), 0).unwrap(), c(2));
        assert!(resultant(&x, &x, 0).unwrap().is_zero());
        assert!(matches!(resultant(&c(3), &x, 0), Err(PolyError::ConstantOperand)));
    }

    #[test]
    fn gcd_examples() {
        let v = vars(&["X", "Y", "Z"]);
        let x = MPoly::var(&v, "X");
        let z = MPoly::var(&v, "Z");
        let a = &x - &z;
        let b = &x + &z;
        let f = &(&(&a * &a) * &b) * &z;
        let g = &(&a * &b) * &b;
        assert_eq!(gcd(&f, &g), &a * &b);
        let y = MPoly::var(&v, "Y");
        let h = &(&x * &x) - &(&y * &y);
        assert_eq!(gcd(&h, &(&x - &y)), &x - &y);
        assert_eq!(gcd(&g.scale(&ri(-6)), &MPoly::zero(&v)), g);
    }

    #[test]
    fn discriminant_examples() {
        let v = vars(&["x", "y"]);
        let x = MPoly::var(&v, "x");
        let y = MPoly::var(&v, "y");
        let c1 = &(&x * &y) * &(&x - &y);
        assert_eq!(discriminant_binary(&c1).unwrap().constant_value(), Some(ri(1)));
        let c2 = &x * &(&(&x * &x) + &(&y * &y));
        assert_eq!(discriminant_binary(&c2).unwrap().constant_value(), Some(ri(-4)));
        let c3 = &(&x * &x) * &y;
        assert!(discriminant_binary(&c3).unwrap().is_zero());
        assert!(discriminant_binary(&x).is_err());
    }
}
