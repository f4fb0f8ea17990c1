use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

pub type Rational = num_rational::BigRational;

pub fn ri(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn rq(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `n` or `n/d`.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = n.parse().ok()?;
    let d: BigInt = d.parse().ok()?;
    if d.is_zero() {
        return None;
    }
    Some(Rational::new(n, d))
}

/// "num/den", or just "num" when the denominator is 1.
pub fn fmt_rational(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Always "num/den", the JSON form.
pub fn fmt_rational_full(q: &Rational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

/// Splits `n = s^2 * r` with `r` squarefree (sign kept in `r`).
pub fn squarefree_split(n: &BigInt) -> (BigInt, BigInt) {
    if n.is_zero() {
        return (BigInt::zero(), BigInt::zero());
    }
    let mut m = n.abs();
    let mut s = BigInt::one();
    let mut r = BigInt::one();
    let mut k = BigInt::from(2u32);
    while &k * &k * &k <= m {
        let mut e = 0u32;
        while (&m % &k).is_zero() {
            m /= &k;
            e += 1;
        }
        for _ in 0..e / 2 {
            s *= &k;
        }
        if e % 2 == 1 {
            r *= &k;
        }
        k += 1u32;
    }
    // what is left has at most two prime factors
    let root = m.sqrt();
    if &root * &root == m {
        s *= root;
    } else {
        r *= m;
    }
    if n.is_negative() {
        r = -r;
    }
    (s, r)
}

/// Exact square root of a rational, if it exists.
pub fn rational_sqrt(q: &Rational) -> Option<Rational> {
    if q.is_negative() {
        return None;
    }
    let n = q.numer().sqrt();
    let d = q.denom().sqrt();
    if &n * &n == *q.numer() && &d * &d == *q.denom() {
        Some(Rational::new(n, d))
    } else {
        None
    }
}

/// Writes √q as `c·√r` with squarefree integer `r`.
pub fn sqrt_parts(q: &Rational) -> (Rational, BigInt) {
    // √(n/d) = √(n·d)/d
    let nd = q.numer() * q.denom();
    let (s, r) = squarefree_split(&nd);
    (Rational::new(s, q.denom().clone()), r)
}

pub fn lcm_denominators<'a>(qs: impl Iterator<Item = &'a Rational>) -> BigInt {
    qs.fold(BigInt::one(), |acc, q| acc.lcm(q.denom()))
}

pub fn gcd_numerators<'a>(qs: impl Iterator<Item = &'a Rational>) -> BigInt {
    qs.fold(BigInt::zero(), |acc, q| acc.gcd(q.numer()))
}

pub fn sign(q: &Rational) -> i32 {
    if q.is_zero() {
        0
    } else if q.is_positive() {
        1
    } else {
        -1
    }
}

pub fn to_f64(q: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    q.to_f64().unwrap_or_else(|| {
        // very large components: scale down both sides first
        let n = q.numer().to_string().len() as i32;
        let d = q.denom().to_string().len() as i32;
        let shift = (n.max(d) - 300).max(0) as u32;
        let p = BigInt::from(10u32).pow(shift);
        let nn = (q.numer() / &p).to_f64().unwrap_or(0.0);
        let dd = (q.denom() / &p).to_f64().unwrap_or(1.0);
        nn / dd
    })
}
