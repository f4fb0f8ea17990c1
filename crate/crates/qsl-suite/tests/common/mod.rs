#![allow(dead_code)]

use std::collections::BTreeMap;

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use qsl_core::classify::{parameter_grid, representative, ConfigLabel};
use qsl_core::polyring::rational::{ri, rq, Rational};
use qsl_core::system::{AffineTransform, QuadraticSystem, Validity};

pub fn rng(seed: u64) -> ChaCha8Rng {
    rand::SeedableRng::seed_from_u64(seed)
}

/// n/d with |n/d| <= 5.
pub fn small_rational(r: &mut ChaCha8Rng) -> Rational {
    let d = r.gen_range(1..=3);
    let n = r.gen_range(-5 * d..=5 * d);
    rq(n, d)
}

/// Dense random system with coefficients in [-5, 5].
pub fn random_system(r: &mut ChaCha8Rng) -> QuadraticSystem {
    loop {
        let a: [Rational; 12] = std::array::from_fn(|_| small_rational(r));
        let s = QuadraticSystem::from_coeffs(a);
        if s.validate() == Validity::Ok {
            return s;
        }
    }
}

/// Sparse random system with small integer coefficients, so that the
/// special strata (common factors, parallel lines) are actually hit.
pub fn sparse_system(r: &mut ChaCha8Rng) -> QuadraticSystem {
    loop {
        let a: [Rational; 12] = std::array::from_fn(|_| {
            if r.gen_bool(0.55) {
                ri(0)
            } else {
                ri(r.gen_range(-2..=2))
            }
        });
        let s = QuadraticSystem::from_coeffs(a);
        if s.validate() == Validity::Ok {
            return s;
        }
    }
}

pub fn random_affine(r: &mut ChaCha8Rng) -> AffineTransform {
    loop {
        let m = [
            [ri(r.gen_range(-3..=3)), ri(r.gen_range(-3..=3))],
            [ri(r.gen_range(-3..=3)), ri(r.gen_range(-3..=3))],
        ];
        let b = [small_rational(r), small_rational(r)];
        let mut t = ri(r.gen_range(1..=3));
        if r.gen_bool(0.5) {
            t = -t;
        }
        if let Ok(g) = AffineTransform::new(m, b, t) {
            return g;
        }
    }
}

pub fn random_linear(r: &mut ChaCha8Rng) -> AffineTransform {
    loop {
        let m = [
            [small_rational(r), small_rational(r)],
            [small_rational(r), small_rational(r)],
        ];
        if let Ok(g) = AffineTransform::linear(m) {
            return g;
        }
    }
}

/// Every representative over its parameter grid.
pub fn representatives(label: ConfigLabel) -> Vec<(Option<Rational>, QuadraticSystem)> {
    let grid = parameter_grid(label);
    if grid.is_empty() {
        return vec![(None, representative(label, &BTreeMap::new()).unwrap())];
    }
    grid.into_iter()
        .map(|g| {
            let s = representative(label, &BTreeMap::from([("g".to_string(), g.clone())])).unwrap();
            (Some(g), s)
        })
        .collect()
}

/// The representative at the first grid value (or the fixed one).
pub fn first_representative(label: ConfigLabel) -> QuadraticSystem {
    representatives(label).remove(0).1
}
