use proptest::prelude::*;

use qsl_core::comitants::{Comitants, Name};
use qsl_core::polyring::lines::{conj_line, line_is_rational, pair_product, rational_line_poly};
use qsl_core::polyring::mpoly::{vars, MPoly, Vars};
use qsl_core::polyring::ops::{discriminant_binary, gcd, resultant, transvectant};
use qsl_core::polyring::parse::parse_poly;
use qsl_core::polyring::rational::{ri, Rational};
use qsl_core::polyring::{factor_into_lines, UPoly};
use qsl_core::system::{apply_affine, AffineTransform, QuadraticSystem};
use qsl_core::verify::cross_validate;

fn xy() -> Vars {
    vars(&["x", "y"])
}

fn xyz() -> Vars {
    vars(&["X", "Y", "Z"])
}

fn binary_form(v: &Vars, cs: &[i64]) -> MPoly {
    let d = cs.len() as u32 - 1;
    MPoly::from_terms(
        v,
        cs.iter()
            .enumerate()
            .map(|(i, &c)| (vec![i as u32, d - i as u32], ri(c))),
    )
}

fn dense_xy(cs: &[i64]) -> MPoly {
    // coefficients of 1, x, y, x^2, xy, y^2
    let e = [[0, 0], [1, 0], [0, 1], [2, 0], [1, 1], [0, 2]];
    MPoly::from_terms(&xy(), cs.iter().zip(e).map(|(&c, e)| (e.to_vec(), ri(c))))
}

fn linear_form(c: &[i64]) -> MPoly {
    let v = xyz();
    let mut p = MPoly::zero(&v);
    for (i, &k) in c.iter().enumerate() {
        p = &p + &MPoly::var_at(&v, i).scale(&ri(k));
    }
    p
}

fn coeffs(n: usize) -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-4i64..=4, n)
}

fn line() -> impl Strategy<Value = Vec<i64>> {
    coeffs(3).prop_filter("nonzero line", |c| c.iter().any(|&k| k != 0))
}

fn system() -> impl Strategy<Value = QuadraticSystem> {
    prop::collection::vec(-3i64..=3, 12)
        .prop_map(|a| QuadraticSystem::from_ints(a.try_into().unwrap()))
        .prop_filter("quadratic, nondegenerate", |s| {
            s.validate() == qsl_core::system::Validity::Ok
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn transvectant_antisymmetry(a in coeffs(4), b in coeffs(3), k in 0u32..=3) {
        let f = binary_form(&xy(), &a);
        let g = binary_form(&xy(), &b);
        let lhs = transvectant(&f, &g, k);
        let mut rhs = transvectant(&g, &f, k);
        if k % 2 == 1 {
            rhs = -rhs;
        }
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn resultant_vanishes_iff_common_factor(a in coeffs(3), b in coeffs(3), c in coeffs(2), share in any::<bool>()) {
        let v = vars(&["x"]);
        let poly = |cs: &[i64]| MPoly::from_terms(&v, cs.iter().enumerate().map(|(i, &k)| (vec![i as u32], ri(k))));
        let (mut f, mut g) = (poly(&a), poly(&b));
        let h = poly(&c);
        if share {
            f = &f * &h;
            g = &g * &h;
        }
        prop_assume!(f.degree_in(0) > 0 && g.degree_in(0) > 0);
        let r = resultant(&f, &g, 0).unwrap();
        prop_assert_eq!(r.is_zero(), gcd(&f, &g).degree_in(0) > 0);
    }

    #[test]
    fn gcd_is_multiplicative(a in coeffs(6), b in coeffs(6), c in coeffs(6)) {
        let (f, g, h) = (dense_xy(&a), dense_xy(&b), dense_xy(&c));
        prop_assume!(!h.is_zero() && !(f.is_zero() && g.is_zero()));
        let lhs = gcd(&(&f * &h), &(&g * &h));
        let rhs = (&gcd(&f, &g) * &h).normalize();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn cubic_discriminant_sign(a in coeffs(4)) {
        prop_assume!(a[3] != 0);
        let f = binary_form(&xy(), &a);
        let disc = discriminant_binary(&f).unwrap().constant_value().unwrap();
        let u = UPoly::from_rationals(a.iter().map(|&k| ri(k)).collect());
        let sq = u.squarefree();
        let distinct: usize = sq.iter().map(|(h, _)| h.degree().unwrap()).sum();
        let real = sq.iter().map(|(h, _)| h.count_real_roots()).sum::<usize>();
        if disc > ri(0) {
            prop_assert_eq!(real, 3);
        } else if disc < ri(0) {
            prop_assert_eq!(real, 1);
            prop_assert_eq!(distinct, 3);
        } else {
            prop_assert!(distinct < 3);
        }
    }

    #[test]
    fn lines_recompose(ls in prop::collection::vec((line(), 1u32..=2), 1..4), pair in 0u8..3) {
        let v = xyz();
        let mut h = MPoly::one(&v);
        for (l, e) in &ls {
            h = &h * &linear_form(l).pow(*e);
        }
        // an extra conic: a pair over Q(sqrt 2), a pair over Q(i), or nothing
        match pair {
            0 => h = &h * &parse_poly("X^2 - 2*Y^2", &v).unwrap(),
            1 => h = &h * &parse_poly("X^2 + Y^2 + Z^2", &v).unwrap(),
            _ => {}
        }
        let fact = factor_into_lines(&h);
        let mut back = fact.residue.scale(&fact.unit);
        let mut used: Vec<[qsl_core::polyring::QuadExtScalar; 3]> = Vec::new();
        for lf in &fact.lines {
            if line_is_rational(&lf.line) {
                back = &back * &rational_line_poly(&lf.line, &v).pow(lf.exponent);
            } else if !used.contains(&conj_line(&lf.line)) {
                back = &back * &pair_product(&lf.line, &v).pow(lf.exponent);
                used.push(lf.line.clone());
            }
        }
        prop_assert_eq!(back, h);
    }

    #[test]
    fn print_parse_round_trip(a in coeffs(6)) {
        let f = dense_xy(&a);
        let printed = f.to_string();
        let g = parse_poly(&printed, &xy()).unwrap();
        prop_assert_eq!(g.to_string(), printed);
        prop_assert_eq!(g, f);
    }

    #[test]
    fn c2_and_d_are_translation_invariant(s in system(), bx in -3i64..=3, by in -3i64..=3) {
        let t = AffineTransform::translation(ri(bx), ri(by));
        let img = apply_affine(&s, &t);
        let (a, b) = (Comitants::of(&s), Comitants::of(&img));
        for n in [Name::C2, Name::D, Name::H, Name::K, Name::N, Name::B3, Name::Eta] {
            prop_assert_eq!(a.get(n), b.get(n), "{}", n);
        }
    }

    #[test]
    fn time_rescaling_scales_comitants(s in system(), k in 1i64..=3) {
        let t = ri(k);
        let scaled = s.scaled(&t);
        let (a, b) = (Comitants::of(&s), Comitants::of(&scaled));
        for n in [Name::C2, Name::D, Name::Eta, Name::B3] {
            let mut f = Rational::from_integer(1.into());
            for _ in 0..n.meta().deg_a {
                f *= &t;
            }
            prop_assert_eq!(b.get(n), a.get(n).scale(&f), "{}", n);
        }
    }

    #[test]
    fn pipeline_matches_oracle(s in system()) {
        let rep = cross_validate(&s);
        prop_assert!(rep.ok(), "{}: {:?}", s, rep);
        prop_assert!(rep.pipeline.len() <= 5);
    }
}
