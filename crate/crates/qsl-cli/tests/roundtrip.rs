use proptest::prelude::*;

use qsl_cli::{parse_system, print_poly, SystemSource};

fn term() -> impl Strategy<Value = String> {
    (-9i64..=9, 1i64..=4, 0u32..=2, 0u32..=2).prop_filter_map("degree at most 2", |(n, d, i, j)| {
        if i + j > 2 {
            return None;
        }
        let mut t = if d == 1 { format!("{n}") } else { format!("{n}/{d}") };
        if i > 0 {
            t += &format!("*x^{i}");
        }
        if j > 0 {
            t += &format!("*y^{j}");
        }
        Some(t)
    })
}

fn expr() -> impl Strategy<Value = String> {
    prop::collection::vec(term(), 1..6).prop_map(|ts| ts.join(" + "))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn parse_print_parse_is_stable(p in expr(), q in expr()) {
        let src = SystemSource::Text { p, q };
        let Ok(s) = parse_system(&src) else { return Ok(()) };
        let printed = SystemSource::Text { p: print_poly(&s.p()), q: print_poly(&s.q()) };
        let again = parse_system(&printed).unwrap();
        prop_assert_eq!(&again, &s);
        prop_assert_eq!(print_poly(&again.p()), print_poly(&s.p()));
    }
}
