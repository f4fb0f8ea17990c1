use std::collections::BTreeMap;

use qsl_core::classify::{classify, consistency_check, parameter_grid, representative, ConfigLabel};
use qsl_core::invlines::extract_lines;
use qsl_core::polyring::rational::Rational;
use qsl_core::system::QuadraticSystem;

fn samples(label: ConfigLabel) -> Vec<QuadraticSystem> {
    let grid = parameter_grid(label);
    if grid.is_empty() {
        return vec![representative(label, &BTreeMap::new()).unwrap()];
    }
    grid.into_iter()
        .map(|g| representative(label, &BTreeMap::from([("g".to_string(), g)])).unwrap())
        .collect()
}

#[test]
fn every_row_round_trips() {
    for label in ConfigLabel::all_configs() {
        for s in samples(label) {
            let (got, trace) = classify(&s).unwrap_or_else(|e| panic!("{label}: {e}"));
            assert_eq!(got, label, "{s}");
            assert!(trace.replay(&s));
        }
    }
}

#[test]
fn line_counts_match_labels() {
    for label in ConfigLabel::all_configs() {
        for s in samples(label) {
            let cfg = extract_lines(&s).unwrap();
            let r = consistency_check(&s, label, &cfg);
            assert!(r.ok(), "{s}: {:?} {:?}", r.diagnostics, cfg.warnings);
            assert!(cfg.warnings.is_empty(), "{s}: {:?}", cfg.warnings);
        }
    }
}

#[test]
fn grid_sizes() {
    let g = parameter_grid(ConfigLabel::Config5(1));
    assert_eq!(g.len(), 6);
    assert!(!g.contains(&Rational::from_integer(1.into())));
    assert_eq!(parameter_grid(ConfigLabel::Config5(30)).len(), 3);
    assert!(parameter_grid(ConfigLabel::Config6(1)).is_empty());
}
