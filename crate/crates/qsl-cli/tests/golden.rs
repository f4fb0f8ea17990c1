use std::collections::BTreeMap;
use std::path::PathBuf;

use qsl_cli::report::Style;
use qsl_cli::{classify_system, print_poly};
use qsl_core::classify::{parameter_grid, representative, ConfigLabel};

fn golden_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

/// Representative at the first grid value, as the CLI would print it.
fn render(label: ConfigLabel) -> String {
    let params: BTreeMap<String, _> = parameter_grid(label)
        .into_iter()
        .take(1)
        .map(|g| ("g".to_string(), g))
        .collect();
    let s = representative(label, &params).unwrap();
    let out = classify_system(&s, Style { color: false }).unwrap();
    assert!(out.failure.is_none(), "{label}");
    let mut json = out.json;
    json["input"] = serde_json::json!({ "p": print_poly(&s.p()), "q": print_poly(&s.q()) });
    format!("{}\n", serde_json::to_string_pretty(&json).unwrap())
}

#[test]
fn representatives_match_golden_files() {
    let update = std::env::var("QSL_UPDATE_GOLDEN").is_ok();
    let mut mismatched = Vec::new();
    for label in ConfigLabel::all_configs() {
        let path = golden_dir().join(format!("{label}.json"));
        let got = render(label);
        if update {
            std::fs::write(&path, &got).unwrap();
            continue;
        }
        let want = std::fs::read_to_string(&path)
            .unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        if got != want {
            mismatched.push(label.to_string());
        }
    }
    assert!(mismatched.is_empty(), "golden mismatch: {mismatched:?}");
}

#[test]
fn golden_files_carry_their_label() {
    for label in ConfigLabel::all_configs() {
        let path = golden_dir().join(format!("{label}.json"));
        let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
        assert_eq!(v["label"], label.to_string());
        assert_eq!(v["M_IL"], label.line_count().unwrap());
        assert_eq!(v["consistency"]["ok"], true);
    }
}
