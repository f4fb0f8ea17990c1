//! JSON and text renderings of pipeline results.

use num_complex::Complex64;
use num_traits::Zero;
use serde_json::{json, Value};

use qsl_core::classify::{ConfigLabel, ConsistencyReport, Evidence, EvidenceTrace};
use qsl_core::comitants::{form_sign, metadata_check, Comitants, Name};
use qsl_core::invlines::{Coeffs, InvariantLine, LineConfiguration};
use qsl_core::polyring::field::Field;
use qsl_core::polyring::quadext::QuadExtScalar;
use qsl_core::polyring::rational::fmt_rational_full;
use qsl_core::system::QuadraticSystem;
use qsl_core::verify::{CrossReport, PerturbationReport};

use crate::source::print_poly;

pub const NUMERIC_RADIUS: f64 = 1e-6;

fn scalar(c: &QuadExtScalar) -> Value {
    json!({ "base": fmt_rational_full(&c.base), "coeff": fmt_rational_full(&c.coeff) })
}

/// Six decimals, matching the radius, so that printing is stable across platforms.
fn decimal(x: f64) -> String {
    let t = format!("{:.6}", x);
    if t.trim_start_matches('-').chars().all(|c| c == '0' || c == '.') {
        "0.000000".into()
    } else {
        t
    }
}

fn complex_text(z: Complex64) -> String {
    let im = decimal(z.im);
    let sign = if im.starts_with('-') { "" } else { "+" };
    format!("{}{sign}{im}i ± {:e}", decimal(z.re), NUMERIC_RADIUS)
}

/// Scales numeric coefficients so that the first nonzero one is 1.
fn normalized_numeric(c: &[Complex64; 3]) -> [Complex64; 3] {
    let lead = c.iter().find(|z| z.norm() > 1e-12).copied().unwrap_or(Complex64::new(1.0, 0.0));
    c.map(|z| z / lead)
}

pub fn coeffs_json(c: &Coeffs) -> (Value, Value, Value, Value, bool) {
    match c {
        Coeffs::Exact(t) => {
            let radicand = t
                .iter()
                .map(|x| if x.coeff.is_zero() { 1.into() } else { x.radicand.clone() })
                .find(|r| *r != 1.into())
                .unwrap_or_else(|| 1.into());
            let rad: Value = i64::try_from(&radicand)
                .map(Value::from)
                .unwrap_or_else(|_| Value::from(radicand.to_string()));
            (scalar(&t[0]), scalar(&t[1]), scalar(&t[2]), rad, false)
        }
        Coeffs::Numeric(z) => {
            let z = normalized_numeric(z);
            (
                complex_text(z[0]).into(),
                complex_text(z[1]).into(),
                complex_text(z[2]).into(),
                Value::Null,
                true,
            )
        }
    }
}

pub fn line_json(l: &InvariantLine) -> Value {
    let (u, v, w, radicand, numeric) = if l.at_infinity {
        let one = QuadExtScalar::from_int(1);
        let zero = one.zero_like();
        (scalar(&zero), scalar(&zero), scalar(&one), Value::from(1), false)
    } else {
        coeffs_json(&l.coeffs)
    };
    json!({
        "u": u, "v": v, "w": w,
        "radicand": radicand,
        "multiplicity": l.multiplicity,
        "real": l.is_real(),
        "at_infinity": l.at_infinity,
        "numeric": numeric,
    })
}

/// Bare line coefficients, for the cross-check lists.
pub fn coeffs_only(c: &Coeffs) -> Value {
    let (u, v, w, radicand, numeric) = coeffs_json(c);
    json!({ "u": u, "v": v, "w": w, "radicand": radicand, "numeric": numeric })
}

pub fn evidence_json(e: &Evidence) -> Value {
    json!({
        "row": e.row.map(|r| r.to_string()),
        "condition": e.condition,
        "observed": e.observed,
        "holds": e.holds,
    })
}

pub fn consistency_json(c: &ConsistencyReport) -> Value {
    json!({
        "expected_gcd_degree": c.expected_gcd_degree,
        "gcd_degree": c.gcd_degree,
        "expected_M_IL": c.expected_m_il,
        "M_IL": c.m_il,
        "diagnostics": c.diagnostics,
        "ok": c.ok(),
    })
}

/// Evidence shown for a verdict: the gates and the matching row, or everything.
pub fn shown_evidence(label: ConfigLabel, trace: &EvidenceTrace) -> Vec<&Evidence> {
    if label.is_config() {
        trace.for_label(label)
    } else {
        trace.entries.iter().collect()
    }
}

pub fn classify_json(
    label: ConfigLabel,
    trace: &EvidenceTrace,
    cfg: &LineConfiguration,
    consistency: Option<&ConsistencyReport>,
) -> Value {
    json!({
        "label": label.to_string(),
        "M_IL": cfg.m_il,
        "N_C": cfg.n_c,
        "N_R": cfg.n_r,
        "lines": cfg.lines.iter().map(line_json).collect::<Vec<_>>(),
        "evidence": shown_evidence(label, trace).into_iter().map(evidence_json).collect::<Vec<_>>(),
        "consistency": consistency.map(consistency_json),
        "warnings": cfg.warnings,
    })
}

pub fn lines_json(cfg: &LineConfiguration, cross: &CrossReport) -> Value {
    json!({
        "M_IL": cfg.m_il,
        "N_C": cfg.n_c,
        "N_R": cfg.n_r,
        "gcd_degree": cfg.gcd_degree,
        "lines": cfg.lines.iter().map(line_json).collect::<Vec<_>>(),
        "singular_points": cfg.singular_annotations.iter().map(|p| json!({
            "line": p.line,
            "x": p.x.to_string(),
            "y": p.y.to_string(),
            "multiplicity": p.multiplicity,
        })).collect::<Vec<_>>(),
        "oracle_match": cross.matched(),
        "only_pipeline": cross.only_pipeline.iter().map(coeffs_only).collect::<Vec<_>>(),
        "only_oracle": cross.only_oracle.iter().map(coeffs_only).collect::<Vec<_>>(),
        "necessity": cross.necessity,
        "warnings": cfg.warnings.iter().chain(&cross.errors).collect::<Vec<_>>(),
    })
}

pub fn oracle_json(lines: &[InvariantLine]) -> Value {
    json!({ "lines": lines.iter().map(line_json).collect::<Vec<_>>() })
}

pub fn comitants_json(s: &QuadraticSystem, check: bool) -> (Value, bool) {
    let c = Comitants::of(s);
    let mut all_ok = true;
    let items: Vec<Value> = Name::ALL
        .iter()
        .map(|&n| {
            let v = c.get(n);
            let m = n.meta();
            let mut item = json!({
                "name": n.as_str(),
                "value": print_poly(&v),
                "deg_a": m.deg_a,
                "deg_xy": m.deg_xy,
                "weight": m.weight,
                "validity": m.validity.as_str(),
                "sign": form_sign(&v).ok().map(|s| s.as_str()),
            });
            if check {
                let r = metadata_check(s, n);
                all_ok &= r.passed();
                item["check"] = json!({
                    "deg_a": r.deg_a, "deg_xy": r.deg_xy, "weight": r.weight, "passed": r.passed(),
                });
            }
            item
        })
        .collect();
    (json!({ "comitants": items }), all_ok)
}

pub fn perturb_json(r: &PerturbationReport) -> Value {
    json!({
        "label": r.label.to_string(),
        "epsilon": fmt_rational_full(&r.epsilon),
        "g": r.g.as_ref().map(fmt_rational_full),
        "expected": r.expected.iter().map(coeffs_only).collect::<Vec<_>>(),
        "found": r.found.iter().map(coeffs_only).collect::<Vec<_>>(),
        "missing": r.missing.iter().map(coeffs_only).collect::<Vec<_>>(),
        "extra": r.extra.iter().map(coeffs_only).collect::<Vec<_>>(),
        "limit_diagnostics": r.limit_diagnostics,
        "ok": r.ok(),
    })
}

pub fn system_json(s: &QuadraticSystem) -> Value {
    json!({
        "p": print_poly(&s.p()),
        "q": print_poly(&s.q()),
        "coeffs": s.a.iter().map(fmt_rational_full).collect::<Vec<_>>(),
    })
}

/// Plain-text styling, ANSI when enabled.
#[derive(Debug, Clone, Copy)]
pub struct Style {
    pub color: bool,
}

impl Style {
    pub fn bold(&self, s: &str) -> String {
        if self.color {
            format!("\x1b[1m{s}\x1b[0m")
        } else {
            s.to_string()
        }
    }

    pub fn verdict(&self, ok: bool) -> String {
        let (t, code) = if ok { ("ok", 32) } else { ("FAILED", 31) };
        if self.color {
            format!("\x1b[{code}m{t}\x1b[0m")
        } else {
            t.to_string()
        }
    }
}

pub fn line_text(l: &InvariantLine) -> String {
    let tag = if l.coeffs.is_numeric() { " numeric" } else { "" };
    let real = if l.is_real() { "real" } else { "complex" };
    format!("{l} [{real}{tag}]")
}

pub fn classify_text(
    st: Style,
    label: ConfigLabel,
    trace: &EvidenceTrace,
    cfg: &LineConfiguration,
    consistency: Option<&ConsistencyReport>,
) -> String {
    let mut out = format!("label: {}\n", st.bold(&label.to_string()));
    out += &format!("M_IL = {}, N_C = {}, N_R = {}\n", cfg.m_il, cfg.n_c, cfg.n_r);
    out += "lines:\n";
    for l in &cfg.lines {
        out += &format!("  {}\n", line_text(l));
    }
    out += "evidence:\n";
    for e in shown_evidence(label, trace) {
        out += &format!("  {e}\n");
    }
    if let Some(c) = consistency {
        out += &format!(
            "consistency: deg gcd = {}, M_IL = {}: {}\n",
            c.gcd_degree,
            c.m_il,
            st.verdict(c.ok())
        );
        for d in &c.diagnostics {
            out += &format!("  {d}\n");
        }
    }
    for w in &cfg.warnings {
        out += &format!("warning: {w}\n");
    }
    out
}
