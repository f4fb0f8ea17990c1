mod common;

use std::cell::Cell;
use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use num_traits::{One, Signed, Zero};

use qsl_core::classify::{classify, parameter_grid, ConfigLabel};
use qsl_core::comitants::{weight_defect, Comitants, Name};
use qsl_core::invlines::{divisor_dcz, extract_lines, gcd_h, DczType};
use qsl_core::polyring::mpoly::vars;
use qsl_core::polyring::ops::{gcd, resultant_formal, transvectant};
use qsl_core::polyring::parse::parse_poly;
use qsl_core::polyring::rational::{rq, Rational};
use qsl_core::polyring::MPoly;
use qsl_core::system::{apply_affine, PolySystem, QuadraticSystem};
use qsl_core::verify::{cross_validate, necessity_failures, oracle_lines, perturbation_families,
    perturbation_check};

use common::*;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(failures: &[String], summary: String) -> Outcome {
    let mut detail = summary;
    if !failures.is_empty() {
        let shown: Vec<&str> = failures.iter().take(8).map(|s| s.as_str()).collect();
        detail = format!("{detail}; {} failure(s): {}", failures.len(), shown.join(" | "));
    }
    Outcome {
        pass: failures.is_empty(),
        detail,
    }
}

thread_local! {
    static MAX_MIL: Cell<u32> = const { Cell::new(0) };
    static MIL_SEEN: Cell<usize> = const { Cell::new(0) };
}

/// Records M_IL for the maximality check.
fn note_mil(s: &QuadraticSystem) {
    if let Ok(cfg) = extract_lines(s) {
        MAX_MIL.with(|m| m.set(m.get().max(cfg.m_il)));
        MIL_SEEN.with(|n| n.set(n.get() + 1));
    }
}

fn golden(six: bool) -> Outcome {
    let mut fails = Vec::new();
    let mut count = 0;
    let mut slowest = Duration::ZERO;
    for label in ConfigLabel::all_configs().filter(|l| matches!(l, ConfigLabel::Config6(_)) == six) {
        let reps = representatives(label);
        if !six && !parameter_grid(label).is_empty() && reps.len() < 4 {
            // rows whose parameter is restricted to a finite set use all of it
            let allowed = matches!(label, ConfigLabel::Config5(26) | ConfigLabel::Config5(30));
            if !allowed {
                fails.push(format!("{label}: grid has {} values", reps.len()));
            }
        }
        for (_, s) in reps {
            let t = Instant::now();
            match classify(&s) {
                Ok((got, _)) if got == label => {}
                Ok((got, _)) => fails.push(format!("{label}: {s} -> {got}")),
                Err(e) => fails.push(format!("{label}: {s}: {e}")),
            }
            let dt = t.elapsed();
            slowest = slowest.max(dt);
            if six && dt > Duration::from_secs(1) {
                fails.push(format!("{label}: {dt:?}"));
            }
            note_mil(&s);
            count += 1;
        }
    }
    outcome(&fails, format!("{count} systems, slowest {slowest:?}"))
}

fn family(params: &[&str], p: &str, q: &str) -> PolySystem {
    let mut names = params.to_vec();
    names.extend(["x", "y"]);
    let v = vars(&names);
    PolySystem::new(parse_poly(p, &v).unwrap(), parse_poly(q, &v).unwrap())
}

fn calibration() -> Outcome {
    let cases: [(&str, &[&str], &str, &str, Name, &str); 9] = [
        ("H1 on x'=l+x^2, y'=l+y^2", &["l"], "l + x^2", "l + y^2", Name::H1, "-13824*l"),
        ("H1 on x'=2xy, y'=l-x^2+y^2", &["l"], "2*x*y", "l - x^2 + y^2", Name::H1, "9216*l"),
        ("H2 on x'=k+cx-x^2, y'=-2xy", &["k", "c"], "k + c*x - x^2", "-2*x*y", Name::H2, "16*c*x^2"),
        ("H3 on x'=k+cx-x^2, y'=-2xy", &["k", "c"], "k + c*x - x^2", "-2*x*y", Name::H3, "32*k*x^2"),
        ("N1 on x'=k+x^2, y'=ex+2y", &["k", "e"], "k + x^2", "e*x + 2*y", Name::N1, "8*e*x^4"),
        ("N2 on x'=k+x^2, y'=ex+2y", &["k", "e"], "k + x^2", "e*x + 2*y", Name::N2, "16*(k+1)*x"),
        ("N5 on x'=k+x^2, y'=2y", &["k"], "k + x^2", "2*y", Name::N5, "-64*k*x^2"),
        ("N3 on x'=k+cx, y'=l+fy-x^2", &["k", "c", "l", "f"], "k + c*x", "l + f*y - x^2", Name::N3, "3*(c-f)*x^3"),
        ("N6 on x'=-f^2+x^2, y'=l+fy-x^2+xy", &["l", "f"], "-f^2 + x^2", "l + f*y - x^2 + x*y", Name::N6,
            "8*(l+3*f^2)*x^3"),
    ];
    let mut fails = Vec::new();
    let mut run = |what: &str, sys: &PolySystem, name: Name, expected: &str| {
        let got = Comitants::new(sys).get(name);
        if got != parse_poly(expected, sys.vars()).unwrap() {
            fails.push(format!("{what}: got {got}, expected {expected}"));
        }
    };
    for (what, params, p, q, name, expected) in cases {
        run(what, &family(params, p, q), name, expected);
    }
    let s1 = family(
        &["k", "c", "d", "g", "l"],
        "k + c*x + d*y + g*x^2",
        "l + (g-1)*x*y + y^2",
    );
    run("mu on x'=k+cx+dy+gx^2, y'=l+(g-1)xy+y^2", &s1, Name::Mu, "32*g^2");
    outcome(&fails, "10 family identities".into())
}

fn b1_identity() -> Outcome {
    let mut r = rng(4);
    let mut fails = Vec::new();
    let scale = -(Rational::one() / Rational::from_integer((512 * 6561).into()));
    for i in 0..50 {
        let s = random_system(&mut r);
        let c = Comitants::of(&s);
        let (c2, d) = (c.get(Name::C2), c.get(Name::D));
        let res = resultant_formal(&c2, &d, 0, 3, 3);
        let y = MPoly::var_at(c2.vars(), 1);
        let lhs = res.exact_div(&y.pow(9));
        let rhs = transvectant(&c.get(Name::B2), &c.get(Name::B3), 4).scale(&scale);
        if lhs.as_ref() != Some(&rhs) {
            fails.push(format!("system {i}: {s}"));
        }
    }
    outcome(&fails, "50 random systems".into())
}

fn gcd_law() -> Outcome {
    let mut fails = Vec::new();
    let mut count = 0;
    for label in ConfigLabel::all_configs() {
        let want = label.gcd_degree().unwrap();
        for (_, s) in representatives(label) {
            match gcd_h(&s) {
                Ok(h) if h.total_degree() == want => {}
                Ok(h) => fails.push(format!("{label}: deg {} for {s}", h.total_degree())),
                Err(e) => fails.push(format!("{label}: {e}")),
            }
            count += 1;
        }
    }
    outcome(&fails, format!("{count} representatives"))
}

fn oracle_equivalence() -> Outcome {
    let mut fails = Vec::new();
    let mut check = |what: String, s: &QuadraticSystem| {
        let rep = cross_validate(s);
        if !rep.matched() {
            fails.push(format!(
                "{what}: pipeline-only {:?}, oracle-only {:?}",
                rep.only_pipeline, rep.only_oracle
            ));
        } else if !rep.ok() {
            fails.push(format!("{what}: {:?} {:?}", rep.necessity, rep.errors));
        }
        note_mil(s);
    };
    let labels: Vec<ConfigLabel> = ConfigLabel::all_configs().collect();
    for &label in &labels {
        check(label.to_string(), &first_representative(label));
    }
    let mut r = rng(6);
    for i in 0..40 {
        let label = labels[i % labels.len()];
        let g = random_affine(&mut r);
        let s = apply_affine(&first_representative(label), &g);
        check(format!("image {i} of {label}"), &s);
    }
    outcome(&fails, "41 representatives and 40 affine images".into())
}

fn perturbations() -> Outcome {
    let mut fails = Vec::new();
    let mut count = 0;
    for fam in perturbation_families() {
        let uses_g = fam.p.contains('g') || fam.q.contains('g')
            || fam.lines.iter().any(|l| l.contains('g'));
        let grid = parameter_grid(fam.label);
        let params: Vec<BTreeMap<String, Rational>> = if uses_g && !grid.is_empty() {
            grid.into_iter()
                .map(|g| BTreeMap::from([("g".to_string(), g)]))
                .collect()
        } else {
            vec![BTreeMap::new()]
        };
        let mut row_fail = None;
        for p in &params {
            for eps in [rq(1, 7), rq(1, 9)] {
                count += 1;
                match perturbation_check(fam.label, p, &eps) {
                    Ok(rep) if rep.ok() => {}
                    Ok(rep) => {
                        row_fail.get_or_insert(format!(
                            "{} (g={:?}, e={}): missing {}, extra {}, limit {:?}",
                            fam.label,
                            p.get("g").map(|g| g.to_string()),
                            eps,
                            rep.missing.len(),
                            rep.extra.len(),
                            rep.limit_diagnostics
                        ));
                    }
                    Err(e) => {
                        row_fail.get_or_insert(format!("{}: {e}", fam.label));
                    }
                }
            }
        }
        fails.extend(row_fail);
    }
    outcome(&fails, format!("{count} instances over {} rows", perturbation_families().len()))
}

fn affine_invariance() -> Outcome {
    let mut r = rng(8);
    let mut fails = Vec::new();
    let mut count = 0;
    for label in ConfigLabel::all_configs() {
        let s = first_representative(label);
        for _ in 0..20 {
            let g = random_affine(&mut r);
            let img = apply_affine(&s, &g);
            match classify(&img) {
                Ok((got, _)) if got == label => {}
                Ok((got, _)) => fails.push(format!("{label}: {img} -> {got}")),
                Err(e) => fails.push(format!("{label}: {img}: {e}")),
            }
            count += 1;
        }
    }
    outcome(&fails, format!("{count} images"))
}

fn weight_law() -> Outcome {
    let mut r = rng(9);
    let mut fails = Vec::new();
    let mut count = 0;
    let s = random_system(&mut r).to_poly_system();
    for &name in Name::ALL.iter().filter(|n| n.in_table()) {
        for _ in 0..3 {
            let g = random_linear(&mut r);
            if !weight_defect(&s, name, name.meta().weight, &g).is_zero() {
                fails.push(format!("{name} under {:?}", g.m));
            }
            count += 1;
        }
    }
    outcome(&fails, format!("{count} comitant/map pairs"))
}

/// Random systems for the structural suites: dense, sparse and images of representatives.
fn structural_sample() -> Vec<QuadraticSystem> {
    let mut r = rng(10);
    let labels: Vec<ConfigLabel> = ConfigLabel::all_configs().collect();
    let mut out = Vec::new();
    for _ in 0..60 {
        out.push(random_system(&mut r));
    }
    for _ in 0..100 {
        out.push(sparse_system(&mut r));
    }
    for i in 0..60 {
        let g = random_affine(&mut r);
        out.push(apply_affine(&first_representative(labels[i % labels.len()]), &g));
    }
    out
}

fn binary_degree(f: &MPoly, g: &MPoly) -> u32 {
    match (f.is_zero(), g.is_zero()) {
        (true, true) => u32::MAX,
        (true, false) => g.total_degree(),
        (false, true) => f.total_degree(),
        _ => gcd(f, g).total_degree(),
    }
}

fn structural() -> Outcome {
    let sample = structural_sample();
    let mut fails = Vec::new();
    let mut strata = [[0usize; 4]; 2];
    for (i, s) in sample.iter().enumerate() {
        let c = Comitants::of(s);
        // gcd(C2, D) against B1, B2, B3
        let d = binary_degree(&c.get(Name::C2), &c.get(Name::D)).min(3);
        let (b1, b2, b3) = (c.is_zero(Name::B1), c.is_zero(Name::B2), c.is_zero(Name::B3));
        let expect = if b3 {
            3
        } else if b2 {
            2
        } else if b1 {
            1
        } else {
            0
        };
        strata[0][d as usize] += 1;
        if d != expect {
            fails.push(format!("C2/D gcd degree {d} vs B-chain {expect} on system {i}: {s}"));
        }
        // gcd(p2, q2) against mu, K
        let p2 = s.p().part_of_degree(&[0, 1], 2);
        let q2 = s.q().part_of_degree(&[0, 1], 2);
        let k = binary_degree(&p2, &q2).min(2);
        let expect = if c.is_zero(Name::K) {
            2
        } else if c.is_zero(Name::Mu) {
            1
        } else {
            0
        };
        strata[1][k as usize] += 1;
        if k != expect {
            fails.push(format!("p2/q2 gcd degree {k} vs mu/K {expect} on system {i}: {s}"));
        }
        // parallel lines and direction count on the oracle output
        let lines: Vec<_> = oracle_lines(s).into_iter().map(|l| l.coeffs).collect();
        for f in necessity_failures(s, &lines) {
            fails.push(format!("system {i}: {f}"));
        }
        // divisor type against eta, M, C2
        let (_, ty) = divisor_dcz(s);
        let eta = c.get(Name::Eta).constant_value().unwrap_or_else(Rational::zero);
        let want = if c.is_zero(Name::C2) {
            DczType::Undefined
        } else if eta.is_positive() {
            DczType::ThreeReal
        } else if eta.is_negative() {
            DczType::OneRealTwoComplex
        } else if !c.is_zero(Name::M) {
            DczType::DoublePlusSimple
        } else {
            DczType::Triple
        };
        if ty != want {
            fails.push(format!("divisor {} vs comitants {} on system {i}", ty.as_str(), want.as_str()));
        }
        note_mil(s);
    }
    outcome(
        &fails,
        format!(
            "{} systems; gcd(C2,D) degrees {:?}, gcd(p2,q2) degrees {:?}",
            sample.len(),
            strata[0],
            &strata[1][..3]
        ),
    )
}

fn no_line_systems() -> Outcome {
    let mut r = rng(12);
    let mut fails = Vec::new();
    let mut n = 0;
    let mut tries = 0;
    while n < 50 && tries < 500 {
        tries += 1;
        let s = random_system(&mut r);
        let rep = cross_validate(&s);
        if !rep.oracle.is_empty() {
            continue;
        }
        n += 1;
        if !rep.pipeline.is_empty() || !rep.ok() {
            fails.push(format!("{s}: pipeline {:?}", rep.pipeline));
        }
        note_mil(&s);
    }
    if n < 50 {
        fails.push(format!("only {n} line-free systems found"));
    }
    outcome(&fails, format!("{n} line-free random systems"))
}

fn main() {
    let start = Instant::now();
    let mut all_pass = true;
    let mut report = |n: &str, what: &str, o: Outcome| {
        all_pass &= o.pass;
        let verdict = if o.pass { "PASS" } else { "FAIL" };
        println!("criterion {n} [{verdict}] {what}: {}", o.detail);
    };
    report("1", "six-line representatives", golden(true));
    report("2", "five-line representatives over the grid", golden(false));
    report("3", "comitant calibration", calibration());
    report("4", "resultant form of B1", b1_identity());
    report("5", "gcd degree law", gcd_law());
    report("6", "pipeline against oracle", oracle_equivalence());
    report("7", "perturbation families", perturbations());
    report("8", "affine invariance of labels", affine_invariance());
    report("9", "weight law", weight_law());
    report("10", "structural lemmas", structural());
    report("10b", "line-free systems agree", no_line_systems());
    let max = MAX_MIL.with(|m| m.get());
    let seen = MIL_SEEN.with(|m| m.get());
    let fails = if max > 6 {
        vec![format!("M_IL = {max}")]
    } else {
        vec![]
    };
    report("11", "maximality", outcome(&fails, format!("max M_IL {max} over {seen} systems")));
    let total = start.elapsed();
    let budget = Duration::from_secs(300);
    println!("total time {total:?} (budget {budget:?})");
    if total > budget || !all_pass {
        std::process::exit(1);
    }
}

