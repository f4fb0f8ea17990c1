//! Reading systems from expressions or coefficient lists, and printing them back.

use num_traits::{Signed, Zero};
use serde::Deserialize;

use qsl_core::polyring::mpoly::MPoly;
use qsl_core::polyring::parse::parse_poly;
use qsl_core::polyring::rational::{fmt_rational, parse_rational, Rational};
use qsl_core::system::{xy_vars, QuadraticSystem, SystemError, COEFF_NAMES};

use crate::CliError;

/// One input system, as given on the command line or in a batch file.
#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
#[serde(untagged)]
pub enum SystemSource {
    Text { p: String, q: String },
    Coeffs { coeffs: Vec<CoeffEntry> },
}

/// Batch files may write coefficients as numbers or as "n/d" strings.
#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
#[serde(untagged)]
pub enum CoeffEntry {
    Int(i64),
    Text(String),
}

impl CoeffEntry {
    fn to_rational(&self) -> Option<Rational> {
        match self {
            CoeffEntry::Int(n) => Some(Rational::from_integer((*n).into())),
            CoeffEntry::Text(s) => parse_rational(s.trim()),
        }
    }
}

fn parse_side(which: &str, text: &str) -> Result<MPoly, CliError> {
    parse_poly(text, &xy_vars()).map_err(|e| CliError::Parse(format!("{which}: {e}")))
}

/// Expands a source to the twelve coefficients; a11 and b11 are half the printed xy terms.
pub fn parse_system(src: &SystemSource) -> Result<QuadraticSystem, CliError> {
    let s = match src {
        SystemSource::Text { p, q } => {
            let (p, q) = (parse_side("p", p)?, parse_side("q", q)?);
            QuadraticSystem::from_polys(&p, &q).map_err(|e| match e {
                SystemError::DegreeTooHigh => CliError::Parse("degree exceeds 2".into()),
                e => CliError::Parse(e.to_string()),
            })?
        }
        SystemSource::Coeffs { coeffs } => {
            if coeffs.len() != 12 {
                return Err(CliError::Parse(format!(
                    "expected 12 coefficients ({}), got {}",
                    COEFF_NAMES.join(","),
                    coeffs.len()
                )));
            }
            let mut a: [Rational; 12] = std::array::from_fn(|_| Rational::zero());
            for (i, c) in coeffs.iter().enumerate() {
                a[i] = c.to_rational().ok_or_else(|| {
                    CliError::Parse(format!("coefficient {} is not a rational", COEFF_NAMES[i]))
                })?;
            }
            QuadraticSystem::from_coeffs(a)
        }
    };
    if s.a.iter().all(|c| c.is_zero()) {
        return Err(CliError::Parse("zero system".into()));
    }
    Ok(s)
}

/// A comma separated coefficient list.
pub fn coeff_list(text: &str) -> SystemSource {
    SystemSource::Coeffs {
        coeffs: text
            .split(',')
            .map(|t| CoeffEntry::Text(t.trim().to_string()))
            .collect(),
    }
}

/// Terms in increasing degree, e.g. "1 - x^2"; reads back through the parser.
pub fn print_poly(f: &MPoly) -> String {
    if f.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    for (i, (m, c)) in f.terms().enumerate() {
        let neg = c.is_negative();
        let a = c.abs();
        if i == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let mut parts = Vec::new();
        for (k, &e) in m.0.iter().enumerate() {
            match e {
                0 => {}
                1 => parts.push(f.vars()[k].clone()),
                _ => parts.push(format!("{}^{}", f.vars()[k], e)),
            }
        }
        let one = a == Rational::from_integer(1.into());
        if parts.is_empty() {
            out.push_str(&fmt_rational(&a));
        } else if one {
            out.push_str(&parts.join("*"));
        } else {
            out.push_str(&format!("{}*{}", fmt_rational(&a), parts.join("*")));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn text(p: &str, q: &str) -> SystemSource {
        SystemSource::Text {
            p: p.into(),
            q: q.into(),
        }
    }

    #[test]
    fn xy_coefficient_is_halved() {
        let s = parse_system(&text("2*x*y", "y^2 - x^2 - 1")).unwrap();
        assert_eq!(s.a[4], Rational::from_integer(1.into()));
        assert_eq!(s.a[9], Rational::from_integer((-1).into()));
        assert_eq!(s.a[6], Rational::from_integer((-1).into()));
    }

    #[test]
    fn errors() {
        let e = parse_system(&text("x^3", "y")).unwrap_err();
        assert_eq!(e.to_string(), "degree exceeds 2");
        let e = parse_system(&text("2x", "y")).unwrap_err();
        assert!(e.to_string().contains("position 1"), "{e}");
        assert!(parse_system(&text("0", "0")).is_err());
        assert!(parse_system(&coeff_list("1,2,3")).is_err());
    }

    #[test]
    fn printer_reads_back() {
        let s = parse_system(&text("1", "1 - x^2")).unwrap();
        assert_eq!(print_poly(&s.q()), "1 - x^2");
        let f = parse_poly("-3/2*x*y + y^2 - 7", &xy_vars()).unwrap();
        let printed = print_poly(&f);
        assert_eq!(parse_poly(&printed, &xy_vars()).unwrap(), f);
    }
}
