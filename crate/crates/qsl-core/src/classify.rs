//! Configuration labels from comitant conditions.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Signed, Zero};

use crate::comitants::{form_sign, Comitants, Name, SignVerdict};
use crate::invlines::{binary_form_points, Coeffs, LineConfiguration};
use crate::polyring::mpoly::{vars, MPoly};
use crate::polyring::parse::parse_poly;
use crate::polyring::rational::{fmt_rational, Rational};
use crate::system::{apply_affine, xy_vars, AffineTransform, QuadraticSystem, Validity};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ConfigLabel {
    /// Six lines counted with multiplicity, rows 1..=11.
    Config6(u8),
    /// Five lines, rows 1..=30.
    Config5(u8),
    NotInClass,
    Degenerate,
}

impl ConfigLabel {
    pub fn all_configs() -> impl Iterator<Item = ConfigLabel> {
        (1..=11)
            .map(ConfigLabel::Config6)
            .chain((1..=30).map(ConfigLabel::Config5))
    }

    pub fn is_config(self) -> bool {
        matches!(self, ConfigLabel::Config6(_) | ConfigLabel::Config5(_))
    }

    /// Total multiplicity of invariant lines, infinity included.
    pub fn line_count(self) -> Option<u32> {
        match self {
            ConfigLabel::Config6(_) => Some(6),
            ConfigLabel::Config5(_) => Some(5),
            _ => None,
        }
    }

    pub fn gcd_degree(self) -> Option<u32> {
        self.line_count().map(|m| m - 1)
    }

    /// Row name in the tables, e.g. "VI.3" or "V.12".
    pub fn row(self) -> Option<String> {
        match self {
            ConfigLabel::Config6(k) => Some(format!("VI.{k}")),
            ConfigLabel::Config5(k) => Some(format!("V.{k}")),
            _ => None,
        }
    }
}

impl fmt::Display for ConfigLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConfigLabel::Config6(k) => write!(f, "Config6.{k}"),
            ConfigLabel::Config5(k) => write!(f, "Config5.{k}"),
            ConfigLabel::NotInClass => f.write_str("NotInClass"),
            ConfigLabel::Degenerate => f.write_str("Degenerate"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown label '{0}'")]
pub struct LabelParseError(pub String);

impl FromStr for ConfigLabel {
    type Err = LabelParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || LabelParseError(s.to_string());
        match s {
            "NotInClass" => return Ok(ConfigLabel::NotInClass),
            "Degenerate" => return Ok(ConfigLabel::Degenerate),
            _ => {}
        }
        let t = s.trim_start_matches("Config").trim_start_matches(' ');
        let (six, rest) = if let Some(r) = t.strip_prefix("VI.") {
            (true, r)
        } else if let Some(r) = t.strip_prefix("V.") {
            (false, r)
        } else if let Some(r) = t.strip_prefix("6.").or_else(|| t.strip_prefix("6_")) {
            (true, r)
        } else if let Some(r) = t.strip_prefix("5.").or_else(|| t.strip_prefix("5_")) {
            (false, r)
        } else {
            return Err(bad());
        };
        let k: u8 = rest.parse().map_err(|_| bad())?;
        match (six, k) {
            (true, 1..=11) => Ok(ConfigLabel::Config6(k)),
            (false, 1..=30) => Ok(ConfigLabel::Config5(k)),
            _ => Err(bad()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ClassifyError {
    #[error("line at infinity degenerate (S_V family), out of classification scope")]
    ZeroC2,
    #[error("sign of {0} is not determined on this system")]
    Indefinite(Name),
    #[error("tables not mutually exclusive: {0:?}")]
    NotExclusive(Vec<ConfigLabel>),
    #[error("{0}")]
    Constraint(String),
    #[error("label {0} has no representative")]
    NoRepresentative(ConfigLabel),
    #[error("canonicalization needs irrational transform; classification proceeds without it")]
    IrrationalTransform,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Cond {
    Zero(Name),
    NonZero(Name),
    Pos(Name),
    Neg(Name),
}

impl Cond {
    fn name(self) -> Name {
        match self {
            Cond::Zero(n) | Cond::NonZero(n) | Cond::Pos(n) | Cond::Neg(n) => n,
        }
    }
}

impl fmt::Display for Cond {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cond::Zero(n) => write!(f, "{n}=0"),
            Cond::NonZero(n) => write!(f, "{n}!=0"),
            Cond::Pos(n) => write!(f, "{n}>0"),
            Cond::Neg(n) => write!(f, "{n}<0"),
        }
    }
}

macro_rules! conds {
    ($($c:ident $n:ident),* $(,)?) => { &[$(Cond::$c(Name::$n)),*] };
}

type Row = (ConfigLabel, &'static [Cond]);

fn six_rows() -> Vec<Row> {
    use ConfigLabel::Config6 as L;
    vec![
        (L(1), conds![Pos Eta, Pos H1]),
        (L(2), conds![Pos Eta, Neg H1]),
        (L(3), conds![Neg Eta, Neg H1]),
        (L(4), conds![Neg Eta, Pos H1]),
        (L(5), conds![Pos Eta, Zero H1]),
        (L(6), conds![Neg Eta, Zero H1]),
        (L(7), conds![NonZero M, NonZero D, Zero Eta, Zero H, Zero N1, Zero N2]),
        (L(8), conds![NonZero M, NonZero H, Zero Eta, Zero H2, Pos H3]),
        (L(9), conds![NonZero M, NonZero H, Zero Eta, Zero H2, Neg H3]),
        (L(10), conds![NonZero M, Zero Eta, Zero H, Zero D, Zero N1, Zero N2]),
        (L(11), conds![Zero Eta, Zero M, Zero N3, Zero N4]),
    ]
}

fn five_rows() -> Vec<Row> {
    use ConfigLabel::Config5 as L;
    vec![
        (L(1), conds![Pos Eta, Zero B3, Zero Theta, NonZero N, NonZero Mu, NonZero H1]),
        (L(2), conds![Neg Eta, Zero B3, Zero Theta, NonZero N, NonZero Mu, NonZero H1]),
        (L(3), conds![Pos Eta, Zero B2, Zero N, NonZero B3, Pos H1, Zero H4, Pos H5]),
        (L(4), conds![Pos Eta, Zero B2, Zero N, NonZero B3, Zero H4, Neg H5]),
        (L(5), conds![Pos Eta, Zero B2, Zero N, NonZero B3, Neg H1, Zero H4, Pos H5]),
        (L(6), conds![Neg Eta, NonZero B3, Zero B2, Zero N]),
        (L(7), conds![Pos Eta, Zero B3, Zero Theta, NonZero N, Zero Mu, Zero H6]),
        (L(8), conds![Pos Eta, Zero B3, Zero Theta, NonZero N, NonZero Mu, Zero H1]),
        (L(9), conds![Neg Eta, Zero B3, Zero Theta, NonZero N, Zero Mu, Zero H6]),
        (L(10), conds![Neg Eta, Zero B3, Zero Theta, NonZero N, NonZero Mu, Zero H1]),
        (L(11), conds![Zero Eta, NonZero M, Zero B3, Zero Theta, NonZero Mu, NonZero N, NonZero D]),
        (L(12), conds![Pos Eta, Zero B2, Zero N, NonZero B3, Pos H1, Zero H4, Zero H5]),
        (L(13), conds![Zero Eta, NonZero M, Zero B3, Zero N, Zero H, Zero N1, NonZero N2, NonZero D, Pos N5]),
        (L(14), conds![Zero Eta, NonZero M, Zero B3, Zero Theta, NonZero N, NonZero K, Zero Mu, Zero H6]),
        (L(15), conds![Zero Eta, NonZero M, Zero B3, Zero N, Zero H, Zero N1, NonZero N2, NonZero D, Neg N5]),
        (L(16), conds![Pos Eta, Zero B2, Zero N, NonZero B3, Neg H1, Zero H4, Zero H5]),
        (L(17), conds![Zero Eta, NonZero M, Zero B3, Zero N, Zero H, Zero N1, Zero N5, NonZero N2, NonZero D]),
        (L(18), conds![Zero Eta, NonZero M, Zero B3, Zero Theta, NonZero N, Zero Mu, Zero K, Zero H6]),
        (L(19), conds![Zero Eta, NonZero M, Zero B3, Zero Theta, NonZero Mu, NonZero N, Zero D]),
        (L(20), conds![Zero Eta, NonZero M, Zero B3, Zero N, Zero H, Zero D, Zero N1, NonZero N2, Pos N5]),
        (L(21), conds![Zero Eta, NonZero M, Zero B3, Zero N, Zero H, Zero N2, NonZero D, NonZero N1]),
        (L(22), conds![Zero Eta, NonZero M, Zero B2, Zero N, NonZero B3, Zero H2, Pos H3]),
        (L(23), conds![Zero Eta, Zero M, NonZero N, Zero B3, Zero Theta, Zero N6]),
        (L(24), conds![Zero Eta, NonZero M, Zero B3, Zero N, Zero H, Zero D, Zero N1, NonZero N2, Neg N5]),
        (L(25), conds![Zero Eta, NonZero M, Zero B2, Zero N, NonZero B3, Zero H2, Neg H3]),
        (L(26), conds![Zero Eta, Zero M, NonZero N3, Zero B3, Zero N, Zero D1]),
        (L(27), conds![Zero Eta, Zero M, NonZero N4, Zero B3, Zero N, Zero N3, NonZero D1]),
        (L(28), conds![Zero Eta, NonZero M, Zero B3, Zero N, Zero H, Zero D, Zero N2, NonZero N1]),
        (L(29), conds![Zero Eta, NonZero M, Zero B2, Zero N, NonZero B3, Zero H2, Zero H3]),
        (L(30), conds![Zero Eta, Zero M, NonZero N4, Zero B3, Zero N, Zero N3, Zero D1]),
    ]
}

/// Condition list of a table row.
pub fn row_conditions(label: ConfigLabel) -> Option<String> {
    six_rows()
        .into_iter()
        .chain(five_rows())
        .find(|(l, _)| *l == label)
        .map(|(_, cs)| cs.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(", "))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Evidence {
    /// Row the condition belongs to; `None` for the table gates.
    pub row: Option<ConfigLabel>,
    pub condition: String,
    /// "0", "nonzero", a sign, or the constant value.
    pub observed: String,
    pub holds: bool,
}

impl fmt::Display for Evidence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let row = self.row.map(|r| r.to_string()).unwrap_or_else(|| "gate".into());
        write!(
            f,
            "{row}: {} [{}] {}",
            self.condition,
            self.observed,
            if self.holds { "holds" } else { "fails" }
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct EvidenceTrace {
    pub entries: Vec<Evidence>,
}

impl EvidenceTrace {
    /// Gate entries and the conditions of `label`'s row.
    pub fn for_label(&self, label: ConfigLabel) -> Vec<&Evidence> {
        self.entries
            .iter()
            .filter(|e| e.row.is_none() || e.row == Some(label))
            .collect()
    }

    /// Re-evaluates every recorded condition; true when all agree.
    pub fn replay(&self, s: &QuadraticSystem) -> bool {
        let c = Comitants::of(s);
        let mut ev = Evaluator { c: &c, signs: BTreeMap::new() };
        self.entries.iter().all(|e| {
            let parsed = parse_cond(&e.condition);
            match parsed {
                Some(conds) => {
                    let mut ok = true;
                    for cd in conds {
                        ok &= matches!(ev.test(cd), Ok(true));
                    }
                    ok == e.holds
                }
                None => false,
            }
        })
    }
}

fn parse_cond(text: &str) -> Option<Vec<Cond>> {
    text.split(" and ")
        .map(|t| {
            let (name, op) = if let Some(n) = t.strip_suffix("!=0") {
                (n, 0)
            } else if let Some(n) = t.strip_suffix("=0") {
                (n, 1)
            } else if let Some(n) = t.strip_suffix(">0") {
                (n, 2)
            } else if let Some(n) = t.strip_suffix("<0") {
                (n, 3)
            } else {
                return None;
            };
            let n: Name = name.parse().ok()?;
            Some(match op {
                0 => Cond::NonZero(n),
                1 => Cond::Zero(n),
                2 => Cond::Pos(n),
                _ => Cond::Neg(n),
            })
        })
        .collect()
}

struct Evaluator<'a> {
    c: &'a Comitants,
    signs: BTreeMap<&'static str, SignVerdict>,
}

impl Evaluator<'_> {
    fn sign(&mut self, n: Name) -> SignVerdict {
        if let Some(s) = self.signs.get(n.as_str()) {
            return *s;
        }
        let s = form_sign(&self.c.get(n)).unwrap_or(SignVerdict::Indefinite);
        self.signs.insert(n.as_str(), s);
        s
    }

    /// `Err` when a sign is asked of an indefinite form.
    fn test(&mut self, cond: Cond) -> Result<bool, Name> {
        match cond {
            Cond::Zero(n) => Ok(self.c.is_zero(n)),
            Cond::NonZero(n) => Ok(!self.c.is_zero(n)),
            Cond::Pos(n) | Cond::Neg(n) => match self.sign(n) {
                SignVerdict::Indefinite => Err(n),
                SignVerdict::Positive => Ok(matches!(cond, Cond::Pos(_))),
                SignVerdict::Negative => Ok(matches!(cond, Cond::Neg(_))),
                SignVerdict::Zero => Ok(false),
            },
        }
    }

    fn observed(&mut self, n: Name) -> String {
        let v = self.c.get(n);
        if v.is_zero() {
            return "0".into();
        }
        if let Some(k) = v.constant_value() {
            return fmt_rational(&k);
        }
        match self.sign(n) {
            SignVerdict::Positive => "positive".into(),
            SignVerdict::Negative => "negative".into(),
            _ => "nonzero".into(),
        }
    }
}

/// Runs the rows of both tables on `s`.
pub fn classify(s: &QuadraticSystem) -> Result<(ConfigLabel, EvidenceTrace), ClassifyError> {
    let mut trace = EvidenceTrace::default();
    if s.validate() != Validity::Ok {
        trace.entries.push(Evidence {
            row: None,
            condition: "gcd(p,q)=1 and deg=2".into(),
            observed: format!("{:?}", s.validate()),
            holds: false,
        });
        return Ok((ConfigLabel::Degenerate, trace));
    }
    let c = Comitants::of(s);
    if c.is_zero(Name::C2) {
        return Err(ClassifyError::ZeroC2);
    }
    let mut ev = Evaluator { c: &c, signs: BTreeMap::new() };
    let mut gate = |ev: &mut Evaluator, conds: &[Cond]| {
        let holds = conds.iter().all(|&cd| ev.test(cd) == Ok(true));
        let observed = conds
            .iter()
            .map(|cd| format!("{}={}", cd.name(), ev.observed(cd.name())))
            .collect::<Vec<_>>()
            .join(", ");
        trace.entries.push(Evidence {
            row: None,
            condition: conds.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(" and "),
            observed,
            holds,
        });
        holds
    };
    let six_gate = gate(&mut ev, conds![Zero B3, Zero N]);
    let g1 = gate(&mut ev, conds![Zero N, Zero B2]);
    let g2 = gate(&mut ev, conds![Zero Theta, Zero B3]);

    let mut rows = Vec::new();
    if six_gate {
        rows.extend(six_rows());
    }
    if g1 || g2 {
        rows.extend(five_rows());
    }
    let mut matched = Vec::new();
    for (label, conds) in rows {
        let mut pending = None;
        let mut ok = true;
        for &cd in conds {
            let r = ev.test(cd);
            let observed = ev.observed(cd.name());
            let holds = r == Ok(true);
            trace.entries.push(Evidence {
                row: Some(label),
                condition: cd.to_string(),
                observed: if r.is_err() { "indefinite".into() } else { observed },
                holds,
            });
            match r {
                Ok(true) => {}
                Ok(false) => {
                    ok = false;
                    break;
                }
                Err(n) => pending = pending.or(Some(n)),
            }
        }
        if ok {
            if let Some(n) = pending {
                return Err(ClassifyError::Indefinite(n));
            }
            matched.push(label);
        }
    }
    match matched.len() {
        0 => Ok((ConfigLabel::NotInClass, trace)),
        1 => Ok((matched[0], trace)),
        _ => Err(ClassifyError::NotExclusive(matched)),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum ParamRule {
    Fixed,
    /// g(g²−1) ≠ 0
    NotUnit,
    NonZero,
    Any,
    OneOf(&'static [i64]),
}

impl ParamRule {
    fn text(self) -> &'static str {
        match self {
            ParamRule::Fixed => "no parameters",
            ParamRule::NotUnit => "g(g^2-1)!=0",
            ParamRule::NonZero => "g!=0",
            ParamRule::Any => "g real",
            ParamRule::OneOf(&[0, 1]) => "g in {0,1}",
            ParamRule::OneOf(_) => "g in {-1,0,1}",
        }
    }

    fn admits(self, g: &Rational) -> bool {
        match self {
            ParamRule::Fixed => true,
            ParamRule::NotUnit => !g.is_zero() && g.abs() != Rational::one(),
            ParamRule::NonZero => !g.is_zero(),
            ParamRule::Any => true,
            ParamRule::OneOf(v) => v.iter().any(|k| *g == Rational::from_integer((*k).into())),
        }
    }
}

fn rep_table(label: ConfigLabel) -> Option<(&'static str, &'static str, ParamRule)> {
    use ParamRule::*;
    Some(match label {
        ConfigLabel::Config6(k) => {
            let (p, q) = match k {
                1 => ("x^2-1", "y^2-1"),
                2 => ("x^2+1", "y^2+1"),
                3 => ("2*x*y", "y^2-x^2-1"),
                4 => ("2*x*y", "y^2-x^2+1"),
                5 => ("x^2", "y^2"),
                6 => ("2*x*y", "y^2-x^2"),
                7 => ("x^2-1", "2*y"),
                8 => ("1-x^2", "-2*x*y"),
                9 => ("-1-x^2", "-2*x*y"),
                10 => ("x^2", "1"),
                11 => ("x", "y-x^2"),
                _ => return None,
            };
            (p, q, Fixed)
        }
        ConfigLabel::Config5(k) => match k {
            1 => ("(x+1)*(g*x+1)", "(g-1)*x*y+y^2", NotUnit),
            2 => ("g*(x^2-4)", "(g^2-4)+(g^2+4)*x-x^2+g*x*y-y^2", NonZero),
            3 => ("-1+x^2", "g*(y^2-1)", NonZero),
            4 => ("-1+x^2", "g*(1+y^2)", NonZero),
            5 => ("1+x^2", "g*(1+y^2)", NonZero),
            6 => ("1+2*x*y", "g-x^2+y^2", Any),
            7 => ("1+x", "-x*y+y^2", Fixed),
            8 => ("g*x^2", "(g-1)*x*y+y^2", NotUnit),
            9 => ("2*x", "1-x^2-y^2", Fixed),
            10 => ("g*x^2", "-x^2+g*x*y-y^2", NonZero),
            11 => ("x^2+x*y", "y+y^2", Fixed),
            12 => ("-1+x^2", "y^2", Fixed),
            13 => ("g*(x^2-1)", "2*y", NotUnit),
            14 => ("(x+1)*(g*x+1)", "(g-1)*x*y", NotUnit),
            15 => ("g*(x^2+1)", "2*y", NonZero),
            16 => ("1+x^2", "y^2", Fixed),
            17 => ("x^2", "2*y", Fixed),
            18 => ("1+x", "-x*y", Fixed),
            19 => ("x^2+x*y", "y^2", Fixed),
            20 => ("-1+x^2", "1", Fixed),
            21 => ("-1+x^2", "x+2*y", Fixed),
            22 => ("1-x^2", "1-2*x*y", Fixed),
            23 => ("-1+x^2", "-3+y-x^2+x*y", Fixed),
            24 => ("1+x^2", "1", Fixed),
            25 => ("-1-x^2", "1-2*x*y", Fixed),
            26 => ("g-x", "y-x^2", OneOf(&[0, 1])),
            27 => ("1+x", "y-x^2", Fixed),
            28 => ("x^2", "1+x", Fixed),
            29 => ("-x^2", "1-2*x*y", Fixed),
            30 => ("1", "g-x^2", OneOf(&[-1, 0, 1])),
            _ => return None,
        },
        _ => return None,
    })
}

/// Legal values of g on the sample grid for `label`; empty when there is no parameter.
pub fn parameter_grid(label: ConfigLabel) -> Vec<Rational> {
    let Some((_, _, rule)) = rep_table(label) else {
        return vec![];
    };
    match rule {
        ParamRule::Fixed => vec![],
        ParamRule::OneOf(v) => v.iter().map(|k| Rational::from_integer((*k).into())).collect(),
        _ => [(-3, 1), (-2, 1), (-1, 2), (1, 2), (2, 1), (3, 1)]
            .iter()
            .map(|&(n, d)| Rational::new(n.into(), d.into()))
            .filter(|g| rule.admits(g))
            .collect(),
    }
}

/// The representative system text (p, q) with the parameter left as `g`.
pub fn representative_text(label: ConfigLabel) -> Option<(&'static str, &'static str)> {
    rep_table(label).map(|(p, q, _)| (p, q))
}

pub fn representative(
    label: ConfigLabel,
    params: &BTreeMap<String, Rational>,
) -> Result<QuadraticSystem, ClassifyError> {
    let (p, q, rule) = rep_table(label).ok_or(ClassifyError::NoRepresentative(label))?;
    if let Some(k) = params.keys().find(|k| k.as_str() != "g") {
        return Err(ClassifyError::Constraint(format!("unknown parameter '{k}'")));
    }
    let g = match (rule, params.get("g")) {
        (ParamRule::Fixed, Some(_)) => {
            return Err(ClassifyError::Constraint(format!("{label} takes no parameters")))
        }
        (ParamRule::Fixed, None) => Rational::zero(),
        (_, None) => {
            return Err(ClassifyError::Constraint(format!(
                "{label} needs parameter g with {}",
                rule.text()
            )))
        }
        (_, Some(g)) => {
            if !rule.admits(g) {
                return Err(ClassifyError::Constraint(format!(
                    "g={} violates {} for {label}",
                    fmt_rational(g),
                    rule.text()
                )));
            }
            g.clone()
        }
    };
    let v = vars(&["g", "x", "y"]);
    let xy = xy_vars();
    let sp = |t: &str| -> MPoly {
        parse_poly(t, &v)
            .expect("table entry parses")
            .eval_var(0, &g)
            .with_vars(&xy)
    };
    Ok(QuadraticSystem::from_polys(&sp(p), &sp(q)).expect("table entry is quadratic"))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    SI,
    SII,
    SIII,
    SIV,
    SV,
}

impl Family {
    pub fn as_str(self) -> &'static str {
        match self {
            Family::SI => "S_I",
            Family::SII => "S_II",
            Family::SIII => "S_III",
            Family::SIV => "S_IV",
            Family::SV => "S_V",
        }
    }

    /// The canonical cubic in x, y.
    pub fn cubic(self) -> MPoly {
        let t = match self {
            Family::SI => "x*y*(x-y)",
            Family::SII => "x*(x^2+y^2)",
            Family::SIII => "x^2*y",
            Family::SIV => "x^3",
            Family::SV => "0",
        };
        parse_poly(t, &xy_vars()).unwrap()
    }
}

/// Rational linear form (a, b) meaning a·x + b·y vanishing on the point.
fn form_through(pt: &Coeffs) -> Option<[Rational; 2]> {
    let t = pt.exact()?;
    let (a, b) = (t[0].as_rational()?, t[1].as_rational()?);
    // point [a : b : 0] lies on b·x − a·y
    Some([b, -a])
}

/// A real linear map taking C₂ to its canonical cubic, up to a constant.
pub fn canonical_form(s: &QuadraticSystem) -> Result<(Family, AffineTransform), ClassifyError> {
    let c = Comitants::of(s);
    let c2 = c.get(Name::C2);
    if c2.is_zero() {
        return Ok((Family::SV, AffineTransform::identity()));
    }
    let eta = c.get(Name::Eta).constant_value().unwrap();
    let d = binary_form_points(&c2);
    if d.points.iter().any(|(p, _)| p.is_numeric()) {
        return Err(ClassifyError::IrrationalTransform);
    }
    let rat: Vec<([Rational; 2], u32)> = d
        .points
        .iter()
        .filter_map(|(p, m)| form_through(p).map(|f| (f, *m)))
        .collect();
    let rows = |r0: [Rational; 2], r1: [Rational; 2]| {
        AffineTransform::linear([r0, r1]).map_err(|_| ClassifyError::IrrationalTransform)
    };
    let other = |l: &[Rational; 2]| -> [Rational; 2] {
        if l[0].is_zero() {
            [Rational::one(), Rational::zero()]
        } else {
            [Rational::zero(), Rational::one()]
        }
    };
    let (fam, g) = if eta.is_positive() {
        if rat.len() != 3 {
            return Err(ClassifyError::IrrationalTransform);
        }
        let (l1, l2, l3) = (&rat[0].0, &rat[1].0, &rat[2].0);
        // l3 = α·l1 + β·l2
        let det = &l1[0] * &l2[1] - &l1[1] * &l2[0];
        let alpha = (&l3[0] * &l2[1] - &l3[1] * &l2[0]) / &det;
        let beta = (&l1[0] * &l3[1] - &l1[1] * &l3[0]) / &det;
        let r0 = [&alpha * &l1[0], &alpha * &l1[1]];
        let r1 = [-(&beta * &l2[0]), -(&beta * &l2[1])];
        (Family::SI, rows(r0, r1)?)
    } else if eta.is_negative() {
        let l1 = rat.first().ok_or(ClassifyError::IrrationalTransform)?.0.clone();
        let l2 = other(&l1);
        // residual quadratic in the basis (l1, l2)
        let inv = AffineTransform::linear([l1.clone(), l2.clone()]).unwrap().inverse_matrix();
        let xy = xy_vars();
        let lpoly = &MPoly::var_at(&xy, 0).scale(&l1[0]) + &MPoly::var_at(&xy, 1).scale(&l1[1]);
        let rest = c2.exact_div(&lpoly).expect("rational factor divides C2");
        let q = |u: &Rational, v: &Rational| -> Rational {
            rest.eval(&[&inv[0][0] * u + &inv[0][1] * v, &inv[1][0] * u + &inv[1][1] * v])
        };
        let one = Rational::one();
        let zero = Rational::zero();
        let a = q(&one, &zero);
        let cc = q(&zero, &one);
        let b = (q(&one, &one) - &a - &cc) / Rational::from_integer(2.into());
        // a u² + 2b u v + c v² = c (v + b u / c)² + (a − b²/c) u²
        let k = (&a - &b * &b / &cc) / &cc;
        let root = crate::polyring::rational::rational_sqrt(&k)
            .ok_or(ClassifyError::IrrationalTransform)?;
        let r0 = [&root * &l1[0], &root * &l1[1]];
        let r1 = [
            &l2[0] + &b / &cc * &l1[0],
            &l2[1] + &b / &cc * &l1[1],
        ];
        (Family::SII, rows(r0, r1)?)
    } else if !c.is_zero(Name::M) {
        let double = rat.iter().find(|(_, m)| *m == 2).unwrap().0.clone();
        let simple = rat.iter().find(|(_, m)| *m == 1).unwrap().0.clone();
        (Family::SIII, rows(double, simple)?)
    } else {
        let l = rat[0].0.clone();
        let o = other(&l);
        (Family::SIV, rows(l, o)?)
    };
    Ok((fam, g))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConsistencyReport {
    pub expected_gcd_degree: Option<u32>,
    pub gcd_degree: u32,
    pub expected_m_il: Option<u32>,
    pub m_il: u32,
    pub diagnostics: Vec<String>,
}

impl ConsistencyReport {
    pub fn ok(&self) -> bool {
        self.diagnostics.is_empty()
    }
}

pub fn consistency_check(
    _s: &QuadraticSystem,
    label: ConfigLabel,
    cfg: &LineConfiguration,
) -> ConsistencyReport {
    let mut diagnostics = Vec::new();
    let eg = label.gcd_degree();
    let em = label.line_count();
    if let Some(e) = eg {
        if cfg.gcd_degree != e {
            diagnostics.push(format!(
                "{label}: deg gcd(E1,E2) = {} but {e} expected",
                cfg.gcd_degree
            ));
        }
    }
    if let Some(e) = em {
        if cfg.m_il != e {
            diagnostics.push(format!("{label}: M_IL = {} but {e} expected", cfg.m_il));
        }
    }
    if cfg.m_il > 6 {
        diagnostics.push(format!("M_IL = {} exceeds 6", cfg.m_il));
    }
    ConsistencyReport {
        expected_gcd_degree: eg,
        gcd_degree: cfg.gcd_degree,
        expected_m_il: em,
        m_il: cfg.m_il,
        diagnostics,
    }
}

/// C₂ of the image under a canonicalizing map, for checking.
pub fn canonical_c2(s: &QuadraticSystem, g: &AffineTransform) -> MPoly {
    Comitants::of(&apply_affine(s, g)).get(Name::C2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::rational::rq;

    fn sys(p: &str, q: &str) -> QuadraticSystem {
        let v = xy_vars();
        QuadraticSystem::from_polys(&parse_poly(p, &v).unwrap(), &parse_poly(q, &v).unwrap()).unwrap()
    }

    fn g(v: Rational) -> BTreeMap<String, Rational> {
        BTreeMap::from([("g".to_string(), v)])
    }

    #[test]
    fn labels_parse_and_print() {
        for l in ConfigLabel::all_configs() {
            assert_eq!(l.to_string().parse::<ConfigLabel>().unwrap(), l);
            assert_eq!(l.row().unwrap().parse::<ConfigLabel>().unwrap(), l);
        }
        assert_eq!("Config6_3".parse::<ConfigLabel>().unwrap(), ConfigLabel::Config6(3));
        assert!("Config6.12".parse::<ConfigLabel>().is_err());
    }

    #[test]
    fn examples() {
        let (l, t) = classify(&sys("x^2-1", "y^2-1")).unwrap();
        assert_eq!(l, ConfigLabel::Config6(1));
        assert!(t.replay(&sys("x^2-1", "y^2-1")));
        assert_eq!(classify(&sys("1+x", "-x*y+y^2")).unwrap().0, ConfigLabel::Config5(7));
        assert_eq!(classify(&sys("x", "y-x^2")).unwrap().0, ConfigLabel::Config6(11));
        assert_eq!(classify(&sys("x^2*0+1", "x")).unwrap().0, ConfigLabel::Degenerate);
        assert!(matches!(classify(&sys("x^2", "x*y")), Err(_) | Ok((ConfigLabel::Degenerate, _))));
        assert_eq!(classify(&sys("x^2+x+y", "y^2+3*x-1")).unwrap().0, ConfigLabel::NotInClass);
    }

    #[test]
    fn representatives() {
        assert_eq!(
            representative(ConfigLabel::Config5(3), &g(rq(2, 1))).unwrap(),
            sys("-1+x^2", "2*(y^2-1)")
        );
        let e = representative(ConfigLabel::Config5(1), &g(rq(1, 1))).unwrap_err();
        assert!(e.to_string().contains("g(g^2-1)!=0"));
        assert!(representative(ConfigLabel::Config5(30), &g(rq(1, 1))).is_ok());
        assert!(representative(ConfigLabel::Config5(30), &g(rq(2, 1))).is_err());
        assert!(representative(ConfigLabel::Config6(2), &BTreeMap::new()).is_ok());
    }

    #[test]
    fn canonical_forms() {
        for (p, q, fam) in [
            ("x^2-1", "y^2-1", Some(Family::SI)),
            ("2*x*y", "y^2-x^2-1", Some(Family::SII)),
            ("x^2", "1", Some(Family::SIII)),
            ("x", "y-x^2", Some(Family::SIV)),
            ("x^2+3*x*y", "2*x^2-x*y+y^2", None),
            ("x^2+y^2", "x*y-x^2", None),
            ("1+2*x*y+3*x^2", "5-x^2+y^2+x*y", None),
            ("x^2-y^2+x", "x*y-2*y^2", None),
        ] {
            let s = sys(p, q);
            let Ok((f, t)) = canonical_form(&s) else {
                assert!(fam.is_none(), "{p}, {q}");
                continue;
            };
            if let Some(fam) = fam {
                assert_eq!(f, fam);
            }
            let c2 = canonical_c2(&s, &t);
            let k = &c2.leading_coeff() / &f.cubic().leading_coeff();
            assert_eq!(c2, f.cubic().scale(&k), "{p}, {q}");
        }
    }
}
