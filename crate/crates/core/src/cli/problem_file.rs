//! Flat `key = value` problem files.
//!
//! ```text
//! # comment lines are kept as notes
//! id = baltic2011
//! f = x/(x^3+8)
//! n = 4
//! constraint = sum
//! budget = 4
//! domain = (0, 4)
//! direction = le
//! bound = 4/9
//! expect.route = Theorem1
//! expect.T = -8, -5, -2
//! ```

use std::collections::BTreeMap;

use num_rational::BigRational;

use crate::algebra::rational::{parse_q, qi};
use crate::algebra::Polynomial;
use crate::basecurve::{ConstraintFamily, ConstraintSpec};
use crate::certify::Interval;
use crate::expr::Expr;
use crate::jensen::{Direction, Homogeneity, ProblemSpec, ProofCertificate, Route};

/// `line` is `None` for problems with the file as a whole, such as a
/// missing key.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{}{message}", line.map_or(String::new(), |l| format!("line {l}: ")))]
pub struct ProblemFileError {
    pub line: Option<usize>,
    pub message: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Exact,
    Numeric,
    Failure,
}

impl Status {
    pub fn of(route: Route) -> Status {
        match route {
            Route::Failure => Status::Failure,
            Route::NumericEvidenceOnly => Status::Numeric,
            _ => Status::Exact,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Status::Exact => "exact",
            Status::Numeric => "numeric",
            Status::Failure => "failure",
        }
    }
}

/// Values a corpus entry promises.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Expected {
    pub route: Option<Route>,
    pub status: Option<Status>,
    /// Cofactor of the first factorization, ascending coefficients.
    pub t: Option<Polynomial>,
    pub q: Option<Polynomial>,
    /// Coefficients of the first curve.
    pub k: Option<BigRational>,
    pub m: Option<BigRational>,
    pub g: Option<Interval>,
    /// `n f(x0)` in the conclusion.
    pub value: Option<BigRational>,
    pub touch_points: Option<Vec<BigRational>>,
}

impl Expected {
    pub fn is_empty(&self) -> bool {
        *self == Expected::default()
    }

    /// Mismatches between the promise and a certificate, one line each.
    pub fn compare(&self, cert: &ProofCertificate) -> Vec<String> {
        let mut out = Vec::new();
        let mut diff = |what: &str, want: String, got: String| {
            if want != got {
                out.push(format!("{what}: expected {want}, got {got}"));
            }
        };
        let show_poly = |p: Option<&Polynomial>| p.map_or("none".to_string(), |p| format!("[{}]", coeff_list(p)));
        let show_q = |r: Option<&BigRational>| r.map_or("none".to_string(), crate::algebra::rational::format_q);
        if let Some(r) = self.route {
            diff("route", format!("{r:?}"), format!("{:?}", cert.route));
        }
        if let Some(s) = self.status {
            diff("status", s.name().into(), Status::of(cert.route).name().into());
        }
        let factor = cert.factorizations.first();
        if let Some(t) = &self.t {
            diff("T", show_poly(Some(t)), show_poly(factor.map(|f| &f.t)));
        }
        if let Some(q) = &self.q {
            diff("Q", show_poly(Some(q)), show_poly(factor.map(|f| &f.qden)));
        }
        let curve = cert.curves.first();
        if let Some(k) = &self.k {
            diff("k", show_q(Some(k)), show_q(curve.and_then(|c| c.k.as_rational())));
        }
        if let Some(m) = &self.m {
            diff("m", show_q(Some(m)), show_q(curve.and_then(|c| c.m.as_rational())));
        }
        if let Some(g) = &self.g {
            diff("G", g.to_string(), cert.split.as_ref().map_or("none".into(), |s| s.g.to_string()));
        }
        if let Some(v) = &self.value {
            diff("value", show_q(Some(v)), show_q(cert.conclusion.as_ref().map(|c| &c.n_f_x0)));
        }
        if let Some(xs) = &self.touch_points {
            let got = cert.touch_points.as_ref().and_then(|t| t.exact.as_ref());
            diff("touch points", list(xs), got.map_or("none".into(), |g| list(g)));
        }
        out
    }
}

fn list(xs: &[BigRational]) -> String {
    xs.iter().map(crate::algebra::rational::format_q).collect::<Vec<_>>().join(", ")
}

fn coeff_list(p: &Polynomial) -> String {
    list(p.coeffs())
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProblemFile {
    pub spec: ProblemSpec,
    pub expected: Expected,
    /// Region `G` fixed by the file instead of searched for.
    pub split: Option<Interval>,
    /// Comment lines, in order.
    pub notes: Vec<String>,
}

const KEYS: &[&str] = &[
    "id", "f", "n", "constraint", "alpha", "l", "budget", "value", "domain", "direction", "bound", "touch_point",
    "homogeneous", "normalize", "split", "expect.route", "expect.status", "expect.T", "expect.Q", "expect.k",
    "expect.m", "expect.G", "expect.value", "expect.touch_points",
];

fn known(key: &str) -> bool {
    KEYS.contains(&key) || key.strip_prefix('f').is_some_and(|j| j.parse::<usize>().is_ok_and(|j| j >= 1))
}

/// Interval in the usual notation: `(0, 4)`, `[0, inf)`, `(-inf, 1]`.
pub fn parse_interval(s: &str) -> Result<Interval, String> {
    let t = s.trim();
    let bad = || format!("invalid interval `{s}`");
    let lo_open = match t.chars().next() {
        Some('(') => true,
        Some('[') => false,
        _ => return Err(bad()),
    };
    let hi_open = match t.chars().last() {
        Some(')') => true,
        Some(']') => false,
        _ => return Err(bad()),
    };
    let inner = &t[1..t.len() - 1];
    let (a, b) = inner.split_once(',').ok_or_else(bad)?;
    let end = |v: &str, inf: &str| -> Result<Option<BigRational>, String> {
        let v = v.trim();
        if v == inf || (inf == "inf" && v == "+inf") {
            Ok(None)
        } else {
            parse_q(v).map(Some).map_err(|e| e.to_string())
        }
    };
    let lo = end(a, "-inf")?;
    let hi = end(b, "inf")?;
    Interval::new(lo.clone(), hi.clone(), lo_open || lo.is_none(), hi_open || hi.is_none()).map_err(|e| e.to_string())
}

fn parse_list(s: &str) -> Result<Vec<BigRational>, String> {
    s.split(',').map(|v| parse_q(v).map_err(|e| e.to_string())).collect()
}

fn parse_route(s: &str) -> Result<Route, String> {
    serde_json::from_value(serde_json::Value::String(s.trim().to_string())).map_err(|_| format!("unknown route `{s}`"))
}

struct Fields {
    map: BTreeMap<String, (usize, String)>,
}

impl Fields {
    fn get(&self, key: &str) -> Option<(usize, &str)> {
        self.map.get(key).map(|(l, v)| (*l, v.as_str()))
    }

    fn required(&self, key: &str) -> Result<(usize, &str), ProblemFileError> {
        self.get(key).ok_or_else(|| ProblemFileError {
            line: None,
            message: format!("missing key `{key}`"),
        })
    }

    fn parse<T>(&self, key: &str, f: impl Fn(&str) -> Result<T, String>) -> Result<Option<T>, ProblemFileError> {
        match self.get(key) {
            None => Ok(None),
            Some((line, v)) => f(v).map(Some).map_err(|message| ProblemFileError {
                line: Some(line),
                message: format!("{key}: {message}"),
            }),
        }
    }
}

fn expr(s: &str) -> Result<Expr, String> {
    Expr::parse(s).map_err(|e| e.to_string())
}

fn rational(s: &str) -> Result<BigRational, String> {
    parse_q(s).map_err(|e| e.to_string())
}

pub fn parse_problem_file(text: &str) -> Result<ProblemFile, ProblemFileError> {
    let mut map = BTreeMap::new();
    let mut notes = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let t = raw.trim();
        if t.is_empty() {
            continue;
        }
        if let Some(note) = t.strip_prefix('#') {
            notes.push(note.trim().to_string());
            continue;
        }
        let (k, v) = t.split_once('=').ok_or_else(|| ProblemFileError {
            line: Some(line),
            message: format!("expected `key = value`, got `{t}`"),
        })?;
        let (k, v) = (k.trim(), v.trim());
        if !known(k) {
            return Err(ProblemFileError {
                line: Some(line),
                message: format!("unknown key `{k}`"),
            });
        }
        if map.insert(k.to_string(), (line, v.to_string())).is_some() {
            return Err(ProblemFileError {
                line: Some(line),
                message: format!("duplicate key `{k}`"),
            });
        }
    }
    let fields = Fields { map };
    let err = |line: usize, message: String| ProblemFileError {
        line: (line > 0).then_some(line),
        message,
    };

    let id = fields.required("id")?.1.to_string();
    let n = fields
        .parse("n", |v| v.parse::<usize>().map_err(|e| e.to_string()))?
        .ok_or_else(|| err(0, "missing key `n`".into()))?;
    let functions = match fields.get("f") {
        Some(_) => vec![fields.parse("f", expr)?.expect("present")],
        None => {
            let mut fs = Vec::new();
            for j in 1..=n {
                let f = fields
                    .parse(&format!("f{j}"), expr)?
                    .ok_or_else(|| err(0, format!("missing key `f` (or `f1` .. `f{n}`)")))?;
                fs.push(f);
            }
            fs
        }
    };
    if let Some(extra) = fields.map.keys().find(|k| {
        k.strip_prefix('f')
            .and_then(|j| j.parse::<usize>().ok())
            .is_some_and(|j| j > n || fields.get("f").is_some())
    }) {
        return Err(err(fields.map[extra].0, format!("`{extra}` does not fit n = {n} functions")));
    }

    let (cline, family_name) = fields.required("constraint")?;
    let alpha = fields.parse("alpha", rational)?;
    let need_alpha = || alpha.clone().ok_or_else(|| err(cline, format!("constraint `{family_name}` needs `alpha`")));
    let budget = fields.parse("budget", rational)?;
    let need_budget = || budget.clone().ok_or_else(|| err(cline, format!("constraint `{family_name}` needs `budget`")));
    let (family, budget) = match family_name {
        "sum" => (ConstraintFamily::Sum, need_budget()?),
        "power_sum" => (ConstraintFamily::PowerSum { alpha: need_alpha()? }, need_budget()?),
        "product" => (ConstraintFamily::Product, need_budget()?),
        "mean" => {
            let value = fields
                .parse("value", rational)?
                .ok_or_else(|| err(cline, "constraint `mean` needs `value`".into()))?;
            (ConstraintFamily::Mean { alpha: need_alpha()?, value }, budget.unwrap_or_else(|| qi(0)))
        }
        "custom" => {
            let l = fields
                .parse("l", expr)?
                .ok_or_else(|| err(cline, "constraint `custom` needs `l`".into()))?;
            (ConstraintFamily::Custom { l }, need_budget()?)
        }
        "free" => (ConstraintFamily::Free, qi(0)),
        other => return Err(err(cline, format!("unknown constraint family `{other}`"))),
    };
    let constraint = ConstraintSpec::new(family, budget, n).map_err(|e| err(cline, e.to_string()))?;
    let domain = fields
        .parse("domain", parse_interval)?
        .ok_or_else(|| err(0, "missing key `domain`".into()))?;
    let direction = match fields.required("direction")? {
        (_, "ge") => Direction::LowerBound,
        (_, "le") => Direction::UpperBound,
        (line, other) => return Err(err(line, format!("direction must be `ge` or `le`, got `{other}`"))),
    };
    let homogeneous = match fields.parse("homogeneous", |v| v.parse::<i32>().map_err(|e| e.to_string()))? {
        None => None,
        Some(degree) => {
            let b = fields
                .parse("normalize", rational)?
                .ok_or_else(|| err(0, "`homogeneous` needs `normalize` (the sum to assume)".into()))?;
            Some(Homogeneity {
                degree,
                target: ConstraintSpec::sum(b, n),
            })
        }
    };
    let spec = ProblemSpec {
        id,
        functions,
        n,
        constraint,
        domain,
        direction,
        bound: fields.parse("bound", expr)?,
        touch_point: fields.parse("touch_point", rational)?,
        homogeneous,
    };
    spec.validate().map_err(|e| err(0, e.to_string()))?;
    let status = fields.parse("expect.status", |v| match v {
        "exact" => Ok(Status::Exact),
        "numeric" => Ok(Status::Numeric),
        "failure" => Ok(Status::Failure),
        _ => Err(format!("unknown status `{v}`")),
    })?;
    let expected = Expected {
        route: fields.parse("expect.route", parse_route)?,
        status,
        t: fields.parse("expect.T", |v| parse_list(v).map(Polynomial::new))?,
        q: fields.parse("expect.Q", |v| parse_list(v).map(Polynomial::new))?,
        k: fields.parse("expect.k", rational)?,
        m: fields.parse("expect.m", rational)?,
        g: fields.parse("expect.G", parse_interval)?,
        value: fields.parse("expect.value", rational)?,
        touch_points: fields.parse("expect.touch_points", parse_list)?,
    };
    Ok(ProblemFile {
        spec,
        expected,
        split: fields.parse("split", parse_interval)?,
        notes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::q;

    const BALTIC: &str = "\
# four positive numbers summing to 4
id = baltic
f = x/(x^3+8)
n = 4
constraint = sum
budget = 4
domain = (0, 4)
direction = le
bound = 4/9
expect.route = Theorem1
expect.T = -8, -5, -2
";

    #[test]
    fn parses_a_full_entry() {
        let p = parse_problem_file(BALTIC).unwrap();
        assert_eq!(p.spec.n, 4);
        assert_eq!(p.spec.direction, Direction::UpperBound);
        assert_eq!(p.spec.domain, Interval::open(qi(0), qi(4)));
        assert_eq!(p.spec.bound, Some(Expr::constant(q(4, 9))));
        assert_eq!(p.expected.route, Some(Route::Theorem1));
        assert_eq!(p.expected.t, Some(Polynomial::from_ints(&[-8, -5, -2])));
        assert_eq!(p.notes, vec!["four positive numbers summing to 4"]);
    }

    #[test]
    fn interval_notation() {
        assert_eq!(parse_interval("[0, inf)").unwrap(), Interval::at_least(qi(0)));
        assert_eq!(parse_interval("(-inf, inf)").unwrap(), Interval::real_line());
        assert_eq!(parse_interval("(0, 1]").unwrap(), Interval::open_closed(qi(0), qi(1)));
        assert_eq!(parse_interval("[9/10, 1]").unwrap(), Interval::closed(q(9, 10), qi(1)));
        assert!(parse_interval("0, 1").is_err());
        assert!(parse_interval("(2, 1)").is_err());
    }

    #[test]
    fn heterogeneous_functions_by_index() {
        let text = "id = w\nf1 = 1/x\nf2 = 4/x\nn = 2\nconstraint = free\ndomain = (0, inf)\ndirection = ge\nbound = 9/x\nhomogeneous = -1\nnormalize = 3\n";
        let p = parse_problem_file(text).unwrap();
        assert_eq!(p.spec.functions.len(), 2);
        assert_eq!(p.spec.homogeneous.unwrap().target, ConstraintSpec::sum(qi(3), 2));
    }

    #[test]
    fn errors_carry_line_numbers() {
        let e = parse_problem_file("id = a\nbogus = 1\n").unwrap_err();
        assert_eq!(e.line, Some(2));
        let e = parse_problem_file(&BALTIC.replace("direction = le", "direction = up")).unwrap_err();
        assert!(e.message.contains("direction"), "{e}");
        let e = parse_problem_file(&BALTIC.replace("f = x/(x^3+8)", "f = x/(x^3+")).unwrap_err();
        assert_eq!(e.line, Some(3));
        let e = parse_problem_file(&format!("{BALTIC}n = 5\n")).unwrap_err();
        assert!(e.message.contains("duplicate"));
        let e = parse_problem_file(&BALTIC.replace("constraint = sum", "constraint = power_sum")).unwrap_err();
        assert!(e.message.contains("alpha"));
        let e = parse_problem_file(&format!("{BALTIC}f2 = x\n")).unwrap_err();
        assert!(e.message.contains("f2"));
    }
}
