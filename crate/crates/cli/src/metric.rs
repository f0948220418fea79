//! `gaussgate metric NAME key=value ...`

use std::collections::BTreeMap;
use std::fmt;

use gaussgate::bounds::{
    coherent_loss_fidelity, d1_bound, db_to_r, displacement_fidelity, f_sine, g_angle_bound, r_to_db,
    squeezer_tms_fidelity, squeezer_tms_sine, squeezer_zvac_fidelity, sum_sine, sum_tms_fidelity, sum_zvac_fidelity,
    tensor_disp_allocation, BoundKind, BoundMethod, SUM_RA,
};
use gaussgate::gates::unit_gain_reflectivity;
use gaussgate::sdp::{d2_solution, EcdConfig};
use num_complex::Complex64;

use crate::error::{CliError, CliResult};
use crate::fmt::fmt_g;

/// Queries with their parameter names; a value after `=` is the default.
pub const QUERIES: &[(&str, &[&str], &str)] = &[
    ("f_sine", &["eta", "E"], "energy-constrained sine distance between D^alpha and its lossy approximation"),
    ("displacement_fidelity", &["eta", "E"], "fidelity on the optimal input of energy E"),
    ("d1", &["eta", "E"], "trace distance on the optimal input (lower bound)"),
    ("d2", &["eta", "E", "M=6"], "truncated energy-constrained diamond distance from the SDP (lower bound)"),
    ("coherent_loss_fidelity", &["delta", "eta"], "fidelity of |delta> with its lossy image"),
    ("tensor_disp", &["etas", "E"], "sine-distance bound for a tensor product of displacements, etas comma separated"),
    ("g_angle", &["theta=0.7853981633974483", "sigma", "E"], "upper bound for the beamsplitter angle mixture"),
    ("squeezer_sine", &["r", "rE", "N"], "squeezer sine distance on a two-mode squeezed vacuum"),
    ("squeezer_fidelity", &["r", "rE", "N"], "squeezer fidelity on a two-mode squeezed vacuum"),
    ("squeezer_zvac_fidelity", &["z", "r", "rE"], "squeezer fidelity on a squeezed vacuum |z>"),
    ("sum_sine", &["rB", "N"], "SUM sine distance at unit gain with rA = 1.726"),
    ("sum_fidelity", &["N", "R=unit", "rA", "rB"], "SUM fidelity on two two-mode squeezed vacua"),
    ("sum_zvac_fidelity", &["z", "R=unit", "rA", "rB"], "SUM fidelity on |z>|z>"),
    ("db_to_r", &["db"], "squeezing parameter from decibels"),
    ("r_to_db", &["r"], "decibels from squeezing parameter"),
];

#[derive(Debug, Clone, PartialEq)]
pub struct MetricValue {
    pub query: String,
    pub value: f64,
    pub method: &'static str,
    pub kind: Option<&'static str>,
    pub note: Option<String>,
}

impl fmt::Display for MetricValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = {}  method={}", self.query, fmt_g(self.value), self.method)?;
        if let Some(k) = self.kind {
            write!(f, " kind={k}")?;
        }
        if let Some(n) = &self.note {
            write!(f, "\n  note: {n}")?;
        }
        Ok(())
    }
}

fn method_tag(m: BoundMethod) -> &'static str {
    match m {
        BoundMethod::ClosedForm => "closed_form",
        BoundMethod::Quadrature => "quadrature",
        BoundMethod::Sdp => "sdp",
        BoundMethod::FockTrace => "fock_trace",
    }
}

fn kind_tag(k: BoundKind) -> &'static str {
    match k {
        BoundKind::Lower => "lower",
        BoundKind::Upper => "upper",
    }
}

struct Args<'a> {
    name: &'a str,
    raw: BTreeMap<String, String>,
}

impl Args<'_> {
    fn text(&self, key: &str) -> CliResult<&str> {
        self.raw
            .get(key)
            .map(String::as_str)
            .ok_or_else(|| CliError::BadArgument(format!("{} needs {key}=...", self.name)))
    }

    fn num(&self, key: &str) -> CliResult<f64> {
        let s = self.text(key)?;
        if key == "R" && s == "unit" {
            return Ok(unit_gain_reflectivity());
        }
        s.parse().map_err(|_| CliError::BadArgument(format!("{key}={s} is not a number")))
    }

    fn count(&self, key: &str) -> CliResult<usize> {
        let s = self.text(key)?;
        s.parse().map_err(|_| CliError::BadArgument(format!("{key}={s} is not a nonnegative integer")))
    }
}

/// Splits `["name", "k=v", ...]`, fills defaults and rejects unknown names or keys.
fn parse(words: &[String]) -> CliResult<Args<'static>> {
    let (name, rest) = words.split_first().ok_or_else(|| CliError::UnknownQuery("empty query".into()))?;
    let &(qname, keys, _) = QUERIES
        .iter()
        .find(|q| q.0 == name)
        .ok_or_else(|| CliError::UnknownQuery(name.clone()))?;
    let mut raw = BTreeMap::new();
    for w in rest {
        let (k, v) = w
            .split_once('=')
            .ok_or_else(|| CliError::BadArgument(format!("expected key=value, got {w}")))?;
        if !keys.iter().any(|spec| spec.split('=').next() == Some(k)) {
            return Err(CliError::BadArgument(format!("{qname} has no parameter {k}")));
        }
        raw.insert(k.to_string(), v.to_string());
    }
    for spec in keys {
        if let Some((k, d)) = spec.split_once('=') {
            raw.entry(k.to_string()).or_insert_with(|| d.to_string());
        }
    }
    Ok(Args { name: qname, raw })
}

fn canonical(a: &Args) -> String {
    let keys = QUERIES.iter().find(|q| q.0 == a.name).map(|q| q.1).unwrap_or(&[]);
    let parts: Vec<String> = keys
        .iter()
        .filter_map(|spec| {
            let k = spec.split('=').next()?;
            a.raw.get(k).map(|v| format!("{k}={v}"))
        })
        .collect();
    format!("{}({})", a.name, parts.join(", "))
}

fn value(query: String, value: f64, method: &'static str, kind: Option<&'static str>) -> MetricValue {
    MetricValue { query, value, method, kind, note: None }
}

pub fn evaluate(words: &[String]) -> CliResult<MetricValue> {
    let a = parse(words)?;
    let q = canonical(&a);
    let closed = "closed_form";
    let out = match a.name {
        "f_sine" => value(q, f_sine(a.num("eta")?, a.num("E")?)?, closed, Some("upper")),
        "displacement_fidelity" => value(q, displacement_fidelity(a.num("eta")?, a.num("E")?)?, closed, None),
        "d1" => {
            let b = d1_bound(a.num("eta")?, a.num("E")?)?;
            value(q, b.value, method_tag(b.method), Some(kind_tag(b.kind)))
        }
        "d2" => {
            let sol = d2_solution(a.num("eta")?, a.num("E")?, a.count("M")?, &EcdConfig::default())?;
            let mut v = value(q, sol.primal, "sdp", Some("lower"));
            v.note = Some(format!("dual {} gap {} iterations {}", fmt_g(sol.dual), fmt_g(sol.dual_gap), sol.iterations));
            v
        }
        "coherent_loss_fidelity" => {
            value(q, coherent_loss_fidelity(Complex64::new(a.num("delta")?, 0.0), a.num("eta")?)?, closed, None)
        }
        "tensor_disp" => {
            let etas = a
                .text("etas")?
                .split(',')
                .map(|s| s.trim().parse::<f64>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(|_| CliError::BadArgument("etas must be a comma-separated list of numbers".into()))?;
            let (v, alloc) = tensor_disp_allocation(&etas, a.num("E")?)?;
            let mut m = value(q, v, closed, Some("upper"));
            m.note = Some(format!(
                "energy allocation [{}]",
                alloc.iter().map(|x| fmt_g(*x)).collect::<Vec<_>>().join(", ")
            ));
            m
        }
        "g_angle" => value(q, g_angle_bound(a.num("theta")?, a.num("sigma")?, a.num("E")?)?, "quadrature", Some("upper")),
        "squeezer_sine" => value(q, squeezer_tms_sine(a.num("r")?, a.num("rE")?, a.num("N")?)?, closed, Some("lower")),
        "squeezer_fidelity" => value(q, squeezer_tms_fidelity(a.num("r")?, a.num("rE")?, a.num("N")?)?, closed, None),
        "squeezer_zvac_fidelity" => {
            value(q, squeezer_zvac_fidelity(a.num("z")?, a.num("r")?, a.num("rE")?)?, closed, None)
        }
        "sum_sine" => {
            let (rb, n) = (a.num("rB")?, a.num("N")?);
            let d = sum_sine(rb, n)?;
            let f = sum_tms_fidelity(n, unit_gain_reflectivity(), SUM_RA, rb)?;
            let mut v = value(q, d, closed, Some("lower"));
            v.note = Some(format!("fidelity F = {}, accuracy 1 - d = {}", fmt_g(f), fmt_g(1.0 - d)));
            v
        }
        "sum_fidelity" => value(q, sum_tms_fidelity(a.num("N")?, a.num("R")?, a.num("rA")?, a.num("rB")?)?, closed, None),
        "sum_zvac_fidelity" => {
            value(q, sum_zvac_fidelity(a.num("z")?, a.num("R")?, a.num("rA")?, a.num("rB")?)?, closed, None)
        }
        "db_to_r" => value(q, db_to_r(a.num("db")?), closed, None),
        "r_to_db" => value(q, r_to_db(a.num("r")?), closed, None),
        other => return Err(CliError::UnknownQuery(other.to_string())),
    };
    Ok(out)
}

pub fn help_text() -> String {
    let mut s = String::from("queries:\n");
    for (name, keys, what) in QUERIES {
        s.push_str(&format!("  {name} {}\n      {what}\n", keys.join(" ")));
    }
    s
}
