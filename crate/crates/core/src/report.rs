//! Machine-readable reports: JSON with sorted keys, CSV tables, plain text.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::besicovitch::{ConditionalCheck, IncidenceReport, LineConfig};
use crate::geom::Slope;
use crate::gf::FieldTable;
use crate::search::{ConjectureReport, SearchOutcome};
use crate::stats::{ratio_string, ExactMoments, SampleReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Csv,
    Text,
}

/// A report: a flat JSON object plus optional CSV table and text lines.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Report {
    pub title: String,
    pub fields: Map<String, Value>,
    /// Header and rows for the CSV rendering.
    pub table: Option<(Vec<String>, Vec<Vec<String>>)>,
    /// Extra lines appended to the text rendering.
    pub notes: Vec<String>,
}

impl Report {
    pub fn new(title: impl Into<String>) -> Self {
        Self {
            title: title.into(),
            ..Self::default()
        }
    }

    pub fn set(&mut self, key: &str, value: impl Serialize) -> &mut Self {
        self.fields.insert(
            key.to_string(),
            serde_json::to_value(value).expect("report values serialize"),
        );
        self
    }

    pub fn remove(&mut self, key: &str) {
        self.fields.remove(key);
    }

    /// Keys come out sorted (serde_json's map is ordered) followed by a
    /// newline.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string(&Value::Object(self.fields.clone()))
            .expect("JSON values always render");
        s.push('\n');
        s
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        match &self.table {
            Some((header, rows)) => {
                out.push_str(&header.join(","));
                out.push('\n');
                for row in rows {
                    out.push_str(&row.join(","));
                    out.push('\n');
                }
            }
            None => {
                out.push_str("key,value\n");
                for (k, v) in &self.fields {
                    let v = match v {
                        Value::String(s) => s.clone(),
                        other => other.to_string(),
                    };
                    let _ = writeln!(out, "{k},{}", csv_escape(&v));
                }
            }
        }
        out
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{}\n", self.title);
        for (k, v) in &self.fields {
            let _ = writeln!(out, "  {k}: {v}");
        }
        for n in &self.notes {
            let _ = writeln!(out, "{n}");
        }
        out
    }

    pub fn emit(&self, format: Format) -> String {
        match format {
            Format::Json => self.to_json(),
            Format::Csv => self.to_csv(),
            Format::Text => self.to_text(),
        }
    }
}

fn csv_escape(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// `multiplicity,count` rows in ascending multiplicity.
pub fn histogram_csv(histogram: &BTreeMap<u16, u64>) -> (Vec<String>, Vec<Vec<String>>) {
    (
        vec!["multiplicity".into(), "count".into()],
        histogram
            .iter()
            .map(|(m, c)| vec![m.to_string(), c.to_string()])
            .collect(),
    )
}

/// `p`, `k`, `q` and the modulus coefficients (null for prime fields).
pub fn field_header(report: &mut Report, field: &FieldTable) {
    report
        .set("p", field.p())
        .set("k", field.k())
        .set("q", field.q())
        .set("modulus", field.modulus());
}

fn intercept_list(config: &LineConfig<'_>) -> Vec<usize> {
    config.indices()
}

/// `{p,k,q,modulus,intercepts,cardinality,excess,histogram,lower_bound}`.
pub fn incidence(config: &LineConfig<'_>, r: &IncidenceReport) -> Report {
    let mut rep = Report::new(format!("configuration {config}"));
    field_header(&mut rep, config.field());
    let histogram: Map<String, Value> = r
        .histogram
        .iter()
        .map(|(m, c)| (m.to_string(), json!(c)))
        .collect();
    rep.set("intercepts", intercept_list(config))
        .set("cardinality", r.cardinality)
        .set("excess", r.excess)
        .set("histogram", histogram)
        .set("lower_bound", r.lower_bound);
    rep.table = Some(histogram_csv(&r.histogram));
    rep
}

/// Adds the triple-point and covering-line fields to an incidence report.
pub fn add_structure(rep: &mut Report, exceptions: &[Slope], check: &ConditionalCheck) {
    rep.set("triple_point_exceptions", exceptions)
        .set("covering_slope", check.covering_slope)
        .set("triple_points", check.triple_points)
        .set("delta", check.delta)
        .set("max_multiplicity", check.max_multiplicity);
}

/// `{q, min_excess, min_cardinality, witness_count, witnesses,
/// nodes_explored, nodes_pruned, exhausted, wall_ms}` plus the field header.
/// `wall_ms = None` leaves the timing out so output is byte-reproducible.
pub fn search(outcome: &SearchOutcome<'_>, wall_ms: Option<u64>) -> Report {
    let label = if outcome.exhausted {
        "exhaustive"
    } else {
        "NON-EXHAUSTIVE (node budget reached)"
    };
    let mut rep = Report::new(format!("minimum-excess search over GF({}): {label}", outcome.field.q()));
    field_header(&mut rep, outcome.field);
    let witnesses: Vec<Vec<usize>> = outcome.witnesses.iter().map(intercept_list).collect();
    rep.set("min_excess", outcome.min_excess)
        .set("min_cardinality", outcome.min_cardinality())
        .set("witness_count", witnesses.len())
        .set("witnesses", &witnesses)
        .set("nodes_explored", outcome.nodes_explored)
        .set("nodes_pruned", outcome.nodes_pruned)
        .set("exhausted", outcome.exhausted);
    if let Some(ms) = wall_ms {
        rep.set("wall_ms", ms);
    }
    let q = outcome.field.q();
    let mut header: Vec<String> = (0..q).map(|i| format!("b{i}")).collect();
    header.push("b_inf".into());
    rep.table = Some((
        header,
        witnesses
            .iter()
            .map(|w| w.iter().map(usize::to_string).collect())
            .collect(),
    ));
    if !outcome.exhausted {
        rep.notes
            .push("NON-EXHAUSTIVE: the node budget was reached; min_excess is an upper bound only".into());
    }
    rep
}

pub fn conjectures(rep: &mut Report, c: &ConjectureReport<'_>) {
    let counterexamples: Vec<Vec<usize>> = c.counterexamples.iter().map(intercept_list).collect();
    rep.set("conjecture1_holds", c.conjecture1_holds)
        .set("conjecture2_holds", c.conjecture2_holds)
        .set("counterexamples", counterexamples)
        .set("note", &c.note);
    rep.title = format!(
        "conjectures over GF({}): size bound {}, common line {}",
        c.q,
        verdict(c.conjecture1_holds),
        verdict(c.conjecture2_holds)
    );
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "holds"
    } else {
        "FAILS"
    }
}

pub fn moments(rep: &mut Report, key: &str, m: &ExactMoments) {
    rep.set(&format!("{key}_mean"), ratio_string(&m.mean))
        .set(&format!("{key}_variance"), ratio_string(&m.variance));
}

/// Sample statistics plus the field header and the Chebyshev bound.
pub fn sample(field: &FieldTable, s: &SampleReport, chebyshev: f64) -> Report {
    let mut rep = Report::new(format!("{} random configurations over GF({})", s.n, s.q));
    if let Value::Object(map) = serde_json::to_value(s).expect("sample report serializes") {
        rep.fields = map;
    }
    field_header(&mut rep, field);
    rep.set("chebyshev_bound", chebyshev);
    rep.table = Some((
        vec!["statistic".into(), "empirical".into(), "closed_form".into()],
        vec![
            vec!["mean".into(), s.empirical_mean.to_string(), s.closed_form_mean.to_string()],
            vec![
                "variance".into(),
                s.empirical_variance.to_string(),
                s.closed_form_variance.to_string(),
            ],
        ],
    ));
    rep
}
