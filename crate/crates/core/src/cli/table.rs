//! Report tables and their CSV/JSON renderings.

use std::collections::BTreeMap;

use serde::Serialize;

use super::config::{Format, SweepConfig};
use crate::report::{BoundReport, Status};

pub const SCHEMA: u32 = 1;

/// Outcome of one row.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RowStatus {
    Pass,
    Fail,
    OutOfRegime,
    /// Informational: a trend flag or an exponent formula with no value.
    Flagged(String),
    Error(String),
}

impl RowStatus {
    pub fn is_failure(&self) -> bool {
        matches!(self, RowStatus::Fail | RowStatus::Error(_))
    }

    pub fn render(&self) -> String {
        match self {
            RowStatus::Pass => "pass".into(),
            RowStatus::Fail => "FAIL".into(),
            RowStatus::OutOfRegime => "out_of_regime".into(),
            RowStatus::Flagged(why) => format!("flagged:{why}"),
            RowStatus::Error(e) => format!("error:{e}"),
        }
    }
}

impl From<Status> for RowStatus {
    fn from(s: Status) -> Self {
        match s {
            Status::Pass => RowStatus::Pass,
            Status::Fail => RowStatus::Fail,
            Status::OutOfRegime => RowStatus::OutOfRegime,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Row {
    /// Check name, used for the per-check summary.
    pub check: String,
    pub cells: Vec<String>,
    pub ratio: Option<f64>,
    pub status: RowStatus,
}

/// Columns shared by every command that emits [`BoundReport`]s.
pub const REPORT_COLUMNS: &[&str] = &[
    "check", "q", "d", "form_id", "j", "seed", "exponents", "family", "value", "bound", "ratio", "witness",
];

/// `{:.16e}`: 17 significant digits.
pub fn fmt_f(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{x:.16e}")
    }
}

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

impl Row {
    pub fn from_report(r: &BoundReport, exponents: &str) -> Self {
        let c = &r.context;
        Row {
            check: r.check.clone(),
            cells: vec![
                r.check.clone(),
                c.q.to_string(),
                c.d.to_string(),
                c.form_id.clone(),
                opt(c.j),
                opt(c.seed),
                exponents.to_string(),
                c.family.clone(),
                fmt_f(r.value),
                fmt_f(r.bound),
                fmt_f(r.ratio),
                r.witness.clone(),
            ],
            ratio: Some(r.ratio),
            status: r.status.into(),
        }
    }

    /// A cell that failed before producing a measurement.
    pub fn error(check: &str, q: u32, d: usize, form_id: &str, j: u32, err: &crate::Error) -> Self {
        let mut cells = vec![String::new(); REPORT_COLUMNS.len()];
        cells[0] = check.to_string();
        cells[1] = q.to_string();
        cells[2] = d.to_string();
        cells[3] = form_id.to_string();
        cells[4] = j.to_string();
        Row {
            check: check.to_string(),
            cells,
            ratio: None,
            status: RowStatus::Error(format!("{err:?}")),
        }
    }
}

/// One command's output.
#[derive(Debug, Clone)]
pub struct Table {
    pub command: String,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Row>,
    /// Plain-text attachments, e.g. region polygons.
    pub trailer: Vec<String>,
}

#[derive(Debug, Clone, Default, Serialize, PartialEq)]
pub struct Summary {
    pub rows: usize,
    pub pass: usize,
    pub fail: usize,
    pub out_of_regime: usize,
    pub flagged: usize,
    pub errors: usize,
    pub max_ratio: BTreeMap<String, f64>,
}

impl Table {
    pub fn new(command: &str, columns: &[&'static str]) -> Self {
        Self {
            command: command.to_string(),
            columns: columns.to_vec(),
            rows: Vec::new(),
            trailer: Vec::new(),
        }
    }

    pub fn failed(&self) -> bool {
        self.rows.iter().any(|r| r.status.is_failure())
    }

    pub fn summary(&self) -> Summary {
        let mut s = Summary {
            rows: self.rows.len(),
            ..Default::default()
        };
        for r in &self.rows {
            match r.status {
                RowStatus::Pass => s.pass += 1,
                RowStatus::Fail => s.fail += 1,
                RowStatus::OutOfRegime => s.out_of_regime += 1,
                RowStatus::Flagged(_) => s.flagged += 1,
                RowStatus::Error(_) => s.errors += 1,
            }
            if let Some(ratio) = r.ratio.filter(|x| x.is_finite()) {
                if r.status != RowStatus::OutOfRegime {
                    let slot = s.max_ratio.entry(r.check.clone()).or_insert(ratio);
                    *slot = slot.max(ratio);
                }
            }
        }
        s
    }

    fn checks(&self) -> BTreeMap<String, &'static str> {
        self.rows
            .iter()
            .map(|r| (r.check.clone(), describe(&r.check)))
            .collect()
    }

    pub fn render(&self, config: &SweepConfig, format: Format) -> String {
        match format {
            Format::Csv => self.to_csv(config),
            Format::Json => self.to_json(config),
        }
    }

    pub fn to_csv(&self, config: &SweepConfig) -> String {
        let mut out = format!("schema={SCHEMA}\n");
        out.push_str(&format!(
            "# tool=qextend version={} command={}\n",
            env!("CARGO_PKG_VERSION"),
            self.command
        ));
        out.push_str(&format!("# config {}\n", config.echo()));
        for (name, text) in self.checks() {
            out.push_str(&format!("# check {name}: {text}\n"));
        }
        let mut w = csv::WriterBuilder::new().from_writer(Vec::new());
        let mut header: Vec<&str> = self.columns.clone();
        header.push("status");
        w.write_record(&header).expect("write to memory");
        for r in &self.rows {
            let mut rec = r.cells.clone();
            rec.push(r.status.render());
            w.write_record(&rec).expect("write to memory");
        }
        let body = w.into_inner().expect("flush to memory");
        out.push_str(std::str::from_utf8(&body).expect("utf-8 cells"));
        for line in &self.trailer {
            out.push_str(&format!("# {line}\n"));
        }
        let s = self.summary();
        out.push_str(&format!(
            "# summary rows={} pass={} fail={} out_of_regime={} flagged={} errors={}\n",
            s.rows, s.pass, s.fail, s.out_of_regime, s.flagged, s.errors
        ));
        for (check, m) in &s.max_ratio {
            out.push_str(&format!("# max_ratio {check}={}\n", fmt_f(*m)));
        }
        out
    }

    pub fn to_json(&self, config: &SweepConfig) -> String {
        #[derive(Serialize)]
        struct Doc<'a> {
            schema: u32,
            tool: &'static str,
            version: &'static str,
            command: &'a str,
            config: &'a SweepConfig,
            checks: BTreeMap<String, &'static str>,
            columns: Vec<&'static str>,
            rows: Vec<BTreeMap<&'static str, String>>,
            trailer: &'a [String],
            summary: Summary,
        }
        let mut columns = self.columns.clone();
        columns.push("status");
        let rows = self
            .rows
            .iter()
            .map(|r| {
                let mut m: BTreeMap<&'static str, String> =
                    self.columns.iter().copied().zip(r.cells.iter().cloned()).collect();
                m.insert("status", r.status.render());
                m
            })
            .collect();
        let doc = Doc {
            schema: SCHEMA,
            tool: "qextend",
            version: env!("CARGO_PKG_VERSION"),
            command: &self.command,
            config,
            checks: self.checks(),
            columns,
            rows,
            trailer: &self.trailer,
            summary: self.summary(),
        };
        let mut s = serde_json::to_string_pretty(&doc).expect("serializable report");
        s.push('\n');
        s
    }
}

/// What each check asserts.
pub fn describe(check: &str) -> &'static str {
    match check {
        "gauss" => "|sum_{t!=0} chi(at) psi(t)| = sqrt(q) for a != 0, to 1e-9 q",
        "power" => "sum_s chi(t s^n) equals its expansion in Gauss sums of order gcd(n, q-1), to 1e-9 q",
        "salie" => "|sum_{t!=0} psi(t) chi(at + b/t)| <= weil * sqrt(q) + 1e-6",
        "kloosterman" => "|sum_{t!=0} chi(at + b/t)| <= weil * sqrt(q) + 1e-6 for (a,b) != (0,0)",
        "surface_ft" => {
            "closed-form surface transform equals enumeration to 1e-9; max_{m!=0} |S^(m)| q^((d+1)/2) <= decay; |#S - q^(d-1)| <= q^((d-1)/2)"
        }
        "kernel_decay" => "max_{m!=0} |(dsigma)^(m)| <= decay * (q^(d-1)/#S) * q^(-(d-1)/2)",
        "rstar_2_2_exact" => "||(f dsigma)^||_2 / ||f||_2 = q^(d/2) / sqrt(#S) for every f, to 1e-9 relative",
        "stein_tomas" => "max over test families of ||(f dsigma)^||_r / ||f||_2 <= rstar at r = (2d+2)/(d-1)",
        "stein_tomas_trend" => "per-q maximum of the stein_tomas rows",
        "stein_tomas_growth" => "flagged when the per-q maxima increase at every step",
        "rstar_2_4" => "max over test families of ||(f dsigma)^||_4 / ||f||_2 <= rstar",
        "pairsum" => "#{(a,b) in S x S : a + b = x} <= 2 q^(d-2) for every x != 0, exact integers",
        "shifted_incidence" => "max_z #{(x,y) in E x E : x - y + z in S} <= C ((#E)^2/q + #E q^((d-1)/2))",
        "energy" => "(#E)^2 <= energy(E) <= min{(#E)^3, C ((#E)^3/q + (#E)^2 q^((d-1)/2))}",
        "energy_l4_identity" => "||(E dsigma)^||_4 = q^(d/4) energy(E)^(1/4) / #S, to 1e-8 relative",
        "big_set_l4" => "||(E dsigma)^||_4 / ||E||_(4/3) <= C when (#E)^2 >= q^(d+1)",
        "small_set_l4_small" => {
            "||(E dsigma)^||_4 <= C q^((5-3d)/8 + (d-1)/(2 p0)) ||E||_p0 when (#E)^2 <= q^(d-1)"
        }
        "small_set_l4_middle" => {
            "||(E dsigma)^||_4 <= C q^((9-3d)/8 + (d-3)/(2 p0)) ||E||_p0 when q^(d-1) <= (#E)^2 <= q^(d+1)"
        }
        "small_set_l4_union" => {
            "||(E dsigma)^||_4 <= C q^((9-3d)/8 + (d-3)/(2 p0)) ||E||_p0 when (#E)^2 <= q^(d+1)"
        }
        "stein_tomas_exponent" => "r = (2d+2)/(d-1) in exact rationals",
        "bootstrap" => "theta = (d-1)/(d+1), d~ = d-1 gives r = 2/theta and q exponent theta/2 - d~(1-theta)/4 <= 0",
        "incidence_small" => "restricted-set (p, r) thresholds for #E <= q^((d-1)/2)",
        "incidence_large" => "restricted-set (p, r) thresholds for #E <= q^((d+1)/2)",
        "l4_small" => "q exponent of the L^p0 -> L^4 estimate for #E <= q^((d-1)/2)",
        "l4_middle" => "q exponent of the L^p0 -> L^4 estimate for q^((d-1)/2) <= #E <= q^((d+1)/2)",
        _ => "",
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cli::config::{ConfigFile, Overrides};

    #[test]
    fn float_format_has_17_digits() {
        assert_eq!(fmt_f(1.5), "1.5000000000000000e0");
        assert_eq!(fmt_f(f64::INFINITY), "inf");
    }

    #[test]
    fn csv_layout() {
        let cfg = SweepConfig::resolve(ConfigFile::default(), Overrides::default()).unwrap();
        let mut t = Table::new("demo", &["a", "b"]);
        t.rows.push(Row {
            check: "gauss".into(),
            cells: vec!["1".into(), "x,y".into()],
            ratio: Some(0.5),
            status: RowStatus::Pass,
        });
        let text = t.to_csv(&cfg);
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("schema=1"));
        assert!(text.contains("a,b,status\n1,\"x,y\",pass\n"));
        assert!(text.contains("# max_ratio gauss=5.0000000000000000e-1"));
        assert!(!t.failed());
        let json: serde_json::Value = serde_json::from_str(&t.to_json(&cfg)).unwrap();
        assert_eq!(json["rows"][0]["b"], "x,y");
        assert_eq!(json["schema"], 1);
    }
}
