//! Sweep configuration: TOML file, then command-line overrides.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::extension::{Families, Rational};
use crate::field::{make_field, PrimeField};
use crate::quadform::{FormSpec, Levels};
use crate::{grid_size, Error, Result};

/// Default desk sweep.
pub const DEFAULT_Q: &[u32] = &[3, 5, 7, 11, 13];
pub const DEFAULT_D: &[usize] = &[2, 3];
pub const DEFAULT_FORMS: &[&str] = &["diag:1,1", "diag:1,1,1", "random:5"];

/// Frozen thresholds, overridable by name.
pub const THRESHOLD_NAMES: &[(&str, f64)] = &[
    ("weil", 2.0),
    ("decay", 2.0),
    ("rstar", 4.0),
    ("incidence", 4.0),
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(Error::Parse(format!("unknown format {other:?}"))),
        }
    }
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

/// Which sums `sums` evaluates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SumKind {
    All,
    Gauss,
    Power,
    Salie,
    Kloosterman,
}

impl FromStr for SumKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "all" => Ok(SumKind::All),
            "gauss" => Ok(SumKind::Gauss),
            "power" => Ok(SumKind::Power),
            "salie" => Ok(SumKind::Salie),
            "kloosterman" => Ok(SumKind::Kloosterman),
            other => Err(Error::Parse(format!("unknown sum kind {other:?}"))),
        }
    }
}

impl SumKind {
    pub fn as_str(self) -> &'static str {
        match self {
            SumKind::All => "all",
            SumKind::Gauss => "gauss",
            SumKind::Power => "power",
            SumKind::Salie => "salie",
            SumKind::Kloosterman => "kloosterman",
        }
    }
}

/// Everything a config file may set; absent keys take defaults.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub q: Option<Vec<u32>>,
    pub d: Option<Vec<usize>>,
    pub forms: Option<Vec<String>>,
    pub j: Option<LevelsValue>,
    pub seed: Option<u64>,
    pub kind: Option<SumKind>,
    pub p0: Option<Vec<String>>,
    pub functions: Option<usize>,
    pub subsets: Option<usize>,
    pub families: Option<Families>,
    pub thresholds: Option<BTreeMap<String, f64>>,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
    pub threads: Option<usize>,
}

/// `j = "all"` or `j = [1, 2]`.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum LevelsValue {
    Text(String),
    List(Vec<u32>),
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Parse(format!("config: {e}")))
    }
}

/// Command-line values that override the file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub q: Option<Vec<u32>>,
    pub d: Option<Vec<usize>>,
    pub forms: Option<Vec<String>>,
    pub j: Option<String>,
    pub seed: Option<u64>,
    pub kind: Option<SumKind>,
    pub p0: Option<Vec<String>>,
    pub thresholds: Vec<(String, f64)>,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
    pub threads: Option<usize>,
}

/// The validated, effective configuration.
#[derive(Debug, Clone, Serialize)]
pub struct SweepConfig {
    pub q: Vec<u32>,
    pub d: Vec<usize>,
    #[serde(serialize_with = "ser_display_list")]
    pub forms: Vec<FormSpec>,
    #[serde(serialize_with = "ser_display")]
    pub j: Levels,
    pub seed: u64,
    pub kind: SumKind,
    #[serde(serialize_with = "ser_display_list")]
    pub p0: Vec<Rational>,
    /// Random functions per surface for the `L² → L²` identity.
    pub functions: usize,
    /// Random subsets per dyadic size in the incidence sweep.
    pub subsets: usize,
    pub families: Families,
    pub thresholds: BTreeMap<String, f64>,
    pub out: Option<PathBuf>,
    pub format: Format,
    pub threads: Option<usize>,
    #[serde(skip)]
    fields: Vec<Arc<PrimeField>>,
}

fn ser_display<T: std::fmt::Display, S: serde::Serializer>(v: &T, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

fn ser_display_list<T: std::fmt::Display, S: serde::Serializer>(
    v: &[T],
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|x| x.to_string()))
}

fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let r = match s.split_once('/') {
        Some((n, d)) => {
            let n: i64 = n.trim().parse().map_err(|e| Error::Parse(format!("p0 {s:?}: {e}")))?;
            let d: i64 = d.trim().parse().map_err(|e| Error::Parse(format!("p0 {s:?}: {e}")))?;
            if d == 0 {
                return Err(Error::Parse(format!("p0 {s:?} has zero denominator")));
            }
            Rational::new(n, d)
        }
        None => Rational::from_integer(s.parse().map_err(|e| Error::Parse(format!("p0 {s:?}: {e}")))?),
    };
    if r < Rational::from_integer(2) {
        return Err(Error::Parse(format!("p0 = {r} must be at least 2")));
    }
    Ok(r)
}

/// `name=value` for `--threshold`.
pub fn parse_threshold(s: &str) -> Result<(String, f64)> {
    let (name, value) = s
        .split_once('=')
        .ok_or_else(|| Error::Parse(format!("threshold {s:?} is not name=value")))?;
    let v: f64 = value
        .trim()
        .parse()
        .map_err(|e| Error::Parse(format!("threshold {s:?}: {e}")))?;
    Ok((name.trim().to_string(), v))
}

impl SweepConfig {
    pub fn resolve(file: ConfigFile, over: Overrides) -> Result<Self> {
        let q = over.q.or(file.q).unwrap_or_else(|| DEFAULT_Q.to_vec());
        let d = over.d.or(file.d).unwrap_or_else(|| DEFAULT_D.to_vec());
        let forms = over
            .forms
            .or(file.forms)
            .unwrap_or_else(|| DEFAULT_FORMS.iter().map(|s| s.to_string()).collect())
            .iter()
            .map(|s| s.parse())
            .collect::<Result<Vec<FormSpec>>>()?;
        let j = match (over.j, file.j) {
            (Some(s), _) => s.parse()?,
            (None, Some(LevelsValue::Text(s))) => s.parse()?,
            (None, Some(LevelsValue::List(v))) => Levels::List(v),
            (None, None) => Levels::All,
        };
        let p0 = over
            .p0
            .or(file.p0)
            .unwrap_or_else(|| vec!["2".into(), "4".into()])
            .iter()
            .map(|s| parse_rational(s))
            .collect::<Result<Vec<_>>>()?;

        let mut thresholds: BTreeMap<String, f64> =
            THRESHOLD_NAMES.iter().map(|&(n, v)| (n.to_string(), v)).collect();
        let from_file = file.thresholds.unwrap_or_default();
        for (name, v) in from_file.into_iter().chain(over.thresholds) {
            match thresholds.get_mut(&name) {
                Some(slot) => *slot = v,
                None => return Err(Error::Parse(format!("unknown threshold {name:?}"))),
            }
        }

        if q.is_empty() {
            return Err(Error::Parse("q list is empty".into()));
        }
        if d.is_empty() {
            return Err(Error::Parse("d list is empty".into()));
        }
        if let Some(&bad) = d.iter().find(|&&d| d < 2) {
            return Err(Error::BadDimension(format!("d = {bad} < 2")));
        }
        let fields = q.iter().map(|&q| make_field(q).map(Arc::new)).collect::<Result<Vec<_>>>()?;
        Ok(Self {
            q,
            d,
            forms,
            j,
            seed: over.seed.or(file.seed).unwrap_or(0),
            kind: over.kind.or(file.kind).unwrap_or(SumKind::All),
            p0,
            functions: file.functions.unwrap_or(20),
            subsets: file.subsets.unwrap_or(2),
            families: file.families.unwrap_or_default(),
            thresholds,
            out: over.out.or(file.out),
            format: over.format.or(file.format).unwrap_or(Format::Csv),
            threads: over.threads.or(file.threads),
            fields,
        })
    }

    pub fn fields(&self) -> &[Arc<PrimeField>] {
        &self.fields
    }

    /// Every `q^d` of the sweep fits the grid budget.
    pub fn check_grid(&self) -> Result<()> {
        for &q in &self.q {
            for &d in &self.d {
                grid_size(q, d)?;
            }
        }
        Ok(())
    }

    pub fn threshold(&self, name: &str) -> f64 {
        self.thresholds[name]
    }

    /// One-line echo for report headers, `key=value` separated by spaces.
    pub fn echo(&self) -> String {
        let join = |v: Vec<String>| v.join(",");
        format!(
            "q={} d={} forms={} j={} seed={} kind={} p0={} functions={} subsets={} families={} thresholds={}",
            join(self.q.iter().map(|x| x.to_string()).collect()),
            join(self.d.iter().map(|x| x.to_string()).collect()),
            self.forms.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(";"),
            self.j,
            self.seed,
            self.kind.as_str(),
            join(self.p0.iter().map(|x| x.to_string()).collect()),
            self.functions,
            self.subsets,
            self.families.label(),
            join(self.thresholds.iter().map(|(k, v)| format!("{k}:{v}")).collect()),
        )
    }
}
