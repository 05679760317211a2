//! Command-line front end: `qextend <command> [flags]`.
//!
//! Exit status is 0 when every row passes, 1 when any row fails and 2 when
//! the configuration is rejected.

pub mod commands;
pub mod config;
pub mod table;

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::Context;
use clap::{Args, Parser, Subcommand};

pub use commands::{cmd_exponents, cmd_extension, cmd_incidence, cmd_suite, cmd_sums, cmd_surface_ft};
pub use config::{ConfigFile, Format, Overrides, SumKind, SweepConfig};
pub use table::{Row, RowStatus, Summary, Table};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "qextend", version, about = "Extension estimates for quadratic surfaces over prime fields")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Gauss, power, Salié and Kloosterman sums.
    Sums(SweepArgs),
    /// Closed-form surface transform against enumeration, decay and point counts.
    SurfaceFt(SweepArgs),
    /// L2 identity, Stein–Tomas and (2,4) lower bounds, kernel decay.
    Extension(SweepArgs),
    /// Pair sums, shifted incidences, additive energy and L4 checks.
    Incidence(SweepArgs),
    /// Exact exponent arithmetic and region polygons.
    Exponents(SweepArgs),
    /// Every command; with --out, one file per command in that directory.
    Suite(SweepArgs),
}

#[derive(Debug, Clone, Default, Args)]
pub struct SweepArgs {
    /// TOML config file; flags override its keys.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Comma-separated odd primes.
    #[arg(long, value_delimiter = ',')]
    pub q: Option<Vec<u32>>,
    /// Comma-separated dimensions.
    #[arg(long, value_delimiter = ',')]
    pub d: Option<Vec<usize>>,
    /// Form specs separated by ';', e.g. "diag:1,1;random:5".
    #[arg(long)]
    pub forms: Option<String>,
    /// Levels: "all" or a comma-separated list.
    #[arg(long)]
    pub j: Option<String>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Sum kind for `sums`: all, gauss, power, salie, kloosterman.
    #[arg(long)]
    pub kind: Option<SumKind>,
    /// Comma-separated p0 values, integers or fractions.
    #[arg(long, value_delimiter = ',')]
    pub p0: Option<Vec<String>>,
    /// Threshold override `name=value` (weil, decay, rstar, incidence).
    #[arg(long = "threshold")]
    pub thresholds: Vec<String>,
    /// Output file, or directory for `suite`.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub format: Option<Format>,
    /// Worker threads; falls back to QEXTEND_THREADS.
    #[arg(long)]
    pub threads: Option<usize>,
}

impl SweepArgs {
    pub fn to_config(&self) -> crate::Result<SweepConfig> {
        let file = match &self.config {
            Some(p) => ConfigFile::load(p)?,
            None => ConfigFile::default(),
        };
        let thresholds = self
            .thresholds
            .iter()
            .map(|s| config::parse_threshold(s))
            .collect::<crate::Result<Vec<_>>>()?;
        let threads = match self.threads {
            Some(t) => Some(t),
            None => match std::env::var("QEXTEND_THREADS") {
                Ok(v) => Some(
                    v.trim()
                        .parse()
                        .map_err(|e| crate::Error::Parse(format!("QEXTEND_THREADS={v:?}: {e}")))?,
                ),
                Err(_) => None,
            },
        };
        let over = Overrides {
            q: self.q.clone(),
            d: self.d.clone(),
            forms: self
                .forms
                .as_ref()
                .map(|s| s.split(';').map(|t| t.trim().to_string()).filter(|t| !t.is_empty()).collect()),
            j: self.j.clone(),
            seed: self.seed,
            kind: self.kind,
            p0: self.p0.clone(),
            thresholds,
            out: self.out.clone(),
            format: self.format,
            threads,
        };
        SweepConfig::resolve(file, over)
    }
}

fn write_output(path: Option<&Path>, text: &str) -> anyhow::Result<()> {
    match path {
        Some(p) => {
            if let Some(parent) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
                fs::create_dir_all(parent).with_context(|| format!("creating {}", parent.display()))?;
            }
            fs::write(p, text).with_context(|| format!("writing {}", p.display()))
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// Runs one parsed invocation and returns the exit status.
pub fn run(cli: Cli) -> i32 {
    let (name, args) = match &cli.command {
        Command::Sums(a) => ("sums", a),
        Command::SurfaceFt(a) => ("surface-ft", a),
        Command::Extension(a) => ("extension", a),
        Command::Incidence(a) => ("incidence", a),
        Command::Exponents(a) => ("exponents", a),
        Command::Suite(a) => ("suite", a),
    };
    let cfg = match args.to_config() {
        Ok(c) => c,
        Err(e) => {
            eprintln!("qextend: {e}");
            return EXIT_CONFIG;
        }
    };
    if let Some(n) = cfg.threads {
        // a second call in the same process keeps the first pool
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    let tables = match name {
        "sums" => cmd_sums(&cfg).map(|t| vec![t]),
        "surface-ft" => cmd_surface_ft(&cfg).map(|t| vec![t]),
        "extension" => cmd_extension(&cfg).map(|t| vec![t]),
        "incidence" => cmd_incidence(&cfg).map(|t| vec![t]),
        "exponents" => cmd_exponents(&cfg).map(|t| vec![t]),
        _ => cmd_suite(&cfg),
    };
    let tables = match tables {
        Ok(t) => t,
        Err(e) => {
            eprintln!("qextend: {e}");
            return EXIT_CONFIG;
        }
    };
    let written = if name == "suite" {
        write_suite(&cfg, &tables)
    } else {
        write_output(cfg.out.as_deref(), &tables[0].render(&cfg, cfg.format))
    };
    if let Err(e) = written {
        eprintln!("qextend: {e:#}");
        return EXIT_CONFIG;
    }
    for t in &tables {
        let s = t.summary();
        eprintln!(
            "{}: {} rows, {} pass, {} fail, {} out of regime, {} flagged, {} errors",
            t.command, s.rows, s.pass, s.fail, s.out_of_regime, s.flagged, s.errors
        );
    }
    if tables.iter().any(Table::failed) {
        EXIT_FAIL
    } else {
        EXIT_PASS
    }
}

fn write_suite(cfg: &SweepConfig, tables: &[Table]) -> anyhow::Result<()> {
    match &cfg.out {
        Some(dir) => {
            fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
            for t in tables {
                let path = dir.join(format!("{}.{}", t.command, cfg.format.extension()));
                write_output(Some(&path), &t.render(cfg, cfg.format))?;
            }
            Ok(())
        }
        None => {
            let text: String = tables.iter().map(|t| t.render(cfg, cfg.format)).collect();
            write_output(None, &text)
        }
    }
}

/// Parses `args` (including the program name) and runs; parse errors exit
/// with status 2 through clap.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(cli),
        Err(e) => {
            let _ = e.print();
            if e.use_stderr() {
                EXIT_CONFIG
            } else {
                EXIT_PASS
            }
        }
    }
}
