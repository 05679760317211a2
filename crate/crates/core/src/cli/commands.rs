//! The six subcommands, each producing a [`Table`].

use std::sync::Arc;

use rayon::prelude::*;

use super::config::{SumKind, SweepConfig};
use super::table::{fmt_f, Row, RowStatus, Table, REPORT_COLUMNS};
use crate::expsums::{gauss_sum, kloosterman_sum, power_sum, power_sum_identity_check, salie_sum};
use crate::extension::{
    bootstrap_exponent, dyadic_sizes, growth_flag, incidence3_exponents, kernel_decay_check, region_polygons,
    restricted_l4_q_exponent, rstar_lower_bound, rstar_two_two_exact, stein_tomas_exponent, surface_ft_summary,
    trend_table, ExponentPair, L4Regime, Rational, SizeBranch,
};
use crate::fourier::Exponent;
use crate::incidence::{
    big_set_l4_check, energy_check, energy_l4_identity, pairsum_max_check, random_subset, shifted_incidence_check,
    small_set_l4_check, subset_seed,
};
use crate::quadform::{surface_cells, Surface};
use crate::{BoundReport, Result};

pub const SUMS_COLUMNS: &[&str] = &[
    "q", "kind", "a", "b", "value_re", "value_im", "magnitude", "bound", "ratio",
];

pub const SURFACE_FT_COLUMNS: &[&str] = &[
    "q",
    "d",
    "form_id",
    "j",
    "max_abs_gap",
    "max_decay_ratio",
    "cardinality",
    "count_gap",
];

pub const EXPONENT_COLUMNS: &[&str] = &["d", "p0", "kind", "p", "r", "q_exponent"];

/// Gauss (`k = 1`, `b` holds `k`), power (`a = t`, `b = n`, magnitude is the
/// identity gap), Salié and Kloosterman rows.
pub fn cmd_sums(cfg: &SweepConfig) -> Result<Table> {
    let weil = cfg.threshold("weil");
    let kinds: &[SumKind] = match cfg.kind {
        SumKind::All => &[SumKind::Gauss, SumKind::Power, SumKind::Salie, SumKind::Kloosterman],
        SumKind::Gauss => &[SumKind::Gauss],
        SumKind::Power => &[SumKind::Power],
        SumKind::Salie => &[SumKind::Salie],
        SumKind::Kloosterman => &[SumKind::Kloosterman],
    };
    let jobs: Vec<(usize, SumKind)> = (0..cfg.fields().len())
        .flat_map(|i| kinds.iter().map(move |&k| (i, k)))
        .collect();
    let blocks = jobs
        .par_iter()
        .map(|&(i, kind)| sum_rows(&cfg.fields()[i], kind, weil))
        .collect::<Result<Vec<_>>>()?;
    let mut table = Table::new("sums", SUMS_COLUMNS);
    table.rows = blocks.into_iter().flatten().collect();
    Ok(table)
}

fn sum_row(
    q: u32,
    kind: SumKind,
    a: u32,
    b: u32,
    value: num_complex::Complex64,
    magnitude: f64,
    bound: f64,
    pass: bool,
) -> Row {
    let ratio = crate::report::ratio(magnitude, bound);
    Row {
        check: kind.as_str().to_string(),
        cells: vec![
            q.to_string(),
            kind.as_str().to_string(),
            a.to_string(),
            b.to_string(),
            fmt_f(value.re),
            fmt_f(value.im),
            fmt_f(magnitude),
            fmt_f(bound),
            fmt_f(ratio),
        ],
        ratio: Some(ratio),
        status: if pass { RowStatus::Pass } else { RowStatus::Fail },
    }
}

fn sum_rows(field: &crate::PrimeField, kind: SumKind, weil: f64) -> Result<Vec<Row>> {
    let q = field.q();
    let root = (q as f64).sqrt();
    let mut rows = Vec::new();
    match kind {
        SumKind::Gauss => {
            for a in 1..q {
                let g = gauss_sum(field, field.elem(a as i64), 1)?;
                let pass = (g.magnitude - root).abs() <= 1e-9 * q as f64;
                rows.push(sum_row(q, kind, a, 1, g.value, g.magnitude, root, pass));
            }
        }
        SumKind::Power => {
            for n in 2..=5u32 {
                for t in 1..q {
                    let te = field.elem(t as i64);
                    let lhs = power_sum(field, te, n);
                    let r = power_sum_identity_check(field, te, n)?;
                    rows.push(sum_row(q, kind, t, n, lhs, r.value, r.bound, r.passed()));
                }
            }
        }
        SumKind::Salie | SumKind::Kloosterman => {
            for a in 0..q {
                for b in 0..q {
                    let (ae, be) = (field.elem(a as i64), field.elem(b as i64));
                    let v = if kind == SumKind::Salie {
                        salie_sum(field, ae, be)
                    } else {
                        kloosterman_sum(field, ae, be)
                    };
                    let bound = if a == 0 && b == 0 && kind == SumKind::Kloosterman {
                        f64::INFINITY
                    } else {
                        weil * root
                    };
                    let pass = v.magnitude <= bound + 1e-6;
                    rows.push(sum_row(q, kind, a, b, v.value, v.magnitude, bound, pass));
                }
            }
        }
        SumKind::All => unreachable!("expanded by the caller"),
    }
    Ok(rows)
}

/// A surface together with its report identity.
struct Cell {
    q: u32,
    d: usize,
    form_id: String,
    j: u32,
    surface: Result<Arc<Surface>>,
}

fn cells(cfg: &SweepConfig) -> Result<Vec<Cell>> {
    cfg.check_grid()?;
    let mut out = Vec::new();
    for field in cfg.fields() {
        for &d in &cfg.d {
            for c in surface_cells(field, d, &cfg.forms, &cfg.j, cfg.seed)? {
                out.push(Cell {
                    q: field.q(),
                    d,
                    form_id: c.form_id,
                    j: c.j,
                    surface: c.surface,
                });
            }
        }
    }
    Ok(out)
}

/// Reports tagged with the exponent pair they refer to.
type Tagged = Vec<(BoundReport, String)>;

/// Runs `f` on every cell in parallel, in cell order; a failing cell yields
/// one error row instead of reports.
fn per_cell<F>(cells: &[Cell], check: &str, f: F) -> Vec<std::result::Result<Tagged, Row>>
where
    F: Fn(&Cell, &Arc<Surface>) -> Result<Tagged> + Sync,
{
    cells
        .par_iter()
        .map(|c| {
            let res = match &c.surface {
                Ok(s) => f(c, s),
                Err(e) => Err(e.clone()),
            };
            res.map_err(|e| Row::error(check, c.q, c.d, &c.form_id, c.j, &e))
        })
        .collect()
}

fn to_rows(outcomes: &[std::result::Result<Tagged, Row>]) -> Vec<Row> {
    let mut rows = Vec::new();
    for o in outcomes {
        match o {
            Ok(tagged) => rows.extend(tagged.iter().map(|(r, e)| Row::from_report(r, e))),
            Err(row) => rows.push(row.clone()),
        }
    }
    rows
}

pub fn cmd_surface_ft(cfg: &SweepConfig) -> Result<Table> {
    let decay = cfg.threshold("decay");
    let cells = cells(cfg)?;
    let mut table = Table::new("surface-ft", SURFACE_FT_COLUMNS);
    table.rows = cells
        .par_iter()
        .map(|c| {
            let summary = c.surface.clone().and_then(|s| surface_ft_summary(&s));
            match summary {
                Ok(s) => {
                    let pass = s.max_abs_gap <= 1e-9
                        && s.max_decay_ratio <= decay + 1e-6
                        && s.origin_gap <= 1e-6
                        && s.count_concentrated()
                        && s.conic_count_ok();
                    Row {
                        check: "surface_ft".into(),
                        cells: vec![
                            c.q.to_string(),
                            c.d.to_string(),
                            c.form_id.clone(),
                            c.j.to_string(),
                            fmt_f(s.max_abs_gap),
                            fmt_f(s.max_decay_ratio),
                            s.cardinality.to_string(),
                            s.count_gap.to_string(),
                        ],
                        ratio: Some(s.max_decay_ratio / decay),
                        status: if pass { RowStatus::Pass } else { RowStatus::Fail },
                    }
                }
                Err(e) => {
                    let mut cells = vec![String::new(); SURFACE_FT_COLUMNS.len()];
                    cells[0] = c.q.to_string();
                    cells[1] = c.d.to_string();
                    cells[2] = c.form_id.clone();
                    cells[3] = c.j.to_string();
                    Row {
                        check: "surface_ft".into(),
                        cells,
                        ratio: None,
                        status: RowStatus::Error(format!("{e:?}")),
                    }
                }
            }
        })
        .collect();
    Ok(table)
}

fn rename(mut r: BoundReport, check: &str) -> BoundReport {
    r.check = check.to_string();
    r
}

pub fn cmd_extension(cfg: &SweepConfig) -> Result<Table> {
    let rstar = cfg.threshold("rstar");
    let decay = cfg.threshold("decay");
    let cells = cells(cfg)?;
    let two = Exponent::integer(2)?;
    let four = Exponent::integer(4)?;
    let mut table = Table::new("extension", REPORT_COLUMNS);
    let outcomes = per_cell(&cells, "extension", |c, s| {
        let mut out = Vec::new();
        let exact = rstar_two_two_exact(s, &c.form_id, cfg.seed, cfg.functions)?;
        out.push((exact, "2->2".to_string()));
        let st = ExponentPair::new(two, stein_tomas_exponent(c.d as i64)?);
        let r = rstar_lower_bound(s, &c.form_id, st, &cfg.families, cfg.seed, rstar)?;
        out.push((rename(r, "stein_tomas"), st.to_string()));
        let l4 = ExponentPair::new(two, four);
        let r = rstar_lower_bound(s, &c.form_id, l4, &cfg.families, cfg.seed, rstar)?;
        out.push((rename(r, "rstar_2_4"), l4.to_string()));
        let mut k = kernel_decay_check(s, &c.form_id)?;
        if decay != crate::extension::DECAY_CONSTANT {
            k = rescale_kernel(k, decay);
        }
        out.push((k, String::new()));
        Ok(out)
    });
    let stein_tomas: Vec<BoundReport> = outcomes
        .iter()
        .filter_map(|o| o.as_ref().ok())
        .flatten()
        .filter(|(r, _)| r.check == "stein_tomas")
        .map(|(r, _)| r.clone())
        .collect();
    table.rows = to_rows(&outcomes);
    table.rows.extend(stein_tomas_trend(&cfg.d, &stein_tomas, rstar));
    Ok(table)
}

fn rescale_kernel(k: BoundReport, decay: f64) -> BoundReport {
    let bound = k.bound / crate::extension::DECAY_CONSTANT * decay;
    BoundReport::upper(k.check, k.context, k.value, bound, 1e-6 * bound, k.witness)
}

/// Per-`(d, q)` maxima of the Stein–Tomas rows, then one growth row per `d`.
fn stein_tomas_trend(dims: &[usize], all: &[BoundReport], threshold: f64) -> Vec<Row> {
    let mut out = Vec::new();
    for &d in dims {
        let reports: Vec<BoundReport> = all.iter().filter(|r| r.context.d == d).cloned().collect();
        if reports.is_empty() {
            continue;
        }
        let exponents = stein_tomas_exponent(d as i64)
            .map(|r| format!("2->{r}"))
            .unwrap_or_default();
        let table = trend_table(&reports);
        for t in &table {
            let report = BoundReport::upper(
                "stein_tomas_trend",
                crate::CheckContext::new(t.q, d).form("*").family(format!("cells={}", t.cells)),
                t.max_value,
                threshold,
                0.0,
                t.witness.clone(),
            );
            out.push(Row::from_report(&report, &exponents));
        }
        let flagged = growth_flag(&table);
        let maxima: Vec<String> = table.iter().map(|t| format!("{:.6}", t.max_value)).collect();
        let mut cells = vec![String::new(); REPORT_COLUMNS.len()];
        cells[0] = "stein_tomas_growth".into();
        cells[2] = d.to_string();
        cells[3] = "*".into();
        cells[6] = exponents;
        cells[11] = format!("maxima={}", maxima.join(";"));
        out.push(Row {
            check: "stein_tomas_growth".into(),
            cells,
            ratio: None,
            status: if flagged {
                RowStatus::Flagged("monotone_growth".into())
            } else {
                RowStatus::Pass
            },
        });
    }
    out
}

pub fn cmd_incidence(cfg: &SweepConfig) -> Result<Table> {
    let c_inc = cfg.threshold("incidence");
    let cells = cells(cfg)?;
    let mut table = Table::new("incidence", REPORT_COLUMNS);
    let outcomes = per_cell(&cells, "incidence", |c, s| {
        let mut out = vec![(pairsum_max_check(s, &c.form_id)?, String::new())];
        let card = s.cardinality();
        let mut jobs = Vec::new();
        for size in dyadic_sizes(card) {
            let reps = if size == card { 1 } else { cfg.subsets };
            for k in 0..reps {
                jobs.push((size, k));
            }
        }
        let blocks = jobs
            .par_iter()
            .map(|&(size, k)| {
                let seed = subset_seed(cfg.seed, s, size, k);
                let e = random_subset(s, size, seed)?;
                let mut out = vec![
                    (shifted_incidence_check(&e, &c.form_id, seed, c_inc)?, String::new()),
                    (energy_check(&e, &c.form_id, seed, c_inc), String::new()),
                    (energy_l4_identity(&e, &c.form_id, seed)?, "4".to_string()),
                    (big_set_l4_check(&e, &c.form_id, seed, c_inc)?, "4/3->4".to_string()),
                ];
                for &p0 in &cfg.p0 {
                    for r in small_set_l4_check(&e, &c.form_id, seed, p0, c_inc)? {
                        out.push((r, format!("{p0}->4")));
                    }
                }
                Ok(out)
            })
            .collect::<Result<Vec<_>>>()?;
        out.extend(blocks.into_iter().flatten());
        Ok(out)
    });
    table.rows = to_rows(&outcomes);
    Ok(table)
}

fn exponent_row(d: usize, p0: &str, kind: &str, p: &str, r: &str, qe: &str, status: RowStatus) -> Row {
    Row {
        check: kind.to_string(),
        cells: vec![
            d.to_string(),
            p0.to_string(),
            kind.to_string(),
            p.to_string(),
            r.to_string(),
            qe.to_string(),
        ],
        ratio: None,
        status,
    }
}

/// Exponent table plus `region ...` trailer lines, one polygon per line.
pub fn cmd_exponents(cfg: &SweepConfig) -> Result<Table> {
    let mut table = Table::new("exponents", EXPONENT_COLUMNS);
    for &d in &cfg.d {
        let di = d as i64;
        let st = stein_tomas_exponent(di)?;
        table
            .rows
            .push(exponent_row(d, "", "stein_tomas_exponent", "2", &st.to_string(), "", RowStatus::Pass));
        let theta = Rational::new(di - 1, di + 1);
        let b = bootstrap_exponent(di, Rational::from_integer(di - 1), theta);
        table.rows.push(match b {
            Ok(b) => exponent_row(
                d,
                "",
                "bootstrap",
                "2",
                &b.r_out.to_string(),
                &b.q_exponent.to_string(),
                if b.q_exponent <= Rational::from_integer(0) {
                    RowStatus::Pass
                } else {
                    RowStatus::Fail
                },
            ),
            Err(e) => exponent_row(d, "", "bootstrap", "", "", "", RowStatus::Error(format!("{e:?}"))),
        });
        for &p0 in &cfg.p0 {
            let p0s = p0.to_string();
            for (kind, branch) in [("incidence_small", SizeBranch::Small), ("incidence_large", SizeBranch::Large)] {
                table.rows.push(match incidence3_exponents(di, p0, branch) {
                    Ok(pair) => exponent_row(d, &p0s, kind, &pair.p.to_string(), &pair.r.to_string(), "", RowStatus::Pass),
                    Err(e) => exponent_row(d, &p0s, kind, "", "", "", RowStatus::Flagged(format!("{e:?}"))),
                });
            }
            for (kind, regime) in [("l4_small", L4Regime::Small), ("l4_middle", L4Regime::Middle)] {
                let e = restricted_l4_q_exponent(di, p0, regime);
                table
                    .rows
                    .push(exponent_row(d, &p0s, kind, &p0s, "4", &e.to_string(), RowStatus::Pass));
            }
        }
        for poly in region_polygons(di, &cfg.p0)? {
            table.trailer.push(match poly {
                Ok(p) => format!("region {}", p.to_line()),
                Err((label, e)) => format!("region {label} undefined:{e:?}"),
            });
        }
    }
    Ok(table)
}

/// Every command, in a fixed order.
pub fn cmd_suite(cfg: &SweepConfig) -> Result<Vec<Table>> {
    Ok(vec![
        cmd_sums(cfg)?,
        cmd_surface_ft(cfg)?,
        cmd_extension(cfg)?,
        cmd_incidence(cfg)?,
        cmd_exponents(cfg)?,
    ])
}
