//! Surface measure, the extension operator `f ↦ (f dσ)^`, the closed-form
//! transform of a quadric surface, the Bochner–Riesz kernel and empirical
//! `R*(p → r)` lower bounds.

pub mod exponents;

use std::sync::Arc;

use num_complex::Complex64;
use num_traits::Zero;
use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use exponents::{
    bootstrap_exponent, incidence3_exponents, interpolate_exponents, region_polygons,
    restricted_l4_q_exponent, stein_tomas_exponent, Bootstrap, ExponentPair, L4Regime, Polygon,
    Rational, SizeBranch,
};

use crate::field::PrimeField;
use crate::fourier::{fourier_forward, norm_phase, norm_surface, Exponent, GridFunction, SurfaceFunction};
use crate::quadform::{grid_point_of, Surface};
use crate::report::{BoundReport, CheckContext};
use crate::{grid_size, mix_seed, Error, Result};

/// Adopted constant in `|Ŝ_j(m)| ≤ C q^{-(d+1)/2}` for `m ≠ 0`.
pub const DECAY_CONSTANT: f64 = 2.0;
/// Default ceiling for measured `R*` lower bounds.
pub const RSTAR_THRESHOLD: f64 = 4.0;

/// `(f dσ)^` on the whole frequency grid.
#[derive(Debug, Clone)]
pub struct ExtensionTransform {
    surface: Arc<Surface>,
    grid: GridFunction,
}

impl ExtensionTransform {
    pub fn surface(&self) -> &Arc<Surface> {
        &self.surface
    }

    pub fn grid(&self) -> &GridFunction {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        self.grid.values()
    }

    pub fn into_grid(self) -> GridFunction {
        self.grid
    }
}

/// `(f dσ)^(m) = (#S)^{-1} Σ_{x∈S} χ(-x·m) f(x)`.
///
/// Uses the axis-factored grid transform once the surface has more than `q`
/// points, the direct sum otherwise.
pub fn extension_transform(f: &SurfaceFunction) -> Result<ExtensionTransform> {
    if f.surface().cardinality() > f.surface().q() as usize {
        extension_transform_factored(f)
    } else {
        extension_transform_direct(f)
    }
}

/// Direct `O(#S · q^d)` sum.
pub fn extension_transform_direct(f: &SurfaceFunction) -> Result<ExtensionTransform> {
    let s = f.surface();
    let scale = 1.0 / s.cardinality() as f64;
    let values = direct_sum(s, f.values(), scale)?;
    Ok(ExtensionTransform {
        surface: s.clone(),
        grid: GridFunction::new(s.field().clone(), s.dim(), values)?,
    })
}

/// Embeds `f` into the grid and runs the `d`-pass forward transform.
pub fn extension_transform_factored(f: &SurfaceFunction) -> Result<ExtensionTransform> {
    let s = f.surface();
    let n = grid_size(s.q(), s.dim())?;
    let mut values = vec![Complex64::zero(); n];
    for (&g, &v) in s.grid_indices().iter().zip(f.values()) {
        values[g] = v;
    }
    let embedded = GridFunction::new(s.field().clone(), s.dim(), values)?;
    let mut grid = fourier_forward(&embedded)?;
    let scale = n as f64 / s.cardinality() as f64;
    grid.values_mut().iter_mut().for_each(|v| *v *= scale);
    Ok(ExtensionTransform {
        surface: s.clone(),
        grid,
    })
}

/// `scale · Σ_{x∈S} χ(-x·m) w(x)` for every `m`, parallel over `m`.
fn direct_sum(s: &Surface, weights: &[Complex64], scale: f64) -> Result<Vec<Complex64>> {
    let q = s.q();
    let d = s.dim();
    let n = grid_size(q, d)?;
    let field = s.field();
    let table = field.char_table();
    let points: Vec<&[u32]> = s.points().collect();
    Ok((0..n)
        .into_par_iter()
        .map_init(
            || vec![0u32; d],
            |m, idx| {
                grid_point_of(q, idx, m);
                let mut acc = Complex64::zero();
                for (x, &w) in points.iter().zip(weights) {
                    let dot = x.iter().zip(m.iter()).fold(0u64, |a, (&xi, &mi)| a + xi as u64 * mi as u64);
                    let t = (dot % q as u64) as u32;
                    acc += table[field.neg(t) as usize] * w;
                }
                acc * scale
            },
        )
        .collect())
}

/// `Ŝ_j(m) = q^{-d} Σ_{x∈S_j} χ(-x·m)` by enumeration.
pub fn surface_ft_direct(surface: &Surface) -> Result<GridFunction> {
    let n = grid_size(surface.q(), surface.dim())?;
    let ones = vec![Complex64::new(1.0, 0.0); surface.cardinality()];
    let values = direct_sum(surface, &ones, 1.0 / n as f64)?;
    GridFunction::new(surface.field().clone(), surface.dim(), values)
}

/// `Ŝ_j(m) = q^{-1} δ₀(m) + q^{-d-1} ψ(c₁⋯c_d) G^d Σ_{t≠0} χ(-jt + t^{-1} M) ψ(t)^d`
/// with `G = Σ_{s≠0} χ(s) ψ(s)`, `Q(P y) = Σ c_k y_k²`, `m' = Pᵀ m` and
/// `M = -Σ_k (4 c_k)^{-1} m'_k²`.
pub fn surface_ft_closed_form(surface: &Surface) -> Result<GridFunction> {
    let form = surface.form();
    if !form.is_nondegenerate() {
        return Err(Error::DegenerateForm);
    }
    let j = surface.level();
    if j == 0 {
        return Err(Error::ZeroLevel);
    }
    let field: &PrimeField = surface.field();
    let q = field.q();
    let d = surface.dim();
    let n = grid_size(q, d)?;
    let diag = form.diagonalize();
    if diag.coeffs.contains(&0) {
        return Err(Error::DegenerateForm);
    }

    let gauss: Complex64 = (1..q).map(|s| field.chi_raw(s) * field.psi_raw(s) as f64).sum();
    let sign = diag.coeffs.iter().fold(1i8, |acc, &c| acc * field.psi_raw(c));
    let weights: Vec<u32> = diag
        .coeffs
        .iter()
        .map(|&c| field.neg(field.inv_raw(field.mul(4 % q, c))))
        .collect();
    let twist_even = d % 2 == 0;
    let kloosterman: Vec<Complex64> = (0..q)
        .map(|big_m| {
            (1..q)
                .map(|t| {
                    let arg = field.add(field.neg(field.mul(j, t)), field.mul(field.inv_raw(t), big_m));
                    let c = field.chi_raw(arg);
                    if twist_even {
                        c
                    } else {
                        c * field.psi_raw(t) as f64
                    }
                })
                .sum()
        })
        .collect();
    let prefactor = gauss.powu(d as u32) * sign as f64 / (q as f64).powi(d as i32 + 1);

    let values = (0..n)
        .into_par_iter()
        .map_init(
            || (vec![0u32; d], vec![0u32; d]),
            |(m, mp), idx| {
                grid_point_of(q, idx, m);
                diag.transpose_apply(field, m, mp);
                let big_m = mp
                    .iter()
                    .zip(&weights)
                    .fold(0u32, |acc, (&v, &w)| field.add(acc, field.mul(w, field.mul(v, v))));
                let mut value = prefactor * kloosterman[big_m as usize];
                if idx == 0 {
                    value += 1.0 / q as f64;
                }
                value
            },
        )
        .collect();
    GridFunction::new(surface.field().clone(), d, values)
}

/// `K(m) = (dσ)^(m) - δ₀(m)`, with `K(0) = 0` exactly.
pub fn bochner_riesz_kernel(surface: &Surface) -> Result<GridFunction> {
    let mut k = surface_ft_closed_form(surface)?;
    let scale = k.len() as f64 / surface.cardinality() as f64;
    let values = k.values_mut();
    values.iter_mut().for_each(|v| *v *= scale);
    values[0] = Complex64::zero();
    Ok(k)
}

fn context(surface: &Surface, form_id: &str) -> CheckContext {
    CheckContext::new(surface.q(), surface.dim())
        .form(form_id)
        .level(surface.level())
}

fn frequency_label(q: u32, d: usize, idx: usize) -> String {
    let mut m = vec![0u32; d];
    grid_point_of(q, idx, &mut m);
    let parts: Vec<String> = m.iter().map(u32::to_string).collect();
    format!("m=({})", parts.join(","))
}

/// `max_{m≠0} |K(m)|` against `2 (q^{d-1}/#S) q^{-(d-1)/2}`.
pub fn kernel_decay_check(surface: &Surface, form_id: &str) -> Result<BoundReport> {
    let k = bochner_riesz_kernel(surface)?;
    let (q, d) = (surface.q(), surface.dim());
    let (max, at) = k.max_modulus(true);
    let qf = q as f64;
    let bound = DECAY_CONSTANT * qf.powi(d as i32 - 1) / surface.cardinality() as f64 * qf.powf(-((d - 1) as f64) / 2.0);
    Ok(BoundReport::upper(
        "kernel_decay",
        context(surface, form_id),
        max,
        bound,
        1e-6 * bound,
        frequency_label(q, d, at),
    ))
}

/// Per-surface summary of the closed form against enumeration.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SurfaceFtSummary {
    pub q: u32,
    pub d: usize,
    pub j: u32,
    /// `max_m |closed − direct|`.
    pub max_abs_gap: f64,
    /// `max_{m≠0} |Ŝ_j(m)| q^{(d+1)/2}`.
    pub max_decay_ratio: f64,
    pub decay_witness: String,
    pub cardinality: usize,
    /// `#S_j − q^{d-1}`.
    pub count_gap: i64,
    /// `|q^d Ŝ_j(0) − #S_j|` from the closed form.
    pub origin_gap: f64,
}

impl SurfaceFtSummary {
    /// `|#S_j − q^{d-1}| ≤ q^{(d-1)/2}`, compared as `gap² ≤ q^{d-1}`.
    pub fn count_concentrated(&self) -> bool {
        let gap = self.count_gap.unsigned_abs() as u128;
        gap * gap <= (self.q as u128).pow(self.d as u32 - 1)
    }

    /// For `d = 2` the conic has `q ± 1` points.
    pub fn conic_count_ok(&self) -> bool {
        self.d != 2 || self.count_gap.abs() == 1
    }

    pub fn passed(&self) -> bool {
        self.max_abs_gap <= 1e-9
            && self.max_decay_ratio <= DECAY_CONSTANT + 1e-6
            && self.origin_gap <= 1e-6
            && self.count_concentrated()
            && self.conic_count_ok()
    }
}

pub fn surface_ft_summary(surface: &Surface) -> Result<SurfaceFtSummary> {
    let closed = surface_ft_closed_form(surface)?;
    let direct = surface_ft_direct(surface)?;
    let (q, d) = (surface.q(), surface.dim());
    let max_abs_gap = closed
        .values()
        .iter()
        .zip(direct.values())
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max);
    let (max, at) = closed.max_modulus(true);
    let qf = q as f64;
    let card = surface.cardinality();
    Ok(SurfaceFtSummary {
        q,
        d,
        j: surface.level(),
        max_abs_gap,
        max_decay_ratio: max * qf.powf((d + 1) as f64 / 2.0),
        decay_witness: frequency_label(q, d, at),
        cardinality: card,
        count_gap: card as i64 - (q as i64).pow(d as u32 - 1),
        origin_gap: (closed.values()[0].re * closed.len() as f64 - card as f64).abs(),
    })
}

fn ratio_of(f: &SurfaceFunction, pr: ExponentPair) -> Result<f64> {
    let ext = extension_transform(f)?;
    Ok(norm_phase(ext.grid(), pr.r) / norm_surface(f, pr.p))
}

fn gaussian_function(surface: &Arc<Surface>, rng: &mut ChaCha8Rng) -> Result<SurfaceFunction> {
    let values = (0..surface.cardinality())
        .map(|_| {
            let re: f64 = StandardNormal.sample(rng);
            let im: f64 = StandardNormal.sample(rng);
            Complex64::new(re, im)
        })
        .collect();
    SurfaceFunction::new(surface.clone(), values)
}

/// `‖(f dσ)^‖_{L²(dm)} / ‖f‖_{L²(dσ)} = q^{d/2} (#S)^{-1/2}` for every `f`;
/// checked on `count` seeded Gaussian functions plus a point mass.
///
/// The reported value is the ratio farthest from the constant.
pub fn rstar_two_two_exact(surface: &Arc<Surface>, form_id: &str, seed: u64, count: usize) -> Result<BoundReport> {
    let (q, d) = (surface.q(), surface.dim());
    let expected = (q as f64).powf(d as f64 / 2.0) / (surface.cardinality() as f64).sqrt();
    let two = ExponentPair::finite(Rational::from_integer(2), Rational::from_integer(2))?;
    let mut rng = ChaCha8Rng::seed_from_u64(mix_seed(&[seed, q as u64, d as u64, surface.level() as u64]));
    let mut worst = (0.0f64, f64::NAN, String::new());
    let point = SurfaceFunction::indicator(surface.clone(), &[0])?;
    let mut consider = |f: &SurfaceFunction, label: String| -> Result<()> {
        let r = ratio_of(f, two)?;
        let dev = (r - expected).abs();
        if worst.1.is_nan() || dev > worst.0 {
            worst = (dev, r, label);
        }
        Ok(())
    };
    consider(&point, "point#0".into())?;
    for k in 0..count {
        let f = gaussian_function(surface, &mut rng)?;
        consider(&f, format!("random#{k}"))?;
    }
    Ok(BoundReport::identity(
        "rstar_2_2_exact",
        context(surface, form_id).seed(seed).family("point,random"),
        worst.1,
        expected,
        1e-9,
        worst.2,
    ))
}

/// Test functions tried by [`rstar_lower_bound`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Families {
    /// `f ≡ 1`.
    pub constant: bool,
    /// Number of seeded point masses.
    pub point_masses: usize,
    /// Number of seeded complex Gaussian functions.
    pub random: usize,
    /// Random subsets per dyadic size `1, 2, 4, …` (the full surface is added).
    pub subsets_per_size: usize,
    /// Caps `S ∩ {x₁ = c}` for every `c`.
    pub caps: bool,
}

impl Default for Families {
    fn default() -> Self {
        Self {
            constant: true,
            point_masses: 4,
            random: 8,
            subsets_per_size: 2,
            caps: true,
        }
    }
}

impl Families {
    pub fn is_empty(&self) -> bool {
        !self.constant && self.point_masses == 0 && self.random == 0 && self.subsets_per_size == 0 && !self.caps
    }

    pub fn label(&self) -> String {
        let mut parts = Vec::new();
        if self.constant {
            parts.push("constant".to_string());
        }
        if self.point_masses > 0 {
            parts.push(format!("point*{}", self.point_masses));
        }
        if self.random > 0 {
            parts.push(format!("random*{}", self.random));
        }
        if self.subsets_per_size > 0 {
            parts.push(format!("subset*{}", self.subsets_per_size));
        }
        if self.caps {
            parts.push("caps".to_string());
        }
        parts.join("+")
    }
}

/// Dyadic sizes `1, 2, 4, … < n`, then `n`.
pub fn dyadic_sizes(n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut s = 1;
    while s < n {
        out.push(s);
        s *= 2;
    }
    if n > 0 {
        out.push(n);
    }
    out
}

fn candidates(surface: &Arc<Surface>, families: &Families, seed: u64) -> Result<Vec<(String, SurfaceFunction)>> {
    let card = surface.cardinality();
    let mut rng = ChaCha8Rng::seed_from_u64(mix_seed(&[
        seed,
        surface.q() as u64,
        surface.dim() as u64,
        surface.level() as u64,
    ]));
    let mut out = Vec::new();
    if families.constant {
        out.push(("constant".to_string(), SurfaceFunction::constant(surface.clone(), Complex64::new(1.0, 0.0))));
    }
    if families.point_masses > 0 && card > 0 {
        let picks = sample(&mut rng, card, families.point_masses.min(card));
        let mut picks = picks.into_vec();
        picks.sort_unstable();
        for i in picks {
            out.push((format!("point#{i}"), SurfaceFunction::indicator(surface.clone(), &[i])?));
        }
    }
    for k in 0..families.random {
        out.push((format!("random#{k}"), gaussian_function(surface, &mut rng)?));
    }
    if families.subsets_per_size > 0 {
        for size in dyadic_sizes(card) {
            let reps = if size == card { 1 } else { families.subsets_per_size };
            for k in 0..reps {
                let mut members = sample(&mut rng, card, size).into_vec();
                members.sort_unstable();
                out.push((format!("subset#{size}.{k}"), SurfaceFunction::indicator(surface.clone(), &members)?));
            }
        }
    }
    if families.caps {
        for c in 0..surface.q() {
            let members: Vec<usize> = surface
                .points()
                .enumerate()
                .filter(|(_, x)| x[0] == c)
                .map(|(i, _)| i)
                .collect();
            if !members.is_empty() {
                out.push((format!("cap#x1={c}"), SurfaceFunction::indicator(surface.clone(), &members)?));
            }
        }
    }
    Ok(out)
}

/// Largest `‖(f dσ)^‖_r / ‖f‖_p` over the selected families: a certified
/// lower bound for `R*(p → r)`, checked against `threshold`.
pub fn rstar_lower_bound(
    surface: &Arc<Surface>,
    form_id: &str,
    pr: ExponentPair,
    families: &Families,
    seed: u64,
    threshold: f64,
) -> Result<BoundReport> {
    if families.is_empty() {
        return Err(Error::EmptyFamily);
    }
    let cands = candidates(surface, families, seed)?;
    if cands.is_empty() {
        return Err(Error::EmptyFamily);
    }
    let ratios = cands
        .par_iter()
        .map(|(_, f)| ratio_of(f, pr))
        .collect::<Result<Vec<f64>>>()?;
    // first maximizer in candidate order
    let (best, value) = ratios
        .iter()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |acc, (i, &r)| if r > acc.1 { (i, r) } else { acc });
    Ok(BoundReport::upper(
        format!("rstar_{}_{}", pr.p, pr.r),
        context(surface, form_id).seed(seed).family(families.label()),
        value,
        threshold,
        0.0,
        cands[best].0.clone(),
    ))
}

/// Largest measured value per `q` of a Stein–Tomas sweep.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrendRow {
    pub q: u32,
    pub cells: usize,
    pub max_value: f64,
    pub witness: String,
}

/// Raised when the per-`q` maxima increase strictly at every step of a
/// list of at least three primes.
pub fn growth_flag(rows: &[TrendRow]) -> bool {
    rows.len() >= 3 && rows.windows(2).all(|w| w[1].max_value > w[0].max_value)
}

/// Collapses per-cell reports into the per-`q` trend table, in `q` order.
pub fn trend_table(reports: &[BoundReport]) -> Vec<TrendRow> {
    let mut qs: Vec<u32> = reports.iter().map(|r| r.context.q).collect();
    qs.sort_unstable();
    qs.dedup();
    qs.into_iter()
        .map(|q| {
            let cells: Vec<&BoundReport> = reports.iter().filter(|r| r.context.q == q).collect();
            let best = cells
                .iter()
                .fold(None::<&BoundReport>, |acc, r| match acc {
                    Some(a) if a.value >= r.value => Some(a),
                    _ => Some(r),
                })
                .expect("at least one cell");
            TrendRow {
                q,
                cells: cells.len(),
                max_value: best.value,
                witness: format!("{} j={} {}", best.context.form_id, best.context.j.unwrap_or(0), best.witness),
            }
        })
        .collect()
}

/// `R*(2 → (2d+2)/(d-1))` lower bounds for every surface given, plus the
/// trend table.
pub fn stein_tomas_sweep(
    surfaces: &[(String, Arc<Surface>)],
    families: &Families,
    seed: u64,
    threshold: f64,
) -> Result<(Vec<BoundReport>, Vec<TrendRow>)> {
    let reports = surfaces
        .iter()
        .map(|(id, s)| {
            let pr = ExponentPair::new(Exponent::integer(2)?, stein_tomas_exponent(s.dim() as i64)?);
            rstar_lower_bound(s, id, pr, families, seed, threshold)
        })
        .collect::<Result<Vec<_>>>()?;
    let table = trend_table(&reports);
    Ok((reports, table))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::make_field;
    use crate::fourier::measure_convolution;
    use crate::quadform::{enumerate_surface, QuadraticForm};

    fn circle(q: u32, j: i64) -> Arc<Surface> {
        let f = Arc::new(make_field(q).unwrap());
        let form = QuadraticForm::identity(f.clone(), 2).unwrap();
        Arc::new(enumerate_surface(&form, f.elem(j)).unwrap())
    }

    fn random_surface(q: u32, d: usize, seed: u64, j: i64) -> Arc<Surface> {
        let f = Arc::new(make_field(q).unwrap());
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let form = QuadraticForm::random(f.clone(), d, &mut rng).unwrap();
        Arc::new(enumerate_surface(&form, f.elem(j)).unwrap())
    }

    #[test]
    fn extension_examples() {
        let s = circle(3, 1);
        let one = SurfaceFunction::constant(s.clone(), Complex64::new(1.0, 0.0));
        let e = extension_transform(&one).unwrap();
        assert!((e.values()[0] - Complex64::new(1.0, 0.0)).norm() < 1e-12);
        // m = (1, 0) has grid index 3
        assert!((e.values()[3] - Complex64::new(0.25, 0.0)).norm() < 1e-12);

        let delta = SurfaceFunction::indicator(s.clone(), &[2]).unwrap();
        let e = extension_transform(&delta).unwrap();
        assert!(e.values().iter().all(|v| (v.norm() - 0.25).abs() < 1e-12));
    }

    #[test]
    fn direct_and_factored_agree() {
        let s = random_surface(7, 3, 3, 2);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let f = gaussian_function(&s, &mut rng).unwrap();
        let a = extension_transform_direct(&f).unwrap();
        let b = extension_transform_factored(&f).unwrap();
        let gap = a.values().iter().zip(b.values()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max);
        assert!(gap < 1e-12, "gap {gap}");
    }

    #[test]
    fn surface_ft_examples() {
        let s = circle(3, 1);
        let direct = surface_ft_direct(&s).unwrap();
        let closed = surface_ft_closed_form(&s).unwrap();
        assert!((direct.values()[0].re - 4.0 / 9.0).abs() < 1e-15);
        assert!((closed.values()[0].re - 4.0 / 9.0).abs() < 1e-9);

        let s5 = circle(5, 1);
        let summary = surface_ft_summary(&s5).unwrap();
        assert!(summary.max_decay_ratio <= 2.0 + 1e-6);
        assert!(summary.passed());
    }

    #[test]
    fn closed_form_matches_enumeration_q7_d3() {
        for j in 1..7 {
            let s = random_surface(7, 3, 11, j);
            let summary = surface_ft_summary(&s).unwrap();
            assert!(summary.max_abs_gap <= 1e-9, "j={j} gap={}", summary.max_abs_gap);
        }
    }

    #[test]
    fn kernel_examples() {
        let s = circle(3, 1);
        let k = bochner_riesz_kernel(&s).unwrap();
        assert_eq!(k.values()[0], Complex64::zero());
        assert!((k.values()[3].re - 0.25).abs() < 1e-9);
        let r = kernel_decay_check(&s, "diag:1,1").unwrap();
        assert!((r.bound - 2.0 * 0.75 / 3f64.sqrt()).abs() < 1e-12);
        assert!(r.passed());
    }

    #[test]
    fn two_two_constant() {
        let s = circle(3, 1);
        let r = rstar_two_two_exact(&s, "diag:1,1", 0, 20).unwrap();
        assert!((r.bound - 1.5).abs() < 1e-15);
        assert!(r.passed(), "{r:?}");

        let s = random_surface(5, 3, 7, 1);
        let r = rstar_two_two_exact(&s, "random", 9, 100).unwrap();
        assert!(r.passed());
        assert!((r.bound - 5f64.powf(1.5) / (s.cardinality() as f64).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn lower_bound_families() {
        let s = circle(7, 3);
        let two = ExponentPair::finite(Rational::from_integer(2), Rational::from_integer(2)).unwrap();
        let exact = rstar_two_two_exact(&s, "c", 0, 4).unwrap();
        let lb = rstar_lower_bound(&s, "c", two, &Families::default(), 0, 4.0).unwrap();
        assert!((lb.value - exact.bound).abs() <= 1e-9 * exact.bound);

        let inf = ExponentPair::new(Exponent::integer(3).unwrap(), Exponent::Infinite);
        let only_one = Families {
            constant: true,
            point_masses: 0,
            random: 0,
            subsets_per_size: 0,
            caps: false,
        };
        let lb = rstar_lower_bound(&s, "c", inf, &only_one, 0, 4.0).unwrap();
        assert!((lb.value - 1.0).abs() < 1e-12);
        assert_eq!(lb.witness, "constant");

        let none = Families {
            constant: false,
            ..only_one
        };
        assert_eq!(rstar_lower_bound(&s, "c", inf, &none, 0, 4.0).unwrap_err(), Error::EmptyFamily);
    }

    #[test]
    fn l4_squared_is_convolution_l2() {
        let s = random_surface(5, 3, 2, 3);
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..5 {
            let f = gaussian_function(&s, &mut rng).unwrap();
            let ext = extension_transform(&f).unwrap();
            let lhs = norm_phase(ext.grid(), Exponent::integer(4).unwrap()).powi(2);
            let conv = measure_convolution(&f, &f).unwrap();
            let rhs = crate::fourier::norm_space(&conv, Exponent::integer(2).unwrap());
            assert!((lhs - rhs).abs() <= 1e-9 * rhs);
        }
    }

    #[test]
    fn dyadic() {
        assert_eq!(dyadic_sizes(4), vec![1, 2, 4]);
        assert_eq!(dyadic_sizes(6), vec![1, 2, 4, 6]);
        assert_eq!(dyadic_sizes(1), vec![1]);
    }

    #[test]
    fn growth_flag_rule() {
        let row = |q, v| TrendRow {
            q,
            cells: 1,
            max_value: v,
            witness: String::new(),
        };
        assert!(growth_flag(&[row(5, 1.0), row(7, 1.1), row(11, 1.2)]));
        assert!(!growth_flag(&[row(5, 1.0), row(7, 1.1), row(11, 1.05)]));
        assert!(!growth_flag(&[row(5, 1.0), row(7, 1.1)]));
    }
}
