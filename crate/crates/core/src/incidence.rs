//! Pair sums on a surface, shifted incidences, additive energy and the
//! restricted-set `L⁴` estimates built on them.

use std::collections::HashMap;
use std::sync::Arc;

use num_complex::Complex64;
use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::extension::{extension_transform, restricted_l4_q_exponent, L4Regime, Rational};
use crate::fourier::{norm_phase, Exponent, SurfaceFunction};
use crate::quadform::{grid_index_of, grid_point_of, Surface};
use crate::report::{BoundReport, CheckContext};
use crate::{grid_size, mix_seed, Error, Result};

/// Constant used for every `≲` assertion in this module.
pub const INCIDENCE_CONSTANT: f64 = 4.0;

/// A subset `E ⊂ S_j`, stored as sorted point positions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubsetE {
    surface: Arc<Surface>,
    members: Vec<usize>,
}

impl SubsetE {
    pub fn new(surface: Arc<Surface>, members: Vec<usize>) -> Result<Self> {
        if members.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::BadSubset("members must be strictly increasing".into()));
        }
        if let Some(&last) = members.last() {
            if last >= surface.cardinality() {
                return Err(Error::BadSubset(format!(
                    "index {last} out of range for {} points",
                    surface.cardinality()
                )));
            }
        }
        Ok(Self { surface, members })
    }

    pub fn full(surface: Arc<Surface>) -> Self {
        let members = (0..surface.cardinality()).collect();
        Self { surface, members }
    }

    pub fn size(&self) -> usize {
        self.members.len()
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn surface(&self) -> &Arc<Surface> {
        &self.surface
    }

    pub fn points(&self) -> impl Iterator<Item = &[u32]> + '_ {
        self.members.iter().map(|&i| self.surface.point(i))
    }

    pub fn indicator(&self) -> SurfaceFunction {
        SurfaceFunction::indicator(self.surface.clone(), &self.members).expect("members validated")
    }
}

/// Uniform sample of `size` distinct points, reproducible from `seed`.
pub fn random_subset(surface: &Arc<Surface>, size: usize, seed: u64) -> Result<SubsetE> {
    let card = surface.cardinality();
    if size > card {
        return Err(Error::SizeTooLarge {
            size,
            cardinality: card,
        });
    }
    if size == 0 {
        return Err(Error::BadSubset("size must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut members = sample(&mut rng, card, size).into_vec();
    members.sort_unstable();
    Ok(SubsetE {
        surface: surface.clone(),
        members,
    })
}

fn context(surface: &Surface, form_id: &str) -> CheckContext {
    CheckContext::new(surface.q(), surface.dim())
        .form(form_id)
        .level(surface.level())
}

fn point_label(x: &[u32]) -> String {
    let parts: Vec<String> = x.iter().map(u32::to_string).collect();
    format!("({})", parts.join(","))
}

/// `#{(α, β) ∈ S × S : α + β = x}`.
pub fn pairsum_count(surface: &Surface, x: &[u32]) -> u64 {
    let field = surface.field();
    let mut beta = vec![0u32; x.len()];
    surface
        .points()
        .filter(|alpha| {
            for k in 0..x.len() {
                beta[k] = field.sub(x[k], alpha[k]);
            }
            surface.contains(&beta)
        })
        .count() as u64
}

/// `pairsum_count(x) ≤ 2 q^{d-2}` for a single `x ≠ 0`.
pub fn pairsum_check(surface: &Surface, form_id: &str, x: &[u32]) -> Result<BoundReport> {
    if x.iter().all(|&c| c == 0) {
        return Err(Error::ZeroShift);
    }
    let bound = 2 * (surface.q() as u64).pow(surface.dim() as u32 - 2);
    let count = pairsum_count(surface, x);
    Ok(BoundReport::upper(
        "pairsum",
        context(surface, form_id),
        count as f64,
        bound as f64,
        0.0,
        format!("x={}", point_label(x)),
    ))
}

/// Pair-sum counts for every `x` at once, from one pass over `S × S`.
pub fn pairsum_profile(surface: &Surface) -> Result<Vec<u64>> {
    let q = surface.q();
    let n = grid_size(q, surface.dim())?;
    let field = surface.field();
    let mut counts = vec![0u64; n];
    let points: Vec<&[u32]> = surface.points().collect();
    for a in &points {
        for b in &points {
            let idx = a
                .iter()
                .zip(b.iter())
                .fold(0usize, |acc, (&u, &v)| acc * q as usize + field.add(u, v) as usize);
            counts[idx] += 1;
        }
    }
    Ok(counts)
}

/// `max_{x≠0} pairsum_count(x) ≤ 2 q^{d-2}`, exact integers; the smallest
/// maximizing `x` is the witness.
pub fn pairsum_max_check(surface: &Surface, form_id: &str) -> Result<BoundReport> {
    let counts = pairsum_profile(surface)?;
    let (at, max) = counts
        .iter()
        .enumerate()
        .skip(1)
        .fold((1, 0u64), |acc, (i, &c)| if c > acc.1 { (i, c) } else { acc });
    let bound = 2 * (surface.q() as u64).pow(surface.dim() as u32 - 2);
    let mut x = vec![0u32; surface.dim()];
    grid_point_of(surface.q(), at, &mut x);
    Ok(BoundReport::upper(
        "pairsum",
        context(surface, form_id),
        max as f64,
        bound as f64,
        0.0,
        format!("x={}", point_label(&x)),
    ))
}

/// `#{(x, y) ∈ E × E : x − y + z ∈ S}`.
pub fn shifted_incidence_count(e: &SubsetE, z: &[u32]) -> u64 {
    let s = e.surface();
    let field = s.field();
    let pts: Vec<&[u32]> = e.points().collect();
    let mut w = vec![0u32; z.len()];
    let mut count = 0;
    for x in &pts {
        for y in &pts {
            for k in 0..z.len() {
                w[k] = field.add(field.sub(x[k], y[k]), z[k]);
            }
            if s.contains(&w) {
                count += 1;
            }
        }
    }
    count
}

/// Shifted incidence counts for every `z`, via the difference counts
/// `D(v) = #{(x, y) ∈ E² : x − y = v}` and `count(z) = Σ_{s∈S} D(s − z)`.
pub fn shifted_incidence_profile(e: &SubsetE) -> Result<Vec<u64>> {
    let s = e.surface();
    let q = s.q();
    let d = s.dim();
    let n = grid_size(q, d)?;
    let field = s.field();
    let pts: Vec<&[u32]> = e.points().collect();
    let mut diff = vec![0u64; n];
    for x in &pts {
        for y in &pts {
            let idx = x
                .iter()
                .zip(y.iter())
                .fold(0usize, |acc, (&u, &v)| acc * q as usize + field.sub(u, v) as usize);
            diff[idx] += 1;
        }
    }
    let surface_pts: Vec<&[u32]> = s.points().collect();
    Ok((0..n)
        .into_par_iter()
        .map_init(
            || (vec![0u32; d], vec![0u32; d]),
            |(z, v), zi| {
                grid_point_of(q, zi, z);
                surface_pts
                    .iter()
                    .map(|p| {
                        for k in 0..d {
                            v[k] = field.sub(p[k], z[k]);
                        }
                        diff[grid_index_of(q, v)]
                    })
                    .sum()
            },
        )
        .collect())
}

/// `max_z count(z) ≤ C ((#E)²/q + #E q^{(d-1)/2})`.
pub fn shifted_incidence_check(e: &SubsetE, form_id: &str, seed: u64, c: f64) -> Result<BoundReport> {
    let s = e.surface();
    let profile = shifted_incidence_profile(e)?;
    let (at, max) = profile
        .iter()
        .enumerate()
        .fold((0, 0u64), |acc, (i, &v)| if v > acc.1 { (i, v) } else { acc });
    let (q, d) = (s.q() as f64, s.dim());
    let n = e.size() as f64;
    let bound = c * (n * n / q + n * q.powf((d - 1) as f64 / 2.0));
    let mut z = vec![0u32; d];
    grid_point_of(s.q(), at, &mut z);
    Ok(BoundReport::upper(
        "shifted_incidence",
        context(s, form_id).seed(seed).family(format!("subset#{}", e.size())),
        max as f64,
        bound,
        0.0,
        format!("z={}", point_label(&z)),
    ))
}

/// Additive energy and its two ceilings.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EnergyReport {
    pub energy: u64,
    pub size: usize,
    /// `(#E)³`.
    pub trivial_bound: f64,
    /// `C ((#E)³/q + (#E)² q^{(d-1)/2})`.
    pub incidence_bound: f64,
}

impl EnergyReport {
    pub fn ceiling(&self) -> f64 {
        self.trivial_bound.min(self.incidence_bound)
    }

    pub fn within_bounds(&self) -> bool {
        let n = self.size as u64;
        self.energy >= n * n && self.energy as f64 <= self.ceiling()
    }
}

/// `Λ(E) = Σ_s r(s)²` with `r(s) = #{(x, z) ∈ E² : x + z = s}`.
pub fn additive_energy(e: &SubsetE) -> EnergyReport {
    additive_energy_with(e, INCIDENCE_CONSTANT)
}

pub fn additive_energy_with(e: &SubsetE, c: f64) -> EnergyReport {
    let s = e.surface();
    let q = s.q();
    let field = s.field();
    let pts: Vec<&[u32]> = e.points().collect();
    let mut r: HashMap<usize, u64> = HashMap::with_capacity(pts.len() * pts.len());
    for x in &pts {
        for z in &pts {
            let idx = x
                .iter()
                .zip(z.iter())
                .fold(0usize, |acc, (&u, &v)| acc * q as usize + field.add(u, v) as usize);
            *r.entry(idx).or_insert(0) += 1;
        }
    }
    let energy = r.values().map(|v| v * v).sum();
    let n = e.size() as f64;
    let qf = q as f64;
    EnergyReport {
        energy,
        size: e.size(),
        trivial_bound: n.powi(3),
        incidence_bound: c * (n.powi(3) / qf + n * n * qf.powf((s.dim() - 1) as f64 / 2.0)),
    }
}

pub fn energy_check(e: &SubsetE, form_id: &str, seed: u64, c: f64) -> BoundReport {
    let rep = additive_energy_with(e, c);
    let mut out = BoundReport::upper(
        "energy",
        context(e.surface(), form_id).seed(seed).family(format!("subset#{}", e.size())),
        rep.energy as f64,
        rep.ceiling(),
        0.0,
        format!("size={}", rep.size),
    );
    if !rep.within_bounds() {
        out.status = crate::Status::Fail;
    }
    out
}

fn l4_of_indicator(e: &SubsetE) -> Result<f64> {
    let ext = extension_transform(&e.indicator())?;
    Ok(norm_phase(ext.grid(), Exponent::integer(4)?))
}

/// `‖(E dσ)^‖₄ = q^{d/4} Λ(E)^{1/4} / #S`, both sides computed separately.
pub fn energy_l4_identity(e: &SubsetE, form_id: &str, seed: u64) -> Result<BoundReport> {
    let s = e.surface();
    let lhs = l4_of_indicator(e)?;
    let energy = additive_energy(e).energy as f64;
    let qd = (s.q() as f64).powi(s.dim() as i32);
    let rhs = (qd * energy).powf(0.25) / s.cardinality() as f64;
    Ok(BoundReport::identity(
        "energy_l4_identity",
        context(s, form_id).seed(seed).family(format!("subset#{}", e.size())),
        lhs,
        rhs,
        1e-8,
        format!("energy={energy}"),
    ))
}

/// `‖(E dσ)^‖₄ / ‖E‖_{L^{4/3}(dσ)} ≤ C`, asserted when `(#E)² ≥ q^{d+1}`.
pub fn big_set_l4_check(e: &SubsetE, form_id: &str, seed: u64, c: f64) -> Result<BoundReport> {
    let s = e.surface();
    let lhs = l4_of_indicator(e)?;
    let density = e.size() as f64 / s.cardinality() as f64;
    let value = lhs / density.powf(0.75);
    let report = BoundReport::upper(
        "big_set_l4",
        context(s, form_id).seed(seed).family(format!("subset#{}", e.size())),
        value,
        c,
        0.0,
        format!("size={}", e.size()),
    );
    let n = e.size() as u128;
    if n * n < (s.q() as u128).pow(s.dim() as u32 + 1) {
        Ok(report.out_of_regime())
    } else {
        Ok(report)
    }
}

/// Size regimes that apply to `#E`, by exact comparison of `(#E)²` with
/// `q^{d±1}`.
pub fn l4_regimes(size: usize, q: u32, d: usize) -> Vec<L4Regime> {
    let n2 = (size as u128) * (size as u128);
    let lo = (q as u128).pow(d as u32 - 1);
    let hi = (q as u128).pow(d as u32 + 1);
    let mut out = Vec::new();
    if n2 <= lo {
        out.push(L4Regime::Small);
    }
    if lo <= n2 && n2 <= hi {
        out.push(L4Regime::Middle);
    }
    if n2 <= hi {
        out.push(L4Regime::Union);
    }
    out
}

fn rational_f64(r: Rational) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// `‖(E dσ)^‖₄ / (q^e ‖E‖_{L^{p₀}(dσ)}) ≤ C` for each regime containing `#E`.
/// Sets above every regime give a single out-of-regime row.
pub fn small_set_l4_check(e: &SubsetE, form_id: &str, seed: u64, p0: Rational, c: f64) -> Result<Vec<BoundReport>> {
    if p0 < Rational::from_integer(2) {
        return Err(Error::BadExponent);
    }
    let s = e.surface();
    let (q, d) = (s.q(), s.dim());
    let lhs = l4_of_indicator(e)?;
    let density = e.size() as f64 / s.cardinality() as f64;
    let e_norm = density.powf(1.0 / rational_f64(p0));
    let row = |regime: L4Regime| {
        let exponent = restricted_l4_q_exponent(d as i64, p0, regime);
        let scale = (q as f64).powf(rational_f64(exponent));
        BoundReport::upper(
            format!("small_set_l4_{}", regime.as_str()),
            context(s, form_id)
                .seed(seed)
                .family(format!("subset#{} p0={p0}", e.size())),
            lhs / (scale * e_norm),
            c,
            0.0,
            format!("size={} q_exponent={exponent}", e.size()),
        )
    };
    let regimes = l4_regimes(e.size(), q, d);
    if regimes.is_empty() {
        return Ok(vec![row(L4Regime::Union).out_of_regime()]);
    }
    Ok(regimes.into_iter().map(row).collect())
}

/// Seed of the `k`-th subset of size `size` for a surface.
pub fn subset_seed(seed: u64, surface: &Surface, size: usize, k: usize) -> u64 {
    mix_seed(&[
        seed,
        surface.q() as u64,
        surface.dim() as u64,
        surface.level() as u64,
        size as u64,
        k as u64,
    ])
}

pub fn constant_one(surface: &Arc<Surface>) -> SurfaceFunction {
    SurfaceFunction::constant(surface.clone(), Complex64::new(1.0, 0.0))
}
