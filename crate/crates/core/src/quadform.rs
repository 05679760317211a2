//! Non-degenerate quadratic forms over `F_q`, congruent diagonalization and
//! level-surface enumeration.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;
use std::sync::Arc;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::field::{FieldElement, PrimeField};
use crate::{grid_size, mix_seed, Error, Result};

/// `Q(x) = Σ a_ij x_i x_j` with a symmetric coefficient matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadraticForm {
    field: Arc<PrimeField>,
    d: usize,
    a: Vec<u32>,
}

impl QuadraticForm {
    /// Builds a form from a row-major `d × d` matrix of integers.
    pub fn new(field: Arc<PrimeField>, d: usize, entries: &[i64]) -> Result<Self> {
        if d < 2 {
            return Err(Error::BadDimension(format!("forms need d >= 2, got {d}")));
        }
        if entries.len() != d * d {
            return Err(Error::DimensionMismatch {
                expected: d * d,
                got: entries.len(),
            });
        }
        let a: Vec<u32> = entries.iter().map(|&v| field.elem(v).value()).collect();
        for i in 0..d {
            for j in i + 1..d {
                if a[i * d + j] != a[j * d + i] {
                    return Err(Error::NotSymmetric(i, j));
                }
            }
        }
        Ok(Self { field, d, a })
    }

    pub fn diagonal(field: Arc<PrimeField>, coeffs: &[i64]) -> Result<Self> {
        let d = coeffs.len();
        let mut entries = vec![0i64; d * d];
        for (k, &c) in coeffs.iter().enumerate() {
            entries[k * d + k] = c;
        }
        Self::new(field, d, &entries)
    }

    pub fn identity(field: Arc<PrimeField>, d: usize) -> Result<Self> {
        Self::diagonal(field, &vec![1; d])
    }

    /// Uniformly random symmetric matrix, resampled until non-degenerate.
    pub fn random<R: Rng>(field: Arc<PrimeField>, d: usize, rng: &mut R) -> Result<Self> {
        let q = field.q();
        loop {
            let mut entries = vec![0i64; d * d];
            for i in 0..d {
                for j in i..d {
                    let v = rng.random_range(0..q) as i64;
                    entries[i * d + j] = v;
                    entries[j * d + i] = v;
                }
            }
            let form = Self::new(field.clone(), d, &entries)?;
            if form.is_nondegenerate() {
                return Ok(form);
            }
        }
    }

    pub fn field(&self) -> &Arc<PrimeField> {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    #[inline]
    pub fn coeff(&self, i: usize, j: usize) -> u32 {
        self.a[i * self.d + j]
    }

    /// Row-major coefficient matrix.
    pub fn matrix(&self) -> &[u32] {
        &self.a
    }

    pub fn evaluate(&self, x: &[u32]) -> Result<FieldElement> {
        if x.len() != self.d {
            return Err(Error::DimensionMismatch {
                expected: self.d,
                got: x.len(),
            });
        }
        Ok(FieldElement::from_raw(self.evaluate_raw(x), &self.field))
    }

    /// Evaluation without the length check; coordinates must be reduced.
    pub(crate) fn evaluate_raw(&self, x: &[u32]) -> u32 {
        let q = self.field.q() as u64;
        let mut acc = 0u64;
        for i in 0..self.d {
            let mut row = 0u64;
            for j in 0..self.d {
                row += self.a[i * self.d + j] as u64 * x[j] as u64;
            }
            acc = (acc + (row % q) * x[i] as u64) % q;
        }
        acc as u32
    }

    /// Determinant over `F_q` by Gaussian elimination.
    pub fn determinant(&self) -> u32 {
        let f = &self.field;
        let d = self.d;
        let mut m = self.a.clone();
        let mut det = 1u32;
        for col in 0..d {
            let Some(pivot) = (col..d).find(|&r| m[r * d + col] != 0) else {
                return 0;
            };
            if pivot != col {
                for c in 0..d {
                    m.swap(pivot * d + c, col * d + c);
                }
                det = f.neg(det);
            }
            let p = m[col * d + col];
            det = f.mul(det, p);
            let p_inv = f.inv_raw(p);
            for r in col + 1..d {
                let factor = f.mul(m[r * d + col], p_inv);
                if factor == 0 {
                    continue;
                }
                for c in col..d {
                    let sub = f.mul(factor, m[col * d + c]);
                    m[r * d + c] = f.sub(m[r * d + c], sub);
                }
            }
        }
        det
    }

    pub fn is_nondegenerate(&self) -> bool {
        self.determinant() != 0
    }

    /// Congruent diagonalization `Pᵀ A P = diag(c)`.
    ///
    /// Pivots on the smallest nonzero diagonal entry of the active block. When
    /// the block has a zero diagonal but a nonzero `a_ij`, the substitution
    /// `x_i → x_i + x_j` creates diagonal entry `2 a_ij`, which is nonzero in
    /// odd characteristic.
    pub fn diagonalize(&self) -> DiagonalForm {
        let f = &self.field;
        let d = self.d;
        let mut b = self.a.clone();
        let mut p = vec![0u32; d * d];
        for k in 0..d {
            p[k * d + k] = 1;
        }

        for k in 0..d {
            let pivot = match (k..d).find(|&i| b[i * d + i] != 0) {
                Some(i) => i,
                None => {
                    let pair = (k..d)
                        .flat_map(|i| (i + 1..d).map(move |j| (i, j)))
                        .find(|&(i, j)| b[i * d + j] != 0);
                    let Some((i, j)) = pair else {
                        break;
                    };
                    add_multiple(f, d, &mut b, &mut p, j, i, 1);
                    i
                }
            };
            if pivot != k {
                swap_coords(d, &mut b, &mut p, pivot, k);
            }
            let inv_pivot = f.inv_raw(b[k * d + k]);
            for r in k + 1..d {
                let entry = b[r * d + k];
                if entry != 0 {
                    let c = f.neg(f.mul(entry, inv_pivot));
                    add_multiple(f, d, &mut b, &mut p, k, r, c);
                }
            }
        }

        DiagonalForm {
            coeffs: (0..d).map(|k| b[k * d + k]).collect(),
            basis: p,
            d,
        }
    }

    /// Serializes as `d` lines of `d` space-separated residues.
    pub fn to_matrix_text(&self) -> String {
        let mut out = String::new();
        for i in 0..self.d {
            let row: Vec<String> = (0..self.d).map(|j| self.coeff(i, j).to_string()).collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
        out
    }

    pub fn from_matrix_text(field: Arc<PrimeField>, text: &str) -> Result<Self> {
        let rows: Vec<Vec<i64>> = text
            .lines()
            .filter(|l| !l.trim().is_empty())
            .map(|l| {
                l.split_whitespace()
                    .map(|t| {
                        t.parse::<i64>()
                            .map_err(|e| Error::Parse(format!("matrix entry {t:?}: {e}")))
                    })
                    .collect()
            })
            .collect::<Result<_>>()?;
        let d = rows.len();
        if rows.iter().any(|r| r.len() != d) {
            return Err(Error::Parse("matrix must be square".into()));
        }
        let entries: Vec<i64> = rows.into_iter().flatten().collect();
        Self::new(field, d, &entries)
    }
}

impl FieldElement {
    pub(crate) fn from_raw(v: u32, field: &PrimeField) -> Self {
        field.elem(v as i64)
    }
}

/// Congruence by `E = I + c e_src e_dstᵀ`: column and row `dst` gain `c`
/// times column and row `src`; `P ← P E`.
fn add_multiple(f: &PrimeField, d: usize, b: &mut [u32], p: &mut [u32], src: usize, dst: usize, c: u32) {
    for r in 0..d {
        let v = f.mul(c, b[r * d + src]);
        b[r * d + dst] = f.add(b[r * d + dst], v);
    }
    for col in 0..d {
        let v = f.mul(c, b[src * d + col]);
        b[dst * d + col] = f.add(b[dst * d + col], v);
    }
    for r in 0..d {
        let v = f.mul(c, p[r * d + src]);
        p[r * d + dst] = f.add(p[r * d + dst], v);
    }
}

fn swap_coords(d: usize, b: &mut [u32], p: &mut [u32], i: usize, k: usize) {
    for r in 0..d {
        b.swap(r * d + i, r * d + k);
    }
    for c in 0..d {
        b.swap(i * d + c, k * d + c);
    }
    for r in 0..d {
        p.swap(r * d + i, r * d + k);
    }
}

/// Output of [`QuadraticForm::diagonalize`]: `x = P y` turns `Q(x)` into
/// `Σ c_k y_k²`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiagonalForm {
    pub coeffs: Vec<u32>,
    /// Row-major change of basis `P`.
    pub basis: Vec<u32>,
    d: usize,
}

impl DiagonalForm {
    pub fn dim(&self) -> usize {
        self.d
    }

    /// `Pᵀ m`, the frequency seen by the diagonal coordinates.
    pub fn transpose_apply(&self, field: &PrimeField, m: &[u32], out: &mut [u32]) {
        let q = field.q() as u64;
        for (k, o) in out.iter_mut().enumerate().take(self.d) {
            let mut acc = 0u64;
            for (i, &mi) in m.iter().enumerate() {
                acc += self.basis[i * self.d + k] as u64 * mi as u64;
            }
            *o = (acc % q) as u32;
        }
    }
}

/// Row-major matrix product over `F_q`.
pub fn mat_mul(field: &PrimeField, d: usize, x: &[u32], y: &[u32]) -> Vec<u32> {
    let q = field.q() as u64;
    let mut out = vec![0u32; d * d];
    for i in 0..d {
        for j in 0..d {
            let mut acc = 0u64;
            for k in 0..d {
                acc += x[i * d + k] as u64 * y[k * d + j] as u64;
            }
            out[i * d + j] = (acc % q) as u32;
        }
    }
    out
}

pub fn transpose(d: usize, x: &[u32]) -> Vec<u32> {
    let mut out = vec![0u32; d * d];
    for i in 0..d {
        for j in 0..d {
            out[j * d + i] = x[i * d + j];
        }
    }
    out
}

/// The level set `S_j = {x ∈ F_q^d : Q(x) = j}`, points in lexicographic order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Surface {
    form: QuadraticForm,
    j: u32,
    coords: Vec<u32>,
    indices: Vec<usize>,
}

impl Surface {
    pub fn form(&self) -> &QuadraticForm {
        &self.form
    }

    pub fn field(&self) -> &Arc<PrimeField> {
        &self.form.field
    }

    pub fn q(&self) -> u32 {
        self.form.field.q()
    }

    pub fn dim(&self) -> usize {
        self.form.d
    }

    pub fn level(&self) -> u32 {
        self.j
    }

    pub fn cardinality(&self) -> usize {
        self.indices.len()
    }

    pub fn point(&self, i: usize) -> &[u32] {
        let d = self.form.d;
        &self.coords[i * d..(i + 1) * d]
    }

    pub fn points(&self) -> impl ExactSizeIterator<Item = &[u32]> + '_ {
        self.coords.chunks_exact(self.form.d)
    }

    /// Row-major grid index of each point, strictly increasing.
    pub fn grid_indices(&self) -> &[usize] {
        &self.indices
    }

    /// Position of a grid index in the point list.
    pub fn position(&self, grid_index: usize) -> Option<usize> {
        self.indices.binary_search(&grid_index).ok()
    }

    pub fn contains(&self, x: &[u32]) -> bool {
        self.position(grid_index_of(self.q(), x)).is_some()
    }
}

/// Row-major index `Σ x_k q^{d-1-k}`.
#[inline]
pub fn grid_index_of(q: u32, x: &[u32]) -> usize {
    x.iter().fold(0usize, |acc, &c| acc * q as usize + c as usize)
}

/// Inverse of [`grid_index_of`].
#[inline]
pub fn grid_point_of(q: u32, mut index: usize, out: &mut [u32]) {
    for c in out.iter_mut().rev() {
        *c = (index % q as usize) as u32;
        index /= q as usize;
    }
}

fn check_surface_args(form: &QuadraticForm, j: FieldElement) -> Result<usize> {
    if !form.is_nondegenerate() {
        return Err(Error::DegenerateForm);
    }
    if j.is_zero() {
        return Err(Error::ZeroLevel);
    }
    grid_size(form.field.q(), form.d)
}

/// Enumerates `S_j` by scanning `F_q^d`.
///
/// Along the last axis `Q(prefix, t) = c + 2 L t + a_dd t²` is updated by
/// finite differences; the scan is split over the leading coordinate.
pub fn enumerate_surface(form: &QuadraticForm, j: FieldElement) -> Result<Surface> {
    let n = check_surface_args(form, j)?;
    let f = &form.field;
    let q = f.q();
    let d = form.d;
    let target = j.value();
    let a_last = form.coeff(d - 1, d - 1);
    let lines_per_lead = n / (q as usize * q as usize);

    let chunks: Vec<(Vec<u32>, Vec<usize>)> = (0..q)
        .into_par_iter()
        .map(|lead| {
            let mut coords = Vec::new();
            let mut indices = Vec::new();
            let mut x = vec![0u32; d];
            for rest in 0..lines_per_lead {
                let prefix_index = lead as usize * lines_per_lead + rest;
                grid_point_of(q, prefix_index, &mut x[..d - 1]);
                x[d - 1] = 0;
                let mut value = form.evaluate_raw(&x);
                let mut linear = 0u64;
                for i in 0..d - 1 {
                    linear += form.coeff(i, d - 1) as u64 * x[i] as u64;
                }
                let two_l = f.mul(2, (linear % q as u64) as u32);
                let mut delta = f.add(two_l, a_last);
                let step = f.mul(2, a_last);
                for t in 0..q {
                    if value == target {
                        x[d - 1] = t;
                        coords.extend_from_slice(&x);
                        indices.push(prefix_index * q as usize + t as usize);
                    }
                    value = f.add(value, delta);
                    delta = f.add(delta, step);
                }
            }
            (coords, indices)
        })
        .collect();

    let mut coords = Vec::new();
    let mut indices = Vec::new();
    for (c, i) in chunks {
        coords.extend(c);
        indices.extend(i);
    }
    Ok(Surface {
        form: form.clone(),
        j: target,
        coords,
        indices,
    })
}

/// Plain scan evaluating `Q` from scratch at every grid point.
pub fn enumerate_surface_plain(form: &QuadraticForm, j: FieldElement) -> Result<Surface> {
    let n = check_surface_args(form, j)?;
    let q = form.field.q();
    let mut x = vec![0u32; form.d];
    let mut coords = Vec::new();
    let mut indices = Vec::new();
    for index in 0..n {
        grid_point_of(q, index, &mut x);
        if form.evaluate_raw(&x) == j.value() {
            coords.extend_from_slice(&x);
            indices.push(index);
        }
    }
    Ok(Surface {
        form: form.clone(),
        j: j.value(),
        coords,
        indices,
    })
}

/// Form mini-language: `diag:a1,...,ad` | `matrix:<path>` | `random:<count>`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FormSpec {
    Diag(Vec<i64>),
    Matrix(PathBuf),
    Random(usize),
}

impl FromStr for FormSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (kind, arg) = s
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("form spec {s:?} lacks a ':'")))?;
        match kind.trim() {
            "diag" => {
                let coeffs = arg
                    .split(',')
                    .map(|t| {
                        t.trim()
                            .parse::<i64>()
                            .map_err(|e| Error::Parse(format!("diag coefficient {t:?}: {e}")))
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(FormSpec::Diag(coeffs))
            }
            "matrix" => Ok(FormSpec::Matrix(PathBuf::from(arg.trim()))),
            "random" => arg
                .trim()
                .parse()
                .map(FormSpec::Random)
                .map_err(|e| Error::Parse(format!("random count {arg:?}: {e}"))),
            other => Err(Error::Parse(format!("unknown form kind {other:?}"))),
        }
    }
}

impl fmt::Display for FormSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FormSpec::Diag(c) => {
                let parts: Vec<String> = c.iter().map(i64::to_string).collect();
                write!(f, "diag:{}", parts.join(","))
            }
            FormSpec::Matrix(p) => write!(f, "matrix:{}", p.display()),
            FormSpec::Random(n) => write!(f, "random:{n}"),
        }
    }
}

/// A form together with the identifier used in reports.
#[derive(Debug, Clone)]
pub struct NamedForm {
    pub id: String,
    pub form: QuadraticForm,
}

impl FormSpec {
    /// Dimension fixed by the spec, if any (`random` adapts to any `d`).
    pub fn fixed_dim(&self) -> Option<usize> {
        match self {
            FormSpec::Diag(c) => Some(c.len()),
            FormSpec::Matrix(_) | FormSpec::Random(_) => None,
        }
    }

    /// Builds the forms this spec denotes over `field` in dimension `d`.
    ///
    /// Random forms are drawn from a stream keyed by `(seed, q, d, index)`.
    pub fn instantiate(&self, field: &Arc<PrimeField>, d: usize, seed: u64) -> Result<Vec<NamedForm>> {
        match self {
            FormSpec::Diag(c) => {
                if c.len() != d {
                    return Err(Error::DimensionMismatch {
                        expected: d,
                        got: c.len(),
                    });
                }
                let form = QuadraticForm::diagonal(field.clone(), c)?;
                Ok(vec![NamedForm {
                    id: self.to_string(),
                    form,
                }])
            }
            FormSpec::Matrix(path) => {
                let text = std::fs::read_to_string(path)?;
                let form = QuadraticForm::from_matrix_text(field.clone(), &text)?;
                if form.dim() != d {
                    return Err(Error::DimensionMismatch {
                        expected: d,
                        got: form.dim(),
                    });
                }
                Ok(vec![NamedForm {
                    id: self.to_string(),
                    form,
                }])
            }
            FormSpec::Random(count) => (0..*count)
                .map(|i| {
                    let mut rng = ChaCha8Rng::seed_from_u64(mix_seed(&[
                        seed,
                        field.q() as u64,
                        d as u64,
                        i as u64,
                    ]));
                    Ok(NamedForm {
                        id: format!("random#{i}"),
                        form: QuadraticForm::random(field.clone(), d, &mut rng)?,
                    })
                })
                .collect(),
        }
    }
}

/// Which levels `j` a sweep visits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Levels {
    All,
    List(Vec<u32>),
}

impl Levels {
    pub fn resolve(&self, q: u32) -> Vec<u32> {
        match self {
            Levels::All => (1..q).collect(),
            Levels::List(js) => js.clone(),
        }
    }
}

impl FromStr for Levels {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.trim() == "all" {
            return Ok(Levels::All);
        }
        s.split(',')
            .map(|t| {
                t.trim()
                    .parse::<u32>()
                    .map_err(|e| Error::Parse(format!("level {t:?}: {e}")))
            })
            .collect::<Result<Vec<_>>>()
            .map(Levels::List)
    }
}

impl fmt::Display for Levels {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Levels::All => f.write_str("all"),
            Levels::List(js) => {
                let parts: Vec<String> = js.iter().map(u32::to_string).collect();
                f.write_str(&parts.join(","))
            }
        }
    }
}

/// One `(q, d, form, j)` configuration of a sweep.
#[derive(Debug, Clone)]
pub struct SurfaceCell {
    pub form_id: String,
    pub j: u32,
    /// The enumerated surface, or the error that prevented it (e.g. `j = 0`).
    pub surface: Result<Arc<Surface>>,
}

/// Forms × levels for a fixed field and dimension, in deterministic order.
///
/// Specs whose dimension is pinned to something other than `d` are skipped.
pub fn surface_cells(
    field: &Arc<PrimeField>,
    d: usize,
    forms: &[FormSpec],
    levels: &Levels,
    seed: u64,
) -> Result<Vec<SurfaceCell>> {
    let mut named = Vec::new();
    for spec in forms {
        if spec.fixed_dim().is_some_and(|fd| fd != d) {
            continue;
        }
        match spec.instantiate(field, d, seed) {
            Ok(v) => named.extend(v),
            Err(Error::DimensionMismatch { .. }) => continue,
            Err(e) => return Err(e),
        }
    }
    let js = levels.resolve(field.q());
    let jobs: Vec<(usize, u32)> = (0..named.len())
        .flat_map(|f| js.iter().map(move |&j| (f, j)))
        .collect();
    Ok(jobs
        .into_par_iter()
        .map(|(fi, j)| {
            let nf = &named[fi];
            SurfaceCell {
                form_id: nf.id.clone(),
                j,
                surface: enumerate_surface(&nf.form, field.elem(j as i64)).map(Arc::new),
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::make_field;

    fn field(q: u32) -> Arc<PrimeField> {
        Arc::new(make_field(q).unwrap())
    }

    #[test]
    fn evaluate_examples() {
        let f3 = field(3);
        let circle = QuadraticForm::identity(f3.clone(), 2).unwrap();
        assert_eq!(circle.evaluate(&[1, 0]).unwrap().value(), 1);
        assert_eq!(circle.evaluate(&[0, 0]).unwrap().value(), 0);
        assert!(matches!(
            circle.evaluate(&[1, 0, 0]),
            Err(Error::DimensionMismatch { .. })
        ));

        let f5 = field(5);
        let xy = QuadraticForm::new(f5, 2, &[0, 3, 3, 0]).unwrap();
        assert_eq!(xy.evaluate(&[2, 3]).unwrap().value(), 1);
    }

    #[test]
    fn nondegeneracy_examples() {
        let f3 = field(3);
        assert!(QuadraticForm::identity(f3.clone(), 3).unwrap().is_nondegenerate());
        assert!(!QuadraticForm::new(f3.clone(), 2, &[0, 0, 0, 0]).unwrap().is_nondegenerate());
        assert!(!QuadraticForm::new(f3, 2, &[1, 1, 1, 1]).unwrap().is_nondegenerate());
    }

    #[test]
    fn rejects_asymmetric_matrix() {
        assert_eq!(
            QuadraticForm::new(field(5), 2, &[1, 2, 3, 1]).unwrap_err(),
            Error::NotSymmetric(0, 1)
        );
    }

    fn assert_congruent(form: &QuadraticForm, diag: &DiagonalForm) {
        let f = form.field();
        let d = form.dim();
        let pt = transpose(d, &diag.basis);
        let prod = mat_mul(f, d, &mat_mul(f, d, &pt, form.matrix()), &diag.basis);
        for i in 0..d {
            for j in 0..d {
                let expected = if i == j { diag.coeffs[i] } else { 0 };
                assert_eq!(prod[i * d + j], expected, "entry ({i},{j})");
            }
        }
        let p = QuadraticForm {
            field: f.clone(),
            d,
            a: diag.basis.clone(),
        };
        assert_ne!(p.determinant(), 0, "basis must be invertible");
    }

    #[test]
    fn diagonalize_examples() {
        let f7 = field(7);
        let diag = QuadraticForm::diagonal(f7, &[3, 1, 5]).unwrap();
        let out = diag.diagonalize();
        assert_eq!(out.coeffs, vec![3, 1, 5]);
        assert_eq!(out.basis, vec![1, 0, 0, 0, 1, 0, 0, 0, 1]);

        let xy = QuadraticForm::new(field(5), 2, &[0, 3, 3, 0]).unwrap();
        let out = xy.diagonalize();
        assert_congruent(&xy, &out);
        assert!(out.coeffs.iter().all(|&c| c != 0));
    }

    #[test]
    fn diagonalize_random_sweep() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for q in [3, 5, 7, 11, 13] {
            let f = field(q);
            for d in 2..=4 {
                for _ in 0..50 {
                    let mut entries = vec![0i64; d * d];
                    for i in 0..d {
                        for j in i..d {
                            let v = rng.random_range(0..q) as i64;
                            entries[i * d + j] = v;
                            entries[j * d + i] = v;
                        }
                    }
                    let form = QuadraticForm::new(f.clone(), d, &entries).unwrap();
                    let out = form.diagonalize();
                    assert_congruent(&form, &out);
                    if form.is_nondegenerate() {
                        assert!(out.coeffs.iter().all(|&c| c != 0));
                    }
                }
            }
        }
        let f13 = field(13);
        let form = QuadraticForm::random(f13, 4, &mut rng).unwrap();
        assert!(form.diagonalize().coeffs.iter().all(|&c| c != 0));
    }

    #[test]
    fn surface_examples() {
        let f3 = field(3);
        let circle = QuadraticForm::identity(f3.clone(), 2).unwrap();
        let s = enumerate_surface(&circle, f3.elem(1)).unwrap();
        let pts: Vec<Vec<u32>> = s.points().map(<[u32]>::to_vec).collect();
        assert_eq!(pts, vec![vec![0, 1], vec![0, 2], vec![1, 0], vec![2, 0]]);
        assert_eq!(s.cardinality(), 4);

        let f5 = field(5);
        let circle5 = QuadraticForm::identity(f5.clone(), 2).unwrap();
        assert_eq!(enumerate_surface(&circle5, f5.elem(1)).unwrap().cardinality(), 4);

        assert_eq!(enumerate_surface(&circle, f3.elem(0)).unwrap_err(), Error::ZeroLevel);
        let degenerate = QuadraticForm::new(f3.clone(), 2, &[1, 1, 1, 1]).unwrap();
        assert_eq!(
            enumerate_surface(&degenerate, f3.elem(1)).unwrap_err(),
            Error::DegenerateForm
        );
        let f101 = field(101);
        let huge = QuadraticForm::identity(f101.clone(), 5).unwrap();
        assert!(matches!(
            enumerate_surface(&huge, f101.elem(1)),
            Err(Error::GridTooLarge { .. })
        ));
    }

    #[test]
    fn incremental_scan_matches_plain_scan() {
        for q in [3, 5, 7, 11] {
            let f = field(q);
            for d in 2..=3 {
                let forms = FormSpec::Random(3).instantiate(&f, d, 11).unwrap();
                for nf in forms {
                    for j in 1..q {
                        let fast = enumerate_surface(&nf.form, f.elem(j as i64)).unwrap();
                        let slow = enumerate_surface_plain(&nf.form, f.elem(j as i64)).unwrap();
                        assert_eq!(fast, slow);
                        for p in fast.points() {
                            assert_eq!(nf.form.evaluate(p).unwrap().value(), j);
                        }
                        let card = fast.cardinality() as i64;
                        let main = (q as i64).pow(d as u32 - 1);
                        let err = (card - main).abs() as f64;
                        assert!(err <= (q as f64).powf((d as f64 - 1.0) / 2.0) + 1e-9);
                    }
                }
            }
        }
    }

    #[test]
    fn grid_index_round_trip() {
        let mut x = [0u32; 3];
        for idx in 0..125 {
            grid_point_of(5, idx, &mut x);
            assert_eq!(grid_index_of(5, &x), idx);
        }
        grid_point_of(5, 7, &mut x);
        assert_eq!(x, [0, 1, 2]);
    }

    #[test]
    fn form_spec_parsing() {
        assert_eq!("diag:1,2,3".parse::<FormSpec>().unwrap(), FormSpec::Diag(vec![1, 2, 3]));
        assert_eq!("random:5".parse::<FormSpec>().unwrap(), FormSpec::Random(5));
        assert_eq!(
            "matrix:forms/a.txt".parse::<FormSpec>().unwrap(),
            FormSpec::Matrix(PathBuf::from("forms/a.txt"))
        );
        assert!("cube:1".parse::<FormSpec>().is_err());
        assert!("diag".parse::<FormSpec>().is_err());
        for s in ["diag:1,-1,2", "random:3", "matrix:x.txt"] {
            assert_eq!(s.parse::<FormSpec>().unwrap().to_string(), s);
        }
    }

    #[test]
    fn matrix_text_round_trip_is_bit_exact() {
        let text = "1 2 0\n2 5 3\n0 3 6\n";
        let form = QuadraticForm::from_matrix_text(field(7), text).unwrap();
        assert_eq!(form.to_matrix_text(), text);
        assert!(QuadraticForm::from_matrix_text(field(7), "1 2\n3").is_err());
    }

    #[test]
    fn random_forms_are_deterministic() {
        let f = field(11);
        let a = FormSpec::Random(4).instantiate(&f, 3, 99).unwrap();
        let b = FormSpec::Random(4).instantiate(&f, 3, 99).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.form, y.form);
            assert!(x.form.is_nondegenerate());
        }
        let c = FormSpec::Random(4).instantiate(&f, 3, 100).unwrap();
        assert!(a.iter().zip(&c).any(|(x, y)| x.form != y.form));
    }
}
