//! Fourier analysis on `F_q^d`.
//!
//! Normalizations: `f̂(m) = q^{-d} Σ_x χ(-x·m) f(x)` and inversion
//! `f(x) = Σ_m χ(x·m) f̂(m)`. Space variables carry the normalized counting
//! measure `dx`, phase variables the plain counting measure `dm`, and a
//! surface carries the probability measure `dσ`.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_complex::Complex64;
use num_rational::Ratio;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::field::PrimeField;
use crate::quadform::Surface;
use crate::{grid_size, Error, Result};

/// A complex function on `F_q^d`, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    field: Arc<PrimeField>,
    d: usize,
    values: Vec<Complex64>,
}

impl GridFunction {
    pub fn new(field: Arc<PrimeField>, d: usize, values: Vec<Complex64>) -> Result<Self> {
        let n = grid_size(field.q(), d)?;
        if values.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: values.len(),
            });
        }
        Ok(Self { field, d, values })
    }

    pub fn zeros(field: Arc<PrimeField>, d: usize) -> Result<Self> {
        let n = grid_size(field.q(), d)?;
        Ok(Self {
            field,
            d,
            values: vec![Complex64::zero(); n],
        })
    }

    pub fn constant(field: Arc<PrimeField>, d: usize, c: Complex64) -> Result<Self> {
        let mut g = Self::zeros(field, d)?;
        g.values.fill(c);
        Ok(g)
    }

    pub fn field(&self) -> &Arc<PrimeField> {
        &self.field
    }

    pub fn q(&self) -> u32 {
        self.field.q()
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [Complex64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    /// Largest modulus and the lexicographically smallest index attaining it.
    pub fn max_modulus(&self, skip_origin: bool) -> (f64, usize) {
        let start = usize::from(skip_origin);
        let mut best = (0.0f64, start);
        for (i, v) in self.values.iter().enumerate().skip(start) {
            let n = v.norm();
            if n > best.0 {
                best = (n, i);
            }
        }
        best
    }

    /// Text form: `q d` header, then one `re im` pair per line.
    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}\n", self.field.q(), self.d);
        for v in &self.values {
            out.push_str(&format!("{:.16e} {:.16e}\n", v.re, v.im));
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        let header = lines.next().ok_or_else(|| Error::Parse("empty grid file".into()))?;
        let mut parts = header.split_whitespace();
        let parse_usize = |t: Option<&str>| -> Result<usize> {
            t.ok_or_else(|| Error::Parse("short header".into()))?
                .parse()
                .map_err(|e| Error::Parse(format!("header: {e}")))
        };
        let q = parse_usize(parts.next())? as u32;
        let d = parse_usize(parts.next())?;
        let field = Arc::new(PrimeField::new(q)?);
        let values = lines
            .filter(|l| !l.trim().is_empty())
            .map(|l| {
                let mut it = l.split_whitespace().map(|t| {
                    t.parse::<f64>()
                        .map_err(|e| Error::Parse(format!("value {t:?}: {e}")))
                });
                let re = it.next().ok_or_else(|| Error::Parse("missing re".into()))??;
                let im = it.next().ok_or_else(|| Error::Parse("missing im".into()))??;
                Ok(Complex64::new(re, im))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(field, d, values)
    }
}

/// A complex function on the points of a surface, aligned with
/// [`Surface::points`].
#[derive(Debug, Clone, PartialEq)]
pub struct SurfaceFunction {
    surface: Arc<Surface>,
    values: Vec<Complex64>,
}

impl SurfaceFunction {
    pub fn new(surface: Arc<Surface>, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != surface.cardinality() {
            return Err(Error::DimensionMismatch {
                expected: surface.cardinality(),
                got: values.len(),
            });
        }
        Ok(Self { surface, values })
    }

    pub fn constant(surface: Arc<Surface>, c: Complex64) -> Self {
        let values = vec![c; surface.cardinality()];
        Self { surface, values }
    }

    /// Characteristic function of the given point positions.
    pub fn indicator(surface: Arc<Surface>, members: &[usize]) -> Result<Self> {
        let mut values = vec![Complex64::zero(); surface.cardinality()];
        for &i in members {
            let slot = values
                .get_mut(i)
                .ok_or_else(|| Error::BadSubset(format!("index {i} out of range")))?;
            *slot = Complex64::one();
        }
        Ok(Self { surface, values })
    }

    pub fn surface(&self) -> &Arc<Surface> {
        &self.surface
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn map(&self, f: impl Fn(Complex64) -> Complex64) -> Self {
        Self {
            surface: self.surface.clone(),
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }
}

/// A Lebesgue exponent in `[1, ∞]`, kept exact.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Exponent {
    Finite(Ratio<i64>),
    Infinite,
}

impl Exponent {
    pub fn new(value: Ratio<i64>) -> Result<Self> {
        if value < Ratio::one() {
            return Err(Error::BadExponent);
        }
        Ok(Exponent::Finite(value))
    }

    pub fn integer(n: i64) -> Result<Self> {
        Self::new(Ratio::from_integer(n))
    }

    pub fn frac(num: i64, den: i64) -> Result<Self> {
        if den == 0 {
            return Err(Error::BadExponent);
        }
        Self::new(Ratio::new(num, den))
    }

    /// `1/p`, with `1/∞ = 0`.
    pub fn reciprocal(self) -> Ratio<i64> {
        match self {
            Exponent::Finite(p) => p.recip(),
            Exponent::Infinite => Ratio::zero(),
        }
    }

    /// Inverse of [`reciprocal`](Self::reciprocal).
    pub fn from_reciprocal(r: Ratio<i64>) -> Result<Self> {
        if r.is_zero() {
            Ok(Exponent::Infinite)
        } else if r < Ratio::zero() {
            Err(Error::BadExponent)
        } else {
            Self::new(r.recip())
        }
    }

    pub fn to_f64(self) -> f64 {
        match self {
            Exponent::Finite(p) => *p.numer() as f64 / *p.denom() as f64,
            Exponent::Infinite => f64::INFINITY,
        }
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exponent::Finite(p) => write!(f, "{p}"),
            Exponent::Infinite => f.write_str("inf"),
        }
    }
}

impl FromStr for Exponent {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if matches!(s, "inf" | "infinity" | "∞") {
            return Ok(Exponent::Infinite);
        }
        let bad = |_| Error::Parse(format!("exponent {s:?}"));
        let r = match s.split_once('/') {
            Some((n, d)) => {
                let den: i64 = d.trim().parse().map_err(bad)?;
                if den == 0 {
                    return Err(Error::BadExponent);
                }
                Ratio::new(n.trim().parse().map_err(bad)?, den)
            }
            None => Ratio::from_integer(s.parse().map_err(bad)?),
        };
        Exponent::new(r)
    }
}

/// `(Σ w |v|^p)^{1/p}` with uniform weight `w`; `p = ∞` gives the max modulus.
fn weighted_norm(values: &[Complex64], weight: f64, p: Exponent) -> f64 {
    match p {
        Exponent::Infinite => values.iter().map(|v| v.norm()).fold(0.0, f64::max),
        Exponent::Finite(r) => {
            let pf = *r.numer() as f64 / *r.denom() as f64;
            let sum: f64 = if r == Ratio::from_integer(2) {
                values.iter().map(|v| v.norm_sqr()).sum()
            } else {
                values
                    .iter()
                    .map(|v| {
                        let m = v.norm();
                        if m == 0.0 {
                            0.0
                        } else {
                            (pf * m.ln()).exp()
                        }
                    })
                    .sum()
            };
            (weight * sum).powf(1.0 / pf)
        }
    }
}

/// `‖f‖_{L^p(F_q^d, dx)}`, normalized counting measure.
pub fn norm_space(f: &GridFunction, p: Exponent) -> f64 {
    weighted_norm(&f.values, 1.0 / f.values.len() as f64, p)
}

/// `‖g‖_{L^r(F_q^d, dm)}`, plain counting measure.
pub fn norm_phase(g: &GridFunction, r: Exponent) -> f64 {
    weighted_norm(&g.values, 1.0, r)
}

/// `‖f‖_{L^p(S, dσ)}`, probability measure on the surface.
pub fn norm_surface(f: &SurfaceFunction, p: Exponent) -> f64 {
    weighted_norm(&f.values, 1.0 / f.values.len() as f64, p)
}

const PARALLEL_GRID: usize = 1 << 15;

/// Applies the length-`q` transform `out[m] = scale Σ_x table[x m mod q] in[x]`
/// along every axis.
fn transform_axes(values: &mut [Complex64], q: usize, d: usize, table: &[Complex64], scale: f64) {
    let n = values.len();
    for axis in 0..d {
        let stride = q.pow((d - 1 - axis) as u32);
        let block = stride * q;
        let process = |chunk: &mut [Complex64]| {
            let mut line = vec![Complex64::zero(); q];
            for offset in 0..stride {
                for (x, slot) in line.iter_mut().enumerate() {
                    *slot = chunk[offset + x * stride];
                }
                for m in 0..q {
                    let mut acc = Complex64::zero();
                    let mut idx = 0usize;
                    for &v in &line {
                        acc += table[idx] * v;
                        idx += m;
                        if idx >= q {
                            idx -= q;
                        }
                    }
                    chunk[offset + m * stride] = acc * scale;
                }
            }
        };
        if n >= PARALLEL_GRID && n / block > 1 {
            values.par_chunks_mut(block).for_each(process);
        } else {
            values.chunks_mut(block).for_each(process);
        }
    }
}

/// Forward transform, axis by axis: `d` passes of length-`q` line transforms.
pub fn fourier_forward(f: &GridFunction) -> Result<GridFunction> {
    let q = f.q() as usize;
    let table: Vec<Complex64> = f.field.char_table().iter().map(|c| c.conj()).collect();
    let mut values = f.values.clone();
    transform_axes(&mut values, q, f.d, &table, 1.0 / q as f64);
    Ok(GridFunction {
        field: f.field.clone(),
        d: f.d,
        values,
    })
}

/// Inverse transform `f(x) = Σ_m χ(x·m) g(m)`.
pub fn fourier_inverse(g: &GridFunction) -> Result<GridFunction> {
    let q = g.q() as usize;
    let mut values = g.values.clone();
    transform_axes(&mut values, q, g.d, g.field.char_table(), 1.0);
    Ok(GridFunction {
        field: g.field.clone(),
        d: g.d,
        values,
    })
}

pub(crate) fn same_surface(a: &Arc<Surface>, b: &Arc<Surface>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

/// `(f dσ * g dσ)(x) = (#S)^{-2} q^d Σ_{α+β=x} f(α) g(β)` over `α, β ∈ S`.
///
/// Direct double loop over surface points; `α` is split into fixed blocks
/// whose partial grids are summed in block order.
pub fn measure_convolution(f: &SurfaceFunction, g: &SurfaceFunction) -> Result<GridFunction> {
    if !same_surface(&f.surface, &g.surface) {
        return Err(Error::SurfaceMismatch);
    }
    let s = &f.surface;
    let field = s.field().clone();
    let q = field.q();
    let d = s.dim();
    let n = grid_size(q, d)?;
    let card = s.cardinality();
    let scale = (n as f64) / (card as f64 * card as f64);

    let points: Vec<&[u32]> = s.points().collect();
    let blocks = card.clamp(1, 16);
    let per_block = card.div_ceil(blocks);
    let partials: Vec<Vec<Complex64>> = (0..blocks)
        .into_par_iter()
        .map(|b| {
            let mut acc = vec![Complex64::zero(); n];
            let lo = b * per_block;
            let hi = ((b + 1) * per_block).min(card);
            for ai in lo..hi {
                let alpha = points[ai];
                let fa = f.values[ai];
                if fa.is_zero() {
                    continue;
                }
                for (bi, beta) in points.iter().enumerate() {
                    let mut idx = 0usize;
                    for k in 0..d {
                        idx = idx * q as usize + field.add(alpha[k], beta[k]) as usize;
                    }
                    acc[idx] += fa * g.values[bi];
                }
            }
            acc
        })
        .collect();

    let mut values = vec![Complex64::zero(); n];
    for part in partials {
        for (v, p) in values.iter_mut().zip(part) {
            *v += p;
        }
    }
    for v in &mut values {
        *v *= scale;
    }
    GridFunction::new(field, d, values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::make_field;
    use crate::quadform::{enumerate_surface, QuadraticForm};
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn field(q: u32) -> Arc<PrimeField> {
        Arc::new(make_field(q).unwrap())
    }

    fn random_grid(field: &Arc<PrimeField>, d: usize, rng: &mut ChaCha8Rng) -> GridFunction {
        let n = grid_size(field.q(), d).unwrap();
        let values = (0..n)
            .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect();
        GridFunction::new(field.clone(), d, values).unwrap()
    }

    fn circle3() -> Arc<Surface> {
        let f = field(3);
        let form = QuadraticForm::identity(f.clone(), 2).unwrap();
        Arc::new(enumerate_surface(&form, f.elem(1)).unwrap())
    }

    #[test]
    fn forward_of_constant_is_delta() {
        for (q, d) in [(3, 2), (5, 3), (7, 1)] {
            let g = GridFunction::constant(field(q), d, Complex64::one()).unwrap();
            let h = fourier_forward(&g).unwrap();
            assert!((h.values()[0] - Complex64::one()).norm() < 1e-9);
            assert!(h.values()[1..].iter().all(|v| v.norm() < 1e-9));
        }
    }

    #[test]
    fn forward_of_delta_is_flat() {
        let f = field(5);
        let mut g = GridFunction::zeros(f, 2).unwrap();
        g.values_mut()[0] = Complex64::one();
        let h = fourier_forward(&g).unwrap();
        for v in h.values() {
            assert!((v - Complex64::new(1.0 / 25.0, 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn inverse_examples() {
        let f = field(7);
        let mut delta = GridFunction::zeros(f.clone(), 2).unwrap();
        delta.values_mut()[0] = Complex64::one();
        let one = fourier_inverse(&delta).unwrap();
        assert!(one.values().iter().all(|v| (v - Complex64::one()).norm() < 1e-12));

        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for (q, d) in [(7, 2), (3, 3)] {
            let g = random_grid(&field(q), d, &mut rng);
            let back = fourier_inverse(&fourier_forward(&g).unwrap()).unwrap();
            for (a, b) in g.values().iter().zip(back.values()) {
                assert!((a - b).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn norm_examples() {
        let f = field(5);
        let c = GridFunction::constant(f.clone(), 2, Complex64::new(0.0, 3.0)).unwrap();
        for p in ["1", "2", "4/3", "inf", "7"] {
            let p: Exponent = p.parse().unwrap();
            assert!((norm_space(&c, p) - 3.0).abs() < 1e-12);
        }
        let mut delta = GridFunction::zeros(f.clone(), 2).unwrap();
        delta.values_mut()[3] = Complex64::one();
        assert!((norm_space(&delta, Exponent::integer(2).unwrap()) - 0.2).abs() < 1e-12);
        for r in ["1", "3/2", "inf"] {
            assert!((norm_phase(&delta, r.parse().unwrap()) - 1.0).abs() < 1e-12);
        }
        let one = GridFunction::constant(f, 2, Complex64::one()).unwrap();
        assert!((norm_phase(&one, Exponent::integer(2).unwrap()) - 5.0).abs() < 1e-12);

        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let g = random_grid(&field(7), 2, &mut rng);
        let direct: f64 = g.values().iter().map(|v| v.norm().powi(4)).sum::<f64>().powf(0.25);
        assert!((norm_phase(&g, Exponent::integer(4).unwrap()) - direct).abs() < 1e-12);
    }

    #[test]
    fn bad_exponents() {
        assert_eq!(Exponent::frac(1, 2), Err(Error::BadExponent));
        assert_eq!("0".parse::<Exponent>(), Err(Error::BadExponent));
        assert_eq!("3/0".parse::<Exponent>(), Err(Error::BadExponent));
        assert!("abc".parse::<Exponent>().is_err());
        assert_eq!(Exponent::from_reciprocal(Ratio::new(1, 4)).unwrap(), Exponent::integer(4).unwrap());
        assert_eq!(Exponent::from_reciprocal(Ratio::zero()).unwrap(), Exponent::Infinite);
    }

    #[test]
    fn surface_norm_examples() {
        let s = circle3();
        let one = SurfaceFunction::constant(s.clone(), Complex64::one());
        for p in ["1", "2", "4/3", "inf"] {
            assert!((norm_surface(&one, p.parse().unwrap()) - 1.0).abs() < 1e-12);
        }
        let e = SurfaceFunction::indicator(s.clone(), &[2]).unwrap();
        let n = norm_surface(&e, Exponent::frac(4, 3).unwrap());
        assert!((n - 0.353_553_4).abs() < 1e-7);
        let e2 = SurfaceFunction::indicator(s, &[0, 3]).unwrap();
        assert!((norm_surface(&e2, Exponent::integer(3).unwrap()) - 0.5f64.powf(1.0 / 3.0)).abs() < 1e-12);
    }

    #[test]
    fn plancherel_small() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for (q, d) in [(3, 1), (5, 2), (7, 3)] {
            let g = random_grid(&field(q), d, &mut rng);
            let two = Exponent::integer(2).unwrap();
            let lhs = norm_phase(&fourier_forward(&g).unwrap(), two);
            let rhs = norm_space(&g, two);
            assert!((lhs - rhs).abs() <= 1e-9 * rhs);
        }
    }

    #[test]
    fn convolution_examples() {
        let s = circle3();
        let one = SurfaceFunction::constant(s.clone(), Complex64::one());
        let conv = measure_convolution(&one, &one).unwrap();
        let mass: Complex64 = conv.values().iter().sum::<Complex64>() / 9.0;
        assert!((mass - Complex64::one()).norm() < 1e-12);
        assert!((conv.values()[0] - Complex64::new(2.25, 0.0)).norm() < 1e-12);

        let f = field(5);
        let other = Arc::new(
            enumerate_surface(&QuadraticForm::identity(f.clone(), 2).unwrap(), f.elem(1)).unwrap(),
        );
        let g = SurfaceFunction::constant(other, Complex64::one());
        assert_eq!(measure_convolution(&one, &g).unwrap_err(), Error::SurfaceMismatch);
    }

    #[test]
    fn grid_text_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let g = random_grid(&field(5), 2, &mut rng);
        let text = g.to_text();
        assert!(text.starts_with("5 2\n"));
        let back = GridFunction::from_text(&text).unwrap();
        assert_eq!(back, g);
        assert!(GridFunction::from_text("5 2\n1 2\n").is_err());
    }
}
