//! Slow, literal oracles.
//!
//! Nothing here calls the summation code of [`fourier`](crate::fourier),
//! [`extension`](crate::extension) or [`incidence`](crate::incidence), and
//! character values are recomputed from `exp` rather than read from the
//! field's table. Single-threaded on purpose.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::fourier::GridFunction;
use crate::incidence::SubsetE;
use crate::quadform::Surface;
use crate::{Error, Result};

const NAIVE_BUDGET: f64 = 1e10;
const NAIVE_ENERGY_MAX: usize = 32;

fn phase(q: u32, t: u64) -> Complex64 {
    Complex64::from_polar(1.0, 2.0 * PI * (t % q as u64) as f64 / q as f64)
}

fn unrank(q: u32, d: usize, mut index: usize) -> Vec<u64> {
    let mut x = vec![0u64; d];
    for k in (0..d).rev() {
        x[k] = (index % q as usize) as u64;
        index /= q as usize;
    }
    x
}

/// `f̂(m) = q^{-d} Σ_x χ(-x·m) f(x)` as a literal double loop.
pub fn naive_fourier(f: &GridFunction) -> Result<GridFunction> {
    let q = f.q();
    let d = f.dim();
    let n = f.len();
    if (n as f64) * (n as f64) > NAIVE_BUDGET {
        return Err(Error::BudgetExceeded);
    }
    let table: Vec<Complex64> = (0..q as u64).map(|t| phase(q, q as u64 - t)).collect();
    let points: Vec<Vec<u64>> = (0..n).map(|i| unrank(q, d, i)).collect();
    let mut out = Vec::with_capacity(n);
    for m in &points {
        let mut acc = Complex64::new(0.0, 0.0);
        for (x, &fx) in points.iter().zip(f.values()) {
            let dot: u64 = x.iter().zip(m).map(|(a, b)| a * b).sum();
            acc += table[(dot % q as u64) as usize] * fx;
        }
        out.push(acc / n as f64);
    }
    GridFunction::new(f.field().clone(), d, out)
}

/// `#{(x, y, z, s) ∈ E⁴ : x + z = y + s}` by a quadruple loop.
pub fn naive_energy(e: &SubsetE) -> Result<u64> {
    let size = e.size();
    if size > NAIVE_ENERGY_MAX {
        return Err(Error::SetTooLarge(size));
    }
    let q = e.surface().q() as u64;
    let pts: Vec<Vec<u64>> = e
        .members()
        .iter()
        .map(|&i| e.surface().point(i).iter().map(|&c| c as u64).collect())
        .collect();
    let mut count = 0u64;
    for x in &pts {
        for y in &pts {
            for z in &pts {
                for s in &pts {
                    let hit = (0..x.len()).all(|k| (x[k] + z[k]) % q == (y[k] + s[k]) % q);
                    if hit {
                        count += 1;
                    }
                }
            }
        }
    }
    Ok(count)
}

/// `Ŝ_j(m) = q^{-d} Σ_{x∈S_j} χ(-x·m)` at a single frequency.
pub fn naive_surface_ft(surface: &Surface, m: &[u32]) -> Complex64 {
    let q = surface.q();
    let mut acc = Complex64::new(0.0, 0.0);
    for x in surface.points() {
        let dot: u64 = x.iter().zip(m).map(|(&a, &b)| a as u64 * b as u64).sum();
        acc += phase(q, q as u64 - dot % q as u64);
    }
    acc / (q as f64).powi(surface.dim() as i32)
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::field::make_field;
    use crate::quadform::{enumerate_surface, QuadraticForm};

    #[test]
    fn naive_fourier_of_constant() {
        let f = Arc::new(make_field(3).unwrap());
        let one = GridFunction::constant(f, 2, Complex64::new(1.0, 0.0)).unwrap();
        let h = naive_fourier(&one).unwrap();
        assert!((h.values()[0] - Complex64::new(1.0, 0.0)).norm() < 1e-12);
        assert!(h.values()[1..].iter().all(|v| v.norm() < 1e-12));
    }

    #[test]
    fn naive_fourier_budget() {
        let f = Arc::new(make_field(11).unwrap());
        let big = GridFunction::zeros(f, 5).unwrap();
        assert_eq!(naive_fourier(&big).unwrap_err(), Error::BudgetExceeded);
    }

    #[test]
    fn naive_surface_ft_at_origin() {
        let f = Arc::new(make_field(3).unwrap());
        let form = QuadraticForm::identity(f.clone(), 2).unwrap();
        let s = enumerate_surface(&form, f.elem(1)).unwrap();
        let v = naive_surface_ft(&s, &[0, 0]);
        assert!((v - Complex64::new(4.0 / 9.0, 0.0)).norm() < 1e-15);
    }
}
