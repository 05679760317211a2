//! Gauss, power, Salié and Kloosterman sums over `F_q`.
//!
//! Every evaluator is a direct `O(q)` loop over `F_q^*`; other modules use
//! them as ground truth, so no closed-form shortcuts are taken here.

use std::f64::consts::PI;

use num_complex::Complex64;
use num_integer::Integer;

use crate::field::{FieldElement, PrimeField};
use crate::report::{BoundReport, CheckContext};
use crate::{Error, Result};

/// Adopted Weil constant: `|sum| <= WEIL_CONSTANT * sqrt(q)`.
pub const WEIL_CONSTANT: f64 = 2.0;

/// An evaluated character sum together with the ceiling it is checked against.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SumValue {
    pub value: Complex64,
    pub magnitude: f64,
    pub bound: f64,
    pub ratio: f64,
}

impl SumValue {
    fn new(value: Complex64, bound: f64) -> Self {
        let magnitude = value.norm();
        Self {
            value,
            magnitude,
            bound,
            ratio: crate::report::ratio(magnitude, bound),
        }
    }
}

/// `Σ_{t≠0} χ(a t) ψ(t)^k`.
///
/// For odd `k` the twist is the quadratic character and the magnitude is
/// exactly `√q`; for even `k` the twist is trivial and the sum is `-1`.
pub fn gauss_sum(field: &PrimeField, a: FieldElement, k: u32) -> Result<SumValue> {
    if a.is_zero() {
        return Err(Error::ZeroCoefficient);
    }
    let a = a.value();
    let twisted = k % 2 == 1;
    let mut sum = Complex64::new(0.0, 0.0);
    for t in 1..field.q() {
        let c = field.chi_raw(field.mul(a, t));
        if twisted {
            sum += c * field.psi_raw(t) as f64;
        } else {
            sum += c;
        }
    }
    let bound = if twisted { (field.q() as f64).sqrt() } else { 1.0 };
    Ok(SumValue::new(sum, bound))
}

/// A multiplicative character of order exactly `h`, built on the field's
/// smallest primitive root: `ψ_h(g^e) = exp(2πi e / h)`.
struct OrderH<'a> {
    field: &'a PrimeField,
    h: u32,
    roots: Vec<Complex64>,
}

impl<'a> OrderH<'a> {
    fn new(field: &'a PrimeField, h: u32) -> Self {
        let roots = (0..h)
            .map(|e| Complex64::from_polar(1.0, 2.0 * PI * e as f64 / h as f64))
            .collect();
        Self { field, h, roots }
    }

    /// `ψ_h(s)^k` for nonzero `s` and any integer power `k`.
    fn pow(&self, s: u32, k: i64) -> Complex64 {
        let e = self.field.dlog(s).expect("nonzero argument") as i64;
        self.roots[(e * k).rem_euclid(self.h as i64) as usize]
    }
}

/// Direct `Σ_{s∈F_q} χ(t s^n)`.
pub fn power_sum(field: &PrimeField, t: FieldElement, n: u32) -> Complex64 {
    (0..field.q())
        .map(|s| field.chi_raw(field.mul(t.value(), field.pow(s, n as u64))))
        .sum()
}

/// `Σ_{k=1}^{h-1} ψ_h^{-k}(t) G(ψ_h^k, χ)` with `h = gcd(n, q-1)`.
pub fn power_sum_via_gauss(field: &PrimeField, t: FieldElement, n: u32) -> Result<Complex64> {
    if t.is_zero() {
        return Err(Error::ZeroCoefficient);
    }
    let h = n.gcd(&(field.q() - 1));
    let psi_h = OrderH::new(field, h);
    let mut rhs = Complex64::new(0.0, 0.0);
    for k in 1..h as i64 {
        let gauss: Complex64 = (1..field.q())
            .map(|s| psi_h.pow(s, k) * field.chi_raw(s))
            .sum();
        rhs += psi_h.pow(t.value(), -k) * gauss;
    }
    Ok(rhs)
}

/// Checks the reduction of `Σ_s χ(t s^n)` to Gauss sums of order
/// `gcd(n, q-1)`; both sides are summed directly.
pub fn power_sum_identity_check(
    field: &PrimeField,
    t: FieldElement,
    n: u32,
) -> Result<BoundReport> {
    if t.is_zero() {
        return Err(Error::ZeroCoefficient);
    }
    if n < 2 {
        return Err(Error::Parse(format!("power n = {n} must be at least 2")));
    }
    let lhs = power_sum(field, t, n);
    let rhs = power_sum_via_gauss(field, t, n)?;
    let q = field.q();
    let gap = (lhs - rhs).norm();
    let h = n.gcd(&(q - 1));
    Ok(BoundReport::upper(
        "power_sum_identity",
        CheckContext::new(q, 1).family("power_sum"),
        gap,
        1e-9 * q as f64,
        0.0,
        format!("t={} n={n} h={h}", t.value()),
    ))
}

/// Salié sum `Σ_{t≠0} ψ(t) χ(a t + b t^{-1})`, checked against `2√q`.
pub fn salie_sum(field: &PrimeField, a: FieldElement, b: FieldElement) -> SumValue {
    let (a, b) = (a.value(), b.value());
    let mut sum = Complex64::new(0.0, 0.0);
    for t in 1..field.q() {
        let arg = field.add(field.mul(a, t), field.mul(b, field.inv_raw(t)));
        sum += field.chi_raw(arg) * field.psi_raw(t) as f64;
    }
    SumValue::new(sum, WEIL_CONSTANT * (field.q() as f64).sqrt())
}

/// Kloosterman sum `Σ_{t≠0} χ(a t + b t^{-1})`, checked against `2√q`.
///
/// At `a = b = 0` every term is 1 and the bound is reported as `+∞`.
pub fn kloosterman_sum(field: &PrimeField, a: FieldElement, b: FieldElement) -> SumValue {
    let (av, bv) = (a.value(), b.value());
    let mut sum = Complex64::new(0.0, 0.0);
    for t in 1..field.q() {
        let arg = field.add(field.mul(av, t), field.mul(bv, field.inv_raw(t)));
        sum += field.chi_raw(arg);
    }
    let bound = if av == 0 && bv == 0 {
        f64::INFINITY
    } else {
        WEIL_CONSTANT * (field.q() as f64).sqrt()
    };
    SumValue::new(sum, bound)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{make_field, odd_primes};

    fn close(z: Complex64, re: f64, im: f64, tol: f64) -> bool {
        (z.re - re).abs() <= tol && (z.im - im).abs() <= tol
    }

    #[test]
    fn gauss_examples() {
        let f7 = make_field(7).unwrap();
        let g = gauss_sum(&f7, f7.elem(1), 1).unwrap();
        assert!((g.magnitude - 7f64.sqrt()).abs() < 1e-9);
        assert!((g.magnitude - 2.645_751_3).abs() < 1e-7);

        let f5 = make_field(5).unwrap();
        let g2 = gauss_sum(&f5, f5.elem(1), 2).unwrap();
        assert!(close(g2.value, -1.0, 0.0, 1e-12));
        // q ≡ 1 mod 4: the quadratic Gauss sum is real and positive.
        let g1 = gauss_sum(&f5, f5.elem(1), 1).unwrap();
        assert!(close(g1.value, 5f64.sqrt(), 0.0, 1e-12));

        assert_eq!(gauss_sum(&f5, f5.elem(0), 1), Err(Error::ZeroCoefficient));
    }

    #[test]
    fn gauss_magnitude_is_exact() {
        for q in odd_primes(3, 101) {
            let f = make_field(q).unwrap();
            for a in 1..q {
                for k in [1, 3] {
                    let g = gauss_sum(&f, f.elem(a as i64), k).unwrap();
                    assert!((g.magnitude - (q as f64).sqrt()).abs() <= 1e-9 * q as f64);
                }
            }
        }
    }

    #[test]
    fn power_sum_examples() {
        let f7 = make_field(7).unwrap();
        let r = power_sum_identity_check(&f7, f7.elem(1), 2).unwrap();
        assert!(r.passed() && r.value <= 7e-9);

        // n = 7: gcd(7, 6) = 1, empty right-hand side, left side Σ χ(s) = 0.
        let lhs = power_sum(&f7, f7.elem(1), 7);
        assert!(lhs.norm() < 1e-12);
        assert_eq!(power_sum_via_gauss(&f7, f7.elem(1), 7).unwrap(), Complex64::new(0.0, 0.0));

        let f13 = make_field(13).unwrap();
        assert!(power_sum_identity_check(&f13, f13.elem(2), 3).unwrap().passed());
        assert!(power_sum_identity_check(&f13, f13.elem(0), 3).is_err());
    }

    #[test]
    fn power_sum_identity_sweep() {
        for q in odd_primes(3, 31) {
            let f = make_field(q).unwrap();
            for n in 2..=5 {
                for t in 1..q {
                    let r = power_sum_identity_check(&f, f.elem(t as i64), n).unwrap();
                    assert!(r.passed(), "q={q} n={n} t={t} gap={}", r.value);
                }
            }
        }
    }

    #[test]
    fn salie_examples() {
        let f5 = make_field(5).unwrap();
        let s = salie_sum(&f5, f5.elem(1), f5.elem(1));
        assert!(close(s.value, -3.618_034_0, 0.0, 1e-7));
        assert!(s.magnitude <= 2.0 * 5f64.sqrt());
        let z = salie_sum(&f5, f5.elem(0), f5.elem(0));
        assert!(z.value.norm() < 1e-12);

        let f7 = make_field(7).unwrap();
        let s = salie_sum(&f7, f7.elem(1), f7.elem(0));
        let g = gauss_sum(&f7, f7.elem(1), 1).unwrap();
        assert!((s.value - g.value).norm() < 1e-12);
    }

    #[test]
    fn kloosterman_examples() {
        let f5 = make_field(5).unwrap();
        let k = kloosterman_sum(&f5, f5.elem(1), f5.elem(1));
        assert!(close(k.value, 0.381_966_0, 0.0, 1e-7));
        let k = kloosterman_sum(&f5, f5.elem(0), f5.elem(0));
        assert!(close(k.value, 4.0, 0.0, 1e-12));
        assert!(k.bound.is_infinite());
        let k = kloosterman_sum(&f5, f5.elem(1), f5.elem(0));
        assert!(close(k.value, -1.0, 0.0, 1e-12));
    }

    #[test]
    fn kloosterman_symmetry_and_reality() {
        for q in [3, 5, 7, 11, 13, 29] {
            let f = make_field(q).unwrap();
            for a in 0..q {
                for b in 0..q {
                    let ab = kloosterman_sum(&f, f.elem(a as i64), f.elem(b as i64));
                    let ba = kloosterman_sum(&f, f.elem(b as i64), f.elem(a as i64));
                    assert!((ab.value - ba.value).norm() <= 1e-12);
                }
                let aa = kloosterman_sum(&f, f.elem(a as i64), f.elem(a as i64));
                assert!(aa.value.im.abs() <= 1e-9);
            }
        }
    }
}
