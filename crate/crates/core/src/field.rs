//! Prime-field arithmetic with precomputed character tables.

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;

use crate::{Error, Result, MAX_SCALAR_Q};

/// A residue in `[0, q)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FieldElement(u32);

impl FieldElement {
    pub fn value(self) -> u32 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// The prime field `F_q`, `q` odd, with eager lookup tables.
///
/// `chars[t] = exp(2πi t/q)` is the canonical additive character and
/// `legendre[t]` the quadratic character extended by `ψ(0) = 0`. A primitive
/// root and its discrete-log table are kept for characters of higher order.
#[derive(Debug, Clone)]
pub struct PrimeField {
    q: u32,
    inv: Vec<u32>,
    legendre: Vec<i8>,
    chars: Vec<Complex64>,
    generator: u32,
    dlog: Vec<u32>,
}

impl PartialEq for PrimeField {
    fn eq(&self, other: &Self) -> bool {
        self.q == other.q
    }
}

impl Eq for PrimeField {}

fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut p = 2u32;
    while p * p <= n {
        if n % p == 0 {
            return false;
        }
        p += 1;
    }
    true
}

fn prime_factors(mut n: u32) -> Vec<u32> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            out.push(p);
            while n % p == 0 {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % m;
        }
        base = base * base % m;
        exp >>= 1;
    }
    acc
}

/// Inverse by the extended Euclidean algorithm; `t` must be a unit.
fn egcd_inverse(t: u32, q: u32) -> u32 {
    let (mut r0, mut r1) = (q as i64, t as i64);
    let (mut s0, mut s1) = (0i64, 1i64);
    while r1 != 0 {
        let k = r0 / r1;
        (r0, r1) = (r1, r0 - k * r1);
        (s0, s1) = (s1, s0 - k * s1);
    }
    s0.rem_euclid(q as i64) as u32
}

impl PrimeField {
    pub fn new(q: u32) -> Result<Self> {
        if q == 2 {
            return Err(Error::EvenCharacteristic);
        }
        if !is_prime(q) {
            return Err(Error::NotPrime(q));
        }
        if q > MAX_SCALAR_Q {
            return Err(Error::FieldTooLarge(q));
        }

        let mut inv = vec![0u32; q as usize];
        for t in 1..q {
            inv[t as usize] = egcd_inverse(t, q);
        }

        let mut legendre = vec![-1i8; q as usize];
        legendre[0] = 0;
        for s in 1..q as u64 {
            legendre[(s * s % q as u64) as usize] = 1;
        }

        let chars = (0..q)
            .map(|t| Complex64::from_polar(1.0, 2.0 * PI * t as f64 / q as f64))
            .collect();

        let order = q - 1;
        let factors = prime_factors(order);
        let generator = (2..q)
            .find(|&g| {
                factors
                    .iter()
                    .all(|&p| pow_mod(g as u64, (order / p) as u64, q as u64) != 1)
            })
            .expect("F_q^* is cyclic");
        let mut dlog = vec![0u32; q as usize];
        let mut x = 1u64;
        for k in 0..order {
            dlog[x as usize] = k;
            x = x * generator as u64 % q as u64;
        }

        Ok(Self {
            q,
            inv,
            legendre,
            chars,
            generator,
            dlog,
        })
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    /// Reduces any integer into the field.
    pub fn elem(&self, v: i64) -> FieldElement {
        FieldElement(v.rem_euclid(self.q as i64) as u32)
    }

    /// Canonical additive character `χ(t) = e^{2πit/q}`.
    #[inline]
    pub fn chi(&self, t: FieldElement) -> Complex64 {
        self.chars[t.0 as usize]
    }

    /// `χ` on a raw residue already reduced mod q.
    #[inline]
    pub fn chi_raw(&self, t: u32) -> Complex64 {
        self.chars[t as usize]
    }

    /// Quadratic character (Legendre symbol), `ψ(0) = 0`.
    #[inline]
    pub fn psi(&self, t: FieldElement) -> i8 {
        self.legendre[t.0 as usize]
    }

    #[inline]
    pub fn psi_raw(&self, t: u32) -> i8 {
        self.legendre[t as usize]
    }

    pub fn inv(&self, t: FieldElement) -> Result<FieldElement> {
        if t.0 == 0 {
            return Err(Error::ZeroInverse);
        }
        Ok(FieldElement(self.inv[t.0 as usize]))
    }

    /// Inverse on a raw nonzero residue; returns 0 for 0.
    #[inline]
    pub fn inv_raw(&self, t: u32) -> u32 {
        self.inv[t as usize]
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        let s = a + b;
        if s >= self.q {
            s - self.q
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        if a >= b {
            a - b
        } else {
            a + self.q - b
        }
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.q - a
        }
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.q as u64) as u32
    }

    pub fn pow(&self, a: u32, e: u64) -> u32 {
        pow_mod(a as u64, e, self.q as u64) as u32
    }

    /// Smallest primitive root of `F_q^*`.
    pub fn generator(&self) -> u32 {
        self.generator
    }

    /// Discrete logarithm base [`generator`](Self::generator) of a nonzero residue.
    pub fn dlog(&self, t: u32) -> Result<u32> {
        if t == 0 {
            return Err(Error::ZeroInverse);
        }
        Ok(self.dlog[t as usize])
    }

    /// The full additive character table, `chars[t] = χ(t)`.
    pub fn char_table(&self) -> &[Complex64] {
        &self.chars
    }

    pub fn legendre_table(&self) -> &[i8] {
        &self.legendre
    }

    pub fn inv_table(&self) -> &[u32] {
        &self.inv
    }
}

/// Convenience constructor mirroring [`PrimeField::new`].
pub fn make_field(q: u32) -> Result<PrimeField> {
    PrimeField::new(q)
}

/// Odd primes in `[lo, hi]`.
pub fn odd_primes(lo: u32, hi: u32) -> Vec<u32> {
    (lo.max(3)..=hi).filter(|&n| is_prime(n)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_table_mod_7() {
        let f = make_field(7).unwrap();
        assert_eq!(&f.inv_table()[1..], &[1, 4, 5, 2, 3, 6]);
        assert_eq!(f.inv(f.elem(3)).unwrap().value(), 5);
        assert_eq!(f.inv(f.elem(1)).unwrap().value(), 1);
        assert_eq!(f.inv(f.elem(0)), Err(Error::ZeroInverse));
    }

    #[test]
    fn rejects_bad_moduli() {
        assert_eq!(make_field(2).unwrap_err(), Error::EvenCharacteristic);
        assert_eq!(make_field(9).unwrap_err(), Error::NotPrime(9));
        assert_eq!(make_field(1).unwrap_err(), Error::NotPrime(1));
        assert_eq!(make_field(10007).unwrap_err(), Error::FieldTooLarge(10007));
        assert!(make_field(9973).is_ok());
    }

    #[test]
    fn chi_values() {
        let f = make_field(5).unwrap();
        let one = f.chi(f.elem(0));
        assert_eq!(one, Complex64::new(1.0, 0.0));
        let z = f.chi(f.elem(1));
        assert!((z.re - 0.309_016_994_374_947_4).abs() < 1e-12);
        assert!((z.im - 0.951_056_516_295_153_5).abs() < 1e-12);
        for t in 0..5 {
            let prod = f.chi(f.elem(t)) * f.chi(f.elem(5 - t));
            assert!((prod - Complex64::new(1.0, 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn psi_values() {
        let f = make_field(5).unwrap();
        assert_eq!(f.psi(f.elem(4)), 1);
        assert_eq!(f.psi(f.elem(2)), -1);
        assert_eq!(f.psi(f.elem(0)), 0);
    }

    #[test]
    fn character_properties_sweep() {
        for q in odd_primes(3, 101) {
            let f = make_field(q).unwrap();
            let total: Complex64 = f.char_table().iter().sum();
            assert!(total.norm() <= 1e-12 * q as f64, "q = {q}");
            let psi_sum: i32 = (1..q).map(|t| f.psi_raw(t) as i32).sum();
            assert_eq!(psi_sum, 0);
            let squares = (1..q).filter(|&t| f.psi_raw(t) == 1).count();
            assert_eq!(squares as u32, (q - 1) / 2);
            for a in 1..q {
                for b in 1..q {
                    assert_eq!(
                        f.psi_raw(f.mul(a, b)),
                        f.psi_raw(a) * f.psi_raw(b),
                        "psi multiplicativity q={q} a={a} b={b}"
                    );
                }
            }
            let exhaustive = q <= 31;
            let step = if exhaustive { 1 } else { 7 };
            for a in (0..q).step_by(step) {
                for b in (0..q).step_by(step) {
                    let lhs = f.chi_raw(f.add(a, b));
                    let rhs = f.chi_raw(a) * f.chi_raw(b);
                    assert!((lhs - rhs).norm() <= 1e-12);
                }
            }
            for t in 1..q {
                assert_eq!(f.mul(t, f.inv_raw(t)), 1);
            }
        }
    }

    #[test]
    fn generator_has_full_order() {
        for q in odd_primes(3, 200) {
            let f = make_field(q).unwrap();
            let g = f.generator();
            let mut seen = vec![false; q as usize];
            let mut x = 1u32;
            for _ in 0..q - 1 {
                assert!(!seen[x as usize]);
                seen[x as usize] = true;
                x = f.mul(x, g);
            }
            for t in 1..q {
                assert_eq!(f.pow(g, f.dlog(t).unwrap() as u64), t);
            }
        }
    }
}
