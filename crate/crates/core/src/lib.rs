//! Fourier extension estimates for non-degenerate quadratic surfaces over
//! prime fields.
//!
//! The crate is organised bottom-up:
//!
//! * [`field`]: prime-field arithmetic with the canonical additive character
//!   `χ(t) = e^{2πit/q}` and the quadratic character `ψ`.
//! * [`expsums`]: Gauss, power, Salié and Kloosterman sums.
//! * [`quadform`]: quadratic forms, congruent diagonalization, level surfaces.
//! * [`fourier`]: the transform on `F_q^d`, norms, measure convolution.
//! * [`extension`]: surface measure, extension operator, closed-form surface
//!   transform, `R*(p→r)` estimation and exponent arithmetic.
//! * [`incidence`]: pair sums, shifted incidences, additive energy.
//! * [`reference`]: slow oracles that share no summation code with the above.
//! * [`cli`]: sweep orchestration and CSV/JSON reporting.

pub mod cli;
pub mod error;
pub mod expsums;
pub mod extension;
pub mod field;
pub mod fourier;
pub mod incidence;
pub mod quadform;
pub mod reference;
pub mod report;

pub use error::{Error, Result};
pub use field::{FieldElement, PrimeField};
pub use report::{BoundReport, CheckContext, Status};

/// Largest modulus accepted for scalar character sums.
pub const MAX_SCALAR_Q: u32 = 9973;

/// Largest grid `q^d` accepted by grid-based operations.
pub const MAX_GRID: u64 = 100_000_000;

/// Returns `q^d` when it fits the grid budget.
pub fn grid_size(q: u32, d: usize) -> Result<usize> {
    let mut n: u64 = 1;
    for _ in 0..d {
        n = n.saturating_mul(q as u64);
        if n > MAX_GRID {
            return Err(Error::GridTooLarge { q, d });
        }
    }
    Ok(n as usize)
}

/// Deterministic seed derivation (splitmix64 over the parts).
pub fn mix_seed(parts: &[u64]) -> u64 {
    let mut state: u64 = 0x9E37_79B9_7F4A_7C15;
    for &p in parts {
        state = state.wrapping_add(p).wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        state = z ^ (z >> 31);
    }
    state
}
