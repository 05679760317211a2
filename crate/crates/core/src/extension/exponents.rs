//! Exact exponent arithmetic: the Stein–Tomas threshold, the kernel
//! bootstrap, Riesz–Thorin interpolation and the restricted-set formulas.

use num_rational::Ratio;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::fourier::Exponent;
use crate::{Error, Result};

pub type Rational = Ratio<i64>;

/// `(p, r)` for an estimate `L^p(dσ) → L^r(dm)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ExponentPair {
    pub p: Exponent,
    pub r: Exponent,
}

impl ExponentPair {
    pub fn new(p: Exponent, r: Exponent) -> Self {
        Self { p, r }
    }

    pub fn finite(p: Rational, r: Rational) -> Result<Self> {
        Ok(Self {
            p: Exponent::new(p)?,
            r: Exponent::new(r)?,
        })
    }

    /// `(1/p, 1/r)`, the coordinates used for exponent diagrams.
    pub fn reciprocals(&self) -> (Rational, Rational) {
        (self.p.reciprocal(), self.r.reciprocal())
    }
}

impl std::fmt::Display for ExponentPair {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}->{}", self.p, self.r)
    }
}

fn r(n: i64) -> Rational {
    Rational::from_integer(n)
}

/// `r = (2d + 2)/(d - 1)`.
pub fn stein_tomas_exponent(d: i64) -> Result<Exponent> {
    if d < 2 {
        return Err(Error::BadDimension(format!("d = {d} < 2")));
    }
    Exponent::new(Rational::new(2 * d + 2, d - 1))
}

/// Output of [`bootstrap_exponent`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Bootstrap {
    /// `2/θ`.
    #[serde(serialize_with = "ser_rational")]
    pub r_out: Rational,
    /// Exponent of `q` left over; the bootstrap closes when it is `<= 0`.
    #[serde(serialize_with = "ser_rational")]
    pub q_exponent: Rational,
}

pub(crate) fn ser_rational<S: serde::Serializer>(v: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

/// Kernel bootstrap from `R*(2→2) ≈ q^{1/2}` and `‖K‖_∞ ≲ q^{-d̃/2}`:
/// `R*(2→2/θ) ≲ 1 + q^{θ/2 - d̃(1-θ)/4}`.
pub fn bootstrap_exponent(d: i64, d_tilde: Rational, theta: Rational) -> Result<Bootstrap> {
    if theta <= Rational::zero() || theta >= Rational::one() {
        return Err(Error::BadTheta);
    }
    if d < 2 || d_tilde <= Rational::zero() || d_tilde >= r(d) {
        return Err(Error::BadDimension(format!(
            "need 0 < d~ < d with d >= 2, got d = {d}, d~ = {d_tilde}"
        )));
    }
    Ok(Bootstrap {
        r_out: r(2) / theta,
        q_exponent: theta / r(2) - d_tilde * (Rational::one() - theta) / r(4),
    })
}

/// Riesz–Thorin: `1/p = θ/p₁ + (1-θ)/p₂`, `1/r` likewise, constant
/// `c₁^θ c₂^{1-θ}`.
pub fn interpolate_exponents(
    e1: (ExponentPair, f64),
    e2: (ExponentPair, f64),
    theta: Rational,
) -> Result<(ExponentPair, f64)> {
    if theta < Rational::zero() || theta > Rational::one() {
        return Err(Error::BadTheta);
    }
    let rest = Rational::one() - theta;
    let (p1, r1) = e1.0.reciprocals();
    let (p2, r2) = e2.0.reciprocals();
    let pair = ExponentPair {
        p: Exponent::from_reciprocal(theta * p1 + rest * p2)?,
        r: Exponent::from_reciprocal(theta * r1 + rest * r2)?,
    };
    let t = *theta.numer() as f64 / *theta.denom() as f64;
    let constant = e1.1.powf(t) * e2.1.powf(1.0 - t);
    Ok((pair, constant))
}

/// Size range of a restricted set `E ⊂ S_j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SizeBranch {
    /// `1 ≲ #E ≲ q^{(d-1)/2}`.
    Small,
    /// `1 ≲ #E ≲ q^{(d+1)/2}`.
    Large,
}

impl SizeBranch {
    pub fn as_str(self) -> &'static str {
        match self {
            SizeBranch::Small => "small",
            SizeBranch::Large => "large",
        }
    }
}

fn checked_div(num: Rational, den: Rational) -> Result<Rational> {
    if den.is_zero() {
        return Err(Error::DegenerateDenominator);
    }
    Ok(num / den)
}

/// Exponent thresholds `(p, r)` for restricted-set extension estimates.
///
/// Small sets: `p = ((6d-2)p₀ - 8d + 8)/((3d-5)p₀ - 4d + 12)`,
/// `r = ((6d-2)p₀ - 8d + 8)/((3d-3)p₀ - 4d + 4)`.
/// Large sets: `p = ((6d-10)p₀ - 8d + 24)/((3d-9)p₀ - 4d + 20)`,
/// `r = ((6d-10)p₀ - 8d + 24)/((3d-7)p₀ - 4d + 12)`.
pub fn incidence3_exponents(d: i64, p0: Rational, branch: SizeBranch) -> Result<ExponentPair> {
    if d < 2 {
        return Err(Error::BadDimension(format!("d = {d} < 2")));
    }
    if p0 < r(2) {
        return Err(Error::BadExponent);
    }
    let (num, den_p, den_r) = match branch {
        SizeBranch::Small => (
            r(6 * d - 2) * p0 - r(8 * d - 8),
            r(3 * d - 5) * p0 - r(4 * d - 12),
            r(3 * d - 3) * p0 - r(4 * d - 4),
        ),
        SizeBranch::Large => (
            r(6 * d - 10) * p0 - r(8 * d - 24),
            r(3 * d - 9) * p0 - r(4 * d - 20),
            r(3 * d - 7) * p0 - r(4 * d - 12),
        ),
    };
    ExponentPair::finite(checked_div(num, den_p)?, checked_div(num, den_r)?)
}

/// Size regime for the `L^4` restricted-set estimates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum L4Regime {
    /// `#E ≤ q^{(d-1)/2}`.
    Small,
    /// `q^{(d-1)/2} ≤ #E ≤ q^{(d+1)/2}`.
    Middle,
    /// `#E ≤ q^{(d+1)/2}`.
    Union,
}

impl L4Regime {
    pub fn as_str(self) -> &'static str {
        match self {
            L4Regime::Small => "small",
            L4Regime::Middle => "middle",
            L4Regime::Union => "union",
        }
    }
}

/// The power of `q` in `‖(E dσ)^‖_4 ≲ q^e ‖E‖_{p₀}`:
/// `(-3d+5)/8 + (d-1)/(2p₀)` for small sets, `(-3d+9)/8 + (d-3)/(2p₀)` otherwise.
pub fn restricted_l4_q_exponent(d: i64, p0: Rational, regime: L4Regime) -> Rational {
    match regime {
        L4Regime::Small => Rational::new(5 - 3 * d, 8) + r(d - 1) / (r(2) * p0),
        L4Regime::Middle | L4Regime::Union => Rational::new(9 - 3 * d, 8) + r(d - 3) / (r(2) * p0),
    }
}

/// A labelled polygon in the `(1/p, 1/r)` plane.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polygon {
    pub label: String,
    pub vertices: Vec<(Rational, Rational)>,
}

impl Polygon {
    /// Region under a vertex `(1/p*, 1/r*)`: everything reachable from the
    /// vertex by raising `p` or `r`, interpolated with the trivial
    /// `L^1 → L^∞` bound.
    fn below(label: String, vertex: (Rational, Rational)) -> Self {
        let zero = Rational::zero();
        Self {
            label,
            vertices: vec![(zero, zero), (Rational::one(), zero), vertex, (zero, vertex.1)],
        }
    }

    /// `label x1,y1 x2,y2 ...` with exact rationals.
    pub fn to_line(&self) -> String {
        let mut out = self.label.clone();
        for (x, y) in &self.vertices {
            out.push_str(&format!(" {x},{y}"));
        }
        out
    }
}

/// Plot-ready regions for dimension `d`; entries whose formulas degenerate are
/// returned as errors keyed by label.
pub fn region_polygons(d: i64, p0_list: &[Rational]) -> Result<Vec<std::result::Result<Polygon, (String, Error)>>> {
    let mut out = Vec::new();
    let st = stein_tomas_exponent(d)?;
    out.push(Ok(Polygon::below(
        format!("stein_tomas_d{d}"),
        (Rational::new(1, 2), st.reciprocal()),
    )));
    out.push(Ok(Polygon::below(
        format!("l2_l4_d{d}"),
        (Rational::new(1, 2), Rational::new(1, 4)),
    )));
    out.push(Ok(Polygon::below(
        format!("big_set_d{d}"),
        (Rational::new(3, 4), Rational::new(1, 4)),
    )));
    if d == 2 {
        // r >= 4 and r >= 2p/(p-1)
        out.push(Ok(Polygon::below(
            "necessary_d2".to_string(),
            (Rational::new(1, 2), Rational::new(1, 4)),
        )));
    }
    for &p0 in p0_list {
        for branch in [SizeBranch::Small, SizeBranch::Large] {
            let label = format!("incidence_{}_d{d}_p0={p0}", branch.as_str());
            out.push(match incidence3_exponents(d, p0, branch) {
                Ok(pair) => Ok(Polygon::below(label, pair.reciprocals())),
                Err(e) => Err((label, e)),
            });
        }
    }
    Ok(out)
}
