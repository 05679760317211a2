//! Uniform record for every verified inequality or identity.

use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    /// Computed but outside the size regime where the bound is claimed.
    OutOfRegime,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "FAIL",
            Status::OutOfRegime => "out_of_regime",
        }
    }

    /// Whether the status counts as a failure for exit codes.
    pub fn is_failure(self) -> bool {
        matches!(self, Status::Fail)
    }
}

/// Where a measurement came from.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct CheckContext {
    pub q: u32,
    pub d: usize,
    pub form_id: String,
    pub j: Option<u32>,
    pub seed: Option<u64>,
    pub family: String,
}

impl CheckContext {
    pub fn new(q: u32, d: usize) -> Self {
        Self {
            q,
            d,
            ..Default::default()
        }
    }

    pub fn form(mut self, id: impl Into<String>) -> Self {
        self.form_id = id.into();
        self
    }

    pub fn level(mut self, j: u32) -> Self {
        self.j = Some(j);
        self
    }

    pub fn seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    pub fn family(mut self, family: impl Into<String>) -> Self {
        self.family = family.into();
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub check: String,
    pub context: CheckContext,
    pub value: f64,
    pub bound: f64,
    pub ratio: f64,
    pub witness: String,
    pub status: Status,
}

impl BoundReport {
    /// Inequality `value <= bound + slack`.
    pub fn upper(
        check: impl Into<String>,
        context: CheckContext,
        value: f64,
        bound: f64,
        slack: f64,
        witness: impl Into<String>,
    ) -> Self {
        let status = if value <= bound + slack {
            Status::Pass
        } else {
            Status::Fail
        };
        Self {
            check: check.into(),
            context,
            value,
            bound,
            ratio: ratio(value, bound),
            witness: witness.into(),
            status,
        }
    }

    /// Identity `value = expected` to relative tolerance `rel_tol`; the
    /// expected value is stored as the bound.
    pub fn identity(
        check: impl Into<String>,
        context: CheckContext,
        value: f64,
        expected: f64,
        rel_tol: f64,
        witness: impl Into<String>,
    ) -> Self {
        let status = if (value - expected).abs() <= rel_tol * expected.abs() {
            Status::Pass
        } else {
            Status::Fail
        };
        Self {
            check: check.into(),
            context,
            value,
            bound: expected,
            ratio: ratio(value, expected),
            witness: witness.into(),
            status,
        }
    }

    /// Same as [`upper`](Self::upper) but flagged instead of asserted.
    pub fn out_of_regime(mut self) -> Self {
        self.status = Status::OutOfRegime;
        self
    }

    pub fn passed(&self) -> bool {
        !self.status.is_failure()
    }
}

pub(crate) fn ratio(value: f64, bound: f64) -> f64 {
    if bound.is_infinite() {
        0.0
    } else {
        value / bound
    }
}
