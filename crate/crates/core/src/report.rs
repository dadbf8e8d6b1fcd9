use alloc::string::String;
use alloc::vec::Vec;

/// Direction of the tolerance test.
///
/// Most checks assert that a residual is small (`Upper`). A few assert that
/// something does *not* hold, e.g. that two charges fail to commute; those
/// pass when the residual exceeds the tolerance (`Lower`).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Bound {
    Upper,
    Lower,
}

impl Bound {
    pub fn as_str(self) -> &'static str {
        match self {
            Bound::Upper => "upper",
            Bound::Lower => "lower",
        }
    }
}

/// One verified relation instance.
#[derive(Clone, Debug, PartialEq)]
pub struct VerificationReport {
    pub suite: String,
    pub name: String,
    /// Stable identifier of the relation family (e.g. `"dolan-grady"`).
    pub anchor: String,
    /// Ordered `(key, value)` pairs describing the instance.
    pub params: Vec<(String, String)>,
    pub residual: f64,
    pub tolerance: f64,
    pub bound: Bound,
    pub passed: bool,
    pub seed: Option<u64>,
    pub wall_ms: u64,
}

impl VerificationReport {
    pub fn new(suite: &str, name: &str, anchor: &str, residual: f64, tolerance: f64) -> Self {
        Self::with_bound(suite, name, anchor, residual, tolerance, Bound::Upper)
    }

    pub fn with_bound(suite: &str, name: &str, anchor: &str, residual: f64, tolerance: f64, bound: Bound) -> Self {
        let passed = match bound {
            Bound::Upper => residual <= tolerance,
            Bound::Lower => residual > tolerance,
        };
        Self {
            suite: suite.into(),
            name: name.into(),
            anchor: anchor.into(),
            params: Vec::new(),
            residual,
            tolerance,
            bound,
            passed,
            seed: None,
            wall_ms: 0,
        }
    }

    pub fn param(mut self, key: &str, value: impl core::fmt::Display) -> Self {
        self.params.push((key.into(), alloc::format!("{value}")));
        self
    }

    pub fn seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    /// Re-evaluates `passed` against a new tolerance.
    pub fn retolerance(mut self, tol: f64) -> Self {
        self.tolerance = tol;
        self.passed = match self.bound {
            Bound::Upper => self.residual <= tol,
            Bound::Lower => self.residual > tol,
        };
        self
    }
}

/// True when every report passed.
pub fn all_passed(reports: &[VerificationReport]) -> bool {
    reports.iter().all(|r| r.passed)
}
