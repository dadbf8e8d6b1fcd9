use alloc::format;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ModelKind {
    /// Transverse field Ising chain: `h_{2j-1} = σ^z_j`, `h_{2j} = σ^x_j σ^x_{j+1}`.
    Tfim,
    /// Free-fermionic eight-vertex chain: `h_j = σ^y_j σ^x_{j+1}`.
    Ff8v,
    /// `h_j = σ^y_j σ^x_{j+1} ⋯ σ^x_{j+r}`.
    Fendley,
    /// `h̃_j = σ^x_j ⋯ σ^x_{j+r-1} σ^y_{j+r}`.
    FendleyDual,
    /// `cos θ · H + sin θ · H̃`.
    FendleyMixed,
    /// `h_{2j-1} = Z_j`, `h_{2j} = X_j X_{j+1}^†`.
    ChiralPotts,
    /// `h_j = X_j ⋯ X_{j+r-1} Z_{j+r}`.
    Cpfm,
}

impl ModelKind {
    pub const ALL: [ModelKind; 7] = [
        ModelKind::Tfim,
        ModelKind::Ff8v,
        ModelKind::Fendley,
        ModelKind::FendleyDual,
        ModelKind::FendleyMixed,
        ModelKind::ChiralPotts,
        ModelKind::Cpfm,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ModelKind::Tfim => "TFIM",
            ModelKind::Ff8v => "FF8V",
            ModelKind::Fendley => "FENDLEY",
            ModelKind::FendleyDual => "FENDLEY_DUAL",
            ModelKind::FendleyMixed => "FENDLEY_MIXED",
            ModelKind::ChiralPotts => "CHIRAL_POTTS",
            ModelKind::Cpfm => "CPFM",
        }
    }

    /// Clock models use general `Q`; the rest are spin-1/2 chains.
    pub fn is_clock(self) -> bool {
        matches!(self, ModelKind::ChiralPotts | ModelKind::Cpfm)
    }

    /// Models whose generators are indexed on a doubled lattice `N = 2L`.
    pub fn doubled(self) -> bool {
        matches!(self, ModelKind::Tfim | ModelKind::ChiralPotts)
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ModelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let norm = s.trim().to_ascii_uppercase().replace('-', "_");
        ModelKind::ALL
            .into_iter()
            .find(|k| k.as_str() == norm)
            .ok_or_else(|| Error::Configuration(format!("unknown model kind `{s}`")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum Boundary {
    #[default]
    Periodic,
    Open,
}

impl Boundary {
    pub fn as_str(self) -> &'static str {
        match self {
            Boundary::Periodic => "periodic",
            Boundary::Open => "open",
        }
    }
}

impl FromStr for Boundary {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "periodic" | "pbc" => Ok(Boundary::Periodic),
            "open" | "obc" => Ok(Boundary::Open),
            _ => Err(Error::Configuration(format!("unknown boundary `{s}`"))),
        }
    }
}

/// A model instance. `l` counts physical sites; `r` is the interaction
/// range (1 for the TFIM, the eight-vertex chain and the chiral Potts chain).
///
/// `couplings` are optional per-term weights `ξ`. For the Fendley family
/// they may also have length `r + 1`, in which case term `j` gets
/// `ξ_{(j-1) mod (r+1)}` (the staggered chain). `lambda` weighs the odd
/// generators of the TFIM and chiral Potts chains, and `A^(0)` of the
/// eight-vertex chain.
#[derive(Clone, Debug, PartialEq)]
pub struct ModelSpec {
    pub kind: ModelKind,
    pub l: usize,
    pub r: usize,
    pub q: u8,
    pub boundary: Boundary,
    pub couplings: Vec<f64>,
    pub lambda: f64,
    pub theta: f64,
}

impl ModelSpec {
    fn base(kind: ModelKind, l: usize, r: usize, q: u8) -> Self {
        Self {
            kind,
            l,
            r,
            q,
            boundary: Boundary::Periodic,
            couplings: Vec::new(),
            lambda: 1.0,
            theta: 0.0,
        }
    }

    pub fn tfim(l: usize, lambda: f64) -> Self {
        Self {
            lambda,
            ..Self::base(ModelKind::Tfim, l, 1, 2)
        }
    }

    pub fn ff8v(l: usize) -> Self {
        Self::base(ModelKind::Ff8v, l, 1, 2)
    }

    pub fn fendley(l: usize, r: usize) -> Self {
        Self::base(ModelKind::Fendley, l, r, 2)
    }

    pub fn fendley_dual(l: usize, r: usize) -> Self {
        Self::base(ModelKind::FendleyDual, l, r, 2)
    }

    pub fn fendley_mixed(l: usize, r: usize, theta: f64) -> Self {
        Self {
            theta,
            ..Self::base(ModelKind::FendleyMixed, l, r, 2)
        }
    }

    pub fn chiral_potts(l: usize, q: u8, lambda: f64) -> Self {
        Self {
            lambda,
            ..Self::base(ModelKind::ChiralPotts, l, 1, q)
        }
    }

    pub fn cpfm(l: usize, r: usize, q: u8) -> Self {
        Self::base(ModelKind::Cpfm, l, r, q)
    }

    pub fn open(mut self) -> Self {
        self.boundary = Boundary::Open;
        self
    }

    pub fn with_couplings(mut self, xi: Vec<f64>) -> Self {
        self.couplings = xi;
        self
    }

    pub fn with_lambda(mut self, lambda: f64) -> Self {
        self.lambda = lambda;
        self
    }

    /// Number of algebra generators `N`.
    pub fn generators(&self) -> usize {
        if self.kind.doubled() {
            2 * self.l
        } else {
            self.l
        }
    }

    /// Number of physical sites.
    #[inline]
    pub fn sites(&self) -> usize {
        self.l
    }

    /// Hilbert-space dimension `Q^L`, if it fits in `usize`.
    pub fn dimension(&self) -> Option<usize> {
        let mut d: usize = 1;
        for _ in 0..self.l {
            d = d.checked_mul(self.q as usize)?;
        }
        Some(d)
    }

    /// Exponent `e` with `h_j h_{j+m} = ω^e h_{j+m} h_j` for `1 ≤ m ≤ r`.
    ///
    /// With `X[i][i+1] = 1`, `Z = diag(ω^k)` the clock representations
    /// exchange with `ω^{-1} = ω^{Q-1}`; for `Q = 2` this is the usual `-1`.
    pub fn exchange_exponent(&self) -> u8 {
        self.q - 1
    }

    pub fn validate(&self) -> Result<()> {
        let cfg = |m: alloc::string::String| Err(Error::Configuration(m));
        if self.l == 0 {
            return cfg("L must be positive".into());
        }
        if self.r == 0 {
            return cfg("r must be at least 1".into());
        }
        if self.q < 2 {
            return cfg(format!("Q = {} < 2", self.q));
        }
        if !self.kind.is_clock() && self.q != 2 {
            return cfg(format!("{} is a spin-1/2 model but Q = {}", self.kind, self.q));
        }
        if matches!(self.kind, ModelKind::Tfim | ModelKind::Ff8v | ModelKind::ChiralPotts) && self.r != 1 {
            return cfg(format!("{} has range r = 1, got {}", self.kind, self.r));
        }
        if self.kind != ModelKind::Tfim && self.kind != ModelKind::ChiralPotts && self.l < self.r + 1 {
            return cfg(format!("L = {} is shorter than one generator (r + 1 = {})", self.l, self.r + 1));
        }
        if !(self.lambda.is_finite() && self.theta.is_finite()) || self.couplings.iter().any(|x| !x.is_finite()) {
            return cfg("non-finite coupling".into());
        }
        let terms = self.term_count();
        let staggered = !self.kind.doubled() && self.couplings.len() == self.r + 1;
        if !self.couplings.is_empty() && self.couplings.len() != terms && !staggered {
            return cfg(format!(
                "{} couplings supplied for {} Hamiltonian terms",
                self.couplings.len(),
                terms
            ));
        }
        Ok(())
    }

    /// Number of local terms in the Hamiltonian (per family for the mixed
    /// model).
    pub fn term_count(&self) -> usize {
        match (self.boundary, self.kind.doubled()) {
            (Boundary::Periodic, true) => 2 * self.l,
            (Boundary::Open, true) => 2 * self.l - 1,
            (Boundary::Periodic, false) => self.l,
            (Boundary::Open, false) => self.l - self.r,
        }
    }

    /// `ξ` for the `index`-th (0-based) Hamiltonian term.
    pub(crate) fn coupling(&self, index: usize) -> f64 {
        if self.couplings.is_empty() {
            1.0
        } else if self.couplings.len() == self.term_count() {
            self.couplings[index]
        } else {
            self.couplings[index % (self.r + 1)]
        }
    }

    /// Requires `N mod (r + 1) = 0`, the condition for the Onsager
    /// generators to be defined.
    pub fn check_onsager_divisibility(&self) -> Result<()> {
        let n = self.generators();
        if n % (self.r + 1) != 0 {
            return Err(Error::Configuration(format!(
                "N = {n} is not a multiple of r + 1 = {}",
                self.r + 1
            )));
        }
        Ok(())
    }
}
