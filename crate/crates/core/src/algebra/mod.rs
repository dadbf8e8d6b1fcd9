//! Exact algebra of clock strings: products of per-site monomials
//! `X^x Z^z` on `N` sites of `ℤ_Q` clock variables, with `XZ = ω ZX` and
//! `ω = exp(2πi/Q)`. For `Q = 2` these are Pauli strings with
//! `σ^x = X`, `σ^z = Z`, `σ^y = i·XZ`.

mod phase;
mod string;
mod sum;

pub use phase::{chiral_weight, root_of_unity};
pub use string::{ClockString, Pauli};
pub use sum::{OperatorSum, DEFAULT_TOLERANCE};
