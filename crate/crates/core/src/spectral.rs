//! Exact diagonalisation, degeneracy tables, free-fermion spectrum detection
//! and commutation checks between conserved charges.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::algebra::OperatorSum;
use crate::error::{Error, Result};
use crate::integrability::{charge, lax_for_model, LaxOperator};
use crate::linalg::{eigenvalues, hermitian_eigenvalues, to_dense, ComplexMatrix};
use crate::models::{commuting_charge, hamiltonian, ModelKind, ModelSpec};
use crate::report::{Bound, VerificationReport};

/// Eigenvalues of a model Hamiltonian.
#[derive(Clone, Debug, PartialEq)]
pub enum Spectrum {
    /// Ascending real eigenvalues of a Hermitian Hamiltonian.
    Real(Vec<f64>),
    /// Non-Hermitian Hamiltonian (open chiral chains): complex eigenvalues
    /// sorted by real then imaginary part.
    Complex { values: Vec<Complex64>, warning: String },
}

impl Spectrum {
    pub fn real(&self) -> Option<&[f64]> {
        match self {
            Spectrum::Real(v) => Some(v),
            Spectrum::Complex { .. } => None,
        }
    }

    pub fn len(&self) -> usize {
        match self {
            Spectrum::Real(v) => v.len(),
            Spectrum::Complex { values, .. } => values.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

pub fn spectrum(spec: &ModelSpec) -> Result<Spectrum> {
    let h = hamiltonian(spec)?;
    let dense = to_dense(&h)?;
    if h.adjoint().equals(&h, 1e-12) {
        return Ok(Spectrum::Real(hermitian_eigenvalues(&dense)?));
    }
    Ok(Spectrum::Complex {
        values: eigenvalues(&dense)?,
        warning: format!(
            "{} Hamiltonian is not Hermitian (deviation {:.3e}); general eigenvalue path used",
            spec.kind,
            dense.hermitian_deviation()
        ),
    })
}

/// `1e-8 · max(1, max |E|)`.
pub fn default_degeneracy_tolerance(eigs: &[f64]) -> f64 {
    1e-8 * eigs.iter().fold(1.0f64, |m, e| m.max(e.abs()))
}

/// Groups sorted eigenvalues into clusters whose consecutive gaps are at
/// most `tol`; each cluster is reported by its mean and size.
pub fn degeneracies(eigs: &[f64], tol: f64) -> Vec<(f64, usize)> {
    let mut out: Vec<(f64, usize)> = Vec::new();
    let mut sum = 0.0;
    let mut count = 0usize;
    let mut last = f64::NAN;
    for &e in eigs {
        if count > 0 && e - last > tol {
            out.push((sum / count as f64, count));
            sum = 0.0;
            count = 0;
        }
        sum += e;
        count += 1;
        last = e;
    }
    if count > 0 {
        out.push((sum / count as f64, count));
    }
    out
}

/// Largest number of modes the free-spectrum search will validate.
pub const MAX_FREE_MODES: usize = 14;

fn subset_energies(ground: f64, eps: &[f64]) -> Vec<f64> {
    let mut out = vec![ground];
    for &e in eps {
        let shifted: Vec<f64> = out.iter().map(|x| x + 2.0 * e).collect();
        out.extend(shifted);
    }
    out.sort_by(f64::total_cmp);
    out
}

/// Multiset difference `a \ b` of sorted lists, matching within `tol`;
/// `None` if some element of `b` is missing from `a`.
fn multiset_minus(a: &[f64], b: &[f64], tol: f64) -> Option<Vec<f64>> {
    let mut out = Vec::with_capacity(a.len());
    let mut j = 0;
    for &x in a {
        if j < b.len() && (x - b[j]).abs() <= tol {
            j += 1;
        } else if j < b.len() && b[j] < x - tol {
            return None;
        } else {
            out.push(x);
        }
    }
    (j == b.len()).then_some(out)
}

/// Looks for `ε₁ … ε_modes ≥ 0` such that the spectrum is the multiset
/// `{Σ_k ±ε_k}`, each level repeated `len / 2^modes` times.
///
/// The single-particle energies are forced: the smallest level not yet
/// explained by subsets of the modes found so far must be a new mode. The
/// candidate is then validated against the whole multiset, so `None` means
/// no decomposition with this many modes exists at tolerance `tol`.
pub fn free_spectrum_decomposition(eigs: &[f64], modes: usize, tol: f64) -> Option<Vec<f64>> {
    if modes > MAX_FREE_MODES || eigs.is_empty() {
        return None;
    }
    let levels = 1usize << modes;
    if eigs.len() % levels != 0 {
        return None;
    }
    let trivial = eigs.len() / levels;
    let mut sorted = eigs.to_vec();
    sorted.sort_by(f64::total_cmp);
    // strip the trivial multiplicity
    let mut reduced = Vec::with_capacity(levels);
    for (value, mult) in degeneracies(&sorted, tol) {
        if mult % trivial != 0 {
            return None;
        }
        reduced.extend(core::iter::repeat(value).take(mult / trivial));
    }
    let ground = reduced[0];
    let mut eps: Vec<f64> = Vec::with_capacity(modes);
    while eps.len() < modes {
        let explained = subset_energies(ground, &eps);
        let rest = multiset_minus(&reduced, &explained, tol)?;
        let next = *rest.first()?;
        eps.push((next - ground) / 2.0);
    }
    let generated = subset_energies(ground, &eps);
    let sum: f64 = eps.iter().sum();
    let symmetric = (ground + sum).abs() <= tol * (1.0 + modes as f64);
    let matches = generated.len() == reduced.len() && generated.iter().zip(&reduced).all(|(a, b)| (a - b).abs() <= tol);
    (symmetric && matches).then_some(eps)
}

/// Smallest number of modes (`1 ≤ modes ≤ min(log₂ len, MAX_FREE_MODES)`)
/// admitting a free decomposition.
pub fn find_free_spectrum(eigs: &[f64], tol: f64) -> Option<(usize, Vec<f64>)> {
    let max = (usize::BITS - 1 - eigs.len().max(1).leading_zeros()) as usize;
    (1..=max.min(MAX_FREE_MODES)).find_map(|m| free_spectrum_decomposition(eigs, m, tol).map(|e| (m, e)))
}

/// `‖[a, b]‖_F / (‖a‖_F ‖b‖_F)`.
pub fn commutator_residual(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<f64> {
    let scale = a.frobenius_norm() * b.frobenius_norm();
    if scale == 0.0 {
        return Ok(0.0);
    }
    Ok(a.commutator(b)?.frobenius_norm() / scale)
}

fn dual_hamiltonian(spec: &ModelSpec) -> Result<Option<OperatorSum>> {
    let dual_kind = match spec.kind {
        ModelKind::Ff8v | ModelKind::Fendley => ModelKind::FendleyDual,
        ModelKind::FendleyDual => ModelKind::Fendley,
        _ => return Ok(None),
    };
    let dual = ModelSpec {
        kind: dual_kind,
        lambda: 1.0,
        couplings: Vec::new(),
        ..spec.clone()
    };
    Ok(Some(hamiltonian(&dual)?))
}

/// Pairwise commutators among the conserved quantities of `spec`: the
/// Hamiltonian, `Q₂` and `Q₃` from the transfer matrix (when a Lax operator
/// exists), `Σ_{s<t} H^(s,t)` and the dual Hamiltonian. A second report
/// asserts that the individual `H^(s,t)` do *not* all commute with each other
/// (lower bound), when there are at least two of them.
pub fn charge_compatibility(spec: &ModelSpec) -> Result<Vec<VerificationReport>> {
    let mut named: Vec<(String, ComplexMatrix)> = Vec::new();
    named.push(("H".into(), to_dense(&hamiltonian(spec)?)?));
    if let Ok(lax) = lax_for_model(spec) {
        let _ = lax.aux_dim();
        named.push(("Q2".into(), charge(&lax, spec.l, 1)?));
        named.push(("Q3".into(), charge(&lax, spec.l, 2)?));
    }
    let mut pair_charges = Vec::new();
    if spec.q == 2 && spec.check_onsager_divisibility().is_ok() && spec.kind != ModelKind::FendleyMixed {
        let mut sum = OperatorSum::zero(2, spec.l);
        for s in 0..spec.r {
            for t in s + 1..=spec.r {
                let h = commuting_charge(spec, s, t)?;
                sum = sum.add(&h)?;
                pair_charges.push((format!("H({s},{t})"), to_dense(&h)?));
            }
        }
        named.push(("sum H(s,t)".into(), to_dense(&sum)?));
    }
    if let Some(hd) = dual_hamiltonian(spec)? {
        named.push(("H dual".into(), to_dense(&hd)?));
    }
    let mut worst = 0.0f64;
    let mut worst_pair = String::new();
    for i in 0..named.len() {
        for j in i + 1..named.len() {
            let r = commutator_residual(&named[i].1, &named[j].1)?;
            if r >= worst {
                worst = r;
                worst_pair = format!("[{}, {}]", named[i].0, named[j].0);
            }
        }
    }
    let members: Vec<&str> = named.iter().map(|(n, _)| n.as_str()).collect();
    let mut out = vec![VerificationReport::new("spectral", "charges-commute", "charge-involution", worst, 1e-9)
        .param("model", spec.kind)
        .param("L", spec.l)
        .param("charges", members.join(";"))
        .param("worst", worst_pair)];
    if pair_charges.len() >= 2 {
        let mut largest = 0.0f64;
        for i in 0..pair_charges.len() {
            for j in i + 1..pair_charges.len() {
                largest = largest.max(commutator_residual(&pair_charges[i].1, &pair_charges[j].1)?);
            }
        }
        out.push(
            VerificationReport::with_bound(
                "spectral",
                "pair-charges-noncommuting",
                "pair-charges-noncommuting",
                largest,
                1e-6,
                Bound::Lower,
            )
            .param("model", spec.kind)
            .param("L", spec.l),
        );
    }
    Ok(out)
}

/// Spectrum of a Hermitian model or an error.
pub fn real_spectrum(spec: &ModelSpec) -> Result<Vec<f64>> {
    match spectrum(spec)? {
        Spectrum::Real(v) => Ok(v),
        Spectrum::Complex { warning, .. } => Err(Error::Unsupported(warning)),
    }
}
