use alloc::format;
use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use super::lax::{eight_vertex_full_weights, eight_vertex_weights, LaxOperator, Parametrization};
use super::rmatrix::RMatrixSpec;
use super::transfer::{charge, finite_difference_derivatives, transfer, transfer_derivatives};
use crate::error::{Error, Result};
use crate::linalg::{embed, to_dense, ComplexMatrix};
use crate::models::{commuting_charge, hamiltonian, ModelSpec};
use crate::report::VerificationReport;
use crate::sample;

const SUITE: &str = "integrability";

/// `‖a − b‖_F / max(‖a‖_F, ‖b‖_F)`.
pub fn relative_residual(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<f64> {
    let scale = a.frobenius_norm().max(b.frobenius_norm());
    if scale == 0.0 {
        return Ok(0.0);
    }
    Ok(a.distance(b)? / scale)
}

/// Which form of the Yang–Baxter relation to test.
pub enum YbeForm<'a> {
    /// `R₁₂(x,y) L₁(x) L₂(y) = L₂(y) L₁(x) R₁₂(x,y)`.
    Rll(&'a dyn LaxOperator),
    /// `R₁₂(x,y) R₁₃(x,w) R₂₃(y,w) = R₂₃(y,w) R₁₃(x,w) R₁₂(x,y)`.
    Rrr,
}

pub fn check_ybe(r: &dyn RMatrixSpec, form: YbeForm<'_>, samples: usize, seed: u64) -> Result<VerificationReport> {
    let mut rng = sample::rng(seed);
    let param = r.parametrization();
    let d = r.dim();
    let mut worst = 0.0f64;
    let (name, anchor) = match form {
        YbeForm::Rll(_) => ("rll", "yang-baxter-rll"),
        YbeForm::Rrr => ("rrr", "yang-baxter-rrr"),
    };
    for _ in 0..samples {
        let x = sample::point(param, &mut rng);
        let y = sample::point(param, &mut rng);
        let residual = match form {
            YbeForm::Rll(lax) => {
                if lax.aux_dim() != d || lax.parametrization() != param {
                    return Err(Error::dims(format!(
                        "R on ℂ^{d} ⊗ ℂ^{d} cannot intertwine a Lax operator with auxiliary dimension {}",
                        lax.aux_dim()
                    )));
                }
                let dims = [d, d, lax.phys_dim()];
                let rr = embed(&r.evaluate(x, y)?, &dims, &[0, 1])?;
                let l1 = embed(&lax.evaluate(x)?, &dims, &[0, 2])?;
                let l2 = embed(&lax.evaluate(y)?, &dims, &[1, 2])?;
                let lhs = rr.matmul(&l1)?.matmul(&l2)?;
                let rhs = l2.matmul(&l1)?.matmul(&rr)?;
                relative_residual(&lhs, &rhs)?
            }
            YbeForm::Rrr => {
                let w = sample::point(param, &mut rng);
                let dims = [d, d, d];
                let r12 = embed(&r.evaluate(x, y)?, &dims, &[0, 1])?;
                let r13 = embed(&r.evaluate(x, w)?, &dims, &[0, 2])?;
                let r23 = embed(&r.evaluate(y, w)?, &dims, &[1, 2])?;
                let lhs = r12.matmul(&r13)?.matmul(&r23)?;
                let rhs = r23.matmul(&r13)?.matmul(&r12)?;
                relative_residual(&lhs, &rhs)?
            }
        };
        worst = worst.max(residual);
    }
    Ok(VerificationReport::new(SUITE, &format!("ybe-{name}"), anchor, worst, 1e-10)
        .param("r", r.name())
        .param("samples", samples)
        .seed(seed))
}

/// Source of eight-vertex weights for the free-fermion test.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FreeFermionSource {
    /// Weights of the `tanh u` Lax operator.
    EightVertex,
    /// Weights of the `(z, θ)` Lax operator.
    EightVertexFull,
}

impl FreeFermionSource {
    pub fn as_str(self) -> &'static str {
        match self {
            FreeFermionSource::EightVertex => "eight-vertex",
            FreeFermionSource::EightVertexFull => "eight-vertex-full",
        }
    }
}

/// `max |a₁a₂ + b₁b₂ − c₁c₂ − d₁d₂|` over sampled parameters.
pub fn check_free_fermion(source: FreeFermionSource, samples: usize, seed: u64) -> Result<VerificationReport> {
    let mut rng = sample::rng(seed);
    let mut worst = 0.0f64;
    for _ in 0..samples {
        let w = match source {
            FreeFermionSource::EightVertex => eight_vertex_weights(sample::additive(&mut rng))?,
            FreeFermionSource::EightVertexFull => {
                let z = sample::point(Parametrization::Multiplicative, &mut rng);
                eight_vertex_full_weights(z, sample::angle(&mut rng))?
            }
        };
        worst = worst.max(w.free_fermion_residual());
    }
    Ok(
        VerificationReport::new(SUITE, &format!("free-fermion-{}", source.as_str()), "free-fermion", worst, 1e-12)
            .param("samples", samples)
            .seed(seed),
    )
}

/// `max ‖[T(x), T(y)]‖_F / ‖T(x)‖_F ‖T(y)‖_F` over sampled pairs.
pub fn check_transfer_commutation(
    lax: &dyn LaxOperator,
    l: usize,
    pairs: usize,
    seed: u64,
    tolerance: f64,
) -> Result<VerificationReport> {
    let mut rng = sample::rng(seed);
    let param = lax.parametrization();
    let mut worst = 0.0f64;
    for _ in 0..pairs {
        let tx = transfer(lax, l, sample::point(param, &mut rng))?;
        let ty = transfer(lax, l, sample::point(param, &mut rng))?;
        let res = tx.commutator(&ty)?.frobenius_norm() / (tx.frobenius_norm() * ty.frobenius_norm());
        worst = worst.max(res);
    }
    Ok(
        VerificationReport::new(SUITE, "transfer-commutation", "transfer-involution", worst, tolerance)
            .param("L", l)
            .param("aux_dim", lax.aux_dim())
            .param("pairs", pairs)
            .seed(seed),
    )
}

/// `‖[T(x), H]‖_F / ‖T‖_F ‖H‖_F` at sampled `x`.
pub fn check_transfer_hamiltonian(spec: &ModelSpec, samples: usize, seed: u64) -> Result<VerificationReport> {
    let lax = super::lax::lax_for_model(spec)?;
    let h = to_dense(&hamiltonian(spec)?)?;
    let mut rng = sample::rng(seed);
    let mut worst = 0.0f64;
    for _ in 0..samples {
        let t = transfer(&lax, spec.l, sample::point(lax.parametrization(), &mut rng))?;
        worst = worst.max(t.commutator(&h)?.frobenius_norm() / (t.frobenius_norm() * h.frobenius_norm()));
    }
    Ok(
        VerificationReport::new(SUITE, "transfer-hamiltonian", "transfer-hamiltonian", worst, 1e-9)
            .param("model", spec.kind)
            .param("L", spec.l)
            .seed(seed),
    )
}

/// Charges of the transfer matrix of `spec` against the local operators:
/// `Q₂ ∝ H` (`1` for the hyperbolic Lax, `i√2/2` for the `(z, θ)` one);
/// for hyperbolic Lax operators also
/// `Q₃ = −2i Σ_j Σ_{m=1}^{r} h_j h_{j+m} + iL`,
/// `Q₃ = −4 Σ_{s<t} H^(s,t) + iL` (when `r + 1` divides `L`),
/// and analytic against finite-difference `T′`.
pub fn check_charges(spec: &ModelSpec) -> Result<Vec<VerificationReport>> {
    let lax = super::lax::lax_for_model(spec)?;
    let l = spec.l;
    let i = Complex64::new(0.0, 1.0);
    let params = |r: VerificationReport| r.param("model", spec.kind).param("L", l).param("r", spec.r);
    let mut out = Vec::new();

    let h = hamiltonian(spec)?;
    let hd = to_dense(&h)?;
    let q2 = charge(&lax, l, 1)?;
    let factor = match lax.parametrization() {
        Parametrization::Hyperbolic => Complex64::new(1.0, 0.0),
        Parametrization::Multiplicative => i * (core::f64::consts::SQRT_2 / 2.0),
    };
    let res = relative_residual(&q2, &hd.scale(factor))?;
    out.push(params(VerificationReport::new(SUITE, "q2-hamiltonian", "charge-hamiltonian", res, 1e-8)).param("factor", factor));

    if lax.parametrization() == Parametrization::Hyperbolic {
        let q3 = charge(&lax, l, 2)?;
        let ident = ComplexMatrix::identity(q3.rows()).scale(i * l as f64);
        // density −2i Σ_{m=1}^{r} h_j h_{j+m}
        let gen = |j: usize| crate::models::gca_generator(spec, (j - 1) % l + 1);
        let mut density = crate::algebra::OperatorSum::zero(2, l);
        for j in 1..=l {
            for m in 1..=spec.r {
                density = density.add(&gen(j)?.mul(&gen(j + m)?)?)?;
            }
        }
        let expected = to_dense(&density.scale(-i * 2.0))?.add(&ident)?;
        let res = relative_residual(&q3, &expected)?;
        out.push(params(VerificationReport::new(SUITE, "q3-density", "charge-q3", res, 1e-8)));

        if spec.check_onsager_divisibility().is_ok() && spec.kind != crate::models::ModelKind::FendleyDual {
            let mut sum = crate::algebra::OperatorSum::zero(2, l);
            for s in 0..spec.r {
                for t in s + 1..=spec.r {
                    sum = sum.add(&commuting_charge(spec, s, t)?)?;
                }
            }
            let expected = to_dense(&sum.scale(Complex64::new(-4.0, 0.0)))?.add(&ident)?;
            let res = relative_residual(&q3, &expected)?;
            out.push(params(VerificationReport::new(SUITE, "q3-decomposition", "charge-q3-decomposition", res, 1e-8)));
        }
    }

    let x = lax.regular_point();
    let exact = transfer_derivatives(&lax, l, x, 1)?;
    let (fd, _) = finite_difference_derivatives(&lax, l, x, 1e-5)?;
    let res = exact[1].distance(&fd)? / exact[1].frobenius_norm();
    out.push(params(VerificationReport::new(SUITE, "derivative-cross-check", "charge-derivative", res, 1e-6)).param("step", 1e-5));
    Ok(out)
}
