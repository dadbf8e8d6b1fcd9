use alloc::vec::Vec;

use num_complex::Complex64;

use super::checks::relative_residual;
use super::lax::{Lax, LaxOperator, Parametrization};
use super::rmatrix::{inverse_relation_scalar, r_fendley, swap_factors};
use crate::error::Result;
use crate::intertwiner::{match_to_reference, unique_intertwiner};
use crate::linalg::{embed, inverse, ComplexMatrix};
use crate::report::VerificationReport;
use crate::sample;

const SUITE: &str = "integrability";

/// `L_{A,B₁}(x) ⋯ L_{A,B_r}(x)` on the `2r` qubits `A = (0..r)`, `B = (r..2r)`.
fn regular_limit(lax: &Lax, x: Complex64) -> Result<ComplexMatrix> {
    let r = lax.range();
    let dims = alloc::vec![2usize; 2 * r];
    let l = lax.evaluate(x)?;
    let mut out = ComplexMatrix::identity(1 << (2 * r));
    for k in 0..r {
        let mut t: Vec<usize> = (0..r).collect();
        t.push(r + k);
        out = out.matmul(&embed(&l, &dims, &t)?)?;
    }
    Ok(out)
}

/// `L_{B,A_r}(x)⁻¹ ⋯ L_{B,A₁}(x)⁻¹`.
fn inverse_limit(lax: &Lax, x: Complex64) -> Result<ComplexMatrix> {
    let r = lax.range();
    let dims = alloc::vec![2usize; 2 * r];
    let linv = inverse(&lax.evaluate(x)?)?;
    let mut out = ComplexMatrix::identity(1 << (2 * r));
    for k in (0..r).rev() {
        let mut t: Vec<usize> = (r..2 * r).collect();
        t.push(k);
        out = out.matmul(&embed(&linv, &dims, &t)?)?;
    }
    Ok(out)
}

/// The two degenerate limits of the Fendley-type intertwiner:
/// `R(x, x₀) = L_{A,B₁}(x) ⋯ L_{A,B_r}(x)` and
/// `R(x₀, y) ∝ L_{B,A_r}(y)⁻¹ ⋯ L_{B,A₁}(y)⁻¹`, `x₀` the regular point.
///
/// At `θ = 0, r = 2` the closed-form R is used (and the first limit is exact,
/// without a fitted scalar); otherwise the R comes from the intertwiner solver
/// and both limits are compared after a scalar fit.
pub fn check_r_limits(range: usize, theta: f64, samples: usize, seed: u64) -> Result<Vec<VerificationReport>> {
    let mut rng = sample::rng(seed);
    let closed_form = theta == 0.0 && range == 2;
    let lax = if closed_form {
        Lax::hyperbolic(2)?
    } else {
        Lax::multiplicative(range, theta)?
    };
    let x0 = lax.regular_point();
    let (mut regular, mut inv, mut scalar_dev) = (0.0f64, 0.0f64, 0.0f64);
    let mut last_scalar = Complex64::new(0.0, 0.0);
    for _ in 0..samples {
        let x = sample::point(lax.parametrization(), &mut rng);
        let y = sample::point(lax.parametrization(), &mut rng);
        let (rx, ry) = if closed_form {
            (r_fendley(x, x0)?, r_fendley(x0, y)?)
        } else {
            (unique_intertwiner(&lax, x, x0)?, unique_intertwiner(&lax, x0, y)?)
        };
        let reg_ref = regular_limit(&lax, x)?;
        regular = regular.max(if closed_form {
            relative_residual(&rx, &reg_ref)?
        } else {
            match_to_reference(&rx, &reg_ref)?.residual
        });
        let m = match_to_reference(&ry, &inverse_limit(&lax, y)?)?;
        inv = inv.max(m.residual);
        last_scalar = m.scalar;
        if closed_form {
            let s = inverse_relation_scalar(x0, y);
            scalar_dev = scalar_dev.max((m.scalar - s).norm() / s.norm());
        }
    }
    let tol = if closed_form { 1e-10 } else { 1e-6 };
    let tag = |r: VerificationReport| r.param("r", range).param("theta", theta).param("samples", samples).seed(seed);
    let mut out = alloc::vec![
        tag(VerificationReport::new(SUITE, "r-limit-regular", "r-limit-regular", regular, tol)),
        tag(VerificationReport::new(SUITE, "r-limit-inverse", "r-limit-inverse", inv, 1e-6)).param("last_scalar", last_scalar),
    ];
    if closed_form {
        out.push(tag(VerificationReport::new(
            SUITE,
            "r-limit-inverse-scalar",
            "inverse-relation-scalar",
            scalar_dev,
            1e-8,
        )));
    }
    Ok(out)
}

/// `R(u,v) · P R(v,u) P = s(u,v) · 1` for the closed-form Fendley R.
pub fn check_inverse_relation(samples: usize, seed: u64) -> Result<VerificationReport> {
    let mut rng = sample::rng(seed);
    let mut worst = 0.0f64;
    for _ in 0..samples {
        let u = sample::point(Parametrization::Hyperbolic, &mut rng);
        let v = sample::point(Parametrization::Hyperbolic, &mut rng);
        let prod = r_fendley(u, v)?.matmul(&swap_factors(&r_fendley(v, u)?, 4)?)?;
        let expect = ComplexMatrix::identity(16).scale(inverse_relation_scalar(u, v));
        worst = worst.max(relative_residual(&prod, &expect)?);
    }
    Ok(VerificationReport::new(SUITE, "inverse-relation", "inverse-relation", worst, 1e-8)
        .param("samples", samples)
        .seed(seed))
}
