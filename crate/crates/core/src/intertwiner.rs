//! Numerical intertwiners: R matrices as the null space of the linear system
//! `(R ⊗ 1) L₁(x) L₂(y) − L₂(y) L₁(x) (R ⊗ 1) = 0`.

use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::integrability::{relative_residual, Lax, LaxOperator, Parametrization};
use crate::linalg::{embed, null_space, ComplexMatrix, NULL_SPACE_TOLERANCE};
use crate::sample;

/// Dense two-copy products `L₁(x) L₂(y)` and `L₂(y) L₁(x)` on
/// `aux ⊗ aux ⊗ phys`.
fn lax_pair(lax: &dyn LaxOperator, x: Complex64, y: Complex64) -> Result<(ComplexMatrix, ComplexMatrix)> {
    let a = lax.aux_dim();
    let dims = [a, a, lax.phys_dim()];
    let l1 = embed(&lax.evaluate(x)?, &dims, &[0, 2])?;
    let l2 = embed(&lax.evaluate(y)?, &dims, &[1, 2])?;
    Ok((l1.matmul(&l2)?, l2.matmul(&l1)?))
}

/// The constraint matrix `S` with `S · vec(R) = vec((R⊗1)·L₁L₂ − L₂L₁·(R⊗1))`,
/// `vec` row-major. Every physical matrix unit enters explicitly, so `S` has
/// `(a²p)²` rows and `a⁴` columns.
pub fn build_ybe_system(lax: &dyn LaxOperator, x: Complex64, y: Complex64) -> Result<ComplexMatrix> {
    let (ll, ll_swapped) = lax_pair(lax, x, y)?;
    let a = lax.aux_dim();
    let p = lax.phys_dim();
    let n = a * a;
    let big = n * p;
    let mut s = ComplexMatrix::zeros(big * big, n * n);
    for i in 0..n {
        for j in 0..n {
            let k = i * n + j;
            for q in 0..p {
                // (E_ij ⊗ 1) · LL: row (i,q) receives row (j,q) of LL
                let (dst, src) = (i * p + q, j * p + q);
                for col in 0..big {
                    s[(dst * big + col, k)] += ll[(src, col)];
                }
                // LL′ · (E_ij ⊗ 1): column (j,q) receives column (i,q) of LL′
                let (dst, src) = (j * p + q, i * p + q);
                for row in 0..big {
                    s[(row * big + dst, k)] -= ll_swapped[(row, src)];
                }
            }
        }
    }
    Ok(s)
}

#[derive(Clone, Debug)]
pub struct IntertwinerSolution {
    pub kernel_dim: usize,
    /// Kernel basis reshaped to `a² × a²` matrices; a unique solution is
    /// scaled so that its first nonzero entry (row-major) is 1.
    pub candidates: Vec<ComplexMatrix>,
    /// RLL residual of the first candidate (relative), if any.
    pub residual: Option<f64>,
}

fn normalise_first_nonzero(m: &ComplexMatrix) -> ComplexMatrix {
    let cutoff = m.max_abs() * 1e-8;
    match m.as_slice().iter().find(|v| v.norm() > cutoff) {
        Some(&v) => m.scale(Complex64::new(1.0, 0.0) / v),
        None => m.clone(),
    }
}

/// RLL residual of a given R against `lax` at `(x, y)`.
pub fn intertwining_residual(r: &ComplexMatrix, lax: &dyn LaxOperator, x: Complex64, y: Complex64) -> Result<f64> {
    let (ll, ll_swapped) = lax_pair(lax, x, y)?;
    let a = lax.aux_dim();
    let rr = embed(r, &[a, a, lax.phys_dim()], &[0, 1])?;
    relative_residual(&rr.matmul(&ll)?, &ll_swapped.matmul(&rr)?)
}

/// Solves for the intertwiner at `(x, y)`. `rel_tol` thresholds singular
/// values relative to the largest one. An empty kernel is a valid outcome.
pub fn solve_intertwiner(lax: &dyn LaxOperator, x: Complex64, y: Complex64, rel_tol: f64) -> Result<IntertwinerSolution> {
    let s = build_ybe_system(lax, x, y)?;
    let kernel = null_space(&s, rel_tol)?;
    let n = lax.aux_dim() * lax.aux_dim();
    let mut candidates: Vec<ComplexMatrix> = kernel
        .into_iter()
        .map(|v| ComplexMatrix::from_vec(n, n, v))
        .collect::<Result<_>>()?;
    if candidates.len() == 1 {
        candidates[0] = normalise_first_nonzero(&candidates[0]);
    }
    let residual = match candidates.first() {
        Some(r) => Some(intertwining_residual(r, lax, x, y)?),
        None => None,
    };
    Ok(IntertwinerSolution {
        kernel_dim: candidates.len(),
        candidates,
        residual,
    })
}

/// Solves and insists on a one-dimensional kernel.
pub fn unique_intertwiner(lax: &dyn LaxOperator, x: Complex64, y: Complex64) -> Result<ComplexMatrix> {
    let sol = solve_intertwiner(lax, x, y, NULL_SPACE_TOLERANCE)?;
    if sol.kernel_dim != 1 {
        return Err(Error::Configuration(alloc::format!(
            "expected a unique intertwiner at ({x}, {y}), kernel dimension is {}",
            sol.kernel_dim
        )));
    }
    Ok(sol.candidates.into_iter().next().expect("one candidate"))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ReferenceMatch {
    pub scalar: Complex64,
    /// `‖candidate − α·reference‖ / ‖α·reference‖`.
    pub residual: f64,
}

/// Least-squares `α` minimising `‖candidate − α·reference‖_F`.
pub fn match_to_reference(candidate: &ComplexMatrix, reference: &ComplexMatrix) -> Result<ReferenceMatch> {
    let rr = reference.inner(reference)?;
    if rr.norm() == 0.0 {
        return Err(Error::InvalidArgument("zero reference matrix".into()));
    }
    let scalar = reference.inner(candidate)? / rr;
    let fitted = reference.scale(scalar);
    let norm = fitted.frobenius_norm();
    let residual = if norm == 0.0 {
        candidate.frobenius_norm()
    } else {
        candidate.distance(&fitted)? / norm
    };
    Ok(ReferenceMatch { scalar, residual })
}

/// One sampled point of a θ scan.
#[derive(Clone, Debug, PartialEq)]
pub struct ScanPoint {
    pub theta: f64,
    pub z: Complex64,
    pub w: Complex64,
    pub kernel_dim: usize,
    /// `R₁₂(z,w) R₁₃(z,y) R₂₃(w,y)` against the reversed product, when all
    /// three intertwiners are unique.
    pub ybe_residual: Option<f64>,
}

/// For each θ, solves the `(z, θ)` Fendley-type Lax operator of range `r`
/// at `pairs` random `(z, w)` and reports kernel dimensions and the
/// triple-product residual of the solved intertwiners.
pub fn theta_scan(range: usize, thetas: &[f64], pairs: usize, seed: u64) -> Result<Vec<ScanPoint>> {
    let mut rng = sample::rng(seed);
    let mut out = Vec::with_capacity(thetas.len() * pairs);
    for &theta in thetas {
        let lax = Lax::multiplicative(range, theta)?;
        let a = lax.aux_dim();
        for _ in 0..pairs {
            let z = sample::point(Parametrization::Multiplicative, &mut rng);
            let w = sample::point(Parametrization::Multiplicative, &mut rng);
            let y = sample::point(Parametrization::Multiplicative, &mut rng);
            let sol = solve_intertwiner(&lax, z, w, NULL_SPACE_TOLERANCE)?;
            let ybe_residual = if sol.kernel_dim == 1 {
                match (unique_intertwiner(&lax, z, y), unique_intertwiner(&lax, w, y)) {
                    (Ok(rzy), Ok(rwy)) => {
                        let dims = [a, a, a];
                        let r12 = embed(&sol.candidates[0], &dims, &[0, 1])?;
                        let r13 = embed(&rzy, &dims, &[0, 2])?;
                        let r23 = embed(&rwy, &dims, &[1, 2])?;
                        let lhs = r12.matmul(&r13)?.matmul(&r23)?;
                        let rhs = r23.matmul(&r13)?.matmul(&r12)?;
                        Some(relative_residual(&lhs, &rhs)?)
                    }
                    _ => None,
                }
            } else {
                None
            };
            out.push(ScanPoint {
                theta,
                z,
                w,
                kernel_dim: sol.kernel_dim,
                ybe_residual,
            });
        }
    }
    Ok(out)
}

/// Kernel dimensions at the sampled points, in order.
pub fn kernel_dims(points: &[ScanPoint]) -> Vec<usize> {
    points.iter().map(|p| p.kernel_dim).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::integrability::{r_8v, r_fendley};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn system_annihilates_known_intertwiner() {
        let (u, v) = (c(0.3, 0.0), c(0.1, 0.0));
        let s = build_ybe_system(&Lax::fendley(), u, v).unwrap();
        assert_eq!((s.rows(), s.cols()), (1024, 256));
        let r = r_fendley(u, v).unwrap();
        let res = s.matvec(r.as_slice()).unwrap();
        let norm: f64 = res.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        assert!(norm < 1e-12);
    }

    #[test]
    fn recovers_fendley_r() {
        let (u, v) = (c(0.3, 0.1), c(-0.2, 0.15));
        let sol = solve_intertwiner(&Lax::fendley(), u, v, NULL_SPACE_TOLERANCE).unwrap();
        assert_eq!(sol.kernel_dim, 1);
        assert!(sol.residual.unwrap() < 1e-10);
        let m = match_to_reference(&sol.candidates[0], &r_fendley(u, v).unwrap()).unwrap();
        assert!(m.residual < 1e-8);
        assert_eq!(sol.candidates[0][(0, 0)], c(1.0, 0.0));
    }

    #[test]
    fn recovers_eight_vertex_r() {
        let (u, v) = (c(0.45, -0.2), c(0.1, 0.3));
        let r = unique_intertwiner(&Lax::eight_vertex(), u, v).unwrap();
        let m = match_to_reference(&r, &r_8v(u - v).unwrap()).unwrap();
        assert!(m.residual < 1e-8);
    }

    #[test]
    fn equal_parameters_have_a_kernel() {
        let u = c(0.3, 0.0);
        let sol = solve_intertwiner(&Lax::fendley(), u, u, NULL_SPACE_TOLERANCE).unwrap();
        assert!(sol.kernel_dim >= 1);
    }

    #[test]
    fn matching() {
        let r = r_fendley(c(0.3, 0.1), c(0.2, 0.0)).unwrap();
        let m = match_to_reference(&r.scale(c(0.0, 2.0)), &r).unwrap();
        assert!((m.scalar - c(0.0, 2.0)).norm() < 1e-14);
        assert!(m.residual < 1e-15);
        let mut noisy = r.clone();
        noisy[(3, 5)] += c(1e-6 * r.frobenius_norm(), 0.0);
        let m = match_to_reference(&noisy, &r).unwrap();
        assert!(m.residual > 5e-7 && m.residual < 2e-6);
        assert!(match_to_reference(&r, &ComplexMatrix::zeros(16, 16)).is_err());
    }

    #[test]
    fn scan_at_theta_zero_is_unique() {
        let pts = theta_scan(2, &[0.0], 2, 3).unwrap();
        assert!(pts.iter().all(|p| p.kernel_dim == 1));
        assert!(pts.iter().all(|p| p.ybe_residual.unwrap() < 1e-8));
    }
}
