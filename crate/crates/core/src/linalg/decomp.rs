use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use super::ComplexMatrix;
use crate::error::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Relative singular-value threshold below which a direction counts as null.
pub const NULL_SPACE_TOLERANCE: f64 = 1e-10;
const MAX_CONDITION: f64 = 1e12;
const MAX_JACOBI_SWEEPS: usize = 80;

/// Inverse by LU with partial pivoting. Fails with [`Error::Singular`] when
/// a pivot vanishes or the 1-norm condition number exceeds `1e12`.
pub fn inverse(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    if !m.is_square() {
        return Err(Error::dims(format!("inverse of {}×{}", m.rows(), m.cols())));
    }
    let n = m.rows();
    let mut lu = m.clone();
    let mut perm: Vec<usize> = (0..n).collect();
    for k in 0..n {
        let (p, best) = (k..n)
            .map(|i| (i, lu[(i, k)].norm()))
            .fold((k, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        if best == 0.0 {
            return Err(Error::Singular(f64::INFINITY));
        }
        if p != k {
            for j in 0..n {
                let t = lu[(k, j)];
                lu[(k, j)] = lu[(p, j)];
                lu[(p, j)] = t;
            }
            perm.swap(k, p);
        }
        let piv = lu[(k, k)];
        for i in k + 1..n {
            let f = lu[(i, k)] / piv;
            lu[(i, k)] = f;
            if f == ZERO {
                continue;
            }
            for j in k + 1..n {
                let u = lu[(k, j)];
                lu[(i, j)] -= f * u;
            }
        }
    }
    let mut inv = ComplexMatrix::zeros(n, n);
    let mut col = vec![ZERO; n];
    for c in 0..n {
        for i in 0..n {
            col[i] = if perm[i] == c { ONE } else { ZERO };
        }
        for i in 0..n {
            let mut s = col[i];
            for j in 0..i {
                s -= lu[(i, j)] * col[j];
            }
            col[i] = s;
        }
        for i in (0..n).rev() {
            let mut s = col[i];
            for j in i + 1..n {
                s -= lu[(i, j)] * col[j];
            }
            col[i] = s / lu[(i, i)];
        }
        for i in 0..n {
            inv[(i, c)] = col[i];
        }
    }
    let cond = m.norm_1() * inv.norm_1();
    if !cond.is_finite() || cond > MAX_CONDITION {
        return Err(Error::Singular(cond));
    }
    Ok(inv)
}

/// Householder QR returning only the `min(m,n) × n` triangular factor.
fn qr_r(a: &ComplexMatrix) -> ComplexMatrix {
    let (m, n) = (a.rows(), a.cols());
    let mut r = a.clone();
    let mut v = vec![ZERO; m];
    for k in 0..n.min(m) {
        let norm = (k..m).map(|i| r[(i, k)].norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            continue;
        }
        let x0 = r[(k, k)];
        let ph = if x0.norm() > 0.0 { x0 / x0.norm() } else { ONE };
        for i in k..m {
            v[i] = r[(i, k)];
        }
        v[k] += ph * norm;
        let vn = (k..m).map(|i| v[i].norm_sqr()).sum::<f64>().sqrt();
        for x in &mut v[k..m] {
            *x /= vn;
        }
        for j in k..n {
            let s: Complex64 = (k..m).map(|i| v[i].conj() * r[(i, j)]).sum();
            if s == ZERO {
                continue;
            }
            for i in k..m {
                let d = v[i] * s * 2.0;
                r[(i, j)] -= d;
            }
        }
        for i in k + 1..m {
            r[(i, k)] = ZERO;
        }
    }
    let rows = n.min(m);
    ComplexMatrix::from_fn(rows, n, |i, j| r[(i, j)])
}

/// One-sided (Hestenes) Jacobi: returns singular values (unsorted, one per
/// column) and the right singular vectors as columns of `V`.
fn jacobi_svd(a: &ComplexMatrix) -> Result<(Vec<f64>, ComplexMatrix)> {
    let (m, n) = (a.rows(), a.cols());
    // work column-major for cache-friendly column rotations
    let mut cols: Vec<Vec<Complex64>> = (0..n).map(|j| a.column(j)).collect();
    let mut vcols: Vec<Vec<Complex64>> = (0..n)
        .map(|j| {
            let mut e = vec![ZERO; n];
            e[j] = ONE;
            e
        })
        .collect();
    let eps = f64::EPSILON;
    let mut converged = false;
    for _ in 0..MAX_JACOBI_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let (alpha, beta, gamma) = {
                    let (cp, cq) = (&cols[p], &cols[q]);
                    let mut al = 0.0;
                    let mut be = 0.0;
                    let mut ga = ZERO;
                    for i in 0..m {
                        al += cp[i].norm_sqr();
                        be += cq[i].norm_sqr();
                        ga += cp[i].conj() * cq[i];
                    }
                    (al, be, ga)
                };
                let g = gamma.norm();
                if g == 0.0 || g <= eps * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let e = gamma / g; // e^{iφ}
                let zeta = (beta - alpha) / (2.0 * g);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                // [a_p, a_q] ← [a_p, a_q] · [[c, s], [−s e^{−iφ}, c e^{−iφ}]]
                let ec = e.conj();
                for set in [&mut cols, &mut vcols] {
                    let (lo, hi) = set.split_at_mut(q);
                    let (cp, cq) = (&mut lo[p], &mut hi[0]);
                    for (x, y) in cp.iter_mut().zip(cq.iter_mut()) {
                        let (xp, yq) = (*x, *y);
                        *x = xp * c - yq * ec * s;
                        *y = xp * s + yq * ec * c;
                    }
                }
            }
        }
        if !rotated {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::Unsupported("Jacobi SVD failed to converge".into()));
    }
    let sigma = cols
        .iter()
        .map(|c| c.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt())
        .collect();
    let v = ComplexMatrix::from_fn(n, n, |i, j| vcols[j][i]);
    Ok((sigma, v))
}

/// Singular values in descending order.
pub fn singular_values(a: &ComplexMatrix) -> Result<Vec<f64>> {
    let r = if a.rows() > a.cols() { qr_r(a) } else { a.clone() };
    let (mut s, _) = jacobi_svd(&r)?;
    s.sort_by(|x, y| y.total_cmp(x));
    // a wide matrix has rows < cols; only `rows` values are meaningful
    s.truncate(a.rows().min(a.cols()));
    Ok(s)
}

/// Orthonormal basis of `{x : a·x = 0}`: columns of `V` whose singular value
/// is at most `rel_tol · σ_max`. Basis vectors are ordered by increasing
/// singular value.
pub fn null_space(a: &ComplexMatrix, rel_tol: f64) -> Result<Vec<Vec<Complex64>>> {
    let n = a.cols();
    if n == 0 {
        return Ok(Vec::new());
    }
    let r = if a.rows() > n { qr_r(a) } else { a.clone() };
    let (sigma, v) = jacobi_svd(&r)?;
    let smax = sigma.iter().cloned().fold(0.0, f64::max);
    let mut idx: Vec<usize> = (0..n).filter(|&j| sigma[j] <= rel_tol * smax || smax == 0.0).collect();
    idx.sort_by(|&x, &y| sigma[x].total_cmp(&sigma[y]));
    Ok(idx.into_iter().map(|j| v.column(j)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn inverse_of_small_matrix() {
        let m = ComplexMatrix::from_fn(3, 3, |i, j| if i == j { c(2.0, 1.0) } else { c(0.3 * (i + j) as f64, -0.1) });
        let inv = inverse(&m).unwrap();
        let id = m.matmul(&inv).unwrap();
        assert!(id.distance(&ComplexMatrix::identity(3)).unwrap() < 1e-13);
    }

    #[test]
    fn singular_matrix_is_reported() {
        let m = ComplexMatrix::from_real_rows(&[&[1.0, 2.0], &[2.0, 4.0]]);
        assert!(matches!(inverse(&m), Err(Error::Singular(_))));
        let m = ComplexMatrix::from_real_rows(&[&[1.0, 0.0], &[0.0, 1e-14]]);
        assert!(matches!(inverse(&m), Err(Error::Singular(_))));
    }

    #[test]
    fn null_space_of_rank_one() {
        // rows all multiples of (1, i, 0): kernel is 2-dimensional
        let m = ComplexMatrix::from_fn(4, 3, |i, j| {
            let row = [c(1.0, 0.0), c(0.0, 1.0), c(0.0, 0.0)];
            row[j] * (i as f64 + 1.0)
        });
        let k = null_space(&m, NULL_SPACE_TOLERANCE).unwrap();
        assert_eq!(k.len(), 2);
        for v in &k {
            let r = m.matvec(v).unwrap();
            assert!(r.iter().all(|z| z.norm() < 1e-12));
        }
    }

    #[test]
    fn full_rank_has_trivial_kernel() {
        assert!(null_space(&ComplexMatrix::identity(5), NULL_SPACE_TOLERANCE).unwrap().is_empty());
    }

    #[test]
    fn wide_matrix_kernel() {
        let m = ComplexMatrix::from_real_rows(&[&[1.0, 1.0, 0.0]]);
        let k = null_space(&m, NULL_SPACE_TOLERANCE).unwrap();
        assert_eq!(k.len(), 2);
    }

    fn arb_matrix(rows: usize, cols: usize) -> impl Strategy<Value = ComplexMatrix> {
        proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0), rows * cols)
            .prop_map(move |v| ComplexMatrix::from_fn(rows, cols, |i, j| c(v[i * cols + j].0, v[i * cols + j].1)))
    }

    proptest! {
        #[test]
        fn inverse_round_trip(m in (1usize..9).prop_flat_map(|n| arb_matrix(n, n))) {
            if let Ok(inv) = inverse(&m) {
                let n = m.rows();
                prop_assert!(m.matmul(&inv).unwrap().distance(&ComplexMatrix::identity(n)).unwrap() < 1e-8);
            }
        }

        #[test]
        fn planted_kernel_is_recovered(
            (a, b) in (2usize..7, 1usize..4).prop_flat_map(|(n, k)| (arb_matrix(n + 3, n), arb_matrix(n, k.min(n - 1).max(1))))
        ) {
            // project the rows of `a` off the span of b's columns, so span(b) ⊆ ker
            let n = a.cols();
            let k = b.cols();
            let mut basis: Vec<Vec<Complex64>> = Vec::new();
            for j in 0..k {
                let mut v = b.column(j);
                for u in &basis {
                    let d: Complex64 = u.iter().zip(&v).map(|(x, y)| x.conj() * y).sum();
                    for (vi, ui) in v.iter_mut().zip(u) { *vi -= d * ui; }
                }
                let nv = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
                prop_assume!(nv > 1e-6);
                for vi in &mut v { *vi /= nv; }
                basis.push(v);
            }
            let mut proj = ComplexMatrix::identity(n);
            for u in &basis {
                let outer = ComplexMatrix::from_fn(n, n, |i, j| u[i] * u[j].conj());
                proj = proj.sub(&outer).unwrap();
            }
            let m = a.matmul(&proj).unwrap();
            let s = singular_values(&m).unwrap();
            prop_assume!(s[n - k - 1] > 1e-6 * s[0]);
            let ker = null_space(&m, NULL_SPACE_TOLERANCE).unwrap();
            prop_assert_eq!(ker.len(), k);
            for v in &ker {
                let r = m.matvec(v).unwrap();
                prop_assert!(r.iter().map(|z| z.norm()).fold(0.0, f64::max) < 1e-10);
            }
        }
    }
}
