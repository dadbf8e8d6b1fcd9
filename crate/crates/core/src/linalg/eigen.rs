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
const HERMITIAN_TOL: f64 = 1e-10;
const MAX_QL_SWEEPS: usize = 60;

/// Ascending eigenvalues and matching orthonormal eigenvectors (columns).
#[derive(Clone, Debug)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: ComplexMatrix,
}

pub fn hermitian_eigs(m: &ComplexMatrix) -> Result<HermitianEigen> {
    let (values, vectors) = hermitian(m, true)?;
    Ok(HermitianEigen {
        values,
        vectors: vectors.expect("requested"),
    })
}

pub fn hermitian_eigenvalues(m: &ComplexMatrix) -> Result<Vec<f64>> {
    Ok(hermitian(m, false)?.0)
}

fn hermitian(m: &ComplexMatrix, want_vectors: bool) -> Result<(Vec<f64>, Option<ComplexMatrix>)> {
    if !m.is_square() {
        return Err(Error::dims(format!("eigenproblem on {}×{}", m.rows(), m.cols())));
    }
    let dev = m.hermitian_deviation();
    if m.frobenius_norm() > 0.0 && dev > HERMITIAN_TOL {
        return Err(Error::NonHermitian(dev));
    }
    let n = m.rows();
    if n == 0 {
        return Ok((Vec::new(), want_vectors.then(|| ComplexMatrix::zeros(0, 0))));
    }
    let (mut d, off, q) = tridiagonalise(m, want_vectors);
    // Unitary diagonal gauge making the off-diagonal real and non-negative.
    let mut phase = vec![ONE; n];
    let mut e = vec![0.0; n];
    for k in 0..n - 1 {
        let a = off[k].norm();
        e[k] = a;
        phase[k + 1] = if a > 0.0 { phase[k] * (off[k] / a) } else { phase[k] };
    }
    let mut z = want_vectors.then(|| {
        let mut z = vec![0.0; n * n];
        for i in 0..n {
            z[i * n + i] = 1.0;
        }
        z
    });
    tql2(&mut d, &mut e, z.as_deref_mut())?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| d[a].total_cmp(&d[b]));
    let values = order.iter().map(|&i| d[i]).collect();
    let vectors = match (z, q) {
        (Some(z), Some(q)) => {
            // eigenvectors are Q · D · Z
            let dz = ComplexMatrix::from_fn(n, n, |r, c| phase[r] * z[r * n + order[c]]);
            Some(q.matmul(&dz)?)
        }
        _ => None,
    };
    Ok((values, vectors))
}

/// Householder reduction `A = Q T Q†`. Returns the real diagonal, the complex
/// sub-diagonal `T[k+1][k]` and optionally `Q`.
fn tridiagonalise(m: &ComplexMatrix, want_q: bool) -> (Vec<f64>, Vec<Complex64>, Option<ComplexMatrix>) {
    let n = m.rows();
    let mut a = m.clone();
    // symmetrise away rounding noise in the input
    for i in 0..n {
        for j in 0..i {
            let v = (a[(i, j)] + a[(j, i)].conj()) * 0.5;
            a[(i, j)] = v;
            a[(j, i)] = v.conj();
        }
        let d = a[(i, i)].re;
        a[(i, i)] = Complex64::new(d, 0.0);
    }
    let mut q = want_q.then(|| ComplexMatrix::identity(n));
    let mut v = vec![ZERO; n];
    let mut p = vec![ZERO; n];
    for k in 0..n.saturating_sub(2) {
        let norm = (k + 1..n).map(|i| a[(i, k)].norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            continue;
        }
        let x0 = a[(k + 1, k)];
        let ph = if x0.norm() > 0.0 { x0 / x0.norm() } else { ONE };
        let alpha = -ph * norm;
        for i in 0..n {
            v[i] = if i > k { a[(i, k)] } else { ZERO };
        }
        v[k + 1] -= alpha;
        let vn = (k + 1..n).map(|i| v[i].norm_sqr()).sum::<f64>().sqrt();
        if vn == 0.0 {
            continue;
        }
        for x in &mut v[k + 1..] {
            *x /= vn;
        }
        // A ← H A H with H = 1 − 2vv†, via p = 2Av, w = p − (v†p)v
        for i in k..n {
            p[i] = (k + 1..n).map(|j| a[(i, j)] * v[j]).sum::<Complex64>() * 2.0;
        }
        let vp: Complex64 = (k + 1..n).map(|i| v[i].conj() * p[i]).sum();
        for i in k + 1..n {
            p[i] -= vp * v[i];
        }
        for i in k..n {
            for j in k..n {
                let upd = v[i] * p[j].conj() + p[i] * v[j].conj();
                a[(i, j)] -= upd;
            }
        }
        if let Some(q) = q.as_mut() {
            // Q ← Q H
            for r in 0..n {
                let s: Complex64 = (k + 1..n).map(|j| q[(r, j)] * v[j]).sum();
                for j in k + 1..n {
                    q[(r, j)] -= s * 2.0 * v[j].conj();
                }
            }
        }
    }
    let d = (0..n).map(|i| a[(i, i)].re).collect();
    let off = (0..n.saturating_sub(1)).map(|i| a[(i + 1, i)]).collect();
    (d, off, q)
}

/// Implicit QL on a real symmetric tridiagonal matrix (diagonal `d`,
/// off-diagonal `e[i]` between `i` and `i+1`, `e[n-1]` unused). `z`, if
/// given, accumulates the rotations into an `n×n` row-major matrix.
fn tql2(d: &mut [f64], e: &mut [f64], mut z: Option<&mut [f64]>) -> Result<()> {
    let n = d.len();
    e[n - 1] = 0.0;
    let eps = f64::EPSILON;
    let mut f = 0.0;
    let mut tst1: f64 = 0.0;
    for l in 0..n {
        tst1 = tst1.max(d[l].abs() + e[l].abs());
        let mut m = l;
        while m < n - 1 && e[m].abs() > eps * tst1 {
            m += 1;
        }
        if m > l {
            let mut sweeps = 0;
            loop {
                sweeps += 1;
                if sweeps > MAX_QL_SWEEPS {
                    return Err(Error::Unsupported("tridiagonal QL failed to converge".into()));
                }
                let g = d[l];
                let mut p = (d[l + 1] - g) / (2.0 * e[l]);
                let mut r = p.hypot(1.0);
                if p < 0.0 {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let mut h = g - d[l];
                for x in &mut d[l + 2..] {
                    *x -= h;
                }
                f += h;

                p = d[m];
                let mut c = 1.0;
                let mut c2 = c;
                let mut c3 = c;
                let el1 = e[l + 1];
                let mut s = 0.0;
                let mut s2 = 0.0;
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    let g = c * e[i];
                    h = c * p;
                    r = p.hypot(e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);
                    if let Some(z) = z.as_deref_mut() {
                        for k in 0..n {
                            let zk = &mut z[k * n..(k + 1) * n];
                            let t = zk[i + 1];
                            zk[i + 1] = s * zk[i] + c * t;
                            zk[i] = c * zk[i] - s * t;
                        }
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;
                if e[l].abs() <= eps * tst1 {
                    break;
                }
            }
        }
        d[l] += f;
        e[l] = 0.0;
    }
    Ok(())
}

/// Eigenvalues of a general square matrix: Householder reduction to upper
/// Hessenberg form, then single-shift complex QR with Wilkinson shifts.
/// Returned in ascending order of `(re, im)`.
pub fn eigenvalues(m: &ComplexMatrix) -> Result<Vec<Complex64>> {
    if !m.is_square() {
        return Err(Error::dims(format!("eigenproblem on {}×{}", m.rows(), m.cols())));
    }
    let n = m.rows();
    let mut h = hessenberg(m);
    let mut out = vec![ZERO; n];
    let eps = f64::EPSILON;
    let mut hi = n;
    let mut iter = 0usize;
    while hi > 0 {
        let top = hi - 1;
        let mut l = top;
        while l > 0 {
            let s = h[(l - 1, l - 1)].norm() + h[(l, l)].norm();
            let s = if s == 0.0 { 1.0 } else { s };
            if h[(l, l - 1)].norm() <= eps * s {
                h[(l, l - 1)] = ZERO;
                break;
            }
            l -= 1;
        }
        if l == top {
            out[top] = h[(top, top)];
            hi -= 1;
            iter = 0;
            continue;
        }
        iter += 1;
        if iter > 60 * n.max(1) {
            return Err(Error::Unsupported("Hessenberg QR failed to converge".into()));
        }
        let mu = if iter % 11 == 10 {
            // exceptional shift
            h[(top, top)] + Complex64::new(h[(top, top - 1)].norm(), 0.0)
        } else {
            wilkinson(h[(top - 1, top - 1)], h[(top - 1, top)], h[(top, top - 1)], h[(top, top)])
        };
        for k in l..=top {
            h[(k, k)] -= mu;
        }
        let mut rots = Vec::with_capacity(top - l);
        for k in l..top {
            let (x, y) = (h[(k, k)], h[(k + 1, k)]);
            let r = (x.norm_sqr() + y.norm_sqr()).sqrt();
            let (c, s) = if r == 0.0 { (ONE, ZERO) } else { (x / r, y / r) };
            for j in k..=top {
                let (a, b) = (h[(k, j)], h[(k + 1, j)]);
                h[(k, j)] = c.conj() * a + s.conj() * b;
                h[(k + 1, j)] = -s * a + c * b;
            }
            rots.push((c, s));
        }
        for (off, (c, s)) in rots.into_iter().enumerate() {
            let k = l + off;
            for i in l..=(k + 2).min(top) {
                let (a, b) = (h[(i, k)], h[(i, k + 1)]);
                h[(i, k)] = a * c + b * s;
                h[(i, k + 1)] = -a * s.conj() + b * c.conj();
            }
        }
        for k in l..=top {
            h[(k, k)] += mu;
        }
    }
    out.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    Ok(out)
}

fn wilkinson(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Complex64 {
    let half = (a - d) * 0.5;
    let disc = (half * half + b * c).sqrt();
    let m1 = (a + d) * 0.5 + disc;
    let m2 = (a + d) * 0.5 - disc;
    if (m1 - d).norm() <= (m2 - d).norm() {
        m1
    } else {
        m2
    }
}

fn hessenberg(m: &ComplexMatrix) -> ComplexMatrix {
    let n = m.rows();
    let mut a = m.clone();
    let mut v = vec![ZERO; n];
    for k in 0..n.saturating_sub(2) {
        let norm = (k + 1..n).map(|i| a[(i, k)].norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            continue;
        }
        let x0 = a[(k + 1, k)];
        let ph = if x0.norm() > 0.0 { x0 / x0.norm() } else { ONE };
        for i in 0..n {
            v[i] = if i > k { a[(i, k)] } else { ZERO };
        }
        v[k + 1] += ph * norm;
        let vn = (k + 1..n).map(|i| v[i].norm_sqr()).sum::<f64>().sqrt();
        for x in &mut v[k + 1..] {
            *x /= vn;
        }
        // A ← H A
        for j in 0..n {
            let s: Complex64 = (k + 1..n).map(|i| v[i].conj() * a[(i, j)]).sum();
            for i in k + 1..n {
                a[(i, j)] -= v[i] * s * 2.0;
            }
        }
        // A ← A H
        for i in 0..n {
            let s: Complex64 = (k + 1..n).map(|j| a[(i, j)] * v[j]).sum();
            for j in k + 1..n {
                a[(i, j)] -= s * 2.0 * v[j].conj();
            }
        }
        for i in k + 2..n {
            a[(i, k)] = ZERO;
        }
    }
    a
}
