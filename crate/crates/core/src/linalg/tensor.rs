use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use super::ComplexMatrix;
use crate::algebra::{root_of_unity, OperatorSum};
use crate::error::{Error, Result};

/// Default ceiling on the Hilbert-space dimension realised densely.
pub const DENSE_CAP: usize = 1 << 16;

/// `X^x Z^z` as a `Q×Q` matrix with `X|k⟩ = |k−1⟩` (so `X[i][i+1] = 1`) and
/// `Z = diag(ω^k)`.
pub fn clock_matrix(order: u8, x: u8, z: u8) -> ComplexMatrix {
    let q = order as usize;
    ComplexMatrix::from_fn(q, q, |r, c| {
        if c == (r + x as usize) % q {
            root_of_unity(order, z as i64 * c as i64)
        } else {
            Complex64::new(0.0, 0.0)
        }
    })
}

pub fn to_dense(a: &OperatorSum) -> Result<ComplexMatrix> {
    to_dense_with_cap(a, DENSE_CAP)
}

/// Realises `a` on `(ℂ^Q)^{⊗N}` with site 1 as the most significant factor.
/// Every clock string is a generalised permutation, so each term costs
/// `O(dim · N)`.
pub fn to_dense_with_cap(a: &OperatorSum, cap: usize) -> Result<ComplexMatrix> {
    let q = a.order() as usize;
    let n = a.sites();
    let dim = checked_pow(q, n).filter(|d| *d <= cap).ok_or(Error::CapExceeded {
        dim: checked_pow(q, n).unwrap_or(usize::MAX),
        cap,
    })?;
    let phases: Vec<Complex64> = (0..q).map(|k| root_of_unity(a.order(), k as i64)).collect();
    let mut m = ComplexMatrix::zeros(dim, dim);
    let mut digits = vec![0usize; n];
    for t in a.terms() {
        let (xs, zs) = (t.x_exponents(), t.z_exponents());
        for r in 0..dim {
            decompose(r, q, &mut digits);
            let mut c = 0usize;
            let mut ph = 0usize;
            for j in 0..n {
                let cj = (digits[j] + xs[j] as usize) % q;
                c = c * q + cj;
                ph += zs[j] as usize * cj;
            }
            m[(r, c)] += t.coeff() * phases[ph % q];
        }
    }
    Ok(m)
}

fn checked_pow(base: usize, exp: usize) -> Option<usize> {
    let mut acc: usize = 1;
    for _ in 0..exp {
        acc = acc.checked_mul(base)?;
    }
    Some(acc)
}

fn decompose(mut idx: usize, q: usize, digits: &mut [usize]) {
    for d in digits.iter_mut().rev() {
        *d = idx % q;
        idx /= q;
    }
}

/// Mixed-radix layout of a tensor product with the first factor most
/// significant.
struct Layout {
    dims: Vec<usize>,
    strides: Vec<usize>,
    total: usize,
}

impl Layout {
    fn new(dims: &[usize]) -> Self {
        let mut strides = vec![0; dims.len()];
        let mut s = 1;
        for k in (0..dims.len()).rev() {
            strides[k] = s;
            s *= dims[k];
        }
        Self {
            dims: dims.to_vec(),
            strides,
            total: s,
        }
    }

    fn digit(&self, idx: usize, k: usize) -> usize {
        (idx / self.strides[k]) % self.dims[k]
    }
}

fn check_targets(op: &ComplexMatrix, dims: &[usize], targets: &[usize]) -> Result<usize> {
    let mut local = 1;
    for (i, &t) in targets.iter().enumerate() {
        if t >= dims.len() {
            return Err(Error::IndexOutOfRange {
                index: t,
                max: dims.len().saturating_sub(1),
            });
        }
        if targets[..i].contains(&t) {
            return Err(Error::InvalidArgument(format!("slot {t} targeted twice")));
        }
        local *= dims[t];
    }
    if !op.is_square() || op.rows() != local {
        return Err(Error::dims(format!(
            "{}×{} operator on slots of total dimension {local}",
            op.rows(),
            op.cols()
        )));
    }
    Ok(local)
}

/// Places `op`, an operator on the ordered factors `targets`, into the full
/// product space described by `factor_dims`, acting as the identity on all
/// other factors.
pub fn embed(op: &ComplexMatrix, factor_dims: &[usize], targets: &[usize]) -> Result<ComplexMatrix> {
    let local = check_targets(op, factor_dims, targets)?;
    let lay = Layout::new(factor_dims);
    let mut out = ComplexMatrix::zeros(lay.total, lay.total);
    for r in 0..lay.total {
        let mut base = r;
        let mut lr = 0;
        for &t in targets {
            let d = lay.digit(r, t);
            lr = lr * factor_dims[t] + d;
            base -= d * lay.strides[t];
        }
        for lc in 0..local {
            let v = op[(lr, lc)];
            if v.re == 0.0 && v.im == 0.0 {
                continue;
            }
            let mut c = base;
            let mut rem = lc;
            for &t in targets.iter().rev() {
                c += (rem % factor_dims[t]) * lay.strides[t];
                rem /= factor_dims[t];
            }
            out[(r, c)] = v;
        }
    }
    Ok(out)
}

/// `op` applied to `v` on the factors `targets`, without forming the
/// embedded matrix.
pub fn apply_local(
    op: &ComplexMatrix,
    factor_dims: &[usize],
    targets: &[usize],
    v: &[Complex64],
) -> Result<Vec<Complex64>> {
    let local = check_targets(op, factor_dims, targets)?;
    let lay = Layout::new(factor_dims);
    if v.len() != lay.total {
        return Err(Error::dims(format!("vector of length {} on space {}", v.len(), lay.total)));
    }
    // offsets of each local basis state relative to the base index
    let offsets: Vec<usize> = (0..local)
        .map(|l| {
            let mut off = 0;
            let mut rem = l;
            for &t in targets.iter().rev() {
                off += (rem % factor_dims[t]) * lay.strides[t];
                rem /= factor_dims[t];
            }
            off
        })
        .collect();
    let mut out = vec![Complex64::new(0.0, 0.0); lay.total];
    let mut buf = vec![Complex64::new(0.0, 0.0); local];
    for base in 0..lay.total {
        if targets.iter().any(|&t| lay.digit(base, t) != 0) {
            continue;
        }
        for (b, off) in buf.iter_mut().zip(&offsets) {
            *b = v[base + off];
        }
        for (lr, off) in offsets.iter().enumerate() {
            let row = op.row(lr);
            out[base + off] = row.iter().zip(&buf).map(|(a, b)| a * b).sum();
        }
    }
    Ok(out)
}

/// Swap of tensor slots `a` and `b` among `slots` copies of `ℂ^dim`.
pub fn permutation_operator(dim: usize, a: usize, b: usize, slots: usize) -> Result<ComplexMatrix> {
    for s in [a, b] {
        if s >= slots {
            return Err(Error::IndexOutOfRange {
                index: s,
                max: slots.saturating_sub(1),
            });
        }
    }
    let dims = vec![dim; slots];
    let lay = Layout::new(&dims);
    let mut p = ComplexMatrix::zeros(lay.total, lay.total);
    for c in 0..lay.total {
        let (da, db) = (lay.digit(c, a), lay.digit(c, b));
        let r = c - da * lay.strides[a] - db * lay.strides[b] + db * lay.strides[a] + da * lay.strides[b];
        p[(r, c)] = Complex64::new(1.0, 0.0);
    }
    Ok(p)
}
