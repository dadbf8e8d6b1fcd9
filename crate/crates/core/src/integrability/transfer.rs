use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use super::lax::LaxOperator;
use crate::error::{Error, Result};
use crate::linalg::{apply_local, inverse, ComplexMatrix, DENSE_CAP};

fn space(lax: &dyn LaxOperator, l: usize) -> Result<(Vec<usize>, usize, usize)> {
    if l == 0 {
        return Err(Error::InvalidArgument("chain length must be positive".into()));
    }
    let (a, p) = (lax.aux_dim(), lax.phys_dim());
    let mut phys: usize = 1;
    for _ in 0..l {
        phys = phys
            .checked_mul(p)
            .filter(|d| d.saturating_mul(a) <= DENSE_CAP)
            .ok_or(Error::CapExceeded {
                dim: usize::MAX,
                cap: DENSE_CAP,
            })?;
    }
    let mut dims = vec![a];
    dims.extend(core::iter::repeat(p).take(l));
    Ok((dims, a, phys))
}

/// Propagates `|α⟩ ⊗ |c⟩` through `L_{a,1} ⋯ L_{a,L}` (site `L` first),
/// carrying Leibniz terms for derivatives up to `order`.
fn propagate(
    dims: &[usize],
    l: usize,
    mats: &[ComplexMatrix],
    start: usize,
    order: usize,
) -> Result<Vec<Vec<Complex64>>> {
    let total: usize = dims.iter().product();
    let zero = Complex64::new(0.0, 0.0);
    let mut v = vec![vec![zero; total]; order + 1];
    v[0][start] = Complex64::new(1.0, 0.0);
    for j in (0..l).rev() {
        let t = [0, 1 + j];
        let mut next = Vec::with_capacity(order + 1);
        for k in 0..=order {
            // (L v)^(k) = Σ_m C(k,m) L^(m) v^(k−m)
            let mut acc = vec![zero; total];
            for m in 0..=k {
                if v[k - m].iter().all(|x| *x == zero) {
                    continue;
                }
                let w = apply_local(&mats[m], dims, &t, &v[k - m])?;
                let binom = if k == 2 && m == 1 { 2.0 } else { 1.0 };
                for (a, b) in acc.iter_mut().zip(&w) {
                    *a += b * binom;
                }
            }
            next.push(acc);
        }
        v = next;
    }
    Ok(v)
}

/// `M(x) = L_{a,1}(x) ⋯ L_{a,L}(x)` on `aux ⊗ (phys)^{⊗L}`.
pub fn monodromy(lax: &dyn LaxOperator, l: usize, x: Complex64) -> Result<ComplexMatrix> {
    let (dims, _, phys) = space(lax, l)?;
    let total = dims[0] * phys;
    let mats = [lax.evaluate(x)?];
    let mut m = ComplexMatrix::zeros(total, total);
    for col in 0..total {
        let v = propagate(&dims, l, &mats, col, 0)?;
        for (row, val) in v[0].iter().enumerate() {
            m[(row, col)] = *val;
        }
    }
    Ok(m)
}

/// `[T(x), T′(x), …]` up to `order ≤ 2`, with `T = Tr_aux M`, using exact Lax
/// derivatives.
pub fn transfer_derivatives(lax: &dyn LaxOperator, l: usize, x: Complex64, order: usize) -> Result<Vec<ComplexMatrix>> {
    if order > 2 {
        return Err(Error::InvalidArgument(format!("derivative order {order} > 2")));
    }
    let (dims, aux, phys) = space(lax, l)?;
    let mats: Vec<ComplexMatrix> = (0..=order).map(|k| lax.derivative(x, k)).collect::<Result<_>>()?;
    let mut out = vec![ComplexMatrix::zeros(phys, phys); order + 1];
    for col in 0..phys {
        for alpha in 0..aux {
            let v = propagate(&dims, l, &mats, alpha * phys + col, order)?;
            for (k, vk) in v.iter().enumerate() {
                for row in 0..phys {
                    out[k][(row, col)] += vk[alpha * phys + row];
                }
            }
        }
    }
    Ok(out)
}

pub fn transfer(lax: &dyn LaxOperator, l: usize, x: Complex64) -> Result<ComplexMatrix> {
    Ok(transfer_derivatives(lax, l, x, 0)?.remove(0))
}

/// `T′` and `T″` at `x` by Richardson-extrapolated central differences.
pub fn finite_difference_derivatives(
    lax: &dyn LaxOperator,
    l: usize,
    x: Complex64,
    step: f64,
) -> Result<(ComplexMatrix, ComplexMatrix)> {
    let t0 = transfer(lax, l, x)?;
    let stencil = |h: f64| -> Result<(ComplexMatrix, ComplexMatrix)> {
        let hc = Complex64::new(h, 0.0);
        let tp = transfer(lax, l, x + hc)?;
        let tm = transfer(lax, l, x - hc)?;
        let d1 = tp.sub(&tm)?.scale(Complex64::new(0.5 / h, 0.0));
        let d2 = tp.add(&tm)?.sub(&t0.scale(Complex64::new(2.0, 0.0)))?.scale(Complex64::new(1.0 / (h * h), 0.0));
        Ok((d1, d2))
    };
    let (a1, a2) = stencil(step)?;
    let (b1, b2) = stencil(step / 2.0)?;
    let third = Complex64::new(1.0 / 3.0, 0.0);
    let four = Complex64::new(4.0, 0.0);
    Ok((
        b1.scale(four).sub(&a1)?.scale(third),
        b2.scale(four).sub(&a2)?.scale(third),
    ))
}

/// `Q_{n+1} = i ∂^n log T |_{regular point}` for `n ∈ {1, 2}`:
/// `Q₂ = i T⁻¹T′`, `Q₃ = i [T⁻¹T″ − (T⁻¹T′)²]`.
pub fn charge(lax: &dyn LaxOperator, l: usize, n: usize) -> Result<ComplexMatrix> {
    if !(1..=2).contains(&n) {
        return Err(Error::InvalidArgument(format!("charge order n = {n} not in 1..=2")));
    }
    let t = transfer_derivatives(lax, l, lax.regular_point(), n)?;
    let tinv = inverse(&t[0])?;
    let i = Complex64::new(0.0, 1.0);
    let d1 = tinv.matmul(&t[1])?;
    if n == 1 {
        return Ok(d1.scale(i));
    }
    let d2 = tinv.matmul(&t[2])?;
    Ok(d2.sub(&d1.matmul(&d1)?)?.scale(i))
}
