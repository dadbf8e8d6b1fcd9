use alloc::format;
use alloc::string::String;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use super::lax::{lax_8v, Parametrization};
use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;

/// An R matrix on `aux ⊗ aux`, each factor of dimension [`dim`](Self::dim).
pub trait RMatrixSpec {
    fn name(&self) -> String;
    fn dim(&self) -> usize;
    fn parametrization(&self) -> Parametrization;
    fn difference_form(&self) -> bool;
    fn evaluate(&self, x: Complex64, y: Complex64) -> Result<ComplexMatrix>;
}

/// `R(u, v) = L^{8V}(u − v)`.
#[derive(Clone, Copy, Debug, Default)]
pub struct EightVertexR;

impl RMatrixSpec for EightVertexR {
    fn name(&self) -> String {
        "eight-vertex".into()
    }
    fn dim(&self) -> usize {
        2
    }
    fn parametrization(&self) -> Parametrization {
        Parametrization::Hyperbolic
    }
    fn difference_form(&self) -> bool {
        true
    }
    fn evaluate(&self, u: Complex64, v: Complex64) -> Result<ComplexMatrix> {
        lax_8v(u - v)
    }
}

pub fn r_8v(u: Complex64) -> Result<ComplexMatrix> {
    lax_8v(u)
}

/// The trigonometric R matrix intertwining [`lax_8v_full`](super::lax_8v_full)
/// at `q = e^{iθ}`.
#[derive(Clone, Copy, Debug)]
pub struct EightVertexFullR {
    pub theta: f64,
}

impl RMatrixSpec for EightVertexFullR {
    fn name(&self) -> String {
        format!("eight-vertex-full(theta={})", self.theta)
    }
    fn dim(&self) -> usize {
        2
    }
    fn parametrization(&self) -> Parametrization {
        Parametrization::Multiplicative
    }
    fn difference_form(&self) -> bool {
        false
    }
    fn evaluate(&self, z: Complex64, w: Complex64) -> Result<ComplexMatrix> {
        Ok(r_8v_full(z, w, Complex64::from_polar(1.0, self.theta)))
    }
}

/// `[[a,0,0,d],[0,b,c,0],[0,c,−b,0],[−d,0,0,a]]` with polynomial weights in
/// `z`, `w` and `q`.
pub fn r_8v_full(z: Complex64, w: Complex64, q: Complex64) -> ComplexMatrix {
    let one = Complex64::new(1.0, 0.0);
    let i = Complex64::new(0.0, 1.0);
    let q2 = q * q;
    let q4 = q2 * q2;
    let q6 = q4 * q2;
    let q8 = q4 * q4;
    let zm = (z - one) * (z - one);
    let wm = (w - one) * (w - one);
    let zw2 = (z - w) * (z - w);
    let mid = (z * z * (w * w * 7.0 + w * 2.0 - one) + z * (w * w + w * 6.0 + one) * 2.0 - w * w + w * 2.0 + 7.0) * q4 * 2.0;
    let a = q8 * zm * wm + i * 8.0 * q6 * zw2 - mid - i * 8.0 * q2 * zw2 + zm * wm;
    let c = q8 * zm * wm - i * 8.0 * q6 * zw2 - mid + i * 8.0 * q2 * zw2 + zm * wm;
    let e_plus = Complex64::from_polar(1.0, core::f64::consts::FRAC_PI_4);
    let e_minus = e_plus.conj();
    let poly = |sign: f64| {
        // z²(1 + q⁴(w−1) − w ∓ 2iq²(w+1)) − (q² ∓ i)² z(w² − 1) + w(1 + q⁴(w−1) − w ± 2iq²(w+1))
        let s = i * sign;
        let base = one + q4 * (w - one) - w;
        let twist = i * 2.0 * q2 * (w + one) * sign;
        z * z * (base - twist) - (q2 - s) * (q2 - s) * z * (w * w - one) + w * (base + twist)
    };
    let b = -e_plus * 4.0 * q * (q2 - i) * poly(1.0);
    let d = e_minus * 4.0 * q * (q2 + i) * poly(-1.0);
    let zero = Complex64::new(0.0, 0.0);
    ComplexMatrix::from_vec(
        4,
        4,
        alloc::vec![
            a, zero, zero, d, //
            zero, b, c, zero, //
            zero, c, -b, zero, //
            -d, zero, zero, a,
        ],
    )
    .expect("4×4")
}

/// Nonzero pattern of the 16×16 Fendley R matrix: `(column, sign, weight)`
/// per row, weight `k` standing for `r_k`.
const FENDLEY_ROWS: [[(usize, i8, u8); 4]; 16] = [
    [(0, 1, 1), (6, 1, 3), (11, 1, 2), (13, 1, 2)],
    [(2, 1, 3), (4, 1, 1), (9, 1, 2), (15, 1, 2)],
    [(3, 1, 2), (5, 1, 2), (8, 1, 1), (14, 1, 3)],
    [(1, 1, 2), (7, 1, 2), (10, 1, 3), (12, 1, 1)],
    [(1, 1, 1), (7, -1, 3), (10, 1, 2), (12, -1, 2)],
    [(3, -1, 3), (5, 1, 1), (8, -1, 2), (14, 1, 2)],
    [(2, 1, 2), (4, -1, 2), (9, 1, 1), (15, -1, 3)],
    [(0, -1, 2), (6, 1, 2), (11, -1, 3), (13, 1, 1)],
    [(2, 1, 1), (4, -1, 3), (9, -1, 2), (15, 1, 2)],
    [(0, -1, 3), (6, 1, 1), (11, 1, 2), (13, -1, 2)],
    [(1, -1, 2), (7, 1, 2), (10, 1, 1), (12, -1, 3)],
    [(3, 1, 2), (5, -1, 2), (8, -1, 3), (14, 1, 1)],
    [(3, 1, 1), (5, 1, 3), (8, -1, 2), (14, -1, 2)],
    [(1, 1, 3), (7, 1, 1), (10, -1, 2), (12, -1, 2)],
    [(0, -1, 2), (6, -1, 2), (11, 1, 1), (13, 1, 3)],
    [(2, -1, 2), (4, -1, 2), (9, 1, 3), (15, 1, 1)],
];

fn tanh_checked(x: Complex64) -> Result<Complex64> {
    let ch = x.cosh();
    if ch.norm() < 1e-12 {
        return Err(Error::Pole(format!("tanh has a pole at {x}")));
    }
    Ok(x.sinh() / ch)
}

fn fendley_from_weights(r2: Complex64, r3: Complex64) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(16, 16);
    for (row, entries) in FENDLEY_ROWS.iter().enumerate() {
        for &(col, sign, k) in entries {
            let v = match k {
                1 => Complex64::new(1.0, 0.0),
                2 => r2,
                _ => r3,
            };
            m[(row, col)] = v * sign as f64;
        }
    }
    m
}

/// The Fendley R matrix with `r₁ = 1`, `r₂ = tanh(v − u)`,
/// `r₃ = −tanh(u − v) tanh(u + v)`. It satisfies
/// `R_{(ab)(cd)}(u,v) L_{abj}(u) L_{cdj}(v) = L_{cdj}(v) L_{abj}(u) R_{(ab)(cd)}(u,v)`
/// and `R(u, 0) = L_{abc}(u) L_{abd}(u)`.
pub fn r_fendley(u: Complex64, v: Complex64) -> Result<ComplexMatrix> {
    let r2 = tanh_checked(v - u)?;
    let r3 = -tanh_checked(u - v)? * tanh_checked(u + v)?;
    Ok(fendley_from_weights(r2, r3))
}

/// The same pattern with `r₂ = tanh(u − v)`. This equals `r_fendley(−u, −v)`
/// and intertwines `L(−u) L(−v)` rather than `L(u) L(v)`.
pub fn r_fendley_printed(u: Complex64, v: Complex64) -> Result<ComplexMatrix> {
    let r2 = tanh_checked(u - v)?;
    let r3 = -tanh_checked(u - v)? * tanh_checked(u + v)?;
    Ok(fendley_from_weights(r2, r3))
}

#[derive(Clone, Copy, Debug, Default)]
pub struct FendleyR;

impl RMatrixSpec for FendleyR {
    fn name(&self) -> String {
        "fendley".into()
    }
    fn dim(&self) -> usize {
        4
    }
    fn parametrization(&self) -> Parametrization {
        Parametrization::Hyperbolic
    }
    fn difference_form(&self) -> bool {
        false
    }
    fn evaluate(&self, u: Complex64, v: Complex64) -> Result<ComplexMatrix> {
        r_fendley(u, v)
    }
}

/// An R matrix given by a closure, e.g. a numerically solved intertwiner or
/// a deliberately perturbed one.
pub struct FnR<F> {
    pub name: String,
    pub dim: usize,
    pub parametrization: Parametrization,
    pub f: F,
}

impl<F: Fn(Complex64, Complex64) -> Result<ComplexMatrix>> RMatrixSpec for FnR<F> {
    fn name(&self) -> String {
        self.name.clone()
    }
    fn dim(&self) -> usize {
        self.dim
    }
    fn parametrization(&self) -> Parametrization {
        self.parametrization
    }
    fn difference_form(&self) -> bool {
        false
    }
    fn evaluate(&self, x: Complex64, y: Complex64) -> Result<ComplexMatrix> {
        (self.f)(x, y)
    }
}

/// `P R P` with `P` exchanging the two auxiliary factors.
pub fn swap_factors(r: &ComplexMatrix, dim: usize) -> Result<ComplexMatrix> {
    if r.rows() != dim * dim || r.cols() != dim * dim {
        return Err(Error::dims(format!("{}×{} is not an operator on ℂ^{dim} ⊗ ℂ^{dim}", r.rows(), r.cols())));
    }
    let sw = |k: usize| (k % dim) * dim + k / dim;
    Ok(ComplexMatrix::from_fn(r.rows(), r.cols(), |i, j| r[(sw(i), sw(j))]))
}

/// `R(u,v) · P R(v,u) P = s(u,v) · 1` for the Fendley R matrix with
/// `s = 2[cosh 4u + cosh 4v − 2 sinh 2u sinh 2v] / [cosh 2u + cosh 2v]²`.
pub fn inverse_relation_scalar(u: Complex64, v: Complex64) -> Complex64 {
    let num = ((u * 4.0).cosh() + (v * 4.0).cosh() - (u * 2.0).sinh() * (v * 2.0).sinh() * 2.0) * 2.0;
    let den = (u * 2.0).cosh() + (v * 2.0).cosh();
    num / (den * den)
}

/// `max` over the sample points of the relative change of `R(x + s, y + s)`
/// against `R(x, y)`. Zero for difference-form matrices.
pub fn difference_form_deviation(r: &dyn RMatrixSpec, points: &[(Complex64, Complex64, Complex64)]) -> Result<f64> {
    let mut worst = 0.0f64;
    for &(x, y, s) in points {
        let (a, b) = match r.parametrization() {
            Parametrization::Hyperbolic => (r.evaluate(x, y)?, r.evaluate(x + s, y + s)?),
            Parametrization::Multiplicative => (r.evaluate(x, y)?, r.evaluate(x * s, y * s)?),
        };
        // compare up to normalisation
        let alpha = a.inner(&b)? / a.inner(&a)?;
        let dev = b.distance(&a.scale(alpha))? / b.frobenius_norm().max(f64::MIN_POSITIVE);
        worst = worst.max(dev);
    }
    Ok(worst)
}
