use alloc::format;
use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::algebra::{ClockString, OperatorSum, Pauli};
use crate::error::{Error, Result};
use crate::linalg::{permutation_operator, to_dense, ComplexMatrix};
use crate::models::{Boundary, ModelKind, ModelSpec};

/// How the spectral parameter enters a Lax operator or R matrix.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Parametrization {
    /// Additive `u`, regular point `u = 0`.
    Hyperbolic,
    /// Multiplicative `z`, regular point `z = 1`.
    Multiplicative,
}

impl Parametrization {
    pub fn regular_point(self) -> Complex64 {
        match self {
            Parametrization::Hyperbolic => Complex64::new(0.0, 0.0),
            Parametrization::Multiplicative => Complex64::new(1.0, 0.0),
        }
    }
}

/// A Lax operator acting on `aux ⊗ phys`, auxiliary factor most significant.
pub trait LaxOperator {
    fn aux_dim(&self) -> usize;
    fn phys_dim(&self) -> usize;
    fn parametrization(&self) -> Parametrization;
    fn evaluate(&self, x: Complex64) -> Result<ComplexMatrix>;
    /// `d^order L / dx^order`, for `order ≤ 2`.
    fn derivative(&self, x: Complex64, order: usize) -> Result<ComplexMatrix>;

    fn regular_point(&self) -> Complex64 {
        self.parametrization().regular_point()
    }
}

/// `L(x) = [1 + f(x) 𝗁 + g(x) 𝗁²] · P_{a_r j} ⋯ P_{a_1 j}` on `r` auxiliary
/// qubits and one physical qubit, with
/// `𝗁(θ) = cos θ · σ^y_{a_1} σ^x_{a_2} ⋯ σ^x_{a_r} σ^x_j + sin θ · σ^x_{a_1} ⋯ σ^x_{a_r} σ^y_j`.
///
/// Hyperbolic: `f = −i tanh u`, `g = 0` (only for `θ ∈ {0, π/2}`, where
/// `𝗁² = 1`). Multiplicative: `f = (√2/2)(z − z⁻¹)/2`, `g = ((z + z⁻¹)/2 − 1)/2`.
/// `r = 1` is the eight-vertex Lax operator, `r = 2` the Fendley one.
#[derive(Clone, Debug)]
pub struct Lax {
    range: usize,
    theta: f64,
    param: Parametrization,
    h: ComplexMatrix,
    h2: ComplexMatrix,
    perm: ComplexMatrix,
}

fn mixing(theta: f64) -> (f64, f64) {
    if theta == 0.0 {
        (1.0, 0.0)
    } else if theta == core::f64::consts::FRAC_PI_2 {
        (0.0, 1.0)
    } else {
        (theta.cos(), theta.sin())
    }
}

impl Lax {
    fn build(range: usize, theta: f64, param: Parametrization) -> Result<Self> {
        if range == 0 {
            return Err(Error::InvalidArgument("Lax operator needs at least one auxiliary qubit".into()));
        }
        if range > 6 {
            return Err(Error::InvalidArgument(format!("auxiliary range {range} is too large")));
        }
        let n = range + 1;
        let mut plain = Vec::with_capacity(n);
        plain.push((0, Pauli::Y));
        plain.extend((1..n).map(|k| (k, Pauli::X)));
        let mut dual: Vec<_> = (0..range).map(|k| (k, Pauli::X)).collect();
        dual.push((range, Pauli::Y));
        let (c, s) = mixing(theta);
        let mut terms = Vec::new();
        if c != 0.0 {
            terms.push(ClockString::pauli(n, &plain).scaled(Complex64::new(c, 0.0)));
        }
        if s != 0.0 {
            terms.push(ClockString::pauli(n, &dual).scaled(Complex64::new(s, 0.0)));
        }
        let h = to_dense(&OperatorSum::from_strings(2, n, terms)?)?;
        let h2 = h.matmul(&h)?;
        let mut perm = ComplexMatrix::identity(1 << n);
        for a in (0..range).rev() {
            perm = perm.matmul(&permutation_operator(2, a, range, n)?)?;
        }
        Ok(Self {
            range,
            theta,
            param,
            h,
            h2,
            perm,
        })
    }

    /// `(1 − i tanh u · 𝗁) P` with the Fendley-type `𝗁` (`θ = 0`).
    pub fn hyperbolic(range: usize) -> Result<Self> {
        Self::build(range, 0.0, Parametrization::Hyperbolic)
    }

    /// `(1 − i tanh u · 𝗁̃) P` with the dual `𝗁̃` (`θ = π/2`).
    pub fn hyperbolic_dual(range: usize) -> Result<Self> {
        Self::build(range, core::f64::consts::FRAC_PI_2, Parametrization::Hyperbolic)
    }

    pub fn multiplicative(range: usize, theta: f64) -> Result<Self> {
        if !theta.is_finite() {
            return Err(Error::InvalidArgument("non-finite θ".into()));
        }
        Self::build(range, theta, Parametrization::Multiplicative)
    }

    pub fn eight_vertex() -> Self {
        Self::hyperbolic(1).expect("range 1 is valid")
    }

    pub fn fendley() -> Self {
        Self::hyperbolic(2).expect("range 2 is valid")
    }

    pub fn range(&self) -> usize {
        self.range
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    /// The local operator `𝗁` on `aux ⊗ phys`.
    pub fn local_term(&self) -> &ComplexMatrix {
        &self.h
    }

    /// The permutation `L(regular point)`.
    pub fn permutation(&self) -> &ComplexMatrix {
        &self.perm
    }

    /// `(1, f, g)` coefficients differentiated `order` times.
    fn coefficients(&self, x: Complex64, order: usize) -> Result<(Complex64, Complex64, Complex64)> {
        let zero = Complex64::new(0.0, 0.0);
        let one = Complex64::new(1.0, 0.0);
        let i = Complex64::new(0.0, 1.0);
        match self.param {
            Parametrization::Hyperbolic => {
                let ch = x.cosh();
                if ch.norm() < 1e-12 {
                    return Err(Error::Pole(format!("tanh has a pole at u = {x}")));
                }
                let t = x.sinh() / ch;
                let sech2 = one / (ch * ch);
                Ok(match order {
                    0 => (one, -i * t, zero),
                    1 => (zero, -i * sech2, zero),
                    2 => (zero, i * 2.0 * t * sech2, zero),
                    _ => return Err(Error::InvalidArgument(format!("derivative order {order} > 2"))),
                })
            }
            Parametrization::Multiplicative => {
                if x.norm() == 0.0 {
                    return Err(Error::Pole("z = 0".into()));
                }
                let zi = one / x;
                let s = core::f64::consts::SQRT_2;
                Ok(match order {
                    0 => (one, (x - zi) * (s / 4.0), (x + zi) * 0.25 - 0.5),
                    1 => (zero, (one + zi * zi) * (s / 4.0), (one - zi * zi) * 0.25),
                    2 => (zero, -(zi * zi * zi) * (s / 2.0), zi * zi * zi * 0.5),
                    _ => return Err(Error::InvalidArgument(format!("derivative order {order} > 2"))),
                })
            }
        }
    }

    fn assemble(&self, (e, f, g): (Complex64, Complex64, Complex64)) -> Result<ComplexMatrix> {
        let mut a = ComplexMatrix::identity(self.h.rows()).scale(e);
        a.axpy(f, &self.h)?;
        if g != Complex64::new(0.0, 0.0) {
            a.axpy(g, &self.h2)?;
        }
        a.matmul(&self.perm)
    }
}

impl LaxOperator for Lax {
    fn aux_dim(&self) -> usize {
        1 << self.range
    }

    fn phys_dim(&self) -> usize {
        2
    }

    fn parametrization(&self) -> Parametrization {
        self.param
    }

    fn evaluate(&self, x: Complex64) -> Result<ComplexMatrix> {
        self.assemble(self.coefficients(x, 0)?)
    }

    fn derivative(&self, x: Complex64, order: usize) -> Result<ComplexMatrix> {
        if order == 0 {
            return self.evaluate(x);
        }
        self.assemble(self.coefficients(x, order)?)
    }
}

/// Eight-vertex Lax operator `(1 − i tanh u σ^y_a σ^x_j) P_{a,j}`.
pub fn lax_8v(u: Complex64) -> Result<ComplexMatrix> {
    Lax::eight_vertex().evaluate(u)
}

/// Fendley Lax operator `(1 − i tanh u σ^y_a σ^x_b σ^x_j) P_{b,j} P_{a,j}`.
pub fn lax_fendley(u: Complex64) -> Result<ComplexMatrix> {
    Lax::fendley().evaluate(u)
}

pub fn lax_8v_full(z: Complex64, theta: f64) -> Result<ComplexMatrix> {
    Lax::multiplicative(1, theta)?.evaluate(z)
}

pub fn lax_fendley_full(z: Complex64, theta: f64) -> Result<ComplexMatrix> {
    Lax::multiplicative(2, theta)?.evaluate(z)
}

/// The Lax operator whose transfer matrix generates `spec`'s Hamiltonian.
pub fn lax_for_model(spec: &ModelSpec) -> Result<Lax> {
    spec.validate()?;
    if spec.boundary != Boundary::Periodic {
        return Err(Error::Unsupported("transfer matrices need periodic boundaries".into()));
    }
    match spec.kind {
        ModelKind::Ff8v | ModelKind::Fendley => Lax::hyperbolic(spec.r),
        ModelKind::FendleyDual => Lax::hyperbolic_dual(spec.r),
        ModelKind::FendleyMixed => Lax::multiplicative(spec.r, spec.theta),
        k => Err(Error::Unsupported(format!("no Lax operator for {k}"))),
    }
}

/// Free-fermion weights of a 4×4 eight-vertex matrix in the layout
/// `[[a₁,0,0,d₁],[0,b₁,c₁,0],[0,c₂,b₂,0],[d₂,0,0,a₂]]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EightVertexWeights {
    pub a1: Complex64,
    pub a2: Complex64,
    pub b1: Complex64,
    pub b2: Complex64,
    pub c1: Complex64,
    pub c2: Complex64,
    pub d1: Complex64,
    pub d2: Complex64,
}

impl EightVertexWeights {
    pub fn from_matrix(m: &ComplexMatrix) -> Result<Self> {
        if m.rows() != 4 || m.cols() != 4 {
            return Err(Error::dims(format!("eight-vertex weights need 4×4, got {}×{}", m.rows(), m.cols())));
        }
        Ok(Self {
            a1: m[(0, 0)],
            a2: m[(3, 3)],
            b1: m[(1, 1)],
            b2: m[(2, 2)],
            c1: m[(1, 2)],
            c2: m[(2, 1)],
            d1: m[(0, 3)],
            d2: m[(3, 0)],
        })
    }

    pub fn to_matrix(&self) -> ComplexMatrix {
        let z = Complex64::new(0.0, 0.0);
        ComplexMatrix::from_vec(
            4,
            4,
            alloc::vec![
                self.a1, z, z, self.d1, //
                z, self.b1, self.c1, z, //
                z, self.c2, self.b2, z, //
                self.d2, z, z, self.a2,
            ],
        )
        .expect("4×4")
    }

    /// `|a₁a₂ + b₁b₂ − c₁c₂ − d₁d₂|`.
    pub fn free_fermion_residual(&self) -> f64 {
        (self.a1 * self.a2 + self.b1 * self.b2 - self.c1 * self.c2 - self.d1 * self.d2).norm()
    }
}

/// Closed-form weights of [`lax_8v`]: `a = c = 1`, `b₁ = d₁ = −tanh u`,
/// `b₂ = d₂ = tanh u`.
pub fn eight_vertex_weights(u: Complex64) -> Result<EightVertexWeights> {
    let ch = u.cosh();
    if ch.norm() < 1e-12 {
        return Err(Error::Pole(format!("tanh has a pole at u = {u}")));
    }
    let t = u.sinh() / ch;
    let one = Complex64::new(1.0, 0.0);
    Ok(EightVertexWeights {
        a1: one,
        a2: one,
        b1: -t,
        b2: t,
        c1: one,
        c2: one,
        d1: -t,
        d2: t,
    })
}

/// Closed-form weights of [`lax_8v_full`] as polynomials in `z` over `4z`:
/// `a = 4z + (z−1)²(1 + sin 2θ)`, `c = 4z + (z−1)²(1 − sin 2θ)`,
/// `b₁ = −b₂ = −i√2 (z² − 1)(cos θ − sin θ)`,
/// `d₁ = −d₂ = −i√2 (z² − 1)(cos θ + sin θ)`.
pub fn eight_vertex_full_weights(z: Complex64, theta: f64) -> Result<EightVertexWeights> {
    if z.norm() == 0.0 {
        return Err(Error::Pole("z = 0".into()));
    }
    let (c, s) = (theta.cos(), theta.sin());
    let s2 = (2.0 * theta).sin();
    let inv = Complex64::new(1.0, 0.0) / (z * 4.0);
    let zm = (z - 1.0) * (z - 1.0);
    let odd = Complex64::new(0.0, -core::f64::consts::SQRT_2) * (z * z - 1.0);
    let a = (z * 4.0 + zm * (1.0 + s2)) * inv;
    let cc = (z * 4.0 + zm * (1.0 - s2)) * inv;
    let b = odd * (c - s) * inv;
    let d = odd * (c + s) * inv;
    Ok(EightVertexWeights {
        a1: a,
        a2: a,
        b1: b,
        b2: -b,
        c1: cc,
        c2: cc,
        d1: d,
        d2: -d,
    })
}
