use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_complex::Complex64;

use super::phase::root_of_unity;
use crate::error::{Error, Result};

/// Single-site Pauli label, used to build `Q = 2` strings.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    /// `(x, z, phase)` with `σ = phase · X^x Z^z`.
    fn decompose(self) -> (u8, u8, Complex64) {
        match self {
            Pauli::I => (0, 0, Complex64::new(1.0, 0.0)),
            Pauli::X => (1, 0, Complex64::new(1.0, 0.0)),
            Pauli::Y => (1, 1, Complex64::new(0.0, 1.0)),
            Pauli::Z => (0, 1, Complex64::new(1.0, 0.0)),
        }
    }
}

/// A coefficient times a normal-ordered monomial `∏_j X_j^{x_j} Z_j^{z_j}`.
///
/// Exponents are always reduced mod `Q`. Two strings compare equal only when
/// both exponent arrays and the coefficient match exactly.
#[derive(Clone, Debug, PartialEq)]
pub struct ClockString {
    order: u8,
    x: Vec<u8>,
    z: Vec<u8>,
    coeff: Complex64,
}

impl ClockString {
    pub fn new(order: u8, x: Vec<u8>, z: Vec<u8>, coeff: Complex64) -> Result<Self> {
        if order < 2 {
            return Err(Error::InvalidArgument(format!("clock order {order} < 2")));
        }
        if x.is_empty() || x.len() != z.len() {
            return Err(Error::dims(format!(
                "exponent arrays of length {} and {}",
                x.len(),
                z.len()
            )));
        }
        if !(coeff.re.is_finite() && coeff.im.is_finite()) {
            return Err(Error::InvalidArgument(format!("non-finite coefficient {coeff}")));
        }
        let x = x.into_iter().map(|e| e % order).collect();
        let z = z.into_iter().map(|e| e % order).collect();
        Ok(Self { order, x, z, coeff })
    }

    pub fn identity(order: u8, sites: usize) -> Self {
        assert!(order >= 2 && sites >= 1);
        Self {
            order,
            x: vec![0; sites],
            z: vec![0; sites],
            coeff: Complex64::new(1.0, 0.0),
        }
    }

    /// Multiplies `X^x Z^z` into `site` (0-based), keeping normal order.
    pub fn with_site(mut self, site: usize, x: u8, z: u8) -> Self {
        let q = self.order;
        let s = site % self.sites();
        // (X^a Z^b)(X^x Z^z) = ω^{-b·x} X^{a+x} Z^{b+z}
        let phase = -(self.z[s] as i64) * (x as i64);
        self.coeff *= root_of_unity(q, phase);
        self.x[s] = (self.x[s] + x % q) % q;
        self.z[s] = (self.z[s] + z % q) % q;
        self
    }

    pub fn clock_x(order: u8, sites: usize, site: usize) -> Self {
        Self::identity(order, sites).with_site(site, 1, 0)
    }

    pub fn clock_z(order: u8, sites: usize, site: usize) -> Self {
        Self::identity(order, sites).with_site(site, 0, 1)
    }

    /// A Pauli string on `sites` qubits; sites are 0-based and wrap.
    pub fn pauli(sites: usize, ops: &[(usize, Pauli)]) -> Self {
        let mut s = Self::identity(2, sites);
        for &(site, p) in ops {
            let (x, z, phase) = p.decompose();
            s = s.with_site(site, x, z);
            s.coeff *= phase;
        }
        s
    }

    pub fn scaled(mut self, c: Complex64) -> Self {
        self.coeff *= c;
        self
    }

    pub fn with_coeff(mut self, c: Complex64) -> Self {
        self.coeff = c;
        self
    }

    #[inline]
    pub fn order(&self) -> u8 {
        self.order
    }

    #[inline]
    pub fn sites(&self) -> usize {
        self.x.len()
    }

    #[inline]
    pub fn x_exponents(&self) -> &[u8] {
        &self.x
    }

    #[inline]
    pub fn z_exponents(&self) -> &[u8] {
        &self.z
    }

    #[inline]
    pub fn coeff(&self) -> Complex64 {
        self.coeff
    }

    /// Number of sites carrying a non-identity factor.
    pub fn weight(&self) -> usize {
        self.x.iter().zip(&self.z).filter(|(x, z)| **x != 0 || **z != 0).count()
    }

    /// True when every exponent vanishes (the coefficient is not inspected).
    pub fn is_scalar(&self) -> bool {
        self.x.iter().chain(&self.z).all(|&e| e == 0)
    }

    pub fn same_monomial(&self, other: &Self) -> bool {
        self.x == other.x && self.z == other.z
    }

    pub(crate) fn key(&self) -> Vec<u8> {
        let mut k = Vec::with_capacity(2 * self.sites());
        k.extend_from_slice(&self.x);
        k.extend_from_slice(&self.z);
        k
    }

    pub(crate) fn from_key(order: u8, key: &[u8], coeff: Complex64) -> Self {
        let n = key.len() / 2;
        Self {
            order,
            x: key[..n].to_vec(),
            z: key[n..].to_vec(),
            coeff,
        }
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.order != other.order || self.sites() != other.sites() {
            return Err(Error::dims(format!(
                "(Q={}, N={}) vs (Q={}, N={})",
                self.order,
                self.sites(),
                other.order,
                other.sites()
            )));
        }
        Ok(())
    }

    /// Normal-ordered product `self · other`.
    pub fn multiply(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let q = self.order;
        let mut phase: i64 = 0;
        let mut x = Vec::with_capacity(self.sites());
        let mut z = Vec::with_capacity(self.sites());
        for j in 0..self.sites() {
            phase -= self.z[j] as i64 * other.x[j] as i64;
            x.push((self.x[j] + other.x[j]) % q);
            z.push((self.z[j] + other.z[j]) % q);
        }
        Ok(Self {
            order: q,
            x,
            z,
            coeff: self.coeff * other.coeff * root_of_unity(q, phase),
        })
    }

    /// Exponent `e` (mod `Q`) with `self · other = ω^e · other · self`,
    /// computed from the exponents alone so it is exact.
    pub fn commutation_exponent(&self, other: &Self) -> Result<u8> {
        self.check_compatible(other)?;
        let q = self.order as i64;
        let mut e: i64 = 0;
        for j in 0..self.sites() {
            e += other.z[j] as i64 * self.x[j] as i64 - self.z[j] as i64 * other.x[j] as i64;
        }
        Ok(e.rem_euclid(q) as u8)
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::identity(self.order, self.sites());
        for _ in 0..k {
            acc = acc.multiply(self).expect("same shape");
        }
        acc
    }

    /// Hermitian conjugate, using `X† = X^{Q-1}`, `Z† = Z^{Q-1}`.
    pub fn adjoint(&self) -> Self {
        let q = self.order;
        // (c X^x Z^z)† = c̄ Z^{-z} X^{-x} = c̄ ω^{-xz} X^{-x} Z^{-z}
        let mut phase: i64 = 0;
        let mut x = Vec::with_capacity(self.sites());
        let mut z = Vec::with_capacity(self.sites());
        for j in 0..self.sites() {
            phase -= self.x[j] as i64 * self.z[j] as i64;
            x.push((q - self.x[j]) % q);
            z.push((q - self.z[j]) % q);
        }
        Self {
            order: q,
            x,
            z,
            coeff: self.coeff.conj() * root_of_unity(q, phase),
        }
    }

    /// Relabels site `j` as `j + shift` (mod `N`).
    pub fn translate(&self, shift: isize) -> Self {
        let n = self.sites() as isize;
        let mut x = vec![0; self.sites()];
        let mut z = vec![0; self.sites()];
        for j in 0..n {
            let t = (j + shift).rem_euclid(n) as usize;
            x[t] = self.x[j as usize];
            z[t] = self.z[j as usize];
        }
        Self {
            order: self.order,
            x,
            z,
            coeff: self.coeff,
        }
    }
}

impl fmt::Display for ClockString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:+.6}{:+.6}i)", self.coeff.re, self.coeff.im)?;
        if self.is_scalar() {
            return write!(f, " 1");
        }
        for j in 0..self.sites() {
            match (self.x[j], self.z[j]) {
                (0, 0) => {}
                (a, 0) => write!(f, " X{}^{}", j + 1, a)?,
                (0, b) => write!(f, " Z{}^{}", j + 1, b)?,
                (a, b) => write!(f, " X{}^{}Z{}^{}", j + 1, a, j + 1, b)?,
            }
        }
        Ok(())
    }
}
