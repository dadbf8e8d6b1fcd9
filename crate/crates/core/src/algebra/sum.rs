use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;
use core::fmt;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use super::string::ClockString;
use crate::error::{Error, Result};

/// Coefficients at or below this magnitude are dropped on canonicalisation.
pub const DEFAULT_TOLERANCE: f64 = 1e-14;

/// Canonical linear combination of clock strings sharing `(Q, N)`.
///
/// Terms are keyed by the concatenated exponent arrays `x‖z`, so iteration
/// order is lexicographic and two sums with the same terms compare equal
/// structurally.
#[derive(Clone, Debug, PartialEq)]
pub struct OperatorSum {
    order: u8,
    sites: usize,
    tolerance: f64,
    terms: BTreeMap<Vec<u8>, Complex64>,
}

impl OperatorSum {
    pub fn zero(order: u8, sites: usize) -> Self {
        assert!(order >= 2 && sites >= 1);
        Self {
            order,
            sites,
            tolerance: DEFAULT_TOLERANCE,
            terms: BTreeMap::new(),
        }
    }

    pub fn identity(order: u8, sites: usize) -> Self {
        Self::from(ClockString::identity(order, sites))
    }

    pub fn from_strings(order: u8, sites: usize, strings: impl IntoIterator<Item = ClockString>) -> Result<Self> {
        let mut s = Self::zero(order, sites);
        for t in strings {
            s.push(t)?;
        }
        s.prune();
        Ok(s)
    }

    /// Changes the pruning tolerance and re-canonicalises.
    pub fn with_tolerance(mut self, tol: f64) -> Self {
        self.tolerance = tol.max(0.0);
        self.prune();
        self
    }

    #[inline]
    pub fn order(&self) -> u8 {
        self.order
    }

    #[inline]
    pub fn sites(&self) -> usize {
        self.sites
    }

    #[inline]
    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in canonical order.
    pub fn terms(&self) -> impl Iterator<Item = ClockString> + '_ {
        self.terms
            .iter()
            .map(move |(k, c)| ClockString::from_key(self.order, k, *c))
    }

    /// Coefficient of the identity string.
    pub fn scalar_part(&self) -> Complex64 {
        let key = ClockString::identity(self.order, self.sites).key();
        self.terms.get(&key).copied().unwrap_or_default()
    }

    fn push(&mut self, t: ClockString) -> Result<()> {
        if t.order() != self.order || t.sites() != self.sites {
            return Err(Error::dims(format!(
                "string (Q={}, N={}) added to sum (Q={}, N={})",
                t.order(),
                t.sites(),
                self.order,
                self.sites
            )));
        }
        *self.terms.entry(t.key()).or_default() += t.coeff();
        Ok(())
    }

    fn prune(&mut self) {
        let tol = self.tolerance;
        self.terms.retain(|_, c| c.norm() > tol);
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.order != other.order || self.sites != other.sites {
            return Err(Error::dims(format!(
                "(Q={}, N={}) vs (Q={}, N={})",
                self.order, self.sites, other.order, other.sites
            )));
        }
        Ok(())
    }

    fn combine(&self, other: &Self, sign: f64) -> Result<Self> {
        self.check(other)?;
        let mut out = self.clone();
        out.tolerance = self.tolerance.max(other.tolerance);
        for (k, c) in &other.terms {
            *out.terms.entry(k.clone()).or_default() += c * sign;
        }
        out.prune();
        Ok(out)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.combine(other, 1.0)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.combine(other, -1.0)
    }

    pub fn scale(&self, c: Complex64) -> Self {
        let mut out = self.clone();
        for v in out.terms.values_mut() {
            *v *= c;
        }
        out.prune();
        out
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = Self::zero(self.order, self.sites);
        out.tolerance = self.tolerance.max(other.tolerance);
        for a in self.terms() {
            for b in other.terms() {
                out.push(a.multiply(&b)?)?;
            }
        }
        out.prune();
        Ok(out)
    }

    /// `ab − ba`. Pairs of strings that commute exactly are skipped, so the
    /// result carries no cancellation noise from them.
    pub fn commutator(&self, other: &Self) -> Result<Self> {
        self.bracket(other, -1.0)
    }

    /// `ab + ba`.
    pub fn anticommutator(&self, other: &Self) -> Result<Self> {
        self.bracket(other, 1.0)
    }

    fn bracket(&self, other: &Self, sign: f64) -> Result<Self> {
        self.check(other)?;
        let mut out = Self::zero(self.order, self.sites);
        out.tolerance = self.tolerance.max(other.tolerance);
        for a in self.terms() {
            for b in other.terms() {
                let e = a.commutation_exponent(&b)?;
                // ab = ω^e ba, so ab ± ba = (1 ± ω^{-e}) ab
                let f = if e == 0 {
                    1.0 + sign
                } else if self.order == 2 {
                    1.0 - sign
                } else {
                    let w = super::root_of_unity(self.order, -(e as i64));
                    let ab = a.multiply(&b)?;
                    let c = ab.coeff() * (Complex64::new(1.0, 0.0) + w * sign);
                    out.push(ab.with_coeff(c))?;
                    continue;
                };
                if f != 0.0 {
                    let ab = a.multiply(&b)?;
                    let c = ab.coeff() * f;
                    out.push(ab.with_coeff(c))?;
                }
            }
        }
        out.prune();
        Ok(out)
    }

    /// `ad_a^depth(b) = [a, [a, … [a, b]]]`.
    pub fn nested_commutator(&self, other: &Self, depth: usize) -> Result<Self> {
        if depth == 0 {
            return Err(Error::InvalidArgument("nested commutator depth must be ≥ 1".into()));
        }
        let mut acc = other.clone();
        for _ in 0..depth {
            acc = self.commutator(&acc)?;
        }
        Ok(acc)
    }

    pub fn adjoint(&self) -> Self {
        let mut out = Self::zero(self.order, self.sites);
        out.tolerance = self.tolerance;
        for t in self.terms() {
            out.push(t.adjoint()).expect("same shape");
        }
        out.prune();
        out
    }

    pub fn pow(&self, k: u32) -> Result<Self> {
        let mut acc = Self::identity(self.order, self.sites);
        acc.tolerance = self.tolerance;
        for _ in 0..k {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    pub fn translate(&self, shift: isize) -> Self {
        let mut out = Self::zero(self.order, self.sites);
        out.tolerance = self.tolerance;
        for t in self.terms() {
            out.push(t.translate(shift)).expect("same shape");
        }
        out
    }

    /// Largest coefficient magnitude.
    pub fn max_abs(&self) -> f64 {
        self.terms.values().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Normalised Hilbert–Schmidt norm `‖M‖_F / √dim`, which for clock
    /// strings is just the ℓ² norm of the coefficients.
    pub fn hs_norm(&self) -> f64 {
        self.terms.values().fold(0.0, |acc, c| acc + c.norm_sqr()).sqrt()
    }

    /// Maximum coefficient deviation of `self − other`.
    pub fn distance(&self, other: &Self) -> Result<f64> {
        self.check(other)?;
        let mut d: f64 = 0.0;
        for (k, c) in &self.terms {
            let o = other.terms.get(k).copied().unwrap_or_default();
            d = d.max((c - o).norm());
        }
        for (k, o) in &other.terms {
            if !self.terms.contains_key(k) {
                d = d.max(o.norm());
            }
        }
        Ok(d)
    }

    /// True iff every coefficient of `self − other` is within `tol`.
    pub fn equals(&self, other: &Self, tol: f64) -> bool {
        matches!(self.distance(other), Ok(d) if d <= tol)
    }
}

impl From<ClockString> for OperatorSum {
    fn from(s: ClockString) -> Self {
        let mut out = Self::zero(s.order(), s.sites());
        out.push(s).expect("same shape");
        out.prune();
        out
    }
}

impl fmt::Display for OperatorSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, t) in self.terms().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{t}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{root_of_unity, Pauli};
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn pauli_sum(n: usize, ops: &[(usize, Pauli)]) -> OperatorSum {
        ClockString::pauli(n, ops).into()
    }

    #[test]
    fn h_minus_h_is_empty() {
        let h = pauli_sum(3, &[(0, Pauli::Y), (1, Pauli::X)]);
        assert!(h.add(&h.scale(c(-1.0, 0.0))).unwrap().is_zero());
        assert_eq!(h.scale(c(1.0, 0.0)), h);
    }

    #[test]
    fn duplicates_merge() {
        let a = ClockString::pauli(2, &[(0, Pauli::X)]);
        let s = OperatorSum::from_strings(2, 2, [a.clone(), a.clone().scaled(c(0.0, 1.0))]).unwrap();
        assert_eq!(s.len(), 1);
        assert_eq!(s.terms().next().unwrap().coeff(), c(1.0, 1.0));
    }

    #[test]
    fn equals_respects_tolerance() {
        let h = pauli_sum(2, &[(0, Pauli::Z)]);
        assert!(h.equals(&h, 0.0));
        assert!(!h.equals(&h.scale(c(2.0, 0.0)), 1e-12));
    }

    #[test]
    fn pauli_commutator() {
        let x = pauli_sum(1, &[(0, Pauli::X)]);
        let y = pauli_sum(1, &[(0, Pauli::Y)]);
        let z = pauli_sum(1, &[(0, Pauli::Z)]);
        // [σx, σy] = 2i σz
        assert_eq!(x.commutator(&y).unwrap(), z.scale(c(0.0, 2.0)));
        assert!(x.anticommutator(&y).unwrap().is_zero());
        assert_eq!(x.anticommutator(&x).unwrap(), OperatorSum::identity(2, 1).scale(c(2.0, 0.0)));
    }

    #[test]
    fn clock_bracket_matches_products() {
        let x: OperatorSum = ClockString::clock_x(3, 2, 0).into();
        let z: OperatorSum = ClockString::clock_z(3, 2, 0).into();
        let direct = x.mul(&z).unwrap().sub(&z.mul(&x).unwrap()).unwrap();
        assert!(x.commutator(&z).unwrap().equals(&direct, 1e-15));
        let direct = x.mul(&z).unwrap().add(&z.mul(&x).unwrap()).unwrap();
        assert!(x.anticommutator(&z).unwrap().equals(&direct, 1e-15));
    }

    #[test]
    fn nested_depth_one_is_commutator() {
        let a = pauli_sum(2, &[(0, Pauli::Y), (1, Pauli::X)]);
        let b = pauli_sum(2, &[(1, Pauli::Z)]);
        assert_eq!(a.nested_commutator(&b, 1).unwrap(), a.commutator(&b).unwrap());
        assert!(a.nested_commutator(&a, 2).unwrap().is_zero());
        assert!(a.nested_commutator(&b, 0).is_err());
    }

    #[test]
    fn adjoint_of_omega_z() {
        let w = root_of_unity(3, 1);
        let s: OperatorSum = ClockString::clock_z(3, 1, 0).scaled(w).into();
        let expect: OperatorSum = ClockString::identity(3, 1).with_site(0, 0, 2).scaled(w.conj()).into();
        assert!(s.adjoint().equals(&expect, 1e-15));
    }

    #[test]
    fn hs_norm_is_coefficient_norm() {
        let s = OperatorSum::from_strings(
            2,
            2,
            [
                ClockString::pauli(2, &[(0, Pauli::X)]).scaled(c(3.0, 0.0)),
                ClockString::pauli(2, &[(1, Pauli::Z)]).scaled(c(0.0, 4.0)),
            ],
        )
        .unwrap();
        assert!((s.hs_norm() - 5.0).abs() < 1e-15);
    }

    #[test]
    fn translation_by_n_is_identity() {
        let h = pauli_sum(5, &[(0, Pauli::Y), (1, Pauli::X), (2, Pauli::X)]);
        assert_eq!(h.translate(5), h);
        assert_eq!(h.translate(2), pauli_sum(5, &[(2, Pauli::Y), (3, Pauli::X), (4, Pauli::X)]));
    }

    fn arb_string(q: u8, n: usize) -> impl Strategy<Value = ClockString> {
        (
            proptest::collection::vec(0..q, n),
            proptest::collection::vec(0..q, n),
            -2.0f64..2.0,
            -2.0f64..2.0,
        )
            .prop_map(move |(x, z, re, im)| ClockString::new(q, x, z, c(re, im)).unwrap())
    }

    fn arb_sum(q: u8, n: usize) -> impl Strategy<Value = OperatorSum> {
        proptest::collection::vec(arb_string(q, n), 1..4)
            .prop_map(move |v| OperatorSum::from_strings(q, n, v).unwrap())
    }

    proptest! {
        #[test]
        fn associativity((a, b, d) in (2u8..5).prop_flat_map(|q| (arb_string(q, 3), arb_string(q, 3), arb_string(q, 3)))) {
            let l = a.multiply(&b).unwrap().multiply(&d).unwrap();
            let r = a.multiply(&b.multiply(&d).unwrap()).unwrap();
            prop_assert_eq!(l.x_exponents(), r.x_exponents());
            prop_assert_eq!(l.z_exponents(), r.z_exponents());
            prop_assert!((l.coeff() - r.coeff()).norm() <= 1e-12 * (1.0 + l.coeff().norm()));
        }

        #[test]
        fn adjoint_is_an_involution(s in (2u8..6).prop_flat_map(|q| arb_sum(q, 3))) {
            prop_assert!(s.adjoint().adjoint().equals(&s, 1e-14));
        }

        #[test]
        fn adjoint_reverses_products(a in arb_string(3, 2), b in arb_string(3, 2)) {
            let l: OperatorSum = a.multiply(&b).unwrap().adjoint().into();
            let r: OperatorSum = b.adjoint().multiply(&a.adjoint()).unwrap().into();
            prop_assert!(l.equals(&r, 1e-12));
        }

        #[test]
        fn jacobi(trip in (2u8..4).prop_flat_map(|q| (arb_sum(q, 3), arb_sum(q, 3), arb_sum(q, 3)))) {
            let (a, b, d) = trip;
            let t1 = a.commutator(&b.commutator(&d).unwrap()).unwrap();
            let t2 = b.commutator(&d.commutator(&a).unwrap()).unwrap();
            let t3 = d.commutator(&a.commutator(&b).unwrap()).unwrap();
            let sum = t1.add(&t2).unwrap().add(&t3).unwrap();
            prop_assert!(sum.max_abs() <= 1e-12);
        }

        #[test]
        fn addition_commutes(pair in (2u8..4).prop_flat_map(|q| (arb_sum(q, 2), arb_sum(q, 2)))) {
            let (a, b) = pair;
            prop_assert_eq!(a.add(&b).unwrap(), b.add(&a).unwrap());
        }
    }
}
