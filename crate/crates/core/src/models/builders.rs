use alloc::format;
use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use super::spec::{Boundary, ModelKind, ModelSpec};
use crate::algebra::{chiral_weight, root_of_unity, ClockString, OperatorSum, Pauli};
use crate::error::{Error, Result};

fn re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn check_index(spec: &ModelSpec, j: usize) -> Result<()> {
    let n = spec.generators();
    if j == 0 || j > n {
        return Err(Error::IndexOutOfRange { index: j, max: n });
    }
    Ok(())
}

/// `σ^y_j σ^x_{j+1} ⋯ σ^x_{j+r}` (0-based start site, wraps).
fn fendley_string(l: usize, r: usize, start: usize) -> ClockString {
    let mut ops = Vec::with_capacity(r + 1);
    ops.push((start % l, Pauli::Y));
    for k in 1..=r {
        ops.push(((start + k) % l, Pauli::X));
    }
    ClockString::pauli(l, &ops)
}

/// `σ^x_j ⋯ σ^x_{j+r-1} σ^y_{j+r}`.
fn dual_string(l: usize, r: usize, start: usize) -> ClockString {
    let mut ops = Vec::with_capacity(r + 1);
    for k in 0..r {
        ops.push(((start + k) % l, Pauli::X));
    }
    ops.push(((start + r) % l, Pauli::Y));
    ClockString::pauli(l, &ops)
}

fn generator_string(spec: &ModelSpec, j: usize) -> Result<ClockString> {
    spec.validate()?;
    check_index(spec, j)?;
    let l = spec.l;
    let s = j - 1;
    Ok(match spec.kind {
        ModelKind::Tfim => {
            let k = s / 2;
            if s % 2 == 0 {
                ClockString::pauli(l, &[(k, Pauli::Z)])
            } else {
                ClockString::pauli(l, &[(k, Pauli::X), ((k + 1) % l, Pauli::X)])
            }
        }
        ModelKind::Ff8v | ModelKind::Fendley => fendley_string(l, spec.r, s),
        ModelKind::FendleyDual => dual_string(l, spec.r, s),
        ModelKind::FendleyMixed => {
            return Err(Error::Unsupported(
                "the mixed Fendley chain is a sum of two representations; use FENDLEY or FENDLEY_DUAL".into(),
            ))
        }
        ModelKind::ChiralPotts => {
            let k = s / 2;
            let id = ClockString::identity(spec.q, l);
            if s % 2 == 0 {
                id.with_site(k, 0, 1)
            } else {
                id.with_site(k, 1, 0).with_site(k + 1, spec.q - 1, 0)
            }
        }
        ModelKind::Cpfm => {
            let mut t = ClockString::identity(spec.q, l);
            for k in 0..spec.r {
                t = t.with_site(s + k, 1, 0);
            }
            t.with_site(s + spec.r, 0, 1)
        }
    })
}

/// The generator `h_j` (1-based, `1 ≤ j ≤ N`).
pub fn gca_generator(spec: &ModelSpec, j: usize) -> Result<OperatorSum> {
    Ok(generator_string(spec, j)?.into())
}

/// The dual generator `h̃_{[j, j+r]} = σ^x_j ⋯ σ^x_{j+r-1} σ^y_{j+r}`. For
/// the dual chain itself this returns the original Fendley generator.
pub fn dual_generator(spec: &ModelSpec, j: usize) -> Result<OperatorSum> {
    spec.validate()?;
    check_index(spec, j)?;
    match spec.kind {
        ModelKind::Ff8v | ModelKind::Fendley | ModelKind::FendleyMixed => Ok(dual_string(spec.l, spec.r, j - 1).into()),
        ModelKind::FendleyDual => Ok(fendley_string(spec.l, spec.r, j - 1).into()),
        k => Err(Error::Unsupported(format!("{k} has no dual representation here"))),
    }
}

/// Temperley–Lieb generator. For `Q = 2`, `e_j = (1 + h_j)/√2` and `k` is
/// ignored; otherwise `e_j^(k) = Q^{-1/2} Σ_{a=1}^{Q} (ω^k h_j)^a` with
/// `1 ≤ k ≤ Q − 1`.
pub fn tl_generator(spec: &ModelSpec, j: usize, k: Option<u8>) -> Result<OperatorSum> {
    let h = generator_string(spec, j)?;
    let q = spec.q;
    if q == 2 {
        let id = ClockString::identity(2, spec.l);
        let s = OperatorSum::from_strings(2, spec.l, [id, h])?;
        return Ok(s.scale(re(core::f64::consts::FRAC_1_SQRT_2)));
    }
    let k = k.ok_or_else(|| Error::InvalidArgument(format!("Q = {q} needs a TL label k")))?;
    if k == 0 || k >= q {
        return Err(Error::InvalidArgument(format!("TL label k = {k} outside 1..={}", q - 1)));
    }
    let wk = root_of_unity(q, k as i64);
    let mut terms = Vec::with_capacity(q as usize);
    let mut power = ClockString::identity(q, spec.l);
    let mut coeff = re(1.0);
    for _ in 1..=q {
        power = power.multiply(&h)?;
        coeff *= wk;
        terms.push(power.clone().scaled(coeff));
    }
    Ok(OperatorSum::from_strings(q, spec.l, terms)?.scale(re(1.0 / (q as f64).sqrt())))
}

/// `Σ_{a=1}^{Q-1} h^a / (1 − ω^{-a})`; just `h/2` for `Q = 2`.
fn chiral_sum(h: &ClockString) -> Result<OperatorSum> {
    let q = h.order();
    let mut terms = Vec::with_capacity(q as usize - 1);
    let mut power = ClockString::identity(q, h.sites());
    for a in 1..q {
        power = power.multiply(h)?;
        terms.push(power.clone().scaled(chiral_weight(q, a as i64)));
    }
    OperatorSum::from_strings(q, h.sites(), terms)
}

/// Generator indices (1-based) entering `A^(s)`: `(r+1)(i−1) + 1 + s`.
fn onsager_indices(spec: &ModelSpec, s: usize) -> Vec<usize> {
    let period = spec.r + 1;
    (0..spec.generators() / period).map(|i| period * i + 1 + s).collect()
}

/// `A^(s) = Σ_i h_{(r+1)(i−1)+1+s}` for spin chains. For clock chains each
/// `h` is replaced by `(4/Q) Σ_a h^a / (1 − ω^{-a})`, which reduces to `h`
/// at `Q = 2` and satisfies Dolan–Grady with coefficient 16.
pub fn onsager_generator(spec: &ModelSpec, s: usize) -> Result<OperatorSum> {
    spec.validate()?;
    spec.check_onsager_divisibility()?;
    if s > spec.r {
        return Err(Error::InvalidArgument(format!("s = {s} exceeds r = {}", spec.r)));
    }
    let mut acc = OperatorSum::zero(spec.q, spec.l);
    for j in onsager_indices(spec, s) {
        let h = generator_string(spec, j)?;
        let term = if spec.q == 2 {
            OperatorSum::from(h)
        } else {
            chiral_sum(&h)?.scale(re(4.0 / spec.q as f64))
        };
        acc = acc.add(&term)?;
    }
    Ok(acc)
}

/// All `A^(0), …, A^(r)`.
pub fn onsager_generators(spec: &ModelSpec) -> Result<Vec<OperatorSum>> {
    (0..=spec.r).map(|s| onsager_generator(spec, s)).collect()
}

/// Prefactor of the commuting charges `H^(s,t)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum ChargeConvention {
    /// `i/2`: the normalisation under which `Q_3 = −4 Σ H^(s,t) + const`.
    #[default]
    Half,
    /// `i/4`.
    Quarter,
}

impl ChargeConvention {
    fn prefactor(self) -> Complex64 {
        match self {
            ChargeConvention::Half => Complex64::new(0.0, 0.5),
            ChargeConvention::Quarter => Complex64::new(0.0, 0.25),
        }
    }
}

pub fn commuting_charge(spec: &ModelSpec, s: usize, t: usize) -> Result<OperatorSum> {
    commuting_charge_with(spec, s, t, ChargeConvention::Half)
}

/// `H^(s,t) = c Σ_i (h_{a_i} h_{b_i} + h_{b_i} h_{a_{i+1}})` where `a_i`,
/// `b_i` run over the generators in `A^(s)`, `A^(t)` and `s < t`. It commutes
/// with both `A^(s)` and `A^(t)`.
pub fn commuting_charge_with(spec: &ModelSpec, s: usize, t: usize, conv: ChargeConvention) -> Result<OperatorSum> {
    spec.validate()?;
    spec.check_onsager_divisibility()?;
    if !(s < t && t <= spec.r) {
        return Err(Error::InvalidArgument(format!("need 0 ≤ s < t ≤ r, got ({s}, {t})")));
    }
    if spec.q != 2 {
        return Err(Error::Unsupported("commuting charges are only defined for Q = 2".into()));
    }
    let a = onsager_indices(spec, s);
    let b = onsager_indices(spec, t);
    let m = a.len();
    let mut terms = Vec::with_capacity(2 * m);
    for i in 0..m {
        let ha = generator_string(spec, a[i])?;
        let hb = generator_string(spec, b[i])?;
        let ha_next = generator_string(spec, a[(i + 1) % m])?;
        terms.push(ha.multiply(&hb)?);
        terms.push(hb.multiply(&ha_next)?);
    }
    Ok(OperatorSum::from_strings(2, spec.l, terms)?.scale(conv.prefactor()))
}

/// Generator indices (1-based) whose support does not wrap around the
/// chain, i.e. those present with open boundaries.
fn open_terms(spec: &ModelSpec) -> usize {
    match (spec.boundary, spec.kind.doubled()) {
        (Boundary::Periodic, _) => spec.generators(),
        (Boundary::Open, true) => spec.generators() - 1,
        (Boundary::Open, false) => spec.l - spec.r,
    }
}

pub fn hamiltonian(spec: &ModelSpec) -> Result<OperatorSum> {
    spec.validate()?;
    let count = open_terms(spec);
    let (q, l) = (spec.q, spec.l);
    let mut acc = OperatorSum::zero(q, l);
    match spec.kind {
        ModelKind::Tfim | ModelKind::Ff8v => {
            for j in 1..=count {
                let w = spec.coupling(j - 1) * if j % 2 == 1 { spec.lambda } else { 1.0 };
                acc = acc.add(&OperatorSum::from(generator_string(spec, j)?.scaled(re(w))))?;
            }
        }
        ModelKind::Fendley | ModelKind::FendleyDual => {
            for j in 1..=count {
                let w = spec.coupling(j - 1);
                acc = acc.add(&OperatorSum::from(generator_string(spec, j)?.scaled(re(w))))?;
            }
        }
        ModelKind::FendleyMixed => {
            let (c, s) = (spec.theta.cos(), spec.theta.sin());
            for j in 1..=count {
                let w = spec.coupling(j - 1);
                let h = fendley_string(l, spec.r, j - 1).scaled(re(w * c));
                let hd = dual_string(l, spec.r, j - 1).scaled(re(w * s));
                acc = acc.add(&OperatorSum::from_strings(2, l, [h, hd])?)?;
            }
        }
        ModelKind::ChiralPotts => {
            for j in 1..=count {
                let w = spec.coupling(j - 1) * if j % 2 == 1 { spec.lambda } else { 1.0 };
                acc = acc.add(&chiral_sum(&generator_string(spec, j)?)?.scale(re(w)))?;
            }
        }
        ModelKind::Cpfm => {
            for j in 1..=count {
                let w = spec.coupling(j - 1);
                let h = generator_string(spec, j)?;
                let term = match spec.boundary {
                    Boundary::Periodic => chiral_sum(&h)?.scale(re(w)),
                    // the open chain keeps only the first power and is not Hermitian
                    Boundary::Open => OperatorSum::from(h.scaled(re(w))),
                };
                acc = acc.add(&term)?;
            }
        }
    }
    Ok(acc)
}

/// Clifford transformation fixing `σ^x_j` and sending
/// `σ^y_j ↦ σ^x_{j-r} ⋯ σ^x_{j-1} σ^y_j σ^x_{j+1} ⋯ σ^x_{j+r}`, applied as an
/// algebra homomorphism (`Z_j ↦ Z_j Π_{0<|k−j|≤r} X_k`).
pub fn clifford_transform(a: &OperatorSum, r: usize) -> Result<OperatorSum> {
    if a.order() != 2 {
        return Err(Error::Unsupported("the Clifford transformation is defined for Q = 2".into()));
    }
    let n = a.sites();
    if n < 2 * r + 1 {
        return Err(Error::InvalidArgument(format!(
            "Clifford transformation with r = {r} needs at least {} sites, got {n}",
            2 * r + 1
        )));
    }
    let images: Vec<ClockString> = (0..n)
        .map(|j| {
            let mut z = ClockString::identity(2, n).with_site(j, 0, 1);
            for d in 1..=r {
                z = z.with_site((j + d) % n, 1, 0).with_site((j + n - d) % n, 1, 0);
            }
            z
        })
        .collect();
    let mut out = Vec::with_capacity(a.len());
    for t in a.terms() {
        let mut img = ClockString::identity(2, n).scaled(t.coeff());
        for j in 0..n {
            if t.x_exponents()[j] == 1 {
                img = img.multiply(&ClockString::identity(2, n).with_site(j, 1, 0))?;
            }
            if t.z_exponents()[j] == 1 {
                img = img.multiply(&images[j])?;
            }
        }
        out.push(img);
    }
    OperatorSum::from_strings(2, n, out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::to_dense;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn pauli(n: usize, ops: &[(usize, Pauli)]) -> OperatorSum {
        ClockString::pauli(n, ops).into()
    }

    #[test]
    fn tfim_generators() {
        let m = ModelSpec::tfim(4, 1.0);
        assert_eq!(gca_generator(&m, 1).unwrap(), pauli(4, &[(0, Pauli::Z)]));
        assert_eq!(gca_generator(&m, 2).unwrap(), pauli(4, &[(0, Pauli::X), (1, Pauli::X)]));
        assert_eq!(gca_generator(&m, 8).unwrap(), pauli(4, &[(3, Pauli::X), (0, Pauli::X)]));
        assert!(matches!(gca_generator(&m, 9), Err(Error::IndexOutOfRange { .. })));
        assert!(gca_generator(&m, 0).is_err());
        // translation by one generator pair is translation by one site
        assert_eq!(gca_generator(&m, 1).unwrap().translate(2), gca_generator(&m, 5).unwrap());
    }

    #[test]
    fn fendley_and_clock_generators() {
        let f = ModelSpec::fendley(6, 2);
        assert_eq!(
            gca_generator(&f, 1).unwrap(),
            pauli(6, &[(0, Pauli::Y), (1, Pauli::X), (2, Pauli::X)])
        );
        assert_eq!(
            dual_generator(&f, 1).unwrap(),
            pauli(6, &[(0, Pauli::X), (1, Pauli::X), (2, Pauli::Y)])
        );
        assert_eq!(dual_generator(&ModelSpec::ff8v(4), 1).unwrap(), pauli(4, &[(0, Pauli::X), (1, Pauli::Y)]));
        let cp = ModelSpec::cpfm(6, 2, 3);
        let h = gca_generator(&cp, 1).unwrap().terms().next().unwrap();
        assert_eq!(h.x_exponents(), &[1, 1, 0, 0, 0, 0]);
        assert_eq!(h.z_exponents(), &[0, 0, 1, 0, 0, 0]);
        assert_eq!(h.coeff(), c(1.0, 0.0));
        assert!(gca_generator(&ModelSpec::fendley_mixed(6, 2, 0.3), 1).is_err());
    }

    #[test]
    fn generator_powers_close() {
        for spec in [ModelSpec::cpfm(6, 2, 3), ModelSpec::chiral_potts(3, 4, 1.0), ModelSpec::fendley(5, 3)] {
            for j in 1..=spec.generators() {
                let h = gca_generator(&spec, j).unwrap();
                assert!(h.pow(spec.q as u32).unwrap().equals(&OperatorSum::identity(spec.q, spec.l), 1e-14));
            }
        }
    }

    #[test]
    fn tfim_hamiltonian_doubles_bond_at_l2() {
        let h = hamiltonian(&ModelSpec::tfim(2, 1.0)).unwrap();
        let expect = OperatorSum::from_strings(
            2,
            2,
            [
                ClockString::pauli(2, &[(0, Pauli::Z)]),
                ClockString::pauli(2, &[(1, Pauli::Z)]),
                ClockString::pauli(2, &[(0, Pauli::X), (1, Pauli::X)]).scaled(c(2.0, 0.0)),
            ],
        )
        .unwrap();
        assert_eq!(h, expect);
    }

    #[test]
    fn homogeneous_fendley_is_translation_invariant() {
        let h = hamiltonian(&ModelSpec::fendley(6, 2)).unwrap();
        assert_eq!(h.len(), 6);
        assert_eq!(h.translate(1), h);
        let open = hamiltonian(&ModelSpec::fendley(6, 2).open()).unwrap();
        assert_eq!(open.len(), 4);
    }

    #[test]
    fn tl_generators() {
        let e = tl_generator(&ModelSpec::tfim(3, 1.0), 1, None).unwrap();
        let expect = OperatorSum::from_strings(2, 3, [ClockString::identity(2, 3), ClockString::pauli(3, &[(0, Pauli::Z)])])
            .unwrap()
            .scale(c(core::f64::consts::FRAC_1_SQRT_2, 0.0));
        assert!(e.equals(&expect, 1e-15));
        // √2 e − 1 = h
        let h = e.scale(c(2f64.sqrt(), 0.0)).sub(&OperatorSum::identity(2, 3)).unwrap();
        assert!(h.equals(&gca_generator(&ModelSpec::tfim(3, 1.0), 1).unwrap(), 1e-12));
        let cp = ModelSpec::cpfm(3, 2, 3);
        assert!(tl_generator(&cp, 1, None).is_err());
        assert!(tl_generator(&cp, 1, Some(3)).is_err());
    }

    #[test]
    fn coupled_tl_beta_is_sqrt_q_densely() {
        // dense oracle, independent of the symbolic product
        let cp = ModelSpec::cpfm(3, 2, 3);
        let e1 = to_dense(&tl_generator(&cp, 1, Some(1)).unwrap()).unwrap();
        let e2 = to_dense(&tl_generator(&cp, 1, Some(2)).unwrap()).unwrap();
        let sq = e1.matmul(&e1).unwrap();
        assert!(sq.distance(&e1.scale(c(3f64.sqrt(), 0.0))).unwrap() < 1e-12);
        assert!(e1.matmul(&e2).unwrap().max_abs() < 1e-12);
    }

    #[test]
    fn onsager_generators_match_examples() {
        let a0 = onsager_generator(&ModelSpec::tfim(4, 1.0), 0).unwrap();
        let expect = OperatorSum::from_strings(2, 4, (0..4).map(|k| ClockString::pauli(4, &[(k, Pauli::Z)]))).unwrap();
        assert_eq!(a0, expect);
        let a1 = onsager_generator(&ModelSpec::ff8v(4), 1).unwrap();
        let expect = OperatorSum::from_strings(
            2,
            4,
            [
                ClockString::pauli(4, &[(1, Pauli::Y), (2, Pauli::X)]),
                ClockString::pauli(4, &[(3, Pauli::Y), (0, Pauli::X)]),
            ],
        )
        .unwrap();
        assert_eq!(a1, expect);
        for s in 0..3 {
            let a = onsager_generator(&ModelSpec::fendley(6, 2), s).unwrap();
            assert_eq!(a.len(), 2);
            assert!(a.adjoint().equals(&a, 1e-15));
        }
        assert!(onsager_generator(&ModelSpec::fendley(7, 2), 0).is_err());
        assert!(onsager_generator(&ModelSpec::fendley(6, 2), 3).is_err());
    }

    #[test]
    fn cpfm_hamiltonian_is_sum_of_generators() {
        let spec = ModelSpec::cpfm(6, 2, 3);
        let h = hamiltonian(&spec).unwrap();
        assert!(h.adjoint().equals(&h, 1e-14));
        let mut sum = OperatorSum::zero(3, 6);
        for a in onsager_generators(&spec).unwrap() {
            sum = sum.add(&a).unwrap();
        }
        assert!(sum.scale(c(0.75, 0.0)).equals(&h, 1e-14));
    }

    #[test]
    fn tfim_spin_current() {
        let h01 = commuting_charge(&ModelSpec::tfim(4, 1.0), 0, 1).unwrap();
        let mut terms = Vec::new();
        for j in 0..4 {
            terms.push(ClockString::pauli(4, &[(j, Pauli::X), ((j + 1) % 4, Pauli::Y)]).scaled(c(0.5, 0.0)));
            terms.push(ClockString::pauli(4, &[(j, Pauli::Y), ((j + 1) % 4, Pauli::X)]).scaled(c(-0.5, 0.0)));
        }
        let expect = OperatorSum::from_strings(2, 4, terms).unwrap();
        assert!(h01.equals(&expect, 1e-15));
        let quarter = commuting_charge_with(&ModelSpec::tfim(4, 1.0), 0, 1, ChargeConvention::Quarter).unwrap();
        assert!(quarter.scale(c(2.0, 0.0)).equals(&h01, 1e-15));
        assert!(commuting_charge(&ModelSpec::cpfm(6, 2, 3), 0, 1).is_err());
        assert!(commuting_charge(&ModelSpec::fendley(6, 2), 1, 1).is_err());
    }

    #[test]
    fn clifford_maps_generator_to_dual() {
        let f = ModelSpec::fendley(6, 2);
        for j in 1..=6 {
            let img = clifford_transform(&gca_generator(&f, j).unwrap(), 2).unwrap();
            // h_[j, j+r] ↦ h̃_[j−r, j]
            let k = (j + 6 - 2 - 1) % 6 + 1;
            assert_eq!(img, dual_generator(&f, k).unwrap());
        }
        let x = pauli(6, &[(3, Pauli::X)]);
        assert_eq!(clifford_transform(&x, 2).unwrap(), x);
        assert!(clifford_transform(&OperatorSum::identity(3, 6), 1).is_err());
        assert!(clifford_transform(&x, 3).is_err());
    }
}
