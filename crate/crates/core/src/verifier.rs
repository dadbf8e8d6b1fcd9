//! Relation-by-relation verification suites. Every relation instance becomes
//! one [`VerificationReport`]; the command line front end simply runs these.
//!
//! Residuals are Frobenius norms of the symbolic difference operator, i.e.
//! `‖D‖_HS · √(Q^L)`, so they are directly comparable with dense checks
//! while never building a matrix.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::algebra::{root_of_unity, OperatorSum};
use crate::error::{Error, Result};
use crate::models::{
    clifford_transform, commuting_charge, dual_generator, gca_generator, hamiltonian, onsager_generators,
    onsager_tower, tl_generator, ModelKind, ModelSpec,
};
use crate::report::VerificationReport;

/// Default tolerance for all symbolic suites.
pub const TOLERANCE: f64 = 1e-10;
/// Tolerance on the measured loop weight `β`.
pub const BETA_TOLERANCE: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Suite {
    Gca,
    Gtl,
    Onsager,
    Charges,
    Duality,
}

impl Suite {
    pub const ALL: [Suite; 5] = [Suite::Gca, Suite::Gtl, Suite::Onsager, Suite::Charges, Suite::Duality];

    pub fn as_str(self) -> &'static str {
        match self {
            Suite::Gca => "gca",
            Suite::Gtl => "gtl",
            Suite::Onsager => "onsager",
            Suite::Charges => "charges",
            Suite::Duality => "duality",
        }
    }

    /// Whether the suite's preconditions hold for `spec`.
    pub fn applies_to(self, spec: &ModelSpec) -> bool {
        let mixed = spec.kind == ModelKind::FendleyMixed;
        match self {
            Suite::Gca | Suite::Gtl => !mixed,
            Suite::Onsager => !mixed && spec.check_onsager_divisibility().is_ok(),
            Suite::Charges => !mixed && spec.q == 2 && spec.check_onsager_divisibility().is_ok(),
            Suite::Duality => {
                matches!(
                    spec.kind,
                    ModelKind::Ff8v | ModelKind::Fendley | ModelKind::FendleyDual | ModelKind::FendleyMixed
                ) && spec.l > 2 * spec.r
            }
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.as_str() == s)
            .ok_or_else(|| Error::Configuration(format!("unknown suite `{s}`")))
    }
}

/// Runs one suite. `depth` is only used by the Onsager tower.
pub fn run_suite(spec: &ModelSpec, suite: Suite, depth: usize) -> Result<Vec<VerificationReport>> {
    match suite {
        Suite::Gca => verify_gca(spec),
        Suite::Gtl => verify_gtl(spec),
        Suite::Onsager => verify_onsager(spec, depth),
        Suite::Charges => verify_commuting_charges(spec),
        Suite::Duality => verify_duality(spec),
    }
}

/// Every applicable suite, in [`Suite::ALL`] order.
pub fn verify_all(spec: &ModelSpec, depth: usize) -> Result<Vec<VerificationReport>> {
    let mut out = Vec::new();
    for suite in Suite::ALL {
        if suite.applies_to(spec) {
            out.extend(run_suite(spec, suite, depth)?);
        }
    }
    Ok(out)
}

fn frobenius(d: &OperatorSum) -> f64 {
    d.hs_norm() * (d.order() as f64).powf(d.sites() as f64 / 2.0)
}

fn residual(lhs: &OperatorSum, rhs: &OperatorSum) -> Result<f64> {
    Ok(frobenius(&lhs.sub(rhs)?))
}

fn tagged(r: VerificationReport, spec: &ModelSpec) -> VerificationReport {
    r.param("model", spec.kind).param("L", spec.l).param("r", spec.r).param("Q", spec.q)
}

fn wrap(j: i64, n: usize) -> usize {
    (j - 1).rem_euclid(n as i64) as usize + 1
}

fn generators(spec: &ModelSpec) -> Result<Vec<OperatorSum>> {
    (1..=spec.generators()).map(|j| gca_generator(spec, j)).collect()
}

/// Generalised Clifford relations for `spec`'s generators.
pub fn verify_gca(spec: &ModelSpec) -> Result<Vec<VerificationReport>> {
    spec.validate()?;
    let out = verify_gca_generators(&generators(spec)?, spec.r, spec.exchange_exponent())?;
    Ok(out.into_iter().map(|r| tagged(r, spec)).collect())
}

/// The same relations for an arbitrary periodic list `h_1 … h_N`: for each
/// `j` and `1 ≤ m ≤ ⌊N/2⌋` one line, ω-exchange with exponent `exchange`
/// for `m ≤ r` and commutation otherwise, then `h_j^Q = 1` for each `j`.
pub fn verify_gca_generators(gens: &[OperatorSum], r: usize, exchange: u8) -> Result<Vec<VerificationReport>> {
    let n = gens.len();
    let Some(first) = gens.first() else {
        return Ok(Vec::new());
    };
    let q = first.order();
    let phase = root_of_unity(q, exchange as i64);
    let mut out = Vec::with_capacity(n * (n / 2 + 1));
    for j in 1..=n {
        for m in 1..=n / 2 {
            let k = wrap((j + m) as i64, n);
            let (a, b) = (&gens[j - 1], &gens[k - 1]);
            let ab = a.mul(b)?;
            let ba = b.mul(a)?;
            let (name, anchor, rhs) = if m <= r {
                ("exchange", "gca-exchange", ba.scale(phase))
            } else {
                ("commute", "gca-commute", ba)
            };
            out.push(
                VerificationReport::new("gca", name, anchor, residual(&ab, &rhs)?, TOLERANCE)
                    .param("j", j)
                    .param("m", m),
            );
        }
    }
    for (i, h) in gens.iter().enumerate() {
        let id = OperatorSum::identity(q, h.sites());
        out.push(
            VerificationReport::new("gca", "order", "gca-order", residual(&h.pow(q as u32)?, &id)?, TOLERANCE)
                .param("j", i + 1),
        );
    }
    Ok(out)
}

/// `β = tr(e²) / tr(e)`, read off the identity components.
fn measured_beta(e: &OperatorSum, e2: &OperatorSum) -> Option<f64> {
    let t = e.scalar_part();
    (t.norm() > 0.0).then(|| (e2.scalar_part() / t).re)
}

/// Temperley–Lieb relations. For `Q = 2` the single family `e_j = (1+h_j)/√2`
/// is checked, including the neighbour anticommutator
/// `{e_j, e_{j+m}} = √2 (e_j + e_{j+m}) − 1` (the unit term is forced: with
/// `h_j h_{j+m} = −h_{j+m} h_j` the left side has identity component 1, the
/// bracket alone 2). For `Q > 2` every
/// pair of labels `k, l` of the coupled family, plus orthogonality of
/// different labels on the same site.
pub fn verify_gtl(spec: &ModelSpec) -> Result<Vec<VerificationReport>> {
    spec.validate()?;
    let n = spec.generators();
    let q = spec.q;
    let labels: Vec<u8> = if q == 2 { alloc::vec![1] } else { (1..q).collect() };
    let mut e: Vec<Vec<OperatorSum>> = Vec::with_capacity(labels.len());
    for &k in &labels {
        let lab = (q > 2).then_some(k);
        e.push((1..=n).map(|j| tl_generator(spec, j, lab)).collect::<Result<_>>()?);
    }
    let beta = (q as f64).sqrt();
    let mut out = Vec::new();
    let mut worst_beta = 0.0f64;
    let mut measured = f64::NAN;
    for (ki, &k) in labels.iter().enumerate() {
        for j in 1..=n {
            let ej = &e[ki][j - 1];
            let e2 = ej.mul(ej)?;
            let b = measured_beta(ej, &e2).unwrap_or(f64::NAN);
            if (b - beta).abs() >= worst_beta || b.is_nan() {
                worst_beta = (b - beta).abs();
                measured = b;
            }
            out.push(
                VerificationReport::new("gtl", "square", "gtl-square", residual(&e2, &ej.scale(c(beta)))?, TOLERANCE)
                    .param("j", j)
                    .param("k", k),
            );
        }
    }
    out.push(
        VerificationReport::new("gtl", "beta", "gtl-loop-weight", worst_beta, BETA_TOLERANCE)
            .param("beta", format!("{measured:.15}"))
            .param("expected", format!("{beta:.15}")),
    );
    for (ki, &k) in labels.iter().enumerate() {
        for (li, &l) in labels.iter().enumerate() {
            for j in 1..=n {
                let ej = &e[ki][j - 1];
                for m in 1..=spec.r {
                    for (sign, jm) in [("+", j as i64 + m as i64), ("-", j as i64 - m as i64)] {
                        let other = &e[li][wrap(jm, n) - 1];
                        let lhs = ej.mul(other)?.mul(ej)?;
                        out.push(
                            VerificationReport::new("gtl", "sandwich", "gtl-sandwich", residual(&lhs, ej)?, TOLERANCE)
                                .param("j", j)
                                .param("m", format!("{sign}{m}"))
                                .param("k", k)
                                .param("l", l),
                        );
                    }
                }
                for m in spec.r + 1..=n / 2 {
                    let other = &e[li][wrap((j + m) as i64, n) - 1];
                    let res = residual(&ej.mul(other)?, &other.mul(ej)?)?;
                    out.push(
                        VerificationReport::new("gtl", "commute", "gtl-commute", res, TOLERANCE)
                            .param("j", j)
                            .param("m", m)
                            .param("k", k)
                            .param("l", l),
                    );
                }
                if k != l {
                    let prod = ej.mul(&e[li][j - 1])?;
                    out.push(
                        VerificationReport::new("gtl", "orthogonal", "coupled-gtl-orthogonal", frobenius(&prod), TOLERANCE)
                            .param("j", j)
                            .param("k", k)
                            .param("l", l),
                    );
                }
            }
        }
    }
    if q == 2 {
        let e = &e[0];
        let sqrt2 = c(core::f64::consts::SQRT_2);
        for j in 1..=n {
            for m in 1..=spec.r {
                let (a, b) = (&e[j - 1], &e[wrap((j + m) as i64, n) - 1]);
                let rhs = a.add(b)?.scale(sqrt2).sub(&OperatorSum::identity(2, spec.l))?;
                let res = residual(&a.anticommutator(b)?, &rhs)?;
                out.push(
                    VerificationReport::new("gtl", "anticommutator", "gtl-anticommutator", res, TOLERANCE)
                        .param("j", j)
                        .param("m", m),
                );
            }
        }
    }
    Ok(out.into_iter().map(|r| tagged(r, spec)).collect())
}

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// Dolan–Grady relations for all ordered pairs of Onsager generators, then,
/// for each unordered pair `s < t` and `depth ≥ 1`, the Onsager tower they
/// generate and (for `Q = 2`) commutation of `H^(s,t)` with every tower
/// element.
pub fn verify_onsager(spec: &ModelSpec, depth: usize) -> Result<Vec<VerificationReport>> {
    spec.validate()?;
    spec.check_onsager_divisibility()?;
    let a = onsager_generators(spec)?;
    let mut out = Vec::new();
    for s in 0..a.len() {
        for t in 0..a.len() {
            if s == t {
                continue;
            }
            let inner = a[s].commutator(&a[t])?;
            let lhs = a[s].nested_commutator(&inner, 2)?;
            let res = residual(&lhs, &inner.scale(c(16.0)))?;
            out.push(
                VerificationReport::new("onsager", "dolan-grady", "dolan-grady", res, TOLERANCE)
                    .param("s", s)
                    .param("t", t),
            );
        }
    }
    if depth > 0 {
        for s in 0..a.len() {
            for t in s + 1..a.len() {
                out.extend(tower_reports(spec, &a[s], &a[t], s, t, depth)?);
            }
        }
    }
    Ok(out.into_iter().map(|r| tagged(r, spec)).collect())
}

fn tower_reports(
    spec: &ModelSpec,
    a0: &OperatorSum,
    a1: &OperatorSum,
    s: usize,
    t: usize,
    depth: usize,
) -> Result<Vec<VerificationReport>> {
    let tower = onsager_tower(a0, a1, depth)?;
    let d = depth as i64;
    let pair = format!("{s},{t}");
    let mut out = Vec::new();
    let line = |name: &str, res: f64, l: i64, m: i64| {
        VerificationReport::new("onsager", name, "onsager-tower", res, TOLERANCE)
            .param("pair", &pair)
            .param("l", l)
            .param("m", m)
    };
    for l in -d..=d {
        for m in l + 1..=d {
            if m - l > d {
                continue;
            }
            let lhs = tower.a[&l].commutator(&tower.a[&m])?;
            let rhs = tower.g[&(l - m)].scale(c(4.0));
            out.push(line("tower-aa", residual(&lhs, &rhs)?, l, m));
        }
    }
    for l in 1..=d {
        for m in -d..=d {
            if (m + l).abs() > d || (m - l).abs() > d {
                continue;
            }
            let lhs = tower.g[&l].commutator(&tower.a[&m])?;
            let rhs = tower.a[&(m + l)].sub(&tower.a[&(m - l)])?.scale(c(2.0));
            out.push(line("tower-ga", residual(&lhs, &rhs)?, l, m));
        }
    }
    for l in 1..=d {
        for m in l + 1..=d {
            out.push(line("tower-gg", frobenius(&tower.g[&l].commutator(&tower.g[&m])?), l, m));
        }
    }
    if spec.q == 2 {
        let h = commuting_charge(spec, s, t)?;
        let elements = tower
            .a
            .iter()
            .map(|(m, x)| (String::from("A"), *m, x))
            .chain(tower.g.iter().filter(|(m, _)| **m > 0).map(|(m, x)| (String::from("G"), *m, x)));
        for (kind, m, x) in elements {
            out.push(
                VerificationReport::new(
                    "onsager",
                    "tower-charge",
                    "charge-commutes-tower",
                    frobenius(&h.commutator(x)?),
                    TOLERANCE,
                )
                .param("pair", &pair)
                .param("element", format!("{kind}{m}")),
            );
        }
    }
    Ok(out)
}

/// `[H^(s,t), A^(s)] = [H^(s,t), A^(t)] = 0` for every `s < t`. The closing
/// `charge-count` line records how many charges were checked against the
/// `(r+1)(r+2)/2` count that includes the diagonal `s = t`.
pub fn verify_commuting_charges(spec: &ModelSpec) -> Result<Vec<VerificationReport>> {
    spec.validate()?;
    let a = onsager_generators(spec)?;
    let mut out = Vec::new();
    let mut verified = 0usize;
    for s in 0..a.len() {
        for t in s + 1..a.len() {
            let h = commuting_charge(spec, s, t)?;
            verified += 1;
            for (which, x) in [(s, &a[s]), (t, &a[t])] {
                out.push(
                    VerificationReport::new("charges", "commute", "charge-commutes", frobenius(&h.commutator(x)?), TOLERANCE)
                        .param("s", s)
                        .param("t", t)
                        .param("generator", which),
                );
            }
        }
    }
    let r = spec.r;
    out.push(
        VerificationReport::new("charges", "charge-count", "charge-count", 0.0, TOLERANCE)
            .param("verified", verified)
            .param("claimed", (r + 1) * (r + 2) / 2)
            .param("note", "pairs s<t verified; s=t not defined by the construction"),
    );
    Ok(out.into_iter().map(|r| tagged(r, spec)).collect())
}

/// `[h_j, h̃_k] = 0` for all `j, k`, the Clifford image `CT(h_j) = h̃_{j−r}`
/// and `[H, H̃] = 0` for the homogeneous chains.
pub fn verify_duality(spec: &ModelSpec) -> Result<Vec<VerificationReport>> {
    spec.validate()?;
    if spec.q != 2 {
        return Err(Error::Unsupported("duality is defined for Q = 2".into()));
    }
    let base = match spec.kind {
        ModelKind::Ff8v | ModelKind::Fendley | ModelKind::FendleyMixed => ModelSpec::fendley(spec.l, spec.r),
        ModelKind::FendleyDual => ModelSpec::fendley(spec.l, spec.r),
        k => return Err(Error::Unsupported(format!("{k} has no dual representation here"))),
    };
    let l = spec.l;
    let h: Vec<OperatorSum> = (1..=l).map(|j| gca_generator(&base, j)).collect::<Result<_>>()?;
    let hd: Vec<OperatorSum> = (1..=l).map(|j| dual_generator(&base, j)).collect::<Result<_>>()?;
    let mut out = Vec::new();
    for j in 1..=l {
        for k in 1..=l {
            out.push(
                VerificationReport::new("duality", "commute", "dual-commute", frobenius(&h[j - 1].commutator(&hd[k - 1])?), TOLERANCE)
                    .param("j", j)
                    .param("k", k),
            );
        }
    }
    for j in 1..=l {
        let target = wrap(j as i64 - spec.r as i64, l);
        let image = clifford_transform(&h[j - 1], spec.r)?;
        out.push(
            VerificationReport::new("duality", "clifford-image", "clifford-transform", residual(&image, &hd[target - 1])?, TOLERANCE)
                .param("j", j)
                .param("image", target),
        );
    }
    let dual = ModelSpec::fendley_dual(l, spec.r);
    let res = frobenius(&hamiltonian(&base)?.commutator(&hamiltonian(&dual)?)?);
    out.push(VerificationReport::new("duality", "hamiltonians", "dual-hamiltonians-commute", res, TOLERANCE));
    Ok(out.into_iter().map(|r| tagged(r, spec)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{ClockString, Pauli};
    use crate::report::all_passed;

    fn failures(reports: &[VerificationReport]) -> Vec<String> {
        reports
            .iter()
            .filter(|r| !r.passed)
            .map(|r| format!("{} {} {:?} {:e}", r.suite, r.name, r.params, r.residual))
            .collect()
    }

    #[test]
    fn gca_counts_and_passes() {
        for spec in [
            ModelSpec::tfim(4, 1.0),
            ModelSpec::ff8v(6),
            ModelSpec::fendley(6, 2),
            ModelSpec::cpfm(6, 2, 3),
            ModelSpec::chiral_potts(3, 3, 1.0),
        ] {
            let n = spec.generators();
            let reports = verify_gca(&spec).unwrap();
            assert_eq!(reports.len(), n * (n / 2) + n, "{}", spec.kind);
            assert!(failures(&reports).is_empty(), "{:?}", failures(&reports));
        }
    }

    #[test]
    fn gca_exchange_example() {
        // h_1 h_5 = −h_5 h_1 and h_1 h_4 = h_4 h_1 for r = 2, N = 6
        let spec = ModelSpec::fendley(6, 2);
        let h1 = gca_generator(&spec, 1).unwrap();
        let h4 = gca_generator(&spec, 4).unwrap();
        let h5 = gca_generator(&spec, 5).unwrap();
        assert!(h1.mul(&h5).unwrap().equals(&h5.mul(&h1).unwrap().scale(c(-1.0)), 0.0));
        assert!(h1.mul(&h4).unwrap().equals(&h4.mul(&h1).unwrap(), 0.0));
    }

    #[test]
    fn mutated_generator_fails() {
        let spec = ModelSpec::fendley(6, 2);
        let mut gens = generators(&spec).unwrap();
        // σ^x → σ^z on the middle site of h_3
        gens[2] = ClockString::pauli(6, &[(2, Pauli::Y), (3, Pauli::Z), (4, Pauli::X)]).into();
        let reports = verify_gca_generators(&gens, 2, 1).unwrap();
        assert!(!all_passed(&reports));
        assert!(reports.iter().filter(|r| !r.passed).all(|r| r.residual > 1.0));
    }

    #[test]
    fn gtl_for_spin_and_clock_chains() {
        for (spec, beta) in [(ModelSpec::tfim(4, 1.0), 2f64.sqrt()), (ModelSpec::cpfm(6, 2, 3), 3f64.sqrt())] {
            let reports = verify_gtl(&spec).unwrap();
            assert!(failures(&reports).is_empty(), "{:?}", failures(&reports));
            let b = reports.iter().find(|r| r.name == "beta").unwrap();
            let measured: f64 = b.params.iter().find(|p| p.0 == "beta").unwrap().1.parse().unwrap();
            assert!((measured - beta).abs() < 1e-12);
        }
        let clock = verify_gtl(&ModelSpec::cpfm(6, 2, 3)).unwrap();
        assert_eq!(clock.iter().filter(|r| r.name == "orthogonal").count(), 6 * 2);
        assert_eq!(clock.iter().filter(|r| r.name == "anticommutator").count(), 0);
    }

    #[test]
    fn anticommutator_needs_the_unit_term() {
        let spec = ModelSpec::fendley(6, 2);
        let e1 = tl_generator(&spec, 1, None).unwrap();
        let e2 = tl_generator(&spec, 2, None).unwrap();
        let bare = e1.add(&e2).unwrap().scale(c(core::f64::consts::SQRT_2));
        let diff = bare.sub(&e1.anticommutator(&e2).unwrap()).unwrap();
        assert!(diff.equals(&OperatorSum::identity(2, 6), 1e-15));
    }

    #[test]
    fn onsager_suites() {
        let reports = verify_onsager(&ModelSpec::fendley(6, 2), 0).unwrap();
        assert_eq!(reports.len(), 6);
        assert!(all_passed(&reports));
        let reports = verify_onsager(&ModelSpec::tfim(4, 1.0), 3).unwrap();
        assert!(failures(&reports).is_empty(), "{:?}", failures(&reports));
        assert!(reports.iter().any(|r| r.name == "tower-charge"));
        assert!(verify_onsager(&ModelSpec::fendley(7, 2), 1).is_err());
    }

    #[test]
    fn dolan_grady_fails_for_wrong_normalisation() {
        let spec = ModelSpec::tfim(4, 1.0);
        let a = onsager_generators(&spec).unwrap();
        let a0 = a[0].scale(c(2.0));
        let inner = a0.commutator(&a[1]).unwrap();
        let lhs = a0.nested_commutator(&inner, 2).unwrap();
        assert!(residual(&lhs, &inner.scale(c(16.0))).unwrap() > 1.0);
    }

    #[test]
    fn charges_and_duality() {
        let reports = verify_commuting_charges(&ModelSpec::fendley(6, 2)).unwrap();
        assert_eq!(reports.len(), 3 * 2 + 1);
        assert!(all_passed(&reports));
        let staggered = ModelSpec::ff8v(6).with_lambda(0.4);
        assert!(all_passed(&verify_commuting_charges(&staggered).unwrap()));
        let reports = verify_duality(&ModelSpec::fendley(6, 2)).unwrap();
        assert_eq!(reports.len(), 36 + 6 + 1);
        assert!(failures(&reports).is_empty(), "{:?}", failures(&reports));
        let ct = reports.iter().find(|r| r.name == "clifford-image").unwrap();
        assert_eq!(ct.params.iter().find(|p| p.0 == "image").unwrap().1, "5");
        assert!(all_passed(&verify_duality(&ModelSpec::ff8v(6)).unwrap()));
    }

    #[test]
    fn all_suites_for_fendley() {
        let reports = verify_all(&ModelSpec::fendley(6, 2), 1).unwrap();
        assert!(reports.len() > 100);
        assert!(failures(&reports).is_empty(), "{:?}", failures(&reports));
        assert!(verify_all(&ModelSpec::fendley_mixed(6, 2, 0.3), 1).unwrap().iter().all(|r| r.suite == "duality"));
    }

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.as_str().parse::<Suite>().unwrap(), s);
        }
        assert!("nope".parse::<Suite>().is_err());
    }
}
