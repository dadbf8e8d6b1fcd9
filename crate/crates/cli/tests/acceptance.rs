//! Acceptance criteria, one test per criterion. Each prints a single
//! `criterion NN PASS|FAIL <summary>` line (visible with `--nocapture`) and
//! the harness line `criterion_NN_… ok|FAILED`.

use std::time::Instant;

use onsager_core::integrability::{
    check_charges, check_free_fermion, check_inverse_relation, check_r_limits, check_transfer_commutation,
    check_ybe, EightVertexFullR, EightVertexR, FendleyR, FreeFermionSource, Lax, Parametrization, YbeForm,
};
use onsager_core::intertwiner::{match_to_reference, solve_intertwiner};
use onsager_core::integrability::r_fendley;
use onsager_core::linalg::{to_dense, ComplexMatrix, NULL_SPACE_TOLERANCE};
use onsager_core::models::{hamiltonian, onsager_generators};
use onsager_core::report::all_passed;
use onsager_core::sample;
use onsager_core::spectral::{
    default_degeneracy_tolerance, degeneracies, find_free_spectrum, free_spectrum_decomposition, real_spectrum,
};
use onsager_core::verifier::{verify_duality, verify_gca, verify_gtl, verify_onsager};
use onsager_core::{c64, ModelSpec, VerificationReport};

/// Runs a criterion body, prints its line and fails the test on error.
fn criterion(n: u32, title: &str, body: impl FnOnce() -> Result<String, String>) {
    let start = Instant::now();
    let outcome = body();
    let secs = start.elapsed().as_secs_f64();
    match &outcome {
        Ok(detail) => println!("criterion {n:02} PASS {title}: {detail} [{secs:.2}s]"),
        Err(detail) => println!("criterion {n:02} FAIL {title}: {detail} [{secs:.2}s]"),
    }
    if let Err(detail) = outcome {
        panic!("criterion {n:02} ({title}) failed: {detail}");
    }
}

fn require(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn all_pass(reports: &[VerificationReport], what: &str) -> Result<f64, String> {
    match reports.iter().find(|r| !r.passed) {
        Some(r) => Err(format!(
            "{what}: {} {:?} residual {:e} vs tol {:e}",
            r.name, r.params, r.residual, r.tolerance
        )),
        None => Ok(reports.iter().map(|r| r.residual).fold(0.0, f64::max)),
    }
}

fn e<E: std::fmt::Display>(err: E) -> String {
    err.to_string()
}

#[test]
fn criterion_01_clifford_relations() {
    criterion(1, "generalised Clifford relations", || {
        let mut specs = Vec::new();
        specs.extend((2..=8).map(|l| ModelSpec::tfim(l, 1.0)));
        specs.extend((3..=12).map(ModelSpec::ff8v));
        for r in 1..=3 {
            specs.extend((2 * r + 1..=12).map(|l| ModelSpec::fendley(l, r)));
        }
        specs.extend((5..=9).map(|l| ModelSpec::cpfm(l, 2, 3)));
        let start = Instant::now();
        let mut lines = 0;
        for spec in &specs {
            let reports = verify_gca(spec).map_err(e)?;
            let n = spec.generators();
            require(reports.len() == n * (n / 2) + n, || format!("{} L={}: wrong line count", spec.kind, spec.l))?;
            let worst = all_pass(&reports, &format!("{} L={}", spec.kind, spec.l))?;
            require(worst == 0.0, || format!("{} L={}: residual {worst:e} is not exact", spec.kind, spec.l))?;
            lines += reports.len();
        }
        let secs = start.elapsed().as_secs_f64();
        require(secs < 10.0, || format!("took {secs:.1}s"))?;
        Ok(format!("{} models, {lines} relations, all exact, {secs:.2}s", specs.len()))
    });
}

#[test]
fn criterion_02_temperley_lieb_relations() {
    criterion(2, "graph Temperley-Lieb relations", || {
        let cases = [
            (ModelSpec::tfim(4, 1.0), 2f64.sqrt()),
            (ModelSpec::ff8v(6), 2f64.sqrt()),
            (ModelSpec::fendley(6, 2), 2f64.sqrt()),
            (ModelSpec::cpfm(6, 2, 3), 3f64.sqrt()),
            (ModelSpec::chiral_potts(3, 3, 1.0), 3f64.sqrt()),
        ];
        let mut total = 0;
        for (spec, beta) in &cases {
            let reports = verify_gtl(spec).map_err(e)?;
            all_pass(&reports, &format!("{} L={}", spec.kind, spec.l))?;
            let b = reports.iter().find(|r| r.name == "beta").ok_or("no beta line")?;
            let measured: f64 = b
                .params
                .iter()
                .find(|p| p.0 == "beta")
                .ok_or("no measured beta")?
                .1
                .parse()
                .map_err(e)?;
            require((measured - beta).abs() <= 1e-12, || format!("{}: beta {measured} vs {beta}", spec.kind))?;
            total += reports.len();
        }
        Ok(format!(
            "{total} relations; beta = sqrt2 (Q=2), sqrt3 (Q=3) to 1e-12; anticommutator checked with its unit term"
        ))
    });
}

/// `‖[A,[A,[A,B]]] − 16[A,B]‖_F` from dense matrices.
fn dense_dolan_grady(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    let c = a.commutator(b).unwrap();
    let lhs = a.commutator(&a.commutator(&c).unwrap()).unwrap();
    lhs.distance(&c.scale(c64(16.0, 0.0))).unwrap()
}

#[test]
fn criterion_03_dolan_grady() {
    criterion(3, "Dolan-Grady relations", || {
        let specs = [
            ModelSpec::tfim(4, 1.0),
            ModelSpec::ff8v(4),
            ModelSpec::fendley(6, 2),
            ModelSpec::cpfm(6, 2, 3),
        ];
        let mut worst = 0.0f64;
        let mut pairs = 0;
        for spec in &specs {
            let reports = verify_onsager(spec, 0).map_err(e)?;
            let g = spec.r + 1;
            require(reports.len() == g * (g - 1), || format!("{}: {} ordered pairs", spec.kind, reports.len()))?;
            worst = worst.max(all_pass(&reports, &format!("{}", spec.kind))?);
            // independent dense evaluation
            let a: Vec<ComplexMatrix> = onsager_generators(spec)
                .map_err(e)?
                .iter()
                .map(|x| to_dense(x).unwrap())
                .collect();
            for s in 0..a.len() {
                for t in 0..a.len() {
                    if s != t {
                        let d = dense_dolan_grady(&a[s], &a[t]);
                        require(d <= 1e-10, || format!("{} dense ({s},{t}): {d:e}", spec.kind))?;
                        worst = worst.max(d);
                        pairs += 1;
                    }
                }
            }
        }
        Ok(format!("{pairs} ordered pairs, max dense residual {worst:.2e}"))
    });
}

#[test]
fn criterion_04_onsager_tower() {
    criterion(4, "Onsager tower to depth 3", || {
        let spec = ModelSpec::tfim(4, 1.0);
        let reports = verify_onsager(&spec, 3).map_err(e)?;
        let tower: Vec<_> = reports.iter().filter(|r| r.name.starts_with("tower-")).cloned().collect();
        let charge: Vec<_> = tower.iter().filter(|r| r.name == "tower-charge").cloned().collect();
        require(charge.len() == 7 + 3, || format!("{} charge lines", charge.len()))?;
        for name in ["tower-aa", "tower-ga", "tower-gg"] {
            require(tower.iter().any(|r| r.name == name), || format!("missing {name}"))?;
        }
        let worst = all_pass(&tower, "tower")?;
        require(worst <= 1e-10, || format!("residual {worst:e}"))?;
        Ok(format!(
            "{} relations incl. H(0,1) vs all {} tower elements, max residual {worst:.2e}",
            tower.len(),
            charge.len()
        ))
    });
}

#[test]
fn criterion_05_yang_baxter() {
    criterion(5, "Yang-Baxter relations", || {
        let start = Instant::now();
        let mut worst = 0.0f64;
        let mut push = |r: VerificationReport| -> Result<(), String> {
            require(r.passed && r.residual <= 1e-10, || format!("{} {:?}: {:e}", r.name, r.params, r.residual))?;
            worst = worst.max(r.residual);
            Ok(())
        };
        let lax8 = Lax::eight_vertex();
        push(check_ybe(&EightVertexR, YbeForm::Rll(&lax8), 10, 11).map_err(e)?)?;
        push(check_ybe(&EightVertexR, YbeForm::Rrr, 10, 12).map_err(e)?)?;
        let mut rng = sample::rng(13);
        for i in 0..10 {
            let theta = sample::angle(&mut rng);
            let lax = Lax::multiplicative(1, theta).map_err(e)?;
            let r = EightVertexFullR { theta };
            push(check_ybe(&r, YbeForm::Rll(&lax), 1, 100 + i).map_err(e)?)?;
            push(check_ybe(&r, YbeForm::Rrr, 1, 200 + i).map_err(e)?)?;
        }
        let laxf = Lax::fendley();
        push(check_ybe(&FendleyR, YbeForm::Rll(&laxf), 10, 14).map_err(e)?)?;
        push(check_ybe(&FendleyR, YbeForm::Rrr, 10, 15).map_err(e)?)?;
        let secs = start.elapsed().as_secs_f64();
        require(secs < 60.0, || format!("took {secs:.1}s"))?;
        Ok(format!("eight-vertex, eight-vertex (z,theta), Fendley: max residual {worst:.2e}, {secs:.2}s"))
    });
}

#[test]
fn criterion_06_free_fermion_conditions() {
    criterion(6, "free-fermion conditions", || {
        let a = check_free_fermion(FreeFermionSource::EightVertex, 100, 21).map_err(e)?;
        let b = check_free_fermion(FreeFermionSource::EightVertexFull, 100, 22).map_err(e)?;
        let worst = all_pass(&[a, b], "free fermion")?;
        require(worst <= 1e-12, || format!("{worst:e}"))?;
        Ok(format!("2 x 100 samples, max |lhs - rhs| {worst:.2e}"))
    });
}

#[test]
fn criterion_07_transfer_commutation() {
    criterion(7, "commuting transfer matrices", || {
        let mut out = Vec::new();
        out.push(check_transfer_commutation(&Lax::hyperbolic(1).map_err(e)?, 8, 5, 31, 1e-10).map_err(e)?);
        out.push(check_transfer_commutation(&Lax::hyperbolic(2).map_err(e)?, 8, 5, 32, 1e-10).map_err(e)?);
        for (i, theta) in [0.3, 0.7].into_iter().enumerate() {
            out.push(check_transfer_commutation(&Lax::multiplicative(2, theta).map_err(e)?, 6, 5, 33 + i as u64, 1e-8).map_err(e)?);
        }
        let worst = all_pass(&out, "transfer")?;
        Ok(format!("FF8V L=8, Fendley L=8, mixed theta in {{0.3, 0.7}} L=6; max residual {worst:.2e}"))
    });
}

#[test]
fn criterion_08_conserved_charges() {
    criterion(8, "conserved charges from the transfer matrix", || {
        let mut names = Vec::new();
        let mut worst = 0.0f64;
        for spec in [ModelSpec::fendley(6, 2), ModelSpec::ff8v(6)] {
            let reports = check_charges(&spec).map_err(e)?;
            worst = worst.max(all_pass(&reports, &format!("{}", spec.kind))?);
            names.extend(reports.iter().map(|r| format!("{}:{}", spec.kind, r.name)));
        }
        for needed in ["FENDLEY:q2-hamiltonian", "FENDLEY:q3-density", "FENDLEY:q3-decomposition", "FENDLEY:derivative-cross-check"] {
            require(names.iter().any(|n| n == needed), || format!("missing {needed}"))?;
        }
        Ok(format!("{} checks (Q2 = H, Q3 density and decomposition, FD derivatives), max residual {worst:.2e}", names.len()))
    });
}

#[test]
fn criterion_09_intertwiner_solver() {
    criterion(9, "numerical intertwiner and R-matrix limits", || {
        let lax = Lax::fendley();
        let mut rng = sample::rng(41);
        let mut worst = 0.0f64;
        for _ in 0..5 {
            let u = sample::point(Parametrization::Hyperbolic, &mut rng);
            let v = sample::point(Parametrization::Hyperbolic, &mut rng);
            let sol = solve_intertwiner(&lax, u, v, NULL_SPACE_TOLERANCE).map_err(e)?;
            require(sol.kernel_dim == 1, || format!("kernel dimension {} at ({u}, {v})", sol.kernel_dim))?;
            let m = match_to_reference(&sol.candidates[0], &r_fendley(u, v).map_err(e)?).map_err(e)?;
            require(m.residual <= 1e-8, || format!("match residual {:e}", m.residual))?;
            worst = worst.max(m.residual);
        }
        let mut limits = check_r_limits(2, 0.0, 5, 42).map_err(e)?;
        limits.extend(check_r_limits(2, 0.4, 2, 43).map_err(e)?);
        let lw = all_pass(&limits, "limits")?;
        require(lw <= 1e-6, || format!("limit residual {lw:e}"))?;
        let inv = check_inverse_relation(5, 44).map_err(e)?;
        let scalar = limits.iter().find(|r| r.name == "r-limit-inverse-scalar").ok_or("no inverse-scalar line")?;
        let sw = all_pass(&[inv, scalar.clone()], "inverse scalar")?;
        require(sw <= 1e-8, || format!("inverse scalar residual {sw:e}"))?;
        Ok(format!(
            "5/5 unique kernels, match {worst:.1e}; limits (theta 0, 0.4) {lw:.1e}; inverse scalar {sw:.1e}"
        ))
    });
}

/// All `±` sums of `eps`, sorted; independent of the library's search.
fn signed_sums(eps: &[f64]) -> Vec<f64> {
    let mut out: Vec<f64> = (0..1u32 << eps.len())
        .map(|mask| eps.iter().enumerate().map(|(k, x)| if mask >> k & 1 == 1 { *x } else { -*x }).sum())
        .collect();
    out.sort_by(f64::total_cmp);
    out
}

/// Brute force over every multiset of candidate single-particle energies
/// drawn from the half-gaps above the ground state.
fn free_by_enumeration(levels: &[f64], modes: usize) -> bool {
    let ground = levels[0];
    let mut cands: Vec<f64> = levels.iter().map(|x| (x - ground) / 2.0).filter(|x| *x > 1e-9).collect();
    cands.dedup_by(|a, b| (*a - *b).abs() < 1e-8);
    fn rec(cands: &[f64], start: usize, pick: &mut Vec<f64>, modes: usize, levels: &[f64]) -> bool {
        if pick.len() == modes {
            let s = signed_sums(pick);
            return s.len() == levels.len() && s.iter().zip(levels).all(|(a, b)| (a - b).abs() < 1e-8);
        }
        (start..cands.len()).any(|i| {
            pick.push(cands[i]);
            let hit = rec(cands, i, pick, modes, levels);
            pick.pop();
            hit
        })
    }
    rec(&cands, 0, &mut Vec::new(), modes, levels)
}

fn reduced_levels(eigs: &[f64], modes: usize) -> Option<Vec<f64>> {
    let k = eigs.len() >> modes;
    let mut out = Vec::new();
    for (v, m) in degeneracies(eigs, 1e-8) {
        if m % k != 0 {
            return None;
        }
        out.extend(std::iter::repeat(v).take(m / k));
    }
    Some(out)
}

#[test]
fn criterion_10_spectrum() {
    criterion(10, "Fendley spectrum and free-fermion structure", || {
        let start = Instant::now();
        let eigs = real_spectrum(&ModelSpec::fendley(6, 2)).map_err(e)?;
        let secs = start.elapsed().as_secs_f64();
        require(secs < 5.0, || format!("ED took {secs:.1}s"))?;
        let table = degeneracies(&eigs, default_degeneracy_tolerance(&eigs));
        let mults: Vec<usize> = table.iter().map(|x| x.1).collect();
        require(mults.iter().sum::<usize>() == 64, || format!("{mults:?}"))?;
        // brute-force ED oracle (independent dense diagonalisation script)
        require(mults == [4, 12, 12, 8, 12, 12, 4], || format!("multiplicities {mults:?}"))?;
        let asym = eigs.iter().zip(eigs.iter().rev()).map(|(a, b)| (a + b).abs()).fold(0.0, f64::max);
        require(asym <= 1e-9, || format!("E -> -E asymmetry {asym:e}"))?;
        for k in 0..=8 {
            let tol = 10f64.powf(-10.0 + 0.5 * k as f64);
            let t = degeneracies(&eigs, tol);
            require(t.iter().map(|x| x.1).collect::<Vec<_>>() == mults, || format!("unstable at tol {tol:e}"))?;
        }
        let open = real_spectrum(&ModelSpec::fendley(6, 2).open()).map_err(e)?;
        let (modes, eps) = find_free_spectrum(&open, 1e-8).ok_or("open chain: no free decomposition")?;
        let levels = reduced_levels(&open, modes).ok_or("open chain: inconsistent multiplicities")?;
        let regenerated = signed_sums(&eps);
        require(regenerated.iter().zip(&levels).all(|(a, b)| (a - b).abs() < 1e-8), || "open chain: regeneration mismatch".into())?;
        let mut refuted = 0;
        for m in 1..=6 {
            require(free_spectrum_decomposition(&eigs, m, 1e-8).is_none(), || format!("periodic: {m}-mode decomposition found"))?;
            if let Some(levels) = reduced_levels(&eigs, m) {
                require(!free_by_enumeration(&levels, m), || format!("periodic: brute force finds {m} modes"))?;
            }
            refuted += 1;
        }
        Ok(format!(
            "ED {secs:.2}s, table {mults:?}, symmetric, stable 1e-10..1e-6; open: {modes} modes {eps:.4?}; periodic refuted for 1..={refuted} modes"
        ))
    });
}

#[test]
fn criterion_11_duality() {
    criterion(11, "dual representation and Clifford transformation", || {
        let reports = verify_duality(&ModelSpec::fendley(6, 2)).map_err(e)?;
        all_pass(&reports, "duality")?;
        let commute = reports.iter().filter(|r| r.name == "commute").count();
        let ct = reports.iter().filter(|r| r.name == "clifford-image").count();
        require(commute == 36 && ct == 6, || format!("{commute} commutation / {ct} transformation lines"))?;
        let exact = reports.iter().filter(|r| r.name != "hamiltonians").all(|r| r.residual == 0.0);
        require(exact, || "sweep not exact".into())?;
        let h = to_dense(&hamiltonian(&ModelSpec::fendley(6, 2)).map_err(e)?).map_err(e)?;
        let hd = to_dense(&hamiltonian(&ModelSpec::fendley_dual(6, 2)).map_err(e)?).map_err(e)?;
        let dense = h.commutator(&hd).map_err(e)?.frobenius_norm();
        require(dense <= 1e-10, || format!("dense [H, H~] = {dense:e}"))?;
        require(all_passed(&reports), || "report failed".into())?;
        Ok(format!("36 pairs and 6 images exact, dense [H, H~] = {dense:.1e}"))
    });
}

#[test]
fn criterion_12_determinism() {
    criterion(12, "byte-identical reports", || {
        let dir = tempfile::tempdir().map_err(e)?;
        let root = env!("CARGO_MANIFEST_DIR");
        let cfg = |name: &str| format!("{root}/../../configs/{name}");
        let commands: Vec<Vec<String>> = vec![
            vec!["verify".into(), "all".into(), "--model".into(), cfg("fendley_r2_L6.toml"), "--seed".into(), "5".into()],
            vec!["integrability".into(), "ybe".into(), "--model".into(), cfg("ff8v_L6.toml"), "--samples".into(), "5".into(), "--seed".into(), "7".into()],
            vec!["integrability".into(), "transfer".into(), "--model".into(), cfg("fendley_mixed_L6.toml"), "--seed".into(), "3".into()],
            vec!["spectrum".into(), "--model".into(), cfg("fendley_r2_L6.toml"), "--degeneracies".into()],
        ];
        let mut bytes = 0;
        for (i, args) in commands.iter().enumerate() {
            let mut outputs = Vec::new();
            for run in 0..2 {
                let out = dir.path().join(format!("{i}-{run}.out"));
                let mut argv = vec!["onsager".to_string()];
                argv.extend(args.iter().cloned());
                argv.push("--out".into());
                argv.push(out.display().to_string());
                let code = onsager_cli::run(argv);
                require(code == 0, || format!("{args:?} exited with {code}"))?;
                outputs.push(std::fs::read(&out).map_err(e)?);
            }
            require(outputs[0] == outputs[1], || format!("{args:?}: outputs differ"))?;
            require(!outputs[0].is_empty(), || format!("{args:?}: empty output"))?;
            bytes += outputs[0].len();
        }
        Ok(format!("{} commands run twice, {bytes} bytes identical", commands.len()))
    });
}
