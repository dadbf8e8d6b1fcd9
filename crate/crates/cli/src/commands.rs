use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use onsager_core::integrability::{
    check_charges, check_free_fermion, check_inverse_relation, check_r_limits, check_transfer_commutation,
    check_transfer_hamiltonian, check_ybe, lax_for_model, EightVertexFullR, EightVertexR, FendleyR, FnR,
    FreeFermionSource, Lax, LaxOperator, Parametrization, RMatrixSpec, YbeForm,
};
use onsager_core::intertwiner::{match_to_reference, solve_intertwiner, theta_scan, unique_intertwiner};
use onsager_core::linalg::NULL_SPACE_TOLERANCE;
use onsager_core::spectral::{
    charge_compatibility, default_degeneracy_tolerance, degeneracies, find_free_spectrum, spectrum, Spectrum,
};
use onsager_core::verifier::{run_suite, verify_onsager, Suite};
use onsager_core::{Bound, Boundary, Complex64, ModelKind, ModelSpec, VerificationReport};
use rayon::prelude::*;

use crate::config::load_spec;
use crate::output;
use crate::CliError;

#[derive(Debug, Parser)]
#[command(name = "onsager", version, about = "Verify Onsager/Clifford algebra structures and integrability of spin chains")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Model config (TOML, or JSON).
    #[arg(long)]
    pub model: PathBuf,
    /// Output file (stdout if absent).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Seed for sampled checks; echoed into every report.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Overrides the tolerance of every upper-bound check.
    #[arg(long)]
    pub tol: Option<f64>,
    /// Record wall-clock milliseconds per job (breaks byte-for-byte determinism).
    #[arg(long)]
    pub timings: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum VerifySuite {
    Gca,
    Gtl,
    Onsager,
    Charges,
    Duality,
    All,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum IntegrabilityCheck {
    Ybe,
    Transfer,
    Charges,
    FfCondition,
    RLimits,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Algebraic relation suites.
    Verify {
        suite: VerifySuite,
        /// Onsager tower depth.
        #[arg(long, default_value_t = 3)]
        depth: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Yang–Baxter, transfer-matrix, charge and R-matrix checks.
    Integrability {
        check: IntegrabilityCheck,
        #[arg(long, default_value_t = 5)]
        samples: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Numerically solve for the R matrix intertwining two Lax operators.
    Rsolve {
        /// Spectral parameter (complex, e.g. `0.3+0.1i`).
        #[arg(long, allow_hyphen_values = true)]
        u: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        v: Option<String>,
        /// `a:b:n` — scan n evenly spaced θ in [a, b] instead.
        #[arg(long)]
        theta_grid: Option<String>,
        /// Sampled (z, w) pairs per θ in a scan.
        #[arg(long, default_value_t = 3)]
        samples: usize,
        /// Write the solved matrix (binary, or CSV for `.csv`).
        #[arg(long)]
        dump: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Exact diagonalisation; CSV `index,energy,multiplicity`.
    Spectrum {
        /// One row per distinct level instead of per eigenvalue.
        #[arg(long)]
        degeneracies: bool,
        /// Search for a free-fermion decomposition of the spectrum.
        #[arg(long)]
        free_check: bool,
        /// Check commutation among the conserved charges.
        #[arg(long)]
        charges: bool,
        /// JSON-lines file for the reports of --free-check/--charges
        /// (summary on stderr if absent).
        #[arg(long)]
        reports: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Onsager tower relations to the given depth.
    Tower {
        #[arg(long, default_value_t = 3)]
        depth: usize,
        #[command(flatten)]
        common: Common,
    },
}

type Job<'a> = Box<dyn Fn() -> onsager_core::Result<Vec<VerificationReport>> + Send + Sync + 'a>;

/// Runs the jobs in parallel and concatenates their reports in job order, so
/// scheduling never changes the output.
fn run_jobs(jobs: Vec<Job<'_>>, timings: bool) -> Result<Vec<VerificationReport>, CliError> {
    let results: Vec<_> = jobs
        .par_iter()
        .map(|job| {
            let start = Instant::now();
            let out = job();
            let ms = start.elapsed().as_millis() as u64;
            out.map(|reports| {
                reports
                    .into_iter()
                    .map(|mut r| {
                        r.wall_ms = if timings { ms } else { 0 };
                        r
                    })
                    .collect::<Vec<_>>()
            })
        })
        .collect();
    let mut out = Vec::new();
    for r in results {
        out.extend(r?);
    }
    Ok(out)
}

fn finalize(mut reports: Vec<VerificationReport>, common: &Common) -> Vec<VerificationReport> {
    for r in &mut reports {
        r.seed = Some(common.seed);
    }
    match common.tol {
        Some(tol) => reports
            .into_iter()
            .map(|r| if r.bound == Bound::Upper { r.retolerance(tol) } else { r })
            .collect(),
        None => reports,
    }
}

fn emit(reports: &[VerificationReport], common: &Common) -> Result<bool, CliError> {
    let mut w = output::sink(common.out.as_deref())?;
    output::write_reports(&mut w, reports)?;
    w.flush()?;
    Ok(reports.iter().all(|r| r.passed))
}

pub fn execute(cli: &Cli) -> Result<bool, CliError> {
    match &cli.command {
        Command::Verify { suite, depth, common } => {
            let spec = load_spec(&common.model)?;
            let suites: Vec<Suite> = match suite {
                VerifySuite::All => Suite::ALL.into_iter().filter(|s| s.applies_to(&spec)).collect(),
                VerifySuite::Gca => vec![Suite::Gca],
                VerifySuite::Gtl => vec![Suite::Gtl],
                VerifySuite::Onsager => vec![Suite::Onsager],
                VerifySuite::Charges => vec![Suite::Charges],
                VerifySuite::Duality => vec![Suite::Duality],
            };
            let spec = &spec;
            let jobs: Vec<Job> = suites
                .into_iter()
                .map(|s| Box::new(move || run_suite(spec, s, *depth)) as Job)
                .collect();
            emit(&finalize(run_jobs(jobs, common.timings)?, common), common)
        }
        Command::Tower { depth, common } => {
            let spec = load_spec(&common.model)?;
            let spec = &spec;
            let jobs: Vec<Job> = vec![Box::new(move || verify_onsager(spec, *depth))];
            emit(&finalize(run_jobs(jobs, common.timings)?, common), common)
        }
        Command::Integrability { check, samples, common } => {
            let spec = load_spec(&common.model)?;
            let jobs = integrability_jobs(&spec, *check, *samples, common.seed)?;
            emit(&finalize(run_jobs(jobs, common.timings)?, common), common)
        }
        Command::Rsolve {
            u,
            v,
            theta_grid,
            samples,
            dump,
            common,
        } => rsolve(common, u.as_deref(), v.as_deref(), theta_grid.as_deref(), *samples, dump.as_ref()),
        Command::Spectrum {
            degeneracies,
            free_check,
            charges,
            reports,
            common,
        } => spectrum_command(common, *degeneracies, *free_check, *charges, reports.as_ref()),
    }
}

/// The R matrix used for the Yang–Baxter checks of a model: closed forms
/// where available, the numerically solved intertwiner otherwise.
fn r_matrix(spec: &ModelSpec, lax: &Lax) -> Box<dyn RMatrixSpec + Send + Sync> {
    match (spec.kind, spec.r) {
        (ModelKind::Ff8v, _) | (ModelKind::Fendley, 1) => Box::new(EightVertexR),
        (ModelKind::Fendley, 2) => Box::new(FendleyR),
        (ModelKind::FendleyMixed, 1) => Box::new(EightVertexFullR { theta: spec.theta }),
        _ => {
            let solver_lax = lax.clone();
            Box::new(FnR {
                name: format!("solved-intertwiner({}, r={})", spec.kind, spec.r),
                dim: lax.aux_dim(),
                parametrization: lax.parametrization(),
                f: move |x, y| unique_intertwiner(&solver_lax, x, y),
            })
        }
    }
}

fn integrability_jobs<'a>(
    spec: &'a ModelSpec,
    check: IntegrabilityCheck,
    samples: usize,
    seed: u64,
) -> Result<Vec<Job<'a>>, CliError> {
    let tag = move |r: VerificationReport| r.param("model", spec.kind).param("L", spec.l).param("r", spec.r);
    Ok(match check {
        IntegrabilityCheck::Ybe => {
            let lax = lax_for_model(spec)?;
            let lax2 = lax.clone();
            vec![
                Box::new(move || {
                    let r = r_matrix(spec, &lax);
                    Ok(vec![tag(check_ybe(r.as_ref(), YbeForm::Rll(&lax), samples, seed)?)])
                }),
                Box::new(move || {
                    let r = r_matrix(spec, &lax2);
                    Ok(vec![tag(check_ybe(r.as_ref(), YbeForm::Rrr, samples, seed)?)])
                }),
            ]
        }
        IntegrabilityCheck::Transfer => {
            let lax = lax_for_model(spec)?;
            let tol = match lax.parametrization() {
                Parametrization::Hyperbolic => 1e-10,
                Parametrization::Multiplicative => 1e-8,
            };
            vec![
                Box::new(move || Ok(vec![tag(check_transfer_commutation(&lax, spec.l, samples, seed, tol)?)])),
                Box::new(move || Ok(vec![tag(check_transfer_hamiltonian(spec, samples, seed)?)])),
            ]
        }
        IntegrabilityCheck::Charges => {
            vec![Box::new(move || check_charges(spec)), Box::new(move || charge_compatibility(spec))]
        }
        IntegrabilityCheck::FfCondition => vec![
            Box::new(move || Ok(vec![check_free_fermion(FreeFermionSource::EightVertex, samples, seed)?])),
            Box::new(move || Ok(vec![check_free_fermion(FreeFermionSource::EightVertexFull, samples, seed)?])),
        ],
        IntegrabilityCheck::RLimits => {
            let mut jobs: Vec<Job> = vec![Box::new(move || check_r_limits(spec.r, spec.theta, samples, seed))];
            if spec.r == 2 && spec.theta == 0.0 {
                jobs.push(Box::new(move || Ok(vec![check_inverse_relation(samples, seed)?])));
            }
            jobs
        }
    })
}

fn parse_complex(s: &str, what: &str) -> Result<Complex64, CliError> {
    s.trim()
        .parse::<Complex64>()
        .map_err(|_| CliError::Config(format!("cannot parse {what} = `{s}` as a complex number")))
}

fn parse_grid(s: &str) -> Result<Vec<f64>, CliError> {
    let bad = || CliError::Config(format!("theta grid `{s}` is not of the form a:b:n"));
    let parts: Vec<&str> = s.split(':').collect();
    let [a, b, n] = parts[..] else { return Err(bad()) };
    let a: f64 = a.trim().parse().map_err(|_| bad())?;
    let b: f64 = b.trim().parse().map_err(|_| bad())?;
    let n: usize = n.trim().parse().map_err(|_| bad())?;
    if n == 0 {
        return Err(bad());
    }
    if n == 1 {
        return Ok(vec![a]);
    }
    Ok((0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect())
}

fn lax_for_solver(spec: &ModelSpec) -> Result<Lax, CliError> {
    // boundaries do not matter for the local intertwiner
    let periodic = ModelSpec {
        boundary: Boundary::Periodic,
        ..spec.clone()
    };
    Ok(lax_for_model(&periodic)?)
}

fn rsolve(
    common: &Common,
    u: Option<&str>,
    v: Option<&str>,
    grid: Option<&str>,
    samples: usize,
    dump: Option<&PathBuf>,
) -> Result<bool, CliError> {
    let spec = load_spec(&common.model)?;
    if let Some(grid) = grid {
        let thetas = parse_grid(grid)?;
        let points: Vec<_> = thetas
            .par_iter()
            .enumerate()
            .map(|(i, &t)| theta_scan(spec.r, &[t], samples, common.seed.wrapping_add(i as u64)))
            .collect();
        let mut w = output::sink(common.out.as_deref())?;
        for p in points {
            for point in p? {
                w.write_all(output::scan_line(&point).as_bytes())?;
            }
        }
        w.flush()?;
        return Ok(true);
    }
    let (Some(u), Some(v)) = (u, v) else {
        return Err(CliError::Config("rsolve needs --u and --v, or --theta-grid".into()));
    };
    let (x, y) = (parse_complex(u, "u")?, parse_complex(v, "v")?);
    let lax = lax_for_solver(&spec)?;
    let sol = solve_intertwiner(&lax, x, y, NULL_SPACE_TOLERANCE)?;
    let tag = |r: VerificationReport| {
        r.param("model", spec.kind)
            .param("r", spec.r)
            .param("u", x)
            .param("v", y)
    };
    let mut reports = vec![tag(
        VerificationReport::new("intertwiner", "kernel-dim", "intertwiner-unique", (sol.kernel_dim as f64 - 1.0).abs(), 0.5)
            .param("kernel_dim", sol.kernel_dim),
    )];
    if let Some(res) = sol.residual {
        reports.push(tag(VerificationReport::new("intertwiner", "intertwining", "yang-baxter-rll", res, 1e-8)));
    }
    let reference: Option<Box<dyn RMatrixSpec>> = match (spec.kind, spec.r) {
        (ModelKind::Ff8v, _) | (ModelKind::Fendley, 1) => Some(Box::new(EightVertexR)),
        (ModelKind::Fendley, 2) => Some(Box::new(FendleyR)),
        (ModelKind::FendleyMixed, 1) => Some(Box::new(EightVertexFullR { theta: spec.theta })),
        _ => None,
    };
    if let (Some(reference), 1) = (reference, sol.kernel_dim) {
        let m = match_to_reference(&sol.candidates[0], &reference.evaluate(x, y)?)?;
        reports.push(tag(
            VerificationReport::new("intertwiner", "reference-match", "r-matrix-reference", m.residual, 1e-8)
                .param("reference", reference.name())
                .param("scalar", m.scalar),
        ));
    }
    if let (Some(path), Some(r)) = (dump, sol.candidates.first()) {
        output::dump_matrix(path, r)?;
    }
    emit(&finalize(reports, common), common)
}

fn spectrum_command(
    common: &Common,
    levels: bool,
    free_check: bool,
    charges: bool,
    reports_path: Option<&PathBuf>,
) -> Result<bool, CliError> {
    let spec = load_spec(&common.model)?;
    let mut reports = Vec::new();
    let mut w = output::sink(common.out.as_deref())?;
    match spectrum(&spec)? {
        Spectrum::Real(eigs) => {
            let tol = default_degeneracy_tolerance(&eigs);
            let clusters = degeneracies(&eigs, tol);
            w.write_all(output::spectrum_csv(&eigs, &clusters, levels).as_bytes())?;
            if free_check {
                reports.push(free_report(&spec, &eigs));
            }
        }
        Spectrum::Complex { values, warning } => {
            eprintln!("onsager: warning: {warning}");
            w.write_all(output::complex_spectrum_csv(&values).as_bytes())?;
            if free_check {
                return Err(CliError::Config("free-spectrum check needs a Hermitian Hamiltonian".into()));
            }
        }
    }
    w.flush()?;
    if charges {
        reports.extend(charge_compatibility(&spec)?);
    }
    let reports = finalize(reports, common);
    match reports_path {
        Some(p) => {
            let mut rw = output::sink(Some(p))?;
            output::write_reports(&mut rw, &reports)?;
            rw.flush()?;
        }
        None => {
            for r in &reports {
                eprintln!(
                    "{} {}: residual {:e} ({} {:e}) {}",
                    r.suite,
                    r.name,
                    r.residual,
                    r.bound.as_str(),
                    r.tolerance,
                    if r.passed { "pass" } else { "FAIL" }
                );
            }
        }
    }
    Ok(reports.iter().all(|r| r.passed))
}

/// Open chains are expected to have a free spectrum, periodic ones not.
fn free_report(spec: &ModelSpec, eigs: &[f64]) -> VerificationReport {
    let found = find_free_spectrum(eigs, 1e-8);
    let residual = if found.is_some() { 0.0 } else { 1.0 };
    let r = match spec.boundary {
        Boundary::Open => VerificationReport::new("spectral", "free-spectrum", "free-spectrum", residual, 0.5),
        Boundary::Periodic => VerificationReport::with_bound(
            "spectral",
            "free-spectrum-absent",
            "free-spectrum",
            residual,
            0.5,
            Bound::Lower,
        ),
    };
    let r = r.param("model", spec.kind).param("L", spec.l).param("boundary", spec.boundary.as_str());
    match found {
        Some((modes, eps)) => {
            let eps: Vec<String> = eps.iter().map(|e| format!("{e:.12}")).collect();
            r.param("modes", modes).param("eps", eps.join(";"))
        }
        None => r.param("modes", "none"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grids() {
        assert_eq!(parse_grid("0:1:3").unwrap(), vec![0.0, 0.5, 1.0]);
        assert_eq!(parse_grid("0.4:1:1").unwrap(), vec![0.4]);
        assert!(parse_grid("0:1").is_err());
        assert!(parse_grid("0:1:0").is_err());
    }

    #[test]
    fn complex_arguments() {
        assert_eq!(parse_complex("0.3+0.1i", "u").unwrap(), Complex64::new(0.3, 0.1));
        assert_eq!(parse_complex("-0.2", "u").unwrap(), Complex64::new(-0.2, 0.0));
        assert!(parse_complex("x", "u").is_err());
    }
}
