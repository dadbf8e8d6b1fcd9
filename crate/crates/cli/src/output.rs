//! Wire formats: JSON-lines reports, spectrum CSV, θ-scan lines and matrix
//! dumps.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use onsager_core::intertwiner::ScanPoint;
use onsager_core::{ComplexMatrix, VerificationReport};
use serde::Serialize;
use serde_json::{Map, Value};

#[derive(Serialize)]
struct ReportLine<'a> {
    suite: &'a str,
    name: &'a str,
    paper_anchor: &'a str,
    params: Map<String, Value>,
    residual: f64,
    tol: f64,
    bound: &'a str,
    passed: bool,
    seed: Option<u64>,
    wall_ms: u64,
}

/// One JSON object per report, newline-terminated. Non-finite residuals
/// serialise as `null`.
pub fn report_line(r: &VerificationReport) -> String {
    let params = r.params.iter().map(|(k, v)| (k.clone(), Value::String(v.clone()))).collect();
    let line = ReportLine {
        suite: &r.suite,
        name: &r.name,
        paper_anchor: &r.anchor,
        params,
        residual: r.residual,
        tol: r.tolerance,
        bound: r.bound.as_str(),
        passed: r.passed,
        seed: r.seed,
        wall_ms: r.wall_ms,
    };
    let mut s = serde_json::to_string(&line).expect("report serialises");
    s.push('\n');
    s
}

pub fn write_reports(w: &mut dyn Write, reports: &[VerificationReport]) -> io::Result<()> {
    for r in reports {
        w.write_all(report_line(r).as_bytes())?;
    }
    Ok(())
}

#[derive(Serialize)]
struct ScanLine {
    theta: f64,
    z: [f64; 2],
    w: [f64; 2],
    kernel_dim: usize,
    ybe_residual: Option<f64>,
}

pub fn scan_line(p: &ScanPoint) -> String {
    let line = ScanLine {
        theta: p.theta,
        z: [p.z.re, p.z.im],
        w: [p.w.re, p.w.im],
        kernel_dim: p.kernel_dim,
        ybe_residual: p.ybe_residual,
    };
    let mut s = serde_json::to_string(&line).expect("scan line serialises");
    s.push('\n');
    s
}

/// `index,energy,multiplicity`, one row per eigenvalue (multiplicity of its
/// cluster) or, with `levels`, one row per distinct level.
pub fn spectrum_csv(eigs: &[f64], clusters: &[(f64, usize)], levels: bool) -> String {
    let mut out = String::from("index,energy,multiplicity\n");
    if levels {
        for (i, (e, m)) in clusters.iter().enumerate() {
            out.push_str(&format!("{i},{e:.12},{m}\n"));
        }
    } else {
        let mut i = 0;
        for &(_, m) in clusters {
            for _ in 0..m {
                out.push_str(&format!("{i},{:.12},{m}\n", eigs[i]));
                i += 1;
            }
        }
    }
    out
}

/// `index,energy_re,energy_im` for non-Hermitian Hamiltonians.
pub fn complex_spectrum_csv(values: &[onsager_core::Complex64]) -> String {
    let mut out = String::from("index,energy_re,energy_im\n");
    for (i, z) in values.iter().enumerate() {
        out.push_str(&format!("{i},{:.12},{:.12}\n", z.re, z.im));
    }
    out
}

/// Writes a matrix as little-endian binary (`rows: u64, cols: u64`, then
/// row-major interleaved `re, im` doubles), or as CSV `row,col,re,im` when
/// the path ends in `.csv`.
pub fn dump_matrix(path: &Path, m: &ComplexMatrix) -> io::Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    if path.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv")) {
        writeln!(w, "row,col,re,im")?;
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                let z = m[(i, j)];
                writeln!(w, "{i},{j},{:e},{:e}", z.re, z.im)?;
            }
        }
    } else {
        w.write_all(&m.to_le_bytes())?;
    }
    w.flush()
}

/// Opens `path` for writing, or stdout.
pub fn sink(path: Option<&Path>) -> io::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}
