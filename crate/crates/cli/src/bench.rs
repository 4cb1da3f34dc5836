//! Runs several algorithm configurations on one instance, in parallel, from a
//! shared starting rotation.

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use nalgebra::DMatrix;
use rayon::prelude::*;
use tensor_jacobi_core::{run_with_clock, RunConfig, RunOutcome, StopReason, TensorSet};

use crate::error::{CliError, Result};
use crate::format::fmt_f64;
use crate::trajectory::write_trajectory;

/// Final figures of one run; `f`, `offdiag_sq`, `lambda_norm` and `sweeps`
/// equal those of the trajectory's last row.
#[derive(Debug, Clone, PartialEq)]
pub struct RunSummary {
    pub f: f64,
    pub offdiag_sq: f64,
    pub lambda_norm: f64,
    pub sweeps: usize,
    pub rotations: usize,
    pub stop: StopReason,
    pub wall_ms: f64,
    pub csv_path: Option<PathBuf>,
}

impl RunSummary {
    pub fn from_outcome(out: &RunOutcome, wall_ms: f64, csv_path: Option<PathBuf>) -> Self {
        let last = out.final_record();
        Self {
            f: last.f,
            offdiag_sq: last.offdiag_sq,
            lambda_norm: last.lambda_norm,
            sweeps: out.sweeps,
            rotations: out.rotations,
            stop: out.stop,
            wall_ms,
            csv_path,
        }
    }
}

#[derive(Debug)]
pub struct BenchRun {
    pub name: String,
    pub result: std::result::Result<RunSummary, String>,
    /// Full outcome, kept for in-process inspection.
    pub outcome: Option<RunOutcome>,
}

#[derive(Debug)]
pub struct BenchmarkReport {
    pub runs: Vec<BenchRun>,
}

impl BenchmarkReport {
    pub fn all_ok(&self) -> bool {
        self.runs.iter().all(|r| r.result.is_ok())
    }

    pub fn get(&self, name: &str) -> Option<&BenchRun> {
        self.runs.iter().find(|r| r.name == name)
    }

    /// `name,status,f,offdiag_sq,lambda_norm,sweeps,rotations,stop,wall_ms,csv`
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record([
            "name", "status", "f", "offdiag_sq", "lambda_norm", "sweeps", "rotations", "stop", "wall_ms", "csv",
        ])?;
        for run in &self.runs {
            match &run.result {
                Ok(s) => w.write_record([
                    run.name.clone(),
                    "ok".into(),
                    fmt_f64(s.f),
                    fmt_f64(s.offdiag_sq),
                    fmt_f64(s.lambda_norm),
                    s.sweeps.to_string(),
                    s.rotations.to_string(),
                    stop_label(s.stop).into(),
                    format!("{:.3}", s.wall_ms),
                    s.csv_path.as_ref().map(|p| p.display().to_string()).unwrap_or_default(),
                ])?,
                Err(e) => w.write_record([
                    run.name.as_str(),
                    "error",
                    "",
                    "",
                    "",
                    "",
                    "",
                    e.as_str(),
                    "",
                    "",
                ])?,
            }
        }
        w.flush().map_err(|e| CliError::io("<report>", e))?;
        Ok(())
    }
}

pub fn stop_label(stop: StopReason) -> &'static str {
    match stop {
        StopReason::Stationary => "stationary",
        StopReason::NoProgress => "no-progress",
        StopReason::Stalled => "stalled",
        StopReason::MaxSweeps => "max-sweeps",
    }
}

/// Runs a single configuration, timing it with a monotonic clock.
pub fn timed_run(set: TensorSet, q0: Option<DMatrix<f64>>, config: &RunConfig) -> Result<(RunOutcome, f64)> {
    let start = Instant::now();
    let mut clock = || start.elapsed().as_secs_f64() * 1e3;
    let out = run_with_clock(set, q0, config, &mut clock)?;
    Ok((out, start.elapsed().as_secs_f64() * 1e3))
}

/// Runs every configuration from `q0` (identity when `None`). When `outdir`
/// is given, each trajectory goes to `<outdir>/<name>.csv`. A failing
/// configuration is reported without stopping the others.
pub fn run_benchmark(
    set: &TensorSet,
    q0: Option<&DMatrix<f64>>,
    configs: &[(String, RunConfig)],
    outdir: Option<&Path>,
    timing: bool,
) -> Result<BenchmarkReport> {
    if let Some(dir) = outdir {
        fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    }
    let runs = configs
        .par_iter()
        .map(|(name, config)| {
            let attempt = || -> Result<(RunSummary, RunOutcome)> {
                let (out, wall) = timed_run(set.clone(), q0.cloned(), config)?;
                let csv_path = match outdir {
                    Some(dir) => {
                        let path = dir.join(format!("{name}.csv"));
                        let file = File::create(&path).map_err(|e| CliError::io(&path, e))?;
                        write_trajectory(BufWriter::new(file), &out.records, timing)?;
                        Some(path)
                    }
                    None => None,
                };
                Ok((RunSummary::from_outcome(&out, wall, csv_path), out))
            };
            match attempt() {
                Ok((summary, out)) => BenchRun { name: name.clone(), result: Ok(summary), outcome: Some(out) },
                Err(e) => BenchRun { name: name.clone(), result: Err(e.to_string()), outcome: None },
            }
        })
        .collect();
    let report = BenchmarkReport { runs };
    if let Some(dir) = outdir {
        let path = dir.join("report.csv");
        let file = File::create(&path).map_err(|e| CliError::io(&path, e))?;
        report.write_csv(BufWriter::new(file))?;
    }
    Ok(report)
}
