use std::fs::File;
use std::io::BufWriter;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use tensor_jacobi::bench::{run_benchmark, stop_label, timed_run, RunSummary};
use tensor_jacobi::format::{load_orthomat, load_tensor_set, save_orthomat, save_tensor_set};
use tensor_jacobi::suite::{default_configs, parse_suite, Algo, AlgoParams};
use tensor_jacobi::trajectory::write_trajectory;
use tensor_jacobi::verify::verify_tensor_set;
use tensor_jacobi::{CliError, Result};
use tensor_jacobi_core::{make_test_problem, DiagProfile, ExperimentSpec};

#[derive(Parser)]
#[command(name = "tensor-jacobi", version, about = "Jacobi-type diagonalization of symmetric tensors")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a planted test problem.
    Gen(GenArgs),
    /// Run one algorithm and write its trajectory.
    Run(RunArgs),
    /// Run a suite of algorithms on one tensor file.
    Bench(BenchArgs),
    /// Check gradient, identity and angle-solver invariants on a tensor file.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Profile {
    Equal,
    Linear,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    d: usize,
    #[arg(long, default_value_t = 1)]
    m: usize,
    #[arg(long, value_enum, default_value_t = Profile::Linear)]
    profile: Profile,
    /// Noise level per entry, applied before symmetrization.
    #[arg(long, default_value_t = 0.0)]
    sigma: f64,
    #[arg(long, default_value_t = 0)]
    seed_rot: u64,
    #[arg(long, default_value_t = 1)]
    seed_noise: u64,
    /// Build one 4th-order tensor and emit its n third-order slices.
    #[arg(long)]
    slice_mode: bool,
    #[arg(long)]
    out: PathBuf,
    /// Also write the planted diagonalizing rotation.
    #[arg(long)]
    truth: Option<PathBuf>,
}

#[derive(Args)]
struct RunArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long, value_parser = clap::value_parser!(Algo))]
    algo: Algo,
    #[arg(long)]
    eps: Option<f64>,
    #[arg(long)]
    delta0: Option<f64>,
    #[arg(long)]
    thresh: Option<f64>,
    #[arg(long, default_value_t = 100)]
    max_sweeps: usize,
    /// Stationarity tolerance on the norm of Lambda (default 1e-10 * sqrt(total squared norm)).
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long, default_value_t = 1)]
    record_every: usize,
    /// Pick angles by grid search instead of polynomial roots.
    #[arg(long)]
    oracle_angle: bool,
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Record real wall-clock times in the trajectory (otherwise zero).
    #[arg(long)]
    timing: bool,
    /// Starting rotation (orthomat file); identity by default.
    #[arg(long)]
    q0: Option<PathBuf>,
    /// Write the final rotation.
    #[arg(long)]
    q_out: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long = "in")]
    input: PathBuf,
    /// Suite file; the built-in suite is used when omitted.
    #[arg(long)]
    suite: Option<PathBuf>,
    #[arg(long)]
    outdir: PathBuf,
    #[arg(long)]
    timing: bool,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long = "in")]
    input: PathBuf,
    /// Number of random rotations at which the checks are evaluated.
    #[arg(long, default_value_t = 3)]
    states: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Gen(a) => gen(a),
        Command::Run(a) => run(a),
        Command::Bench(a) => bench(a),
        Command::Verify(a) => verify(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn gen(a: GenArgs) -> Result<()> {
    let spec = ExperimentSpec {
        n: a.n,
        d: a.d,
        m: a.m,
        profile: match a.profile {
            Profile::Equal => DiagProfile::Equal,
            Profile::Linear => DiagProfile::Linear,
        },
        sigma: a.sigma,
        seed_rotation: a.seed_rot,
        seed_noise: a.seed_noise,
        slice_mode: a.slice_mode,
    };
    let problem = make_test_problem(&spec)?;
    save_tensor_set(&a.out, &problem.tensors)?;
    if let Some(path) = &a.truth {
        save_orthomat(path, &problem.ground_truth)?;
    }
    eprintln!(
        "wrote {} tensor(s) of order {} and dimension {} to {}",
        problem.tensors.len(),
        problem.tensors.order(),
        problem.tensors.dim(),
        a.out.display()
    );
    Ok(())
}

fn print_summary(name: &str, s: &RunSummary) {
    println!(
        "{name}: f={:.17e} offdiag_sq={:.6e} lambda_norm={:.6e} sweeps={} rotations={} stop={} wall_ms={:.1}",
        s.f,
        s.offdiag_sq,
        s.lambda_norm,
        s.sweeps,
        s.rotations,
        stop_label(s.stop),
        s.wall_ms
    );
}

fn run(a: RunArgs) -> Result<()> {
    let set = load_tensor_set(&a.input)?;
    let params = AlgoParams {
        algo: a.algo,
        eps: a.eps,
        delta0: a.delta0,
        thresh: a.thresh,
        max_sweeps: Some(a.max_sweeps),
        tol: a.tol,
        record_every: Some(a.record_every),
        oracle: a.oracle_angle,
    };
    let config = params.to_config(set.dim(), set.total_sq_norm())?;
    let q0 = a.q0.as_deref().map(load_orthomat).transpose()?;
    let (out, wall) = timed_run(set, q0, &config)?;
    if let Some(path) = &a.csv {
        let file = File::create(path).map_err(|e| CliError::io(path, e))?;
        write_trajectory(BufWriter::new(file), &out.records, a.timing)?;
    }
    if let Some(path) = &a.q_out {
        save_orthomat(path, out.state.q())?;
    }
    print_summary(&a.algo.to_string(), &RunSummary::from_outcome(&out, wall, a.csv.clone()));
    Ok(())
}

fn bench(a: BenchArgs) -> Result<()> {
    let set = load_tensor_set(&a.input)?;
    let (n, total) = (set.dim(), set.total_sq_norm());
    let configs = match &a.suite {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
            parse_suite(&text)?
                .into_iter()
                .map(|e| Ok((e.name, e.params.to_config(n, total)?)))
                .collect::<Result<Vec<_>>>()?
        }
        None => default_configs(n, total)?,
    };
    let report = run_benchmark(&set, None, &configs, Some(&a.outdir), a.timing)?;
    for run in &report.runs {
        match &run.result {
            Ok(s) => print_summary(&run.name, s),
            Err(e) => println!("{}: error: {e}", run.name),
        }
    }
    if report.all_ok() {
        Ok(())
    } else {
        Err(CliError::parse(0, "some configurations failed"))
    }
}

fn verify(a: VerifyArgs) -> Result<()> {
    let set = load_tensor_set(&a.input)?;
    let report = verify_tensor_set(&set, a.states.max(1), a.seed)?;
    for c in &report.checks {
        println!("{c}");
    }
    if report.passed() {
        Ok(())
    } else {
        Err(CliError::Invariant("see failed checks above".into()))
    }
}
