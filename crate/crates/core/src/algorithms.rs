//! Sweep drivers: Jacobi-C, Jacobi-G (ε rule and max rule), Jacobi-C-threshold
//! and the proximal Jacobi-PC, sharing one loop over a [`RotationState`].

use alloc::vec;
use alloc::vec::Vec;

use nalgebra::DMatrix;

use crate::angle::{best_angle, brute_force_angle, SubproblemView};
use crate::error::{Error, Result};
use crate::geometry::{cyclic_pairs, pair_count, GivensRotation, LambdaMatrix, RotationState};
use crate::symtensor::TensorSet;

/// Default `‖Λ‖` threshold relative to `sqrt(Σ‖A⁽ˡ⁾‖²)`.
pub const DEFAULT_RELATIVE_TOL: f64 = 1e-10;
pub const DEFAULT_MAX_SWEEPS: usize = 100;

/// Rule for choosing the next index pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PairSelector {
    /// Row-major cyclic order `(1,2) → (1,3) → ... → (n−1,n) → (1,2) ...`.
    Cyclic,
    /// First pair in cyclic order (continuing from the previous choice) with
    /// `2|Λ_ij| ≥ ε‖Λ‖`, `0 < ε ≤ 2/n`.
    GradientEps(f64),
    /// Pair maximizing `|Λ_ij|`.
    GradientMax,
    /// Cyclic order, rotating only when `|Λ_ij| > δ/n`; stops after a sweep
    /// without progress.
    CyclicThreshold(f64),
}

impl PairSelector {
    /// Jacobi-G selector, checking `0 < ε ≤ 2/n`.
    pub fn gradient(eps: f64, n: usize) -> Result<Self> {
        let s = PairSelector::GradientEps(eps);
        s.validate(n)?;
        Ok(s)
    }

    pub fn validate(&self, n: usize) -> Result<()> {
        match *self {
            PairSelector::GradientEps(eps) => {
                if !(eps > 0.0 && eps <= 2.0 / n as f64) {
                    return Err(Error::InvalidParameter("epsilon must satisfy 0 < eps <= 2/n"));
                }
            }
            PairSelector::CyclicThreshold(delta) => {
                if !(delta > 0.0 && delta.is_finite()) {
                    return Err(Error::InvalidParameter("threshold must be positive"));
                }
            }
            PairSelector::Cyclic | PairSelector::GradientMax => {}
        }
        Ok(())
    }
}

/// How the per-rotation angle is computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AngleMethod {
    /// Real roots of `Ω(ξ)`.
    Algebraic,
    /// Grid plus golden-section search ("oracle-angle mode").
    Oracle { grid_points: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub selector: PairSelector,
    /// Proximal weight; `δ₀ > 0` turns the objective into `f − δ₀γ` per rotation.
    pub delta0: f64,
    pub max_sweeps: usize,
    /// Absolute `‖Λ‖` threshold. `None` means `1e-10 · sqrt(Σ‖A⁽ˡ⁾‖²)`.
    pub stationarity_tol: Option<f64>,
    /// Keep one record every this many iterations (the final state is always kept).
    pub record_every: usize,
    pub angle_method: AngleMethod,
    /// Seed of the problem instance, carried for provenance only.
    pub seed: Option<u64>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            selector: PairSelector::Cyclic,
            delta0: 0.0,
            max_sweeps: DEFAULT_MAX_SWEEPS,
            stationarity_tol: None,
            record_every: 1,
            angle_method: AngleMethod::Algebraic,
            seed: None,
        }
    }
}

impl RunConfig {
    pub fn jacobi_c() -> Self {
        Self::default()
    }

    pub fn jacobi_g(eps: f64) -> Self {
        Self { selector: PairSelector::GradientEps(eps), ..Self::default() }
    }

    pub fn jacobi_g_max() -> Self {
        Self { selector: PairSelector::GradientMax, ..Self::default() }
    }

    pub fn jacobi_c_threshold(delta: f64) -> Self {
        Self { selector: PairSelector::CyclicThreshold(delta), ..Self::default() }
    }

    pub fn jacobi_pc(delta0: f64) -> Self {
        Self { delta0, ..Self::default() }
    }

    pub fn with_max_sweeps(mut self, max_sweeps: usize) -> Self {
        self.max_sweeps = max_sweeps;
        self
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.stationarity_tol = Some(tol);
        self
    }

    pub fn validate(&self, n: usize) -> Result<()> {
        self.selector.validate(n)?;
        if !(self.delta0 >= 0.0 && self.delta0.is_finite()) {
            return Err(Error::InvalidParameter("delta0 must be finite and nonnegative"));
        }
        if self.max_sweeps == 0 {
            return Err(Error::InvalidParameter("max_sweeps must be at least 1"));
        }
        if self.record_every == 0 {
            return Err(Error::InvalidParameter("record_every must be at least 1"));
        }
        if let Some(tol) = self.stationarity_tol {
            if !(tol > 0.0) {
                return Err(Error::InvalidParameter("stationarity tolerance must be positive"));
            }
        }
        if let AngleMethod::Oracle { grid_points } = self.angle_method {
            if grid_points < 1000 {
                return Err(Error::InvalidParameter("oracle grid needs at least 1000 points"));
            }
        }
        Ok(())
    }
}

/// Telemetry for one iteration, taken after the rotation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IterationRecord {
    /// Rotations performed so far (skipped iterations do not count).
    pub k: usize,
    pub sweep: usize,
    /// Zero-based pair; `None` for the initial record.
    pub pair: Option<(usize, usize)>,
    pub theta: f64,
    pub f: f64,
    pub offdiag_sq: f64,
    pub lambda_norm: f64,
    pub skipped: bool,
    pub wall_ms: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StopReason {
    /// `‖Λ‖` fell to the stationarity tolerance (or vanished).
    Stationary,
    /// A threshold sweep performed no rotation.
    NoProgress,
    /// A full sweep's worth of iterations left the state unchanged.
    Stalled,
    MaxSweeps,
}

#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub state: RotationState,
    pub records: Vec<IterationRecord>,
    pub stop: StopReason,
    /// Number of sweeps in which at least one iteration ran.
    pub sweeps: usize,
    /// Number of rotations performed.
    pub rotations: usize,
    pub stationarity_tol: f64,
}

impl RunOutcome {
    pub fn final_record(&self) -> &IterationRecord {
        self.records.last().expect("a run always records its initial state")
    }

    pub fn converged(&self) -> bool {
        matches!(self.stop, StopReason::Stationary | StopReason::NoProgress)
    }
}

/// Pair number `counter` (mod `n(n−1)/2`) of the row-major cyclic order.
pub fn cyclic_pair(counter: usize, n: usize) -> (usize, usize) {
    let mut c = counter % pair_count(n);
    let mut i = 0;
    loop {
        let row = n - 1 - i;
        if c < row {
            return (i, i + 1 + c);
        }
        c -= row;
        i += 1;
    }
}

/// First pair with `2|Λ_ij| ≥ ε‖Λ‖`, scanning cyclic order from position 0.
/// `None` when `Λ = 0`.
pub fn select_pair_gradient(lambda: &LambdaMatrix, eps: f64) -> Option<(usize, usize)> {
    select_pair_gradient_from(lambda, eps, 0).map(|(_, p)| p)
}

/// As [`select_pair_gradient`], scanning from cyclic position `start`;
/// also returns the position of the chosen pair.
pub fn select_pair_gradient_from(
    lambda: &LambdaMatrix,
    eps: f64,
    start: usize,
) -> Option<(usize, (usize, usize))> {
    let n = lambda.dim();
    let norm = lambda.norm();
    if norm == 0.0 {
        return None;
    }
    let total = pair_count(n);
    for offset in 0..total {
        let pos = (start + offset) % total;
        let (i, j) = cyclic_pair(pos, n);
        if 2.0 * lambda.get(i, j).abs() >= eps * norm {
            return Some((pos, (i, j)));
        }
    }
    // Unreachable for eps ≤ 2/n up to rounding; the maximal entry always qualifies.
    let p = select_pair_max(lambda)?;
    let pos = cyclic_pairs(n).iter().position(|&q| q == p).unwrap_or(0);
    Some((pos, p))
}

/// Pair maximizing `|Λ_ij|`, ties to the smallest `(i, j)`. `None` when `Λ = 0`.
pub fn select_pair_max(lambda: &LambdaMatrix) -> Option<(usize, usize)> {
    let n = lambda.dim();
    let mut best = 0.0;
    let mut pair = None;
    for i in 0..n {
        for j in i + 1..n {
            let v = lambda.get(i, j).abs();
            if v > best {
                best = v;
                pair = Some((i, j));
            }
        }
    }
    pair
}

/// `‖Λ(Q)‖` for the current state.
pub fn stationarity_norm(state: &RotationState) -> f64 {
    state.stationarity_norm()
}

/// Runs the configured variant from `q0` (identity when `None`).
pub fn run(a: TensorSet, q0: Option<DMatrix<f64>>, config: &RunConfig) -> Result<RunOutcome> {
    run_with_clock(a, q0, config, &mut || 0.0)
}

/// As [`run`], stamping each record with `clock()` (milliseconds).
pub fn run_with_clock(
    a: TensorSet,
    q0: Option<DMatrix<f64>>,
    config: &RunConfig,
    clock: &mut dyn FnMut() -> f64,
) -> Result<RunOutcome> {
    let n = a.dim();
    config.validate(n)?;
    let mut state = match q0 {
        Some(q) => RotationState::new(a, q)?,
        None => RotationState::identity(a)?,
    };
    let tol = config
        .stationarity_tol
        .unwrap_or(DEFAULT_RELATIVE_TOL * libm::sqrt(state.total_sq_norm()));
    let pairs = cyclic_pairs(n);
    let per_sweep = pairs.len();

    let mut lambda = state.lambda();
    let mut records = vec![IterationRecord {
        k: 0,
        sweep: 0,
        pair: None,
        theta: 0.0,
        f: state.f(),
        offdiag_sq: state.offdiag_sq_norm(),
        lambda_norm: lambda.norm(),
        skipped: false,
        wall_ms: clock(),
    }];

    let mut rotations = 0;
    let mut iterations = 0;
    let mut cursor = 0;
    let mut idle = 0;
    let mut sweeps = 0;
    let mut stop = StopReason::MaxSweeps;
    let mut last_recorded = 0;

    'sweeps: for sweep in 0..config.max_sweeps {
        let mut progress = false;
        for _ in 0..per_sweep {
            let lambda_norm = lambda.norm();
            if lambda_norm <= tol {
                stop = StopReason::Stationary;
                break 'sweeps;
            }
            let (pair, skipped) = match config.selector {
                PairSelector::Cyclic => {
                    let p = pairs[cursor % per_sweep];
                    cursor += 1;
                    (p, false)
                }
                PairSelector::CyclicThreshold(delta) => {
                    let p = pairs[cursor % per_sweep];
                    cursor += 1;
                    (p, lambda.get(p.0, p.1).abs() <= delta / n as f64)
                }
                PairSelector::GradientEps(eps) => {
                    match select_pair_gradient_from(&lambda, eps, cursor % per_sweep) {
                        Some((pos, p)) => {
                            cursor = pos + 1;
                            (p, false)
                        }
                        None => {
                            stop = StopReason::Stationary;
                            break 'sweeps;
                        }
                    }
                }
                PairSelector::GradientMax => match select_pair_max(&lambda) {
                    Some(p) => (p, false),
                    None => {
                        stop = StopReason::Stationary;
                        break 'sweeps;
                    }
                },
            };
            iterations += 1;
            sweeps = sweep + 1;

            let mut theta = 0.0;
            if !skipped {
                let view = SubproblemView::from_tensors(state.tensors(), pair.0, pair.1, config.delta0)?;
                let result = match config.angle_method {
                    AngleMethod::Algebraic => best_angle(&view),
                    AngleMethod::Oracle { grid_points } => brute_force_angle(&view, grid_points),
                };
                theta = result.theta;
                rotations += 1;
                if theta != 0.0 {
                    state.apply_rotation(&GivensRotation::new(pair.0, pair.1, theta)?)?;
                    lambda = state.lambda();
                    progress = true;
                }
            }
            idle = if theta != 0.0 { 0 } else { idle + 1 };

            if iterations % config.record_every == 0 {
                records.push(IterationRecord {
                    k: rotations,
                    sweep,
                    pair: Some(pair),
                    theta,
                    f: state.f(),
                    offdiag_sq: state.offdiag_sq_norm(),
                    lambda_norm: lambda.norm(),
                    skipped,
                    wall_ms: clock(),
                });
                last_recorded = iterations;
            }
            if idle >= per_sweep {
                stop = StopReason::Stalled;
                break 'sweeps;
            }
        }
        if matches!(config.selector, PairSelector::CyclicThreshold(_)) && !progress {
            stop = StopReason::NoProgress;
            break;
        }
    }

    if last_recorded != iterations {
        let prev = *records.last().expect("initial record");
        records.push(IterationRecord {
            k: rotations,
            f: state.f(),
            offdiag_sq: state.offdiag_sq_norm(),
            lambda_norm: lambda.norm(),
            wall_ms: clock(),
            ..prev
        });
    }

    Ok(RunOutcome { state, records, stop, sweeps, rotations, stationarity_tol: tol })
}
