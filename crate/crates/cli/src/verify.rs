//! Invariant suite run against a concrete tensor file: gradient checks,
//! closed-form identities and algebraic-vs-oracle angle agreement, each
//! evaluated at a handful of Haar-random rotations of the input.

use std::fmt;

use tensor_jacobi_core::angle::{brute_force_angle, h_derivatives_at_zero, tau_identity_check};
use tensor_jacobi_core::geometry::cyclic_pairs;
use tensor_jacobi_core::{best_angle, random_rotation, RotationState, SubproblemView, TensorSet};

use crate::error::Result;

pub const FD_STEP: f64 = 1e-5;
pub const FD_TOL: f64 = 1e-6;
pub const ANALYTIC_TOL: f64 = 1e-10;
pub const IDENTITY_TOL: f64 = 1e-10;
pub const ORACLE_TOL: f64 = 1e-10;
pub const ORACLE_GRID: usize = 4096;

/// Worst observed residual divided by its allowance; passes when `≤ 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub samples: usize,
    pub worst_ratio: f64,
}

impl Check {
    fn new(name: &'static str) -> Self {
        Self { name, samples: 0, worst_ratio: 0.0 }
    }

    fn record(&mut self, residual: f64, allowance: f64) {
        self.samples += 1;
        let ratio = if residual.is_nan() { f64::INFINITY } else { residual / allowance };
        self.worst_ratio = self.worst_ratio.max(ratio);
    }

    pub fn passed(&self) -> bool {
        self.worst_ratio <= 1.0
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed() { "PASS" } else { "FAIL" };
        write!(f, "{status} {:<22} samples={:<6} worst/tol={:.3e}", self.name, self.samples, self.worst_ratio)
    }
}

#[derive(Debug, Clone)]
pub struct VerifyReport {
    pub checks: Vec<Check>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }
}

/// Runs all checks at `states` random rotations seeded from `seed`.
pub fn verify_tensor_set(set: &TensorSet, states: usize, seed: u64) -> Result<VerifyReport> {
    let n = set.dim();
    let total = set.total_sq_norm();
    let mut analytic = Check::new("gradient-analytic");
    let mut fd = Check::new("gradient-fd");
    let mut identity = Check::new("identity-value");
    let mut identity_d = Check::new("identity-derivative");
    let mut mirror = Check::new("tau-mirror");
    let mut oracle = Check::new("oracle-agreement");
    let identities = set.order() <= 3;

    for s in 0..states {
        let q = random_rotation(n, seed.wrapping_add(s as u64))?;
        let state = RotationState::new(set.clone(), q)?;
        let lambda = state.lambda();
        for (i, j) in cyclic_pairs(n) {
            let view = SubproblemView::from_tensors(state.tensors(), i, j, 0.0)?;
            let scale = view.scale().max(f64::MIN_POSITIVE);
            let (h1, _) = h_derivatives_at_zero(&view);
            let expected = -2.0 * lambda.get(i, j);
            analytic.record((h1 - expected).abs(), ANALYTIC_TOL * h1.abs().max(scale));
            let numeric = (state.objective_along(i, j, FD_STEP) - state.objective_along(i, j, -FD_STEP))
                / (2.0 * FD_STEP);
            fd.record((numeric - h1).abs(), FD_TOL * h1.abs().max(scale));

            if identities {
                for k in 0..=20 {
                    let x = -1.0 + 0.1 * k as f64;
                    let r = tau_identity_check(&view, x)?;
                    identity.record(r.value, IDENTITY_TOL * scale);
                    identity_d.record(r.derivative, IDENTITY_TOL * scale);
                    if x != 0.0 {
                        let (a, b) = (view.h(x.atan()), view.h((-1.0 / x).atan()));
                        mirror.record((a - b).abs(), IDENTITY_TOL * a.abs().max(scale));
                    }
                }
            }

            for delta0 in [0.0, 1e-3 * total, 1e-1 * total] {
                let v = view.with_delta0(delta0)?;
                let alg = best_angle(&v);
                let orc = brute_force_angle(&v, ORACLE_GRID);
                let level = v.h_tilde(orc.theta).abs();
                oracle.record((alg.gain - orc.gain).abs(), ORACLE_TOL * (1.0 + level));
            }
        }
    }

    let mut checks = vec![analytic, fd];
    if identities {
        checks.extend([identity, identity_d, mirror]);
    }
    checks.push(oracle);
    Ok(VerifyReport { checks })
}
