//! Jacobi-type rotation methods for approximate orthogonal diagonalization of
//! symmetric tensors of order 2, 3 and 4.
//!
//! Maximizes `f(Q) = Σ_ℓ Σ_k W⁽ˡ⁾[k, .., k]²` with `W⁽ˡ⁾ = A⁽ˡ⁾ ×₁ Qᵀ ... ×_d Qᵀ`
//! over orthogonal `Q`, one Givens rotation at a time.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod algorithms;
pub mod angle;
pub mod error;
pub mod geometry;
pub mod poly;
pub mod problem;
pub mod symtensor;

pub use algorithms::{run, run_with_clock, AngleMethod, IterationRecord, PairSelector, RunConfig, RunOutcome, StopReason};
pub use angle::{best_angle, AngleResult, SubproblemView};
pub use error::{Error, Result};
pub use geometry::{random_rotation, GivensRotation, LambdaMatrix, RotationState};
pub use problem::{make_test_problem, DiagProfile, ExperimentSpec, TestProblem};
pub use symtensor::{SymTensor, TensorSet};
