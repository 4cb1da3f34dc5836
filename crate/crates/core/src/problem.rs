//! Planted test problems: `A⁽ˡ⁾ = D⁽ˡ⁾ ×₁ Qᵀ ... ×_d Qᵀ + E⁽ˡ⁾` with diagonal `D`,
//! Haar-random `Q` and symmetrized Gaussian noise `E`.

use alloc::vec::Vec;

use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::geometry::random_rotation;
use crate::symtensor::{symmetrize, DenseTensor, SymTensor, TensorSet, MAX_ORDER};

/// Diagonal values of the planted tensor before normalization to `‖D‖ = 1`.
#[derive(Debug, Clone, PartialEq)]
pub enum DiagProfile {
    /// `D_kk ∝ 1`.
    Equal,
    /// `D_kk ∝ k + 1` (zero-based `k`).
    Linear,
    Custom(Vec<f64>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSpec {
    pub n: usize,
    pub d: usize,
    /// Number of tensors. Ignored in slice mode, which yields `n` slices.
    pub m: usize,
    pub profile: DiagProfile,
    /// Noise standard deviation per entry before symmetrization.
    pub sigma: f64,
    pub seed_rotation: u64,
    pub seed_noise: u64,
    /// Build one order-4 tensor and return its `n` order-3 slices along the last mode.
    pub slice_mode: bool,
}

impl ExperimentSpec {
    pub fn new(n: usize, d: usize) -> Self {
        Self {
            n,
            d,
            m: 1,
            profile: DiagProfile::Linear,
            sigma: 0.0,
            seed_rotation: 0,
            seed_noise: 1,
            slice_mode: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(2..=MAX_ORDER).contains(&self.d) {
            return Err(Error::UnsupportedOrder(self.d));
        }
        if self.n < 2 {
            return Err(Error::InvalidParameter("n must be at least 2"));
        }
        if self.m == 0 {
            return Err(Error::InvalidParameter("m must be at least 1"));
        }
        if !(self.sigma >= 0.0 && self.sigma.is_finite()) {
            return Err(Error::InvalidParameter("sigma must be finite and nonnegative"));
        }
        if self.slice_mode && self.d != 4 {
            return Err(Error::InvalidParameter("slice mode needs d = 4"));
        }
        if let DiagProfile::Custom(v) = &self.profile {
            if v.len() != self.n {
                return Err(Error::DimensionMismatch { expected: self.n, found: v.len() });
            }
        }
        Ok(())
    }
}

/// A generated instance together with the rotation `P = Qᵀ` that maps the
/// noise-free tensors back to diagonal form.
#[derive(Debug, Clone)]
pub struct TestProblem {
    pub tensors: TensorSet,
    pub ground_truth: DMatrix<f64>,
}

/// Normalized diagonal values for `spec` (unit Euclidean norm).
pub fn diag_values(spec: &ExperimentSpec) -> Result<Vec<f64>> {
    let n = spec.n;
    let raw: Vec<f64> = match &spec.profile {
        DiagProfile::Equal => alloc::vec![1.0; n],
        DiagProfile::Linear => (1..=n).map(|k| k as f64).collect(),
        DiagProfile::Custom(v) => {
            if v.len() != n {
                return Err(Error::DimensionMismatch { expected: n, found: v.len() });
            }
            v.clone()
        }
    };
    if raw.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite);
    }
    let norm = libm::sqrt(raw.iter().map(|v| v * v).sum::<f64>());
    if norm == 0.0 {
        return Err(Error::InvalidParameter("diagonal profile has zero norm"));
    }
    Ok(raw.into_iter().map(|v| v / norm).collect())
}

/// The planted diagonal tensor `D` of order `spec.d`.
pub fn make_diag_tensor(spec: &ExperimentSpec) -> Result<SymTensor> {
    SymTensor::diagonal(spec.d, &diag_values(spec)?)
}

/// Builds the instance described by `spec`.
///
/// For `m > 1` member `ℓ` uses the diagonal values shifted cyclically by `ℓ`,
/// so every member shares the eigenbasis `Q` but differs in its spectrum.
/// Noise for all members is drawn in order from one stream seeded by
/// `seed_noise`; it is skipped entirely when `sigma = 0`.
pub fn make_test_problem(spec: &ExperimentSpec) -> Result<TestProblem> {
    spec.validate()?;
    let n = spec.n;
    let q = random_rotation(n, spec.seed_rotation)?;
    let qt = q.transpose();
    let values = diag_values(spec)?;
    let mut rng = ChaCha20Rng::seed_from_u64(spec.seed_noise);
    let members = if spec.slice_mode { 1 } else { spec.m };

    let mut tensors = Vec::with_capacity(members);
    for l in 0..members {
        let shifted: Vec<f64> = (0..n).map(|k| values[(k + l) % n]).collect();
        let d = SymTensor::diagonal(spec.d, &shifted)?;
        let mut a = d.rotate_by(&q)?;
        if spec.sigma > 0.0 {
            a = add_noise(&a, spec.sigma, &mut rng)?;
        }
        tensors.push(a);
    }

    let tensors = if spec.slice_mode {
        let a = &tensors[0];
        (0..n).map(|t| a.slice_last(t)).collect::<Result<Vec<_>>>()?
    } else {
        tensors
    };
    Ok(TestProblem { tensors: TensorSet::new(tensors)?, ground_truth: qt })
}

fn add_noise(a: &SymTensor, sigma: f64, rng: &mut ChaCha20Rng) -> Result<SymTensor> {
    let mut g = DenseTensor::zeros(alloc::vec![a.dim(); a.order()]);
    for (slot, &v) in g.data_mut().iter_mut().zip(a.data()) {
        let z: f64 = StandardNormal.sample(rng);
        *slot = v + sigma * z;
    }
    symmetrize(&g)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn profiles_are_normalized() {
        let mut spec = ExperimentSpec::new(4, 3);
        for profile in [DiagProfile::Equal, DiagProfile::Linear, DiagProfile::Custom(alloc::vec![3.0, 0.0, -4.0, 0.0])] {
            spec.profile = profile;
            let v = diag_values(&spec).unwrap();
            assert!((v.iter().map(|x| x * x).sum::<f64>() - 1.0).abs() < 1e-15);
        }
        assert_eq!(diag_values(&spec).unwrap(), alloc::vec![0.6, 0.0, -0.8, 0.0]);
        spec.profile = DiagProfile::Custom(alloc::vec![0.0; 4]);
        assert!(make_diag_tensor(&spec).is_err());
    }

    #[test]
    fn ground_truth_recovers_the_diagonal() {
        for d in 2..=4 {
            let mut spec = ExperimentSpec::new(5, d);
            spec.m = 2;
            spec.seed_rotation = 11;
            let p = make_test_problem(&spec).unwrap();
            let w = p.tensors.rotate_by(&p.ground_truth).unwrap();
            assert!(w.offdiag_sq_norm() < 1e-26, "d = {d}: {}", w.offdiag_sq_norm());
            assert!((w.total_sq_norm() - 2.0).abs() < 1e-12);
        }
    }

    #[test]
    fn slice_mode_yields_n_order_three_tensors() {
        let mut spec = ExperimentSpec::new(4, 4);
        spec.slice_mode = true;
        let p = make_test_problem(&spec).unwrap();
        assert_eq!(p.tensors.len(), 4);
        assert_eq!(p.tensors.order(), 3);
        let w = p.tensors.rotate_by(&p.ground_truth).unwrap();
        assert!(w.offdiag_sq_norm() < 1e-26);
        spec.d = 3;
        assert!(make_test_problem(&spec).is_err());
    }

    #[test]
    fn noise_is_seeded_and_symmetric() {
        let mut spec = ExperimentSpec::new(3, 3);
        spec.sigma = 1e-2;
        let a = make_test_problem(&spec).unwrap();
        let b = make_test_problem(&spec).unwrap();
        assert_eq!(a.tensors, b.tensors);
        assert_eq!(a.tensors.tensors()[0].max_asymmetry(), 0.0);
        spec.seed_noise = 2;
        assert_ne!(make_test_problem(&spec).unwrap().tensors, a.tensors);
    }
}
