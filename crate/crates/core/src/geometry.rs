//! Orthogonal-group utilities: Givens rotations, Haar-random rotations, the
//! projected gradient `Λ(Q)` and the rotation state carried by the drivers.

use alloc::vec::Vec;
use core::f64::consts::FRAC_PI_4;

use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::symtensor::TensorSet;

/// Orthogonality deviation above which `Q` is re-orthonormalized.
pub const REORTHONORMALIZE_TOL: f64 = 1e-8;

/// Plane rotation `G(i, j, θ)` with `i < j` and `θ ∈ [−π/4, π/4]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GivensRotation {
    i: usize,
    j: usize,
    theta: f64,
    c: f64,
    s: f64,
}

impl GivensRotation {
    pub fn new(i: usize, j: usize, theta: f64) -> Result<Self> {
        if i >= j {
            return Err(Error::InvalidParameter("Givens pair must satisfy i < j"));
        }
        if !theta.is_finite() || theta.abs() > FRAC_PI_4 * (1.0 + 1e-12) {
            return Err(Error::InvalidParameter("Givens angle must lie in [-pi/4, pi/4]"));
        }
        Ok(Self { i, j, theta, c: libm::cos(theta), s: libm::sin(theta) })
    }

    pub fn pair(&self) -> (usize, usize) {
        (self.i, self.j)
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn cos(&self) -> f64 {
        self.c
    }

    pub fn sin(&self) -> f64 {
        self.s
    }

    pub fn matrix(&self, n: usize) -> Result<DMatrix<f64>> {
        givens_matrix(n, self.i, self.j, self.theta)
    }
}

/// `n × n` identity with the `(i, j)` plane rotated by `θ`:
/// `G[i,i] = G[j,j] = cos θ`, `G[i,j] = −sin θ`, `G[j,i] = sin θ`.
pub fn givens_matrix(n: usize, i: usize, j: usize, theta: f64) -> Result<DMatrix<f64>> {
    if i >= j {
        return Err(Error::InvalidParameter("Givens pair must satisfy i < j"));
    }
    if j >= n {
        return Err(Error::IndexOutOfBounds { index: j, bound: n });
    }
    let (c, s) = (libm::cos(theta), libm::sin(theta));
    let mut g = DMatrix::identity(n, n);
    g[(i, i)] = c;
    g[(j, j)] = c;
    g[(i, j)] = -s;
    g[(j, i)] = s;
    Ok(g)
}

/// `‖QᵀQ − I‖_F`
pub fn orthogonality_error(q: &DMatrix<f64>) -> f64 {
    let n = q.ncols();
    (q.transpose() * q - DMatrix::<f64>::identity(n, n)).norm()
}

/// Orthonormalizes the columns of `m` by QR with `diag(R) > 0`.
fn orthonormalize(m: DMatrix<f64>) -> DMatrix<f64> {
    let n = m.ncols();
    let qr = m.qr();
    let r = qr.r();
    let mut q = qr.q();
    for k in 0..n {
        if r[(k, k)] < 0.0 {
            q.column_mut(k).neg_mut();
        }
    }
    q
}

/// Haar-distributed element of SO(n), deterministic in `seed` (ChaCha20 stream).
pub fn random_rotation(n: usize, seed: u64) -> Result<DMatrix<f64>> {
    if n < 2 {
        return Err(Error::InvalidParameter("rotation dimension must be at least 2"));
    }
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    Ok(random_rotation_with(n, &mut rng))
}

pub(crate) fn random_rotation_with<R: rand::Rng + ?Sized>(n: usize, rng: &mut R) -> DMatrix<f64> {
    let g = DMatrix::from_fn(n, n, |_, _| StandardNormal.sample(rng));
    let mut q = orthonormalize(g);
    if q.determinant() < 0.0 {
        q.column_mut(0).neg_mut();
    }
    q
}

/// Skew-symmetric matrix `Λ(Q)`; the projected gradient is `Q·Λ(Q)`.
#[derive(Debug, Clone, PartialEq)]
pub struct LambdaMatrix(DMatrix<f64>);

impl LambdaMatrix {
    /// `Λ[k,l] = Σ_ℓ d (W[k,l..l] W[l..l] − W[k..k] W[k..k,l])` for `k < l`,
    /// mirrored with a sign flip below the diagonal.
    pub fn from_tensors(w: &TensorSet) -> Self {
        let (d, n) = (w.order(), w.dim());
        let mut lambda = DMatrix::zeros(n, n);
        for k in 0..n {
            for l in k + 1..n {
                let v: f64 = w
                    .iter()
                    .map(|t| t.mixed(k, l, d - 1) * t.diag(l) - t.diag(k) * t.mixed(k, l, 1))
                    .sum::<f64>()
                    * d as f64;
                lambda[(k, l)] = v;
                lambda[(l, k)] = -v;
            }
        }
        LambdaMatrix(lambda)
    }

    pub fn from_matrix_upper(m: &DMatrix<f64>) -> Self {
        let n = m.nrows();
        let mut lambda = DMatrix::zeros(n, n);
        for k in 0..n {
            for l in k + 1..n {
                lambda[(k, l)] = m[(k, l)];
                lambda[(l, k)] = -m[(k, l)];
            }
        }
        LambdaMatrix(lambda)
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn get(&self, k: usize, l: usize) -> f64 {
        self.0[(k, l)]
    }

    /// Frobenius norm over the full matrix (both triangles).
    pub fn norm(&self) -> f64 {
        self.0.norm()
    }

    pub fn as_matrix(&self) -> &DMatrix<f64> {
        &self.0
    }
}

/// Iterate `Q_k` together with the rotated tensors `W⁽ˡ⁾ = A⁽ˡ⁾ ×₁ Qᵀ ... ×_d Qᵀ`.
#[derive(Debug, Clone)]
pub struct RotationState {
    q: DMatrix<f64>,
    reference: TensorSet,
    w: TensorSet,
    f_current: f64,
    total_sq_norm: f64,
    since_check: usize,
    check_interval: usize,
    reorthonormalizations: usize,
}

impl RotationState {
    pub fn new(a: TensorSet, q0: DMatrix<f64>) -> Result<Self> {
        let n = a.dim();
        if q0.nrows() != n || q0.ncols() != n {
            return Err(Error::DimensionMismatch { expected: n, found: q0.nrows() });
        }
        let dev = orthogonality_error(&q0);
        if !(dev <= REORTHONORMALIZE_TOL) {
            return Err(Error::NotOrthogonal { deviation: dev });
        }
        let w = a.rotate_by(&q0)?;
        let f_current = w.diag_sq_norm();
        let total_sq_norm = a.total_sq_norm();
        Ok(Self {
            q: q0,
            reference: a,
            w,
            f_current,
            total_sq_norm,
            since_check: 0,
            check_interval: (n * (n - 1) / 2).max(1),
            reorthonormalizations: 0,
        })
    }

    pub fn identity(a: TensorSet) -> Result<Self> {
        let n = a.dim();
        Self::new(a, DMatrix::identity(n, n))
    }

    pub fn q(&self) -> &DMatrix<f64> {
        &self.q
    }

    pub fn tensors(&self) -> &TensorSet {
        &self.w
    }

    pub fn reference(&self) -> &TensorSet {
        &self.reference
    }

    pub fn dim(&self) -> usize {
        self.w.dim()
    }

    pub fn order(&self) -> usize {
        self.w.order()
    }

    /// Cached objective `f(Q) = Σ_ℓ Σ_k W⁽ˡ⁾[k..k]²`.
    pub fn f(&self) -> f64 {
        self.f_current
    }

    /// Cached `Σ_ℓ ‖A⁽ˡ⁾‖²`.
    pub fn total_sq_norm(&self) -> f64 {
        self.total_sq_norm
    }

    pub fn offdiag_sq_norm(&self) -> f64 {
        self.w.offdiag_sq_norm()
    }

    pub fn reorthonormalizations(&self) -> usize {
        self.reorthonormalizations
    }

    pub fn lambda(&self) -> LambdaMatrix {
        LambdaMatrix::from_tensors(&self.w)
    }

    /// `‖Λ(Q)‖`, equal to the norm of the projected gradient.
    pub fn stationarity_norm(&self) -> f64 {
        self.lambda().norm()
    }

    /// `f(Q · G(i, j, θ))` evaluated on a scratch copy; the state is unchanged.
    pub fn objective_along(&self, i: usize, j: usize, theta: f64) -> f64 {
        let (c, s) = (libm::cos(theta), libm::sin(theta));
        self.w
            .iter()
            .map(|t| {
                let mut t = t.clone();
                t.rotate_givens(i, j, c, s);
                t.diag_sq_norm()
            })
            .sum()
    }

    /// `Q ← Q·G` and `W⁽ˡ⁾ ← W⁽ˡ⁾ ×₁ Gᵀ ... ×_d Gᵀ`, refreshing `f` from the two
    /// diagonal entries that move.
    pub fn apply_rotation(&mut self, rot: &GivensRotation) -> Result<()> {
        let (i, j) = rot.pair();
        let n = self.dim();
        if j >= n {
            return Err(Error::IndexOutOfBounds { index: j, bound: n });
        }
        if rot.theta() == 0.0 {
            return Ok(());
        }
        let (c, s) = (rot.cos(), rot.sin());
        for r in 0..n {
            let (x, y) = (self.q[(r, i)], self.q[(r, j)]);
            self.q[(r, i)] = c * x + s * y;
            self.q[(r, j)] = c * y - s * x;
        }
        let mut delta = 0.0;
        for t in self.w.tensors_mut() {
            let before = t.diag(i) * t.diag(i) + t.diag(j) * t.diag(j);
            t.rotate_givens(i, j, c, s);
            delta += t.diag(i) * t.diag(i) + t.diag(j) * t.diag(j) - before;
        }
        self.f_current += delta;

        self.since_check += 1;
        if self.since_check >= self.check_interval {
            self.since_check = 0;
            if orthogonality_error(&self.q) > REORTHONORMALIZE_TOL {
                self.reorthonormalize()?;
            }
        }
        Ok(())
    }

    /// Projects `Q` back onto SO(n) and rebuilds `W` from the reference tensors.
    pub fn reorthonormalize(&mut self) -> Result<()> {
        let q = orthonormalize(self.q.clone());
        self.w = self.reference.rotate_by(&q)?;
        self.q = q;
        self.f_current = self.w.diag_sq_norm();
        self.reorthonormalizations += 1;
        Ok(())
    }
}

/// `Λ(Q)` of a rotation state.
pub fn lambda_of(state: &RotationState) -> LambdaMatrix {
    state.lambda()
}

/// Number of index pairs `n(n−1)/2`, i.e. rotations per sweep.
pub fn pair_count(n: usize) -> usize {
    n * (n - 1) / 2
}

/// Upper-triangle pairs in row-major order.
pub fn cyclic_pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect()
}
