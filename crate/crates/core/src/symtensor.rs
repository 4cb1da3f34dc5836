//! Dense symmetric tensors of order 2, 3 and 4.
//!
//! Storage is the full row-major `n^d` array. Symmetry is an invariant of the
//! value, not of the layout: every kernel that mutates a [`SymTensor`] writes
//! identical values to all permutations of an index tuple.

use alloc::vec;
use alloc::vec::Vec;

use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// Largest supported order.
pub const MAX_ORDER: usize = 4;

fn check_order(order: usize) -> Result<()> {
    if (2..=MAX_ORDER).contains(&order) {
        Ok(())
    } else {
        Err(Error::UnsupportedOrder(order))
    }
}

/// General dense tensor with arbitrary (row-major) shape.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseTensor {
    shape: Vec<usize>,
    data: Vec<f64>,
}

impl DenseTensor {
    pub fn new(shape: Vec<usize>, data: Vec<f64>) -> Result<Self> {
        let len: usize = shape.iter().product();
        if shape.is_empty() {
            return Err(Error::InvalidParameter("tensor shape must be nonempty"));
        }
        if len != data.len() {
            return Err(Error::DimensionMismatch { expected: len, found: data.len() });
        }
        Ok(Self { shape, data })
    }

    pub fn zeros(shape: Vec<usize>) -> Self {
        let len = shape.iter().product();
        Self { shape, data: vec![0.0; len] }
    }

    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn order(&self) -> usize {
        self.shape.len()
    }

    fn offset(&self, index: &[usize]) -> usize {
        debug_assert_eq!(index.len(), self.shape.len());
        index
            .iter()
            .zip(&self.shape)
            .fold(0, |acc, (&i, &n)| acc * n + i)
    }

    pub fn get(&self, index: &[usize]) -> f64 {
        self.data[self.offset(index)]
    }

    pub fn set(&mut self, index: &[usize], value: f64) {
        let p = self.offset(index);
        self.data[p] = value;
    }

    pub fn norm_sq(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum()
    }

    /// k-mode product `T ×_k M` with `M` of shape `n' × n_k` (`k` is zero-based).
    ///
    /// `(T ×_k M)[.., a, ..] = Σ_b M[a, b] · T[.., b, ..]`
    pub fn mode_product(&self, m: &DMatrix<f64>, k: usize) -> Result<DenseTensor> {
        if k >= self.shape.len() {
            return Err(Error::IndexOutOfBounds { index: k, bound: self.shape.len() });
        }
        let nk = self.shape[k];
        if m.ncols() != nk {
            return Err(Error::DimensionMismatch { expected: nk, found: m.ncols() });
        }
        let rows = m.nrows();
        let outer: usize = self.shape[..k].iter().product();
        let inner: usize = self.shape[k + 1..].iter().product();
        let mut shape = self.shape.clone();
        shape[k] = rows;
        let mut out = vec![0.0; outer * rows * inner];
        for o in 0..outer {
            let src = &self.data[o * nk * inner..(o + 1) * nk * inner];
            let dst = &mut out[o * rows * inner..(o + 1) * rows * inner];
            for a in 0..rows {
                let row = &mut dst[a * inner..(a + 1) * inner];
                for b in 0..nk {
                    let w = m[(a, b)];
                    if w == 0.0 {
                        continue;
                    }
                    let fiber = &src[b * inner..(b + 1) * inner];
                    for (r, x) in row.iter_mut().zip(fiber) {
                        *r += w * x;
                    }
                }
            }
        }
        Ok(DenseTensor { shape, data: out })
    }

    /// Multilinear transform `T ×_1 M ×_2 M ... ×_d M`.
    pub fn multilinear(&self, m: &DMatrix<f64>) -> Result<DenseTensor> {
        let mut t = self.clone();
        for k in 0..self.order() {
            t = t.mode_product(m, k)?;
        }
        Ok(t)
    }

    fn cubical_dim(&self) -> Result<usize> {
        let n = self.shape[0];
        match self.shape.iter().find(|&&s| s != n) {
            Some(&s) => Err(Error::DimensionMismatch { expected: n, found: s }),
            None => Ok(n),
        }
    }
}

/// Index arithmetic for a cubical tensor of order `d` and dimension `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Cube {
    order: usize,
    dim: usize,
}

impl Cube {
    fn len(self) -> usize {
        self.dim.pow(self.order as u32)
    }

    fn stride(self, mode: usize) -> usize {
        self.dim.pow((self.order - 1 - mode) as u32)
    }

    fn decode(self, mut p: usize) -> [usize; MAX_ORDER] {
        let mut idx = [0; MAX_ORDER];
        for k in (0..self.order).rev() {
            idx[k] = p % self.dim;
            p /= self.dim;
        }
        idx
    }

    fn encode(self, idx: &[usize]) -> usize {
        idx[..self.order].iter().fold(0, |acc, &i| acc * self.dim + i)
    }

    /// Flat offset of the sorted representative of `p`'s permutation class.
    fn canonical(self, p: usize) -> usize {
        let mut idx = self.decode(p);
        idx[..self.order].sort_unstable();
        self.encode(&idx)
    }

    fn diag_step(self) -> usize {
        (0..self.order).map(|k| self.dim.pow(k as u32)).sum()
    }

    /// Calls `f(base, stride)` for every fiber along every mode.
    fn for_each_fiber(self, mut f: impl FnMut(usize, usize)) {
        for mode in 0..self.order {
            let st = self.stride(mode);
            let outer = self.dim.pow(mode as u32);
            for o in 0..outer {
                let block = o * self.dim * st;
                for r in 0..st {
                    f(block + r, st);
                }
            }
        }
    }
}

/// Replaces each permutation class by its mean. Classes whose members are
/// already identical are left bit-for-bit untouched.
fn symmetrize_cube(cube: Cube, data: &mut [f64]) {
    let len = cube.len();
    let mut sum = vec![0.0; len];
    let mut count = vec![0u32; len];
    let mut lo = vec![f64::INFINITY; len];
    let mut hi = vec![f64::NEG_INFINITY; len];
    for (p, &v) in data.iter().enumerate() {
        let c = cube.canonical(p);
        sum[c] += v;
        count[c] += 1;
        lo[c] = lo[c].min(v);
        hi[c] = hi[c].max(v);
    }
    for p in 0..len {
        let c = cube.canonical(p);
        if lo[c] != hi[c] {
            data[p] = sum[c] / count[c] as f64;
        } else {
            data[p] = lo[c];
        }
    }
}

fn max_asymmetry_cube(cube: Cube, data: &[f64]) -> f64 {
    let len = cube.len();
    let mut lo = vec![f64::INFINITY; len];
    let mut hi = vec![f64::NEG_INFINITY; len];
    for (p, &v) in data.iter().enumerate() {
        let c = cube.canonical(p);
        lo[c] = lo[c].min(v);
        hi[c] = hi[c].max(v);
    }
    (0..len)
        .filter(|&c| lo[c] <= hi[c])
        .map(|c| hi[c] - lo[c])
        .fold(0.0, f64::max)
}

/// Average over all `d!` index permutations of a cubical tensor.
pub fn symmetrize(t: &DenseTensor) -> Result<SymTensor> {
    let order = t.order();
    check_order(order)?;
    let dim = t.cubical_dim()?;
    let cube = Cube { order, dim };
    let mut data = t.data.clone();
    symmetrize_cube(cube, &mut data);
    Ok(SymTensor { order, dim, data })
}

/// Dense symmetric tensor of order `d ∈ {2, 3, 4}` and dimension `n ≥ 2`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymTensor {
    order: usize,
    dim: usize,
    data: Vec<f64>,
}

impl SymTensor {
    pub fn zeros(order: usize, dim: usize) -> Result<Self> {
        check_order(order)?;
        if dim < 2 {
            return Err(Error::InvalidParameter("tensor dimension must be at least 2"));
        }
        Ok(Self { order, dim, data: vec![0.0; dim.pow(order as u32)] })
    }

    /// Diagonal tensor with `T[k, .., k] = values[k]`.
    pub fn diagonal(order: usize, values: &[f64]) -> Result<Self> {
        let mut t = Self::zeros(order, values.len())?;
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite);
        }
        let step = t.cube().diag_step();
        for (k, &v) in values.iter().enumerate() {
            t.data[k * step] = v;
        }
        Ok(t)
    }

    /// Builds a tensor from row-major data. Entries must be symmetric within
    /// `tol · ‖T‖`; the stored value is the permutation average.
    pub fn from_data(order: usize, dim: usize, data: Vec<f64>, tol: f64) -> Result<Self> {
        let mut t = Self::zeros(order, dim)?;
        if data.len() != t.data.len() {
            return Err(Error::DimensionMismatch { expected: t.data.len(), found: data.len() });
        }
        if data.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite);
        }
        let cube = t.cube();
        let norm = libm::sqrt(data.iter().map(|v| v * v).sum::<f64>());
        let dev = max_asymmetry_cube(cube, &data);
        if dev > tol * norm {
            return Err(Error::NotSymmetric { max_deviation: dev });
        }
        t.data = data;
        symmetrize_cube(cube, &mut t.data);
        Ok(t)
    }

    /// Symmetric tensor whose entries are produced by `f` on sorted index tuples.
    pub fn from_fn(order: usize, dim: usize, mut f: impl FnMut(&[usize]) -> f64) -> Result<Self> {
        let mut t = Self::zeros(order, dim)?;
        let cube = t.cube();
        for p in 0..cube.len() {
            if cube.canonical(p) == p {
                let idx = cube.decode(p);
                t.data[p] = f(&idx[..order]);
            }
        }
        for p in 0..cube.len() {
            t.data[p] = t.data[cube.canonical(p)];
        }
        if t.data.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(t)
    }

    fn cube(&self) -> Cube {
        Cube { order: self.order, dim: self.dim }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Row-major entries.
    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn get(&self, index: &[usize]) -> f64 {
        debug_assert_eq!(index.len(), self.order);
        self.data[self.cube().encode(index)]
    }

    /// Entry `T[k, .., k, l, .., l]` with `d - q` copies of `k` followed by `q` copies of `l`.
    pub fn mixed(&self, k: usize, l: usize, q: usize) -> f64 {
        let mut idx = [k; MAX_ORDER];
        for slot in idx.iter_mut().take(self.order).skip(self.order - q) {
            *slot = l;
        }
        self.data[self.cube().encode(&idx)]
    }

    pub fn diag(&self, k: usize) -> f64 {
        self.data[k * self.cube().diag_step()]
    }

    pub fn norm_sq(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum()
    }

    pub fn norm(&self) -> f64 {
        libm::sqrt(self.norm_sq())
    }

    /// `Σ_k T[k, .., k]²`
    pub fn diag_sq_norm(&self) -> f64 {
        let step = self.cube().diag_step();
        (0..self.dim).map(|k| self.data[k * step] * self.data[k * step]).sum()
    }

    /// Sum of squares of all entries off the main diagonal, summed directly
    /// so that it stays accurate when it is tiny relative to `‖T‖²`.
    pub fn offdiag_sq_norm(&self) -> f64 {
        let step = self.cube().diag_step();
        self.data
            .iter()
            .enumerate()
            .filter(|(p, _)| p % step != 0)
            .map(|(_, v)| v * v)
            .sum()
    }

    /// Largest spread of values within one permutation class.
    pub fn max_asymmetry(&self) -> f64 {
        max_asymmetry_cube(self.cube(), &self.data)
    }

    pub fn to_dense(&self) -> DenseTensor {
        DenseTensor { shape: vec![self.dim; self.order], data: self.data.clone() }
    }

    /// `T ×_1 Qᵀ ×_2 Qᵀ ... ×_d Qᵀ`
    pub fn rotate_by(&self, q: &DMatrix<f64>) -> Result<SymTensor> {
        if q.nrows() != self.dim || q.ncols() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: q.nrows() });
        }
        let w = self.to_dense().multilinear(&q.transpose())?;
        let mut data = w.data;
        // Mode-by-mode contraction leaves O(ε) asymmetry; fold it away.
        symmetrize_cube(self.cube(), &mut data);
        Ok(SymTensor { order: self.order, dim: self.dim, data })
    }

    /// Applies the Givens rotation `G(i, j, θ)` on every mode, i.e.
    /// `T ← T ×_1 Gᵀ ... ×_d Gᵀ`, with `c = cos θ`, `s = sin θ`.
    ///
    /// Only fibers through `i` or `j` are touched: `O(d · n^(d-1))` work.
    pub fn rotate_givens(&mut self, i: usize, j: usize, c: f64, s: f64) {
        debug_assert!(i < j && j < self.dim);
        let cube = self.cube();
        let data = &mut self.data;
        cube.for_each_fiber(|base, st| {
            let pi = base + i * st;
            let pj = base + j * st;
            let (x, y) = (data[pi], data[pj]);
            data[pi] = c * x + s * y;
            data[pj] = c * y - s * x;
        });
        // Restore exact symmetry from the sorted representatives.
        cube.for_each_fiber(|base, st| {
            for p in [base + i * st, base + j * st] {
                data[p] = data[cube.canonical(p)];
            }
        });
    }

    /// Slice along the last mode: `B[k, l, s] = A[k, l, s, t]`.
    pub fn slice_last(&self, t: usize) -> Result<SymTensor> {
        if self.order < 3 {
            return Err(Error::UnsupportedOrder(self.order - 1));
        }
        if t >= self.dim {
            return Err(Error::IndexOutOfBounds { index: t, bound: self.dim });
        }
        let data = self.data.iter().skip(t).step_by(self.dim).copied().collect();
        Ok(SymTensor { order: self.order - 1, dim: self.dim, data })
    }
}

/// Applies `G(i, j, θ)` on all modes of `w`.
pub fn rotate_all_modes_givens(w: &mut SymTensor, i: usize, j: usize, theta: f64) -> Result<()> {
    if i >= j || j >= w.dim() {
        return Err(Error::IndexOutOfBounds { index: j.max(i), bound: w.dim() });
    }
    w.rotate_givens(i, j, libm::cos(theta), libm::sin(theta));
    Ok(())
}

/// A nonempty family of symmetric tensors sharing order and dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct TensorSet {
    tensors: Vec<SymTensor>,
}

impl TensorSet {
    pub fn new(tensors: Vec<SymTensor>) -> Result<Self> {
        let first = tensors.first().ok_or(Error::EmptySet)?;
        let (d, n) = (first.order(), first.dim());
        for t in &tensors[1..] {
            if t.order() != d {
                return Err(Error::DimensionMismatch { expected: d, found: t.order() });
            }
            if t.dim() != n {
                return Err(Error::DimensionMismatch { expected: n, found: t.dim() });
            }
        }
        Ok(Self { tensors })
    }

    pub fn single(t: SymTensor) -> Self {
        Self { tensors: vec![t] }
    }

    pub fn order(&self) -> usize {
        self.tensors[0].order()
    }

    pub fn dim(&self) -> usize {
        self.tensors[0].dim()
    }

    pub fn len(&self) -> usize {
        self.tensors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tensors.is_empty()
    }

    pub fn tensors(&self) -> &[SymTensor] {
        &self.tensors
    }

    pub fn iter(&self) -> core::slice::Iter<'_, SymTensor> {
        self.tensors.iter()
    }

    pub(crate) fn tensors_mut(&mut self) -> &mut [SymTensor] {
        &mut self.tensors
    }

    /// `Σ_ℓ ‖A⁽ˡ⁾‖²`
    pub fn total_sq_norm(&self) -> f64 {
        self.tensors.iter().map(SymTensor::norm_sq).sum()
    }

    /// `Σ_ℓ Σ_k W⁽ˡ⁾[k, .., k]²`
    pub fn diag_sq_norm(&self) -> f64 {
        self.tensors.iter().map(SymTensor::diag_sq_norm).sum()
    }

    pub fn offdiag_sq_norm(&self) -> f64 {
        self.tensors.iter().map(SymTensor::offdiag_sq_norm).sum()
    }

    /// Every member rotated by `Q` on all modes.
    pub fn rotate_by(&self, q: &DMatrix<f64>) -> Result<TensorSet> {
        let tensors = self.tensors.iter().map(|t| t.rotate_by(q)).collect::<Result<Vec<_>>>()?;
        Ok(TensorSet { tensors })
    }
}

impl<'a> IntoIterator for &'a TensorSet {
    type Item = &'a SymTensor;
    type IntoIter = core::slice::Iter<'a, SymTensor>;

    fn into_iter(self) -> Self::IntoIter {
        self.tensors.iter()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::FRAC_PI_2;

    fn lcg_tensor(order: usize, dim: usize, seed: u64) -> SymTensor {
        let mut state = seed;
        SymTensor::from_fn(order, dim, |_| {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((state >> 11) as f64 / (1u64 << 53) as f64) * 2.0 - 1.0
        })
        .unwrap()
    }

    #[test]
    fn mode_product_swaps_rows() {
        let t = DenseTensor::new(vec![2, 2], vec![1.0, 2.0, 2.0, 3.0]).unwrap();
        let m = DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 1.0, 0.0]);
        let r = t.mode_product(&m, 0).unwrap();
        assert_eq!(r.data(), &[2.0, 3.0, 1.0, 2.0]);
    }

    #[test]
    fn mode_product_identity_is_noop() {
        let t = lcg_tensor(3, 4, 7).to_dense();
        for k in 0..3 {
            assert_eq!(t.mode_product(&DMatrix::identity(4, 4), k).unwrap(), t);
        }
    }

    #[test]
    fn mode_product_rejects_bad_shapes() {
        let t = lcg_tensor(3, 4, 7).to_dense();
        assert!(matches!(
            t.mode_product(&DMatrix::identity(3, 3), 1),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(matches!(
            t.mode_product(&DMatrix::identity(4, 4), 3),
            Err(Error::IndexOutOfBounds { .. })
        ));
    }

    #[test]
    fn mode_product_changes_mode_length() {
        let t = lcg_tensor(2, 3, 1).to_dense();
        let m = DMatrix::from_row_slice(1, 3, &[1.0, 1.0, 1.0]);
        let r = t.mode_product(&m, 1).unwrap();
        assert_eq!(r.shape(), &[3, 1]);
    }

    #[test]
    fn givens_zero_angle_is_noop() {
        let mut t = lcg_tensor(4, 5, 3);
        let before = t.clone();
        rotate_all_modes_givens(&mut t, 1, 3, 0.0).unwrap();
        assert_eq!(t, before);
    }

    #[test]
    fn givens_kernel_matches_naive_contraction() {
        for order in 2..=4 {
            let mut t = lcg_tensor(order, 5, 11 + order as u64);
            let theta = 0.37;
            let mut g = DMatrix::<f64>::identity(5, 5);
            let (c, s) = (libm::cos(theta), libm::sin(theta));
            g[(1, 1)] = c;
            g[(3, 3)] = c;
            g[(1, 3)] = -s;
            g[(3, 1)] = s;
            let naive = t.to_dense().multilinear(&g.transpose()).unwrap();
            rotate_all_modes_givens(&mut t, 1, 3, theta).unwrap();
            for (a, b) in t.data().iter().zip(naive.data()) {
                assert!((a - b).abs() <= 1e-12, "order {order}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn givens_touches_only_the_rotated_plane() {
        let mut t = lcg_tensor(3, 6, 5);
        let before = t.clone();
        rotate_all_modes_givens(&mut t, 0, 4, 0.6).unwrap();
        for p in 0..t.data().len() {
            let idx = t.cube().decode(p);
            if idx[..3].iter().all(|&k| k != 0 && k != 4) {
                assert_eq!(t.data()[p].to_bits(), before.data()[p].to_bits());
            }
        }
    }

    #[test]
    fn quarter_turn_preserves_diag_norm() {
        for order in 2..=4 {
            let t = lcg_tensor(order, 4, 21);
            for &theta in &[0.0, 0.3, -0.7, 1.1] {
                let mut a = t.clone();
                let mut b = t.clone();
                rotate_all_modes_givens(&mut a, 0, 2, theta).unwrap();
                rotate_all_modes_givens(&mut b, 0, 2, theta + FRAC_PI_2).unwrap();
                let (fa, fb) = (a.diag_sq_norm(), b.diag_sq_norm());
                assert!((fa - fb).abs() <= 1e-10 * fa.abs().max(1e-300));
                assert!((a.offdiag_sq_norm() - b.offdiag_sq_norm()).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn norms_partition_entries() {
        let z = SymTensor::zeros(3, 4).unwrap();
        assert_eq!(z.diag_sq_norm(), 0.0);
        let m = SymTensor::from_data(2, 2, vec![0.0, 1.0, 1.0, 0.0], 0.0).unwrap();
        assert_eq!(m.offdiag_sq_norm(), 2.0);
        let d = SymTensor::diagonal(3, &[1.0 / 10f64.sqrt(); 10]).unwrap();
        assert!((d.diag_sq_norm() - 1.0).abs() < 1e-15);
        assert_eq!(d.offdiag_sq_norm(), 0.0);
        let t = lcg_tensor(4, 4, 9);
        assert!((t.diag_sq_norm() + t.offdiag_sq_norm() - t.norm_sq()).abs() < 1e-12);
    }

    #[test]
    fn from_data_rejects_asymmetric_input() {
        let err = SymTensor::from_data(2, 2, vec![0.0, 1.0, 0.5, 0.0], 1e-9).unwrap_err();
        assert!(matches!(err, Error::NotSymmetric { .. }));
        assert!(matches!(
            SymTensor::from_data(2, 2, vec![f64::NAN, 0.0, 0.0, 0.0], 1e-9),
            Err(Error::NonFinite)
        ));
        assert!(matches!(SymTensor::zeros(5, 3), Err(Error::UnsupportedOrder(5))));
    }

    #[test]
    fn symmetrize_averages_transpose() {
        let e = DenseTensor::new(vec![2, 2], vec![0.0, 2.0, 0.0, 0.0]).unwrap();
        let s = symmetrize(&e).unwrap();
        assert_eq!(s.data(), &[0.0, 1.0, 1.0, 0.0]);
        assert!(symmetrize(&DenseTensor::zeros(vec![2, 3])).is_err());
    }

    #[test]
    fn symmetrize_fixes_symmetric_input() {
        let t = lcg_tensor(4, 3, 2);
        assert_eq!(symmetrize(&t.to_dense()).unwrap(), t);
    }

    #[test]
    fn mixed_entries() {
        let t = lcg_tensor(3, 4, 8);
        assert_eq!(t.mixed(1, 2, 0), t.get(&[1, 1, 1]));
        assert_eq!(t.mixed(1, 2, 1), t.get(&[1, 1, 2]));
        assert_eq!(t.mixed(1, 2, 2), t.get(&[1, 2, 2]));
        assert_eq!(t.mixed(1, 2, 3), t.get(&[2, 2, 2]));
        assert_eq!(t.diag(3), t.get(&[3, 3, 3]));
    }

    #[test]
    fn slices_of_fourth_order() {
        let a = lcg_tensor(4, 3, 4);
        let total: f64 = (0..3).map(|t| a.slice_last(t).unwrap().norm_sq()).sum();
        assert!((total - a.norm_sq()).abs() <= 1e-14 * total);
        let b = a.slice_last(1).unwrap();
        assert_eq!(b.get(&[0, 2, 1]), a.get(&[0, 2, 1, 1]));
        assert_eq!(b.max_asymmetry(), 0.0);
    }

    #[test]
    fn tensor_set_rejects_mixed_members() {
        assert_eq!(TensorSet::new(vec![]), Err(Error::EmptySet));
        let r = TensorSet::new(vec![lcg_tensor(3, 3, 1), lcg_tensor(4, 3, 1)]);
        assert!(matches!(r, Err(Error::DimensionMismatch { .. })));
        let r = TensorSet::new(vec![lcg_tensor(3, 3, 1), lcg_tensor(3, 4, 1)]);
        assert!(matches!(r, Err(Error::DimensionMismatch { .. })));
    }
}
