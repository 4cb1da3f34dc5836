//! Exact solution of the one-dimensional Jacobi subproblem
//! `max_θ h̃(θ) = f(Q·G(i, j, θ)) − δ₀ γ(θ)` on `[−π/4, π/4]`.
//!
//! With `x = tan θ` the critical points are the roots of a degree-`2d`
//! polynomial `ω(x)`. The symmetry `τ̃(x) = τ̃(−1/x)` lets `ω` be rewritten in
//! `ξ = x − 1/x`, which halves the degree: `Ω(ξ)` is quadratic for orders 2
//! and 3 and quartic for order 4. Each real root `ξ` gives the pair of
//! tangents solving `x² − ξx − 1 = 0`, of which exactly one lies in `[−1, 1]`.

mod oracle;

pub use oracle::{brute_force_angle, local_maximizers};

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::FRAC_PI_4;

use crate::error::{Error, Result};
use crate::poly::{solve_xi_roots, XiPolynomial, XiRoots};
use crate::symtensor::TensorSet;

const BINOMIAL: [[f64; 5]; 5] = [
    [1.0, 0.0, 0.0, 0.0, 0.0],
    [1.0, 1.0, 0.0, 0.0, 0.0],
    [1.0, 2.0, 1.0, 0.0, 0.0],
    [1.0, 3.0, 3.0, 1.0, 0.0],
    [1.0, 4.0, 6.0, 4.0, 1.0],
];

fn sq(x: f64) -> f64 {
    x * x
}

fn powu(x: f64, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, _| acc * x)
}

/// Proximal penalty `γ(θ) = 2 sin²θ cos²θ`.
pub fn gamma(theta: f64) -> f64 {
    let s2 = libm::sin(2.0 * theta);
    0.5 * s2 * s2
}

/// Restriction of each rotated tensor to the index pair `{i, j}`.
///
/// `blocks[ℓ][q]` is `W⁽ˡ⁾[i, .., i, j, .., j]` with `q` copies of `j`,
/// so a block carries the `d + 1` distinct entries of a symmetric
/// `2 × ... × 2` tensor.
#[derive(Debug, Clone, PartialEq)]
pub struct SubproblemView {
    order: usize,
    blocks: Vec<[f64; 5]>,
    delta0: f64,
}

impl SubproblemView {
    pub fn new(order: usize, blocks: Vec<[f64; 5]>, delta0: f64) -> Result<Self> {
        if !(2..=4).contains(&order) {
            return Err(Error::UnsupportedOrder(order));
        }
        if blocks.is_empty() {
            return Err(Error::EmptySet);
        }
        if !(delta0 >= 0.0) || !delta0.is_finite() {
            return Err(Error::InvalidParameter("proximal weight must be finite and nonnegative"));
        }
        if blocks.iter().flat_map(|b| &b[..=order]).any(|v| !v.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { order, blocks, delta0 })
    }

    /// Extracts the `{i, j}` restriction of every tensor in `w`.
    pub fn from_tensors(w: &TensorSet, i: usize, j: usize, delta0: f64) -> Result<Self> {
        if i >= j || j >= w.dim() {
            return Err(Error::IndexOutOfBounds { index: j, bound: w.dim() });
        }
        let d = w.order();
        let blocks = w
            .iter()
            .map(|t| {
                let mut b = [0.0; 5];
                for (q, slot) in b.iter_mut().enumerate().take(d + 1) {
                    *slot = t.mixed(i, j, q);
                }
                b
            })
            .collect();
        Self::new(d, blocks, delta0)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn delta0(&self) -> f64 {
        self.delta0
    }

    pub fn blocks(&self) -> &[[f64; 5]] {
        &self.blocks
    }

    pub fn with_delta0(&self, delta0: f64) -> Result<Self> {
        Self::new(self.order, self.blocks.clone(), delta0)
    }

    /// Magnitude of the view: `Σ` of squared block entries.
    pub fn scale(&self) -> f64 {
        self.blocks
            .iter()
            .flat_map(|b| &b[..=self.order])
            .map(|v| v * v)
            .sum()
    }

    /// The view after `G(θ)` has acted on all modes.
    pub fn rotated(&self, theta: f64) -> SubproblemView {
        let d = self.order;
        let (c, s) = (libm::cos(theta), libm::sin(theta));
        // Row weights: new index 1 ← (c, s), new index 2 ← (−s, c).
        let u = [c, s];
        let v = [-s, c];
        let blocks = self
            .blocks
            .iter()
            .map(|b| {
                let mut out = [0.0; 5];
                for (q, slot) in out.iter_mut().enumerate().take(d + 1) {
                    let mut acc = 0.0;
                    for bits in 0..(1usize << d) {
                        let mut w = 1.0;
                        for k in 0..d {
                            let p = (bits >> k) & 1;
                            w *= if k < d - q { u[p] } else { v[p] };
                        }
                        acc += w * b[bits.count_ones() as usize];
                    }
                    *slot = acc;
                }
                out
            })
            .collect();
        SubproblemView { order: d, blocks, delta0: self.delta0 }
    }

    /// `Σ_ℓ (T⁽ˡ⁾[1..1]² + T⁽ˡ⁾[2..2]²)` at angle `θ`: the part of `f` that moves.
    pub fn h(&self, theta: f64) -> f64 {
        let (c, s) = (libm::cos(theta), libm::sin(theta));
        self.blocks
            .iter()
            .map(|b| {
                let (t1, t2) = self.diagonal_pair(b, c, s);
                t1 * t1 + t2 * t2
            })
            .sum()
    }

    /// `h̃(θ) = h(θ) − δ₀ γ(θ)` up to a θ-independent constant.
    pub fn h_tilde(&self, theta: f64) -> f64 {
        self.h(theta) - self.delta0 * gamma(theta)
    }

    fn diagonal_pair(&self, b: &[f64; 5], c: f64, s: f64) -> (f64, f64) {
        let d = self.order;
        let mut t1 = 0.0;
        let mut t2 = 0.0;
        for q in 0..=d {
            let binom = BINOMIAL[d][q];
            t1 += binom * powu(c, d - q) * powu(s, q) * b[q];
            t2 += binom * powu(-s, d - q) * powu(c, q) * b[q];
        }
        (t1, t2)
    }

    /// `h(θ) − h(0)` evaluated without cancellation between the two large terms.
    pub fn h_gain(&self, theta: f64) -> f64 {
        if theta == 0.0 {
            return 0.0;
        }
        let d = self.order;
        let (c, s) = (libm::cos(theta), libm::sin(theta));
        // cᵈ − 1 = −(1 − c)(1 + c + ... + c^(d−1)),  1 − c = 2 sin²(θ/2)
        let one_minus_c = 2.0 * sq(libm::sin(0.5 * theta));
        let cd_minus_one = -one_minus_c * (0..d).map(|k| powu(c, k)).sum::<f64>();
        self.blocks
            .iter()
            .map(|b| {
                let mut dt1 = cd_minus_one * b[0];
                let mut dt2 = cd_minus_one * b[d];
                for q in 1..=d {
                    dt1 += BINOMIAL[d][q] * powu(c, d - q) * powu(s, q) * b[q];
                }
                for q in 0..d {
                    dt2 += BINOMIAL[d][q] * powu(-s, d - q) * powu(c, q) * b[q];
                }
                dt1 * (dt1 + 2.0 * b[0]) + dt2 * (dt2 + 2.0 * b[d])
            })
            .sum()
    }

    /// `h̃(θ) − h̃(0)`.
    pub fn gain(&self, theta: f64) -> f64 {
        self.h_gain(theta) - self.delta0 * gamma(theta)
    }

    /// `h'(θ) = 2d Σ_ℓ (T[1..1] T[1..1,2] − T[1,2..2] T[2..2])`.
    pub fn h_prime(&self, theta: f64) -> f64 {
        let d = self.order;
        let t = self.rotated(theta);
        2.0 * d as f64
            * t.blocks
                .iter()
                .map(|b| b[0] * b[1] - b[d - 1] * b[d])
                .sum::<f64>()
    }

    /// `h̃'(θ) = h'(θ) − δ₀ sin 4θ`.
    pub fn h_tilde_prime(&self, theta: f64) -> f64 {
        self.h_prime(theta) - self.delta0 * libm::sin(4.0 * theta)
    }
}

/// `(h'(0), h''(0))` of the unpenalized objective, summed over the set.
///
/// Orders 2 and 3 use the closed forms in the block entries; for order 4 the
/// second derivative is read off the `Ω` coefficients.
pub fn h_derivatives_at_zero(view: &SubproblemView) -> (f64, f64) {
    let mut h1 = 0.0;
    let mut h2 = 0.0;
    for b in &view.blocks {
        match view.order {
            2 => {
                let (w11, w12, w22) = (b[0], b[1], b[2]);
                h1 += 4.0 * (w11 * w12 - w12 * w22);
                h2 += -4.0 * (w11 * w11 + w22 * w22 - 2.0 * w11 * w22 - 4.0 * w12 * w12);
            }
            3 => {
                let (w111, w112, w122, w222) = (b[0], b[1], b[2], b[3]);
                h1 += 6.0 * (w111 * w112 - w122 * w222);
                h2 += -6.0
                    * (w111 * w111 + w222 * w222 - 3.0 * w112 * w112 - 3.0 * w122 * w122
                        - 2.0 * w111 * w122
                        - 2.0 * w112 * w222);
            }
            _ => {
                let [a, b0, ..] = quartic_block_coeffs(b);
                h1 += a;
                h2 -= b0;
            }
        }
    }
    (h1, h2)
}

/// Per-tensor `[a, b, c, d, e]` of the order-4 `ω(x)` without the proximal term.
fn quartic_block_coeffs(w: &[f64; 5]) -> [f64; 5] {
    let (w1111, w1112, w1122, w1222, w2222) = (w[0], w[1], w[2], w[3], w[4]);
    let a = 8.0 * (w1111 * w1112 - w1222 * w2222);
    let b = 8.0
        * (w1111 * w1111 - 3.0 * w1122 * w1111 - 4.0 * w1112 * w1112 - 4.0 * w1222 * w1222
            + w2222 * w2222
            - 3.0 * w1122 * w2222);
    let c = 8.0
        * (18.0 * w1112 * w1122 - 7.0 * w1111 * w1112 + 3.0 * w1111 * w1222
            - 18.0 * w1122 * w1222
            - 3.0 * w1112 * w2222
            + 7.0 * w1222 * w2222);
    let d = 8.0
        * (9.0 * w1111 * w1122 - 32.0 * w1112 * w1222 - 2.0 * w1111 * w2222
            + 9.0 * w1122 * w2222
            + 12.0 * w1112 * w1112
            - 36.0 * w1122 * w1122
            + 12.0 * w1222 * w1222);
    let e = 80.0
        * (6.0 * w1122 * w1222 - w1111 * w1222 - 6.0 * w1112 * w1122 + w1112 * w2222);
    [a, b, c, d, e]
}

/// Coefficients of `Ω(ξ)`, summed over the set, proximal term added once.
///
/// * orders 2, 3: `Ω = aξ² + bξ − 4a` with `a = h'(0)`, `b = −h''(0) + 4δ₀`;
/// * order 4: `Ω = aξ⁴ + bξ³ + (4a + c)ξ² + (3b + d)ξ + 2a + 2c + e`,
///   with `+4δ₀` in both `b` and `d`.
pub fn omega_xi_coeffs(view: &SubproblemView) -> XiPolynomial {
    let prox = 4.0 * view.delta0;
    match view.order {
        2 | 3 => {
            let (h1, h2) = h_derivatives_at_zero(view);
            let (a, b) = (h1, -h2 + prox);
            XiPolynomial::new(&[-4.0 * a, b, a])
        }
        _ => {
            let mut k = [0.0; 5];
            for blk in &view.blocks {
                for (acc, v) in k.iter_mut().zip(quartic_block_coeffs(blk)) {
                    *acc += v;
                }
            }
            let [a, b, c, d, e] = k;
            let (b, d) = (b + prox, d + prox);
            XiPolynomial::new(&[2.0 * a + 2.0 * c + e, 3.0 * b + d, 4.0 * a + c, b, a])
        }
    }
}

/// Both roots of `x² − ξx − 1 = 0`, larger magnitude first.
pub fn xi_tangent_pair(xi: f64) -> (f64, f64) {
    let root = libm::sqrt(xi * xi + 4.0);
    let big = 0.5 * (xi + libm::copysign(root, if xi == 0.0 { 1.0 } else { xi }));
    (big, -1.0 / big)
}

/// Tangents in `[−1, 1]` produced by one root `ξ`: both `±1` when `ξ = 0`,
/// otherwise the root of `x² − ξx − 1` of modulus below one.
pub fn xi_to_x_candidates(xi: f64) -> Vec<f64> {
    if xi == 0.0 {
        return vec![-1.0, 1.0];
    }
    let (_, small) = xi_tangent_pair(xi);
    vec![small]
}

/// One evaluated candidate angle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Candidate {
    pub theta: f64,
    /// `h̃(θ) − h̃(0)`.
    pub gain: f64,
}

/// Maximizer of the subproblem.
#[derive(Debug, Clone, PartialEq)]
pub struct AngleResult {
    pub theta: f64,
    /// `h̃(θ*) − h̃(0) ≥ 0`.
    pub gain: f64,
    pub candidates: Vec<Candidate>,
}

impl AngleResult {
    /// Picks the best candidate. Candidates within rounding of the best gain
    /// are ties; ties go to the smallest `|θ|`, then to positive `θ`.
    pub(crate) fn select(candidates: Vec<Candidate>, scale: f64) -> Self {
        let best = candidates
            .iter()
            .map(|c| c.gain)
            .fold(f64::NEG_INFINITY, f64::max);
        let best_theta = candidates
            .iter()
            .filter(|c| c.gain == best)
            .map(|c| c.theta.abs())
            .fold(0.0, f64::max);
        let chosen = candidates
            .iter()
            .filter(|c| {
                // Gains are O(θ) sums, so their rounding error scales with |θ|.
                let tol = 16.0 * f64::EPSILON * scale * c.theta.abs().max(best_theta);
                c.gain >= best - tol
            })
            .min_by(|a, b| {
                a.theta
                    .abs()
                    .total_cmp(&b.theta.abs())
                    .then(b.theta.total_cmp(&a.theta))
            })
            .copied()
            .unwrap_or(Candidate { theta: 0.0, gain: 0.0 });
        AngleResult { theta: chosen.theta, gain: chosen.gain, candidates }
    }
}

/// Global maximizer of `h̃` on `[−π/4, π/4]` from the real roots of `Ω`.
///
/// The candidate set is `{0, ±π/4} ∪ {arctan x}` over the admissible tangents
/// of every real root; `θ = 0` is always present so the gain is never negative.
pub fn best_angle(view: &SubproblemView) -> AngleResult {
    let mut thetas = vec![0.0, FRAC_PI_4, -FRAC_PI_4];
    if let XiRoots::Real(roots) = solve_xi_roots(&omega_xi_coeffs(view)) {
        for xi in roots {
            for x in xi_to_x_candidates(xi) {
                thetas.push(libm::atan(x));
            }
        }
    }
    let candidates = thetas
        .into_iter()
        .map(|theta| Candidate { theta, gain: view.gain(theta) })
        .collect();
    AngleResult::select(candidates, view.scale() + view.delta0)
}

/// Absolute residuals of the two rational identities for `τ(x) = h(arctan x)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IdentityResiduals {
    /// `|τ(x) − τ(0) − (h'(0)(x − x³) + ½h''(0)x²)/(1 + x²)²|`
    pub value: f64,
    /// `|τ'(x) − (h'(0)(1 − 6x² + x⁴) + h''(0)(x − x³))/(1 + x²)³|`
    pub derivative: f64,
    /// `τ(x)` itself (the view's moving part), for relative scaling.
    pub tau: f64,
}

/// Checks the closed forms of `τ(x) − τ(0)` and `τ'(x)`, valid for orders 2 and 3
/// without the proximal term.
pub fn tau_identity_check(view: &SubproblemView, x: f64) -> Result<IdentityResiduals> {
    if view.order == 4 {
        return Err(Error::UnsupportedOrder(4));
    }
    if view.delta0 != 0.0 {
        return Err(Error::InvalidParameter("identity check requires delta0 = 0"));
    }
    let (h1, h2) = h_derivatives_at_zero(view);
    let theta = libm::atan(x);
    let x2 = x * x;
    let denom = 1.0 + x2;
    let lhs_value = view.h_gain(theta);
    let rhs_value = (h1 * (x - x * x2) + 0.5 * h2 * x2) / (denom * denom);
    // τ'(x) = h'(arctan x) / (1 + x²)
    let lhs_deriv = view.h_prime(theta) / denom;
    let rhs_deriv = (h1 * (1.0 - 6.0 * x2 + x2 * x2) + h2 * (x - x * x2)) / (denom * denom * denom);
    Ok(IdentityResiduals {
        value: (lhs_value - rhs_value).abs(),
        derivative: (lhs_deriv - rhs_deriv).abs(),
        tau: view.h(theta),
    })
}
