//! Real roots of the reduced critical-point polynomial `Ω(ξ)`.

use alloc::vec::Vec;

use nalgebra::DMatrix;

/// Leading coefficients at or below this fraction of the largest one are dropped.
pub const LEADING_COEFF_CUTOFF: f64 = 1e-13;
/// Eigenvalues with `|Im| ≤ IMAG_CUTOFF · (1 + |Re|)` count as real.
pub const IMAG_CUTOFF: f64 = 1e-10;
/// Clustered eigenvalues (multiple roots) split into complex pairs of size
/// about `sqrt(eps)`; within this band the real part is polished and kept
/// if it is a root to working precision.
const CLUSTER_IMAG_CUTOFF: f64 = 1e-6;

/// Coefficients of `Ω(ξ)` in ascending powers; nominal degree 2 (orders 2, 3) or 4 (order 4).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct XiPolynomial {
    coeffs: [f64; 5],
    degree: usize,
}

impl XiPolynomial {
    /// `coeffs[k]` multiplies `ξ^k`. Entries past `degree` are ignored.
    pub fn new(coeffs: &[f64]) -> Self {
        assert!(!coeffs.is_empty() && coeffs.len() <= 5, "XiPolynomial holds degree <= 4");
        let mut c = [0.0; 5];
        c[..coeffs.len()].copy_from_slice(coeffs);
        Self { coeffs: c, degree: coeffs.len() - 1 }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs[..=self.degree]
    }

    pub fn eval(&self, xi: f64) -> f64 {
        self.coeffs().iter().rev().fold(0.0, |acc, &c| acc * xi + c)
    }

    fn eval_with_derivative(&self, xi: f64) -> (f64, f64) {
        let mut p = 0.0;
        let mut dp = 0.0;
        for &c in self.coeffs().iter().rev() {
            dp = dp * xi + p;
            p = p * xi + c;
        }
        (p, dp)
    }
}

/// Outcome of [`solve_xi_roots`].
#[derive(Debug, Clone, PartialEq)]
pub enum XiRoots {
    /// `Ω ≡ 0`: every angle is critical, the objective is constant along the geodesic.
    Constant,
    /// Distinct real roots in ascending order (possibly empty).
    Real(Vec<f64>),
}

/// All distinct real roots of `p`.
///
/// Quadratics use the cancellation-free discriminant formula; cubics and
/// quartics use the eigenvalues of the companion matrix of the monic
/// polynomial, polished by Newton steps.
pub fn solve_xi_roots(p: &XiPolynomial) -> XiRoots {
    let c = p.coeffs();
    let scale = c.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if scale == 0.0 {
        return XiRoots::Constant;
    }
    let degree = (0..c.len())
        .rev()
        .find(|&k| c[k].abs() > LEADING_COEFF_CUTOFF * scale)
        .unwrap_or(0);
    let mut roots = match degree {
        0 => Vec::new(),
        1 => alloc::vec![-c[0] / c[1]],
        2 => quadratic_roots(c[2], c[1], c[0]),
        _ => companion_roots(&c[..=degree]),
    };
    let reduced = XiPolynomial::new(&c[..=degree]);
    if degree >= 3 {
        for r in roots.iter_mut() {
            *r = newton_polish(&reduced, *r);
        }
    }
    roots.sort_by(f64::total_cmp);
    roots.dedup_by(|a, b| (*a - *b).abs() <= IMAG_CUTOFF * (1.0 + b.abs()));
    XiRoots::Real(roots)
}

fn quadratic_roots(a: f64, b: f64, c: f64) -> Vec<f64> {
    let disc = b * b - 4.0 * a * c;
    if disc >= 0.0 {
        let q = -0.5 * (b + libm::copysign(libm::sqrt(disc), b));
        if q == 0.0 {
            // b = 0 and c = 0: double root at the origin.
            return alloc::vec![0.0];
        }
        alloc::vec![q / a, c / q]
    } else {
        let re = -b / (2.0 * a);
        let im = libm::sqrt(-disc) / (2.0 * a.abs());
        if im <= IMAG_CUTOFF * (1.0 + re.abs()) {
            alloc::vec![re]
        } else {
            Vec::new()
        }
    }
}

/// Real eigenvalues of the companion matrix of `c[0] + c[1] ξ + ... + c[n] ξⁿ`.
fn companion_roots(c: &[f64]) -> Vec<f64> {
    let n = c.len() - 1;
    let lead = c[n];
    let mut m = DMatrix::<f64>::zeros(n, n);
    for k in 1..n {
        m[(k, k - 1)] = 1.0;
    }
    for k in 0..n {
        m[(k, n - 1)] = -c[k] / lead;
    }
    let eig = match nalgebra::linalg::Schur::try_new(m, f64::EPSILON, 10_000) {
        Some(schur) => schur.complex_eigenvalues(),
        None => return Vec::new(),
    };
    let p = XiPolynomial::new(c);
    let mut roots = Vec::new();
    for z in eig.iter() {
        let band = 1.0 + z.re.abs();
        if z.im.abs() <= IMAG_CUTOFF * band {
            roots.push(z.re);
        } else if z.im.abs() <= CLUSTER_IMAG_CUTOFF * band {
            let x = newton_polish_long(&p, z.re);
            let magnitude: f64 = c.iter().rev().fold(0.0, |acc, v| acc * x.abs() + v.abs());
            if p.eval(x).abs() <= 64.0 * f64::EPSILON * magnitude {
                roots.push(x);
            }
        }
    }
    roots
}

/// Newton iteration that tolerates the linear convergence of multiple roots.
fn newton_polish_long(p: &XiPolynomial, mut x: f64) -> f64 {
    for _ in 0..60 {
        let (v, dv) = p.eval_with_derivative(x);
        if v == 0.0 || dv == 0.0 || !dv.is_finite() {
            break;
        }
        let next = x - v / dv;
        if p.eval(next).abs() >= v.abs() {
            break;
        }
        x = next;
    }
    x
}

fn newton_polish(p: &XiPolynomial, mut x: f64) -> f64 {
    let (mut fx, _) = p.eval_with_derivative(x);
    for _ in 0..4 {
        let (v, dv) = p.eval_with_derivative(x);
        if dv == 0.0 || !dv.is_finite() {
            break;
        }
        let next = x - v / dv;
        let (fn_next, _) = p.eval_with_derivative(next);
        if !(fn_next.abs() < fx.abs()) {
            break;
        }
        x = next;
        fx = fn_next;
    }
    x
}
