use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

use nalgebra::DMatrix;
use proptest::prelude::*;
use tensor_jacobi_core::angle::{
    brute_force_angle, h_derivatives_at_zero, local_maximizers, omega_xi_coeffs, xi_to_x_candidates,
};
use tensor_jacobi_core::poly::{solve_xi_roots, XiRoots};
use tensor_jacobi_core::symtensor::rotate_all_modes_givens;
use tensor_jacobi_core::{
    best_angle, random_rotation, GivensRotation, RotationState, SubproblemView, SymTensor, TensorSet,
};

fn sym_tensor(order: usize, dim: usize) -> impl Strategy<Value = SymTensor> {
    prop::collection::vec(-1.0f64..1.0, dim.pow(order as u32)).prop_map(move |raw| {
        let mut it = raw.into_iter();
        SymTensor::from_fn(order, dim, |_| it.next().unwrap()).unwrap()
    })
}

fn any_tensor() -> impl Strategy<Value = SymTensor> {
    (2usize..=4, 2usize..=5).prop_flat_map(|(d, n)| sym_tensor(d, n))
}

fn view(order: usize) -> impl Strategy<Value = SubproblemView> {
    (prop::collection::vec(prop::array::uniform5(-1.0f64..1.0), 1..=3), 0.0f64..0.2)
        .prop_map(move |(blocks, delta0)| SubproblemView::new(order, blocks, delta0).unwrap())
}

fn any_view() -> impl Strategy<Value = SubproblemView> {
    (2usize..=4).prop_flat_map(view)
}

fn angle() -> impl Strategy<Value = f64> {
    -FRAC_PI_4..FRAC_PI_4
}

fn max_perm_deviation(t: &SymTensor) -> f64 {
    t.max_asymmetry()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn frobenius_norm_is_rotation_invariant(t in any_tensor(), seed in any::<u64>()) {
        let q = random_rotation(t.dim(), seed).unwrap();
        let w = t.rotate_by(&q).unwrap();
        prop_assert!((w.norm_sq() - t.norm_sq()).abs() <= 1e-10 * t.norm_sq().max(1e-300));
    }

    #[test]
    fn givens_touches_only_two_planes(t in any_tensor(), theta in angle(), a in 0usize..5, b in 0usize..5) {
        let n = t.dim();
        let (i, j) = (a.min(b) % n, a.max(b) % n);
        prop_assume!(i < j);
        let mut w = t.clone();
        rotate_all_modes_givens(&mut w, i, j, theta).unwrap();
        let d = t.order();
        for p in 0..t.data().len() {
            let idx: Vec<usize> = (0..d).rev().map(|k| (p / n.pow(k as u32)) % n).collect();
            if !idx.iter().any(|&x| x == i || x == j) {
                prop_assert_eq!(w.data()[p].to_bits(), t.data()[p].to_bits());
            }
        }
    }

    #[test]
    fn givens_kernel_matches_dense_rotation(t in any_tensor(), theta in angle()) {
        let n = t.dim();
        let (i, j) = (0, n - 1);
        let mut w = t.clone();
        rotate_all_modes_givens(&mut w, i, j, theta).unwrap();
        let g = GivensRotation::new(i, j, theta).unwrap().matrix(n).unwrap();
        let dense = t.rotate_by(&g).unwrap();
        for (x, y) in w.data().iter().zip(dense.data()) {
            prop_assert!((x - y).abs() <= 1e-12 * (1.0 + t.norm()));
        }
    }

    #[test]
    fn quarter_period_of_diagonal_mass(t in any_tensor(), theta in -FRAC_PI_2..FRAC_PI_2) {
        let n = t.dim();
        let mut a = t.clone();
        let mut b = t.clone();
        rotate_all_modes_givens(&mut a, 0, n - 1, theta).unwrap();
        rotate_all_modes_givens(&mut b, 0, n - 1, theta + FRAC_PI_2).unwrap();
        prop_assert!((a.diag_sq_norm() - b.diag_sq_norm()).abs() <= 1e-10 * t.norm_sq().max(1e-300));
    }

    #[test]
    fn rotations_preserve_symmetry(t in any_tensor(), steps in prop::collection::vec((0usize..5, 0usize..5, angle()), 1..40)) {
        let n = t.dim();
        let mut w = t.clone();
        for (a, b, theta) in steps {
            let (i, j) = (a.min(b) % n, a.max(b) % n);
            if i < j {
                rotate_all_modes_givens(&mut w, i, j, theta).unwrap();
            }
        }
        prop_assert!(max_perm_deviation(&w) <= 1e-12 * t.norm());
        prop_assert!((w.norm_sq() - t.norm_sq()).abs() <= 1e-10 * t.norm_sq().max(1e-300));
    }

    #[test]
    fn lambda_is_skew_and_matches_h_prime(t in any_tensor(), seed in any::<u64>()) {
        let n = t.dim();
        let q = random_rotation(n, seed).unwrap();
        let state = RotationState::new(TensorSet::single(t), q).unwrap();
        let lam = state.lambda();
        let m = lam.as_matrix();
        prop_assert_eq!(m + m.transpose(), DMatrix::zeros(n, n));
        prop_assert!((state.offdiag_sq_norm() + state.f() - state.total_sq_norm()).abs() <= 1e-9 * state.total_sq_norm());
        for i in 0..n {
            for j in i + 1..n {
                let v = SubproblemView::from_tensors(state.tensors(), i, j, 0.0).unwrap();
                let (h1, _) = h_derivatives_at_zero(&v);
                let expect = -2.0 * lam.get(i, j);
                prop_assert!((h1 - expect).abs() <= 1e-10 * expect.abs().max(v.scale()));
            }
        }
    }

    #[test]
    fn best_angle_gain_is_nonnegative(v in any_view()) {
        let r = best_angle(&v);
        prop_assert!(r.gain >= -1e-12);
        prop_assert!(r.theta.abs() <= FRAC_PI_4 * (1.0 + 1e-12));
    }

    #[test]
    fn proximal_gain_bound(v in any_view()) {
        let r = best_angle(&v);
        let h_gain = v.h_gain(r.theta);
        let gamma = tensor_jacobi_core::angle::gamma(r.theta);
        prop_assert!(h_gain >= v.delta0() * gamma - 1e-10);
    }

    #[test]
    fn algebraic_matches_oracle(v in any_view()) {
        let alg = best_angle(&v);
        let orc = brute_force_angle(&v, 2000);
        let level = v.h_tilde(orc.theta).abs();
        prop_assert!(alg.gain >= orc.gain - 1e-10 * (1.0 + level), "alg {:?} oracle {:?}", alg.theta, orc.theta);
    }

    #[test]
    fn every_local_maximizer_is_a_candidate(v in any_view()) {
        let r = best_angle(&v);
        for t in local_maximizers(&v, 4000) {
            let near = r.candidates.iter().any(|c| {
                let diff = (c.theta - t).rem_euclid(FRAC_PI_2);
                diff.min(FRAC_PI_2 - diff) <= 1e-8
            });
            prop_assert!(near, "maximizer {t} missing from {:?}", r.candidates);
        }
    }

    #[test]
    fn xi_tangent_pairs_have_product_minus_one(xi in -1e3f64..1e3) {
        let x1 = (xi + (xi * xi + 4.0).sqrt()) / 2.0;
        let x2 = (xi - (xi * xi + 4.0).sqrt()) / 2.0;
        prop_assert!((x1 * x2 + 1.0).abs() <= 1e-12 * (1.0 + xi.abs()));
        let kept = xi_to_x_candidates(xi);
        for x in kept {
            prop_assert!(x.abs() <= 1.0 + 1e-15);
            prop_assert!((x * x - xi * x - 1.0).abs() <= 1e-12 * (1.0 + xi.abs()));
        }
    }
}

/// `ρ(x) = τ(x)(1 + x²)^d` recovered by interpolation from sampled values of
/// `h` at `θ = arctan x`; its derivative combination `ω` is then rooted by
/// sign changes on a fine grid of `[−1, 1]`.
fn omega_roots_by_sampling(v: &SubproblemView) -> Vec<f64> {
    let d = v.order();
    let deg = 2 * d;
    let nodes: Vec<f64> = (0..=deg).map(|k| -1.0 + 2.0 * k as f64 / deg as f64).collect();
    let a = DMatrix::from_fn(deg + 1, deg + 1, |r, c| nodes[r].powi(c as i32));
    let rhs = DMatrix::from_fn(deg + 1, 1, |r, _| {
        let x: f64 = nodes[r];
        v.h(x.atan()) * (1.0 + x * x).powi(d as i32)
    });
    let rho = a.lu().solve(&rhs).unwrap();
    let rho: Vec<f64> = rho.iter().copied().collect();
    let eval = |p: &[f64], x: f64| p.iter().rev().fold(0.0, |acc, c| acc * x + c);
    let drho: Vec<f64> = rho.iter().enumerate().skip(1).map(|(k, c)| k as f64 * c).collect();
    let delta0 = v.delta0();
    let omega = |x: f64| {
        let w = 1.0 + x * x;
        eval(&drho, x) * w - 2.0 * d as f64 * x * eval(&rho, x)
            - 4.0 * delta0 * x * (1.0 - x * x) * w.powi(d as i32 - 2)
    };
    let mut roots = Vec::new();
    let steps = 20_000;
    let mut prev_x = -1.0;
    let mut prev = omega(prev_x);
    for k in 1..=steps {
        let x = -1.0 + 2.0 * k as f64 / steps as f64;
        let cur = omega(x);
        if prev == 0.0 {
            roots.push(prev_x);
        } else if prev.signum() != cur.signum() && cur != 0.0 {
            let (mut lo, mut hi) = (prev_x, x);
            for _ in 0..100 {
                let mid = 0.5 * (lo + hi);
                if omega(mid).signum() == omega(lo).signum() {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            roots.push(0.5 * (lo + hi));
        }
        prev_x = x;
        prev = cur;
    }
    if prev == 0.0 {
        roots.push(prev_x);
    }
    roots
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn xi_reduction_is_sound(v in (3usize..=4).prop_flat_map(view)) {
        let from_sampling = omega_roots_by_sampling(&v);
        let from_xi: Vec<f64> = match solve_xi_roots(&omega_xi_coeffs(&v)) {
            XiRoots::Constant => return Ok(()),
            XiRoots::Real(r) => r.into_iter().flat_map(xi_to_x_candidates).collect(),
        };
        // Simple sign-changing roots of ω must all come out of the ξ route.
        // Angles are compared modulo the π/2 period, so x = 1 and x = −1 coincide.
        for x in &from_sampling {
            prop_assert!(
                from_xi.iter().any(|y| {
                    let diff = (x.atan() - y.atan()).rem_euclid(FRAC_PI_2);
                    diff.min(FRAC_PI_2 - diff) <= 1e-6
                }),
                "sampled root {x} missing from {from_xi:?}"
            );
        }
    }
}

#[test]
fn haar_first_entry_is_uniform_on_the_interval() {
    // For Haar Q in SO(3) each column is uniform on the sphere, so Q₁₁ ~ U[−1, 1].
    let samples = 10_000;
    let mut xs: Vec<f64> = (0..samples).map(|s| random_rotation(3, s as u64).unwrap()[(0, 0)]).collect();
    xs.sort_by(f64::total_cmp);
    let ks = xs
        .iter()
        .enumerate()
        .map(|(k, &x)| {
            let cdf = (x + 1.0) / 2.0;
            (cdf - k as f64 / samples as f64).abs().max(((k + 1) as f64 / samples as f64 - cdf).abs())
        })
        .fold(0.0, f64::max);
    // Kolmogorov critical value at α = 0.001.
    assert!(ks < 1.95 / (samples as f64).sqrt(), "KS statistic {ks}");
}

#[test]
fn random_rotations_are_special_orthogonal() {
    for seed in 0..100 {
        let q = random_rotation(7, seed).unwrap();
        let err = (q.transpose() * &q - DMatrix::identity(7, 7)).norm();
        assert!(err <= 1e-12);
        assert!((q.determinant() - 1.0).abs() <= 1e-12);
    }
    assert_eq!(random_rotation(5, 9).unwrap(), random_rotation(5, 9).unwrap());
}

#[test]
fn orthogonality_drift_after_many_rotations() {
    let n = 10;
    let t = SymTensor::diagonal(3, &[1.0; 10]).unwrap();
    let mut state = RotationState::identity(TensorSet::single(t)).unwrap();
    let mut x: u64 = 0x9e37_79b9_7f4a_7c15;
    for _ in 0..10_000 {
        x ^= x << 13;
        x ^= x >> 7;
        x ^= x << 17;
        let i = (x % n as u64) as usize;
        let j = ((x >> 8) % n as u64) as usize;
        let theta = ((x >> 16) as f64 / (1u64 << 48) as f64 - 0.5) * FRAC_PI_2;
        if i == j {
            continue;
        }
        state.apply_rotation(&GivensRotation::new(i.min(j), i.max(j), theta).unwrap()).unwrap();
    }
    let q = state.q();
    let err = (q.transpose() * q - DMatrix::identity(n, n)).norm();
    assert!(err <= 1e-8, "drift {err}");
    assert!((q.determinant() - 1.0).abs() <= 1e-8);
}
