//! Reference maximizer by dense sampling, independent of the `Ω` reduction.

use alloc::vec::Vec;
use core::f64::consts::{FRAC_PI_2, FRAC_PI_4};

use super::{AngleResult, Candidate, SubproblemView};

const INV_PHI: f64 = 0.618_033_988_749_894_9;
const GOLDEN_TOL: f64 = 1e-12;

/// Maps an angle into `[−π/4, π/4]` using the `π/2` period of `h̃`.
fn wrap(theta: f64) -> f64 {
    let mut t = theta;
    while t > FRAC_PI_4 {
        t -= FRAC_PI_2;
    }
    while t < -FRAC_PI_4 {
        t += FRAC_PI_2;
    }
    t
}

fn golden_section(view: &SubproblemView, mut lo: f64, mut hi: f64) -> f64 {
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = view.gain(x1);
    let mut f2 = view.gain(x2);
    while hi - lo > GOLDEN_TOL {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = view.gain(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = view.gain(x1);
        }
    }
    0.5 * (lo + hi)
}

/// Grid over one period and the indices of its local maxima (periodic neighbours).
fn grid_peaks(view: &SubproblemView, grid_points: usize) -> (Vec<f64>, f64, Vec<usize>) {
    let n = grid_points.max(3);
    let step = FRAC_PI_2 / n as f64;
    let values: Vec<f64> = (0..n).map(|k| view.gain(-FRAC_PI_4 + k as f64 * step)).collect();
    let peaks = (0..n)
        .filter(|&k| {
            let prev = values[(k + n - 1) % n];
            let next = values[(k + 1) % n];
            values[k] >= prev && values[k] >= next
        })
        .collect();
    (values, step, peaks)
}

/// Dense grid of `grid_points` cells over `[−π/4, π/4]`, then golden-section
/// refinement to `1e-12` of every cell holding a grid-local maximum.
pub fn brute_force_angle(view: &SubproblemView, grid_points: usize) -> AngleResult {
    let (_, step, peaks) = grid_peaks(view, grid_points);
    let mut candidates = alloc::vec![Candidate { theta: 0.0, gain: 0.0 }];
    for k in peaks {
        let centre = -FRAC_PI_4 + k as f64 * step;
        let theta = wrap(golden_section(view, centre - step, centre + step));
        candidates.push(Candidate { theta, gain: view.gain(theta) });
    }
    AngleResult::select(candidates, view.scale() + view.delta0())
}

/// Every strict local maximizer of `h̃` on the circle `[−π/4, π/4)`, located by
/// bisection on the sign change of `h̃'` near each grid peak.
pub fn local_maximizers(view: &SubproblemView, grid_points: usize) -> Vec<f64> {
    let (_, step, peaks) = grid_peaks(view, grid_points);
    let mut out = Vec::new();
    for k in peaks {
        let centre = -FRAC_PI_4 + k as f64 * step;
        let (mut lo, mut hi) = (centre - step, centre + step);
        let (dlo, dhi) = (view.h_tilde_prime(lo), view.h_tilde_prime(hi));
        if !(dlo > 0.0 && dhi < 0.0) {
            continue;
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if view.h_tilde_prime(mid) > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        out.push(wrap(0.5 * (lo + hi)));
    }
    out.sort_by(f64::total_cmp);
    out.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn oracle_keeps_diagonal_views() {
        let v = SubproblemView::new(3, vec![[1.0, 0.0, 0.0, 0.5, 0.0]], 0.0).unwrap();
        assert!(brute_force_angle(&v, 1000).gain >= 0.0);
        let d = SubproblemView::new(3, vec![[1.0, 0.0, 0.0, 0.0, 0.0]], 0.0).unwrap();
        let r = brute_force_angle(&d, 1000);
        assert_eq!(r.theta, 0.0);
    }

    #[test]
    fn oracle_finds_quarter_turn() {
        let v = SubproblemView::new(2, vec![[0.0, 1.0, 0.0, 0.0, 0.0]], 0.0).unwrap();
        let r = brute_force_angle(&v, 1000);
        assert!((r.gain - 2.0).abs() < 1e-12);
        assert!((r.theta.abs() - FRAC_PI_4).abs() < 1e-6);
    }

    #[test]
    fn wrap_into_period() {
        assert!((wrap(FRAC_PI_4 + 0.1) - (-FRAC_PI_4 + 0.1)).abs() < 1e-15);
        assert_eq!(wrap(0.3), 0.3);
    }
}
