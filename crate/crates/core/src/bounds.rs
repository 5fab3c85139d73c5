//! Closed-form bounds on contact separation and their constants.
//!
//! If a supporting hyperplane tangent at `t` also touches the curve at
//! `s` with `|s - π - t| = ε`, the midpoint `(x(s) + x(t))/2` lies on the
//! face and therefore outside the ball of radius `1/√2`. Its squared norm
//! minus `1/2` is the gap function
//!
//! ```text
//! gap(k, ε) = ½ (k - 1 - sin(2kε) / (2 sin ε))
//! ```
//!
//! which is negative for small `ε`; its first positive root `ε*(k)` is a
//! lower bound on how close a new contact can come to an antipode, and it
//! exceeds `√(3/2)·k^{-3/2}`.

use alloc::vec::Vec;
use core::f64::consts::{FRAC_1_SQRT_2, PI};

use crate::curve::CurveSpec;
use crate::error::{Error, Result};
use crate::linalg;
use crate::trig_poly::grid_min;

/// `√(3/2)·k^{-3/2}`: minimum separation of a new contact from any antipode.
pub fn contact_separation_bound(k: usize) -> f64 {
    libm::sqrt(1.5) * libm::pow(k as f64, -1.5)
}

/// `√6·k^{-3/2}`: the guaranteed local neighborliness arc length.
pub fn neighborliness_bound(k: usize) -> f64 {
    libm::sqrt(6.0) * libm::pow(k as f64, -1.5)
}

/// `Σ_{i=1..k} cos((2i-1)θ)`, evaluated as `sin(2kθ) / (2 sin θ)` with a
/// Taylor series near the removable singularity at zero.
pub fn odd_cosine_sum(k: usize, theta: f64) -> f64 {
    let kf = k as f64;
    if libm::fabs(theta) < 1e-4 && kf * libm::fabs(theta) < 0.1 {
        // Power sums of the first k odd numbers.
        let k2 = kf * kf;
        let s2 = kf * (4.0 * k2 - 1.0) / 3.0;
        let s4 = kf * (48.0 * k2 * k2 - 40.0 * k2 + 7.0) / 15.0;
        let s6 = kf * (4.0 * k2 - 1.0) * (48.0 * k2 * k2 - 72.0 * k2 + 31.0) / 21.0;
        let e2 = theta * theta;
        kf - s2 * e2 / 2.0 + s4 * e2 * e2 / 24.0 - s6 * e2 * e2 * e2 / 720.0
    } else {
        libm::sin(2.0 * kf * theta) / (2.0 * libm::sin(theta))
    }
}

/// `|x(s) + x(t)|²/4 - 1/2` for `|s - π - t| = eps`.
pub fn gap(k: usize, eps: f64) -> f64 {
    0.5 * (k as f64 - 1.0 - odd_cosine_sum(k, eps))
}

/// `-1/2 + k³ε²/3`, which dominates [`gap`] on `(0, π/(2k)]`.
pub fn gap_upper_envelope(k: usize, eps: f64) -> Result<f64> {
    let kf = k as f64;
    if !(eps > 0.0 && eps <= PI / (2.0 * kf)) {
        return Err(Error::DomainError { what: "eps", value: eps });
    }
    Ok(-0.5 + kf * kf * kf * eps * eps / 3.0)
}

/// Smallest positive root of `gap(k, ·)`, by bisection to width `tol`.
///
/// `gap(k, ·)` is strictly increasing on `(0, π/(2k)]` (every `ωε` stays
/// below `π`), so the bracket holds a single root.
pub fn epsilon_star(k: usize, tol: f64) -> Result<f64> {
    if k == 0 {
        return Err(Error::InvalidArgument("k must be positive".into()));
    }
    if !(tol > 0.0) {
        return Err(Error::DomainError { what: "tol", value: tol });
    }
    let mut lo = 0.0;
    let mut hi = if k == 1 { 0.999 * PI } else { PI / (2.0 * k as f64) };
    if !(gap(k, lo) < 0.0 && gap(k, hi) > 0.0) {
        return Err(Error::BracketFailure { k });
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if gap(k, mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct GapProfile {
    pub k: usize,
    pub epsilon_star: f64,
    pub thm31_bound: f64,
    pub thm12_bound: f64,
}

impl GapProfile {
    pub fn new(k: usize, tol: f64) -> Result<Self> {
        Ok(Self {
            k,
            epsilon_star: epsilon_star(k, tol)?,
            thm31_bound: contact_separation_bound(k),
            thm12_bound: neighborliness_bound(k),
        })
    }

    pub fn margin(&self) -> f64 {
        self.epsilon_star - self.thm31_bound
    }
}

/// `(s - tj) / (2(ti - tj))` and `(ti - s) / (2(ti - tj))`.
fn interpolation_weights(s: f64, ti: f64, tj: f64) -> Result<(f64, f64)> {
    let gap = ti - tj;
    if libm::fabs(gap) < 1e-12 {
        return Err(Error::CoincidentPoints { gap: libm::fabs(gap) });
    }
    Ok(((s - tj) / (2.0 * gap), (ti - s) / (2.0 * gap)))
}

/// `x(s)/2 + (s - tj)/(2(ti - tj))·x(ti) + (ti - s)/(2(ti - tj))·x(tj)`,
/// an affine combination (weights sum to one) of three curve points.
pub fn refined_point(spec: &CurveSpec, s: f64, ti: f64, tj: f64) -> Result<Vec<f64>> {
    let (wi, wj) = interpolation_weights(s, ti, tj)?;
    Ok(combine(spec, s, 0.5, wi, ti, wj, tj))
}

/// The same combination with the interpolation weights taken at the
/// antipodal parameter `s - π`. Since `x(s) = -x(s - π)`, this is half the
/// error of interpolating `x` at `s - π` linearly from `x(ti)` and `x(tj)`.
pub fn antipodal_refined_point(spec: &CurveSpec, s: f64, ti: f64, tj: f64) -> Result<Vec<f64>> {
    let (wi, wj) = interpolation_weights(s - PI, ti, tj)?;
    Ok(combine(spec, s, 0.5, wi, ti, wj, tj))
}

fn combine(spec: &CurveSpec, s: f64, ws: f64, wi: f64, ti: f64, wj: f64, tj: f64) -> Vec<f64> {
    let (xs, xi, xj) = (spec.eval_real(s), spec.eval_real(ti), spec.eval_real(tj));
    (0..spec.dim()).map(|c| ws * xs[c] + wi * xi[c] + wj * xj[c]).collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RefinedRow {
    pub k: usize,
    /// Smallest `ε` at which the combination can reach norm `1/√2`.
    pub threshold_eps: f64,
    /// Optimal spacing `tj - ti` at the threshold.
    pub best_delta: f64,
    /// Tangency points used at the threshold; the contact is `π + threshold_eps`.
    pub ti: f64,
    pub tj: f64,
    pub thm31_bound: f64,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RefinedScaling {
    pub rows: Vec<RefinedRow>,
    /// Least-squares slope of `ln threshold` against `ln k`.
    pub fitted_exponent: f64,
}

/// Threshold experiment for the three-point refinement.
///
/// The contact is `s = π + ε` with antipodal parameter `u = ε`; the nearest
/// tangency point is `ti = 0` (distance `ε` from `u`) and the second one is
/// `tj = δ` on the other side of `u`, so `δ >= 2ε`. For fixed `ε` the
/// spacing `δ` is chosen to minimize the norm of
/// [`antipodal_refined_point`]; the threshold is the smallest `ε` at which
/// that minimum reaches `1/√2`. Below it every such placement would put a
/// point of the face inside the inscribed ball.
pub fn refined_scaling_experiment(k_list: &[usize]) -> Result<RefinedScaling> {
    let mut rows = Vec::with_capacity(k_list.len());
    for &k in k_list {
        if !(2..=64).contains(&k) {
            return Err(Error::DomainError { what: "k", value: k as f64 });
        }
        let spec = CurveSpec::new(k)?;
        let best_norm = |eps: f64| -> (f64, f64) {
            let norm_at = |delta: f64| {
                antipodal_refined_point(&spec, PI + eps, 0.0, delta).map_or(f64::INFINITY, |v| linalg::norm(&v))
            };
            let (delta, n) = grid_min(norm_at, 2.0 * eps, 6.0 * eps, 64);
            (n, delta)
        };

        let top = PI / (2.0 * k as f64);
        let steps = 400;
        let mut lo = 0.0;
        let mut hi = None;
        for i in 1..=steps {
            let eps = top * i as f64 / steps as f64;
            if best_norm(eps).0 >= FRAC_1_SQRT_2 {
                hi = Some(eps);
                break;
            }
            lo = eps;
        }
        let Some(mut hi) = hi else {
            return Err(Error::BracketFailure { k });
        };
        while hi - lo > 1e-12 {
            let mid = 0.5 * (lo + hi);
            if best_norm(mid).0 >= FRAC_1_SQRT_2 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        let (_, delta) = best_norm(hi);
        rows.push(RefinedRow {
            k,
            threshold_eps: hi,
            best_delta: delta,
            ti: 0.0,
            tj: delta,
            thm31_bound: contact_separation_bound(k),
        });
    }
    let fitted_exponent = log_log_slope(&rows);
    Ok(RefinedScaling { rows, fitted_exponent })
}

fn log_log_slope(rows: &[RefinedRow]) -> f64 {
    let n = rows.len() as f64;
    if rows.len() < 2 {
        return f64::NAN;
    }
    let xs: Vec<f64> = rows.iter().map(|r| libm::log(r.k as f64)).collect();
    let ys: Vec<f64> = rows.iter().map(|r| libm::log(r.threshold_eps)).collect();
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}
