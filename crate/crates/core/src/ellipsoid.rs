//! Minimum volume ellipsoid, inradius sandwich and the `x_{2k-1} = 1` face.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::{PI, TAU};

use rand::Rng;

use crate::curve::{CirclePoint, CurveSpec};
use crate::error::{Error, Result};
use crate::face::{certify_hyperplane, FaceCertificate};
use crate::linalg::{dot, norm, solve, Matrix};
use crate::runner::{start_rng, StartRunner};
use crate::tangent::Hyperplane;
use crate::trig_poly::{grid_min, TrigPoly};

/// Slack of the ellipsoid membership test.
const MEMBERSHIP_SLACK: f64 = 1e-12;

/// Pattern-search iterations per direction start.
const INRADIUS_ITERATIONS: usize = 400;

/// The minimum volume ellipsoid of the orbitope, written blockwise over the
/// coordinate pairs `(cos (2j-1)t, sin (2j-1)t)`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct MinVolEllipsoid {
    pub k: usize,
    /// `dim V_i / dim V` for each 2-dimensional block.
    pub block_weight: f64,
    /// `⟨v_i, v_i⟩` for the orbit base point `v = x(0)`.
    pub base_block_norms: Vec<f64>,
    pub radius: f64,
}

impl MinVolEllipsoid {
    pub fn for_curve(spec: &CurveSpec) -> Self {
        let k = spec.k();
        let v = spec.eval(0.0);
        let base_block_norms = v.chunks(2).map(|b| b[0] * b[0] + b[1] * b[1]).collect();
        Self { k, block_weight: 2.0 / spec.dim() as f64, base_block_norms, radius: emin_radius(k) }
    }

    /// `Σ_i w·|x_i|²/⟨v_i, v_i⟩`; the point is inside iff this is at most 1.
    pub fn gauge_squared(&self, x: &[f64]) -> Result<f64> {
        if x.len() != 2 * self.k {
            return Err(Error::DimensionMismatch { expected: 2 * self.k, actual: x.len() });
        }
        Ok(x.chunks(2)
            .zip(&self.base_block_norms)
            .map(|(b, n)| self.block_weight * (b[0] * b[0] + b[1] * b[1]) / n)
            .sum())
    }
}

pub fn emin_membership(e: &MinVolEllipsoid, x: &[f64]) -> Result<bool> {
    Ok(e.gauge_squared(x)? <= 1.0 + MEMBERSHIP_SLACK)
}

pub fn emin_radius(k: usize) -> f64 {
    libm::sqrt(k as f64)
}

/// `(lower, upper)` bounds on the inradius. The lower one is the ellipsoid
/// radius shrunk by `(dim)^{-1/2}`.
pub fn inradius_bounds(k: usize) -> (f64, f64) {
    let lower = emin_radius(k) / libm::sqrt((2 * k) as f64);
    (lower, 1.0)
}

/// Certified support value `max_t ⟨u, x(t)⟩`.
pub fn support_value(spec: &CurveSpec, u: &[f64]) -> Result<f64> {
    let neg: Vec<f64> = u.iter().map(|v| -v).collect();
    let (_, m) = TrigPoly::from_functional(spec, &neg, 0.0)?.global_min()?;
    Ok(-m)
}

/// Local maxima `(t, value)` of `p` found on a periodic grid and polished.
fn peaks(p: &TrigPoly, samples: usize) -> Vec<(f64, f64)> {
    let h = TAU / samples as f64;
    let vals: Vec<f64> = (0..samples).map(|i| p.eval(h * i as f64)).collect();
    let mut out = Vec::new();
    for i in 0..samples {
        let (prev, next) = (vals[(i + samples - 1) % samples], vals[(i + 1) % samples]);
        if vals[i] >= prev && vals[i] > next {
            let t = h * i as f64;
            let (at, v) = grid_min(|s| -p.eval(s), t - h, t + h, 3);
            out.push((at, -v));
        }
    }
    out
}

/// Support value with every local peak polished. Near an optimal direction
/// several peaks tie, so polishing only the highest grid sample would make
/// the objective noisy.
fn support_value_fast(spec: &CurveSpec, u: &[f64], samples: usize) -> f64 {
    let Ok(p) = TrigPoly::from_functional(spec, u, 0.0) else { return f64::INFINITY };
    peaks(&p, samples).iter().map(|&(_, v)| v).fold(f64::NEG_INFINITY, f64::max)
}

/// Point of the affine hull of `points` closest to the origin.
fn affine_foot(points: &[Vec<f64>]) -> Option<Vec<f64>> {
    let (p0, rest) = points.split_first()?;
    let d: Vec<Vec<f64>> = rest.iter().map(|p| p.iter().zip(p0).map(|(a, b)| a - b).collect()).collect();
    let mut y = p0.clone();
    if d.is_empty() {
        return Some(y);
    }
    let gram: Vec<Vec<f64>> = d.iter().map(|a| d.iter().map(|b| dot(a, b)).collect()).collect();
    let rhs: Vec<f64> = d.iter().map(|a| -dot(a, p0)).collect();
    let c = solve(&Matrix::from_rows(&gram), &rhs)?;
    for (cj, dj) in c.iter().zip(&d) {
        y.iter_mut().zip(dj).for_each(|(yi, di)| *yi += cj * di);
    }
    Some(y)
}

/// At an optimal direction `u`, `r·u` is the foot of the perpendicular to
/// the affine hull of the active contacts, and each contact is a critical
/// point of `⟨u, x(t)⟩`. Newton on the contact parameters solves that
/// square system.
fn contact_residual(spec: &CurveSpec, ts: &[f64]) -> Option<(Vec<f64>, Vec<f64>)> {
    let pts: Vec<Vec<f64>> = ts.iter().map(|&t| spec.eval(t)).collect();
    let y = affine_foot(&pts)?;
    let f = ts.iter().map(|&t| dot(&y, &spec.deriv(t, 1))).collect();
    Some((y, f))
}

fn polish_contacts(spec: &CurveSpec, mut ts: Vec<f64>) -> Option<Vec<f64>> {
    const FD_STEP: f64 = 1e-7;
    let (mut y, mut f) = contact_residual(spec, &ts)?;
    for _ in 0..40 {
        let fnorm = norm(&f);
        if fnorm < 1e-15 {
            break;
        }
        let m = ts.len();
        let mut jac = Matrix::zeros(m, m);
        for j in 0..m {
            let mut plus = ts.clone();
            let mut minus = ts.clone();
            plus[j] += FD_STEP;
            minus[j] -= FD_STEP;
            let (_, fp) = contact_residual(spec, &plus)?;
            let (_, fm) = contact_residual(spec, &minus)?;
            for i in 0..m {
                jac[(i, j)] = (fp[i] - fm[i]) / (2.0 * FD_STEP);
            }
        }
        let neg: Vec<f64> = f.iter().map(|v| -v).collect();
        let Some(delta) = solve(&jac, &neg) else { break };
        let mut lambda = 1.0;
        let mut accepted = false;
        for _ in 0..12 {
            let trial: Vec<f64> = ts.iter().zip(&delta).map(|(t, d)| t + lambda * d).collect();
            if let Some((ty, tf)) = contact_residual(spec, &trial) {
                if norm(&tf) < fnorm {
                    ts = trial;
                    y = ty;
                    f = tf;
                    accepted = true;
                    break;
                }
            }
            lambda *= 0.5;
        }
        if !accepted {
            break;
        }
    }
    normalized(y)
}

/// Candidate directions from Newton polishing, one per active-set guess.
fn polish_direction(spec: &CurveSpec, u: &[f64], samples: usize) -> Vec<Vec<f64>> {
    let Ok(p) = TrigPoly::from_functional(spec, u, 0.0) else { return Vec::new() };
    let mut pk = peaks(&p, samples);
    pk.sort_by(|a, b| b.1.total_cmp(&a.1));
    let Some(&(_, top)) = pk.first() else { return Vec::new() };
    let mut out = Vec::new();
    let mut last = 0;
    for tau in [1e-8, 1e-6, 1e-4, 1e-3, 1e-2] {
        let active: Vec<f64> = pk.iter().take(spec.dim()).filter(|(_, v)| *v >= top - tau).map(|&(t, _)| t).collect();
        if active.len() == last {
            continue;
        }
        last = active.len();
        if let Some(d) = polish_contacts(spec, active) {
            out.push(d);
        }
    }
    out
}

fn normalized(mut v: Vec<f64>) -> Option<Vec<f64>> {
    let n = norm(&v);
    if !(n > 1e-300) {
        return None;
    }
    v.iter_mut().for_each(|x| *x /= n);
    Some(v)
}

fn gaussian<R: Rng>(rng: &mut R) -> f64 {
    let u1: f64 = 1.0 - rng.gen::<f64>();
    let u2: f64 = rng.gen();
    libm::sqrt(-2.0 * libm::log(u1)) * libm::cos(TAU * u2)
}

fn random_unit<R: Rng>(rng: &mut R, dim: usize) -> Vec<f64> {
    loop {
        let v = (0..dim).map(|_| gaussian(rng)).collect();
        if let Some(u) = normalized(v) {
            return u;
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct InradiusEstimate {
    pub k: usize,
    /// Certified support value in `direction`.
    pub value: f64,
    pub direction: Vec<f64>,
    pub starts: usize,
    pub seed: u64,
}

/// Minimizes the support value over unit directions. Uses `starts` random
/// directions plus the `2k` coordinate directions, each refined by a
/// pattern search on the sphere.
pub fn inradius_estimate<R: StartRunner>(
    runner: &R,
    spec: &CurveSpec,
    starts: usize,
    seed: u64,
) -> Result<InradiusEstimate> {
    let dim = spec.dim();
    let samples = 16 * spec.max_frequency() as usize;
    let total = starts + dim;

    let search = |i: usize| -> Result<(f64, Vec<f64>)> {
        let mut rng = start_rng(seed, i);
        let mut u = if i < starts {
            random_unit(&mut rng, dim)
        } else {
            let mut e = vec![0.0; dim];
            e[i - starts] = 1.0;
            e
        };
        let mut value = support_value_fast(spec, &u, samples);
        let mut step = 0.5;
        let mut misses = 0;
        for _ in 0..INRADIUS_ITERATIONS {
            if step < 1e-5 {
                break;
            }
            let mut moves: Vec<Vec<f64>> = Vec::with_capacity(4 * dim);
            for j in 0..dim {
                for sign in [1.0, -1.0] {
                    let mut d = vec![0.0; dim];
                    d[j] = sign;
                    moves.push(d);
                }
            }
            for _ in 0..dim {
                let d = random_unit(&mut rng, dim);
                moves.push(d.iter().map(|x| -x).collect());
                moves.push(d);
            }
            let mut best: Option<(f64, Vec<f64>)> = None;
            for d in moves {
                let trial = u.iter().zip(&d).map(|(a, b)| a + step * b).collect();
                let Some(trial) = normalized(trial) else { continue };
                let v = support_value_fast(spec, &trial, samples);
                if v < value && best.as_ref().is_none_or(|(b, _)| v < *b) {
                    best = Some((v, trial));
                }
            }
            match best {
                Some((v, t)) => {
                    value = v;
                    u = t;
                    misses = 0;
                }
                // Random directions are redrawn each sweep; give them a few
                // tries before shrinking.
                None if misses < 2 => misses += 1,
                None => {
                    step *= 0.5;
                    misses = 0;
                }
            }
        }
        let mut certified = support_value(spec, &u)?;
        for cand in polish_direction(spec, &u, samples) {
            let v = support_value(spec, &cand)?;
            if v < certified {
                certified = v;
                u = cand;
            }
        }
        Ok((certified, u))
    };

    let results = runner.run(total, search);
    let mut best: Option<(f64, Vec<f64>)> = None;
    for r in results {
        let (v, u) = r?;
        let better = match &best {
            None => true,
            Some((bv, bu)) => v < *bv || (v == *bv && lexicographic_less(&u, bu)),
        };
        if better {
            best = Some((v, u));
        }
    }
    let (value, direction) = best.ok_or(Error::InvalidArgument("no starts".into()))?;
    Ok(InradiusEstimate { k: spec.k(), value, direction, starts: total, seed })
}

fn lexicographic_less(a: &[f64], b: &[f64]) -> bool {
    a.iter().zip(b).map(|(x, y)| x.total_cmp(y)).find(|o| o.is_ne()).is_some_and(|o| o.is_lt())
}

/// The hyperplane `x_{2k-1} = 1`, oriented so the orbitope lies on the
/// nonnegative side: support polynomial `1 − cos((2k−1)t)`.
pub fn top_face_hyperplane(spec: &CurveSpec) -> Result<Hyperplane> {
    let mut normal = vec![0.0; spec.dim()];
    normal[spec.dim() - 2] = -1.0;
    Hyperplane::new(normal, -1.0)
}

/// Certificate of the face cut out by `x_{2k-1} = 1`: contacts at the
/// `2k-1` points `2πj/(2k-1)`.
pub fn top_face_certificate(spec: &CurveSpec) -> Result<FaceCertificate> {
    if spec.k() < 2 {
        return Err(Error::InvalidArgument("top face needs k >= 2".into()));
    }
    let w = spec.max_frequency();
    let expected: Vec<CirclePoint> = (0..w).map(|j| CirclePoint::new(2.0 * PI * f64::from(j) / f64::from(w))).collect();
    certify_hyperplane(spec, &top_face_hyperplane(spec)?, &expected)
}
