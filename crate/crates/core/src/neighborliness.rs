//! Numerical estimation of the local neighborliness arc length `φ_k`.
//!
//! For an arc of length `ψ` centered at 0, every configuration of `k`
//! points on the arc (each with tangency multiplicity 2) defines a tangent
//! hyperplane. The arc is safe when all of these hyperplanes support the
//! orbitope and touch it only at the configuration. A multi-start
//! coordinate descent looks for the configuration whose hyperplane is
//! closest to failing, measured by the positivity margin of the support
//! polynomial with the tangencies divided out; every final configuration is
//! then certified. `φ_k` is bracketed by bisection on `ψ`.

use alloc::vec::Vec;
use core::cmp::Ordering;
use core::f64::consts::PI;

use rand::Rng;

use crate::bounds::neighborliness_bound;
use crate::curve::{Arc, CurveSpec};
use crate::error::{Error, Result};
use crate::face::{reduced_margin, verify_support, FaceCertificate};
use crate::runner::start_rng;
pub use crate::runner::{Sequential, StartRunner};
use crate::tangent::{construct_hyperplane, TangencyPattern};

/// Coordinate-descent iterations per start.
pub const ITERATIONS_PER_START: usize = 200;

/// Largest `k` for which [`bound_comparison_table`] runs the full search.
pub const MAX_ESTIMATED_K: usize = 4;

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct StartOutcome {
    /// Final point offsets from the arc center, ascending.
    pub points: Vec<f64>,
    pub pattern: TangencyPattern,
    /// Minimum of the reduced support polynomial over the antipodal arc.
    pub margin: f64,
    pub certificate: FaceCertificate,
}

impl StartOutcome {
    /// Not supporting, or supporting with contacts outside the pattern.
    pub fn is_violation(&self) -> bool {
        !self.certificate.is_supporting || !self.certificate.extra_contacts.is_empty()
    }

    /// Certified global minimum of the support polynomial.
    pub fn score(&self) -> f64 {
        self.certificate.global_min_value
    }

    fn span(&self) -> f64 {
        self.points.last().copied().unwrap_or(0.0) - self.points.first().copied().unwrap_or(0.0)
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct WorstConfiguration {
    pub psi: f64,
    pub worst: StartOutcome,
    pub starts: usize,
    /// Starts whose final configuration violates facehood.
    pub violations: usize,
    /// Starts whose certificate matches their pattern exactly.
    pub exact_faces: usize,
}

impl WorstConfiguration {
    pub fn pattern(&self) -> &TangencyPattern {
        &self.worst.pattern
    }

    pub fn score(&self) -> f64 {
        self.worst.score()
    }

    pub fn is_safe(&self) -> bool {
        self.violations == 0
    }
}

/// Violations first (most negative score), then the smallest margin;
/// remaining ties by the point coordinates.
fn severity(a: &StartOutcome, b: &StartOutcome) -> Ordering {
    match (a.is_violation(), b.is_violation()) {
        (true, false) => Ordering::Less,
        (false, true) => Ordering::Greater,
        (true, true) => a.score().total_cmp(&b.score()),
        (false, false) => a.margin.total_cmp(&b.margin),
    }
    .then_with(|| {
        a.points.iter().zip(&b.points).map(|(x, y)| x.total_cmp(y)).find(|o| o.is_ne()).unwrap_or(Ordering::Equal)
    })
}

struct Search<'a> {
    spec: &'a CurveSpec,
    arc: Arc,
    half: f64,
}

impl<'a> Search<'a> {
    fn new(spec: &'a CurveSpec, psi: f64) -> Result<Self> {
        if !(psi > 0.0 && psi < PI) {
            return Err(Error::DomainError { what: "psi", value: psi });
        }
        Ok(Self { spec, arc: Arc::new(0.0, psi)?, half: psi / 2.0 })
    }

    fn clamp(&self, t: f64) -> f64 {
        // The arc is half-open at +ψ/2.
        t.clamp(-self.half, self.half * (1.0 - 1e-12))
    }

    fn pattern(&self, points: &[f64]) -> Result<TangencyPattern> {
        let entries: Vec<(f64, u32)> = points.iter().map(|&t| (t, 2)).collect();
        TangencyPattern::new(self.spec, &entries, self.arc)
    }

    fn objective(&self, points: &[f64]) -> f64 {
        let eval = || -> Result<f64> {
            let pattern = self.pattern(points)?;
            let h = construct_hyperplane(self.spec, &pattern)?;
            reduced_margin(&h.support_poly(self.spec)?, &pattern)
        };
        eval().unwrap_or(f64::INFINITY)
    }

    fn run_start(&self, seed: u64, start: usize) -> Result<StartOutcome> {
        let k = self.spec.k();
        let mut rng = start_rng(seed, start);
        let mut points = Vec::with_capacity(k);
        let mut value = f64::INFINITY;
        for _ in 0..32 {
            points = (0..k).map(|_| self.clamp(rng.gen_range(-self.half..self.half))).collect();
            points.sort_by(f64::total_cmp);
            value = self.objective(&points);
            if value.is_finite() {
                break;
            }
        }

        let mut step = self.half / 2.0;
        for _ in 0..ITERATIONS_PER_START {
            if step < 1e-10 {
                break;
            }
            let mut improved = false;
            for i in 0..k {
                for dir in [1.0, -1.0] {
                    let mut trial = points.clone();
                    trial[i] = self.clamp(trial[i] + dir * step);
                    trial.sort_by(f64::total_cmp);
                    let v = self.objective(&trial);
                    if v < value {
                        points = trial;
                        value = v;
                        improved = true;
                    }
                }
            }
            if !improved {
                step *= 0.5;
            }
        }

        let pattern = self.pattern(&points)?;
        let h = construct_hyperplane(self.spec, &pattern)?;
        let certificate = verify_support(self.spec, &h, &pattern)?;
        Ok(StartOutcome { points, pattern, margin: value, certificate })
    }
}

/// Multi-start search for the configuration of `k` points on the arc of
/// length `psi` centered at 0 whose tangent hyperplane is closest to
/// failing.
pub fn worst_configuration<R: StartRunner>(
    runner: &R,
    spec: &CurveSpec,
    psi: f64,
    starts: usize,
    seed: u64,
) -> Result<WorstConfiguration> {
    let search = Search::new(spec, psi)?;
    let starts = starts.max(1);
    let outcomes: Vec<Result<StartOutcome>> = runner.run(starts, |i| search.run_start(seed, i));
    let mut ok = Vec::with_capacity(starts);
    for o in outcomes {
        ok.push(o?);
    }
    let violations = ok.iter().filter(|o| o.is_violation()).count();
    let exact_faces = ok.iter().filter(|o| o.certificate.matches_pattern(&o.pattern)).count();
    let worst = ok.into_iter().min_by(severity).ok_or(Error::InvalidArgument("no starts".into()))?;
    Ok(WorstConfiguration { psi, worst, starts, violations, exact_faces })
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PhiEstimate {
    pub k: usize,
    /// Largest arc length certified safe by the search (heuristic: finite
    /// starts).
    pub phi_lower_numeric: f64,
    /// Span of the smallest failing configuration found; `None` when every
    /// arc shorter than `π` came out safe.
    pub phi_upper_numeric: Option<f64>,
    pub paper_bound: f64,
    /// Total number of local searches run.
    pub trials: usize,
    pub seed: u64,
    /// Failing configurations found inside an arc already certified safe.
    pub monotonicity_violations: usize,
    /// Points of the smallest failing configuration.
    pub witness: Option<Vec<f64>>,
}

/// Brackets `φ_k` by bisection on the arc length, starting from the known
/// safe value `√6·k^{-3/2}`.
pub fn estimate_phi<R: StartRunner>(
    runner: &R,
    spec: &CurveSpec,
    tol: f64,
    starts: usize,
    seed: u64,
) -> Result<PhiEstimate> {
    if !(tol > 0.0) {
        return Err(Error::DomainError { what: "tol", value: tol });
    }
    let k = spec.k();
    let bound = neighborliness_bound(k);
    let mut trials = 0;
    let mut budget = starts.max(1);
    let mut violations = 0;

    let base = worst_configuration(runner, spec, bound, budget, seed)?;
    trials += base.starts;
    if !base.is_safe() {
        return Err(Error::SearchInconclusive { k, psi: bound, score: base.score() });
    }

    let top = PI * (1.0 - 1e-9);
    let first = worst_configuration(runner, spec, top, budget, seed)?;
    trials += first.starts;
    if first.is_safe() {
        return Ok(PhiEstimate {
            k,
            phi_lower_numeric: top,
            phi_upper_numeric: None,
            paper_bound: bound,
            trials,
            seed,
            monotonicity_violations: 0,
            witness: None,
        });
    }

    let mut lo = bound;
    let mut hi = first.worst.span().min(top);
    let mut witness = first.worst.points.clone();
    let mut retries = 0;
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        let w = worst_configuration(runner, spec, mid, budget, seed)?;
        trials += w.starts;
        if w.is_safe() {
            lo = mid;
            continue;
        }
        let span = w.worst.span();
        if span <= lo && retries < 2 {
            // A failure inside an arc that was certified safe: the earlier
            // search missed it. Spend more starts and restart from the bound.
            violations += 1;
            retries += 1;
            budget *= 2;
            lo = bound;
        }
        if span < hi {
            hi = span;
            witness = w.worst.points.clone();
        }
        if hi <= lo {
            violations += 1;
            lo = hi;
            break;
        }
    }
    Ok(PhiEstimate {
        k,
        phi_lower_numeric: lo,
        phi_upper_numeric: Some(hi),
        paper_bound: bound,
        trials,
        seed,
        monotonicity_violations: violations,
        witness: Some(witness),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct BoundRow {
    pub k: usize,
    pub paper_bound: f64,
    pub phi_lower_numeric: Option<f64>,
    pub phi_upper_numeric: Option<f64>,
}

/// One row per `k = 1..=k_max`; rows past [`MAX_ESTIMATED_K`] carry the
/// bound only.
pub fn bound_comparison_table<R: StartRunner>(
    runner: &R,
    k_max: usize,
    tol: f64,
    starts: usize,
    seed: u64,
) -> Result<Vec<BoundRow>> {
    (1..=k_max)
        .map(|k| {
            if k > MAX_ESTIMATED_K {
                return Ok(BoundRow {
                    k,
                    paper_bound: neighborliness_bound(k),
                    phi_lower_numeric: None,
                    phi_upper_numeric: None,
                });
            }
            let est = estimate_phi(runner, &CurveSpec::new(k)?, tol, starts, seed)?;
            Ok(BoundRow {
                k,
                paper_bound: est.paper_bound,
                phi_lower_numeric: Some(est.phi_lower_numeric),
                phi_upper_numeric: est.phi_upper_numeric,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_point_is_always_a_face() {
        let spec = CurveSpec::new(1).unwrap();
        let w = worst_configuration(&Sequential, &spec, 1.0, 8, 7).unwrap();
        assert!(w.is_safe());
        assert!(w.score().abs() < 1e-12);
        assert_eq!(w.exact_faces, 8);
    }

    #[test]
    fn short_arc_k2_is_safe_and_wide_arc_is_not() {
        let spec = CurveSpec::new(2).unwrap();
        let w = worst_configuration(&Sequential, &spec, 0.5, 8, 1).unwrap();
        assert!(w.is_safe(), "{w:?}");
        assert!(w.score() >= -1e-9);
        let w = worst_configuration(&Sequential, &spec, 3.0, 8, 1).unwrap();
        assert!(!w.is_safe());
        assert!(w.score() < 0.0);
    }

    #[test]
    fn deterministic_given_seed() {
        let spec = CurveSpec::new(2).unwrap();
        let a = worst_configuration(&Sequential, &spec, 2.5, 4, 99).unwrap();
        let b = worst_configuration(&Sequential, &spec, 2.5, 4, 99).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn rejects_bad_arc() {
        let spec = CurveSpec::new(2).unwrap();
        assert!(worst_configuration(&Sequential, &spec, PI, 4, 0).is_err());
        assert!(worst_configuration(&Sequential, &spec, 0.0, 4, 0).is_err());
    }

    #[test]
    fn k1_never_fails() {
        let est = estimate_phi(&Sequential, &CurveSpec::new(1).unwrap(), 1e-2, 4, 42).unwrap();
        assert!(est.phi_lower_numeric >= 6f64.sqrt());
        assert_eq!(est.phi_upper_numeric, None);
    }

    #[test]
    fn table_has_bound_only_rows_past_four() {
        let rows = bound_comparison_table(&Sequential, 1, 1e-2, 2, 0).unwrap();
        assert_eq!(rows.len(), 1);
        assert!((rows[0].paper_bound - 2.449_49).abs() < 1e-5);
        let r =
            BoundRow { k: 5, paper_bound: neighborliness_bound(5), phi_lower_numeric: None, phi_upper_numeric: None };
        assert!(r.phi_lower_numeric.is_none());
    }
}
