//! Support and facehood certificates for tangent hyperplanes.

use alloc::vec::Vec;

use crate::curve::{Arc, CirclePoint, CurveSpec};
use crate::error::Result;
use crate::linalg;
use crate::tangent::{Hyperplane, TangencyPattern, MERGE_SEPARATION};
use crate::trig_poly::{CircleRoot, CircleRootSet, TrigPoly, DEFAULT_ROOT_TOL};

/// Relative rank threshold for the affine rank of contact points.
const FACE_RANK_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct FaceCertificate {
    pub is_supporting: bool,
    pub global_min_value: f64,
    pub global_min_at: CirclePoint,
    /// Roots of the support polynomial; empty unless supporting.
    pub contact_set: CircleRootSet,
    /// Affine dimension of the contact points; `None` unless supporting.
    pub face_dim: Option<usize>,
    /// Contacts that do not match any expected tangency point.
    pub extra_contacts: Vec<CirclePoint>,
    /// Smallest arc distance between an extra contact `s` and an antipode
    /// `t_i + π` of the pattern.
    pub min_opposite_gap: Option<f64>,
    /// False when an extra contact falls outside the antipodal arc of the
    /// pattern; that would contradict the opposite-arc localization of new
    /// contacts and is reported rather than dropped.
    pub localized: bool,
}

impl FaceCertificate {
    /// Supporting, no extra contacts, and the contacts account for exactly
    /// the pattern's points and multiplicities.
    pub fn matches_pattern(&self, pattern: &TangencyPattern) -> bool {
        if !self.is_supporting || !self.extra_contacts.is_empty() {
            return false;
        }
        let covers = |r: &CircleRoot, t: CirclePoint| r.t.distance(t) <= r.radius.max(MERGE_SEPARATION);
        let all_covered = pattern.entries().iter().all(|e| self.contact_set.roots.iter().any(|r| covers(r, e.t)));
        let mults_agree = self.contact_set.roots.iter().all(|r| {
            let expected: u32 = pattern.entries().iter().filter(|e| covers(r, e.t)).map(|e| e.multiplicity).sum();
            expected as usize == r.multiplicity
        });
        all_covered && mults_agree
    }

    /// Smallest norm of `(x(u) + x(v))/2` over pairs of contacts (and each
    /// contact with itself).
    pub fn min_contact_midpoint_norm(&self, spec: &CurveSpec) -> Option<f64> {
        let pts: Vec<Vec<f64>> = self.contact_set.roots.iter().map(|r| spec.eval(r.t)).collect();
        let mut best: Option<f64> = None;
        for (i, a) in pts.iter().enumerate() {
            for b in &pts[i..] {
                let mid: Vec<f64> = a.iter().zip(b).map(|(x, y)| (x + y) / 2.0).collect();
                let n = linalg::norm(&mid);
                best = Some(best.map_or(n, |m: f64| m.min(n)));
            }
        }
        best
    }
}

/// Tolerance of the one-sided support test.
pub fn support_tol(h: &Hyperplane) -> f64 {
    1e-9 * (1.0 + libm::fabs(h.offset()))
}

/// Certificate for an arbitrary oriented hyperplane; contacts within the
/// merge tolerance (or a root's resolution radius) of `expected` are not
/// counted as extra.
pub fn certify_hyperplane(spec: &CurveSpec, h: &Hyperplane, expected: &[CirclePoint]) -> Result<FaceCertificate> {
    let p = h.support_poly(spec)?;
    let (at, value) = p.global_min()?;
    let is_supporting = value >= -support_tol(h);
    if !is_supporting {
        return Ok(FaceCertificate {
            is_supporting,
            global_min_value: value,
            global_min_at: at,
            contact_set: CircleRootSet::default(),
            face_dim: None,
            extra_contacts: Vec::new(),
            min_opposite_gap: None,
            localized: true,
        });
    }
    let contact_set = p.circle_roots(DEFAULT_ROOT_TOL)?;
    let points: Vec<Vec<f64>> = contact_set.roots.iter().map(|r| spec.eval(r.t)).collect();
    let extra_contacts = contact_set
        .roots
        .iter()
        .filter(|r| !expected.iter().any(|&t| r.t.distance(t) <= r.radius.max(MERGE_SEPARATION)))
        .map(|r| r.t)
        .collect();
    Ok(FaceCertificate {
        is_supporting,
        global_min_value: value,
        global_min_at: at,
        face_dim: Some(affine_rank(&points)),
        contact_set,
        extra_contacts,
        min_opposite_gap: None,
        localized: true,
    })
}

/// Decides whether the hyperplane built from `pattern` supports the
/// orbitope and describes the resulting face.
pub fn verify_support(spec: &CurveSpec, h: &Hyperplane, pattern: &TangencyPattern) -> Result<FaceCertificate> {
    let expected: Vec<CirclePoint> = pattern.entries().iter().map(|e| e.t).collect();
    let mut cert = certify_hyperplane(spec, h, &expected)?;
    let opposite = pattern.arc().opposite().widened(MERGE_SEPARATION);
    cert.localized = cert.extra_contacts.iter().all(|&s| opposite.contains(s));
    cert.min_opposite_gap = cert
        .extra_contacts
        .iter()
        .map(|&s| contact_separation(pattern, s))
        .fold(None, |acc: Option<f64>, g| Some(acc.map_or(g, |a| a.min(g))));
    Ok(cert)
}

/// `min_s |p(s)|` over the antipodal arc, i.e. the distance from the curve
/// over that arc to the hyperplane.
pub fn opposite_arc_distance(spec: &CurveSpec, h: &Hyperplane, arc: &Arc) -> Result<f64> {
    let p = h.support_poly(spec)?;
    let (lo, hi) = closed_bounds(&arc.opposite());
    Ok(p.interval_min(lo, hi, 512 * spec.k(), libm::fabs).1)
}

/// Scale-free positivity margin of the reduced support polynomial `r`,
/// obtained by dividing the prescribed tangencies out of `p` (see
/// [`TrigPoly::deflate`]): `min r` over the rotation-invariant coefficient norm. The hyperplane supports the
/// orbitope exactly when this is nonnegative; it is continuous in the
/// tangency points, including where they merge.
///
/// The sign of `r` is fixed by `Σ_i r(t_i) > 0` rather than by the
/// hyperplane's orientation, which flips once the hyperplane stops
/// supporting.
pub fn reduced_margin(p: &TrigPoly, pattern: &TangencyPattern) -> Result<f64> {
    let known: Vec<(f64, u32)> = pattern.entries().iter().map(|e| (e.t.value(), e.multiplicity)).collect();
    let r = p.deflate(&known)?;
    let at_contacts: f64 = known.iter().map(|&(t, _)| r.eval(t)).sum();
    let r = if at_contacts < 0.0 { r.scaled(-1.0) } else { r };
    let (_, min) = r.global_min()?;
    // Rotation-invariant scale.
    let scale = libm::fabs(r.c0()) + r.terms().iter().map(|h| libm::hypot(h.cos, h.sin)).sum::<f64>();
    Ok(min / scale)
}

/// `min_i dist(s, t_i + π)`.
pub fn contact_separation(pattern: &TangencyPattern, s: CirclePoint) -> f64 {
    pattern.entries().iter().map(|e| s.distance(e.t.opposite())).fold(f64::INFINITY, f64::min)
}

fn closed_bounds(arc: &Arc) -> (f64, f64) {
    let c = arc.center().value();
    (c - arc.length() / 2.0, c + arc.length() / 2.0)
}

/// Dimension of the affine hull of the points.
pub fn affine_rank(points: &[Vec<f64>]) -> usize {
    match points.split_first() {
        None => 0,
        Some((first, rest)) => {
            let diffs: Vec<Vec<f64>> = rest.iter().map(|p| p.iter().zip(first).map(|(a, b)| a - b).collect()).collect();
            linalg::rank_of(&diffs, FACE_RANK_TOL)
        }
    }
}
