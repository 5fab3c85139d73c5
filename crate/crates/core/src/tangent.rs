//! Affine hyperplanes tangent to the moment curve with prescribed
//! multiplicities.
//!
//! For a pattern `(t_i, m_i)` with `Σ m_i = 2k` on an arc shorter than `π`
//! there is exactly one affine hyperplane whose support polynomial
//! `p(t) = ⟨a, x(t)⟩ - c` vanishes to order `m_i` at every `t_i`. Its
//! normal spans the null space of the tangency conditions.
//!
//! The conditions are solved in divided-difference form: with the nodes
//! `t_i` repeated `m_i` times, `p` vanishes on the node multiset iff
//! `⟨a, x[z_0, ..., z_j]⟩ = 0` for `j = 1..2k-1`. The rows span the same
//! space as the raw value/derivative rows of [`tangency_matrix`] but stay
//! well scaled when tangency points approach each other.

use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::curve::{Arc, CirclePoint, CurveSpec};
use crate::error::{Error, Result};
use crate::linalg::{self, Matrix, PivotedQr};
use crate::trig_poly::TrigPoly;

/// Points closer than this are merged into one tangency point.
pub const MERGE_SEPARATION: f64 = 1e-6;

/// Relative rank threshold for the tangency system.
pub const RANK_TOL: f64 = 1e-10;

/// Relative rank threshold of [`independence_check`]. Clustered patterns at
/// `k = 6` reach condition numbers near `1e10` after equilibration, which is
/// still six orders above roundoff.
pub const INDEPENDENCE_RANK_TOL: f64 = 1e-12;

const EQUILIBRATION_SWEEPS: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TangencyPoint {
    pub t: CirclePoint,
    pub multiplicity: u32,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TangencyPattern {
    entries: Vec<TangencyPoint>,
    arc: Arc,
}

impl TangencyPattern {
    /// Validates and normalizes a pattern: entries are ordered along the
    /// arc and points closer than [`MERGE_SEPARATION`] are merged with
    /// summed multiplicity.
    pub fn new(spec: &CurveSpec, entries: &[(f64, u32)], arc: Arc) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::InvalidPattern("no tangency points".into()));
        }
        if arc.length() >= PI {
            return Err(Error::InvalidPattern(format!("arc length {} is not below π", arc.length())));
        }
        if let Some(&(t, m)) = entries.iter().find(|e| e.1 < 2) {
            return Err(Error::InvalidPattern(format!("multiplicity {m} at t = {t} is below 2")));
        }
        let total: u32 = entries.iter().map(|e| e.1).sum();
        if total as usize != spec.dim() {
            return Err(Error::InvalidPattern(format!("multiplicities sum to {total}, expected {}", spec.dim())));
        }
        if let Some(&(t, _)) = entries.iter().find(|e| !arc.contains(CirclePoint::new(e.0))) {
            return Err(Error::InvalidPattern(format!("t = {t} lies outside the arc")));
        }

        let center = arc.center();
        let mut sorted: Vec<(f64, u32)> =
            entries.iter().map(|&(t, m)| (CirclePoint::new(t).offset_from(center), m)).collect();
        sorted.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut merged: Vec<(f64, u32)> = Vec::with_capacity(sorted.len());
        for (off, m) in sorted {
            match merged.last_mut() {
                Some(last) if off - last.0 < MERGE_SEPARATION => {
                    let w = last.1 + m;
                    last.0 = (last.0 * f64::from(last.1) + off * f64::from(m)) / f64::from(w);
                    last.1 = w;
                }
                _ => merged.push((off, m)),
            }
        }
        let entries =
            merged.into_iter().map(|(off, m)| TangencyPoint { t: center.shifted(off), multiplicity: m }).collect();
        Ok(Self { entries, arc })
    }

    /// Pattern on the shortest arc containing `points`.
    pub fn from_points(spec: &CurveSpec, points: &[f64], mults: &[u32]) -> Result<Self> {
        if points.len() != mults.len() {
            return Err(Error::InvalidPattern(format!("{} points but {} multiplicities", points.len(), mults.len())));
        }
        let arc = Arc::covering(points, 1e-9)?;
        let entries: Vec<(f64, u32)> = points.iter().copied().zip(mults.iter().copied()).collect();
        Self::new(spec, &entries, arc)
    }

    pub fn entries(&self) -> &[TangencyPoint] {
        &self.entries
    }

    pub fn arc(&self) -> &Arc {
        &self.arc
    }

    pub fn has_odd_multiplicity(&self) -> bool {
        self.entries.iter().any(|e| e.multiplicity % 2 == 1)
    }

    /// Offsets of the points from the arc center, in `(-π/2, π/2)`.
    pub fn offsets(&self) -> Vec<f64> {
        self.entries.iter().map(|e| e.t.offset_from(self.arc.center())).collect()
    }

    /// Real nodes `center + offset`, each repeated by its multiplicity,
    /// plus `extra_first` additional copies of the first point.
    fn nodes(&self, extra_first: u32) -> Vec<f64> {
        let c = self.arc.center().value();
        let mut nodes = Vec::new();
        for (i, (e, off)) in self.entries.iter().zip(self.offsets()).enumerate() {
            let reps = e.multiplicity + if i == 0 { extra_first } else { 0 };
            nodes.extend(core::iter::repeat_n(c + off, reps as usize));
        }
        nodes
    }
}

/// Affine hyperplane `{y : ⟨normal, y⟩ = offset}` with unit normal, oriented
/// so that the support polynomial `⟨normal, x(t)⟩ - offset` is nonnegative
/// on the orbitope side.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Hyperplane {
    normal: Vec<f64>,
    offset: f64,
}

impl Hyperplane {
    /// Rescales `(normal, offset)` so the normal has unit length.
    pub fn new(normal: Vec<f64>, offset: f64) -> Result<Self> {
        let n = linalg::norm(&normal);
        if !(n > 0.0) {
            return Err(Error::InvalidArgument("hyperplane normal must be nonzero".into()));
        }
        Ok(Self { normal: normal.iter().map(|v| v / n).collect(), offset: offset / n })
    }

    pub fn normal(&self) -> &[f64] {
        &self.normal
    }

    pub fn offset(&self) -> f64 {
        self.offset
    }

    pub fn flipped(&self) -> Self {
        Self { normal: self.normal.iter().map(|v| -v).collect(), offset: -self.offset }
    }

    pub fn support_poly(&self, spec: &CurveSpec) -> Result<TrigPoly> {
        TrigPoly::from_functional(spec, &self.normal, self.offset)
    }

    /// Signed distance of `y` from the hyperplane.
    pub fn signed_distance(&self, y: &[f64]) -> f64 {
        linalg::dot(&self.normal, y) - self.offset
    }
}

/// The raw tangency rows: `x(t_i) - x(t_l)` for `i < l`, then the
/// derivatives `x^{(n)}(t_i)` for `n = 1..m_i - 1`, grouped by point.
pub fn tangency_matrix(spec: &CurveSpec, pattern: &TangencyPattern) -> Matrix {
    let entries = pattern.entries();
    let last = spec.eval(entries[entries.len() - 1].t);
    let mut rows = Vec::with_capacity(spec.dim() - 1);
    for e in &entries[..entries.len() - 1] {
        rows.push(spec.eval(e.t).iter().zip(&last).map(|(a, b)| a - b).collect());
    }
    for e in entries {
        for n in 1..e.multiplicity {
            rows.push(spec.deriv(e.t, n));
        }
    }
    Matrix::from_rows(&rows)
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Independence {
    pub rank: usize,
    pub condition: f64,
}

/// Rank of the full `2k`-vector family (tangency rows plus the extra
/// `m_1`-th derivative at the first point).
///
/// The family is evaluated in divided-difference form, which has the same
/// span, and equilibrated by row and column scaling; `condition` is the
/// pivoted-QR estimate for that scaled basis.
pub fn independence_check(spec: &CurveSpec, pattern: &TangencyPattern) -> Independence {
    let nodes = pattern.nodes(1);
    let mut m = Matrix::from_rows(&spec.divided_differences(&nodes)[1..]);
    m.equilibrate(EQUILIBRATION_SWEEPS);
    let qr = PivotedQr::new(&m.transpose());
    Independence { rank: qr.rank(INDEPENDENCE_RANK_TOL), condition: qr.condition_estimate() }
}

/// The unique hyperplane tangent to the curve at every `t_i` with
/// multiplicity `m_i`, oriented so that `p(center + π) >= 0`.
pub fn construct_hyperplane(spec: &CurveSpec, pattern: &TangencyPattern) -> Result<Hyperplane> {
    let nodes = pattern.nodes(0);
    let mut m = Matrix::from_rows(&spec.divided_differences(&nodes)[1..]);
    let scale = m.equilibrate(EQUILIBRATION_SWEEPS);
    let null = linalg::null_space(&m, RANK_TOL);
    if null.len() != 1 {
        return Err(Error::DegeneratePattern { nullity: null.len() });
    }
    let normal: Vec<f64> = null[0].iter().zip(&scale).map(|(y, d)| y * d).collect();
    let last = pattern.entries()[pattern.entries().len() - 1].t;
    let offset = linalg::dot(&normal, &spec.eval(last));
    let h = Hyperplane::new(normal, offset)?;
    let far = spec.eval(pattern.arc().center().opposite());
    Ok(if h.signed_distance(&far) < 0.0 { h.flipped() } else { h })
}

/// Largest `|p^{(j)}(t_i)|` over `j < m_i`, each derivative order scaled
/// by `(2k-1)^{-j}`.
pub fn tangency_residual(spec: &CurveSpec, h: &Hyperplane, pattern: &TangencyPattern) -> Result<f64> {
    let p = h.support_poly(spec)?;
    let w = f64::from(spec.max_frequency());
    let mut worst = 0.0f64;
    for e in pattern.entries() {
        for j in 0..e.multiplicity {
            let v = libm::fabs(p.eval_deriv(e.t.value(), j)) / libm::pow(w, f64::from(j));
            worst = worst.max(v);
        }
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(k: usize) -> CurveSpec {
        CurveSpec::new(k).unwrap()
    }

    fn minors_rank3(m: &Matrix) -> bool {
        // Some 3x3 minor of a 3x4 matrix is nonzero.
        let cols = m.cols();
        let mut any = false;
        for a in 0..cols {
            for b in a + 1..cols {
                for c in b + 1..cols {
                    let g = |i: usize, j: usize| m[(i, [a, b, c][j])];
                    let det = g(0, 0) * (g(1, 1) * g(2, 2) - g(1, 2) * g(2, 1))
                        - g(0, 1) * (g(1, 0) * g(2, 2) - g(1, 2) * g(2, 0))
                        + g(0, 2) * (g(1, 0) * g(2, 1) - g(1, 1) * g(2, 0));
                    any |= det.abs() > 1e-6;
                }
            }
        }
        any
    }

    #[test]
    fn pattern_validation() {
        let s = spec(2);
        let arc = Arc::new(0.0, 1.0).unwrap();
        assert!(TangencyPattern::new(&s, &[(0.0, 3)], arc).is_err());
        assert!(TangencyPattern::new(&s, &[(0.0, 1), (0.1, 3)], arc).is_err());
        assert!(TangencyPattern::new(&s, &[(0.0, 2), (0.7, 2)], arc).is_err());
        assert!(TangencyPattern::new(&s, &[(0.0, 4)], Arc::new(0.0, 3.2).unwrap()).is_err());
        let p = TangencyPattern::new(&s, &[(0.2, 2), (-0.2, 2)], arc).unwrap();
        assert!(p.offsets()[0] < p.offsets()[1]);
        assert!(!p.has_odd_multiplicity());
        assert!(TangencyPattern::new(&s, &[(0.0, 3), (0.2, 1)], arc).is_err());
        assert!(TangencyPattern::new(&spec(3), &[(0.0, 3), (0.2, 3)], arc).unwrap().has_odd_multiplicity());
    }

    #[test]
    fn close_points_merge() {
        let s = spec(2);
        let p = TangencyPattern::from_points(&s, &[0.1, 0.1 + 1e-8], &[2, 2]).unwrap();
        assert_eq!(p.entries().len(), 1);
        assert_eq!(p.entries()[0].multiplicity, 4);
    }

    #[test]
    fn tangency_matrix_examples() {
        let p = TangencyPattern::from_points(&spec(1), &[0.0], &[2]).unwrap();
        let m = tangency_matrix(&spec(1), &p);
        assert_eq!((m.rows(), m.cols()), (1, 2));
        assert!((m[(0, 0)]).abs() < 1e-15 && (m[(0, 1)] - 1.0).abs() < 1e-15);

        let p = TangencyPattern::from_points(&spec(2), &[0.0], &[4]).unwrap();
        let m = tangency_matrix(&spec(2), &p);
        let expect = [[0.0, 1.0, 0.0, 3.0], [-1.0, 0.0, -9.0, 0.0], [0.0, -1.0, 0.0, -27.0]];
        for (i, row) in expect.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                assert!((m[(i, j)] - v).abs() < 1e-12);
            }
        }

        let p = TangencyPattern::from_points(&spec(2), &[0.0, 0.5], &[2, 2]).unwrap();
        let m = tangency_matrix(&spec(2), &p);
        assert_eq!(m.rows(), 3);
        assert!(minors_rank3(&m));
        assert_eq!(PivotedQr::new(&m.transpose()).rank(1e-10), 3);
    }

    #[test]
    fn independence_examples() {
        let p = TangencyPattern::from_points(&spec(1), &[0.0], &[2]).unwrap();
        assert_eq!(independence_check(&spec(1), &p).rank, 2);
        let p = TangencyPattern::from_points(&spec(2), &[0.0], &[4]).unwrap();
        assert_eq!(independence_check(&spec(2), &p).rank, 4);
        let p = TangencyPattern::new(&spec(2), &[(0.0, 2), (3.0, 2)], Arc::new(1.5, 3.05).unwrap()).unwrap();
        assert_eq!(independence_check(&spec(2), &p).rank, 4);
    }

    #[test]
    fn determinant_of_fourfold_family_is_nonzero() {
        // x'(0), x''(0), x'''(0), x''''(0) for k = 2.
        let s = spec(2);
        let rows: Vec<Vec<f64>> = (1..=4).map(|n| s.deriv(0.0, n)).collect();
        // Rows (0,1,0,3), (-1,0,-9,0), (0,-1,0,-27), (1,0,81,0) split into a
        // cosine block and a sine block; the determinant is their product.
        let det_cos = rows[1][0] * rows[3][2] - rows[1][2] * rows[3][0];
        let det_sin = rows[0][1] * rows[2][3] - rows[0][3] * rows[2][1];
        assert!((det_cos - (-72.0)).abs() < 1e-9);
        assert!((det_sin - (-24.0)).abs() < 1e-9);
    }

    #[test]
    fn circle_tangent_line() {
        let s = spec(1);
        let p = TangencyPattern::from_points(&s, &[0.0], &[2]).unwrap();
        let h = construct_hyperplane(&s, &p).unwrap();
        assert!((h.normal()[0] + 1.0).abs() < 1e-12 && h.normal()[1].abs() < 1e-12);
        assert!((h.offset() + 1.0).abs() < 1e-12);
        let poly = h.support_poly(&s).unwrap();
        assert!((poly.eval(PI) - 2.0).abs() < 1e-12);
    }

    #[test]
    fn osculating_hyperplane_k2() {
        let s = spec(2);
        let p = TangencyPattern::from_points(&s, &[0.0], &[4]).unwrap();
        let h = construct_hyperplane(&s, &p).unwrap();
        let expect = [9.0, 0.0, -1.0, 0.0];
        let n = 82f64.sqrt();
        let dot: f64 = h.normal().iter().zip(expect).map(|(a, b)| a * b / n).sum();
        assert!((dot.abs() - 1.0).abs() < 1e-12);
        assert!((h.offset().abs() - 8.0 / n).abs() < 1e-12);
        // Orientation: p = (8 - 9 cos t + cos 3t)/√82.
        let poly = h.support_poly(&s).unwrap();
        assert!((poly.eval(PI) - 16.0 / n).abs() < 1e-12);
        assert!(tangency_residual(&s, &h, &p).unwrap() < 1e-12);
    }

    #[test]
    fn symmetric_pair_k2() {
        let s = spec(2);
        let p = TangencyPattern::from_points(&s, &[-0.1, 0.1], &[2, 2]).unwrap();
        let h = construct_hyperplane(&s, &p).unwrap();
        assert!(tangency_residual(&s, &h, &p).unwrap() < 1e-10);
        let poly = h.support_poly(&s).unwrap();
        for i in 0..20_000 {
            let t = PI * 2.0 * i as f64 / 20_000.0;
            assert!(poly.eval(t) > -1e-12);
        }
    }

    #[test]
    fn raw_and_divided_difference_null_spaces_agree() {
        let s = spec(3);
        let p = TangencyPattern::from_points(&s, &[-0.8, 0.1, 0.9], &[2, 2, 2]).unwrap();
        let h = construct_hyperplane(&s, &p).unwrap();
        let raw = linalg::null_space(&tangency_matrix(&s, &p), 1e-12);
        assert_eq!(raw.len(), 1);
        let d = linalg::dot(&raw[0], h.normal());
        assert!((d.abs() - 1.0).abs() < 1e-9);
        let residual = tangency_matrix(&s, &p).mul_vec(h.normal());
        assert!(residual.iter().all(|r| r.abs() < 1e-10));
    }

    #[test]
    fn tight_cluster_is_well_conditioned() {
        let s = spec(4);
        let p = TangencyPattern::from_points(&s, &[0.0, 1e-4, 2e-4, 0.3], &[2, 2, 2, 2]).unwrap();
        let h = construct_hyperplane(&s, &p).unwrap();
        assert!(tangency_residual(&s, &h, &p).unwrap() < 1e-8);
    }
}
