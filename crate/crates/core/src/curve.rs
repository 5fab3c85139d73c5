//! The symmetric moment curve and parameter arithmetic on the circle.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::{PI, TAU};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// A point of the circle `S¹`, stored as an angle in `[0, 2π)`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(transparent))]
pub struct CirclePoint(f64);

impl CirclePoint {
    pub fn new(t: f64) -> Self {
        let mut r = t % TAU;
        if r < 0.0 {
            r += TAU;
        }
        // `-tiny + 2π` rounds to 2π.
        if r >= TAU {
            r = 0.0;
        }
        Self(r)
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn shifted(self, delta: f64) -> Self {
        Self::new(self.0 + delta)
    }

    pub fn opposite(self) -> Self {
        self.shifted(PI)
    }

    /// Representative of `self - origin` in `[-π, π)`.
    pub fn offset_from(self, origin: CirclePoint) -> f64 {
        let d = Self::new(self.0 - origin.0).0;
        if d >= PI {
            d - TAU
        } else {
            d
        }
    }

    /// Arc distance `min(|Δ|, 2π - |Δ|)`.
    pub fn distance(self, other: CirclePoint) -> f64 {
        libm::fabs(self.offset_from(other))
    }
}

impl From<f64> for CirclePoint {
    fn from(t: f64) -> Self {
        Self::new(t)
    }
}

/// A closed-open arc `[center - length/2, center + length/2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Arc {
    center: CirclePoint,
    length: f64,
}

impl Arc {
    pub fn new(center: impl Into<CirclePoint>, length: f64) -> Result<Self> {
        if !(length > 0.0 && length < TAU) {
            return Err(Error::DomainError { what: "arc length", value: length });
        }
        Ok(Self { center: center.into(), length })
    }

    /// The shortest arc containing every point, padded by `pad` on both
    /// sides so that endpoints fall strictly inside.
    pub fn covering(points: &[f64], pad: f64) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InvalidArgument("no points to cover".into()));
        }
        let mut ts: Vec<f64> = points.iter().map(|&t| CirclePoint::new(t).0).collect();
        ts.sort_by(f64::total_cmp);
        // The complement of the covering arc is the widest gap between
        // cyclically consecutive points.
        let n = ts.len();
        let (mut gap, mut after) = (TAU - ts[n - 1] + ts[0], 0usize);
        for i in 1..n {
            let g = ts[i] - ts[i - 1];
            if g > gap {
                gap = g;
                after = i;
            }
        }
        let span = if n == 1 { 0.0 } else { TAU - gap };
        let start = ts[after];
        let length = (span + 2.0 * pad).min(TAU * (1.0 - f64::EPSILON));
        Self::new(start + span / 2.0, length)
    }

    pub fn center(&self) -> CirclePoint {
        self.center
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn start(&self) -> CirclePoint {
        self.center.shifted(-self.length / 2.0)
    }

    pub fn contains(&self, t: CirclePoint) -> bool {
        CirclePoint::new(t.0 - self.start().0).0 < self.length
    }

    pub fn opposite(&self) -> Arc {
        Arc { center: self.center.opposite(), length: self.length }
    }

    /// Same center, length increased by `2 * pad`.
    pub fn widened(&self, pad: f64) -> Arc {
        Arc { center: self.center, length: (self.length + 2.0 * pad).min(TAU * (1.0 - f64::EPSILON)) }
    }
}

/// Parameters of `SM_{2k}`: `k` harmonic pairs with frequencies `1, 3, ..., 2k-1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CurveSpec {
    k: usize,
}

impl CurveSpec {
    pub fn new(k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidArgument("k must be positive".into()));
        }
        Ok(Self { k })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn dim(&self) -> usize {
        2 * self.k
    }

    pub fn frequency(&self, j: usize) -> u32 {
        debug_assert!(j < self.k);
        (2 * j + 1) as u32
    }

    pub fn frequencies(&self) -> impl Iterator<Item = u32> {
        (0..self.k).map(|j| (2 * j + 1) as u32)
    }

    pub fn max_frequency(&self) -> u32 {
        (2 * self.k - 1) as u32
    }

    /// `x(t)`.
    pub fn eval(&self, t: impl Into<CirclePoint>) -> Vec<f64> {
        self.eval_real(t.into().value())
    }

    pub(crate) fn eval_real(&self, t: f64) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.dim());
        for f in self.frequencies() {
            let (s, c) = libm::sincos(f64::from(f) * t);
            out.push(c);
            out.push(s);
        }
        out
    }

    /// `d^n x / dt^n` in closed form: each pair scales by `ω^n` and its
    /// phase advances by `nπ/2`.
    pub fn deriv(&self, t: impl Into<CirclePoint>, n: u32) -> Vec<f64> {
        let t = t.into().value();
        let mut out = Vec::with_capacity(self.dim());
        for f in self.frequencies() {
            let w = f64::from(f);
            let scale = libm::pow(w, f64::from(n));
            let (s, c) = libm::sincos(w * t);
            let (dc, ds) = match n % 4 {
                0 => (c, s),
                1 => (-s, c),
                2 => (-c, -s),
                _ => (s, -c),
            };
            out.push(scale * dc);
            out.push(scale * ds);
        }
        out
    }

    /// `x(t + π)`, which equals `-x(t)`.
    pub fn antipode(&self, t: impl Into<CirclePoint>) -> Vec<f64> {
        self.eval(t.into().opposite())
    }

    /// Divided differences `x[z_0], x[z_0, z_1], ..., x[z_0, ..., z_{N-1}]`
    /// over real nodes, with repeated nodes treated confluently.
    ///
    /// Repeated nodes must be adjacent in `nodes`. The values come from the
    /// first column of `exp(iωZ)` for the bidiagonal node matrix `Z`, so
    /// they stay accurate when nodes nearly coincide.
    pub fn divided_differences(&self, nodes: &[f64]) -> Vec<Vec<f64>> {
        let n = nodes.len();
        let mut rows = vec![Vec::with_capacity(self.dim()); n];
        if n == 0 {
            return rows;
        }
        let center = (nodes.iter().cloned().fold(f64::INFINITY, f64::min)
            + nodes.iter().cloned().fold(f64::NEG_INFINITY, f64::max))
            / 2.0;
        for f in self.frequencies() {
            let w = f64::from(f);
            let diag: Vec<Complex64> = nodes.iter().map(|&z| Complex64::new(0.0, w * (z - center))).collect();
            let col = exp_bidiagonal_first_column(&diag, Complex64::new(0.0, w));
            let phase = Complex64::new(0.0, w * center).exp();
            for (row, d) in rows.iter_mut().zip(col) {
                let d = d * phase;
                row.push(d.re);
                row.push(d.im);
            }
        }
        rows
    }
}

/// First column of `exp(A)` where `A` is lower bidiagonal with the given
/// diagonal and a constant subdiagonal, by scaling and squaring.
fn exp_bidiagonal_first_column(diag: &[Complex64], sub: Complex64) -> Vec<Complex64> {
    let n = diag.len();
    let zero = Complex64::new(0.0, 0.0);
    let norm = diag.iter().map(|d| d.norm()).fold(0.0, f64::max) + sub.norm();
    let mut squarings = 0u32;
    let mut scale = 1.0;
    while norm * scale > 0.5 {
        scale *= 0.5;
        squarings += 1;
    }

    // Lower-triangular storage: m[i][j] for j <= i.
    let mut b = vec![vec![zero; n]; n];
    for i in 0..n {
        b[i][i] = diag[i] * scale;
        if i > 0 {
            b[i][i - 1] = sub * scale;
        }
    }
    let mut e = vec![vec![zero; n]; n];
    let mut term = vec![vec![zero; n]; n];
    for i in 0..n {
        e[i][i] = Complex64::new(1.0, 0.0);
        term[i][i] = Complex64::new(1.0, 0.0);
    }
    for m in 1..=30u32 {
        term = lower_mul(&term, &b);
        let inv = 1.0 / f64::from(m);
        let mut biggest = 0.0f64;
        for i in 0..n {
            for j in 0..=i {
                term[i][j] *= inv;
                e[i][j] += term[i][j];
                biggest = biggest.max(term[i][j].norm());
            }
        }
        if biggest < 1e-18 {
            break;
        }
    }
    for _ in 0..squarings {
        e = lower_mul(&e, &e);
    }
    (0..n).map(|i| e[i][0]).collect()
}

fn lower_mul(a: &[Vec<Complex64>], b: &[Vec<Complex64>]) -> Vec<Vec<Complex64>> {
    let n = a.len();
    let mut c = vec![vec![Complex64::new(0.0, 0.0); n]; n];
    for i in 0..n {
        for j in 0..=i {
            let mut acc = Complex64::new(0.0, 0.0);
            for l in j..=i {
                acc += a[i][l] * b[l][j];
            }
            c[i][j] = acc;
        }
    }
    c
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::norm;

    fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| libm::fabs(x - y) <= tol)
    }

    #[test]
    fn eval_examples() {
        let k1 = CurveSpec::new(1).unwrap();
        let k2 = CurveSpec::new(2).unwrap();
        let k3 = CurveSpec::new(3).unwrap();
        assert!(close(&k1.eval(0.0), &[1.0, 0.0], 1e-15));
        assert!(close(&k2.eval(0.0), &[1.0, 0.0, 1.0, 0.0], 1e-15));
        assert!(close(&k3.eval(PI / 2.0), &[0.0, 1.0, 0.0, -1.0, 0.0, 1.0], 1e-15));
    }

    #[test]
    fn deriv_examples() {
        let k1 = CurveSpec::new(1).unwrap();
        let k2 = CurveSpec::new(2).unwrap();
        assert!(close(&k2.deriv(0.0, 1), &[0.0, 1.0, 0.0, 3.0], 1e-15));
        assert!(close(&k2.deriv(0.0, 2), &[-1.0, 0.0, -9.0, 0.0], 1e-15));
        assert!(close(&k1.deriv(PI / 2.0, 1), &[-1.0, 0.0], 1e-15));
    }

    #[test]
    fn antipode_examples() {
        let k1 = CurveSpec::new(1).unwrap();
        let k2 = CurveSpec::new(2).unwrap();
        assert!(close(&k1.antipode(0.0), &[-1.0, 0.0], 1e-15));
        assert!(close(&k2.antipode(0.0), &[-1.0, 0.0, -1.0, 0.0], 1e-15));
        let x = k2.eval(1.234);
        let neg: Vec<f64> = x.iter().map(|v| -v).collect();
        assert!(close(&k2.antipode(1.234), &neg, 1e-14));
    }

    #[test]
    fn canonicalization() {
        let p = CirclePoint::new(-1e-300);
        assert!(p.value() >= 0.0 && p.value() < TAU);
        assert_eq!(CirclePoint::new(p.value()), p);
        assert_eq!(CirclePoint::new(TAU).value(), 0.0);
        assert!((CirclePoint::new(-0.5).value() - (TAU - 0.5)).abs() < 1e-15);
        assert!((CirclePoint::new(0.1).distance(CirclePoint::new(TAU - 0.1)) - 0.2).abs() < 1e-14);
    }

    #[test]
    fn arc_membership_and_opposite() {
        let arc = Arc::new(0.0, 1.0).unwrap();
        assert!(arc.contains(0.0.into()));
        assert!(arc.contains((-0.5).into()));
        assert!(!arc.contains(0.5.into()));
        assert!(arc.contains(0.4999.into()));
        assert!(!arc.contains(PI.into()));
        let opp = arc.opposite();
        assert!(opp.contains(PI.into()));
        assert_eq!(opp.length(), 1.0);
        assert!(Arc::new(0.0, 0.0).is_err());
        assert!(Arc::new(0.0, TAU).is_err());
    }

    #[test]
    fn covering_arc_wraps() {
        let arc = Arc::covering(&[-0.2, 0.3, 0.1], 1e-9).unwrap();
        assert!((arc.length() - 0.5).abs() < 1e-8);
        assert!(arc.center().distance(CirclePoint::new(0.05)) < 1e-12);
        let single = Arc::covering(&[2.0], 1e-9).unwrap();
        assert!(single.contains(2.0.into()));
    }

    #[test]
    fn norm_identity() {
        for k in [1, 2, 5, 17, 64] {
            let spec = CurveSpec::new(k).unwrap();
            for i in 0..50 {
                let t = 0.37 * i as f64 - 4.0;
                let n = norm(&spec.eval(t));
                assert!((n * n - k as f64).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn divided_differences_confluent_nodes_are_taylor_coefficients() {
        let spec = CurveSpec::new(3).unwrap();
        let t0 = 0.7;
        let dd = spec.divided_differences(&[t0; 6]);
        let mut fact = 1.0;
        for (n, row) in dd.iter().enumerate() {
            if n > 0 {
                fact *= n as f64;
            }
            let expect: Vec<f64> = spec.deriv(t0, n as u32).iter().map(|v| v / fact).collect();
            assert!(close(row, &expect, 1e-10), "order {n}: {row:?} vs {expect:?}");
        }
    }

    #[test]
    fn divided_differences_match_recursion_for_separated_nodes() {
        let spec = CurveSpec::new(2).unwrap();
        let nodes = [-0.9, -0.2, 0.4, 1.1];
        let dd = spec.divided_differences(&nodes);
        // Classic Newton table, fine for well separated nodes.
        let mut table: Vec<Vec<f64>> = nodes.iter().map(|&z| spec.eval_real(z)).collect();
        let mut firsts = vec![table[0].clone()];
        for level in 1..nodes.len() {
            table = (0..table.len() - 1)
                .map(|i| {
                    let h = nodes[i + level] - nodes[i];
                    table[i + 1].iter().zip(&table[i]).map(|(a, b)| (a - b) / h).collect()
                })
                .collect();
            firsts.push(table[0].clone());
        }
        for (a, b) in dd.iter().zip(&firsts) {
            assert!(close(a, b, 1e-12), "{a:?} vs {b:?}");
        }
    }
}
