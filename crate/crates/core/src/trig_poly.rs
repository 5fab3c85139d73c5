//! Real trigonometric polynomials on the circle.
//!
//! A polynomial `p(t) = c0 + Σ α_f cos(f t) + β_f sin(f t)` of degree `D`
//! is mapped to the algebraic polynomial `q(z) = z^D p(t)` with
//! `z = e^{it}`, whose unimodular roots are exactly the real roots of `p`.
//! Roots of `q` are found all at once (Aberth-Ehrlich), then every
//! candidate is polished on the real line and its multiplicity is read off
//! the successive derivatives of `p`.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::{PI, TAU};

use num_complex::Complex64;

use crate::curve::{CirclePoint, CurveSpec};
use crate::error::{Error, Result};

/// Default relative tolerance for root and multiplicity tests.
pub const DEFAULT_ROOT_TOL: f64 = 1e-9;

/// Coefficients of `α cos(f t) + β sin(f t)`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Harmonic {
    pub freq: u32,
    pub cos: f64,
    pub sin: f64,
}

impl Harmonic {
    pub fn new(freq: u32, cos: f64, sin: f64) -> Self {
        Self { freq, cos, sin }
    }

    fn magnitude(&self) -> f64 {
        libm::fabs(self.cos) + libm::fabs(self.sin)
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TrigPoly {
    c0: f64,
    terms: Vec<Harmonic>,
}

/// A root on the circle together with its numerical multiplicity.
///
/// `radius` is the resolution of the root: inside it the polynomial is
/// indistinguishable from zero at the tolerance used, so roots of the true
/// polynomial that lie closer than this are reported as one.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CircleRoot {
    pub t: CirclePoint,
    pub multiplicity: usize,
    pub radius: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CircleRootSet {
    pub roots: Vec<CircleRoot>,
    /// Largest `|p(t)|` over the reported roots.
    pub residual: f64,
}

impl CircleRootSet {
    pub fn total_multiplicity(&self) -> usize {
        self.roots.iter().map(|r| r.multiplicity).sum()
    }

    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }
}

impl TrigPoly {
    /// Builds a polynomial; frequencies must be positive and strictly
    /// increasing.
    pub fn new(c0: f64, terms: Vec<Harmonic>) -> Result<Self> {
        if terms.iter().any(|h| h.freq == 0) {
            return Err(Error::InvalidArgument("harmonic frequency must be positive".into()));
        }
        if terms.windows(2).any(|w| w[0].freq >= w[1].freq) {
            return Err(Error::InvalidArgument("frequencies must be strictly increasing".into()));
        }
        Ok(Self { c0, terms })
    }

    pub fn constant(c0: f64) -> Self {
        Self { c0, terms: Vec::new() }
    }

    /// `⟨a, x(t)⟩ - c` for the symmetric moment curve.
    pub fn from_functional(spec: &CurveSpec, a: &[f64], c: f64) -> Result<Self> {
        if a.len() != spec.dim() {
            return Err(Error::DimensionMismatch { expected: spec.dim(), actual: a.len() });
        }
        let terms = spec.frequencies().zip(a.chunks(2)).map(|(f, pair)| Harmonic::new(f, pair[0], pair[1])).collect();
        Ok(Self { c0: -c, terms })
    }

    pub fn c0(&self) -> f64 {
        self.c0
    }

    pub fn terms(&self) -> &[Harmonic] {
        &self.terms
    }

    /// Largest frequency present in the representation.
    pub fn degree(&self) -> u32 {
        self.terms.last().map_or(0, |h| h.freq)
    }

    /// `|c0| + Σ (|α_f| + |β_f|)`, an upper bound for `max |p|`.
    pub fn coefficient_norm(&self) -> f64 {
        libm::fabs(self.c0) + self.terms.iter().map(Harmonic::magnitude).sum::<f64>()
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self {
            c0: self.c0 * s,
            terms: self.terms.iter().map(|h| Harmonic::new(h.freq, h.cos * s, h.sin * s)).collect(),
        }
    }

    pub fn eval(&self, t: f64) -> f64 {
        self.terms.iter().fold(self.c0, |acc, h| {
            let (s, c) = libm::sincos(f64::from(h.freq) * t);
            acc + h.cos * c + h.sin * s
        })
    }

    /// `p^{(order)}(t)` without building the derivative polynomial.
    pub fn eval_deriv(&self, t: f64, order: u32) -> f64 {
        if order == 0 {
            return self.eval(t);
        }
        let mut acc = 0.0;
        for h in &self.terms {
            let w = f64::from(h.freq);
            let (s, c) = libm::sincos(w * t);
            let (dc, ds) = match order % 4 {
                0 => (c, s),
                1 => (-s, c),
                2 => (-c, -s),
                _ => (s, -c),
            };
            acc += libm::pow(w, f64::from(order)) * (h.cos * dc + h.sin * ds);
        }
        acc
    }

    /// Termwise derivative; the constant term of the result is zero.
    pub fn differentiate(&self) -> Self {
        Self {
            c0: 0.0,
            terms: self
                .terms
                .iter()
                .map(|h| {
                    let w = f64::from(h.freq);
                    Harmonic::new(h.freq, w * h.sin, -w * h.cos)
                })
                .collect(),
        }
    }

    /// Degree after dropping trailing harmonics that are negligible next to
    /// the coefficient norm.
    fn effective_degree(&self) -> u32 {
        let scale = self.coefficient_norm();
        self.terms.iter().rev().find(|h| h.magnitude() > 1e-14 * scale).map_or(0, |h| h.freq)
    }

    /// All real roots on the circle with multiplicities.
    ///
    /// `tol` is relative: a point is a root of multiplicity `m` when
    /// `|p^{(j)}(t)| <= tol * ‖p‖ * D^j` for every `j < m` and not for `j = m`.
    pub fn circle_roots(&self, tol: f64) -> Result<CircleRootSet> {
        let set = self.roots_uncapped(tol)?;
        let cap = 2 * self.effective_degree() as usize;
        if set.total_multiplicity() > cap {
            let t = set.roots.first().map_or(0.0, |r| r.t.value());
            return Err(Error::IllConditioned { t, total: set.total_multiplicity(), cap });
        }
        Ok(set)
    }

    fn roots_uncapped(&self, tol: f64) -> Result<CircleRootSet> {
        let max_coef = self.terms.iter().map(Harmonic::magnitude).fold(libm::fabs(self.c0), f64::max);
        if max_coef < tol {
            return Err(Error::IdenticallyZero { tol });
        }
        let degree = self.effective_degree();
        if degree == 0 {
            return Ok(CircleRootSet::default());
        }
        let ctx = RootContext::new(self, degree, tol);

        let mut candidates = Vec::new();
        let zs = aberth(&self.algebraic_coefficients(degree));
        for z in &zs {
            if libm::fabs(z.norm() - 1.0) < 0.25 {
                candidates.push(z.arg());
            }
        }
        // Coalescing roots scatter around a multiple root but their
        // centroid stays accurate, so cluster centroids are tried as well.
        for radius in [1e-6, 1e-4, 1e-2, 1e-1] {
            for c in cluster_centroids(&zs, radius) {
                if libm::fabs(c.norm() - 1.0) < 0.25 {
                    candidates.push(c.arg());
                }
            }
        }
        // Safety net: local minima of |p| on a grid.
        let samples = 16 * degree as usize;
        let values: Vec<f64> = (0..samples).map(|i| libm::fabs(self.eval(TAU * i as f64 / samples as f64))).collect();
        for i in 0..samples {
            let (prev, next) = (values[(i + samples - 1) % samples], values[(i + 1) % samples]);
            if values[i] <= prev && values[i] <= next {
                candidates.push(TAU * i as f64 / samples as f64);
            }
        }

        let mut accepted: Vec<CircleRoot> = candidates.into_iter().filter_map(|t| ctx.refine(t)).collect();

        // Higher multiplicities first; a root absorbs everything within its
        // resolution radius.
        accepted.sort_by(|a, b| b.multiplicity.cmp(&a.multiplicity).then(a.t.value().total_cmp(&b.t.value())));
        let mut kept: Vec<CircleRoot> = Vec::new();
        for r in accepted {
            let absorbed = kept.iter().any(|k| {
                k.t.distance(r.t) <= k.radius.max(ctx.merge_tol) || k.t.distance(r.t) <= r.radius.min(k.radius)
            });
            if !absorbed {
                kept.push(r);
            }
        }
        kept.sort_by(|a, b| a.t.value().total_cmp(&b.t.value()));
        count_algebraic_roots(&mut kept, &zs);

        Ok(CircleRootSet {
            residual: kept.iter().map(|r| libm::fabs(self.eval(r.t.value()))).fold(0.0, f64::max),
            roots: kept,
        })
    }

    /// Global minimizer on the circle.
    ///
    /// Candidates are the critical points (roots of `p'`) and a grid of
    /// `64·D` points; the best one is polished by golden-section search.
    pub fn global_min(&self) -> Result<(CirclePoint, f64)> {
        let degree = self.effective_degree();
        if degree == 0 {
            return Ok((CirclePoint::new(0.0), self.c0));
        }
        let mut best = (0.0, f64::INFINITY);
        let mut consider = |t: f64| {
            let v = self.eval(t);
            if v < best.1 {
                best = (t, v);
            }
        };
        let dp = self.differentiate();
        // Critical points are only candidates, so an over-full count is
        // harmless here.
        for r in &dp.roots_uncapped(DEFAULT_ROOT_TOL)?.roots {
            consider(r.t.value());
        }
        let samples = 64 * degree as usize;
        let h = TAU / samples as f64;
        for i in 0..samples {
            consider(h * i as f64);
        }
        let (t, v) = golden_min(|t| self.eval(t), best.0 - h, best.0 + h, 80);
        if v < best.1 {
            best = (t, v);
        }
        Ok((CirclePoint::new(best.0), best.1))
    }

    /// Minimum of `g(p(t))` over `[lo, hi]`: grid of `samples` points, then
    /// golden-section polish around the best grid cell.
    pub fn interval_min(&self, lo: f64, hi: f64, samples: usize, g: impl Fn(f64) -> f64) -> (f64, f64) {
        let f = |t: f64| g(self.eval(t));
        grid_min(f, lo, hi, samples)
    }

    /// Divides out known roots of even multiplicity: returns `r` with
    /// `p(t) = r(t) · Π_i (2 - 2cos(t - t_i))^{m_i/2}`, of degree
    /// `D - Σ m_i / 2`. Exact when the `t_i` are roots of `p` to the given
    /// orders; otherwise the division remainder is dropped.
    pub fn deflate(&self, known: &[(f64, u32)]) -> Result<TrigPoly> {
        if known.iter().any(|&(_, m)| m % 2 == 1) {
            return Err(Error::InvalidArgument("deflate needs even multiplicities".into()));
        }
        let d = self.degree() as usize;
        let half: usize = known.iter().map(|&(_, m)| m as usize / 2).sum();
        if half > d {
            return Err(Error::InvalidArgument("more known roots than the degree allows".into()));
        }
        let mut s = self.algebraic_coefficients(self.degree());
        let mut phase = 0.0;
        for &(t, m) in known {
            let w = Complex64::from_polar(1.0, t);
            for _ in 0..m {
                // Synthetic division by (z - w), dropping the remainder.
                let n = s.len() - 1;
                let mut b = vec![Complex64::new(0.0, 0.0); n];
                b[n - 1] = s[n];
                for j in (1..n).rev() {
                    b[j - 1] = s[j] + w * b[j];
                }
                s = b;
            }
            phase += f64::from(m) * t / 2.0;
        }
        let sign = if half % 2 == 1 { -1.0 } else { 1.0 };
        let c = Complex64::from_polar(sign, phase);
        let deg = d - half;
        let a = |f: isize| c * s[(f + deg as isize) as usize];
        let terms = (1..=deg as isize)
            .map(|f| {
                let (plus, minus) = (a(f), a(-f));
                Harmonic::new(f as u32, plus.re + minus.re, minus.im - plus.im)
            })
            .collect();
        TrigPoly::new(a(0).re, terms)
    }

    /// Coefficients of `q(z) = z^D p`, lowest degree first.
    fn algebraic_coefficients(&self, degree: u32) -> Vec<Complex64> {
        let d = degree as usize;
        let mut q = vec![Complex64::new(0.0, 0.0); 2 * d + 1];
        q[d] = Complex64::new(self.c0, 0.0);
        for h in self.terms.iter().filter(|h| h.freq <= degree) {
            let f = h.freq as usize;
            q[d + f] += Complex64::new(h.cos / 2.0, -h.sin / 2.0);
            q[d - f] += Complex64::new(h.cos / 2.0, h.sin / 2.0);
        }
        q
    }
}

/// Grid scan followed by golden-section refinement of the best cell.
pub fn grid_min(f: impl Fn(f64) -> f64, lo: f64, hi: f64, samples: usize) -> (f64, f64) {
    let samples = samples.max(2);
    let h = (hi - lo) / (samples - 1) as f64;
    let mut best = (lo, f(lo));
    for i in 1..samples {
        let t = lo + h * i as f64;
        let v = f(t);
        if v < best.1 {
            best = (t, v);
        }
    }
    let (a, b) = ((best.0 - h).max(lo), (best.0 + h).min(hi));
    let polished = golden_min(&f, a, b, 80);
    if polished.1 < best.1 {
        polished
    } else {
        best
    }
}

fn golden_min(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, iters: usize) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..iters {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
        if b - a < 1e-15 {
            break;
        }
    }
    if fc < fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

struct RootContext<'a> {
    p: &'a TrigPoly,
    degree: f64,
    scale: f64,
    tol: f64,
    max_mult: u32,
    merge_tol: f64,
}

impl<'a> RootContext<'a> {
    fn new(p: &'a TrigPoly, degree: u32, tol: f64) -> Self {
        Self {
            p,
            degree: f64::from(degree),
            scale: p.coefficient_norm(),
            tol,
            max_mult: (2 * degree).min(40),
            merge_tol: 1e-7 * TAU / f64::from(degree),
        }
    }

    fn threshold(&self, order: u32) -> f64 {
        self.tol * self.scale * libm::pow(self.degree, f64::from(order))
    }

    /// First derivative order that is not numerically zero at `t`.
    fn multiplicity_at(&self, t: f64) -> u32 {
        (0..=self.max_mult).find(|&j| libm::fabs(self.p.eval_deriv(t, j)) > self.threshold(j)).unwrap_or(self.max_mult)
    }

    /// Newton iteration on `p^{(order)}` confined to a quarter period of the
    /// top harmonic around `t0`.
    fn newton(&self, t0: f64, order: u32) -> Option<f64> {
        let max_move = PI / (2.0 * self.degree);
        let max_step = max_move / 4.0;
        let mut t = t0;
        for _ in 0..120 {
            let g = self.p.eval_deriv(t, order);
            let dg = self.p.eval_deriv(t, order + 1);
            if g == 0.0 {
                break;
            }
            if dg == 0.0 {
                return None;
            }
            let step = (g / dg).clamp(-max_step, max_step);
            t -= step;
            if libm::fabs(t - t0) > max_move {
                return None;
            }
            if libm::fabs(step) < 1e-16 * (1.0 + libm::fabs(t)) {
                break;
            }
        }
        Some(t)
    }

    /// Polishes a candidate; the accepted location comes from Newton on
    /// `p^{(m-1)}` for the largest trial `m` whose result has multiplicity
    /// at least `m`, where that derivative has a simple root.
    fn refine(&self, t0: f64) -> Option<CircleRoot> {
        let mut best: Option<(f64, u32)> = None;
        let mut best_trial = 0;
        for m in 1..=self.max_mult {
            if m > best_trial + 2 {
                break;
            }
            let Some(t) = self.newton(t0, m - 1) else { continue };
            let mult = self.multiplicity_at(t);
            if mult >= m {
                best = Some((t, mult));
                best_trial = m;
            }
        }
        let (t, mult) = best?;
        let lead = libm::fabs(self.p.eval_deriv(t, mult));
        let fact: f64 = (1..=mult).map(f64::from).product();
        let radius = if lead > 0.0 {
            2.0 * libm::pow(self.threshold(0) * fact / lead, 1.0 / f64::from(mult))
        } else {
            self.merge_tol
        };
        Some(CircleRoot { t: CirclePoint::new(t), multiplicity: mult as usize, radius: radius.max(self.merge_tol) })
    }
}

/// When several true roots sit inside one resolution disc, the derivative
/// test sees a single root of lower order. The algebraic roots of `q(z)`
/// inside the disc give the summed multiplicity; each is assigned to the
/// nearest disc containing it.
fn count_algebraic_roots(roots: &mut [CircleRoot], zs: &[Complex64]) {
    let mut counts = vec![0usize; roots.len()];
    for z in zs {
        let nearest = roots
            .iter()
            .enumerate()
            .map(|(i, r)| (i, (Complex64::from_polar(1.0, r.t.value()) - z).norm(), r.radius))
            .filter(|&(_, d, radius)| d <= radius)
            .min_by(|a, b| a.1.total_cmp(&b.1));
        if let Some((i, _, _)) = nearest {
            counts[i] += 1;
        }
    }
    for (r, c) in roots.iter_mut().zip(counts) {
        r.multiplicity = r.multiplicity.max(c);
    }
}

fn cluster_centroids(zs: &[Complex64], radius: f64) -> Vec<Complex64> {
    let mut used = vec![false; zs.len()];
    let mut out = Vec::new();
    for i in 0..zs.len() {
        if used[i] {
            continue;
        }
        // Single linkage grown from i.
        let mut members = vec![i];
        used[i] = true;
        let mut head = 0;
        while head < members.len() {
            let zi = zs[members[head]];
            for (j, zj) in zs.iter().enumerate() {
                if !used[j] && (zi - zj).norm() < radius {
                    used[j] = true;
                    members.push(j);
                }
            }
            head += 1;
        }
        if members.len() > 1 {
            let sum: Complex64 = members.iter().map(|&j| zs[j]).sum();
            out.push(sum / members.len() as f64);
        }
    }
    out
}

/// All roots of a complex polynomial (coefficients lowest degree first).
fn aberth(coeffs: &[Complex64]) -> Vec<Complex64> {
    let mut hi = coeffs.len() - 1;
    while hi > 0 && coeffs[hi].norm() == 0.0 {
        hi -= 1;
    }
    let mut lo = 0;
    while lo < hi && coeffs[lo].norm() == 0.0 {
        lo += 1;
    }
    let mut roots = vec![Complex64::new(0.0, 0.0); lo];
    let poly: Vec<Complex64> = coeffs[lo..=hi].iter().map(|c| c / coeffs[hi]).collect();
    let n = poly.len() - 1;
    if n == 0 {
        return roots;
    }

    // Start on a circle whose radius is the geometric mean of the root moduli.
    let r0 = libm::pow(poly[0].norm(), 1.0 / n as f64).max(1e-3);
    let mut z: Vec<Complex64> = (0..n).map(|j| Complex64::from_polar(r0, TAU * j as f64 / n as f64 + 0.4)).collect();
    let mut done = vec![false; n];
    for _ in 0..500 {
        let mut all_done = true;
        for i in 0..n {
            if done[i] {
                continue;
            }
            let (v, dv) = horner(&poly, z[i]);
            if v.norm() == 0.0 {
                done[i] = true;
                continue;
            }
            let ratio = if dv.norm() == 0.0 { Complex64::new(1e-8, 1e-8) } else { v / dv };
            let mut repulsion = Complex64::new(0.0, 0.0);
            for (j, zj) in z.iter().enumerate() {
                if j != i {
                    let d = z[i] - zj;
                    if d.norm() > 0.0 {
                        repulsion += d.inv();
                    }
                }
            }
            let w = ratio / (Complex64::new(1.0, 0.0) - ratio * repulsion);
            z[i] -= w;
            if w.norm() <= 1e-15 * (1.0 + z[i].norm()) {
                done[i] = true;
            } else {
                all_done = false;
            }
        }
        if all_done {
            break;
        }
    }
    roots.extend(z);
    roots
}

fn horner(poly: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let mut v = Complex64::new(0.0, 0.0);
    let mut dv = Complex64::new(0.0, 0.0);
    for c in poly.iter().rev() {
        dv = dv * z + v;
        v = v * z + c;
    }
    (v, dv)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_2;

    fn poly(c0: f64, terms: &[(u32, f64, f64)]) -> TrigPoly {
        TrigPoly::new(c0, terms.iter().map(|&(f, a, b)| Harmonic::new(f, a, b)).collect()).unwrap()
    }

    fn osculating_k2() -> TrigPoly {
        poly(8.0, &[(1, -9.0, 0.0), (3, 1.0, 0.0)])
    }

    #[test]
    fn deflate_recovers_the_cofactor() {
        // (2 - 2cos t)^2 (1 + 0.5 cos t - 0.25 sin 2t), expanded numerically.
        let r = TrigPoly::new(1.0, vec![Harmonic::new(1, 0.5, 0.0), Harmonic::new(2, 0.0, -0.25)]).unwrap();
        let shift = 0.7;
        let samples: Vec<f64> = (0..13).map(|i| TAU * i as f64 / 13.0).collect();
        let f = |t: f64| {
            let c = 2.0 - 2.0 * libm::cos(t - shift);
            c * c * r.eval(t)
        };
        // Fit the degree-4 product from samples by a direct DFT.
        let n = samples.len() as f64;
        let c0 = samples.iter().map(|&t| f(t)).sum::<f64>() / n;
        let terms = (1..=4)
            .map(|k| {
                let kf = f64::from(k);
                let a = samples.iter().map(|&t| f(t) * libm::cos(kf * t)).sum::<f64>() * 2.0 / n;
                let b = samples.iter().map(|&t| f(t) * libm::sin(kf * t)).sum::<f64>() * 2.0 / n;
                Harmonic::new(k, a, b)
            })
            .collect();
        let p = TrigPoly::new(c0, terms).unwrap();
        let got = p.deflate(&[(shift, 4)]).unwrap();
        for t in [0.0, 1.0, 2.5, 4.0] {
            assert!((got.eval(t) - r.eval(t)).abs() < 1e-12, "{t}");
        }
        assert!(p.deflate(&[(shift, 3)]).is_err());
    }

    #[test]
    fn eval_examples() {
        assert_eq!(poly(0.0, &[(1, 1.0, 0.0)]).eval(0.0), 1.0);
        assert!((poly(1.0, &[(1, -1.0, 0.0)]).eval(PI) - 2.0).abs() < 1e-15);
        assert!(osculating_k2().eval(0.0).abs() < 1e-15);
    }

    #[test]
    fn differentiate_examples() {
        assert_eq!(poly(1.0, &[(1, -1.0, 0.0)]).differentiate(), poly(0.0, &[(1, 0.0, 1.0)]));
        assert_eq!(poly(0.0, &[(3, 1.0, 0.0)]).differentiate(), poly(0.0, &[(3, 0.0, -3.0)]));
        assert_eq!(osculating_k2().differentiate(), poly(0.0, &[(1, 0.0, 9.0), (3, 0.0, -3.0)]));
    }

    #[test]
    fn eval_deriv_matches_differentiate() {
        let p = poly(0.3, &[(1, 0.5, -1.2), (2, 0.1, 0.7), (5, -0.4, 0.2)]);
        let mut d = p.clone();
        for order in 0..6 {
            for &t in &[0.0, 0.9, 2.5, 5.1] {
                assert!((d.eval(t) - p.eval_deriv(t, order)).abs() < 1e-10);
            }
            d = d.differentiate();
        }
    }

    #[test]
    fn roots_of_cosine() {
        let set = poly(0.0, &[(1, 1.0, 0.0)]).circle_roots(DEFAULT_ROOT_TOL).unwrap();
        assert_eq!(set.len(), 2);
        assert!((set.roots[0].t.value() - FRAC_PI_2).abs() < 1e-12);
        assert!((set.roots[1].t.value() - 3.0 * FRAC_PI_2).abs() < 1e-12);
        assert!(set.roots.iter().all(|r| r.multiplicity == 1));
    }

    #[test]
    fn double_root_of_one_minus_cos() {
        let set = poly(1.0, &[(1, -1.0, 0.0)]).circle_roots(DEFAULT_ROOT_TOL).unwrap();
        assert_eq!(set.len(), 1);
        assert!(set.roots[0].t.distance(CirclePoint::new(0.0)) < 1e-8);
        assert_eq!(set.roots[0].multiplicity, 2);
    }

    #[test]
    fn fourfold_root_of_osculating_polynomial() {
        let set = osculating_k2().circle_roots(DEFAULT_ROOT_TOL).unwrap();
        assert_eq!(set.len(), 1, "{set:?}");
        assert!(set.roots[0].t.distance(CirclePoint::new(0.0)) < 1e-6);
        assert_eq!(set.roots[0].multiplicity, 4);
        assert!(set.residual < 1e-9 * osculating_k2().coefficient_norm());
    }

    #[test]
    fn roots_wrap_around_zero() {
        // sin(t - 0.01) ... roots at 0.01 and 0.01 + π; shifted near 2π instead.
        let (s, c) = (-0.01f64).sin_cos();
        // sin(t + 0.01) = sin t cos 0.01 + cos t sin 0.01 ; root at -0.01.
        let p = poly(0.0, &[(1, -s, c)]);
        let set = p.circle_roots(DEFAULT_ROOT_TOL).unwrap();
        assert_eq!(set.len(), 2);
        assert!(set.roots.iter().any(|r| r.t.distance(CirclePoint::new(-0.01)) < 1e-12));
    }

    #[test]
    fn identically_zero_is_rejected() {
        let p = poly(0.0, &[(1, 1e-12, 0.0)]);
        assert!(matches!(p.circle_roots(1e-9), Err(Error::IdenticallyZero { .. })));
    }

    #[test]
    fn constant_has_no_roots() {
        assert!(TrigPoly::constant(2.0).circle_roots(1e-9).unwrap().is_empty());
    }

    #[test]
    fn global_min_examples() {
        let (t, v) = poly(1.0, &[(1, -1.0, 0.0)]).global_min().unwrap();
        assert!(t.distance(CirclePoint::new(0.0)) < 1e-6 && v.abs() < 1e-15);
        let (t, v) = poly(0.0, &[(1, 1.0, 0.0)]).global_min().unwrap();
        assert!(t.distance(CirclePoint::new(PI)) < 1e-7 && (v + 1.0).abs() < 1e-14);
        let (t, v) = osculating_k2().global_min().unwrap();
        assert!(t.distance(CirclePoint::new(0.0)) < 1e-3 && v.abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_frequencies() {
        assert!(TrigPoly::new(0.0, vec![Harmonic::new(0, 1.0, 0.0)]).is_err());
        assert!(TrigPoly::new(0.0, vec![Harmonic::new(3, 1.0, 0.0), Harmonic::new(1, 1.0, 0.0)]).is_err());
    }
}
