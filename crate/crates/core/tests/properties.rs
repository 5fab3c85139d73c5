use std::f64::consts::PI;

use orbitope_core::bounds::{gap, odd_cosine_sum};
use orbitope_core::face::{contact_separation, verify_support};
use orbitope_core::linalg::{null_space, Matrix};
use orbitope_core::tangent::{construct_hyperplane, independence_check, tangency_matrix};
use orbitope_core::trig_poly::{Harmonic, DEFAULT_ROOT_TOL};
use orbitope_core::{CirclePoint, CurveSpec, TangencyPattern, TrigPoly};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn spec(k: usize) -> CurveSpec {
    CurveSpec::new(k).unwrap()
}

/// Random even-multiplicity pattern with `min_sep` between points, inside
/// an arc of length `arc` around a random center.
fn random_pattern(rng: &mut ChaCha8Rng, k: usize, arc: f64, min_sep: f64) -> (Vec<f64>, Vec<u32>) {
    let l = rng.gen_range(1..=k);
    let mut parts = vec![1u32; l];
    for _ in l..k {
        parts[rng.gen_range(0..l)] += 1;
    }
    let mults = parts.iter().map(|m| 2 * m).collect();
    let center = rng.gen_range(0.0..2.0 * PI);
    loop {
        let mut offs: Vec<f64> = (0..l).map(|_| rng.gen_range(-arc / 2.0..arc / 2.0)).collect();
        offs.sort_by(f64::total_cmp);
        if offs.windows(2).all(|w| w[1] - w[0] >= min_sep) {
            return (offs.iter().map(|o| center + o).collect(), mults);
        }
    }
}

fn random_poly(rng: &mut ChaCha8Rng, degree: u32) -> TrigPoly {
    let terms = (1..=degree).map(|f| Harmonic::new(f, rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
    TrigPoly::new(rng.gen_range(-1.0..1.0), terms).unwrap()
}

/// Evaluates `p` on `n` equispaced points with an angle-addition recurrence.
fn dense_min(p: &TrigPoly, n: usize) -> (f64, f64) {
    let h = 2.0 * PI / n as f64;
    let (sh, ch) = h.sin_cos();
    let d = p.terms().last().map_or(0, |t| t.freq) as usize;
    let mut coef = vec![(0.0, 0.0); d + 1];
    for t in p.terms() {
        coef[t.freq as usize] = (t.cos, t.sin);
    }
    let (mut c1, mut s1) = (1.0f64, 0.0f64);
    let mut best = (0.0, f64::INFINITY);
    for i in 0..n {
        if i % 4096 == 0 {
            let (s, c) = (h * i as f64).sin_cos();
            c1 = c;
            s1 = s;
        }
        let (mut cj, mut sj) = (1.0, 0.0);
        let mut v = p.c0();
        for &(a, b) in &coef[1..] {
            let (nc, ns) = (cj * c1 - sj * s1, sj * c1 + cj * s1);
            cj = nc;
            sj = ns;
            v += a * cj + b * sj;
        }
        if v < best.1 {
            best = (h * i as f64, v);
        }
        let (nc, ns) = (c1 * ch - s1 * sh, s1 * ch + c1 * sh);
        c1 = nc;
        s1 = ns;
    }
    // Golden-section refinement around the best sample.
    let (mut a, mut b) = (best.0 - h, best.0 + h);
    let g = (5f64.sqrt() - 1.0) / 2.0;
    for _ in 0..80 {
        let x1 = b - g * (b - a);
        let x2 = a + g * (b - a);
        if p.eval(x1) < p.eval(x2) {
            b = x2;
        } else {
            a = x1;
        }
    }
    let t = 0.5 * (a + b);
    (t, p.eval(t).min(best.1))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn curve_is_centrally_symmetric(k in 1usize..=16, t in -10.0f64..10.0) {
        let s = spec(k);
        let a = s.eval(t + PI);
        let b = s.eval(t);
        for (x, y) in a.iter().zip(&b) {
            prop_assert!((x + y).abs() < 1e-13);
        }
    }

    #[test]
    fn curve_lies_on_sphere(k in 1usize..=64, t in -10.0f64..10.0) {
        let n2: f64 = spec(k).eval(t).iter().map(|v| v * v).sum();
        prop_assert!((n2 - k as f64).abs() < 1e-12);
    }

    #[test]
    fn derivatives_match_finite_differences(k in 1usize..=8, t in -4.0f64..4.0, n in 1u32..=4) {
        let s = spec(k);
        let h = 1e-6;
        let hi = s.deriv(t + h, n - 1);
        let lo = s.deriv(t - h, n - 1);
        let d = s.deriv(t, n);
        let scale = f64::from(s.max_frequency()).powi(n as i32 + 1);
        for i in 0..d.len() {
            let fd = (hi[i] - lo[i]) / (2.0 * h);
            prop_assert!((fd - d[i]).abs() < 1e-6 * scale.max(1.0), "{fd} vs {}", d[i]);
        }
    }

    #[test]
    fn odd_harmonics_flip_under_half_turn(seed: u64, t in 0.0f64..6.3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let k = rng.gen_range(1..=8);
        let terms = (0..k).map(|j| Harmonic::new(2 * j as u32 + 1, rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
        let p = TrigPoly::new(0.0, terms).unwrap();
        prop_assert!((p.eval(t + PI) + p.eval(t)).abs() < 1e-13);
    }

    #[test]
    fn root_count_is_capped(seed: u64, degree in 1u32..=12) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = random_poly(&mut rng, degree);
        let roots = p.circle_roots(DEFAULT_ROOT_TOL).unwrap();
        prop_assert!(roots.total_multiplicity() <= 2 * degree as usize);
        prop_assert!(roots.residual <= 1e-8 * p.coefficient_norm());
    }

    #[test]
    fn derivative_roots_interlace(seed: u64, degree in 1u32..=10) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let q = random_poly(&mut rng, degree);
        // Shift so that a random point is a root.
        let a = rng.gen_range(0.0..2.0 * PI);
        let p = TrigPoly::new(q.c0() - q.eval(a), q.terms().to_vec()).unwrap();
        let roots = p.circle_roots(DEFAULT_ROOT_TOL).unwrap();
        prop_assume!(roots.len() >= 2);
        let dp = p.differentiate().circle_roots(DEFAULT_ROOT_TOL).unwrap();
        let rs: Vec<CirclePoint> = roots.roots.iter().map(|r| r.t).collect();
        for (i, &r) in rs.iter().enumerate() {
            let next = rs[(i + 1) % rs.len()];
            let mut width = next.offset_from(r);
            if width <= 0.0 {
                width += 2.0 * PI;
            }
            let found = dp.roots.iter().any(|d| {
                let o = d.t.offset_from(r);
                let o = if o < -1e-9 { o + 2.0 * PI } else { o };
                o >= -1e-9 && o <= width + 1e-9
            });
            prop_assert!(found, "no critical point between {:?} and {:?}", r, next);
        }
    }

    #[test]
    fn summation_identity(k in 1usize..=50, theta in 0.001f64..(PI - 0.001)) {
        let lhs = odd_cosine_sum(k, theta);
        let rhs = (2.0 * k as f64 * theta).sin() / (2.0 * theta.sin());
        prop_assert!((lhs - rhs).abs() < 1e-10);
    }

    #[test]
    fn gap_matches_midpoint_geometry(k in 1usize..=20, t in 0.0f64..6.3, eps in 0.0f64..1.5) {
        let s = spec(k);
        let a = s.eval(t + PI + eps);
        let b = s.eval(t);
        let m: f64 = a.iter().zip(&b).map(|(x, y)| (x + y) * (x + y)).sum::<f64>() / 4.0;
        prop_assert!((m - 0.5 - gap(k, eps)).abs() < 1e-10);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn tangency_order_and_residual(seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let k = rng.gen_range(1..=5);
        let (pts, mults) = random_pattern(&mut rng, k, 0.9 * PI, 1e-3);
        let s = spec(k);
        let pattern = TangencyPattern::from_points(&s, &pts, &mults).unwrap();
        let h = construct_hyperplane(&s, &pattern).unwrap();
        // Derivative rows grow like (2k-1)^j, so residuals are measured
        // relative to each row.
        let raw = tangency_matrix(&s, &pattern);
        for (i, r) in raw.mul_vec(h.normal()).iter().enumerate() {
            let scale = raw.row(i).iter().map(|v| v * v).sum::<f64>().sqrt();
            prop_assert!(r.abs() < 1e-10 * scale.max(1.0), "row {i}: residual {r}");
        }
        let p = h.support_poly(&s).unwrap();
        let w = f64::from(s.max_frequency());
        for e in pattern.entries() {
            for j in 0..e.multiplicity {
                let v = p.eval_deriv(e.t.value(), j) / w.powi(j as i32);
                prop_assert!(v.abs() < 1e-8, "p^({j})({:?}) = {v}", e.t);
            }
        }
    }

    #[test]
    fn normal_is_unique_up_to_sign(seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let k = rng.gen_range(1..=4);
        let (pts, mults) = random_pattern(&mut rng, k, 0.9 * PI, 0.1);
        let s = spec(k);
        let pattern = TangencyPattern::from_points(&s, &pts, &mults).unwrap();
        let h = construct_hyperplane(&s, &pattern).unwrap();
        // Independent route: raw rows in reverse order, unnormalized.
        let raw = tangency_matrix(&s, &pattern);
        let rows: Vec<Vec<f64>> = (0..raw.rows()).rev().map(|i| raw.row(i).to_vec()).collect();
        let null = null_space(&Matrix::from_rows(&rows), 1e-12);
        prop_assert_eq!(null.len(), 1);
        let dot: f64 = null[0].iter().zip(h.normal()).map(|(a, b)| a * b).sum();
        prop_assert!((dot.abs() - 1.0).abs() < 1e-9, "|<n1,n2>| = {}", dot.abs());
    }

    #[test]
    fn patterns_on_long_arcs_are_independent(seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let k = rng.gen_range(1..=6);
        let (pts, mults) = random_pattern(&mut rng, k, 0.9 * PI, 0.0);
        let s = spec(k);
        let pattern = TangencyPattern::from_points(&s, &pts, &mults).unwrap();
        prop_assert_eq!(independence_check(&s, &pattern).rank, 2 * k);
    }

    #[test]
    fn supporting_hyperplanes_respect_contact_bounds(seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let k = rng.gen_range(1..=4);
        let arc = rng.gen_range(0.1..0.95 * PI);
        let (pts, mults) = random_pattern(&mut rng, k, arc, 1e-3);
        let s = spec(k);
        let pattern = TangencyPattern::from_points(&s, &pts, &mults).unwrap();
        let h = construct_hyperplane(&s, &pattern).unwrap();
        let cert = verify_support(&s, &h, &pattern).unwrap();
        prop_assume!(cert.is_supporting);
        prop_assert!(cert.localized, "extra contact outside the opposite arc: {cert:?}");
        let bound = 1.5f64.sqrt() * (k as f64).powf(-1.5);
        for &c in &cert.extra_contacts {
            prop_assert!(contact_separation(&pattern, c) > bound - 1e-9);
        }
        let mid = cert.min_contact_midpoint_norm(&s).unwrap();
        prop_assert!(mid >= 0.5f64.sqrt() - 1e-9, "midpoint norm {mid}");
    }
}

#[test]
fn global_min_matches_dense_grid() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for _ in 0..100 {
        let degree = rng.gen_range(1..=15);
        let p = random_poly(&mut rng, degree);
        let (_, got) = p.global_min().unwrap();
        let (_, want) = dense_min(&p, 1_000_000);
        assert!((got - want).abs() < 1e-8, "degree {degree}: {got} vs {want}");
    }
}
