//! Subcommand implementations. Each returns a [`Report`] and a verdict;
//! encoding and exit codes are handled by the caller.

use std::f64::consts::FRAC_1_SQRT_2;

use orbitope_core::bounds::{contact_separation_bound, neighborliness_bound, GapProfile};
use orbitope_core::ellipsoid::{inradius_bounds, inradius_estimate};
use orbitope_core::face::verify_support;
use orbitope_core::neighborliness::{bound_comparison_table, estimate_phi, MAX_ESTIMATED_K};
use orbitope_core::runner::StartRunner;
use orbitope_core::tangent::{construct_hyperplane, tangency_residual};
use orbitope_core::{CircleRootSet, CurveSpec, Error, TangencyPattern, TrigPoly};
use serde_json::{json, Map, Value};

use crate::config::RunConfig;
use crate::output::{num, nums, opt_num, Report, Table};

pub const MAX_BOUNDS_K: usize = 200;
pub const MAX_INRADIUS_K: usize = 8;
/// Slack on the inradius sandwich.
pub const SANDWICH_SLACK: f64 = 1e-3;
/// Slack on the separation and midpoint checks of a certified face.
pub const FACE_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Success,
    Negative,
    /// A bound that should hold was numerically violated.
    Falsified(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Usage(pub String);

impl From<Error> for Usage {
    fn from(e: Error) -> Self {
        Usage(e.to_string())
    }
}

pub type Outcome = Result<(Report, Verdict), Usage>;

fn args(pairs: &[(&str, Value)]) -> Map<String, Value> {
    pairs.iter().map(|(k, v)| ((*k).to_string(), v.clone())).collect()
}

pub fn eval(cfg: &RunConfig, t: f64, deriv: u32) -> Outcome {
    let spec = CurveSpec::new(cfg.k)?;
    let value = spec.deriv(t, deriv);
    let next = spec.deriv(t, deriv + 1);
    let rows = value.iter().zip(&next).enumerate().map(|(i, (v, d))| vec![json!(i), num(*v), num(*d)]).collect();
    let report = Report {
        command: "eval",
        args: args(&[("t", num(t)), ("deriv", json!(deriv))]),
        result: json!({ "t": num(t), "order": deriv, "value": nums(&value), "derivative": nums(&next) }),
        table: Table { header: vec!["coordinate", "value", "derivative"], rows },
    };
    Ok((report, Verdict::Success))
}

fn roots_json(set: &CircleRootSet) -> Value {
    Value::Array(
        set.roots
            .iter()
            .map(|r| json!({ "t": num(r.t.value()), "multiplicity": r.multiplicity, "radius": num(r.radius) }))
            .collect(),
    )
}

fn poly_json(p: &TrigPoly) -> Value {
    let terms: Vec<Value> =
        p.terms().iter().map(|h| json!({ "freq": h.freq, "cos": num(h.cos), "sin": num(h.sin) })).collect();
    json!({ "c0": num(p.c0()), "terms": terms })
}

pub fn face_check(cfg: &RunConfig, points: &[f64], mults: &[u32]) -> Outcome {
    let spec = CurveSpec::new(cfg.k)?;
    let pattern = TangencyPattern::from_points(&spec, points, mults)?;
    let h = construct_hyperplane(&spec, &pattern)?;
    let cert = verify_support(&spec, &h, &pattern)?;
    let residual = tangency_residual(&spec, &h, &pattern)?;
    let is_face = cert.matches_pattern(&pattern);
    let separation_bound = contact_separation_bound(cfg.k);
    let midpoint = cert.min_contact_midpoint_norm(&spec);

    let mut problems = Vec::new();
    if cert.is_supporting {
        if !cert.localized {
            problems.push("an extra contact lies outside the antipodal arc".to_string());
        }
        if let Some(g) = cert.min_opposite_gap.filter(|&g| g < separation_bound - FACE_SLACK) {
            problems.push(format!("extra contact {g} from an antipode, below {separation_bound}"));
        }
        if let Some(m) = midpoint.filter(|&m| m < FACE_SLACK.mul_add(-1.0, FRAC_1_SQRT_2)) {
            problems.push(format!("contact midpoint norm {m} below 1/sqrt(2)"));
        }
    }

    let extra: Vec<f64> = cert.extra_contacts.iter().map(|s| s.value()).collect();
    let contacts = roots_json(&cert.contact_set);
    let contact_cell: Vec<Value> = cert
        .contact_set
        .roots
        .iter()
        .map(|r| Value::String(format!("{}:{}", crate::output::round_sig(r.t.value()), r.multiplicity)))
        .collect();
    let result = json!({
        "is_supporting": cert.is_supporting,
        "is_face": is_face,
        "global_min": num(cert.global_min_value),
        "global_min_at": num(cert.global_min_at.value()),
        "contacts": contacts,
        "face_dim": cert.face_dim,
        "extra_contacts": nums(&extra),
        "min_opposite_gap": opt_num(cert.min_opposite_gap),
        "localized": cert.localized,
        "separation_bound": num(separation_bound),
        "min_contact_midpoint_norm": opt_num(midpoint),
        "normal": nums(h.normal()),
        "offset": num(h.offset()),
        "tangency_residual": num(residual),
    });
    let row = vec![
        json!(cert.is_supporting),
        json!(is_face),
        num(cert.global_min_value),
        num(cert.global_min_at.value()),
        json!(cert.face_dim),
        Value::Array(contact_cell),
        nums(&extra),
        opt_num(cert.min_opposite_gap),
        json!(cert.localized),
    ];
    let report = Report {
        command: "face-check",
        args: args(&[("points", nums(points)), ("mults", json!(mults))]),
        result,
        table: Table {
            header: vec![
                "is_supporting",
                "is_face",
                "global_min",
                "global_min_at",
                "face_dim",
                "contacts",
                "extra_contacts",
                "min_opposite_gap",
                "localized",
            ],
            rows: vec![row],
        },
    };
    let verdict = if !problems.is_empty() {
        Verdict::Falsified(problems.join("; "))
    } else if is_face {
        Verdict::Success
    } else {
        Verdict::Negative
    };
    Ok((report, verdict))
}

const PHI_HEADER: [&str; 6] = ["k", "paper_bound", "phi_lower_numeric", "phi_upper_numeric", "trials", "seed"];

fn phi_row(k: usize, bound: f64, lo: Option<f64>, hi: Option<f64>, trials: usize, seed: u64) -> Vec<Value> {
    vec![json!(k), num(bound), opt_num(lo), opt_num(hi), json!(trials), json!(seed)]
}

pub fn phi<R: StartRunner>(runner: &R, cfg: &RunConfig, bound_only: bool, bracket: f64, table: bool) -> Outcome {
    if !(bracket > 0.0) {
        return Err(Usage(format!("--bracket must be positive, got {bracket}")));
    }
    let spec = CurveSpec::new(cfg.k)?;
    let echo = args(&[("bound_only", json!(bound_only)), ("bracket", num(bracket)), ("table", json!(table))]);
    let report = |result: Value, rows: Vec<Vec<Value>>| Report {
        command: "phi",
        args: echo.clone(),
        result,
        table: Table { header: PHI_HEADER.to_vec(), rows },
    };
    let inconclusive = |e: Error| match e {
        Error::SearchInconclusive { k, psi, score } => {
            let msg = e.to_string();
            let result = json!({
                "k": k, "paper_bound": num(psi), "worst_score": num(score), "falsification": msg,
            });
            Ok((report(result, vec![phi_row(k, psi, None, None, 0, cfg.seed)]), Verdict::Falsified(msg)))
        }
        other => Err(Usage::from(other)),
    };

    if table {
        if bound_only {
            return Err(Usage("--table and --bound-only cannot be combined".into()));
        }
        let rows = match bound_comparison_table(runner, cfg.k, bracket, cfg.starts, cfg.seed) {
            Ok(rows) => rows,
            Err(e) => return inconclusive(e),
        };
        let json_rows: Vec<Value> = rows
            .iter()
            .map(|r| {
                json!({
                    "k": r.k,
                    "paper_bound": num(r.paper_bound),
                    "phi_lower_numeric": opt_num(r.phi_lower_numeric),
                    "phi_upper_numeric": opt_num(r.phi_upper_numeric),
                })
            })
            .collect();
        let csv_rows = rows
            .iter()
            .map(|r| phi_row(r.k, r.paper_bound, r.phi_lower_numeric, r.phi_upper_numeric, 0, cfg.seed))
            .collect();
        return Ok((report(json!({ "rows": json_rows }), csv_rows), Verdict::Success));
    }

    let bound = neighborliness_bound(cfg.k);
    if bound_only || cfg.k > MAX_ESTIMATED_K {
        let result = json!({
            "k": cfg.k,
            "paper_bound": num(bound),
            "phi_lower_numeric": Value::Null,
            "phi_upper_numeric": Value::Null,
            "estimated": false,
        });
        return Ok((report(result, vec![phi_row(cfg.k, bound, None, None, 0, cfg.seed)]), Verdict::Success));
    }
    let est = match estimate_phi(runner, &spec, bracket, cfg.starts, cfg.seed) {
        Ok(est) => est,
        Err(e) => return inconclusive(e),
    };
    let result = json!({
        "k": est.k,
        "paper_bound": num(est.paper_bound),
        "phi_lower_numeric": num(est.phi_lower_numeric),
        "phi_upper_numeric": opt_num(est.phi_upper_numeric),
        "safe_up_to_pi": est.phi_upper_numeric.is_none(),
        "estimated": true,
        "trials": est.trials,
        "seed": est.seed,
        "monotonicity_violations": est.monotonicity_violations,
        "witness": est.witness.as_deref().map_or(Value::Null, nums),
    });
    let row = phi_row(est.k, est.paper_bound, Some(est.phi_lower_numeric), est.phi_upper_numeric, est.trials, est.seed);
    Ok((report(result, vec![row]), Verdict::Success))
}

pub fn bounds(cfg: &RunConfig) -> Outcome {
    if cfg.k > MAX_BOUNDS_K {
        return Err(Usage(format!("--k must be at most {MAX_BOUNDS_K} for bounds, got {}", cfg.k)));
    }
    let mut rows = Vec::with_capacity(cfg.k);
    let mut json_rows = Vec::with_capacity(cfg.k);
    let mut problems = Vec::new();
    for k in 1..=cfg.k {
        let p = match GapProfile::new(k, cfg.tolerance) {
            Ok(p) => p,
            Err(e @ Error::BracketFailure { .. }) => {
                problems.push(e.to_string());
                continue;
            }
            Err(e) => return Err(e.into()),
        };
        if !(p.margin() > 0.0) {
            problems.push(format!("k = {k}: epsilon_star {} does not exceed {}", p.epsilon_star, p.thm31_bound));
        }
        rows.push(vec![json!(k), num(p.epsilon_star), num(p.thm31_bound), num(p.thm12_bound), num(p.margin())]);
        json_rows.push(json!({
            "k": k,
            "epsilon_star": num(p.epsilon_star),
            "thm31_bound": num(p.thm31_bound),
            "thm12_bound": num(p.thm12_bound),
            "margin": num(p.margin()),
        }));
    }
    let verdict = if problems.is_empty() { Verdict::Success } else { Verdict::Falsified(problems.join("; ")) };
    let report = Report {
        command: "bounds",
        args: Map::new(),
        result: json!({ "rows": json_rows }),
        table: Table { header: vec!["k", "epsilon_star", "thm31_bound", "thm12_bound", "margin"], rows },
    };
    Ok((report, verdict))
}

pub fn inradius<R: StartRunner>(runner: &R, cfg: &RunConfig) -> Outcome {
    if cfg.k > MAX_INRADIUS_K {
        return Err(Usage(format!("--k must be at most {MAX_INRADIUS_K} for inradius, got {}", cfg.k)));
    }
    let spec = CurveSpec::new(cfg.k)?;
    let est = inradius_estimate(runner, &spec, cfg.starts, cfg.seed)?;
    let (lower, upper) = inradius_bounds(cfg.k);
    let inside = lower - SANDWICH_SLACK <= est.value && est.value <= upper + SANDWICH_SLACK;
    let result = json!({
        "k": cfg.k,
        "estimate": num(est.value),
        "lower": num(lower),
        "upper": num(upper),
        "direction": nums(&est.direction),
        "starts": est.starts,
        "seed": est.seed,
    });
    let report = Report {
        command: "inradius",
        args: Map::new(),
        result,
        table: Table {
            header: vec!["k", "estimate", "lower", "upper"],
            rows: vec![vec![json!(cfg.k), num(est.value), num(lower), num(upper)]],
        },
    };
    let verdict = if inside {
        Verdict::Success
    } else {
        Verdict::Falsified(format!("inradius estimate {} outside [{lower}, {upper}]", est.value))
    };
    Ok((report, verdict))
}

pub fn roots(cfg: &RunConfig, points: &[f64], mults: &[u32], normal: &[f64], offset: f64) -> Outcome {
    let spec = CurveSpec::new(cfg.k)?;
    let (p, echo) = if points.is_empty() {
        let p = TrigPoly::from_functional(&spec, normal, offset)?;
        (p, args(&[("normal", nums(normal)), ("offset", num(offset))]))
    } else {
        let pattern = TangencyPattern::from_points(&spec, points, mults)?;
        let h = construct_hyperplane(&spec, &pattern)?;
        (h.support_poly(&spec)?, args(&[("points", nums(points)), ("mults", json!(mults))]))
    };
    let set = p.circle_roots(cfg.tolerance)?;
    let rows = set.roots.iter().map(|r| vec![num(r.t.value()), json!(r.multiplicity), num(r.radius)]).collect();
    let result = json!({
        "polynomial": poly_json(&p),
        "roots": roots_json(&set),
        "total_multiplicity": set.total_multiplicity(),
        "residual": num(set.residual),
    });
    let report = Report {
        command: "roots",
        args: echo,
        result,
        table: Table { header: vec!["t", "multiplicity", "radius"], rows },
    };
    Ok((report, Verdict::Success))
}
