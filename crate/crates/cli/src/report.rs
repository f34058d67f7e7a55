//! Reports: a canonical JSON value plus a human-readable rendering.
//!
//! JSON objects are `serde_json::Map`s, which keep keys sorted, so emitting,
//! parsing and re-emitting a report is byte-identical.

use std::fmt::Write as _;

use logpair::chern::{bmy_check, bmy_limit_check, edge_invariants, log_chern, ChernError};
use logpair::classifier::{classify, reider_search, ClassifyError, ReiderError};
use logpair::lattice::ValidationReport;
use logpair::numerics::{ConeSolveResult, GaussBonnet, LelongEstimate};
use logpair::positivity::{nef_threshold, AlphaFamily, Property, Threshold, ThresholdError};
use logpair::rational::{ratio, Rational};
use logpair::{DivisorClass, SurfacePair};
use serde::Serialize;
use serde_json::{json, Value};

pub struct Report {
    pub json: Value,
    pub text: String,
}

impl Report {
    pub fn canonical_json(&self) -> String {
        canonical_json(&self.json)
    }
}

pub fn canonical_json(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values always serialize");
    s.push('\n');
    s
}

fn value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("report types always serialize")
}

fn header(pair: &SurfacePair) -> String {
    pair.name.clone().unwrap_or_else(|| "(unnamed pair)".to_string())
}

fn list(classes: impl Iterator<Item = DivisorClass>) -> String {
    let items: Vec<String> = classes.map(|c| c.to_string()).collect();
    if items.is_empty() {
        "none".to_string()
    } else {
        items.join(", ")
    }
}

fn threshold_line(t: &Threshold) -> String {
    let mut s = format!("{}", t.value);
    if !t.exact {
        s.push_str(" (rational upper bound)");
    }
    s.push_str(if t.attained { ", attained" } else { ", not attained" });
    if !t.binding_curves.is_empty() {
        let _ = write!(s, "; binding: {}", list(t.binding_curves.iter().map(|c| c.class.clone())));
    }
    if t.square_binding {
        s.push_str("; 𝓛_α² > 0 binding");
    }
    s
}

pub fn classify_report(pair: &SurfacePair, validation: &ValidationReport) -> Result<Report, ClassifyError> {
    let v = classify(pair)?;
    let mut text = String::new();
    let _ = writeln!(text, "pair: {}  (curve set {})", header(pair), v.catalog_hash);
    for w in &validation.warnings {
        let _ = writeln!(text, "warning at {}: {}", w.path, w.detail);
    }
    let yn = |b: bool| if b { "yes" } else { "no" };
    let _ = writeln!(text, "d_minimal:            {}", yn(v.d_minimal));
    let _ = writeln!(text, "semistable:           {}", yn(v.semistable));
    let _ = writeln!(text, "log_general:          {}", v.log_general);
    let _ = writeln!(
        text,
        "nef_near_one:         {}  (structural {}, threshold {})",
        v.nef_near_one, v.structural.nef_near_one, v.threshold_route.nef_near_one
    );
    let _ = writeln!(
        text,
        "ample_near_one:       {}  (structural {}, threshold {})",
        v.ample_near_one, v.structural.ample_near_one, v.threshold_route.ample_near_one
    );
    let _ = writeln!(text, "ke_edge_small_angles: {}", v.ke_edge_small_angles);
    match (&v.thresholds.nef, &v.thresholds.nef_error) {
        (Some(t), _) => {
            let _ = writeln!(text, "nef threshold:        {}", threshold_line(t));
        }
        (None, Some(e)) => {
            let _ = writeln!(text, "nef threshold:        none ({e})");
        }
        _ => {}
    }
    match (&v.thresholds.ample, &v.thresholds.ample_error) {
        (Some(t), _) => {
            let _ = writeln!(text, "ample threshold:      {}", threshold_line(t));
        }
        (None, Some(e)) => {
            let _ = writeln!(text, "ample threshold:      none ({e})");
        }
        _ => {}
    }
    let o = &v.obstructions;
    let _ = writeln!(text, "interior (−2):        {}", list(o.interior_minus2.iter().map(|c| c.class.clone())));
    let _ = writeln!(text, "boundary (−2):        {}", list(o.boundary_minus2.iter().map(|c| c.class.clone())));
    let _ = writeln!(text, "D-minimality:         {}", list(o.d_minimality_violations.iter().map(|c| c.class.clone())));
    let _ = writeln!(text, "semi-stability:       {}", list(o.semistability_violations.iter().map(|c| c.class.clone())));
    let json = json!({
        "command": "classify",
        "pair": pair.name,
        "warnings": value(&validation.warnings),
        "verdict": value(&v),
    });
    Ok(Report { json, text })
}

pub fn threshold_report(pair: &SurfacePair, properties: &[Property]) -> Report {
    let fam = AlphaFamily::of_pair(pair);
    let mut text = format!("pair: {}\n", header(pair));
    let mut entries = serde_json::Map::new();
    for &p in properties {
        let r: Result<Threshold, ThresholdError> = nef_threshold(&fam, pair, p);
        let (line, v) = match &r {
            Ok(t) => (threshold_line(t), json!({ "threshold": value(t) })),
            Err(e) => (format!("none ({e})"), json!({ "error": e.to_string() })),
        };
        let _ = writeln!(text, "{p} threshold: {line}");
        entries.insert(p.to_string(), v);
    }
    Report { json: json!({ "command": "threshold", "pair": pair.name, "thresholds": entries }), text }
}

/// α-grid of the BMY identity table.
pub fn default_alpha_grid() -> Vec<Rational> {
    vec![ratio(1, 2), ratio(3, 4), ratio(9, 10), ratio(1, 1)]
}

pub fn bmy_report(pair: &SurfacePair) -> Result<Report, ChernError> {
    let n = log_chern(pair);
    let b = bmy_check(pair);
    let l = bmy_limit_check(pair);
    let mut text = format!("pair: {}\n", header(pair));
    let _ = writeln!(text, "c1² = {}   c2 = {}   χ(D) = {}", n.c1_sq, n.c2, n.chi_d);
    let _ = writeln!(
        text,
        "BMY: {} ≤ {}  {}{}",
        b.lhs,
        b.rhs,
        if b.holds { "holds" } else { "FAILS" },
        if b.equality { " (equality)" } else { "" }
    );
    let _ = writeln!(text, "limit form: {} ≥ {}  {}", l.lhs, l.rhs, if l.holds { "holds" } else { "fails" });
    let (table, table_text) = edge_table(pair, &default_alpha_grid())?;
    text.push_str(&table_text);
    let json = json!({
        "command": "bmy",
        "pair": pair.name,
        "log_chern": value(&n),
        "bmy": value(&b),
        "bmy_limit": value(&l),
        "edge_table": table,
    });
    Ok(Report { json, text })
}

fn edge_table(pair: &SurfacePair, alphas: &[Rational]) -> Result<(Value, String), ChernError> {
    let mut rows = Vec::new();
    let mut text = String::from("α        χ_α        σ_α        𝓛_α²  (= 2χ_α + 3σ_α)\n");
    let mut conjectural = false;
    for a in alphas {
        let e = edge_invariants(pair, a)?;
        conjectural |= e.conjectural;
        let _ = writeln!(text, "{:<8} {:<10} {:<10} {}", e.alpha, e.chi_alpha, e.sigma_alpha, e.l_alpha_sq);
        rows.push(value(&e));
    }
    if conjectural {
        text.push_str("note: D has several components; the χ_α, σ_α formulas are conjectural there\n");
    }
    Ok((Value::Array(rows), text))
}

pub fn edge_report(pair: &SurfacePair, alphas: &[Rational]) -> Result<Report, ChernError> {
    let (table, body) = edge_table(pair, alphas)?;
    let text = format!("pair: {}\n{body}", header(pair));
    Ok(Report { json: json!({ "command": "edge-invariants", "pair": pair.name, "edge_table": table }), text })
}

pub fn reider_report(pair: &SurfacePair, n_max: u32) -> Result<Report, ReiderError> {
    let r = reider_search(pair, n_max)?;
    let mut text = format!("pair: {}\n", header(pair));
    let _ = writeln!(text, "least n = {}  (α_n = {})", r.n, r.alpha_n);
    let _ = writeln!(text, "adjoint K + (n−2)𝓛 = {}  square {}", r.adjoint_class, r.adjoint_square);
    let _ = writeln!(text, "obstruction classes: {}", list(r.obstruction_curves.iter().map(|c| c.curve.class.clone())));
    for x in &r.rejected {
        let _ = writeln!(text, "rejected {}: {}", x.candidate.curve.class, x.reason);
    }
    let _ = writeln!(text, "base-point free: {}", r.base_point_free);
    Ok(Report { json: json!({ "command": "reider", "pair": pair.name, "result": value(&r) }), text })
}

pub fn cone_report(r: &ConeSolveResult, gauss_bonnet: &[GaussBonnet]) -> Report {
    let mut text = String::new();
    let _ = writeln!(text, "α = {}  R = {}  grid = {}  Newton iterations = {}", r.alpha, r.radius, r.grid_n, r.newton_iterations);
    let _ = writeln!(text, "oracle sup error:      {:.3e}", r.oracle_sup_error);
    let _ = writeln!(text, "curvature residual:    {:.3e}  (ρ ≥ {})", r.curvature_residual, r.residual_floor);
    let _ = writeln!(
        text,
        "cone angle:            {:.10}  (2π(1−α) = {:.10})",
        r.cone_angle_estimate,
        2.0 * std::f64::consts::PI * (1.0 - r.alpha)
    );
    let _ = writeln!(text, "quasi-isometry band:   [{:.6}, {:.6}]", r.quasi_isometry_band.0, r.quasi_isometry_band.1);
    for g in gauss_bonnet {
        let _ = writeln!(
            text,
            "Gauss–Bonnet ε = {:.1e}: defect {:.3e}, inner turning {:.10}",
            g.epsilon, g.defect, g.inner_turning
        );
    }
    let json = json!({
        "command": "cone-solve",
        "alpha": r.alpha,
        "radius": r.radius,
        "grid_n": r.grid_n,
        "newton_iterations": r.newton_iterations,
        "oracle_sup_error": r.oracle_sup_error,
        "curvature_residual": r.curvature_residual,
        "residual_floor": r.residual_floor,
        "cone_angle_estimate": r.cone_angle_estimate,
        "quasi_isometry_band": [r.quasi_isometry_band.0, r.quasi_isometry_band.1],
        "phi_center": r.phi_center,
        "gauss_bonnet": value(&gauss_bonnet),
    });
    Report { json, text }
}

pub fn lelong_report(e: &LelongEstimate) -> Report {
    let mut text = String::from("r            ν(r)\n");
    for (r, v) in e.radii.iter().zip(&e.values) {
        let _ = writeln!(text, "{r:<12.4e} {v:.10e}");
    }
    let _ = writeln!(text, "fitted exponent {:.6}  (expected {:.6})", e.fitted_exponent, e.expected_exponent);
    Report { json: json!({ "command": "lelong", "estimate": value(e) }), text }
}

pub fn lelong_csv(e: &LelongEstimate) -> String {
    let mut s = String::from("r,nu\n");
    for (r, v) in e.radii.iter().zip(&e.values) {
        let _ = writeln!(s, "{r:.12e},{v:.15e}");
    }
    s
}
