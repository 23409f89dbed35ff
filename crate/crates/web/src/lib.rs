//! WebAssembly bindings for the browser demo in `www/`.
//!
//! Every export takes the equation as text and returns JSON (or a flat
//! array for the phase plot); errors surface as JavaScript exceptions.

use abel_air::parse::parse_ode;
use abel_air::solve::{pull_back, select_and_verify, solve_canonical, ImplicitSolution, VerifyOptions};
use abel_air::{c64, classify, re, AbelError, CanonicalClass, Classification, C64};
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

fn cplx(z: C64) -> Value {
    json!({ "re": z.re, "im": z.im })
}

fn class_json(c: &Classification) -> Value {
    let params: serde_json::Map<String, Value> =
        c.class.params().into_iter().map(|(n, v)| (n.to_string(), cplx(v))).collect();
    json!({ "class": c.class.tag(), "parameters": params, "transform_chain": c.chain.describe() })
}

fn solution_for(expr: &str) -> Result<(Classification, ImplicitSolution, abel_air::RationalAir), AbelError> {
    let eq = parse_ode(expr)?;
    let c = classify(&eq)?;
    if c.class == CanonicalClass::DegenerateLinear {
        return Err(AbelError::UnsupportedClass("DegenerateLinear is solved by quadrature".into()));
    }
    let sol = pull_back(&solve_canonical(&c.class)?, &c.chain);
    Ok((c, sol, eq))
}

pub fn classify_json(expr: &str) -> Result<String, AbelError> {
    let eq = parse_ode(expr)?;
    let c = classify(&eq)?;
    let mut doc = class_json(&c);
    doc["equation"] = json!(eq.to_expr_string());
    Ok(doc.to_string())
}

pub fn solve_json(expr: &str, tol: f64) -> Result<String, AbelError> {
    let (c, sol, eq) = solution_for(expr)?;
    let v = select_and_verify(&eq, &sol, &VerifyOptions::default())?;
    let mut doc = class_json(&c);
    doc["equation"] = json!(eq.to_expr_string());
    doc["solution"] = json!(sol.description);
    doc["verification"] = json!({
        "x0": v.x0,
        "y0": cplx(v.y0),
        "x1": v.x1,
        "drift": v.drift,
        "tolerance": tol,
        "pass": v.drift < tol,
        "path": v.trajectory.points.iter().map(|(x, y)| [*x, y.re, y.im]).collect::<Vec<_>>(),
    });
    Ok(doc.to_string())
}

/// Argument of the level function on a `w × h` grid of real `(x, y)`,
/// row-major from `(x_min, y_max)`; `NaN` where it is undefined.
pub fn level_phase_grid(
    expr: &str,
    x_range: (f64, f64),
    y_range: (f64, f64),
    w: usize,
    h: usize,
) -> Result<Vec<f64>, AbelError> {
    if w < 2 || h < 2 {
        return Err(AbelError::InvalidArgument("grid needs at least 2×2 points".into()));
    }
    let (_, sol, _) = solution_for(expr)?;
    let mut out = Vec::with_capacity(w * h);
    for j in 0..h {
        let y = y_range.1 - (y_range.1 - y_range.0) * j as f64 / (h - 1) as f64;
        for i in 0..w {
            let x = x_range.0 + (x_range.1 - x_range.0) * i as f64 / (w - 1) as f64;
            // a hair off the real axis keeps principal branches continuous
            out.push(sol.level(re(x), c64(y, 1e-9)).map_or(f64::NAN, |l| l.arg()));
        }
    }
    Ok(out)
}

fn js_err(e: AbelError) -> JsError {
    JsError::new(&format!("[{}] {e}", e.code()))
}

#[wasm_bindgen]
pub fn classify_equation(expr: &str) -> Result<String, JsError> {
    classify_json(expr).map_err(js_err)
}

#[wasm_bindgen]
pub fn solve_equation(expr: &str, tol: f64) -> Result<String, JsError> {
    solve_json(expr, tol).map_err(js_err)
}

#[wasm_bindgen]
#[allow(clippy::too_many_arguments)]
pub fn level_phase(
    expr: &str,
    x_min: f64,
    x_max: f64,
    y_min: f64,
    y_max: f64,
    w: usize,
    h: usize,
) -> Result<Vec<f64>, JsError> {
    level_phase_grid(expr, (x_min, x_max), (y_min, y_max), w, h).map_err(js_err)
}
