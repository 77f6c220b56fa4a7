//! Browser bindings for the demo page in `www/`.
//!
//! Each exported function has a plain Rust twin returning `Result<_, String>`
//! so the logic is testable off the browser.

use harmonic_classes::classes::{is_member_negative_class, is_member_sufficient, weight_pair};
use harmonic_classes::io::{parse_coefficients, CoefficientFile};
use harmonic_classes::series::{EvalPoint, PreparedFunctional};
use harmonic_classes::ClassParams;
use wasm_bindgen::prelude::*;

/// Pixels outside this radius are left blank.
pub const MAX_RADIUS: f64 = 0.995;

fn params(beta: f64, lambda: f64, k: f64, nu: f64) -> Result<ClassParams, String> {
    ClassParams::new(beta, lambda, k, nu).map_err(|e| e.to_string())
}

/// Row-major `size × size` image of `Re E` over the square `[-1, 1]²`, top
/// row first. Pixels outside the disk (or at an undefined origin) are NaN.
pub fn heat_map(coefficients: &str, p: &ClassParams, size: u32) -> Result<Vec<f64>, String> {
    if !(2..=1024).contains(&size) {
        return Err(format!("size must lie in [2, 1024], got {size}"));
    }
    let f = parse_coefficients(coefficients).map_err(|e| e.to_string())?.to_harmonic();
    let e = PreparedFunctional::new(&f, p).map_err(|e| e.to_string())?;
    let s = f64::from(size);
    let mut out = Vec::with_capacity((size * size) as usize);
    for i in 0..size {
        let y = 1.0 - (2.0 * f64::from(i) + 1.0) / s;
        for j in 0..size {
            let x = -1.0 + (2.0 * f64::from(j) + 1.0) / s;
            let v = if x.hypot(y) < MAX_RADIUS {
                EvalPoint::from_polar(x.hypot(y), y.atan2(x))
                    .and_then(|z| e.eval(&z))
                    .map_or(f64::NAN, |w| w.re)
            } else {
                f64::NAN
            };
            out.push(v);
        }
    }
    Ok(out)
}

/// `{"n": [...], "phi": [...], "psi": [...]}` for `n = 1..=max_n`; `phi` is
/// `null` at `n = 1`.
pub fn weights_json(p: &ClassParams, max_n: u32) -> Result<String, String> {
    if !(1..=200).contains(&max_n) {
        return Err(format!("max_n must lie in [1, 200], got {max_n}"));
    }
    let mut ns = Vec::new();
    let mut phi = Vec::new();
    let mut psi = Vec::new();
    for n in 1..=max_n {
        let w = weight_pair(n, p).map_err(|e| e.to_string())?;
        ns.push(n);
        phi.push(w.phi);
        psi.push(w.psi_signed);
    }
    Ok(serde_json::json!({ "n": ns, "phi": phi, "psi": psi }).to_string())
}

/// Membership report as JSON, with the file kind added.
pub fn check_json(coefficients: &str, p: &ClassParams) -> Result<String, String> {
    let file = parse_coefficients(coefficients).map_err(|e| e.to_string())?;
    let report = match &file {
        CoefficientFile::NegativeForm(f) => is_member_negative_class(f, p),
        CoefficientFile::General(f) => is_member_sufficient(f, p),
    }
    .map_err(|e| e.to_string())?;
    let mut v = serde_json::to_value(&report).map_err(|e| e.to_string())?;
    v["kind"] = file.kind().into();
    Ok(v.to_string())
}

#[wasm_bindgen]
pub fn re_e_heat_map(
    coefficients: &str,
    beta: f64,
    lambda: f64,
    k: f64,
    nu: f64,
    size: u32,
) -> Result<Vec<f64>, JsError> {
    let p = params(beta, lambda, k, nu).map_err(|e| JsError::new(&e))?;
    heat_map(coefficients, &p, size).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn weight_curves(lambda: f64, k: f64, nu: f64, max_n: u32) -> Result<String, JsError> {
    let p = params(0.0, lambda, k, nu).map_err(|e| JsError::new(&e))?;
    weights_json(&p, max_n).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn check_membership(coefficients: &str, beta: f64, lambda: f64, k: f64, nu: f64) -> Result<String, JsError> {
    let p = params(beta, lambda, k, nu).map_err(|e| JsError::new(&e))?;
    check_json(coefficients, &p).map_err(|e| JsError::new(&e))
}
