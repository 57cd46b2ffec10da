//! WebAssembly bindings for the demo page in `www/`.
//!
//! Every export returns a JSON string; the `*_json` functions are the
//! native-callable versions used by the tests.

use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

use qgverify::homotopy::{eval_rescaled, t_grid, verify_lemma2, Family};
use qgverify::kring::{koszul_matrix, ktheory_fo_truncated, smith_normal_form};
use qgverify::{Error, HalfInt, QParam};

/// Largest spin the decay plot accepts; beyond it the page stops being
/// interactive.
pub const MAX_DECAY_L: i64 = 80;
/// Largest Koszul truncation shown as a matrix.
pub const MAX_KOSZUL_D: usize = 40;

fn strict(q: f64) -> Result<QParam, Error> {
    QParam::strict(q)
}

/// `t ↦ A_k(t, l, i)` and `t ↦ C_k(t, l, i)` on `points` grid points.
pub fn coefficient_curve_json(q: f64, k: i64, l: i64, i: i64, points: usize) -> Result<Value, Error> {
    let q = strict(q)?;
    let ts = t_grid(points)?;
    let (lh, ih) = (HalfInt::from_int(l), HalfInt::from_int(i));
    let curve = |fam| ts.iter().map(|&t| eval_rescaled(fam, k, q, t, lh, ih)).collect::<Result<Vec<f64>, _>>();
    Ok(json!({ "t": ts, "A": curve(Family::A)?, "C": curve(Family::C)? }))
}

/// Sup-over-`(t, i)` difference sequences for `l = 1..=lmax`.
pub fn decay_curves_json(q: f64, lmax: i64, points: usize) -> Result<Value, Error> {
    if !(2..=MAX_DECAY_L).contains(&lmax) {
        return Err(Error::Usage(format!("lmax must lie in 2..={MAX_DECAY_L}, got {lmax}")));
    }
    let ls: Vec<i64> = (1..=lmax).collect();
    let table = verify_lemma2(strict(q)?, &ls, points)?;
    let families: Vec<Value> = table
        .families
        .iter()
        .map(|f| json!({ "name": f.name, "gated": f.gated, "sups": f.sups, "rate": f.rate() }))
        .collect();
    Ok(json!({ "l": ls, "families": families }))
}

/// The matrix of `n − t`, its Smith normal form and the K-groups.
pub fn koszul_json(n: i64, d: usize) -> Result<Value, Error> {
    if !(1..=MAX_KOSZUL_D).contains(&d) {
        return Err(Error::Usage(format!("D must lie in 1..={MAX_KOSZUL_D}, got {d}")));
    }
    let (groups, report) = ktheory_fo_truncated(n, d)?;
    let m = koszul_matrix(&n.into(), d);
    let rows = |a: &qgverify::kring::IntMatrix| -> Vec<Vec<String>> {
        (0..a.rows()).map(|r| (0..a.cols()).map(|c| a[(r, c)].to_string()).collect()).collect()
    };
    let snf = smith_normal_form(&m);
    let checks: Vec<Value> = report.checks.iter().map(|c| json!({ "name": c.name, "pass": c.pass })).collect();
    Ok(json!({
        "matrix": rows(&m),
        "snf": rows(&snf.d),
        "invariant_factors": snf.invariant_factors().iter().map(ToString::to_string).collect::<Vec<_>>(),
        "k0": groups.k0.to_string(),
        "k1": groups.k1.to_string(),
        "checks": checks,
    }))
}

fn js(r: Result<Value, Error>) -> Result<String, JsError> {
    r.map(|v| v.to_string()).map_err(|e| JsError::new(&e.to_string()))
}

#[wasm_bindgen(js_name = coefficientCurve)]
pub fn coefficient_curve(q: f64, k: i32, l: i32, i: i32, points: usize) -> Result<String, JsError> {
    js(coefficient_curve_json(q, k.into(), l.into(), i.into(), points))
}

#[wasm_bindgen(js_name = decayCurves)]
pub fn decay_curves(q: f64, lmax: i32, points: usize) -> Result<String, JsError> {
    js(decay_curves_json(q, lmax.into(), points))
}

#[wasm_bindgen(js_name = koszul)]
pub fn koszul(n: i32, d: usize) -> Result<String, JsError> {
    js(koszul_json(n.into(), d))
}
