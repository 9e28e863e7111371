//! WebAssembly bindings for the browser demo in `www/`.
//!
//! Barcodes are passed as CSV text (`birth,death` per line), exponents as
//! strings (`"2"`, `"inf"`) and contours as JSON (`{"type":"standard"}` or a
//! Gaussian mixture). Results come back as JSON strings.

use serde_json::{json, Value};
use wasm_bindgen::prelude::*;
use wsrank::distance::MetricChoice;
use wsrank::stable_rank::{interleaving_fast, stable_rank};
use wsrank::{Barcode, Contour, Exponent};

fn parse_barcode(csv: &str) -> Result<Barcode, String> {
    Barcode::from_csv_str(csv).map_err(|e| e.to_string())
}

fn parse_metric(p: &str, q: &str, contour: &str) -> Result<MetricChoice, String> {
    let p: Exponent = p.parse().map_err(|e: wsrank::Error| format!("p: {e}"))?;
    let q: Exponent = q.parse().map_err(|e: wsrank::Error| format!("q: {e}"))?;
    let contour = if contour.trim().is_empty() {
        Contour::Standard
    } else {
        Contour::from_json(contour).map_err(|e| format!("contour: {e}"))?
    };
    MetricChoice::new(p, q, contour).map_err(|e| e.to_string())
}

fn real(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else {
        json!("inf")
    }
}

/// Stable rank step function: `{"breakpoints": [...], "values": [...]}`.
pub fn stable_rank_json(barcode: &str, p: &str, q: &str, contour: &str) -> Result<String, String> {
    let x = parse_barcode(barcode)?;
    let m = parse_metric(p, q, contour)?;
    let f = stable_rank(&x, &m);
    Ok(json!({ "breakpoints": f.breakpoints(), "values": f.values(), "limit": f.limit() }).to_string())
}

/// Contour density sampled on `samples` points of `[0, t_max]` and the
/// barcode sent through the contour's lifetime map.
pub fn contour_view_json(barcode: &str, contour: &str, t_max: f64, samples: usize) -> Result<String, String> {
    let x = parse_barcode(barcode)?;
    let c = parse_metric("1", "1", contour)?.contour;
    let n = samples.max(2);
    let density: Vec<[f64; 2]> = (0..n)
        .map(|i| {
            let t = t_max * i as f64 / (n - 1) as f64;
            let d = match &c {
                Contour::Standard => 1.0,
                Contour::Density(g) => g.density(t),
            };
            [t, d]
        })
        .collect();
    let moved: Vec<Value> =
        c.transform_barcode(&x).iter().map(|b| json!([real(b.birth()), real(b.death())])).collect();
    let lifetimes: Vec<Value> = c.lifetimes(&x).into_iter().map(real).collect();
    Ok(json!({ "density": density, "transformed": moved, "lifetimes": lifetimes }).to_string())
}

/// Interleaving distance between the stable ranks of two barcodes.
pub fn interleaving_json(x: &str, y: &str, p: &str, q: &str, contour: &str) -> Result<String, String> {
    let x = parse_barcode(x)?;
    let y = parse_barcode(y)?;
    let m = parse_metric(p, q, contour)?;
    let fx = stable_rank(&x, &m);
    let fy = stable_rank(&y, &m);
    let d = interleaving_fast(&x, &y, &m);
    Ok(json!({
        "distance": real(d),
        "x": { "breakpoints": fx.breakpoints(), "values": fx.values() },
        "y": { "breakpoints": fy.breakpoints(), "values": fy.values() },
    })
    .to_string())
}

#[wasm_bindgen(js_name = stableRank)]
pub fn stable_rank_js(barcode: &str, p: &str, q: &str, contour: &str) -> Result<String, JsError> {
    stable_rank_json(barcode, p, q, contour).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = contourView)]
pub fn contour_view_js(barcode: &str, contour: &str, t_max: f64, samples: usize) -> Result<String, JsError> {
    contour_view_json(barcode, contour, t_max, samples).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = interleaving)]
pub fn interleaving_js(x: &str, y: &str, p: &str, q: &str, contour: &str) -> Result<String, JsError> {
    interleaving_json(x, y, p, q, contour).map_err(|e| JsError::new(&e))
}
