//! Three crheat operations exported to JavaScript: the Heisenberg constant,
//! the normal-coordinate frame as text, and the Hörmander form bound.
//! Everything runs single-threaded (the `parallel` feature is off).

use crheat::fsnormal::frame_expansion;
use crheat::heat::gaveau::gaveau_c0;
use crheat::heat::hormander::{default_eps_grid, hormander_inf};
use crheat::models::{ModelKind, ModelSpec};
use wasm_bindgen::prelude::*;

fn spec(model: &str, n: usize) -> Result<ModelSpec, String> {
    let kind: ModelKind = model.parse().map_err(|e: crheat::Error| e.to_string())?;
    ModelSpec::new(kind, n).map_err(|e| e.to_string())
}

/// `c₀(n)`, the leading diagonal coefficient on the Heisenberg group.
pub fn c0(n: usize) -> Result<f64, String> {
    gaveau_c0(n).map_err(|e| e.to_string())
}

/// The frame fields truncated at `order`, one `d<i>: coeff * monomial` line
/// per term.
pub fn frame_text(model: &str, n: usize, order: usize) -> Result<String, String> {
    if order > 6 || n > 3 {
        return Err("keep order ≤ 6 and n ≤ 3 in the browser".into());
    }
    frame_expansion(&spec(model, n)?, order).map(|f| f.to_text()).map_err(|e| e.to_string())
}

/// Grid minimum of the Hörmander form and the smallest eigenvalue, as
/// `"min eigen"`.
pub fn hormander(model: &str, n: usize, grid: usize) -> Result<String, String> {
    let r = hormander_inf(&spec(model, n)?, &default_eps_grid(), grid.min(20_000)).map_err(|e| e.to_string())?;
    Ok(format!("{} {}", r.min, r.eigen_min))
}

#[wasm_bindgen(js_name = c0)]
pub fn c0_js(n: usize) -> Result<f64, JsError> {
    c0(n).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = frameText)]
pub fn frame_text_js(model: &str, n: usize, order: usize) -> Result<String, JsError> {
    frame_text(model, n, order).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = hormander)]
pub fn hormander_js(model: &str, n: usize, grid: usize) -> Result<String, JsError> {
    hormander(model, n, grid).map_err(|e| JsError::new(&e))
}
