//! wasm-bindgen exports for `www/index.html`. Each returns a JSON string;
//! failures come back as `{"error": {...}}`.

pub mod api;

use wasm_bindgen::prelude::*;

#[wasm_bindgen]
pub fn scan(g_c: f64, beta: f64, gamma1: f64, gamma2: f64, start: f64, end: f64, n: usize) -> String {
    api::to_json_string(api::scan(g_c, beta, gamma1, gamma2, start, end, n))
}

#[wasm_bindgen]
#[allow(clippy::too_many_arguments)]
pub fn sheets(g_c: f64, gamma1: f64, gamma2: f64, a0: f64, a1: f64, b0: f64, b1: f64, n1: usize, n2: usize) -> String {
    api::to_json_string(api::sheets(g_c, gamma1, gamma2, (a0, a1), (b0, b1), n1, n2))
}

#[wasm_bindgen]
pub fn encircle(g_c: f64, gamma1: f64, gamma2: f64, cx: f64, cy: f64, radius: f64) -> String {
    api::to_json_string(api::encircle(g_c, gamma1, gamma2, (cx, cy), radius))
}
