#![allow(dead_code)]

use std::sync::OnceLock;

use serde_json::Value;
use weber_core::Complex;

/// Reference values computed at 50 significant digits (see `data/generate_golden.py`).
pub fn golden() -> &'static Value {
    static DATA: OnceLock<Value> = OnceLock::new();
    DATA.get_or_init(|| {
        let path = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/data/golden.json");
        serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
    })
}

pub fn pair(v: &Value) -> Complex {
    Complex::new(v[0].as_f64().unwrap(), v[1].as_f64().unwrap())
}

/// Smooth bump supported on `(lo, hi)`.
pub fn bump(x: f64, lo: f64, hi: f64) -> f64 {
    if x <= lo || x >= hi {
        return 0.0;
    }
    let u = (2.0 * x - lo - hi) / (hi - lo);
    (-1.0 / (1.0 - u * u)).exp()
}
