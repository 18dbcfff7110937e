//! Browser bindings: dimension curves, symmetric power conductor profiles and census tables.
//!
//! Each export has a plain-Rust twin returning `Result<String, String>` so the
//! demo logic is testable off the browser.

use serde_json::json;
use wasm_bindgen::prelude::*;

use symcensus::census::{census_row, emit, Format};
use symcensus::local::parse_character;
use symcensus::modforms::{density_target, dim_cusp, dim_new, leading_density};
use symcensus::weil_deligne::{sym_conductor, WeilDeligneParam};

const MAX_LEVEL: u64 = 5000;
const MAX_SYM: u32 = 24;

/// `[{N, dim, dim_new, ratio, leading_density, target}]` for `N = 1..=n_max`.
pub fn dimension_curve_json(k: u64, n_max: u64) -> Result<String, String> {
    if n_max == 0 || n_max > MAX_LEVEL {
        return Err(format!("level range must be 1..={MAX_LEVEL}"));
    }
    let target = density_target(k);
    let mut rows = Vec::with_capacity(n_max as usize);
    for n in 1..=n_max {
        let dim = dim_cusp(k, n).map_err(|e| e.to_string())?;
        let new = dim_new(k, n).map_err(|e| e.to_string())?;
        rows.push(json!({
            "N": n,
            "dim": dim,
            "dim_new": new,
            "ratio": dim as f64 / (n * n) as f64,
            "leading_density": leading_density(k, n),
            "target": target,
        }));
    }
    Ok(serde_json::Value::Array(rows).to_string())
}

/// `c(sym^n)` against `(n+2) c(pi)` for `n = 1..=n_max`, for the supercuspidal
/// parameter induced from the character described by `eta_spec`.
pub fn conductor_profile_json(p: u64, eta_spec: &str, n_max: u32) -> Result<String, String> {
    if n_max == 0 || n_max > MAX_SYM {
        return Err(format!("n must be in 1..={MAX_SYM}"));
    }
    let eta = parse_character(p, eta_spec).map_err(|e| e.to_string())?;
    let pi = WeilDeligneParam::supercuspidal(eta).map_err(|e| e.to_string())?;
    let mut rows = Vec::new();
    for n in 1..=n_max {
        let cert = sym_conductor(&pi, n).map_err(|e| e.to_string())?;
        rows.push(json!({ "n": n, "c_sym": cert.c_sym, "bound": cert.bound, "c_pi": cert.c_pi }));
    }
    Ok(serde_json::Value::Array(rows).to_string())
}

/// Census rows as CSV, one prime at a time (no worker threads in the browser).
pub fn census_csv(k: u64, n: u32, primes: &str, i_max: u32) -> Result<String, String> {
    if i_max == 0 || i_max > 3 {
        return Err("max i must be 1..=3".into());
    }
    let mut rows = Vec::new();
    for t in primes.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        let p: u64 = t.parse().map_err(|_| format!("bad prime `{t}`"))?;
        if p > 1000 {
            return Err("primes above 1000 are too slow for the page".into());
        }
        for i in 1..=i_max {
            rows.push(census_row(k, n, p, i).map_err(|e| e.to_string())?);
        }
    }
    Ok(emit(&rows, Format::Csv))
}

#[wasm_bindgen]
pub fn dimension_curve(k: u32, n_max: u32) -> Result<String, JsError> {
    dimension_curve_json(k as u64, n_max as u64).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn conductor_profile(p: u32, eta_spec: &str, n_max: u32) -> Result<String, JsError> {
    conductor_profile_json(p as u64, eta_spec, n_max).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn census_table(k: u32, n: u32, primes: &str, i_max: u32) -> Result<String, JsError> {
    census_csv(k as u64, n, primes, i_max).map_err(|e| JsError::new(&e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dimension_curve_rows() {
        let v: serde_json::Value = serde_json::from_str(&dimension_curve_json(12, 20).unwrap()).unwrap();
        assert_eq!(v.as_array().unwrap().len(), 20);
        assert_eq!(v[0]["dim"], 1);
        assert!(dimension_curve_json(3, 10).is_err());
        assert!(dimension_curve_json(4, 0).is_err());
    }

    #[test]
    fn conductor_profile_respects_bound() {
        let v: serde_json::Value =
            serde_json::from_str(&conductor_profile_json(5, "field=ram;level=2;images=3/20", 8).unwrap()).unwrap();
        for row in v.as_array().unwrap() {
            assert!(row["c_sym"].as_u64().unwrap() <= row["bound"].as_u64().unwrap());
        }
        assert!(conductor_profile_json(5, "field=base", 4).is_err());
    }

    #[test]
    fn census_rows() {
        let csv = census_csv(12, 3, "13, 31", 1).unwrap();
        assert_eq!(csv.lines().count(), 3);
        assert!(census_csv(12, 3, "2", 1).is_err());
        assert!(census_csv(12, 3, "x", 1).is_err());
    }
}
