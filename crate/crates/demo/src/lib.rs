//! Three `combinach` operations for the browser page in `www/`. Inputs and
//! outputs are JSON strings so the page needs no bindings beyond these.

use combinach::norms::ext_norm;
use combinach::rational;
use combinach::schreier::schreier_contains;
use combinach::submeasures::{tail_profile as profile, SubmeasureSpec, WeightSeq};
use combinach::{Family, FinVec, FiniteSet, Ordinal, SetGenerator};
use serde_json::json;
use wasm_bindgen::prelude::*;

fn parse<T: serde::de::DeserializeOwned>(what: &str, text: &str) -> Result<T, String> {
    serde_json::from_str(text).map_err(|e| format!("{what}: {e}"))
}

pub fn norm_json(family: &str, vector: &str) -> Result<String, String> {
    let f: Family = parse("family", family)?;
    f.validate().map_err(|e| e.to_string())?;
    let x: FinVec = parse("vector", vector)?;
    let v = ext_norm(&f, &x);
    Ok(json!({ "value": rational::format(&v), "decimal": rational::to_decimal(&v, 6) }).to_string())
}

pub const DEMO_MAX_HORIZON: u64 = 1 << 12;

pub fn tail_profile_json(family: &str, tau: &str, generator: &str, horizon: u64) -> Result<String, String> {
    if horizon > DEMO_MAX_HORIZON {
        return Err(format!("horizon above {DEMO_MAX_HORIZON}"));
    }
    let spec = SubmeasureSpec::new(parse("family", family)?, parse::<WeightSeq>("tau", tau)?);
    spec.validate().map_err(|e| e.to_string())?;
    let g: SetGenerator = parse("generator", generator)?;
    g.validate().map_err(|e| e.to_string())?;
    let cutoffs: Vec<u64> = (0..).map(|j| 1u64 << j).take_while(|&c| c <= horizon).collect();
    let p = profile(&spec, &g, &cutoffs, horizon).map_err(|e| e.to_string())?;
    let rows: Vec<_> = p
        .rows
        .iter()
        .map(|r| json!({ "cutoff": r.cutoff, "value": rational::format(&r.value), "decimal": rational::to_decimal(&r.value, 6) }))
        .collect();
    Ok(json!({ "horizon": horizon, "rows": rows }).to_string())
}

pub fn schreier_check_json(alpha: &str, set: &str) -> Result<bool, String> {
    let a = Ordinal::parse(alpha).map_err(|e| e.to_string())?;
    let s: FiniteSet = parse("set", set)?;
    schreier_contains(&a, &s).map_err(|e| e.to_string())
}

/// `{"value": "p/q", "decimal": "…"}`.
#[wasm_bindgen]
pub fn norm(family: &str, vector: &str) -> Result<String, JsValue> {
    norm_json(family, vector).map_err(|e| JsValue::from_str(&e))
}

/// Window values at the cutoffs `1, 2, 4, …` up to the horizon.
#[wasm_bindgen]
pub fn tail_profile(family: &str, tau: &str, generator: &str, horizon: u64) -> Result<String, JsValue> {
    tail_profile_json(family, tau, generator, horizon).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn schreier_check(alpha: &str, set: &str) -> Result<bool, JsValue> {
    schreier_check_json(alpha, set).map_err(|e| JsValue::from_str(&e))
}
