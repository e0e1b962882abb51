//! Browser bindings: truth-table analysis, formula hazard checks and exact
//! hazard-free KW protocols.
//!
//! Each export wraps a plain function returning JSON text so the logic can be
//! tested natively.

use hazard_kit::boolfn::TruthTable;
use hazard_kit::cli::{analyze_report, kw_report};
use hazard_kit::formula::{hazard_check, Formula};
use hazard_kit::kw::SearchConfig;
use wasm_bindgen::prelude::*;

/// Largest arity accepted from the page; keeps the UI responsive.
pub const MAX_DEMO_ARITY: usize = 6;

/// Reads `bits` (a `0`/`1` string of length `2^n`, index 0 first) or the full
/// `n=… / bits=…` table format.
pub fn parse_table(text: &str) -> Result<TruthTable, String> {
    let text = text.trim();
    let f: TruthTable = if text.contains('=') {
        text.parse()
    } else {
        let n = text.len().trailing_zeros() as usize;
        if text.is_empty() || 1 << n != text.len() {
            return Err(format!("length {} is not a power of two", text.len()));
        }
        format!("n={n}\nbits={text}").parse()
    }
    .map_err(|e: hazard_kit::Error| e.to_string())?;
    if f.arity() > MAX_DEMO_ARITY {
        return Err(format!("arity {} exceeds the demo limit of {MAX_DEMO_ARITY}", f.arity()));
    }
    Ok(f)
}

pub fn analyze_json(table: &str) -> Result<String, String> {
    let f = parse_table(table)?;
    analyze_report(&f, &SearchConfig::default()).map(|v| v.to_string()).map_err(|e| e.to_string())
}

pub fn check_json(formula: &str, arity: usize) -> Result<String, String> {
    if arity > MAX_DEMO_ARITY {
        return Err(format!("arity {arity} exceeds the demo limit of {MAX_DEMO_ARITY}"));
    }
    let phi: Formula = formula.trim().parse().map_err(|e: hazard_kit::Error| e.to_string())?;
    let report = hazard_check(&phi, arity).map_err(|e| e.to_string())?;
    serde_json::to_string(&report).map_err(|e| e.to_string())
}

pub fn kw_json(table: &str) -> Result<String, String> {
    let f = parse_table(table)?;
    let cfg = SearchConfig { build_tree: true, ..SearchConfig::default() };
    kw_report(&f, Some(&cfg)).map(|v| v.to_string()).map_err(|e| e.to_string())
}

#[wasm_bindgen]
pub fn analyze(table: &str) -> Result<String, JsError> {
    analyze_json(table).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn check(formula: &str, arity: usize) -> Result<String, JsError> {
    check_json(formula, arity).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn kw(table: &str) -> Result<String, JsError> {
    kw_json(table).map_err(|e| JsError::new(&e))
}
