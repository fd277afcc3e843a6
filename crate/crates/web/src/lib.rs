//! Browser bindings: fd profiles, condition checks and resolutions for an
//! algebra given as text.  Every export returns a JSON string.

use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

use artinalg::conditions::{check_G, check_ln, Context, Side};
use artinalg::format::parse_algebra;
use artinalg::homology::{injective_terms, ProjResolution};
use artinalg::module::StandardKind;
use artinalg::{fixtures, Module, PathAlgebra, Result};

const CUTOFF: usize = 12;

fn labels(alg: &PathAlgebra, vs: &[usize]) -> Vec<String> {
    vs.iter()
        .map(|&v| alg.quiver().vertex_label(v).to_string())
        .collect()
}

pub fn profile_json(text: &str, depth: usize) -> Result<Value> {
    let alg = parse_algebra(text)?;
    let mut ctx = Context::new(&alg, CUTOFF, 0);
    let sides: Vec<Value> = [Side::Algebra, Side::Opposite]
        .into_iter()
        .map(|side| {
            let a = side.apply(&alg);
            let p = ctx.profile(side, depth).clone();
            json!({
                "side": side.to_string(),
                "fd": p.entries.iter().take(depth).map(|v| v.to_string()).collect::<Vec<_>>(),
                "terms": p.terms.iter().take(depth).map(|t| labels(&a, t)).collect::<Vec<_>>(),
                "terminated": p.terminated,
            })
        })
        .collect();
    Ok(json!({ "profiles": sides }))
}

/// `cond` is `G` (with `n`, `k`) or `ln` (with `l`, `n`).
pub fn check_json(text: &str, cond: &str, n: usize, k: usize, l: usize) -> Result<Value> {
    let alg = parse_algebra(text)?;
    let mut ctx = Context::new(&alg, CUTOFF, 0);
    let mut out = Vec::new();
    for side in [Side::Algebra, Side::Opposite] {
        let r = match cond {
            "G" => check_G(&mut ctx, n, k, side),
            "ln" => check_ln(&mut ctx, l, n, side, false)?,
            other => {
                return Err(artinalg::Error::Usage(format!(
                    "unknown condition `{other}`"
                )))
            }
        };
        out.push(r.to_json());
    }
    Ok(Value::Array(out))
}

/// Resolutions of the simple, projective or injective module at a vertex.
pub fn resolve_json(text: &str, kind: &str, vertex: &str, len: usize) -> Result<Value> {
    let alg = parse_algebra(text)?;
    let kind = match kind {
        "simple" => StandardKind::Simple,
        "projective" => StandardKind::Projective,
        "injective" => StandardKind::Injective,
        other => {
            return Err(artinalg::Error::Usage(format!(
                "unknown module kind `{other}`"
            )))
        }
    };
    let m = Module::standard(&alg, kind, alg.quiver().vertex_index(vertex)?)?;
    let mut r = ProjResolution::with_length(&m, len);
    let proj: Vec<Vec<String>> = (0..=len)
        .map(|k| r.term(k))
        .take_while(|t| !t.is_empty())
        .map(|t| labels(&alg, &t))
        .collect();
    let inj: Vec<Vec<String>> = injective_terms(&m, len)
        .iter()
        .map(|t| labels(&alg, t))
        .collect();
    Ok(json!({ "dims": m.dims(), "projective": proj, "injective": inj }))
}

fn export(r: Result<Value>) -> std::result::Result<String, JsValue> {
    r.map(|v| v.to_string())
        .map_err(|e| JsValue::from_str(&e.to_string()))
}

#[wasm_bindgen]
pub fn fixture(name: &str) -> String {
    fixtures::text(name).unwrap_or("").to_string()
}

#[wasm_bindgen]
pub fn fixture_names() -> String {
    json!(fixtures::NAMES).to_string()
}

#[wasm_bindgen]
pub fn profile(text: &str, depth: usize) -> std::result::Result<String, JsValue> {
    export(profile_json(text, depth))
}

#[wasm_bindgen]
pub fn check(
    text: &str,
    cond: &str,
    n: usize,
    k: usize,
    l: usize,
) -> std::result::Result<String, JsValue> {
    export(check_json(text, cond, n, k, l))
}

#[wasm_bindgen]
pub fn resolve(
    text: &str,
    kind: &str,
    vertex: &str,
    len: usize,
) -> std::result::Result<String, JsValue> {
    export(resolve_json(text, kind, vertex, len))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cross_profile() {
        let v = profile_json(fixtures::CROSS, 3).unwrap();
        for side in v["profiles"].as_array().unwrap() {
            assert_eq!(side["fd"], json!(["1", "1", "2"]));
        }
    }

    #[test]
    fn zigzag_check_and_errors() {
        let v = check_json(fixtures::ZIGZAG, "ln", 2, 0, 2).unwrap();
        assert_ne!(v[0]["verdict"], v[1]["verdict"]);
        assert!(check_json(fixtures::ZIGZAG, "??", 1, 1, 1).is_err());
        assert!(profile_json("field 2\nvertex 1\n", 2).is_err());
    }

    #[test]
    fn resolution_of_a3_simple() {
        let v = resolve_json(fixtures::A3, "simple", "1", 3).unwrap();
        assert_eq!(v["projective"], json!([["1"], ["2"]]));
        assert_eq!(v["injective"], json!([["1"]]));
    }
}
