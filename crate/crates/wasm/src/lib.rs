//! Three checker operations exposed to the browser. Each takes a fixture as
//! JSON text and returns a JSON report.

use semicoarse::corpus::{parse_fixture, DEFAULT_BOUND};
use semicoarse::io::verdict_json;
use semicoarse::splitting::well_split;
use semicoarse::strings::string_equiv;
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

fn report(r: semicoarse::Result<Value>) -> String {
    match r {
        Ok(v) => v.to_string(),
        Err(e) => json!({"error": e.to_string()}).to_string(),
    }
}

pub fn well_split_report(fixture: &str) -> String {
    report((|| {
        let fx = parse_fixture(fixture)?;
        let r = well_split(fx.finite()?, &fx.finite_cover()?);
        let name = |v: usize| fx.finite().map(|f| f.label(v).to_string()).unwrap_or_default();
        let failures: Vec<Value> = r
            .failures
            .iter()
            .map(|f| {
                json!({
                    "condition": f.condition,
                    "triple": [name(f.triple.0), name(f.triple.1), name(f.triple.2)],
                    "witness": f.witness.iter().map(|&v| name(v)).collect::<Vec<_>>(),
                })
            })
            .collect();
        Ok(json!({"well_split": r.verdict, "failures": failures}))
    })())
}

pub fn string_equal_report(fixture: &str, bound: usize) -> String {
    report((|| {
        let fx = parse_fixture(fixture)?;
        let v = string_equiv(fx.string(0)?, fx.string(1)?, bound)?;
        Ok(verdict_json(&fx.space, &v))
    })())
}

pub fn loop_classes_report(fixture: &str, length_cap: usize) -> String {
    report((|| {
        let fx = parse_fixture(fixture)?;
        let base = fx.basepoint.ok_or(semicoarse::Error::Validation("no basepoint".into()))?;
        let c = semicoarse::pi1::pi1_classes(&fx.space, base, length_cap)?;
        let reps: Vec<&[i64]> = c.classes.iter().map(|k| k.representative.as_slice()).collect();
        Ok(json!({"classes": c.class_count(), "loops": c.loop_count, "representatives": reps}))
    })())
}

#[wasm_bindgen]
pub fn wellsplit(fixture: &str) -> String {
    well_split_report(fixture)
}

#[wasm_bindgen]
pub fn string_equal(fixture: &str) -> String {
    string_equal_report(fixture, DEFAULT_BOUND)
}

#[wasm_bindgen]
pub fn pi1(fixture: &str, length_cap: usize) -> String {
    loop_classes_report(fixture, length_cap)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn corpus(name: &str) -> String {
        std::fs::read_to_string(format!("{}/../../corpus/{name}", env!("CARGO_MANIFEST_DIR"))).unwrap()
    }

    #[test]
    fn reports_match_the_corpus() {
        let v: Value = serde_json::from_str(&well_split_report(&corpus("five_vertex_nonexample.json"))).unwrap();
        assert_eq!(v["well_split"], false);
        let v: Value = serde_json::from_str(&string_equal_report(&corpus("c4_merge_pair.json"), 64)).unwrap();
        assert_eq!(v["verdict"], "PROVED");
        let v: Value = serde_json::from_str(&loop_classes_report(&corpus("c4_pi1.json"), 8)).unwrap();
        assert_eq!(v["classes"], 3);
    }

    #[test]
    fn bad_input_is_reported() {
        let v: Value = serde_json::from_str(&wellsplit("{")).unwrap();
        assert!(v["error"].as_str().unwrap().contains("line 1"));
    }
}
