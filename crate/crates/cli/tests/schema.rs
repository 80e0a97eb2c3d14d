//! Every subcommand's output validates against its published schema file.
//!
//! The validator covers the subset of JSON Schema the shipped documents use:
//! `type` (string or list), `required`, `properties`, `items`, and `enum`.

mod common;

use common::{fixture, run_json, schema};
use serde_json::Value;

fn type_name(value: &Value) -> &'static str {
    match value {
        Value::Null => "null",
        Value::Bool(_) => "boolean",
        Value::Number(n) => {
            if n.as_i64().is_some() || n.as_u64().is_some() {
                "integer"
            } else {
                "number"
            }
        }
        Value::String(_) => "string",
        Value::Array(_) => "array",
        Value::Object(_) => "object",
    }
}

fn validate(schema: &Value, value: &Value, path: &str) -> Result<(), String> {
    if let Some(ty) = schema.get("type") {
        let allowed: Vec<&str> = match ty {
            Value::String(s) => vec![s.as_str()],
            Value::Array(a) => a.iter().filter_map(Value::as_str).collect(),
            _ => return Err(format!("{path}: malformed schema type")),
        };
        let actual = type_name(value);
        let ok = allowed
            .iter()
            .any(|&a| a == actual || (a == "number" && actual == "integer"));
        if !ok {
            return Err(format!("{path}: expected {allowed:?}, got {actual}"));
        }
    }
    if let Some(options) = schema.get("enum").and_then(Value::as_array) {
        if !options.contains(value) {
            return Err(format!("{path}: {value} not in {options:?}"));
        }
    }
    if let Value::Object(fields) = value {
        if let Some(required) = schema.get("required").and_then(Value::as_array) {
            for key in required.iter().filter_map(Value::as_str) {
                if !fields.contains_key(key) {
                    return Err(format!("{path}: missing required field {key}"));
                }
            }
        }
        if let Some(properties) = schema.get("properties").and_then(Value::as_object) {
            for (key, sub) in properties {
                if let Some(v) = fields.get(key) {
                    validate(sub, v, &format!("{path}.{key}"))?;
                }
            }
        }
    }
    if let (Some(items), Value::Array(elements)) = (schema.get("items"), value) {
        for (i, v) in elements.iter().enumerate() {
            validate(items, v, &format!("{path}[{i}]"))?;
        }
    }
    Ok(())
}

fn assert_schema(schema_name: &str, output: &Value) {
    let text = std::fs::read_to_string(schema(schema_name)).expect("schema file");
    let schema_doc: Value = serde_json::from_str(&text).expect("schema parses");
    if let Err(e) = validate(&schema_doc, output, "$") {
        panic!("{schema_name}: {e}\noutput: {output:#}");
    }
}

fn fx(name: &str) -> String {
    fixture(name).display().to_string()
}

#[test]
fn entropy_outputs_validate() {
    let dsbs = fx("dsbs_delta01.json");
    assert_schema("entropy.schema.json", &run_json(&["entropy", &dsbs, "--set", "1,2"]));
    assert_schema(
        "entropy.schema.json",
        &run_json(&["entropy", &dsbs, "--set", "2", "--given", "1"]),
    );
    assert_schema(
        "entropy.schema.json",
        &run_json(&["entropy", &dsbs, "--set", "1", "--mi-with", "2"]),
    );
}

#[test]
fn mcf_output_validates() {
    assert_schema(
        "mcf.schema.json",
        &run_json(&["mcf", &fx("dsbs_delta01.json"), "--groups", "1,2;1,2"]),
    );
}

#[test]
fn capacity_outputs_validate() {
    assert_schema(
        "capacity.schema.json",
        &run_json(&["capacity", "sk", &fx("auction_m4_k2.json"), "--set", "1,2,3,4"]),
    );
    assert_schema(
        "capacity.schema.json",
        &run_json(&["capacity", "sk", &fx("dsbs_delta01.json"), "--set", "1"]),
    );
    assert_schema(
        "capacity.schema.json",
        &run_json(&["capacity", "ask", &fx("ask_example.json")]),
    );
    assert_schema(
        "capacity.schema.json",
        &run_json(&["capacity", "sc", &fx("example2.json")]),
    );
}

#[test]
fn decide_and_decompose_outputs_validate() {
    assert_schema(
        "decide.schema.json",
        &run_json(&["decide", &fx("dsbs_delta01.json")]),
    );
    assert_schema(
        "decide.schema.json",
        &run_json(&["decide", &fx("dsbs_delta025.json")]),
    );
    assert_schema(
        "decompose.schema.json",
        &run_json(&["decompose", &fx("auction_m4_k2.json"), "--function", "max"]),
    );
}

#[test]
fn simulation_outputs_validate() {
    assert_schema(
        "simulate_binning.schema.json",
        &run_json(&[
            "simulate-binning",
            &fx("dsbs_delta01.json"),
            "--margin",
            "0.2",
            "--n",
            "4",
            "--trials",
            "50",
        ]),
    );
    assert_schema(
        "simulate_example1.schema.json",
        &run_json(&["simulate-example1", "--delta", "0.05", "--trials", "200"]),
    );
    assert_schema(
        "balance_check.schema.json",
        &run_json(&[
            "balance-check",
            "--u-size",
            "256",
            "--r",
            "4",
            "--lambda",
            "0.04",
            "--colorings",
            "20",
        ]),
    );
}

#[test]
fn generated_problem_validates() {
    assert_schema(
        "gen_auction.schema.json",
        &run_json(&["gen-auction", "--m", "4", "--k", "2"]),
    );
}
