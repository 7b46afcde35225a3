//! The Wronskian constants `r² W(R₁, R₂)` are a derived artifact: they are
//! produced by the exact engine and checked in under `tests/data`. Set
//! `REGENERATE_WRONSKIAN=1` to rewrite the file after an intentional change.

use std::path::PathBuf;

use coulomb_irregular::closedform::QuantumNumbers;
use coulomb_irregular::oracle::wronskian_symbolic;
use coulomb_irregular::ratpoly::format_rational;
use serde_json::{json, Value};

fn data_path() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data/wronskian_constants.json")
}

fn current() -> Value {
    let rows: Vec<Value> = QuantumNumbers::enumerate(20)
        .map(|qn| {
            let (w, report) = wronskian_symbolic(&qn);
            assert!(report.passed, "{report:?}");
            json!({"n": qn.n(), "l": qn.l(), "r2_wronskian": format_rational(&w.coeff(0))})
        })
        .collect();
    Value::Array(rows)
}

#[test]
fn wronskian_constants_match_recorded_artifact() {
    let fresh = current();
    let path = data_path();
    if std::env::var_os("REGENERATE_WRONSKIAN").is_some() {
        let text = serde_json::to_string_pretty(&fresh).unwrap() + "\n";
        std::fs::write(&path, text).unwrap();
    }
    let recorded: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(recorded, fresh);
    assert_eq!(recorded[0]["r2_wronskian"], "-1/2");
}
