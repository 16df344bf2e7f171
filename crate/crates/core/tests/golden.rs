//! Regression against stored derived constants and the dimension table.
//! Set `UPDATE_GOLDEN=1` to rewrite the files.

use std::path::PathBuf;

use sdeinv_core::curvature::derive_sde_and_verify;
use sdeinv_core::invariants::disambiguate_i2;
use sdeinv_core::run::{run_group, CheckGroup};
use sdeinv_core::RunConfig;

fn golden(name: &str, actual: &str) {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name);
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::write(&path, actual).unwrap();
        return;
    }
    let expect = std::fs::read_to_string(&path).unwrap();
    assert_eq!(actual, expect, "{name} differs from the stored copy");
}

fn to_json(v: impl serde::Serialize) -> String {
    serde_json::to_string_pretty(&v).unwrap() + "\n"
}

#[test]
fn orientation() {
    let d = derive_sde_and_verify(20, 1).unwrap();
    golden("orientation.json", &to_json(serde_json::json!({ "vanishing_half": d.orientation })));
}

#[test]
fn i2_reading() {
    let (chosen, rep) = disambiguate_i2(10, 1, 3).unwrap();
    assert!(rep.ok());
    golden("i2_reading.json", &to_json(serde_json::json!({ "reading": chosen.map(|r| r.name()) })));
}

#[test]
fn dimension_table_section() {
    let out = run_group(CheckGroup::Dims, &RunConfig::default()).unwrap();
    assert!(out.all_passed());
    let md = out.markdown();
    let section = md.split("## Dimension table\n\n").nth(1).expect("table section");
    golden("dimension_table.md", section);
}
