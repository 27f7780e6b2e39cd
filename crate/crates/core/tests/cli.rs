//! The installed binary: example invocations and exit codes.

use std::process::Command;

fn confspace(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_confspace")).args(args).output().expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

#[test]
fn betti_csv_two_weights() {
    let (code, out, _) = confspace(&["betti", "--surface", "torus", "--max-weight", "2", "--format", "csv"]);
    assert_eq!(code, 0);
    let rows: Vec<&str> = out.lines().collect();
    assert_eq!(rows[0], "surface,field,weight,degree,dim");
    assert_eq!(&rows[1..4], ["torus,Q,1,0,1", "torus,Q,1,1,2", "torus,Q,1,2,1"]);
    assert_eq!(&rows[4..], ["torus,Q,2,0,1", "torus,Q,2,1,2", "torus,Q,2,2,1"]);
}

#[test]
fn betti_json_round_trips() {
    let (code, out, _) = confspace(&["betti", "--surface", "torus", "--max-weight", "1", "--format", "json"]);
    assert_eq!(code, 0);
    let recs = confspace::output::from_json(&out).unwrap();
    assert_eq!(recs.len(), 1);
    assert_eq!(recs[0].weight, 1);
    assert_eq!(recs[0].dims_by_total_degree, [1, 2, 1]);
    assert_eq!(recs[0].conventions.bidegree, "s=len-1");
}

#[test]
fn bad_algebra_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, r#"{"basis":[{"name":"a"}]}"#).unwrap();
    let (code, _, err) = confspace(&["betti", "--surface", "custom", "--algebra", path.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(err.contains("schema"), "{err}");

    std::fs::write(&path, r#"{"basis":[{"name":"a","degree":1}],"products":[{"left":"a","right":"a","result":[{"name":"a","coeff":1}]}]}"#).unwrap();
    assert_eq!(confspace(&["betti", "--surface", "custom", "--algebra", path.to_str().unwrap()]).0, 2);
}

#[test]
fn compare_examples() {
    let (code, out, _) = confspace(&["compare", "--surface", "torus", "--prime", "5"]);
    assert_eq!(code, 0, "{out}");
    assert_eq!(out.matches("no 5-power torsion").count(), 5);

    let (code, out, _) = confspace(&["compare", "--surface", "punctured", "--genus", "1", "--prime", "3"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("char-3 ledger"));

    let (code, _, err) = confspace(&["compare", "--surface", "torus", "--prime", "5", "--weight", "6"]);
    assert_eq!(code, 2);
    assert!(err.contains("weight 6 > p = 5 unsupported"), "{err}");

    let (code, out, _) = confspace(&["compare", "--punctured", "--genus", "2", "--prime", "5", "--weight", "5", "--format", "json"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v[0]["route"], "weight_p");
    assert_eq!(v[0]["verdict"]["kind"], "equal");
}

#[test]
fn plain_char_three_comparison() {
    let (code, out, _) = confspace(&["compare", "--surface", "torus", "--prime", "3", "--weight", "3", "--operadic-char3", "false"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("[direct]"));
}

#[test]
fn invalid_inputs() {
    assert_eq!(confspace(&["compare", "--surface", "torus", "--prime", "2"]).0, 2);
    assert_eq!(confspace(&["compare", "--surface", "torus", "--prime", "9"]).0, 2);
    assert_eq!(confspace(&["compare", "--surface", "torus"]).0, 2);
    assert_eq!(confspace(&["betti", "--surface", "torus", "--genus", "2"]).0, 2);
    assert_eq!(confspace(&["betti", "--field", "F_4"]).0, 2);
    assert_eq!(confspace(&["betti", "--weight", "0"]).0, 2);
    assert_eq!(confspace(&["frobnicate"]).0, 2);
}

#[test]
fn selfcheck_clean_and_faulted() {
    let (code, out, _) = confspace(&["selfcheck", "--max-weight", "7", "--primes", "3,5,7"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("0 failed"));

    let (code, out, _) = confspace(&["selfcheck", "--surface", "torus", "--max-weight", "4", "--inject-fault"]);
    assert_eq!(code, 1);
    assert!(out.contains("d∘d ≠ 0"), "{out}");
}

#[test]
fn betti_mod_p_and_closed_genus() {
    let (code, out, _) = confspace(&["betti", "--closed", "--genus", "2", "--prime", "3", "--weight", "2", "--format", "csv"]);
    assert_eq!(code, 0);
    assert!(out.contains("closed-g2,F_3,2,2,6"), "{out}");
    // closed genus 2 lies outside the mod-p theorems; the table says so
    let (_, out, _) = confspace(&["betti", "--closed", "--genus", "2", "--weight", "1"]);
    assert!(out.contains("warning:"));
}

#[test]
fn oracle_flag() {
    let (code, _, _) = confspace(&["betti", "--surface", "punctured", "--genus", "2", "--max-weight", "4", "--oracle"]);
    assert_eq!(code, 0);
}
