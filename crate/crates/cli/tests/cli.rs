use std::process::{Command, Output};

use serde_json::Value;

fn koszulkit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_koszulkit"))
        .args(args)
        .env_remove("KOSZULKIT_PRECISION")
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn exa_no_is_not_complete_with_degree_one_witness() {
    let out = koszulkit(&["check-koszul-complete", "--ring", "exa-no", "--p", "5", "--format", "json"]);
    assert_eq!(code(&out), 1);
    let v = json(&out);
    assert_eq!(v["verdict"], "not_complete");
    assert_eq!(v["witness"]["degree"], 1);
    assert_eq!(v["witness"]["lhs"]["torsion"][0], "5");
    assert_eq!(v["precision"], 8);
}

#[test]
fn integers_are_koszul_complete() {
    let out = koszulkit(&["check-koszul-complete", "--ring", "Z", "--s", "3"]);
    assert_eq!(code(&out), 0);
    assert!(String::from_utf8_lossy(&out.stdout).contains("complete"));
}

#[test]
fn integers_are_not_derived_complete() {
    let out = koszulkit(&["derived-complete", "--ring", "Z", "--module", "Z", "--precision", "4", "--format", "json"]);
    assert_eq!(code(&out), 1);
    let v = json(&out);
    assert_eq!(v["verdict"], "not_complete");
    assert_eq!(v["witness"]["partial_sums"].as_array().unwrap().len(), 4);
}

#[test]
fn json_output_is_deterministic() {
    let args = ["check-koszul-complete", "--ring", "exa-no", "--precision", "5", "--format", "json"];
    let a = koszulkit(&args);
    let b = koszulkit(&args);
    assert_eq!(a.stdout, b.stdout);
    let g = ["gallery", "--format", "json"];
    assert_eq!(koszulkit(&g).stdout, koszulkit(&g).stdout);
}

#[test]
fn precision_comes_from_the_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_koszulkit"))
        .args(["check-koszul-complete", "--ring", "exa-no", "--format", "json"])
        .env("KOSZULKIT_PRECISION", "5")
        .output()
        .unwrap();
    assert_eq!(json(&out)["precision"], 5);
    let flag = Command::new(env!("CARGO_BIN_EXE_koszulkit"))
        .args(["check-koszul-complete", "--ring", "exa-no", "--format", "json", "--precision", "3"])
        .env("KOSZULKIT_PRECISION", "5")
        .output()
        .unwrap();
    assert_eq!(json(&flag)["precision"], 3);
}

#[test]
fn structured_hom_comparison_is_inconclusive() {
    let out = koszulkit(&["compare-hom", "--ring", "exa-no", "--format", "json"]);
    assert_eq!(code(&out), 3);
    assert_eq!(json(&out)["verdict"], "inconclusive");
}

#[test]
fn hom_comparison_over_z() {
    let out = koszulkit(&["compare-hom", "--ring", "Z", "--s", "3", "--format", "json"]);
    assert_eq!(code(&out), 0);
}

#[test]
fn usage_errors_name_the_flag() {
    let out = koszulkit(&["koszul", "--ring", "Z/x"]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("--ring"));
    let out = koszulkit(&["tower", "--n", "0"]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("--n"));
    assert_eq!(code(&koszulkit(&["koszul", "--precision", "0"])), 2);
    assert_eq!(code(&koszulkit(&["no-such-command"])), 2);
}

#[test]
fn koszul_output_feeds_homology() {
    let dir = std::env::temp_dir().join(format!("koszulkit-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("kos.json");
    let out = koszulkit(&["koszul", "--ring", "Z", "--s", "5", "--format", "json"]);
    assert_eq!(code(&out), 0);
    std::fs::write(&path, &out.stdout).unwrap();
    let h = koszulkit(&["homology", "--complex", path.to_str().unwrap(), "--format", "json"]);
    assert_eq!(code(&h), 0);
    assert_eq!(json(&h)["homology"]["0"]["torsion"][0], "5");
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn idempotent_lift_over_z() {
    let out =
        koszulkit(&["lift-idempotent", "--ring", "Z", "--s", "5", "--matrix", "[[1,1],[0,0]]", "--precision", "4"]);
    assert_eq!(code(&out), 0);
}

#[test]
fn gallery_and_one_criterion_pass() {
    assert_eq!(code(&koszulkit(&["gallery"])), 0);
    let out = koszulkit(&["selftest", "--criterion", "1"]);
    assert_eq!(code(&out), 0);
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("[PASS]"));
}

#[test]
fn descent_reaches_zero_amplitude() {
    let complex =
        r#"{"ring":{"kind":"Zmod","m":25},"range":[0,1],"ranks":{"0":1,"1":1},"differentials":{"1":[["5"]]}}"#;
    let out = koszulkit(&["descend", "--complex", complex, "--format", "json"]);
    assert_eq!(code(&out), 0);
}
