mod common;

use common::{dvfield_in, scratch};

fn args(a: &[&str]) -> Vec<String> {
    a.iter().map(|s| s.to_string()).collect()
}

#[test]
fn text_output_is_key_value() {
    let dir = scratch();
    let r = dvfield_in(&dir, &args(&["val", "t^[1;0] + t^[0;3]"]));
    assert_eq!(r.code, 0);
    assert_eq!(r.stdout, "val: [0;3]\n");
}

#[test]
fn density_on_a_model_file_writes_the_grown_model() {
    let dir = scratch();
    let r = dvfield_in(
        &dir,
        &args(&["--model", "models/theta.toml", "density", "--a", "t^[1;0]", "--b", "t^[0;-2]", "--gamma", "[0;1]"]),
    );
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert!(r.stdout.contains("grown model written to models/theta.grown.toml"), "{}", r.stdout);
    let grown = dir.join("models/theta.grown.toml");
    assert!(grown.exists());
    // The grown model declares the new generator, so its witness now parses.
    let x = r.stdout.lines().find_map(|l| l.strip_prefix("x: ")).unwrap().to_string();
    let again = dvfield_in(&dir, &args(&["--model", "models/theta.grown.toml", "eval", &x]));
    assert_eq!(again.code, 0, "{}", again.stderr);
    let refused = dvfield_in(&dir, &args(&["--model", "models/theta.toml", "eval", "th9*t"]));
    assert_eq!(refused.code, 2);
    assert!(refused.stderr.contains("undeclared_generator"), "{}", refused.stderr);
}

#[test]
fn builtin_model_density_writes_nothing() {
    let dir = scratch();
    let r = dvfield_in(&dir, &args(&["density", "--a", "0", "--b", "1", "--gamma", "[1;0]"]));
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert!(r.stdout.contains("adjoined th1"));
    assert!(!r.stdout.contains("grown model"));
}

#[test]
fn exit_codes_by_error_kind() {
    let dir = scratch();
    assert_eq!(dvfield_in(&dir, &args(&["val", "O(t^[0;2])"])).code, 3);
    assert_eq!(dvfield_in(&dir, &args(&["val", "t^^"])).code, 4);
    assert_eq!(dvfield_in(&dir, &args(&["res", "t^[-1;0]"])).code, 2);
    assert_eq!(dvfield_in(&dir, &args(&["--model", "models/missing.toml", "val", "1"])).code, 2);
    assert_eq!(dvfield_in(&dir, &args(&["no-such-command"])).code, 2);
}

#[test]
fn precision_override_applies() {
    let dir = scratch();
    let r = dvfield_in(&dir, &args(&["--json", "--precision", "[6;0]", "val", "t"]));
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert!(r.stdout.contains("\"precision_used\": \"[6;0]\""), "{}", r.stdout);
}

#[test]
fn check_text_lists_each_suite() {
    let dir = scratch();
    let r = dvfield_in(&dir, &args(&["check", "split-radical", "--seed", "3"]));
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert!(r.stdout.starts_with("split-radical"));
    assert!(r.stdout.contains("failures   0"));
}
