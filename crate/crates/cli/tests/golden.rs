mod common;

#[test]
fn golden_reports() {
    let validator = common::schema();
    let bad: Vec<String> = common::cases().iter().flat_map(|c| common::check_case(c, &validator)).collect();
    assert!(bad.is_empty(), "{}", bad.join("\n"));
}

#[test]
fn corpus_round_trips() {
    let bad = common::check_roundtrip();
    assert!(bad.is_empty(), "{}", bad.join("\n"));
}

#[test]
fn output_is_byte_stable() {
    let bad = common::check_stability();
    assert!(bad.is_empty(), "{}", bad.join("\n"));
}
