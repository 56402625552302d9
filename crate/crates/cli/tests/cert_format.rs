use neron_cli::{parse_problem, parse_problem_with, read_certificate, write_certificate};
use neron_core::neron::{desingularize, verify_certificate, NeronConfig};

const WORKED: &str = include_str!("data/worked.nd");
const SMOOTH: &str = include_str!("data/smooth.nd");

#[test]
fn full_certificate_round_trips() {
    let p = parse_problem_with(WORKED, Some(17)).unwrap();
    let cert = desingularize(&p, &NeronConfig::default()).unwrap();
    let text = write_certificate(&cert);
    let back = read_certificate(&text).unwrap();
    assert!(back == cert);
    assert_eq!(write_certificate(&back), text);
    assert!(verify_certificate(&back).all_passed());
}

#[test]
fn trivial_certificate_round_trips() {
    let p = parse_problem(SMOOTH).unwrap();
    let cert = desingularize(&p, &NeronConfig::default()).unwrap();
    assert!(cert.is_trivial());
    let text = write_certificate(&cert);
    assert!(!text.contains("[stage]"));
    let back = read_certificate(&text).unwrap();
    assert!(back == cert);
    assert!(verify_certificate(&back).all_passed());
}

#[test]
fn truncated_certificate_is_a_positioned_error() {
    let p = parse_problem_with(WORKED, Some(17)).unwrap();
    let text = write_certificate(&desingularize(&p, &NeronConfig::default()).unwrap());
    let cut: String = text.lines().take_while(|l| !l.starts_with("[point]")).map(|l| format!("{l}\n")).collect();
    let err = read_certificate(&cut).unwrap_err();
    assert!(err.to_string().starts_with("line "), "{err}");

    let bad = text.replacen("n_eff", "n_eff x", 1);
    assert!(read_certificate(&bad).is_err());
}
