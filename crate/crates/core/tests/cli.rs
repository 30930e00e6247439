use std::path::PathBuf;
use std::process::Command as Proc;

use mtorus::cli::{
    certificate_from_block, parse_blocks, parse_spec, run, Command, ExitStatus, Format, Options, SpecError,
};

fn fixture(name: &str) -> String {
    let p = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name);
    std::fs::read_to_string(p).unwrap()
}

fn quick() -> Options {
    Options {
        radius: (2, 2),
        ..Options::default()
    }
}

#[test]
fn certify_exit_codes() {
    let cases = [
        ("identity1.mt", ExitStatus::Ok, Some(0)),
        ("identity2.mt", ExitStatus::Ok, Some(0)),
        ("identity3.mt", ExitStatus::Ok, Some(0)),
        ("linear4.mt", ExitStatus::Ok, Some(1)),
        ("two_loops.mt", ExitStatus::Ok, Some(1)),
        ("chain3.mt", ExitStatus::Ok, Some(2)),
        ("bridge.mt", ExitStatus::Ok, Some(2)),
        ("chain4.mt", ExitStatus::Ok, Some(3)),
        ("fibonacci.mt", ExitStatus::Refused, None),
    ];
    for (name, exit, order) in cases {
        let r = run(Command::Certify, &fixture(name), &quick()).unwrap();
        assert_eq!(r.exit_status(), exit, "{name}");
        assert_eq!(r.certificate.as_ref().map(|c| c.order), order, "{name}");
    }
}

#[test]
fn structured_round_trip() {
    for name in ["identity2.mt", "linear4.mt", "two_loops.mt", "chain4.mt", "bridge.mt"] {
        let r = run(Command::Certify, &fixture(name), &quick()).unwrap();
        let text = r.render(Format::Structured);
        let blocks = parse_blocks(&text).unwrap();
        let cert = blocks.iter().find(|b| b.name == "certificate").unwrap();
        assert_eq!(&certificate_from_block(cert).unwrap(), r.certificate.as_ref().unwrap(), "{name}");
    }
}

#[test]
fn reports_are_deterministic() {
    let text = fixture("linear4.mt");
    let opts = Options {
        radius: (2, 3),
        ..Options::default()
    };
    let a = run(Command::Analyze, &text, &opts).unwrap().render(Format::Structured);
    let b = run(Command::Analyze, &text, &opts).unwrap().render(Format::Structured);
    assert_eq!(a, b);
    assert!(a.contains("input_sha256 = "));
}

#[test]
fn refusal_keeps_metrics() {
    let r = run(Command::Analyze, &fixture("fibonacci.mt"), &quick()).unwrap();
    assert_eq!(r.failure.as_ref().unwrap().code, "exponential-growth");
    assert_eq!(r.metrics.len(), 1);
}

#[test]
fn not_an_automorphism() {
    let r = run(Command::Certify, "basis: a, b\nmap: a -> a a\nmap: b -> b\n", &quick()).unwrap();
    assert_eq!(r.exit_status(), ExitStatus::Verification);
    assert_eq!(r.failure.unwrap().code, "not-automorphism");
}

#[test]
fn wrong_declared_inverse() {
    let text = "basis: a, b\nmap: a -> a b\nmap: b -> b\ninverse: a -> a\ninverse: b -> b\n";
    let r = run(Command::Growth, text, &quick()).unwrap();
    assert_eq!(r.failure.unwrap().code, "inverse-mismatch");
}

#[test]
fn invalid_representative_names_condition() {
    // b precedes a but its image uses a
    let text = "basis: a, b\nmap: a -> a\nmap: b -> b a\norder: b, a\n";
    let r = run(Command::Certify, text, &quick()).unwrap();
    let f = r.failure.unwrap();
    assert_eq!(f.code, "invalid-representative");
    assert!(f.message.starts_with("condition C"), "{}", f.message);
}

#[test]
fn parse_errors() {
    assert_eq!(parse_spec("map: a -> a\n"), Err(SpecError::MissingBasis));
    assert!(matches!(
        parse_spec("basis: a\nmap: a -> z\n"),
        Err(SpecError::Word { line: 2, .. } | SpecError::UnknownGenerator { line: 2, .. })
    ));
    assert!(matches!(parse_spec("basis: a\nnonsense\n"), Err(SpecError::Syntax { line: 2, .. })));
}

#[test]
fn unreduced_image_warns() {
    let s = parse_spec("basis: a, b\nmap: a -> a b b^-1\nmap: b -> b\n").unwrap();
    assert_eq!(s.warnings.len(), 1);
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_mtorus");
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    let code = |args: &[&str]| Proc::new(bin).args(args).output().unwrap().status.code().unwrap();
    let f = |n: &str| dir.join(n).to_string_lossy().into_owned();
    assert_eq!(code(&["certify", &f("linear4.mt")]), 0);
    assert_eq!(code(&["certify", &f("fibonacci.mt")]), 3);
    assert_eq!(code(&["certify", "/nonexistent.mt"]), 1);
    let tmp = std::env::temp_dir().join("mtorus_bad_spec.mt");
    std::fs::write(&tmp, "basis a\n").unwrap();
    assert_eq!(code(&["growth", &tmp.to_string_lossy()]), 1);
    let out = Proc::new(bin)
        .env("MTORUS_BALL_BUDGET", "100")
        .args(["divergence", &f("linear4.mt"), "--radius", "3"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(4));
}
