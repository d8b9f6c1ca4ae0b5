use std::path::PathBuf;
use std::process::{Command, Output};

fn gallery() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../gallery")
}

fn gtwist(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gtwist"))
        .args(args)
        .env("GTWIST_GALLERY", gallery())
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn body(text: &str) -> String {
    text.lines()
        .filter(|l| !l.starts_with('#'))
        .collect::<Vec<_>>()
        .join("\n")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("gtwist-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn sl2_sign_twist_matches_golden() {
    let out = gtwist(&["twist-hopf", "sl2", "--action", "z2-sign"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.starts_with("# gtwist twist-hopf\n# seed = 0\n"));
    let golden = std::fs::read_to_string(gallery().join("sl2-minus.hopf")).unwrap();
    assert_eq!(body(&text), body(&golden));
}

#[test]
fn emitted_twist_passes_hopf_checks() {
    let path = scratch("gl2-twist.hopf");
    let out = gtwist(&[
        "twist-hopf",
        "gl2",
        "--action",
        "gl2-sign",
        "--output",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let check = gtwist(&["check-hopf", path.to_str().unwrap(), "--word-bound", "3"]);
    assert_eq!(check.status.code(), Some(0), "{}", stdout(&check));
    assert!(stdout(&check).contains("status = \"PASS\""));
}

#[test]
fn broken_antipode_fails_with_witness() {
    let out = gtwist(&["check-hopf", "broken-antipode"]);
    assert_eq!(out.status.code(), Some(1));
    let text = stdout(&out);
    assert!(text.contains("status = \"FAIL\""));
    assert!(text.contains("[[failure]]\ncheck = \"antipode law"));
}

#[test]
fn nonhomogeneous_relation_is_an_input_error() {
    let out = gtwist(&["check-grading", "nonhomogeneous"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("`a - 1` is not homogeneous"));
}

#[test]
fn parse_errors_carry_a_location() {
    let path = scratch("bad.hopf");
    std::fs::write(
        &path,
        "[group]\norders = [2]\n\n[generators]\nnames = [\"a\"]\ndegrees = [[1]\n",
    )
    .unwrap();
    let out = gtwist(&["check-hopf", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr).into_owned();
    assert!(err.contains("bad.hopf:"), "{err}");
    assert!(
        err.split(':')
            .nth(2)
            .is_some_and(|l| l.trim().parse::<usize>().is_ok()),
        "{err}"
    );
}

#[test]
fn missing_input_is_an_input_error() {
    let out = gtwist(&["check-hopf", "no-such-file"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn gl2_grading_is_strong() {
    let out = gtwist(&["check-grading", "gl2", "--word-bound", "3"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
}

#[test]
fn plus_minus_identity_invariants() {
    let out = gtwist(&[
        "invariants",
        "--group",
        "gallery/pmI",
        "--q",
        "-1",
        "--max-degree",
        "8",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let dims: Vec<(usize, usize)> = text
        .lines()
        .filter(|l| l.trim_end().ends_with("PASS") && l.trim_start().starts_with(char::is_numeric))
        .map(|l| {
            let f: Vec<&str> = l.split_whitespace().collect();
            (f[1].parse().unwrap(), f[2].parse().unwrap())
        })
        .collect();
    let want = [1, 0, 3, 0, 5, 0, 7, 0, 9];
    assert_eq!(dims, want.iter().map(|&d| (d, d)).collect::<Vec<_>>());
    assert!(text.contains("degree_2_basis = [\"x x\", \"x y\", \"y y\"]"));
}

#[test]
fn trivial_group_is_not_admissible() {
    let out = gtwist(&["invariants", "--group", "trivial", "--q", "-1"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("is missing"));
}

#[test]
fn non_closed_group_is_rejected() {
    let out = gtwist(&["invariants", "--group", "not-a-group"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("is not in the list"));
}

#[test]
fn quaternion_correspondence_includes_weyl() {
    let out = gtwist(&[
        "verify-correspondence",
        "--group",
        "Q8",
        "--max-degree",
        "6",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    let text = stdout(&out);
    assert!(text.contains("[weyl]"));
    assert!(text.contains("\"y x -> -x y + 1\""));
}

#[test]
fn comodule_twists() {
    let strict = gtwist(&["twist-comodule", "plane-z4"]);
    assert_eq!(strict.status.code(), Some(0));
    assert!(stdout(&strict).contains("rewrite = [\"y x -> cyc(4; 0, -1) x y\"]"));
    let weyl = gtwist(&["twist-comodule", "weyl"]);
    assert_eq!(weyl.status.code(), Some(0));
    assert!(stdout(&weyl).contains("rewrite = [\"y x -> -x y + 1\"]"));
}

#[test]
fn fusion_chain_groups() {
    for (ring, group) in [
        ("ising", "Z/2"),
        ("rep-s3", "trivial"),
        ("z4-neg", "Z/4"),
        ("fibonacci", "trivial"),
    ] {
        let out = gtwist(&["fusion-chain", ring]);
        assert_eq!(out.status.code(), Some(0));
        assert!(
            stdout(&out).contains(&format!("chain_group = \"{group}\"")),
            "{ring}"
        );
    }
}

#[test]
fn fusion_markov_is_seeded() {
    let a = gtwist(&["--seed", "7", "fusion-markov", "z8-triple"]);
    let b = gtwist(&["--seed", "7", "fusion-markov", "z8-triple"]);
    assert_eq!(a.status.code(), Some(0), "{}", stdout(&a));
    assert_eq!(stdout(&a), stdout(&b));
    assert!(stdout(&a).starts_with("# gtwist fusion-markov\n# seed = 7\n"));
}

#[test]
fn twisted_fusion_round_trips() {
    let path = scratch("z4-twist.fus");
    let out = gtwist(&["fusion-twist", "z4-neg", "--output", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let chain = gtwist(&["fusion-chain", path.to_str().unwrap()]);
    assert_eq!(chain.status.code(), Some(0));
    assert!(stdout(&chain).contains("order = 4"));
}

#[test]
fn degree_changing_permutation_is_rejected() {
    let out = gtwist(&["fusion-twist", "bad-perm"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn su2_norm_and_declared_dimension() {
    let ok = gtwist(&["fusion-norm", "su2", "--truncation", "4000"]);
    assert_eq!(ok.status.code(), Some(0));
    assert!(stdout(&ok).contains("converged = true"));
    let bad = gtwist(&[
        "fusion-norm",
        "su2",
        "--truncation",
        "4000",
        "--declared-dim",
        "3",
    ]);
    assert_eq!(bad.status.code(), Some(1));
    assert!(stdout(&bad).contains("not amenable"));
}
