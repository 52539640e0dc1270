use std::fs;
use std::process::Command;

fn ramsey(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_ramsey"))
        .args(args)
        .output()
        .unwrap();
    (
        out.status.code().unwrap(),
        String::from_utf8(out.stdout).unwrap(),
    )
}

#[test]
fn certify_verify_reverify() {
    let dir = tempfile::tempdir().unwrap();
    let cert = dir.path().join("w.cert");
    let cert_s = cert.to_str().unwrap();
    let (code, out) = ramsey(&[
        "certify", "--q", "3", "--t", "4", "--n", "9", "--out", cert_s,
    ]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("seed="));
    assert_eq!(ramsey(&["verify", "--coloring", cert_s]).0, 0);
    assert_eq!(ramsey(&["reverify", "--cert", cert_s]).0, 0);

    let text = fs::read_to_string(&cert).unwrap();
    let bad = dir.path().join("bad.cert");
    fs::write(&bad, text.replacen("attempt=", "attempt=9", 1)).unwrap();
    let (code, out) = ramsey(&["reverify", "--cert", bad.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert!(out.starts_with("invalid"));
}

#[test]
fn verify_reports_cliques_at_target() {
    let dir = tempfile::tempdir().unwrap();
    let col = dir.path().join("p13.col");
    let col_s = col.to_str().unwrap();
    assert_eq!(
        ramsey(&["construct-paley", "--p", "13", "--out", col_s]).0,
        0
    );
    // Paley(13) has triangles in both colors but no K_4
    assert_eq!(
        ramsey(&["verify", "--coloring", col_s, "--target", "4"]).0,
        0
    );
    let (code, out) = ramsey(&["verify", "--coloring", col_s, "--target", "3", "--csv"]);
    assert_eq!(code, 1);
    assert!(out.starts_with("color,max_clique,witness\n1,3,"));
    assert_eq!(ramsey(&["verify", "--coloring", col_s]).0, 2);
}

#[test]
fn compose_files() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.col");
    let ab = dir.path().join("ab.col");
    assert_eq!(
        ramsey(&["construct-paley", "--p", "5", "--out", a.to_str().unwrap()]).0,
        0
    );
    let a_s = a.to_str().unwrap();
    let (code, out) = ramsey(&[
        "compose",
        "--a",
        a_s,
        "--b",
        a_s,
        "--out",
        ab.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    assert_eq!(out.trim(), "n=25 colors=4");
    let (code, out) = ramsey(&[
        "verify",
        "--coloring",
        ab.to_str().unwrap(),
        "--target",
        "3",
    ]);
    assert_eq!(code, 0, "{out}");
}

#[test]
fn unreadable_inputs_are_parameter_errors() {
    let dir = tempfile::tempdir().unwrap();
    let junk = dir.path().join("junk");
    fs::write(&junk, "not a coloring\n").unwrap();
    assert_eq!(
        ramsey(&[
            "verify",
            "--coloring",
            junk.to_str().unwrap(),
            "--target",
            "3"
        ])
        .0,
        2
    );
    assert_eq!(ramsey(&["reverify", "--cert", junk.to_str().unwrap()]).0, 1);
    assert_eq!(
        ramsey(&["compose", "--a", "/nonexistent", "--b", "/nonexistent"]).0,
        2
    );
}
