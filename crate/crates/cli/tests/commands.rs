use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn neron(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_neron")).args(args).env_remove("NERON_SEED").output().unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn smooth_locus_of_the_worked_example() {
    let o = neron(&["smooth-locus", data("worked.nd").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    assert!(out.contains("∩ A = (x1*x2)"), "{out}");
    assert!(out.contains("not standard smooth"), "{out}");
}

#[test]
fn worked_example_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let cert = dir.path().join("c.txt");
    let c = cert.to_str().unwrap();
    let w = data("worked.nd");
    let w = w.to_str().unwrap();

    let o = neron(&["desingularize", w, "-o", c]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(stderr(&o).trim_end(), "the bound is too small");
    assert!(!cert.exists());

    let o = neron(&["--bound", "17", "desingularize", w, "-o", c]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let o = neron(&["verify", c]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert_eq!(stdout(&o).matches("PASS").count(), 4);

    // break one relation of B'
    let text = std::fs::read_to_string(&cert).unwrap();
    let tampered = dir.path().join("t.txt");
    let at = text.find("[target]").unwrap();
    let (head, tail) = text.split_at(at);
    let tail = tail.replacen("\nideal: ", "\nideal: x1 + ", 1);
    std::fs::write(&tampered, format!("{head}{tail}")).unwrap();
    let o = neron(&["verify", tampered.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("FAIL"));
    assert!(stderr(&o).contains("verification failed"));
}

#[test]
fn undeclared_variable_is_reported_with_its_position() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("bad.nd");
    std::fs::write(&f, "char 0\nbound 4\nbase x1 x2\nvars Y\nideal: Y - x3\nmap: Y -> x1\n").unwrap();
    let o = neron(&["desingularize", f.to_str().unwrap(), "-o", dir.path().join("c").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let e = stderr(&o);
    assert!(e.contains("line 5, column 12"), "{e}");
    assert!(e.contains("x3"), "{e}");
}

#[test]
fn missing_file_fails_cleanly() {
    let o = neron(&["verify", "/nonexistent/cert"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).starts_with("error: "));
}
