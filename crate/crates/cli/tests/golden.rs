use std::path::{Path, PathBuf};
use std::process::{Command, Stdio};
use std::io::Write;

fn corpus() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/tests/corpus")
}

fn golden_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

fn run(dir: &Path, args: &[&str], stdin: Option<&str>) -> String {
    let mut child = Command::new(env!("CARGO_BIN_EXE_cubik"))
        .args(args)
        .current_dir(dir)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("spawn cubik");
    if let Some(input) = stdin {
        child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    }
    let out = child.wait_with_output().unwrap();
    format!(
        "exit: {}\n--- stdout\n{}--- stderr\n{}",
        out.status.code().unwrap(),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap()
    )
}

fn assert_golden(name: &str, got: &str) {
    let want = std::fs::read_to_string(golden_dir().join(name)).unwrap();
    assert_eq!(got, want, "golden {name} differs");
}

#[test]
fn check_goldens() {
    for f in [
        "partial", "partial_bad", "path", "path_bad", "square", "subtype", "kan", "freeze", "freeze_bad",
    ] {
        let got = run(&corpus(), &["check", &format!("{f}.cub")], None);
        assert_golden(&format!("check_{f}.out"), &got);
    }
}

#[test]
fn normalize_goldens() {
    let cases = [
        ("normalize_sym.out", ["path.cub", "sym"]),
        ("normalize_fill_at_1.out", ["kan.cub", "fillAt1"]),
        ("normalize_unknown.out", ["kan.cub", "nope"]),
        ("normalize_rejected.out", ["partial_bad.cub", "parBad"]),
    ];
    for (golden, [file, def]) in cases {
        let got = run(&corpus(), &["normalize", file, "--def", def], None);
        assert_golden(golden, &got);
    }
}

#[test]
fn io_and_parse_failures() {
    assert_golden("check_missing.out", &run(&corpus(), &["check", "missing.cub"], None));
    assert_golden("check_parse_error.out", &run(&golden_dir(), &["check", "parse_error.cub"], None));
}

#[test]
fn repl_session() {
    let input = std::fs::read_to_string(golden_dir().join("repl_session.in")).unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_cubik"))
        .arg("repl")
        .current_dir(corpus())
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .and_then(|mut c| {
            c.stdin.take().unwrap().write_all(input.as_bytes())?;
            c.wait_with_output()
        })
        .unwrap();
    assert!(out.status.success());
    assert_golden("repl_session.out", &String::from_utf8(out.stdout).unwrap());
}
