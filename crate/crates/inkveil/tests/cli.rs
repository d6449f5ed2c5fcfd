mod common;

use std::fs;
use std::io::Write;
use std::path::Path;
use std::process::{Command, Output, Stdio};

use inkveil::cli::COMMAND_TABLE;
use inkveil_core::pipeline::{MatrixReport, RowStatus};

fn inkveil(args: &[&str], stdin: &str, dir: &Path) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_inkveil"))
        .args(args)
        .current_dir(dir)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    // commands that never read standard input may close it first
    let _ = child.stdin.take().unwrap().write_all(stdin.as_bytes());
    child.wait_with_output().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

/// Two authors with two short documents each, plus a held-out candidate.
fn small_corpus(dir: &Path) {
    for author in common::AUTHORS {
        let text = common::desk_text(author);
        let parts = common::chunks(&text, 3000);
        for (i, part) in parts.iter().take(2).enumerate() {
            let path = dir.join("corpus").join(author);
            fs::create_dir_all(&path).unwrap();
            fs::write(path.join(format!("{i}.txt")), part).unwrap();
        }
        if author == "lincoln" {
            fs::write(dir.join("candidate.txt"), parts[5]).unwrap();
        }
    }
}

fn script(dir: &Path, name: &str, body: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, format!("#!/bin/sh\n{body}\n")).unwrap();
    #[cfg(unix)]
    {
        use std::os::unix::fs::PermissionsExt;
        fs::set_permissions(&path, fs::Permissions::from_mode(0o755)).unwrap();
    }
    format!("cmd:{}", path.display())
}

#[test]
fn encode_then_decode() {
    let dir = tempfile::tempdir().unwrap();
    let encoded = inkveil(&["encode", "--message", "Hello"], "", dir.path());
    assert_eq!(encoded.status.code(), Some(0));
    let stream = stdout(&encoded);
    assert!(stream
        .chars()
        .all(|c| "\u{200B}\u{200C}\u{200D}\u{FEFF}".contains(c)));
    let decoded = inkveil(&["decode"], &format!("cover{stream}text"), dir.path());
    assert_eq!(stdout(&decoded), "HELLO\n");
}

#[test]
fn escaped_notation_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let encoded = stdout(&inkveil(
        &["--escaped", "encode", "--message", "ab"],
        "",
        dir.path(),
    ));
    assert!(encoded.starts_with("U+200B"), "{encoded}");
    let decoded = inkveil(&["--escaped", "decode"], &encoded, dir.path());
    assert_eq!(stdout(&decoded), "AB\n");
}

#[test]
fn decode_on_clean_text_is_a_data_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = inkveil(&["decode"], "nothing hidden here\n", dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
    assert!(!out.stderr.is_empty());
}

#[test]
fn usage_errors_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(
        inkveil(&["encode", "--bogus"], "", dir.path())
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        inkveil(&["--format", "xml", "scan"], "", dir.path())
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        inkveil(&["--format", "csv", "decode"], "", dir.path())
            .status
            .code(),
        Some(1)
    );
}

#[test]
fn lone_end_marker_is_not_written() {
    let dir = tempfile::tempdir().unwrap();
    let out = inkveil(&["encode", "--message", ""], "", dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
}

#[test]
fn strip_and_scan() {
    let dir = tempfile::tempdir().unwrap();
    let carrier = "pri\u{200B}va\u{FEFF}cy\n";
    assert_eq!(
        stdout(&inkveil(&["strip"], carrier, dir.path())),
        "privacy\n"
    );
    let scan: serde_json::Value =
        serde_json::from_slice(&inkveil(&["--format", "json", "scan"], carrier, dir.path()).stdout)
            .unwrap();
    assert_eq!(scan["verdict"], true);
    assert_eq!(scan["counts"]["U+200B"], 1);
    assert_eq!(scan["offsets"][1]["offset"], 8);
}

#[test]
fn lines_round_trip_through_files() {
    let dir = tempfile::tempdir().unwrap();
    let cover = "first line here\n\nsecond line\r\nthird\n";
    fs::write(dir.path().join("cover.txt"), cover).unwrap();
    let out = inkveil(
        &["embed-lines", "--message", "KEY", "cover.txt"],
        "",
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0));
    let embedded = stdout(&out);
    assert_eq!(stdout(&inkveil(&["strip"], &embedded, dir.path())), cover);
    assert_eq!(
        stdout(&inkveil(&["extract-lines"], &embedded, dir.path())),
        "KEY\n"
    );
}

#[test]
fn json_output_is_a_single_value() {
    let dir = tempfile::tempdir().unwrap();
    small_corpus(dir.path());
    let source = ["--corpus", "corpus", "--candidate", "candidate.txt"];
    let runs: Vec<Vec<&str>> = vec![
        vec!["encode", "--message", "abc"],
        vec!["weave", "--word", "privacy", "--message", "hi"],
        vec!["scan"],
        vec!["strip"],
        vec!["transform", "--stage", "obfuscation,translation"],
        [&["features"][..], &source].concat(),
        [&["delta"][..], &source].concat(),
        [&["matrix", "--configs", "1,8"][..], &source].concat(),
    ];
    for args in runs {
        let args = [&["--format", "json"][..], &args].concat();
        let out = inkveil(&args, "Some text. And more text.\n", dir.path());
        assert_eq!(
            out.status.code(),
            Some(0),
            "{args:?}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
        assert!(
            serde_json::from_slice::<serde_json::Value>(&out.stdout).is_ok(),
            "{args:?}"
        );
    }
}

#[test]
fn every_operation_has_one_subcommand() {
    let dir = tempfile::tempdir().unwrap();
    let help = stdout(&inkveil(&["--help"], "", dir.path()));
    for (name, _) in COMMAND_TABLE {
        assert_eq!(help.matches(&format!("  {name} ")).count(), 1, "{name}");
    }
}

#[test]
fn matrix_from_config_file() {
    let dir = tempfile::tempdir().unwrap();
    small_corpus(dir.path());
    fs::write(
        dir.path().join("demo.toml"),
        "candidate = \"candidate.txt\"\ncorpus = \"corpus\"\nseed = 9\npayload = \"SECRET\"\n\
         configs = [2, 8, 15]\nformat = \"csv\"\noutput = \"report.csv\"\n",
    )
    .unwrap();
    let out = inkveil(&["matrix", "--config", "demo.toml"], "", dir.path());
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let csv = fs::read_to_string(dir.path().join("report.csv")).unwrap();
    assert!(csv.starts_with("config,author,delta_adversarial"));
    assert_eq!(csv.lines().count(), 1 + 3 * 2);
}

#[test]
fn matrix_markdown_has_delta_table() {
    let dir = tempfile::tempdir().unwrap();
    small_corpus(dir.path());
    let args = [
        "--format",
        "markdown",
        "matrix",
        "--configs",
        "3",
        "--corpus",
        "corpus",
        "--candidate",
        "candidate.txt",
    ];
    let md = stdout(&inkveil(&args, "", dir.path()));
    assert!(md.contains("Burrows' Delta"), "{md}");
}

#[test]
fn report_json_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    small_corpus(dir.path());
    let args = [
        "--format",
        "json",
        "matrix",
        "--configs",
        "1,3,8",
        "--message",
        "HI",
        "--corpus",
        "corpus",
        "--candidate",
        "candidate.txt",
    ];
    let json = stdout(&inkveil(&args, "", dir.path()));
    let report: MatrixReport = serde_json::from_str(&json).unwrap();
    assert_eq!(report.rows.len(), 6);
    assert!(report.metadata.generated_at.is_some());
    assert_eq!(inkveil::report::to_json(&report), json);
}

#[test]
fn command_backend_translates() {
    let dir = tempfile::tempdir().unwrap();
    let backend = script(
        dir.path(),
        "pivot.sh",
        "cat >/dev/null\nprintf '{\"text\": \"Pivoted text.\"}'",
    );
    let args = [
        "transform",
        "--stage",
        "translation",
        "--backend",
        &backend,
        "--chain",
        "de,ja",
    ];
    let out = inkveil(&args, "Original text.\n", dir.path());
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert_eq!(stdout(&out), "Pivoted text.");
}

#[test]
fn failing_backend_exits_three() {
    let dir = tempfile::tempdir().unwrap();
    small_corpus(dir.path());
    let backend = script(dir.path(), "broken.sh", "echo offline >&2\nexit 4");
    let args = [
        "transform",
        "--stage",
        "translation",
        "--backend",
        &backend,
        "--chain",
        "de",
    ];
    let out = inkveil(&args, "Original text.\n", dir.path());
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("offline"));

    let args = [
        "--format",
        "json",
        "matrix",
        "--configs",
        "2,3",
        "--backend",
        &backend,
        "--chain",
        "de",
        "--corpus",
        "corpus",
        "--candidate",
        "candidate.txt",
    ];
    let out = inkveil(&args, "", dir.path());
    assert_eq!(out.status.code(), Some(3));
    let report: MatrixReport = serde_json::from_slice(&out.stdout).unwrap();
    for row in &report.rows {
        let aborted = matches!(
            row.status,
            RowStatus::Aborted {
                backend_failure: true,
                ..
            }
        );
        assert_eq!(aborted, row.config.get() == 2, "{row:?}");
    }
}
