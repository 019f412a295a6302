use std::fs;
use std::io::Write;
use std::path::Path;
use std::process::{Command, Output, Stdio};

const SAMPLE: &str = "abccbabbaa";

fn mepal(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mepal")).args(args).output().expect("run binary")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn build(dir: &Path, name: &str, text: &str, extra: &[&str]) -> String {
    let input = dir.join(format!("{name}.txt"));
    let output = dir.join(format!("{name}.mpl"));
    fs::write(&input, text).unwrap();
    let mut args = vec!["build", input.to_str().unwrap(), "-o", output.to_str().unwrap()];
    args.extend_from_slice(extra);
    let o = mepal(&args);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    output.to_str().unwrap().to_string()
}

#[test]
fn build_and_query() {
    let dir = tempfile::tempdir().unwrap();
    let even = build(dir.path(), "even", SAMPLE, &[]);
    let o = mepal(&["query", &even, "--center", "3"]);
    assert_eq!(stdout(&o).trim(), "6");
    let o = mepal(&["query", &even, "--range", "4", "7"]);
    assert_eq!(o.status.code(), Some(2), "range needs a general index");

    let general = build(dir.path(), "general", SAMPLE, &["--general", "--tau", "8"]);
    assert_eq!(stdout(&mepal(&["query", &general, "--range", "4", "7"])).trim(), "3");
    assert_eq!(stdout(&mepal(&["query", &general, "--pal-center", "5"])).trim(), "6");
    let o = mepal(&["query", &general, "--center", "999"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn batch_keeps_one_line_per_query() {
    let dir = tempfile::tempdir().unwrap();
    let text = SAMPLE.repeat(20);
    let idx = build(dir.path(), "batch", &text, &["--general", "--tau", "4"]);
    let batch = dir.path().join("q.txt");
    fs::write(&batch, "center 7\npal-center 13\nrange 0 9\n  \nrange 9 0\n6\nnonsense\ncenter 100000\n").unwrap();
    let o = mepal(&["query", &idx, "--batch", batch.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let lines: Vec<String> = stdout(&o).lines().map(String::from).collect();
    assert_eq!(lines.len(), 8);
    // general index: doubled center 7 is the middle of w[3], a lone "c"
    assert_eq!(lines[0], "2");
    assert_eq!(lines[1], "4");
    assert_eq!(lines[2], "6");
    assert!(lines[3].starts_with("error"));
    assert!(lines[4].starts_with("error"));
    assert_eq!(lines[5], "12", "doubled center 6 is the middle of \"abccba\"");
    assert!(lines[6].starts_with("error"));
    assert!(lines[7].starts_with("error"));
}

#[test]
fn usage_and_io_errors() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("x.mpl");
    let out = out.to_str().unwrap();
    assert_eq!(mepal(&["build", "-o", out]).status.code(), Some(2));
    assert_eq!(mepal(&["build", "in.txt", "-o", out, "--tau", "0"]).status.code(), Some(2));
    let missing = dir.path().join("missing.txt");
    assert_eq!(mepal(&["build", missing.to_str().unwrap(), "-o", out]).status.code(), Some(3));

    // tau 50 fits 200 symbols only with packed short lengths; tau 100 never fits
    build(dir.path(), "big", &"ab".repeat(100), &["--tau", "50", "--short", "packed"]);
    let big = dir.path().join("big.txt");
    let big = big.to_str().unwrap();
    assert_eq!(mepal(&["build", big, "-o", out, "--tau", "50"]).status.code(), Some(2));
    assert_eq!(
        mepal(&["build", big, "-o", out, "--tau", "100", "--short", "packed"]).status.code(),
        Some(2)
    );

    let junk = dir.path().join("junk.mpl");
    fs::write(&junk, b"not an index").unwrap();
    assert_eq!(mepal(&["stats", junk.to_str().unwrap()]).status.code(), Some(3));
}

#[test]
fn stdin_input() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("stdin.mpl");
    let mut child = Command::new(env!("CARGO_BIN_EXE_mepal"))
        .args(["build", "-", "-o", out.to_str().unwrap()])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(SAMPLE.as_bytes()).unwrap();
    assert!(child.wait().unwrap().success());
    assert_eq!(stdout(&mepal(&["query", out.to_str().unwrap(), "--center", "7"])).trim(), "4");
}

#[test]
fn stats_matches_file_sections() {
    let dir = tempfile::tempdir().unwrap();
    let text = "abaababaab".repeat(50);
    let idx = build(dir.path(), "stats", &text, &["--tau", "2", "--short", "packed"]);
    let o = mepal(&["stats", &idx, "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    for key in ["ls_bits", "block_bits", "short_bits", "total_bits", "bits_per_symbol"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    let n_padded = 500;
    assert_eq!(v["ls_bits"], n_padded);
    assert_eq!(v["short_bits"], n_padded * 3);
    let total = v["ls_bits"].as_u64().unwrap() + v["block_bits"].as_u64().unwrap() + v["short_bits"].as_u64().unwrap();
    assert_eq!(v["total_bits"].as_u64().unwrap(), total);
    let file_bits = fs::metadata(&idx).unwrap().len() * 8;
    let header = v["header_bits"].as_u64().unwrap();
    // payloads are byte aligned, so the file is at most a few bits per section larger
    assert!(file_bits >= header + total && file_bits < header + total + 3 * 8);

    let text_out = stdout(&mepal(&["stats", &idx]));
    assert!(text_out.contains("ls_bits      500"));
}

#[test]
fn verify_passes_on_adversarial_inputs() {
    let dir = tempfile::tempdir().unwrap();
    for (name, text, tau) in [
        ("sample", SAMPLE.to_string(), "2"),
        ("unary", "a".repeat(1000), "4"),
        ("periodic", "ab".repeat(2048), "3"),
    ] {
        let input = dir.path().join(name);
        fs::write(&input, &text).unwrap();
        let args = ["verify", input.to_str().unwrap(), "--tau", tau, "--seed", "7", "--iters", "300"];
        let first = mepal(&args);
        assert_eq!(first.status.code(), Some(0), "{name}: {}", stdout(&first));
        assert!(stdout(&first).contains("0 mismatches"));
        assert_eq!(stdout(&first), stdout(&mepal(&args)), "verify is reproducible");
    }
}

#[test]
fn bench_reports_latency() {
    let dir = tempfile::tempdir().unwrap();
    let idx = build(dir.path(), "bench", &"abcab".repeat(400), &[]);
    let o = mepal(&["bench", &idx, "--queries", "20000", "--json", "--threads", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["queries"], 20000);
    assert!(v["mean_ns"].as_f64().unwrap() > 0.0);
    assert!(v["median_ns"].as_f64().unwrap() > 0.0);
    assert!(v["parallel_mean_ns"].as_f64().is_some());
}
