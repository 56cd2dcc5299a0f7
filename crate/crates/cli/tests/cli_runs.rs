//! End-to-end tests of the `stav` binary: pinned outputs, exit codes,
//! cache round-trips, config precedence, and report formats.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use stav_core::cache;
use stav_core::numthy::primes::PrimeTable;

fn stav(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_stav"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_of(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 stdout")
}

fn stderr_of(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("utf-8 stderr")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

/// Grab the value after `key=` on the first stdout line containing it.
fn field(out: &Output, key: &str) -> String {
    let text = stdout_of(out);
    let start = text
        .find(&format!("{key}="))
        .unwrap_or_else(|| panic!("no field {key} in {text:?}"))
        + key.len()
        + 1;
    text[start..]
        .split_whitespace()
        .next()
        .expect("value after key")
        .to_string()
}

/// Rewrite the trailing FNV-1a checksum after editing a cache payload.
fn refit_checksum(path: &Path) {
    let mut bytes = fs::read(path).expect("cache readable");
    let body = bytes.len() - 8;
    let sum = cache::fnv1a64(&bytes[..body]);
    bytes[body..].copy_from_slice(&sum.to_le_bytes());
    fs::write(path, bytes).expect("cache writable");
}

#[test]
fn trace_pins_the_known_value() {
    let out = stav(&["trace", "--p", "7", "--a", "2", "--b", "3"]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr_of(&out));
    assert_eq!(stdout_of(&out), "p=7 a=2 b=3 lambda=2\n");
}

#[test]
fn classno_pins_the_known_value_in_both_modes() {
    for mode in ["forms", "lseries"] {
        let out = stav(&["classno", "--D", "-16", "--mode", mode]);
        assert_eq!(code(&out), 0);
        assert_eq!(stdout_of(&out), "D=-16 H=2\n", "mode {mode}");
    }
    let out = stav(&["classno", "--D", "-16"]);
    assert_eq!(stdout_of(&out), "D=-16 H=2\n");
}

#[test]
fn mainterm_matches_the_hand_expanded_window() {
    let out = stav(&["mainterm", "--x", "10", "--alpha", "0.3", "--beta", "0.9"]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr_of(&out));
    let v: f64 = field(&out, "mainterm").parse().expect("numeric main term");
    assert!((v - 2.0515).abs() < 2e-3, "main term {v}");
}

#[test]
fn domain_failures_exit_one() {
    let cases: &[&[&str]] = &[
        &["trace", "--p", "8", "--a", "1", "--b", "1"],
        &["classno", "--D", "3"],
        &["mainterm", "--x", "10", "--alpha", "0.9", "--beta", "0.3"],
        &["kr", "--r", "1", "--U", "100"],
        &["bdh", "--x", "10", "--y", "10"],
        &["average", "--x", "20", "--format", "xml"],
        &["kr", "--r", "0"],
    ];
    for args in cases {
        let out = stav(args);
        assert_eq!(code(&out), 1, "args {args:?}: {}", stderr_of(&out));
        assert!(
            stderr_of(&out).contains("kind=domain"),
            "args {args:?}: {}",
            stderr_of(&out)
        );
    }
}

#[test]
fn usage_errors_exit_one_and_help_exits_zero() {
    let out = stav(&["gibberish"]);
    assert_eq!(code(&out), 1);
    let out = stav(&["trace", "--p", "7"]);
    assert_eq!(code(&out), 1, "missing required flags");
    let out = stav(&["--help"]);
    assert_eq!(code(&out), 0);
    assert!(stdout_of(&out).contains("verify"));
}

#[test]
fn bad_reduction_is_a_reduction_error() {
    let out = stav(&["trace", "--p", "5", "--a", "2", "--b", "3"]);
    assert_eq!(code(&out), 1);
    assert!(stderr_of(&out).contains("kind=reduction"), "{}", stderr_of(&out));
}

#[test]
fn prime_cache_round_trips() {
    let dir = tempfile::tempdir().expect("tempdir");
    let cache_dir = dir.path().join("cache");
    let out = stav(&[
        "sieve",
        "--x",
        "300",
        "--cache",
        cache_dir.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr_of(&out));
    assert_eq!(field(&out, "primes"), "62");
    assert_eq!(field(&out, "last"), "293");

    let path = cache_dir.join("primes-300.stav");
    let table = cache::read_primes(&path).expect("cache decodes");
    let fresh = PrimeTable::sieve(300).expect("sieve");
    assert_eq!(table.primes(), fresh.primes());

    // A rewrite of the decoded table must reproduce the file bit for bit.
    let copy = dir.path().join("copy.stav");
    cache::write_primes(&copy, &table).expect("rewrite");
    assert_eq!(fs::read(&path).unwrap(), fs::read(&copy).unwrap());
}

#[test]
fn sieve_csv_lists_the_primes() {
    let dir = tempfile::tempdir().expect("tempdir");
    let out_path = dir.path().join("primes.csv");
    let out = stav(&["sieve", "--x", "30", "--out", out_path.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    assert_eq!(
        fs::read_to_string(&out_path).unwrap(),
        "p\n2\n3\n5\n7\n11\n13\n17\n19\n23\n29\n"
    );
}

#[test]
fn trace_cache_serves_repeat_queries() {
    let dir = tempfile::tempdir().expect("tempdir");
    let cache_dir = dir.path().join("cache");
    let args = [
        "trace",
        "--p",
        "7",
        "--a",
        "2",
        "--b",
        "3",
        "--cache",
        cache_dir.to_str().unwrap(),
    ];
    let first = stav(&args);
    assert_eq!(code(&first), 0, "stderr: {}", stderr_of(&first));
    assert!(cache_dir.join("traces-7.stav").exists());
    let second = stav(&args);
    assert_eq!(stdout_of(&first), stdout_of(&second));
    assert_eq!(stdout_of(&second), "p=7 a=2 b=3 lambda=2\n");

    // Coefficients reduce mod p, so a shifted query hits the same entry.
    let shifted = stav(&[
        "trace",
        "--p",
        "7",
        "--a",
        "9",
        "--b",
        "10",
        "--cache",
        cache_dir.to_str().unwrap(),
    ]);
    assert_eq!(stdout_of(&shifted), "p=7 a=9 b=10 lambda=2\n");

    // A flipped payload byte breaks the checksum: integrity, exit 2.
    let path = cache_dir.join("traces-7.stav");
    let mut bytes = fs::read(&path).unwrap();
    let mid = bytes.len() / 2;
    bytes[mid] ^= 0x40;
    fs::write(&path, bytes).unwrap();
    let broken = stav(&args);
    assert_eq!(code(&broken), 2, "stderr: {}", stderr_of(&broken));
    assert!(stderr_of(&broken).contains("kind=integrity"), "{}", stderr_of(&broken));
}

#[test]
fn corrupted_class_cache_is_named_by_verify() {
    let dir = tempfile::tempdir().expect("tempdir");
    let cache_dir = dir.path().join("cache");
    let out = stav(&["htable", "--x", "50", "--cache", cache_dir.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr_of(&out));
    let path = cache_dir.join("classno-50.stav");

    // Bump one stored class number and refit the checksum, so only the
    // semantic cross-check can notice.
    let mut bytes = fs::read(&path).unwrap();
    let record = 14 + 16 * 40; // past the limit sentinel, record layout (p, r, h)
    let h_at = record + 12;
    bytes[h_at] = bytes[h_at].wrapping_add(1);
    fs::write(&path, &bytes).unwrap();
    refit_checksum(&path);

    let verify = stav(&["verify", "--suite", "exact", "--cache", cache_dir.to_str().unwrap()]);
    assert_eq!(code(&verify), 2, "stderr: {}", stderr_of(&verify));
    let err = stderr_of(&verify);
    assert!(err.contains("kind=consistency"), "{err}");
    assert!(err.contains("disagree at p=") && err.contains(" r="), "{err}");
}

#[test]
fn checksum_corruption_is_integrity() {
    let dir = tempfile::tempdir().expect("tempdir");
    let cache_dir = dir.path().join("cache");
    let out = stav(&["htable", "--x", "50", "--cache", cache_dir.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let path = cache_dir.join("classno-50.stav");
    let mut bytes = fs::read(&path).unwrap();
    let last = bytes.len() - 1;
    bytes[last] ^= 0xff;
    fs::write(&path, bytes).unwrap();

    let verify = stav(&["verify", "--cache", cache_dir.to_str().unwrap()]);
    assert_eq!(code(&verify), 2);
    let err = stderr_of(&verify);
    assert!(err.contains("kind=integrity"), "{err}");
    assert!(err.contains("classno-50.stav"), "{err}");
}

#[test]
fn mainterm_reuses_an_adequate_cached_table() {
    let dir = tempfile::tempdir().expect("tempdir");
    let cache_dir = dir.path().join("cache");
    let out = stav(&["htable", "--x", "60", "--cache", cache_dir.to_str().unwrap()]);
    assert_eq!(code(&out), 0);

    let cached = stav(&[
        "mainterm",
        "--x",
        "50",
        "--alpha",
        "0.2",
        "--beta",
        "0.8",
        "--cache",
        cache_dir.to_str().unwrap(),
    ]);
    let fresh = stav(&["mainterm", "--x", "50", "--alpha", "0.2", "--beta", "0.8"]);
    assert_eq!(code(&cached), 0, "stderr: {}", stderr_of(&cached));
    assert_eq!(stdout_of(&cached), stdout_of(&fresh));
    // The covering table was reused, not rebuilt at the smaller limit.
    assert!(!cache_dir.join("classno-50.stav").exists());
}

#[test]
fn config_file_yields_to_flags() {
    let dir = tempfile::tempdir().expect("tempdir");
    let cfg = dir.path().join("run.json");
    fs::write(&cfg, r#"{"x": 30, "A": 3, "B": 5, "alpha": 0.3, "beta": 0.7}"#).unwrap();
    let out = stav(&["average", "--config", cfg.to_str().unwrap(), "--A", "4"]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr_of(&out));
    let text = stdout_of(&out);
    let row: Vec<&str> = text.lines().nth(1).expect("data row").split(',').collect();
    assert_eq!(row[0], "3.0000000000000000e1", "x from the config file");
    assert_eq!(row[3], "4", "A from the flag");
    assert_eq!(row[4], "5", "B from the config file");

    let bad = dir.path().join("bad.json");
    fs::write(&bad, r#"{"x": 30, "bogus": 1}"#).unwrap();
    let out = stav(&["average", "--config", bad.to_str().unwrap()]);
    assert_eq!(code(&out), 1);
    assert!(stderr_of(&out).contains("kind=domain"));
}

#[test]
fn csv_and_json_print_the_same_values() {
    let args = ["--x", "40", "--A", "5", "--B", "5"];
    let mut csv_args = vec!["average"];
    csv_args.extend_from_slice(&args);
    let mut json_args = csv_args.clone();
    json_args.extend_from_slice(&["--format", "json"]);

    let csv = stdout_of(&stav(&csv_args));
    let json = stdout_of(&stav(&json_args));
    let header: Vec<&str> = csv.lines().next().unwrap().split(',').collect();
    let row: Vec<&str> = csv.lines().nth(1).unwrap().split(',').collect();
    assert_eq!(header.len(), 12);
    for (name, value) in header.iter().zip(&row) {
        let key = format!("\"{name}\":");
        let json_value = json
            .lines()
            .find(|l| l.trim_start().starts_with(&key))
            .unwrap_or_else(|| panic!("no {name} in JSON"))
            .split(':')
            .nth(1)
            .unwrap()
            .trim()
            .trim_end_matches(',')
            .trim_matches('"');
        assert_eq!(json_value, *value, "field {name}");
    }
}

#[test]
fn worker_count_never_changes_the_report() {
    let base = ["average", "--x", "50", "--A", "6", "--B", "6"];
    let mut one = base.to_vec();
    one.extend_from_slice(&["--workers", "1"]);
    let mut three = base.to_vec();
    three.extend_from_slice(&["--workers", "3"]);
    let a = stav(&one);
    let b = stav(&three);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout, "reports must be byte-identical");
}

#[test]
fn experiment_headlines_accompany_file_output() {
    let dir = tempfile::tempdir().expect("tempdir");
    let report = dir.path().join("report.csv");
    let out = stav(&[
        "exceptions",
        "--x",
        "30",
        "--A",
        "4",
        "--B",
        "4",
        "--rel-tol",
        "0.5",
        "--out",
        report.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr_of(&out));
    let text = stdout_of(&out);
    assert!(text.contains("exceptional_count=") && text.contains("rel_tol="), "{text}");
    let written = fs::read_to_string(&report).unwrap();
    assert!(written.starts_with("x,alpha,beta,A,B,backend,"), "{written}");

    let out = stav(&[
        "variance",
        "--x",
        "30",
        "--A",
        "4",
        "--B",
        "4",
        "--out",
        report.to_str().unwrap(),
    ]);
    assert!(field(&out, "second_moment").parse::<f64>().unwrap() > 0.0);
}

#[test]
fn kr_reports_both_shapes() {
    let product = stav(&["kr", "--r", "3", "--cutoff", "2000"]);
    assert_eq!(code(&product), 0);
    let k: f64 = field(&product, "K").parse().unwrap();
    assert!(k > 0.0 && k.is_finite());

    let partial = stav(&["kr", "--r", "1", "--U", "200", "--V", "10"]);
    assert_eq!(code(&partial), 0, "stderr: {}", stderr_of(&partial));
    let s: f64 = field(&partial, "S").parse().unwrap();
    let k1: f64 = field(&stav(&["kr", "--r", "1", "--cutoff", "100000"]), "K")
        .parse()
        .unwrap();
    assert!((s - k1).abs() < 0.25, "S={s} K_1={k1}");
}
