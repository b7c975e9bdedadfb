use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use fqh_cli::exit;
use fqh_cli::params_file;
use serde_json::Value;
use tempfile::TempDir;

const SAMPLE_MESSAGE: &str = "01100010110101001";

fn fqh(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fqh"))
        .args(args)
        .env_remove("FQH_SEED")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn ok(args: &[&str]) -> String {
    let o = fqh(args);
    assert_eq!(o.status.code(), Some(0), "{args:?} failed: {}", stderr(&o));
    stdout(&o)
}

fn gen(dir: &TempDir, name: &str, extra: &[&str]) -> String {
    let path = dir.path().join(name);
    let path = path.to_str().unwrap().to_string();
    let mut args = vec!["gen-params", "--out", path.as_str()];
    args.extend_from_slice(extra);
    ok(&args);
    path
}

fn json_file(path: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn gen_params_reports_hash_length() {
    let dir = TempDir::new().unwrap();
    let out = ok(&[
        "gen-params",
        "--qpos",
        "5",
        "--qanc",
        "5",
        "--ensemble",
        "cue",
        "--dim",
        "2",
        "--seed",
        "3",
        "--out",
        dir.path().join("a.json").to_str().unwrap(),
    ]);
    assert!(out.starts_with("L=160 params_digest="), "{out}");
    let out = ok(&[
        "gen-params",
        "--qanc",
        "6",
        "--seed",
        "3",
        "--out",
        dir.path().join("b.json").to_str().unwrap(),
    ]);
    assert!(out.starts_with("L=384 "), "{out}");
    assert_eq!(json_file(&dir.path().join("a.json"))["hash_len"], 160);
    assert_eq!(json_file(&dir.path().join("b.json"))["hash_len"], 384);
}

#[test]
fn oversized_dimension_is_rejected() {
    let o = fqh(&["gen-params", "--dim", "64", "--qpos", "5"]);
    assert_eq!(o.status.code(), Some(exit::INVALID_CONFIG));
    assert!(stderr(&o).contains("needs 6 qubits"), "{}", stderr(&o));
}

#[test]
fn params_file_round_trips_through_disk() {
    let dir = TempDir::new().unwrap();
    let path = gen(&dir, "p.json", &["--ensemble", "coe", "--dim", "8", "--seed", "11"]);
    let text = fs::read_to_string(&path).unwrap();
    let params = params_file::load(Path::new(&path)).unwrap();
    assert_eq!(params_file::to_canonical(&params), text);
    let stdout_copy = ok(&["gen-params", "--ensemble", "coe", "--dim", "8", "--seed", "11"]);
    assert_eq!(stdout_copy, text);
}

#[test]
fn seed_falls_back_to_environment() {
    let flag = ok(&["gen-params", "--seed", "42"]);
    let env = Command::new(env!("CARGO_BIN_EXE_fqh"))
        .args(["gen-params"])
        .env("FQH_SEED", "42")
        .output()
        .unwrap();
    assert_eq!(stdout(&env), flag);
    assert_ne!(ok(&["gen-params", "--seed", "43"]), flag);
}

#[test]
fn hash_output_shapes() {
    let dir = TempDir::new().unwrap();
    let p5 = gen(&dir, "p5.json", &["--seed", "1"]);
    let p6 = gen(&dir, "p6.json", &["--qanc", "6", "--seed", "1"]);

    let hex = ok(&["hash", "--params", &p5, "--message", SAMPLE_MESSAGE]);
    assert_eq!(hex.len(), 41);
    assert!(hex.ends_with('\n'));
    assert!(hex
        .trim_end()
        .chars()
        .all(|c| c.is_ascii_digit() || c.is_ascii_uppercase()));

    let hex6 = ok(&["hash", "--params", &p6, "--message", SAMPLE_MESSAGE]);
    assert_eq!(hex6.trim_end().len(), 96);

    let bits = ok(&["hash", "--params", &p5, "--message", SAMPLE_MESSAGE, "--format", "bits"]);
    assert_eq!(bits.trim_end().len(), 160);

    let doc: Value = serde_json::from_str(&ok(&[
        "hash",
        "--params",
        &p5,
        "--message",
        SAMPLE_MESSAGE,
        "--format",
        "json",
    ]))
    .unwrap();
    assert_eq!(doc["hex"], hex.trim_end());
    assert_eq!(doc["bits"], bits.trim_end());
    assert_eq!(doc["L"], 160);
    let digest = params_file::digest(&params_file::load(Path::new(&p5)).unwrap());
    assert_eq!(doc["params_digest"], digest.as_str());

    let o = fqh(&["hash", "--params", &p5, "--message", SAMPLE_MESSAGE]);
    assert_eq!(stderr(&o), format!("params_digest={digest}\n"));
}

#[test]
fn hash_is_deterministic_and_matches_generated_instance() {
    let dir = TempDir::new().unwrap();
    let p = gen(&dir, "p.json", &["--dim", "4", "--seed", "9"]);
    let a = fqh(&["hash", "--params", &p, "--message", SAMPLE_MESSAGE]);
    let b = fqh(&["hash", "--params", &p, "--message", SAMPLE_MESSAGE]);
    assert_eq!(a.stdout, b.stdout);
    let inline = ok(&["hash", "--dim", "4", "--seed", "9", "--message", SAMPLE_MESSAGE]);
    assert_eq!(stdout(&a), inline);

    let shots_a = ok(&[
        "hash",
        "--params",
        &p,
        "--message",
        SAMPLE_MESSAGE,
        "--shots",
        "500",
        "--seed",
        "2",
    ]);
    let shots_b = ok(&[
        "hash",
        "--params",
        &p,
        "--message",
        SAMPLE_MESSAGE,
        "--shots",
        "500",
        "--seed",
        "2",
    ]);
    assert_eq!(shots_a, shots_b);
}

#[test]
fn message_sources_agree() {
    let dir = TempDir::new().unwrap();
    let p = gen(&dir, "p.json", &["--seed", "5"]);
    let file = dir.path().join("m.bin");
    fs::write(&file, [0xA5u8, 0x0F]).unwrap();
    let bits = ok(&["hash", "--params", &p, "--message", "1010010100001111"]);
    assert_eq!(ok(&["hash", "--params", &p, "--message-hex", "A50F"]), bits);
    assert_eq!(ok(&["hash", "--params", &p, "--message-hex", "a50f"]), bits);
    assert_eq!(
        ok(&["hash", "--params", &p, "--message-file", file.to_str().unwrap()]),
        bits
    );
}

#[test]
fn errors_have_distinct_exit_codes() {
    let dir = TempDir::new().unwrap();
    let p = gen(&dir, "p.json", &["--seed", "5"]);
    let bad = dir.path().join("bad.json");
    fs::write(&bad, "{\"schema_version\": 1}").unwrap();
    let missing = dir.path().join("missing");
    let missing = missing.to_str().unwrap();

    let cases: [(&[&str], i32); 7] = [
        (&["hash", "--params", &p, "--message", "01x1"], exit::INPUT_SYNTAX),
        (&["hash", "--params", &p, "--message-hex", "G0"], exit::INPUT_SYNTAX),
        (&["hash", "--params", &p, "--message", ""], exit::INPUT_SYNTAX),
        (
            &["hash", "--params", &p, "--message-file", missing],
            exit::MESSAGE_UNREADABLE,
        ),
        (
            &["hash", "--params", missing, "--message", "01"],
            exit::PARAMS_UNREADABLE,
        ),
        (
            &["hash", "--params", bad.to_str().unwrap(), "--message", "01"],
            exit::PARAMS_INVALID,
        ),
        (
            &["hash", "--params", &p, "--message", "01", "--message-hex", "A"],
            exit::USAGE,
        ),
    ];
    for (args, code) in cases {
        assert_eq!(fqh(args).status.code(), Some(code), "{args:?}");
    }
    assert_eq!(fqh(&["hash", "--params", &p]).status.code(), Some(exit::USAGE));
    assert_eq!(
        fqh(&["hash", "--params", &p, "--qanc", "3", "--message", "01"])
            .status
            .code(),
        Some(exit::USAGE)
    );
    let unwritable = dir.path().join("no/such/dir/out.json");
    assert_eq!(
        fqh(&["gen-params", "--out", unwritable.to_str().unwrap()])
            .status
            .code(),
        Some(exit::OUTPUT_FAILED)
    );
}

#[test]
fn sensitivity_report_and_csv() {
    let dir = TempDir::new().unwrap();
    let p = gen(&dir, "p.json", &["--seed", "7"]);
    let json = dir.path().join("s.json");
    let csv = dir.path().join("s.csv");
    let args = [
        "sensitivity",
        "--params",
        &p,
        "--message",
        SAMPLE_MESSAGE,
        "--out",
        json.to_str().unwrap(),
        "--csv",
        csv.to_str().unwrap(),
    ];
    let summary = ok(&args);
    assert!(summary.starts_with("distinct="), "{summary}");
    let first_json = fs::read(&json).unwrap();
    let first_csv = fs::read_to_string(&csv).unwrap();
    ok(&args);
    assert_eq!(fs::read(&json).unwrap(), first_json);
    assert_eq!(fs::read_to_string(&csv).unwrap(), first_csv);

    let lines: Vec<&str> = first_csv.lines().collect();
    assert_eq!(lines[0], "condition,hex,hamming");
    assert_eq!(lines.len(), 6);
    assert!(lines[1].ends_with(",0"));
    let doc = json_file(&json);
    assert_eq!(doc["command"], "sensitivity");
    assert_eq!(doc["report"]["entries"].as_array().unwrap().len(), 5);
    assert_eq!(doc["report"]["entries"][0]["hex"], lines[1].split(',').nth(1).unwrap());
}

#[test]
fn inapplicable_sensitivity_condition_is_reported_not_fatal() {
    let dir = TempDir::new().unwrap();
    let p = gen(&dir, "p.json", &["--seed", "7"]);
    let json = dir.path().join("s.json");
    let summary = ok(&[
        "sensitivity",
        "--params",
        &p,
        "--message",
        "1111",
        "--out",
        json.to_str().unwrap(),
    ]);
    assert!(summary.contains("inapplicable=1"), "{summary}");
    assert_eq!(json_file(&json)["report"]["inapplicable"][0]["condition"], 2);

    let strict = fqh(&["sensitivity", "--params", &p, "--message", "1111", "--check"]);
    assert_eq!(strict.status.code(), Some(exit::CHECK_FAILED));
}

#[test]
fn collision_summary_and_csv() {
    let dir = TempDir::new().unwrap();
    let csv = dir.path().join("c.csv");
    let json = dir.path().join("c.json");
    let args = [
        "collision",
        "--trials",
        "40",
        "--seed",
        "3",
        "--csv",
        csv.to_str().unwrap(),
        "--out",
        json.to_str().unwrap(),
    ];
    let summary = ok(&args);
    let doc = json_file(&json);
    let collisions = doc["report"]["collisions"].as_u64().unwrap();
    assert_eq!(
        summary,
        format!("collisions={collisions} rate={:?}\n", collisions as f64 / 40.0)
    );
    let text = fs::read_to_string(&csv).unwrap();
    assert_eq!(text.lines().next(), Some("trial,collision"));
    assert_eq!(text.lines().count(), 41);
    assert_eq!(ok(&args), summary);
    assert_eq!(fs::read_to_string(&csv).unwrap(), text);
}

#[test]
fn avalanche_summary_csv_and_check() {
    let dir = TempDir::new().unwrap();
    let csv = dir.path().join("a.csv");
    let json = dir.path().join("a.json");
    let args = [
        "avalanche",
        "--trials",
        "30",
        "--dim",
        "8",
        "--seed",
        "1",
        "--csv",
        csv.to_str().unwrap(),
        "--out",
        json.to_str().unwrap(),
    ];
    let summary = ok(&args);
    let doc = json_file(&json);
    let mean = doc["report"]["mean"].as_f64().unwrap();
    let sem = doc["report"]["sem"].as_f64().unwrap();
    let max = doc["report"]["max"].as_f64().unwrap();
    assert_eq!(summary, format!("mean={mean:.1} sem={sem:.2} max={max:.1}\n"));
    let text = fs::read_to_string(&csv).unwrap();
    assert_eq!(text.lines().next(), Some("trial,avalanche_pct"));
    assert_eq!(text.lines().count(), 31);
    assert_eq!(doc["check"]["enabled"], false);
    assert_eq!(ok(&args), summary);

    let checked = fqh(&["avalanche", "--trials", "30", "--dim", "8", "--seed", "1", "--check"]);
    let expected = if mean >= 50.0 { exit::OK } else { exit::CHECK_FAILED };
    assert_eq!(checked.status.code(), Some(expected));
}

#[test]
fn reliability_is_one_in_exact_mode() {
    let dir = TempDir::new().unwrap();
    let p = gen(&dir, "p.json", &["--dim", "8", "--seed", "2"]);
    let summary = ok(&[
        "reliability",
        "--params",
        &p,
        "--messages",
        "10",
        "--regenerations",
        "10",
        "--check",
    ]);
    assert_eq!(summary, "reliability=1.0 identical=100/100\n");
}

#[test]
fn analysis_rejects_bad_configuration() {
    assert_eq!(
        fqh(&["avalanche", "--trials", "1"]).status.code(),
        Some(exit::INVALID_CONFIG)
    );
    assert_eq!(
        fqh(&["collision", "--dim", "6"]).status.code(),
        Some(exit::INVALID_CONFIG)
    );
    assert_eq!(
        fqh(&["reliability", "--messages", "0"]).status.code(),
        Some(exit::INVALID_CONFIG)
    );
}

#[test]
fn one_mebibyte_message_file() {
    let dir = TempDir::new().unwrap();
    let p = gen(&dir, "p.json", &["--seed", "4"]);
    let file = dir.path().join("big.bin");
    fs::write(
        &file,
        (0..1u32 << 20)
            .map(|i| (i.wrapping_mul(2_654_435_761) >> 24) as u8)
            .collect::<Vec<_>>(),
    )
    .unwrap();
    let out = ok(&["hash", "--params", &p, "--message-file", file.to_str().unwrap()]);
    assert_eq!(out.lines().count(), 1);
    assert_eq!(out.trim_end().len(), 40);
}
