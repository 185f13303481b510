//! End-to-end tests of the `heiscf` binary: known expansions, exit-code
//! policy, file formats, and rerun determinism.

use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_heiscf"))
}

fn run(dir: &Path, args: &[&str]) -> Output {
    bin()
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn assert_exit(out: &Output, code: i32) {
    assert_eq!(
        out.status.code(),
        Some(code),
        "stdout:\n{}\nstderr:\n{}",
        stdout(out),
        stderr(out)
    );
}

fn read_json(path: &Path) -> serde_json::Value {
    serde_json::from_str(&std::fs::read_to_string(path).expect("file exists")).expect("valid JSON")
}

#[test]
fn expand_half_matches_known_expansion() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(dir.path(), &["expand", "--point", "1/2,0,0"]);
    assert_exit(&out, 0);
    let json = read_json(&dir.path().join("digits.json"));
    assert_eq!(json["gamma0"], serde_json::json!([1, 0, 0]));
    assert_eq!(json["digits"], serde_json::json!([[2, 0, 0]]));
    assert_eq!(json["finite"], serde_json::json!(true));
    assert_eq!(json["termination"], serde_json::json!("finite"));
    // the exact certificate of the 0-digit convergent: dist⁴ = 1/16
    assert_eq!(json["certificates"][0]["dist4"], serde_json::json!("1/16"));
    assert!(dir.path().join("manifest.json").exists());
}

#[test]
fn expand_integer_points_have_no_fractional_digits() {
    let dir = tempfile::tempdir().unwrap();
    for (point, gamma0) in [("0,0,0", [0, 0, 0]), ("-1,0,0", [-1, 0, 0])] {
        let out = run(
            dir.path(),
            &["expand", "--point", point, "--out", "p.json", "--manifest-out", "m.json"],
        );
        assert_exit(&out, 0);
        let json = read_json(&dir.path().join("p.json"));
        assert_eq!(json["gamma0"], serde_json::json!(gamma0));
        assert_eq!(json["digits"].as_array().unwrap().len(), 0);
        assert_eq!(json["finite"], serde_json::json!(true));
    }
}

#[test]
fn expand_then_reconstruct_round_trips_exactly() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(dir.path(), &["expand", "--point", "3/7,-2/5,1/3"]);
    assert_exit(&out, 0);
    let out = run(dir.path(), &["reconstruct", "--digits", "digits.json"]);
    assert_exit(&out, 0);
    let text = stdout(&out);
    assert!(text.contains("x = 3/7"), "{text}");
    assert!(text.contains("y = -2/5"), "{text}");
    assert!(text.contains("t = 1/3"), "{text}");
    assert!(text.contains("exact"), "{text}");
}

#[test]
fn verify_accepts_generated_file() {
    let dir = tempfile::tempdir().unwrap();
    run(dir.path(), &["expand", "--point", "3/7,-2/5,1/3"]);
    let out = run(
        dir.path(),
        &["verify", "--digits", "digits.json", "--point", "3/7,-2/5,1/3"],
    );
    assert_exit(&out, 0);
    let text = stdout(&out);
    assert!(!text.contains("FAIL"), "{text}");
    assert!(text.contains("round-trip"), "{text}");
}

#[test]
fn verify_rejects_corrupted_digit_with_exit_3() {
    let dir = tempfile::tempdir().unwrap();
    run(dir.path(), &["expand", "--point", "1/2,0,0"]);
    let path = dir.path().join("digits.json");
    let mut json = read_json(&path);
    json["digits"][0] = serde_json::json!([4, 0, 0]);
    std::fs::write(&path, serde_json::to_string(&json).unwrap()).unwrap();
    let out = run(
        dir.path(),
        &["verify", "--digits", "digits.json", "--point", "1/2,0,0"],
    );
    assert_exit(&out, 3);
    assert!(stdout(&out).contains("FAIL"), "{}", stdout(&out));
}

#[test]
fn zero_fractional_digit_rejected_with_position_and_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    run(dir.path(), &["expand", "--point", "3/7,-2/5,1/3"]);
    let path = dir.path().join("digits.json");
    let mut json = read_json(&path);
    json["digits"][1] = serde_json::json!([0, 0, 0]);
    std::fs::write(&path, serde_json::to_string(&json).unwrap()).unwrap();
    for cmd in ["reconstruct", "verify"] {
        let out = run(dir.path(), &[cmd, "--digits", "digits.json"]);
        assert_exit(&out, 2);
        assert!(stderr(&out).contains("position 2"), "{}", stderr(&out));
    }
}

#[test]
fn verify_reports_tail_bounds_for_contracting_stream() {
    let dir = tempfile::tempdir().unwrap();
    // hand-built fixture: every digit has gauge ≥ 3, so the stream carries
    // a certified geometric tail bound that verify must report per n
    let fixture = serde_json::json!({
        "format_version": 1,
        "library_version": "0",
        "gamma0": [0, 0, 0],
        "digits": [[3, 0, 0], [0, 3, 0], [-4, 0, 0]],
        "finite": false,
        "termination": "digit-limit",
        "denominator_norms": [],
        "certificates": []
    });
    std::fs::write(
        dir.path().join("stream.json"),
        serde_json::to_string(&fixture).unwrap(),
    )
    .unwrap();
    let out = run(dir.path(), &["verify", "--digits", "stream.json"]);
    assert_exit(&out, 0);
    let text = stdout(&out);
    assert!(text.contains("certified tail bounds"), "{text}");
    assert!(text.contains("n =   3"), "{text}");
    assert!(!text.contains("FAIL"), "{text}");
}

#[test]
fn malformed_json_rejected_with_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("garbage.json"), "{not json").unwrap();
    let out = run(dir.path(), &["reconstruct", "--digits", "garbage.json"]);
    assert_exit(&out, 2);
    let out = run(dir.path(), &["reconstruct", "--digits", "missing.json"]);
    assert_exit(&out, 2);
}

#[test]
fn pringsheim_constant_three_certifies_golden_value() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(
        dir.path(),
        &["pringsheim", "--constant", "3,0,0", "--steps", "64", "--out", "p.json"],
    );
    assert_exit(&out, 0);
    // 𝕂{(3,0,0)^∞} on the axis is (−3+√5)/2 ≈ −0.3819660…
    let json = read_json(&dir.path().join("p.json"));
    let x = json["x_approx"].as_f64().unwrap();
    assert!((x - (-0.3819660112501051)).abs() < 1e-9, "x = {x}");
    assert_eq!(json["y"], serde_json::json!("0"));

    // gauge too small for the contraction regime: validation error
    let out = run(dir.path(), &["pringsheim", "--constant", "1,1,0"]);
    assert_exit(&out, 2);

    // stream too short for the tolerance: certification failure
    let out = run(
        dir.path(),
        &[
            "pringsheim",
            "--constant",
            "3,0,0",
            "--steps",
            "3",
            "--tol4",
            "1/100000000000000000000000000000000000000000000000000",
        ],
    );
    assert_exit(&out, 3);
}

#[test]
fn orbit_is_deterministic_and_terminates_on_rationals() {
    let dir = tempfile::tempdir().unwrap();
    let args = &[
        "orbit", "--seed", "pi-3,e-3,0", "--steps", "40", "--out", "orbit.csv",
    ];
    assert_exit(&run(dir.path(), args), 0);
    let first = std::fs::read(dir.path().join("orbit.csv")).unwrap();
    assert_exit(&run(dir.path(), args), 0);
    let second = std::fs::read(dir.path().join("orbit.csv")).unwrap();
    assert_eq!(first, second, "same command line must reproduce bytes");
    let text = String::from_utf8(first).unwrap();
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("# manifest: "));
    assert_eq!(lines.next().unwrap(), "n,x,y,t,digit_x,digit_y,digit_t,gauge4");
    assert_eq!(text.lines().count(), 2 + 41, "header + h0..h40");

    // a rational seed reaches the identity and stops early
    let out = run(
        dir.path(),
        &["orbit", "--seed", "1/2,0,0", "--steps", "40", "--out", "fin.csv"],
    );
    assert_exit(&out, 0);
    assert!(stdout(&out).contains("terminated"), "{}", stdout(&out));
}

#[test]
fn measure_single_bin_holds_every_iterate() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(
        dir.path(),
        &[
            "measure", "--seed", "1/3,1/7,1/2", "--steps", "100", "--grid", "1,1,1",
        ],
    );
    assert_exit(&out, 0);
    let text = std::fs::read_to_string(dir.path().join("histogram.csv")).unwrap();
    let data: Vec<&str> = text.lines().skip(2).collect();
    assert_eq!(data.len(), 1, "one bin expected:\n{text}");
    let summary = read_json(&dir.path().join("summary.json"));
    let total = summary["total"].as_u64().unwrap();
    assert!(total > 0);
    assert_eq!(data[0], format!("0,0,0,{total}"), "all iterates in the single bin");
    assert_eq!(summary["rejected"].as_u64(), Some(0));

    let out = run(dir.path(), &["measure", "--grid", "0,2,2"]);
    assert_exit(&out, 2);
}

#[test]
fn measure_stability_reports_small_total_variation() {
    let dir = tempfile::tempdir().unwrap();
    let args = &[
        "measure", "--steps", "50000", "--grid", "4,4,4", "--stability",
    ];
    assert_exit(&run(dir.path(), args), 0);
    let first = std::fs::read(dir.path().join("histogram.csv")).unwrap();
    let summary = read_json(&dir.path().join("summary.json"));
    let tv = summary["total_variation"].as_f64().unwrap();
    // loose screen only; the acceptance suite pins 10⁶ steps against 0.05
    assert!(tv < 0.1, "total variation {tv} unexpectedly large");
    assert!(summary["certified_prefix"].as_u64().unwrap() >= 60);
    assert_exit(&run(dir.path(), args), 0);
    let second = std::fs::read(dir.path().join("histogram.csv")).unwrap();
    assert_eq!(first, second, "same command line must reproduce bytes");
}

#[test]
fn stats_frequencies_sum_to_one() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(
        dir.path(),
        &["stats", "--seed", "pi-3,e-3,0", "--out", "stats.json"],
    );
    assert_exit(&out, 0);
    let json = read_json(&dir.path().join("stats.json"));
    let freqs = json["frequencies"].as_array().unwrap();
    let sum: f64 = freqs.iter().map(|f| f["frequency"].as_f64().unwrap()).sum();
    assert!((sum - 1.0).abs() < 1e-9, "frequencies sum to {sum}");
    let counts: u64 = freqs.iter().map(|f| f["count"].as_u64().unwrap()).sum();
    assert_eq!(counts, json["digits_total"].as_u64().unwrap());
    assert_eq!(json["gamma0"], serde_json::json!([0, 0, 0]));
    assert!(json["growth_rate_last"].as_f64().unwrap() > 0.0);
}

#[test]
fn cylinder_probe_runs_and_rejects_zero_digits() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(
        dir.path(),
        &[
            "cylinder", "--word", "3,0,0;0,3,0", "--samples", "2000",
            "--apply", "1/10,1/10,0", "--out", "cyl.json",
        ],
    );
    assert_exit(&out, 0);
    let json = read_json(&dir.path().join("cyl.json"));
    assert_eq!(json["word"], serde_json::json!([[3, 0, 0], [0, 3, 0]]));
    let req = json["samples_requested"].as_u64().unwrap();
    let dom = json["samples_in_domain"].as_u64().unwrap();
    let kept = json["samples_kept"].as_u64().unwrap();
    assert!(kept <= dom && dom <= req);
    assert!(json["diameter4"].as_f64().unwrap() > 0.0);

    let out = run(dir.path(), &["cylinder", "--word", "1,0,0;0,0,0"]);
    assert_exit(&out, 2);
    assert!(stderr(&out).contains("index 1"), "{}", stderr(&out));
}
