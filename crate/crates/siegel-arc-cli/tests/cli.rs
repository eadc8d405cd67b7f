//! End-to-end runs of the `siegel-arc` binary.

use std::collections::HashSet;
use std::fs;
use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

const POLYDISK: [&str; 8] = ["--b", "2,1", "--c", "1,0.5", "--d", "3,2", "--alpha", "0,0"];
const GENERIC: [&str; 8] = ["--b", "2,1", "--c", "1,0.5", "--d", "3,2", "--alpha", "0.4,1.3"];

fn run(args: &[&str]) -> Output {
    run_with_stdin(args, None)
}

fn run_with_stdin(args: &[&str], stdin: Option<&[u8]>) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_siegel-arc"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary starts");
    {
        let mut pipe = child.stdin.take().expect("stdin is piped");
        if let Some(bytes) = stdin {
            pipe.write_all(bytes).expect("stdin accepts input");
        }
    }
    child.wait_with_output().expect("binary finishes")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("stdout is not JSON ({e}): {}", String::from_utf8_lossy(&out.stdout)))
}

fn with<'a>(base: &[&'a str], extra: &[&'a str]) -> Vec<&'a str> {
    base.iter().chain(extra).copied().collect()
}

fn assert_usage_error(out: &Output) {
    assert_eq!(out.status.code(), Some(2), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let err: Value = serde_json::from_slice(&out.stderr).expect("error document on stderr");
    assert!(err["error"].is_string() && err["message"].is_string(), "{err}");
}

#[test]
fn hexagon_build_gives_the_standard_polydisk_hexagon() {
    let out = run(&with(&["hexagon", "build"], &POLYDISK));
    assert!(out.status.success());
    let doc = json(&out);
    let six = doc["sixTuple"].as_array().expect("six-tuple");
    assert_eq!(six.len(), 6);
    // first entry is the point at infinity: basis spanning the second factor
    assert_eq!(six[0], serde_json::json!([[0.0, 0.0], [0.0, 0.0], [1.0, 0.0], [0.0, 1.0]]));
    assert_eq!(six[2], serde_json::json!([[1.0, 0.0], [0.0, 1.0], [1.0, 0.0], [0.0, 1.0]]));
    assert_eq!(six[5], serde_json::json!([[1.0, 0.0], [0.0, 1.0], [0.0, 0.0], [0.0, 0.0]]));
    // every finite entry is a diagonal chart [X; I]; A = e^{-b}, C = e^{c}
    let chart = |k: usize| -> [f64; 4] {
        let v = &six[k];
        [v[0][0].as_f64().unwrap(), v[0][1].as_f64().unwrap(), v[1][0].as_f64().unwrap(), v[1][1].as_f64().unwrap()]
    };
    for k in 1..5 {
        let x = chart(k);
        assert!(x[1] == 0.0 && x[2] == 0.0, "entry {k} is not diagonal: {x:?}");
    }
    let (a, c) = (chart(1), chart(3));
    assert!((a[0] - (-1.0f64).exp()).abs() < 1e-12 && (a[3] - (-2.0f64).exp()).abs() < 1e-12);
    assert!((c[0] - 1.0f64.exp()).abs() < 1e-12 && (c[3] - 0.5f64.exp()).abs() < 1e-12);
    assert_eq!(doc["coords"]["type"], "GEN");
}

#[test]
fn hexagon_coords_roundtrips_through_stdin() {
    let built = run(&with(&["hexagon", "build"], &GENERIC));
    let out = run_with_stdin(&["hexagon", "coords"], Some(&built.stdout));
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let c = json(&out);
    let close = |v: &Value, x: f64| (v.as_f64().unwrap() - x).abs() < 1e-9;
    assert!(close(&c["b"][0], 2.0) && close(&c["b"][1], 1.0));
    assert!(close(&c["c"][0], 1.0) && close(&c["c"][1], 0.5));
    assert!(close(&c["d"][0], 3.0) && close(&c["d"][1], 2.0));
    assert!(close(&c["alpha1"], 0.4) && close(&c["alpha2"], 1.3));
}

#[test]
fn malformed_json_exits_2() {
    assert_usage_error(&run_with_stdin(&["hexagon", "coords"], Some(b"{\"sixTuple\": [")));
    assert_usage_error(&run_with_stdin(&["hexagon", "coords"], Some(b"{\"sixTuple\": 3}")));
}

#[test]
fn invalid_parameters_exit_2() {
    // b must be sorted
    assert_usage_error(&run(&["hexagon", "build", "--b", "1,2", "--c", "1,0.5", "--d", "3,2"]));
    assert_usage_error(&run(&["hexagon", "build", "--b", "2,x", "--c", "1,0.5", "--d", "3,2"]));
    // θ on a side whose reflection set has two elements
    assert_usage_error(&run(&with(&["rep", "build", "--refl", "k:0.3,st,st"], &GENERIC)));
    assert_usage_error(&run(&["malefic", "scan", "--b", "1,0.5", "--d", "1,0.5", "--grid", "1,0.5,0.1"]));
    assert_usage_error(&run(&["hexagon", "build", "--bogus"]));
    assert_usage_error(&run(&with(&["hexagon", "build", "--format", "svg"], &POLYDISK)));
}

#[test]
fn rep_build_emits_generators_and_a_passing_validation() {
    let out = run(&with(&["rep", "build", "--refl", "st,st,st"], &POLYDISK));
    assert!(out.status.success());
    let doc = json(&out);
    for gen in ["g", "h"] {
        assert_eq!(doc["generators"][gen]["matrix"].as_array().map(Vec::len), Some(4));
        assert_eq!(doc["generators"][gen]["kind"], "symplectic");
    }
    assert_eq!(doc["validation"]["passed"], true);
}

#[test]
fn rep_validate_accepts_documents_and_rejects_tampering() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("rep.json");
    let built = run(&with(&["rep", "build", "--refl", "st,ex,st", "--out", path.to_str().unwrap()], &GENERIC));
    assert!(built.status.success() && built.stdout.is_empty());
    let ok = run(&["rep", "validate", "--input", path.to_str().unwrap()]);
    assert!(ok.status.success());
    assert_eq!(json(&ok)["passed"], true);

    // swap two generators: still reflections, no longer the right sides
    let mut doc: Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    let refl = doc["reflections"].as_array_mut().unwrap();
    refl.swap(0, 1);
    fs::write(&path, serde_json::to_string(&doc).unwrap()).unwrap();
    let bad = run(&["rep", "validate", "--input", path.to_str().unwrap()]);
    assert_eq!(bad.status.code(), Some(1));
    assert_eq!(json(&bad)["passed"], false);
}

#[test]
fn rep_orbit_one_is_a_maximal_twelve_tuple() {
    let out = run(&with(&["rep", "orbit", "--n", "1"], &POLYDISK));
    assert!(out.status.success());
    let doc = json(&out);
    assert_eq!(doc["size"], 12);
    assert_eq!(doc["labels"].as_array().unwrap().len(), 12);
    assert_eq!(doc["lagrangians"].as_array().unwrap().len(), 12);
    assert_eq!(doc["maximal"], true);
}

#[test]
fn rep_delta_over_the_eight_branches_gives_four_sign_pairs() {
    let mut pairs = HashSet::new();
    for mask in 0..8 {
        let k = |bit: u32| if mask & bit == 0 { "st" } else { "ex" };
        let refl = format!("{},{},{}", k(1), k(2), k(4));
        let mut args = vec!["rep", "delta", "--refl", refl.as_str()];
        args.extend(GENERIC);
        let out = run(&args);
        assert!(out.status.success());
        let s = json(&out);
        pairs.insert((s["s1"].as_i64().unwrap(), s["s2"].as_i64().unwrap()));
    }
    assert_eq!(pairs.len(), 4, "{pairs:?}");
}

#[test]
fn verify_suites_pass_and_unknown_suite_exits_2() {
    for suite in ["roundtrip", "orthogonality"] {
        let out = run(&["verify", suite, "--seed", "7", "--samples", "20"]);
        assert!(out.status.success(), "{suite}: {}", String::from_utf8_lossy(&out.stdout));
        assert_eq!(json(&out)["passed"], true);
    }
    let out = run(&["verify", "unknown"]);
    assert_usage_error(&out);
}

#[test]
fn verify_roundtrip_with_default_samples() {
    let out = run(&["verify", "roundtrip", "--seed", "7"]);
    assert!(out.status.success());
    let r = json(&out);
    assert_eq!(r["samples"], 800);
    assert_eq!(r["failures"], 0);
}

fn degenerate_length_scan(alpha: &str) -> (String, Value) {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("scan.csv");
    let out = run(&["malefic", "scan", "--b", "40,0.01", "--d", "35,0.01", "--alpha", alpha, "--out", csv.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    (fs::read_to_string(csv).unwrap(), json(&out))
}

#[test]
fn degenerate_length_scans_report_the_gap_and_the_collision() {
    let (_, zero) = degenerate_length_scan("0,0");
    assert_eq!(zero["surjectivityGapFound"], true);
    let (_, pi) = degenerate_length_scan("pi,pi");
    assert_eq!(pi["injectivityCollisionFound"], true);
}

#[test]
fn scan_csv_schema() {
    let (csv, summary) = degenerate_length_scan("0,0");
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("c1,c2,F1,F2"));
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), summary["cells"].as_u64().unwrap() as usize);
    // 100 axis points restricted to c₁ ≥ c₂
    assert_eq!(rows.len(), 100 * 101 / 2);
    for cell in rows.iter().flatten() {
        assert!(!cell.contains(['e', 'E']), "scientific notation in {cell}");
        let digits: String = cell.chars().filter(char::is_ascii_digit).collect();
        assert_eq!(digits.trim_start_matches('0').len(), 12, "{cell}");
    }
    // row-major: c₁ is the slow index
    let c1: Vec<f64> = rows.iter().map(|r| r[0].parse().unwrap()).collect();
    assert!(c1.windows(2).all(|w| w[0] <= w[1]));
    assert_eq!(rows[0][..2], ["0.100000000000", "0.100000000000"]);
    assert_eq!(rows[1][..2], ["0.200000000000", "0.100000000000"]);
}

#[test]
fn diagonal_scan_matches_the_h2_cross_ratio() {
    let out = run(&["malefic", "scan", "--b", "0.7,0.7", "--d", "1.1,1.1", "--grid", "0.1,3,0.1", "--format", "json"]);
    assert!(out.status.success());
    let doc = json(&out);
    let (b, d) = (0.7f64, 1.1f64);
    for row in doc["rows"].as_array().unwrap() {
        let (c1, c2) = (row["c1"].as_f64().unwrap(), row["c2"].as_f64().unwrap());
        if (c1 - c2).abs() > 1e-12 {
            continue;
        }
        let (a, bb, cc, dd) = ((-2.0 * b).exp(), 1.0, c1.exp(), (c1 + 2.0 * d).exp());
        let y = ((dd - bb) * (a - cc) / ((a - bb) * (dd - cc))).ln();
        for f in ["f1", "f2"] {
            assert!((row[f].as_f64().unwrap() - y).abs() < 1e-9, "c = {c1}: {} vs {y}", row[f]);
        }
    }
}

#[test]
fn outputs_are_byte_identical_across_runs() {
    let scan = ["malefic", "scan", "--b", "3,1", "--d", "2,0.5", "--alpha", "0.3,2", "--grid", "0.2,4,0.2"];
    assert_eq!(run(&scan).stdout, run(&scan).stdout);
    let seq: Vec<&str> = scan.iter().copied().chain(["--sequential"]).collect();
    assert_eq!(run(&scan).stdout, run(&seq).stdout);
    let rep = with(&["rep", "build", "--refl", "ex,st,ex"], &GENERIC);
    assert_eq!(run(&rep).stdout, run(&rep).stdout);
    let v = ["verify", "representations", "--seed", "11", "--samples", "2"];
    assert_eq!(run(&v).stdout, run(&v).stdout);
}

#[test]
fn chain_svg_draws_vertices_segments_and_angles() {
    let out = run(&with(&["hexagon", "chain"], &GENERIC));
    assert!(out.status.success());
    let svg = String::from_utf8(out.stdout).unwrap();
    assert!(svg.starts_with("<svg") && svg.trim_end().ends_with("</svg>"));
    assert_eq!(svg.matches("<polyline").count(), 3);
    for label in ["iA", "iId", "iC", "iD", "α1 = 0.400000", "α2 = 1.300000"] {
        assert!(svg.contains(label), "missing {label}");
    }
    // diagonal c collapses one segment and drops both angles
    let out = run(&["hexagon", "chain", "--b", "2,1", "--c", "1,1", "--d", "3,2", "--alpha", "0.4,1.3", "--format", "json"]);
    let chain = json(&out);
    assert_eq!(chain["vertices"].as_array().unwrap().len(), 3);
}
