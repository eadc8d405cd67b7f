//! Seeded invariant suites behind `siegel-arc verify`.

use std::collections::HashSet;
use std::f64::consts::PI;

use rand::Rng;
use serde::Serialize;
use siegel_arc::hexagon::{malefic_map, ArcCoordinates, GenericityType, OrderedHexagon};
use siegel_arc::maxrep::{
    build_w3_rep, coords_from_rep, delta_sign, orbit_tuples, restrict_to_f2, s0_verdict, validate_max_rep, S0Verdict,
    SParameters, REP_TOL,
};
use siegel_arc::par::Exec;
use siegel_arc::reflection::KElement;
use siegel_arc::sampling::{rng, sample_coords, sample_sparams, sample_weyl, LengthRange};
use siegel_arc::scan::{closed_form_pi, closed_form_zero, h2_cross_ratio};
use siegel_arc::symmat::WeylVector;
use siegel_arc::GeomError;

pub const SUITES: [&str; 7] = [
    "roundtrip",
    "orthogonality",
    "reversal",
    "closed-forms",
    "representations",
    "components",
    "coincidences",
];

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SuiteReport {
    pub suite: String,
    pub seed: u64,
    pub samples: usize,
    pub failures: usize,
    /// Largest measured error (or smallest margin, for margin-type checks).
    pub worst: f64,
    pub tolerance: f64,
    pub first_failure: Option<String>,
    pub passed: bool,
}

/// Outcome of one sample: `Ok(error)` to compare against the tolerance, or a
/// description of a hard failure.
type Check = Result<f64, String>;

fn report(suite: &str, seed: u64, tolerance: f64, checks: Vec<Check>) -> SuiteReport {
    let mut failures = 0;
    let mut worst: f64 = 0.0;
    let mut first_failure = None;
    for (k, c) in checks.iter().enumerate() {
        let msg = match c {
            Ok(e) if *e <= tolerance => {
                worst = worst.max(*e);
                None
            }
            Ok(e) => {
                worst = worst.max(if e.is_nan() { f64::INFINITY } else { *e });
                Some(format!("sample {k}: error {e:.3e}"))
            }
            Err(m) => Some(format!("sample {k}: {m}")),
        };
        if let Some(m) = msg {
            failures += 1;
            first_failure.get_or_insert(m);
        }
    }
    SuiteReport {
        suite: suite.into(),
        seed,
        samples: checks.len(),
        failures,
        worst,
        tolerance,
        first_failure,
        passed: failures == 0,
    }
}

fn err(e: GeomError) -> String {
    format!("{}: {e}", e.kind())
}

fn stratified_coords(seed: u64, per_stratum: usize, range: LengthRange) -> Vec<ArcCoordinates> {
    let mut r = rng(seed);
    GenericityType::ALL
        .iter()
        .flat_map(|&t| (0..per_stratum).map(move |_| t))
        .map(|t| sample_coords(&mut r, t, range))
        .collect()
}

fn stratified_params(seed: u64, per_stratum: usize) -> Vec<SParameters> {
    let mut r = rng(seed);
    GenericityType::ALL
        .iter()
        .flat_map(|&t| (0..per_stratum).map(move |_| t))
        .map(|t| sample_sparams(&mut r, t, LengthRange::REPS))
        .collect()
}

/// coords → hexagon → coords.
fn roundtrip(seed: u64, n: usize) -> SuiteReport {
    let pts = stratified_coords(seed, n, LengthRange::COORDS);
    let checks = Exec::Parallel.map(&pts, |p| {
        OrderedHexagon::from_coords(p).coords().map(|q| q.max_difference(p)).map_err(err)
    });
    report("roundtrip", seed, 1e-8, checks)
}

/// Consecutive tubes are orthogonal and the twelve-tuple is maximal.
fn orthogonality(seed: u64, n: usize) -> SuiteReport {
    let pts = stratified_coords(seed, n, LengthRange::COORDS);
    let checks = Exec::Parallel.map(&pts, |p| {
        let h = OrderedHexagon::from_coords(p);
        if !h.is_maximal() {
            return Err("twelve-tuple is not maximal".into());
        }
        h.orthogonality_defects().map(|d| d.into_iter().fold(0.0, f64::max)).map_err(err)
    });
    report("orthogonality", seed, 1e-8, checks)
}

/// Reading a hexagon backwards reverses its coordinates.
fn reversal(seed: u64, n: usize) -> SuiteReport {
    let pts = stratified_coords(seed, n, LengthRange::COORDS);
    let checks = Exec::Parallel.map(&pts, |p| {
        let q = p.reversed();
        let back = q.reversed();
        let h = OrderedHexagon::from_coords(&q);
        let coords = h.coords().map_err(err)?;
        Ok(back.max_difference(p).max(coords.max_difference(&q)))
    });
    report("reversal", seed, 1e-8, checks)
}

/// The malefic map against its polydisk closed forms at `α ∈ {(0,0), (π,π)}`
/// and against the `H²` cross-ratio on diagonal lengths.
fn closed_forms(seed: u64, n: usize) -> SuiteReport {
    let mut r = rng(seed);
    let range = LengthRange { lo: 0.1, hi: 3.0 };
    let mut checks = Vec::new();
    for _ in 0..n {
        let (b, c, d) = (sample_weyl(&mut r, range, false), sample_weyl(&mut r, range, false), sample_weyl(&mut r, range, false));
        let f0 = malefic_map(&b, &d, 0.0, 0.0, &c);
        let fpi = malefic_map(&b, &d, PI, PI, &c);
        checks.push(Ok(f0.dist(&closed_form_zero(&b, &d, &c)).max(fpi.dist(&closed_form_pi(&b, &d, &c)))));
        let (tb, tc, td) = (r.gen_range(0.1..3.0), r.gen_range(0.1..3.0), r.gen_range(0.1..3.0));
        let f = malefic_map(&WeylVector::diagonal(tb), &WeylVector::diagonal(td), 0.0, 0.0, &WeylVector::diagonal(tc));
        let y = h2_cross_ratio(tb, tc, td).ln();
        checks.push(Ok((f.x1 - y).abs().max((f.x2 - y).abs())));
    }
    report("closed-forms", seed, 1e-9, checks)
}

/// Build, validate, recover parameters, and check the first orbit tuple.
fn representations(seed: u64, n: usize) -> SuiteReport {
    let params = stratified_params(seed, n);
    let checks = Exec::Parallel.map(&params, |p| {
        let w = build_w3_rep(p).map_err(err)?;
        let v = validate_max_rep(&w);
        if !v.passed {
            return Err(format!("validation failed: {}", v.failures.join("; ")));
        }
        let o = orbit_tuples(&w, 1).map_err(err)?;
        if !o.maximal || o.lagrangians.len() != 12 {
            return Err("first orbit tuple is not a maximal 12-tuple".into());
        }
        let q = coords_from_rep(&w).map_err(err)?;
        Ok(q.max_difference(&p.canonical()))
    });
    report("representations", seed, REP_TOL, checks)
}

/// The eight `{st, ex}³` branches over one generic point give four distinct
/// sign pairs, each exactly twice.
fn components(seed: u64, n: usize) -> SuiteReport {
    let pts = stratified_coords(seed, n, LengthRange::REPS);
    let generic: Vec<_> = pts.into_iter().filter(|p| p.genericity() == GenericityType::Gen).collect();
    let checks = Exec::Parallel.map(&generic, |p| {
        let mut seen = std::collections::HashMap::new();
        for mask in 0..8u8 {
            let k = |bit: u8| if mask & bit == 0 { KElement::st() } else { KElement::ex() };
            let sp = SParameters::new(*p, k(1), k(2), k(4)).map_err(err)?;
            let w = build_w3_rep(&sp).map_err(err)?;
            let s = delta_sign(&restrict_to_f2(&w)).map_err(err)?;
            *seen.entry((s.s1, s.s2)).or_insert(0) += 1;
        }
        if seen.len() == 4 && seen.values().all(|&c| c == 2) {
            Ok(0.0)
        } else {
            Err(format!("sign pairs {seen:?}"))
        }
    });
    report("components", seed, 0.0, checks)
}

/// On polydisk hexagons, branches with equal products `K₁K₂`, `K₂K₃` are
/// identified and no other pair is flagged.
fn coincidences(seed: u64, n: usize) -> SuiteReport {
    let mut r = rng(seed);
    let range = LengthRange::REPS;
    let mut pts = Vec::new();
    for _ in 0..n {
        let (b, c, d) = (sample_weyl(&mut r, range, false), sample_weyl(&mut r, range, false), sample_weyl(&mut r, range, false));
        let a1 = if r.gen_bool(0.5) { 0.0 } else { PI };
        let a2 = if r.gen_bool(0.5) { 0.0 } else { PI };
        pts.push(ArcCoordinates::new(b, c, d, a1, a2).expect("sampled lengths are valid"));
    }
    let checks = Exec::Parallel.map(&pts, |p| {
        let branches: Vec<SParameters> = (0..8u8)
            .map(|mask| {
                let k = |bit: u8| if mask & bit == 0 { KElement::st() } else { KElement::ex() };
                SParameters::new(*p, k(1), k(2), k(4))
            })
            .collect::<Result<_, _>>()
            .map_err(err)?;
        let mut classes = HashSet::new();
        for (i, p1) in branches.iter().enumerate() {
            for (j, p2) in branches.iter().enumerate().skip(i + 1) {
                match s0_verdict(p1, p2).map_err(err)? {
                    S0Verdict::FlaggedCoincidence => return Err(format!("branches {i} and {j} flagged")),
                    S0Verdict::Equivalent => {
                        classes.insert((i, j));
                    }
                    S0Verdict::Distinct => {}
                }
            }
        }
        // st/ex flips on all three sides pair up the eight branches
        if classes.len() == 4 {
            Ok(0.0)
        } else {
            Err(format!("{} equivalent pairs, expected 4", classes.len()))
        }
    });
    report("coincidences", seed, 0.0, checks)
}

/// Default sample count of a suite (per stratum where stratified).
pub fn default_samples(suite: &str) -> usize {
    match suite {
        "roundtrip" | "orthogonality" | "reversal" => 100,
        "closed-forms" => 200,
        "representations" => 8,
        _ => 10,
    }
}

pub fn run(suite: &str, seed: u64, samples: usize) -> Option<SuiteReport> {
    Some(match suite {
        "roundtrip" => roundtrip(seed, samples),
        "orthogonality" => orthogonality(seed, samples),
        "reversal" => reversal(seed, samples),
        "closed-forms" => closed_forms(seed, samples),
        "representations" => representations(seed, samples),
        "components" => components(seed, samples),
        "coincidences" => coincidences(seed, samples),
        _ => return None,
    })
}
