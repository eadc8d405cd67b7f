//! `siegel-arc`: build and inspect right-angled hexagons and maximal
//! representations, scan the malefic map, and run the invariant suites.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or validation
//! error (with `{"error": kind, "message": …}` on standard error).

mod output;
mod svg;
mod verify;

use std::fs;
use std::io::{self, Read};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use siegel_arc::hexagon::{polygonal_chain, ArcCoordinates, HexagonDoc, OrderedHexagon};
use siegel_arc::maxrep::{
    build_w3_rep, delta_sign, orbit_tuples, restrict_to_f2, validate_max_rep, RepDocument, SParameters, W3MaxRep,
};
use siegel_arc::par::Exec;
use siegel_arc::reflection::KElement;
use siegel_arc::scan::{self, GridSpec, MaleficParams, ScanRow, ScanSummary};
use siegel_arc::symmat::WeylVector;
use siegel_arc::GeomError;

use output::{csv_number, emit, to_json};

#[derive(Parser)]
#[command(name = "siegel-arc", version, about = "Arc coordinates of right-angled hexagons in Sp(4,R) and maximal W3 representations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build hexagons from arc coordinates, recover coordinates, draw chains.
    #[command(subcommand)]
    Hexagon(HexagonCmd),
    /// Grid scans of the malefic map.
    #[command(subcommand)]
    Malefic(MaleficCmd),
    /// Maximal W3 representations.
    #[command(subcommand)]
    Rep(RepCmd),
    /// Run a seeded invariant suite.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Svg,
}

#[derive(Args)]
struct Common {
    /// Output file (standard output when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output format.
    #[arg(long, value_enum)]
    format: Option<Format>,
}

/// Arc coordinates given inline.
#[derive(Args, Clone)]
struct CoordArgs {
    /// Length vector b as `x1,x2` with x1 ≥ x2 ≥ 0.
    #[arg(long, allow_hyphen_values = true)]
    b: Option<String>,
    /// Length vector c as `x1,x2`.
    #[arg(long, allow_hyphen_values = true)]
    c: Option<String>,
    /// Length vector d as `x1,x2`.
    #[arg(long, allow_hyphen_values = true)]
    d: Option<String>,
    /// Angles as `a1,a2` (radians; `pi` accepted).
    #[arg(long, allow_hyphen_values = true)]
    alpha: Option<String>,
}

#[derive(Subcommand)]
enum HexagonCmd {
    /// Arc coordinates → hexagon JSON.
    Build {
        #[command(flatten)]
        coords: CoordArgs,
        #[command(flatten)]
        common: Common,
    },
    /// Hexagon JSON (file or standard input) → arc coordinates JSON.
    Coords {
        /// Hexagon document; standard input when omitted.
        #[arg(long)]
        input: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Polygonal chain of a hexagon, as SVG (default) or JSON.
    Chain {
        /// Hexagon document; inline coordinates are used when omitted.
        #[arg(long)]
        input: Option<PathBuf>,
        #[command(flatten)]
        coords: CoordArgs,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Subcommand)]
enum MaleficCmd {
    /// Evaluate F on a grid and run the gap/collision detectors.
    Scan(ScanArgs),
}

#[derive(Args)]
struct ScanArgs {
    #[arg(long, allow_hyphen_values = true)]
    b: String,
    #[arg(long, allow_hyphen_values = true)]
    d: String,
    #[arg(long, allow_hyphen_values = true, default_value = "0,0")]
    alpha: String,
    /// Grid axis as `min,max,step`.
    #[arg(long, default_value = "0.1,10,0.1")]
    grid: String,
    /// Scan the whole square instead of the Weyl chamber c1 ≥ c2.
    #[arg(long)]
    full_grid: bool,
    /// Gap detector distance.
    #[arg(long, default_value_t = scan::EPS_GAP)]
    eps_gap: f64,
    /// Probed diagonal window `lo,hi`.
    #[arg(long, default_value = "0.5,8")]
    window: String,
    /// Collision detector distance.
    #[arg(long, default_value_t = scan::EPS_COL)]
    eps_col: f64,
    /// Minimal Chebyshev index separation of colliding cells.
    #[arg(long, default_value_t = scan::MIN_SEPARATION)]
    min_separation: usize,
    /// Where to write the summary JSON (standard output when `--out` is set
    /// and this is omitted).
    #[arg(long)]
    summary: Option<PathBuf>,
    /// Evaluate cells on one thread.
    #[arg(long)]
    sequential: bool,
    #[command(flatten)]
    common: Common,
}

/// Representation given inline or as a document.
#[derive(Args)]
struct RepInput {
    #[command(flatten)]
    coords: CoordArgs,
    /// Reflection parameters `r1,r2,r3`, each `st`, `ex` or `k:THETA`.
    #[arg(long, default_value = "st,st,st")]
    refl: String,
    /// Representation document (from `rep build`) or parameter document.
    #[arg(long)]
    input: Option<PathBuf>,
}

#[derive(Subcommand)]
enum RepCmd {
    /// Full representation document.
    Build {
        #[command(flatten)]
        rep: RepInput,
        #[command(flatten)]
        common: Common,
    },
    /// Validation report; exit 1 when a check fails.
    Validate {
        #[command(flatten)]
        rep: RepInput,
        #[command(flatten)]
        common: Common,
    },
    /// Orbit tuple of depth n and its maximality verdict.
    Orbit {
        #[command(flatten)]
        rep: RepInput,
        #[arg(long, default_value_t = 1)]
        n: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Sign pair of the restriction to the free group.
    Delta {
        #[command(flatten)]
        rep: RepInput,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Args)]
struct VerifyArgs {
    /// Suite name.
    suite: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Sample count (per stratum for stratified suites).
    #[arg(long)]
    samples: Option<usize>,
    #[command(flatten)]
    common: Common,
}

enum CliError {
    Usage(String),
    Input(String),
    Geom(GeomError),
    Io(io::Error),
    /// Output was written; the run still failed its checks.
    Verification,
}

impl From<GeomError> for CliError {
    fn from(e: GeomError) -> Self {
        CliError::Geom(e)
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e)
    }
}

type CliResult<T = ()> = Result<T, CliError>;

#[derive(Serialize)]
struct ErrorDoc<'a> {
    error: &'a str,
    message: String,
}

fn fail(kind: &str, message: String) -> ExitCode {
    eprint!("{}", to_json(&ErrorDoc { error: kind, message }));
    ExitCode::from(2)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => return fail("Usage", e.to_string().trim_end().to_string()),
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Verification) => ExitCode::from(1),
        Err(CliError::Usage(m)) => fail("Usage", m),
        Err(CliError::Input(m)) => fail("InvalidJson", m),
        Err(CliError::Geom(e)) => fail(e.kind(), e.to_string()),
        Err(CliError::Io(e)) => fail("Io", e.to_string()),
    }
}

fn run(cmd: Command) -> CliResult {
    match cmd {
        Command::Hexagon(c) => hexagon(c),
        Command::Malefic(MaleficCmd::Scan(a)) => malefic_scan(a),
        Command::Rep(c) => rep(c),
        Command::Verify(a) => verify(a),
    }
}

// ---------------------------------------------------------------- parsing

fn parse_number(s: &str) -> CliResult<f64> {
    let t = s.trim();
    let v = match t {
        "pi" => std::f64::consts::PI,
        "-pi" => -std::f64::consts::PI,
        _ => t.parse::<f64>().map_err(|_| CliError::Usage(format!("not a number: {t:?}")))?,
    };
    if v.is_finite() {
        Ok(v)
    } else {
        Err(CliError::Usage(format!("not a finite number: {t:?}")))
    }
}

fn parse_list<const N: usize>(flag: &str, s: &str) -> CliResult<[f64; N]> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != N {
        return Err(CliError::Usage(format!("--{flag} expects {N} comma-separated values, got {s:?}")));
    }
    let mut out = [0.0; N];
    for (o, p) in out.iter_mut().zip(parts) {
        *o = parse_number(p)?;
    }
    Ok(out)
}

fn parse_weyl(flag: &str, s: &str) -> CliResult<WeylVector> {
    let [x1, x2] = parse_list::<2>(flag, s)?;
    Ok(WeylVector::new(x1, x2))
}

fn required<'a>(flag: &str, v: &'a Option<String>) -> CliResult<&'a str> {
    v.as_deref().ok_or_else(|| CliError::Usage(format!("missing --{flag}")))
}

impl CoordArgs {
    fn given(&self) -> bool {
        self.b.is_some() || self.c.is_some() || self.d.is_some() || self.alpha.is_some()
    }

    fn coords(&self) -> CliResult<ArcCoordinates> {
        let b = parse_weyl("b", required("b", &self.b)?)?;
        let c = parse_weyl("c", required("c", &self.c)?)?;
        let d = parse_weyl("d", required("d", &self.d)?)?;
        let [a1, a2] = match &self.alpha {
            Some(a) => parse_list::<2>("alpha", a)?,
            None => [0.0, 0.0],
        };
        Ok(ArcCoordinates::new(b, c, d, a1, a2)?)
    }
}

fn read_input(path: Option<&Path>) -> CliResult<String> {
    match path {
        Some(p) => Ok(fs::read_to_string(p)?),
        None => {
            let mut s = String::new();
            io::stdin().read_to_string(&mut s)?;
            Ok(s)
        }
    }
}

fn parse_json<T: serde::de::DeserializeOwned>(text: &str) -> CliResult<T> {
    serde_json::from_str(text).map_err(|e| {
        if e.is_data() {
            CliError::Input(format!("document does not match the expected schema: {e}"))
        } else {
            CliError::Input(format!("malformed JSON: {e}"))
        }
    })
}

fn check_format(common: &Common, allowed: &[Format], default: Format) -> CliResult<Format> {
    let f = common.format.unwrap_or(default);
    if allowed.contains(&f) {
        Ok(f)
    } else {
        let names: Vec<String> = allowed.iter().filter_map(|f| f.to_possible_value()).map(|v| v.get_name().to_string()).collect();
        Err(CliError::Usage(format!("this command supports --format {}", names.join("|"))))
    }
}

// ---------------------------------------------------------------- hexagon

fn hexagon(cmd: HexagonCmd) -> CliResult {
    match cmd {
        HexagonCmd::Build { coords, common } => {
            check_format(&common, &[Format::Json], Format::Json)?;
            let h = OrderedHexagon::from_coords(&coords.coords()?);
            emit(common.out.as_deref(), &to_json(&HexagonDoc::from_hexagon(&h)?))?;
        }
        HexagonCmd::Coords { input, common } => {
            check_format(&common, &[Format::Json], Format::Json)?;
            let doc: HexagonDoc = parse_json(&read_input(input.as_deref())?)?;
            let coords = doc.to_hexagon()?.coords()?;
            emit(common.out.as_deref(), &to_json(&coords))?;
        }
        HexagonCmd::Chain { input, coords, common } => {
            let format = check_format(&common, &[Format::Svg, Format::Json], Format::Svg)?;
            let h = if input.is_some() || !coords.given() {
                let doc: HexagonDoc = parse_json(&read_input(input.as_deref())?)?;
                doc.to_hexagon()?
            } else {
                OrderedHexagon::from_coords(&coords.coords()?)
            };
            let chain = polygonal_chain(&h)?;
            let text = match format {
                Format::Json => to_json(&chain),
                _ => svg::chain_svg(&chain),
            };
            emit(common.out.as_deref(), &text)?;
        }
    }
    Ok(())
}

// ---------------------------------------------------------------- malefic

fn scan_csv(rows: &[ScanRow]) -> String {
    let mut s = String::from("c1,c2,F1,F2\n");
    for r in rows {
        s.push_str(&format!("{},{},{},{}\n", csv_number(r.c1), csv_number(r.c2), csv_number(r.f1), csv_number(r.f2)));
    }
    s
}

#[derive(Serialize)]
struct ScanDoc<'a> {
    parameters: &'a MaleficParams,
    grid: &'a GridSpec,
    summary: &'a ScanSummary,
    rows: &'a [ScanRow],
}

fn malefic_scan(a: ScanArgs) -> CliResult {
    let format = check_format(&a.common, &[Format::Csv, Format::Json, Format::Svg], Format::Csv)?;
    let [a1, a2] = parse_list::<2>("alpha", &a.alpha)?;
    let params = MaleficParams {
        b: parse_weyl("b", &a.b)?,
        d: parse_weyl("d", &a.d)?,
        alpha1: a1,
        alpha2: a2,
    };
    // validates the lengths the same way hexagon construction does
    ArcCoordinates::new(params.b, WeylVector::new(1.0, 0.5), params.d, a1, a2)?;
    let [lo, hi, step] = parse_list::<3>("grid", &a.grid)?;
    let grid = GridSpec::new(lo, hi, step, !a.full_grid)?;
    let [w_lo, w_hi] = parse_list::<2>("window", &a.window)?;
    if w_lo >= w_hi || a.eps_gap.is_nan() || a.eps_gap <= 0.0 || a.eps_col.is_nan() || a.eps_col <= 0.0 {
        return Err(CliError::Usage("detector parameters must satisfy lo < hi and eps > 0".into()));
    }
    let exec = if a.sequential { Exec::Sequential } else { Exec::Parallel };
    let rows = scan::scan(&params, &grid, exec);
    let summary = scan::summarize(&rows, a.eps_gap, (w_lo, w_hi), a.eps_col, a.min_separation);
    let out = a.common.out.as_deref();
    match format {
        Format::Json => emit(
            out,
            &to_json(&ScanDoc {
                parameters: &params,
                grid: &grid,
                summary: &summary,
                rows: &rows,
            }),
        )?,
        Format::Csv | Format::Svg => {
            let body = if format == Format::Csv { scan_csv(&rows) } else { svg::scatter_svg(&rows, (w_lo, w_hi)) };
            emit(out, &body)?;
            match (&a.summary, out) {
                (Some(p), _) => emit(Some(p), &to_json(&summary))?,
                (None, Some(_)) => emit(None, &to_json(&summary))?,
                (None, None) => {}
            }
        }
    }
    Ok(())
}

// ---------------------------------------------------------------- rep

/// Documents accepted by `--input`: a full representation or bare parameters.
#[derive(serde::Deserialize)]
#[serde(untagged)]
enum RepSource {
    Document(Box<RepDocument>),
    Parameters(SParameters),
}

fn parse_refl(s: &str) -> CliResult<[KElement; 3]> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 3 {
        return Err(CliError::Usage(format!("--refl expects three comma-separated entries, got {s:?}")));
    }
    Ok([KElement::parse(parts[0])?, KElement::parse(parts[1])?, KElement::parse(parts[2])?])
}

/// The parameters and the representation they describe.
fn load_rep(r: &RepInput) -> CliResult<(SParameters, W3MaxRep)> {
    if let Some(path) = &r.input {
        return match parse_json::<RepSource>(&read_input(Some(path))?)? {
            RepSource::Document(doc) => Ok((doc.parameters, doc.to_rep()?)),
            RepSource::Parameters(p) => Ok((p, build_w3_rep(&p)?)),
        };
    }
    let [r1, r2, r3] = parse_refl(&r.refl)?;
    let p = SParameters::new(r.coords.coords()?, r1, r2, r3)?;
    let w = build_w3_rep(&p)?;
    Ok((p, w))
}

#[derive(Serialize)]
struct OrbitDoc {
    n: usize,
    size: usize,
    #[serde(flatten)]
    tuple: siegel_arc::maxrep::OrbitTuple,
}

fn rep(cmd: RepCmd) -> CliResult {
    match cmd {
        RepCmd::Build { rep, common } => {
            check_format(&common, &[Format::Json], Format::Json)?;
            let (p, w) = load_rep(&rep)?;
            emit(common.out.as_deref(), &to_json(&RepDocument::new(&p, &w)?))?;
        }
        RepCmd::Validate { rep, common } => {
            check_format(&common, &[Format::Json], Format::Json)?;
            let (_, w) = load_rep(&rep)?;
            let report = validate_max_rep(&w);
            emit(common.out.as_deref(), &to_json(&report))?;
            if !report.passed {
                return Err(CliError::Verification);
            }
        }
        RepCmd::Orbit { rep, n, common } => {
            check_format(&common, &[Format::Json], Format::Json)?;
            if n > 8 {
                return Err(CliError::Usage("--n is limited to 8 (the tuple has 6·2^n entries)".into()));
            }
            let (_, w) = load_rep(&rep)?;
            let tuple = orbit_tuples(&w, n)?;
            let size = tuple.lagrangians.len();
            let maximal = tuple.maximal;
            emit(common.out.as_deref(), &to_json(&OrbitDoc { n, size, tuple }))?;
            if !maximal {
                return Err(CliError::Verification);
            }
        }
        RepCmd::Delta { rep, common } => {
            check_format(&common, &[Format::Json], Format::Json)?;
            let (_, w) = load_rep(&rep)?;
            emit(common.out.as_deref(), &to_json(&delta_sign(&restrict_to_f2(&w))?))?;
        }
    }
    Ok(())
}

// ---------------------------------------------------------------- verify

fn verify(a: VerifyArgs) -> CliResult {
    check_format(&a.common, &[Format::Json], Format::Json)?;
    let samples = a.samples.unwrap_or_else(|| verify::default_samples(&a.suite));
    let report = verify::run(&a.suite, a.seed, samples)
        .ok_or_else(|| CliError::Usage(format!("unknown suite {:?}; available: {}", a.suite, verify::SUITES.join(", "))))?;
    emit(a.common.out.as_deref(), &to_json(&report))?;
    if report.passed {
        Ok(())
    } else {
        Err(CliError::Verification)
    }
}
