//! JSON front end: `projconn <verb> [flags]`, params from `--input FILE|-` or
//! `--params JSON`, one JSON envelope on standard output.

use std::ffi::OsString;
use std::fs;
use std::io::Read;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use num_complex::Complex64;
use projconn::bidifferential::{
    canonical_2delta_check, flat, proj_connection, pullback, CanonicalReport, DEFAULT_BIDIFF_ORDER,
};
use projconn::moebius::ExtendedComplex;
use projconn::schwarzian::{schwarzian, solution_ambiguity, solve_with_gauge, IDENTITY_TOL};
use projconn::surfaces::{
    cross_ratio_g0, omega_b_g1, torus_proj_connection, DEFAULT_LATTICE_BOUND, DEFAULT_THETA_TERMS,
};
use projconn::torsor::{act_quadratic, canonical_form};
use projconn::{BidiffGerm, IsotropyElement, Jet, MoebiusMap, ProjConnGerm, Surface, TorusModulus};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

pub const EXIT_OK: u8 = 0;
pub const EXIT_USAGE: u8 = 1;
pub const EXIT_DOMAIN: u8 = 2;

#[derive(Parser, Debug)]
#[command(
    name = "projconn",
    version,
    about = "Projective connections from jets, bidifferentials and theta functions"
)]
struct Cli {
    #[command(subcommand)]
    verb: Verb,
    /// Truncation order for verbs that produce jets or germs.
    #[arg(long, global = true)]
    order: Option<usize>,
    /// Tolerance for fits and identity checks.
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Torus modulus as a JSON pair "[re,im]".
    #[arg(long, global = true, value_parser = parse_complex, allow_hyphen_values = true)]
    tau: Option<Complex64>,
    /// JSON file overriding order, tol, theta_terms and lattice_bound.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// JSON params from a file, or `-` for standard input.
    #[arg(long, global = true)]
    input: Option<String>,
    /// JSON params inline.
    #[arg(long, global = true, conflicts_with = "input")]
    params: Option<String>,
    /// Surface genus for `crossratio` and `coalesce`.
    #[arg(long, global = true, value_parser = clap::value_parser!(u8).range(0..=1))]
    genus: Option<u8>,
}

#[derive(Subcommand, Debug, Clone, Copy)]
enum Verb {
    /// Schwarzian derivative of {"jet"}.
    Schwarzian,
    /// Solve S(w) = h for {"h", "order"?, "a2"?}.
    Solve,
    /// Moebius fit of {"jet"}, isotropy fit of {"two_jet"}, or the map relating {"w1", "w2"}.
    MobiusFit,
    /// Torsor normal form of {"jet", "v"?}.
    TorsorNormalForm,
    /// Projective connection 6c(tau) of the flat torus.
    ProjconnTorus,
    /// Cross ratio of {"points": [z1, z2, z3, z4]}.
    Crossratio,
    /// Coalescing limit of the cross ratio at {"z1", "z2"}.
    Coalesce,
    /// Canonical bidifferential of the torus at {"x", "y"}.
    OmegaB,
    /// Pullback of {"B"?, "f"}; B defaults to the flat germ.
    Pullback,
    /// Normal-form check and projective connection of {"B"}.
    VerifyBidiff,
}

fn parse_complex(s: &str) -> Result<Complex64, String> {
    serde_json::from_str(s).map_err(|e| format!("expected [re,im]: {e}"))
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Parse(String),
    Domain(projconn::Error),
}

impl CliError {
    fn kind(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "UsageError",
            CliError::Parse(_) => "ParseError",
            CliError::Domain(e) => e.kind(),
        }
    }

    fn code(&self) -> u8 {
        match self {
            CliError::Domain(_) => EXIT_DOMAIN,
            _ => EXIT_USAGE,
        }
    }

    fn detail(&self) -> String {
        match self {
            CliError::Usage(s) | CliError::Parse(s) => s.clone(),
            CliError::Domain(e) => e.to_string(),
        }
    }
}

impl From<projconn::Error> for CliError {
    fn from(e: projconn::Error) -> Self {
        CliError::Domain(e)
    }
}

/// Exit code and everything the process writes to standard output.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub code: u8,
    pub output: String,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct Config {
    order: Option<usize>,
    tol: Option<f64>,
    theta_terms: Option<usize>,
    lattice_bound: Option<usize>,
}

struct Settings {
    order: Option<usize>,
    tol: f64,
    tau: Option<Complex64>,
    genus: Option<u8>,
    theta_terms: usize,
    lattice_bound: usize,
}

impl Settings {
    fn modulus(&self, tau: Option<Complex64>) -> Result<TorusModulus, CliError> {
        let tau = self
            .tau
            .or(tau)
            .ok_or_else(|| CliError::Usage("a torus verb needs --tau or params.tau".into()))?;
        Ok(TorusModulus::with_bounds(
            tau,
            self.theta_terms,
            self.lattice_bound,
        )?)
    }

    fn surface(&self, genus: Option<u8>, tau: Option<Complex64>) -> Result<Surface, CliError> {
        let genus = self
            .genus
            .or(genus)
            .unwrap_or(if self.tau.or(tau).is_some() { 1 } else { 0 });
        match genus {
            0 => Ok(Surface::Sphere),
            1 => Ok(Surface::Torus(self.modulus(tau)?)),
            g => Err(CliError::Usage(format!("genus {g} is not supported"))),
        }
    }
}

/// Parses `args` (program name first), runs the verb and renders the envelope.
pub fn run<I, T>(args: I, stdin: &mut dyn Read) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                return Outcome {
                    code: EXIT_OK,
                    output: e.to_string(),
                };
            }
            let text = e.render().to_string();
            let detail = text.trim().trim_start_matches("error: ");
            return failure(CliError::Usage(detail.to_string()));
        }
    };
    match execute(&cli, stdin) {
        Ok(result) => Outcome {
            code: EXIT_OK,
            output: render(&Success { ok: true, result }),
        },
        Err(e) => failure(e),
    }
}

fn failure(e: CliError) -> Outcome {
    Outcome {
        code: e.code(),
        output: render(&Failure {
            ok: false,
            error: ErrorBody {
                kind: e.kind(),
                detail: e.detail(),
            },
        }),
    }
}

#[derive(Serialize)]
struct Success {
    ok: bool,
    result: Value,
}

#[derive(Serialize)]
struct Failure {
    ok: bool,
    error: ErrorBody,
}

#[derive(Serialize)]
struct ErrorBody {
    kind: &'static str,
    detail: String,
}

fn render<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string(v).expect("JSON values always serialize");
    s.push('\n');
    s
}

fn read_config(path: &PathBuf) -> Result<Config, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Parse(format!("config: {e}")))
}

fn read_params(cli: &Cli, stdin: &mut dyn Read) -> Result<Value, CliError> {
    let text = match (&cli.input, &cli.params) {
        (Some(path), _) if path == "-" => {
            let mut s = String::new();
            stdin
                .read_to_string(&mut s)
                .map_err(|e| CliError::Usage(format!("cannot read standard input: {e}")))?;
            s
        }
        (Some(path), _) => fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read input {path}: {e}")))?,
        (None, Some(inline)) => inline.clone(),
        (None, None) => return Ok(json!({})),
    };
    let value: Value =
        serde_json::from_str(&text).map_err(|e| CliError::Parse(format!("params: {e}")))?;
    if !value.is_object() {
        return Err(CliError::Parse("params must be a JSON object".into()));
    }
    Ok(value)
}

fn params<T: DeserializeOwned>(v: Value) -> Result<T, CliError> {
    serde_json::from_value(v).map_err(|e| CliError::Parse(format!("params: {e}")))
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("library types always serialize")
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct JetParams {
    jet: Jet,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SolveParams {
    h: Jet,
    order: Option<usize>,
    #[serde(default)]
    a2: Complex64,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum FitParams {
    Jet { jet: Jet },
    TwoJet { two_jet: Jet },
    Pair { w1: Jet, w2: Jet },
}

#[derive(Serialize)]
struct MapFit {
    map: MoebiusMap,
    residual: f64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct TorsorParams {
    jet: Jet,
    v: Option<Complex64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct TauParams {
    tau: Option<Complex64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CrossRatioParams {
    points: [ExtendedComplex; 4],
    genus: Option<u8>,
    tau: Option<Complex64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CoalesceParams {
    z1: Complex64,
    z2: Complex64,
    genus: Option<u8>,
    tau: Option<Complex64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct OmegaParams {
    x: Complex64,
    y: Complex64,
    tau: Option<Complex64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PullbackParams {
    #[serde(rename = "B")]
    b: Option<BidiffGerm>,
    f: Jet,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct VerifyParams {
    #[serde(rename = "B")]
    b: BidiffGerm,
}

#[derive(Serialize)]
struct Verification {
    report: CanonicalReport,
    proj_connection: Option<ProjConnGerm>,
}

fn execute(cli: &Cli, stdin: &mut dyn Read) -> Result<Value, CliError> {
    let config = match &cli.config {
        Some(path) => read_config(path)?,
        None => Config::default(),
    };
    let settings = Settings {
        order: cli.order.or(config.order),
        tol: cli.tol.or(config.tol).unwrap_or(IDENTITY_TOL),
        tau: cli.tau,
        genus: cli.genus,
        theta_terms: config.theta_terms.unwrap_or(DEFAULT_THETA_TERMS),
        lattice_bound: config.lattice_bound.unwrap_or(DEFAULT_LATTICE_BOUND),
    };
    if !(settings.tol.is_finite() && settings.tol > 0.0) {
        return Err(CliError::Usage(format!(
            "tolerance must be positive, got {}",
            settings.tol
        )));
    }
    let raw = read_params(cli, stdin)?;
    match cli.verb {
        Verb::Schwarzian => {
            let p: JetParams = params(raw)?;
            let jet = match settings.order {
                Some(n) => p.jet.truncate(n),
                None => p.jet,
            };
            Ok(to_value(&schwarzian(&jet)?))
        }
        Verb::Solve => {
            let p: SolveParams = params(raw)?;
            let order = settings
                .order
                .or(p.order)
                .unwrap_or((p.h.order() + 3).max(3));
            let h = projconn::QuadDiffGerm::new(p.h);
            Ok(to_value(&solve_with_gauge(&h, order, p.a2)?))
        }
        Verb::MobiusFit => match params(raw)? {
            FitParams::Jet { jet } => {
                let (map, residual) = MoebiusMap::fit_jet(&jet)?;
                if residual > settings.tol {
                    return Err(projconn::Error::FitFailed(residual).into());
                }
                Ok(to_value(&MapFit { map, residual }))
            }
            FitParams::TwoJet { two_jet } => Ok(to_value(&IsotropyElement::fit(&two_jet)?)),
            FitParams::Pair { w1, w2 } => {
                Ok(to_value(&solution_ambiguity(&w1, &w2, settings.tol)?))
            }
        },
        Verb::TorsorNormalForm => {
            let p: TorsorParams = params(raw)?;
            let t = canonical_form(&p.jet)?;
            let t = match p.v {
                Some(v) => act_quadratic(&t, v)?,
                None => t,
            };
            Ok(to_value(&t))
        }
        Verb::ProjconnTorus => {
            let p: TauParams = params(raw)?;
            Ok(to_value(&torus_proj_connection(&settings.modulus(p.tau)?)))
        }
        Verb::Crossratio => {
            let p: CrossRatioParams = params(raw)?;
            let value = match settings.surface(p.genus, p.tau)? {
                Surface::Sphere => cross_ratio_g0(p.points)?,
                torus => {
                    let finite = p.points.map(|z| z.finite());
                    let z = finite.map(|z| z.unwrap_or_default());
                    if finite.iter().any(Option::is_none) {
                        return Err(CliError::Parse(
                            "points at infinity are only allowed at genus 0".into(),
                        ));
                    }
                    torus.cross_ratio(z)?
                }
            };
            Ok(to_value(&value))
        }
        Verb::Coalesce => {
            let p: CoalesceParams = params(raw)?;
            Ok(to_value(
                &settings.surface(p.genus, p.tau)?.coalesce(p.z1, p.z2)?,
            ))
        }
        Verb::OmegaB => {
            let p: OmegaParams = params(raw)?;
            Ok(to_value(&omega_b_g1(p.x, p.y, &settings.modulus(p.tau)?)?))
        }
        Verb::Pullback => {
            let p: PullbackParams = params(raw)?;
            let b = match p.b {
                Some(b) => b,
                None => flat(p.f.value(), settings.order.unwrap_or(DEFAULT_BIDIFF_ORDER)),
            };
            Ok(to_value(&pullback(&b, &p.f)?))
        }
        Verb::VerifyBidiff => {
            let p: VerifyParams = params(raw)?;
            let report = canonical_2delta_check(&p.b);
            let proj_connection = if report.pass {
                Some(proj_connection(&p.b)?)
            } else {
                None
            };
            Ok(to_value(&Verification {
                report,
                proj_connection,
            }))
        }
    }
}
