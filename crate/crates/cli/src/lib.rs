//! Scenario runner behind the `maxstar` binary.
//!
//! A scenario is a JSON file naming a command, an optional t-norm, a
//! command-specific payload and an optional output path. Running it produces
//! a JSON report and an exit status: 0 when the check passed or the
//! construction succeeded, 1 when a property failed or a lift was out of
//! reach, 2 when the input was invalid.

use std::path::{Path, PathBuf};

use maxstar::certify::{
    check_diagram, diagram_suite, grid_csv_header, verify_counterexample_with, Counterexample,
    DiagramInstance, DiagramKind, GridRow, Verdict,
};
use maxstar::lifting::{
    bicommutative_lift, deviation_lower_bound, lift_barycenter, lift_measure_combination,
    GridSearchOracle, MinIntervalOracle, PointLiftOracle,
};
use maxstar::{
    barycenter, cover_approximation, Cover, CubePoint, EmbeddedMeasure, Exec, FunctionOnSpace,
    IdempotentMeasure, SpaceMap, TNormSpec, WeightPair,
};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

pub const EXIT_OK: u8 = 0;
pub const EXIT_FAILED: u8 = 1;
pub const EXIT_INVALID: u8 = 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    TnormCheck,
    Eval,
    Lift,
    Bicommute,
    Barycenter,
    Certify,
    Diagram,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub command: Command,
    #[serde(default)]
    pub tnorm: Option<TNormSpec>,
    #[serde(default)]
    pub payload: Value,
    #[serde(default)]
    pub output: Option<PathBuf>,
    #[serde(default)]
    pub seed: Option<u64>,
}

/// Command-line settings that take precedence over the scenario file.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub tnorm: Option<TNormSpec>,
    pub seed: Option<u64>,
    pub resolution: Option<f64>,
    pub output: Option<PathBuf>,
    pub csv: Option<PathBuf>,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("i/o error: {0}")]
    Io(String),
    #[error("schema error: {0}")]
    Schema(String),
    #[error(transparent)]
    Math(#[from] maxstar::Error),
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Schema(e.to_string())
    }
}

/// Report plus exit status of one run.
#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub report: Value,
    pub status: u8,
    pub grid: Option<(Vec<String>, Vec<GridRow>)>,
}

impl Outcome {
    fn new(report: Value, ok: bool) -> Self {
        Outcome { report, status: if ok { EXIT_OK } else { EXIT_FAILED }, grid: None }
    }
}

pub fn load_scenario(path: &Path) -> Result<Scenario, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    Ok(serde_json::from_str(&text)?)
}

/// Parses a t-norm given either as a builtin name or as JSON.
pub fn parse_tnorm(s: &str) -> Result<TNormSpec, CliError> {
    if s.trim_start().starts_with('{') {
        Ok(serde_json::from_str(s)?)
    } else {
        Ok(s.parse()?)
    }
}

/// Runs a scenario. Lifts that are out of reach and failed constructions
/// become reports with status 1; every other library error is returned.
pub fn run_scenario(scenario: &Scenario, over: &Overrides) -> Result<Outcome, CliError> {
    let tnorm = over.tnorm.clone().or_else(|| scenario.tnorm.clone());
    let seed = over.seed.or(scenario.seed).unwrap_or(0);
    let p = &scenario.payload;
    let result = match scenario.command {
        Command::TnormCheck => tnorm_check(p, tnorm.unwrap_or(TNormSpec::Min)),
        Command::Eval => eval(p, &tnorm.unwrap_or(TNormSpec::Min)),
        Command::Lift => lift(p, &tnorm.unwrap_or(TNormSpec::Min)),
        Command::Bicommute => bicommute(p, &tnorm.unwrap_or(TNormSpec::Min)),
        Command::Barycenter => barycenter_cmd(p, &tnorm.unwrap_or(TNormSpec::Min)),
        Command::Certify => certify(p, tnorm, over.resolution),
        Command::Diagram => diagram(p, &tnorm.unwrap_or(TNormSpec::Min), seed),
    };
    match result {
        Err(CliError::Math(e @ (maxstar::Error::TooFar(_) | maxstar::Error::ConstructionFailed(_)))) => {
            Ok(Outcome::new(json!({ "command": scenario.command, "error": e.to_string() }), false))
        }
        other => other,
    }
}

/// Deterministic pretty JSON with a trailing newline.
pub fn render(report: &Value) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("reports are plain JSON");
    s.push('\n');
    s
}

pub fn write_csv(path: &Path, header: &[String], rows: &[GridRow]) -> Result<(), CliError> {
    let io = |e: csv::Error| CliError::Io(format!("{}: {e}", path.display()));
    let mut w = csv::Writer::from_path(path).map_err(io)?;
    w.write_record(header).map_err(io)?;
    for row in rows {
        let rec: Vec<String> = row.inputs.iter().chain(&row.value).map(|v| v.to_string()).collect();
        w.write_record(&rec).map_err(io)?;
    }
    w.flush().map_err(|e| CliError::Io(e.to_string()))
}

fn field<'a>(p: &'a Value, names: &[&str]) -> Result<&'a Value, CliError> {
    names
        .iter()
        .find_map(|n| p.get(*n))
        .ok_or_else(|| CliError::Schema(format!("payload is missing {:?}", names[0])))
}

fn opt_field<'a>(p: &'a Value, names: &[&str]) -> Option<&'a Value> {
    names.iter().find_map(|n| p.get(*n)).filter(|v| !v.is_null())
}

fn parse<T: for<'de> Deserialize<'de>>(v: &Value) -> Result<T, CliError> {
    Ok(T::deserialize(v)?)
}

/// A measure given either as a bare density or as a full measure object.
fn measure(v: &Value, tnorm: &TNormSpec) -> Result<IdempotentMeasure, CliError> {
    if v.is_array() {
        Ok(IdempotentMeasure::from_density(parse(v)?, tnorm.clone())?)
    } else {
        parse(v)
    }
}

fn function(v: &Value) -> Result<FunctionOnSpace, CliError> {
    if v.is_array() {
        Ok(FunctionOnSpace::new(parse(v)?)?)
    } else {
        parse(v)
    }
}

fn weights(v: &Value) -> Result<WeightPair, CliError> {
    parse(v)
}

/// A map given as an image list (target size inferred) or as
/// `{"image": [...], "target": n}`.
fn space_map(v: &Value) -> Result<SpaceMap, CliError> {
    #[derive(Deserialize)]
    struct Raw {
        image: Vec<usize>,
        target: Option<usize>,
    }
    let raw: Raw = if v.is_array() { Raw { image: parse(v)?, target: None } } else { parse(v)? };
    let n = raw.target.unwrap_or_else(|| raw.image.iter().max().map_or(0, |m| m + 1));
    Ok(SpaceMap::from_image(raw.image, n)?)
}

fn embedded(p: &Value, tnorm: &TNormSpec) -> Result<EmbeddedMeasure, CliError> {
    if let Some(m) = opt_field(p, &["embedded"]) {
        return parse(m);
    }
    let support: Vec<Vec<f64>> = parse(field(p, &["support"])?)?;
    let mu = measure(field(p, &["measure", "density"])?, tnorm)?;
    let points = support.into_iter().map(CubePoint::new).collect::<maxstar::Result<Vec<_>>>()?;
    Ok(EmbeddedMeasure::new(mu, points)?)
}

fn tnorm_check(p: &Value, tn: TNormSpec) -> Result<Outcome, CliError> {
    let step = match opt_field(p, &["gridStep"]) {
        Some(v) => parse(v)?,
        None => 1.0 / 64.0,
    };
    let report = tn.check_axioms(step)?;
    let ok = report.pass;
    Ok(Outcome::new(json!({ "command": Command::TnormCheck, "tnorm": tn, "report": report }), ok))
}

fn eval(p: &Value, tn: &TNormSpec) -> Result<Outcome, CliError> {
    let mu = measure(field(p, &["measure"])?, tn)?;
    let funcs: Vec<Value> = match (opt_field(p, &["function"]), opt_field(p, &["functions"])) {
        (Some(f), _) => vec![f.clone()],
        (None, Some(fs)) => parse(fs)?,
        (None, None) => return Err(CliError::Schema("payload needs \"function\" or \"functions\"".into())),
    };
    let values = funcs
        .iter()
        .map(|f| Ok(mu.eval(&function(f)?)?))
        .collect::<Result<Vec<f64>, CliError>>()?;
    Ok(Outcome::new(json!({ "command": Command::Eval, "measure": mu, "values": values }), true))
}

fn lift(p: &Value, tn: &TNormSpec) -> Result<Outcome, CliError> {
    let lambda = measure(field(p, &["λ", "lambda"])?, tn)?;
    let beta = measure(field(p, &["β", "beta"])?, tn)?;
    let w = weights(field(p, &["w", "weights"])?)?;
    let alpha = measure(field(p, &["α", "alpha"])?, tn)?;
    let bound = deviation_lower_bound(&lambda, &beta, w, &alpha)?;
    let r = lift_measure_combination(&lambda, &beta, w, &alpha)?;
    Ok(Outcome::new(
        json!({
            "command": Command::Lift,
            "tnorm": tn,
            "lambda": lambda.density(),
            "beta": beta.density(),
            "weights": w,
            "alpha": alpha.density(),
            "liftedLambda": r.lifted_left.density(),
            "liftedBeta": r.lifted_right.density(),
            "liftedWeights": r.lifted_weights,
            "deviation": r.deviation,
            "deviationLowerBound": bound,
            "case": r.case,
        }),
        true,
    ))
}

fn bicommute(p: &Value, tn: &TNormSpec) -> Result<Outcome, CliError> {
    let nu = measure(field(p, &["nu", "ν"])?, tn)?;
    let f = space_map(field(p, &["map", "f"])?)?;
    let mu = measure(field(p, &["mu", "μ"])?, tn)?;
    let a = measure(field(p, &["a"])?, tn)?;
    let w = weights(field(p, &["w", "weights"])?)?;
    let r = bicommutative_lift(&nu, &f, &mu, &a, w)?;
    Ok(Outcome::new(json!({ "command": Command::Bicommute, "tnorm": tn, "lift": r }), true))
}

fn barycenter_cmd(p: &Value, tn: &TNormSpec) -> Result<Outcome, CliError> {
    let em = embedded(p, tn)?;
    let mut report = json!({
        "command": Command::Barycenter,
        "tnorm": em.tnorm(),
        "barycenter": barycenter(&em)?,
    });
    if let Some(c) = opt_field(p, &["cover"]) {
        let cover = Cover::new(parse(c)?);
        let approx = cover_approximation(&em, &cover)?;
        report["cover"] = json!({
            "blocks": cover,
            "density": approx.density(),
            "support": approx.support(),
            "barycenter": barycenter(&approx)?,
        });
    }
    if let Some(t) = opt_field(p, &["liftTarget"]) {
        let target: CubePoint = parse(t)?;
        let oracle: Box<dyn PointLiftOracle> = match opt_field(p, &["oracle"]).and_then(Value::as_str) {
            Some("grid") => Box::new(GridSearchOracle::default()),
            Some("min") | None if *em.tnorm() == TNormSpec::Min => Box::new(MinIntervalOracle),
            None => Box::new(GridSearchOracle::default()),
            Some(other) => return Err(CliError::Schema(format!("unknown oracle {other:?}"))),
        };
        let r = lift_barycenter(&em, oracle.as_ref(), &target)?;
        report["lift"] = json!({
            "target": target,
            "density": r.lifted.density(),
            "support": r.lifted.support(),
            "deviation": r.deviation,
            "steps": r.steps,
        });
    }
    Ok(Outcome::new(report, true))
}

fn certify(p: &Value, tn: Option<TNormSpec>, resolution: Option<f64>) -> Result<Outcome, CliError> {
    let case: Counterexample = parse(field(p, &["case"])?)?;
    let res = match (resolution, opt_field(p, &["resolution"])) {
        (Some(r), _) => r,
        (None, Some(v)) => parse(v)?,
        (None, None) => 1.0 / 64.0,
    };
    let tn = tn.unwrap_or_else(|| case.default_tnorm());
    let (report, rows) = verify_counterexample_with(case, &tn, res, Exec::default())?;
    let ok = report.verdict == Verdict::RefutedOpen;
    let mut out = Outcome::new(serde_json::to_value(&report)?, ok);
    out.grid = Some((grid_csv_header(case), rows));
    Ok(out)
}

fn diagram(p: &Value, tn: &TNormSpec, seed: u64) -> Result<Outcome, CliError> {
    if let Some(inst) = opt_field(p, &["instance"]) {
        let inst: DiagramInstance = parse(inst)?;
        let r = check_diagram(&inst)?;
        let ok = r.pass;
        return Ok(Outcome::new(json!({ "command": Command::Diagram, "report": r }), ok));
    }
    let kinds = match opt_field(p, &["kind"]).and_then(Value::as_str) {
        None | Some("all") => DiagramKind::ALL.to_vec(),
        Some(k) => vec![k.parse::<DiagramKind>()?],
    };
    let count = match opt_field(p, &["count"]) {
        Some(v) => parse(v)?,
        None => 1000,
    };
    let suites: Vec<_> = kinds.into_iter().map(|k| diagram_suite(k, tn, count, seed, Exec::default())).collect();
    let ok = suites.iter().all(|s| s.pass());
    Ok(Outcome::new(
        json!({ "command": Command::Diagram, "tnorm": tn, "seed": seed, "suites": suites }),
        ok,
    ))
}
