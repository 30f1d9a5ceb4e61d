//! Command-line front end.
//!
//! Loads scenario files (or bundled fixtures referenced by id), runs the
//! requested computations against the exact-arithmetic engine, and renders
//! a deterministic report in text or JSON.  Reports list scenarios in a
//! stable order and serialize with stable field order, so two runs of the
//! same command produce byte-identical output once the timestamp is
//! suppressed with `--no-timestamp`.
//!
//! Exit codes: `0` when every expected relation holds, `1` for argument,
//! file, or validation problems, and `2` when a computation fails or
//! produces a value that misses its expectation.

use std::fs;
use std::io::Write;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::exact::{parse_poly, parse_scalar, Poly, Scalar, Var};
use crate::invariants::Exactness;
use crate::lattice::DivClass;
use crate::scenarios::{
    self, parse_value, run_computation, run_scenario, satisfies, Computation, OpSpec, Relation,
    Scenario, ScenarioRun, Workspace,
};
use crate::zariski::{decompose, decompose_parametric, two_param_chambers, ChamberComplex};

/// Top-level argument set.
#[derive(Debug, Parser)]
#[command(
    name = "kstab",
    version,
    about = "Exact Zariski decompositions, volumes, and delta-invariant bounds \
             from declared intersection data"
)]
pub struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Enclosure width for numerically bracketed integrals, as a rational
    /// literal such as `1/1000000000`.
    #[arg(long, global = true, value_name = "RATIONAL")]
    pub eps: Option<String>,
    /// Omit the timestamp so repeated runs are byte-identical.
    #[arg(long, global = true)]
    pub no_timestamp: bool,
    #[command(subcommand)]
    pub command: Command,
}

/// Report rendering formats.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    /// Human-readable lines.
    Text,
    /// Pretty-printed JSON with stable field order.
    Json,
}

/// The available subcommands.
#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check a scenario's declared data for internal consistency.
    Validate {
        /// Path to a scenario file, or the id of a bundled fixture.
        target: String,
    },
    /// Print Zariski decompositions of the sweeps a scenario declares.
    Zariski {
        /// Path to a scenario file, or the id of a bundled fixture.
        target: String,
        /// Evaluate pointwise at this parameter value instead of
        /// reporting the parametric cell structure.
        #[arg(long, value_name = "RATIONAL")]
        param: Option<String>,
    },
    /// Print the chamber structures behind a scenario's sweeps.
    Chambers {
        /// Path to a scenario file, or the id of a bundled fixture.
        target: String,
    },
    /// Run a scenario's invariant computations of one kind.
    Sinv {
        /// Path to a scenario file, or the id of a bundled fixture.
        target: String,
        /// Which computations to run.
        #[arg(long, value_enum)]
        op: OpFilter,
    },
    /// Run a scenario's delta-bound computations.
    Delta {
        /// Path to a scenario file, or the id of a bundled fixture.
        target: String,
    },
    /// Replay every bundled fixture and check each expected value.
    VerifyPaper {
        /// Only replay fixtures whose id contains this substring.
        #[arg(long, value_name = "ID")]
        filter: Option<String>,
    },
}

/// Computation kinds selectable with `sinv --op`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OpFilter {
    /// Curve-level orders of vanishing under divisor sweeps.
    #[value(name = "s_w_curve")]
    SWCurve,
    /// Point-level orders (base, correction, and total parts).
    #[value(name = "s_w_point")]
    SWPoint,
    /// Expected vanishing orders of divisors on the ambient threefold.
    #[value(name = "s_threefold")]
    SThreefold,
    /// Per-curve flag cases and the surface bounds they combine into.
    #[value(name = "flag_delta")]
    FlagDelta,
    /// Reciprocal volume bounds and their combination chains.
    #[value(name = "nemuro")]
    Nemuro,
}

impl OpFilter {
    /// The serialized operation kinds the filter selects.
    fn kinds(self) -> &'static [&'static str] {
        match self {
            OpFilter::SWCurve => &["s_w_curve", "window_orders"],
            OpFilter::SWPoint => &["s_w_point", "window_value"],
            OpFilter::SThreefold => &["s_threefold"],
            OpFilter::FlagDelta => &[
                "case_curve",
                "case_point",
                "case_worst",
                "case_bound",
                "surface_delta",
                "az_combine",
                "certified_min",
            ],
            OpFilter::Nemuro => &["nemuro", "lemma34_combine", "profile_tail"],
        }
    }
}

/// Kinds selected by the `delta` subcommand: the bound-producing steps.
const DELTA_KINDS: &[&str] = &[
    "case_bound",
    "surface_delta",
    "az_combine",
    "certified_min",
    "lemma34_combine",
];

// ---------------------------------------------------------------------------
// Report model
// ---------------------------------------------------------------------------

/// A full report: one run of one subcommand.
#[derive(Debug, Serialize)]
struct Report {
    /// The producing tool.
    tool: &'static str,
    /// The subcommand that ran.
    command: &'static str,
    /// Seconds since the Unix epoch; omitted under `--no-timestamp`.
    #[serde(skip_serializing_if = "Option::is_none")]
    timestamp: Option<u64>,
    /// One entry per scenario, in input order (sorted ids for
    /// `verify-paper`).
    scenarios: Vec<ScenarioReport>,
    /// Aggregate counts.
    summary: Summary,
}

/// Everything reported about one scenario.
#[derive(Debug, Serialize)]
struct ScenarioReport {
    /// The scenario's declared id.
    id: String,
    /// SHA-256 hex digest of the scenario's canonical JSON form.
    digest: String,
    /// Structural validation checks, when the command runs them.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    validation: Vec<CheckReport>,
    /// Computation records, when the command runs computations.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    records: Vec<RecordReport>,
    /// Decomposition listings produced by `zariski`.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    sweeps: Vec<SweepReport>,
    /// Chamber structures produced by `chambers`.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    complexes: Vec<ComplexReport>,
}

impl ScenarioReport {
    fn new(id: &str, digest: String) -> ScenarioReport {
        ScenarioReport {
            id: id.to_string(),
            digest,
            validation: Vec::new(),
            records: Vec::new(),
            sweeps: Vec::new(),
            complexes: Vec::new(),
        }
    }
}

/// One structural validation check.
#[derive(Debug, Serialize)]
struct CheckReport {
    /// Short label of the check.
    label: String,
    /// Whether it passed.
    pass: bool,
    /// Evidence or the failure reason.
    detail: String,
}

/// One computation with its outcome and expectation status.
#[derive(Debug, Serialize)]
struct RecordReport {
    /// The computation's declared name.
    name: String,
    /// The operation kind.
    op: &'static str,
    /// Whether the computation ran and met its expectation (vacuously
    /// true without one).
    pass: bool,
    /// The computed value, rendered exactly.
    #[serde(skip_serializing_if = "Option::is_none")]
    result: Option<String>,
    /// Whether the value is exact or an upper bound.
    #[serde(skip_serializing_if = "Option::is_none")]
    exactness: Option<&'static str>,
    /// Extra context attached by the computation.
    #[serde(skip_serializing_if = "Option::is_none")]
    detail: Option<String>,
    /// The expected relation, if an expectation was declared.
    #[serde(skip_serializing_if = "Option::is_none")]
    relation: Option<&'static str>,
    /// The expected value literal.
    #[serde(skip_serializing_if = "Option::is_none")]
    expected: Option<String>,
    /// Declared provenance of the expectation.
    #[serde(skip_serializing_if = "Option::is_none")]
    provenance: Option<String>,
    /// The failure message, when the computation errored.
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
}

/// A Zariski decomposition listing: either the parametric cell structure
/// of a sweep or a pointwise decomposition.
#[derive(Debug, Serialize)]
struct SweepReport {
    /// What is decomposed, and on which lattice.
    subject: String,
    /// The parameter value, for pointwise listings.
    #[serde(skip_serializing_if = "Option::is_none")]
    param: Option<String>,
    /// Parametric cells, low endpoint first.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    cells: Vec<CellReport>,
    /// The pointwise decomposition, when `--param` was given.
    #[serde(skip_serializing_if = "Option::is_none")]
    point: Option<PointReport>,
}

/// One cell of a parametric decomposition.
#[derive(Debug, Serialize)]
struct CellReport {
    /// Lower endpoint of the cell.
    lo: String,
    /// Upper endpoint.
    hi: String,
    /// Names of the curves in the negative part.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    support: Vec<String>,
    /// Negative-part coefficients, aligned with `support`.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    coefficients: Vec<String>,
    /// Coordinates of the nef part.
    positive: Vec<String>,
    /// The volume polynomial on the cell.
    volume: String,
}

/// A single decomposition at a fixed parameter value.
#[derive(Debug, Serialize)]
struct PointReport {
    /// Coordinates of the nef part.
    positive: Vec<String>,
    /// Names of the curves in the negative part.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    support: Vec<String>,
    /// Negative-part coefficients, aligned with `support`.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    coefficients: Vec<String>,
    /// The volume of the class.
    volume: String,
}

/// A chamber structure: two-parameter complexes carry walls in the inner
/// variable, one-parameter sweeps list their cells directly.
#[derive(Debug, Serialize)]
struct ComplexReport {
    /// What is being swept.
    subject: String,
    /// The outer parameter.
    outer: String,
    /// The inner parameter, for two-parameter complexes.
    #[serde(skip_serializing_if = "Option::is_none")]
    inner: Option<String>,
    /// Cells in the outer parameter.
    cells: Vec<OuterCellReport>,
}

/// One outer-parameter cell of a chamber structure.
#[derive(Debug, Serialize)]
struct OuterCellReport {
    /// Lower endpoint in the outer parameter.
    lo: String,
    /// Upper endpoint.
    hi: String,
    /// The inner sweep's threshold, as a polynomial in the outer
    /// parameter (two-parameter complexes only).
    #[serde(skip_serializing_if = "Option::is_none")]
    threshold: Option<String>,
    /// Chambers between inner walls (two-parameter complexes only).
    #[serde(skip_serializing_if = "Vec::is_empty")]
    chambers: Vec<ChamberReport>,
    /// Negative-part support (one-parameter cells only).
    #[serde(skip_serializing_if = "Vec::is_empty")]
    support: Vec<String>,
    /// Volume polynomial (one-parameter cells only).
    #[serde(skip_serializing_if = "Option::is_none")]
    volume: Option<String>,
}

/// One chamber of a two-parameter complex.
#[derive(Debug, Serialize)]
struct ChamberReport {
    /// Lower wall, a polynomial in the outer parameter.
    wall_lo: String,
    /// Upper wall.
    wall_hi: String,
    /// Names of the curves in the negative part.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    support: Vec<String>,
    /// The volume polynomial on the chamber.
    volume: String,
}

/// Aggregate counts over all scenarios of a report.
#[derive(Debug, Default, Serialize)]
struct Summary {
    /// Number of scenarios in the report.
    scenarios: usize,
    /// Validation checks run.
    validation_checks: usize,
    /// Validation checks that failed.
    validation_failures: usize,
    /// Computation records run.
    records: usize,
    /// Records that passed.
    records_passed: usize,
    /// Records whose value missed the expectation.
    records_failed: usize,
    /// Records whose computation errored.
    computation_errors: usize,
}

impl Report {
    fn new(command: &'static str, timestamp: Option<u64>) -> Report {
        Report {
            tool: "kstab",
            command,
            timestamp,
            scenarios: Vec::new(),
            summary: Summary::default(),
        }
    }

    /// Fills the summary from the collected scenario entries.
    fn tally(&mut self) {
        let s = &mut self.summary;
        s.scenarios = self.scenarios.len();
        for sc in &self.scenarios {
            s.validation_checks += sc.validation.len();
            s.validation_failures += sc.validation.iter().filter(|c| !c.pass).count();
            s.records += sc.records.len();
            for rec in &sc.records {
                if rec.pass {
                    s.records_passed += 1;
                } else if rec.error.is_some() {
                    s.computation_errors += 1;
                } else {
                    s.records_failed += 1;
                }
            }
        }
    }

    /// The process exit code the report warrants.
    fn exit_code(&self) -> i32 {
        if self.summary.validation_failures > 0 {
            1
        } else if self.summary.computation_errors > 0 || self.summary.records_failed > 0 {
            2
        } else {
            0
        }
    }
}

// ---------------------------------------------------------------------------
// Entry points
// ---------------------------------------------------------------------------

/// A failure outside normal report flow, carrying its exit code.
struct Failure {
    code: i32,
    message: String,
}

fn input_failure(message: impl Into<String>) -> Failure {
    Failure {
        code: 1,
        message: message.into(),
    }
}

fn compute_failure(message: impl Into<String>) -> Failure {
    Failure {
        code: 2,
        message: message.into(),
    }
}

/// Parses `args`, runs the command, writes the rendered report to `out`,
/// and returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(err) => {
            // Help and version requests surface as errors but exit 0.
            let _ = write!(out, "{}", err.render());
            return if err.use_stderr() { 1 } else { 0 };
        }
    };
    match build_report(&cli) {
        Ok(report) => {
            render(cli.format, &report, out);
            report.exit_code()
        }
        Err(failure) => {
            let _ = writeln!(out, "error: {}", failure.message);
            failure.code
        }
    }
}

fn timestamp(cli: &Cli) -> Option<u64> {
    if cli.no_timestamp {
        return None;
    }
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .ok()
}

fn build_report(cli: &Cli) -> Result<Report, Failure> {
    let stamp = timestamp(cli);
    match &cli.command {
        Command::Validate { target } => {
            let scenario = load_scenario(target, cli.eps.as_deref())?;
            let mut report = Report::new("validate", stamp);
            let mut entry = ScenarioReport::new(&scenario.id, digest(&scenario));
            let validation = scenarios::validate_fixture(&scenario, &scenarios::bundled);
            entry.validation = validation.entries.into_iter().map(check_report).collect();
            report.scenarios.push(entry);
            report.tally();
            Ok(report)
        }
        Command::VerifyPaper { filter } => {
            let ids: Vec<String> = scenarios::list_fixtures()
                .into_iter()
                .filter(|id| filter.as_deref().is_none_or_contains(id))
                .collect();
            if ids.is_empty() {
                return Err(input_failure(match filter {
                    Some(f) => format!("no bundled fixture id contains `{f}`"),
                    None => "no bundled fixtures found".to_string(),
                }));
            }
            let mut report = Report::new("verify-paper", stamp);
            for id in &ids {
                let mut scenario = scenarios::load_fixture(id)
                    .map_err(|e| input_failure(e.to_string()))?;
                if let Some(eps) = cli.eps.as_deref() {
                    override_eps(&mut scenario, eps);
                }
                let run = run_scenario(&scenario, &scenarios::bundled);
                report.scenarios.push(run_report(&scenario, run));
            }
            report.tally();
            Ok(report)
        }
        Command::Sinv { target, op } => {
            filtered_run("sinv", stamp, target, cli.eps.as_deref(), op.kinds())
        }
        Command::Delta { target } => {
            filtered_run("delta", stamp, target, cli.eps.as_deref(), DELTA_KINDS)
        }
        Command::Zariski { target, param } => {
            let scenario = load_scenario(target, cli.eps.as_deref())?;
            let ws = workspace(&scenario)?;
            let mut report = Report::new("zariski", stamp);
            let mut entry = ScenarioReport::new(&scenario.id, digest(&scenario));
            entry.sweeps = zariski_reports(&scenario, &ws, param.as_deref())?;
            report.scenarios.push(entry);
            report.tally();
            Ok(report)
        }
        Command::Chambers { target } => {
            let scenario = load_scenario(target, cli.eps.as_deref())?;
            let ws = workspace(&scenario)?;
            let mut report = Report::new("chambers", stamp);
            let mut entry = ScenarioReport::new(&scenario.id, digest(&scenario));
            entry.complexes = chamber_reports(&scenario, &ws)?;
            report.scenarios.push(entry);
            report.tally();
            Ok(report)
        }
    }
}

/// Substring acceptance for an optional filter.
trait FilterExt {
    fn is_none_or_contains(&self, id: &str) -> bool;
}

impl FilterExt for Option<&str> {
    fn is_none_or_contains(&self, id: &str) -> bool {
        match self {
            None => true,
            Some(f) => id.contains(f),
        }
    }
}

// ---------------------------------------------------------------------------
// Scenario loading and shared helpers
// ---------------------------------------------------------------------------

/// Loads a bundled fixture by id, or else parses the file at `target`.
fn load_scenario(target: &str, eps: Option<&str>) -> Result<Scenario, Failure> {
    let mut scenario = match scenarios::bundled(target) {
        Some(s) => s,
        None => {
            let text = fs::read_to_string(target).map_err(|e| {
                input_failure(format!(
                    "`{target}` is not a bundled fixture id and reading it as a file failed: {e}"
                ))
            })?;
            Scenario::from_json(&text)
                .map_err(|e| input_failure(format!("cannot parse `{target}`: {e}")))?
        }
    };
    if let Some(eps) = eps {
        override_eps(&mut scenario, eps);
    }
    Ok(scenario)
}

/// Overrides the enclosure width of every numerically bracketed integral.
fn override_eps(scenario: &mut Scenario, eps: &str) {
    for comp in &mut scenario.compute {
        if let OpSpec::ProfileTail(args) = &mut comp.op {
            args.eps = eps.to_string();
        }
    }
}

fn workspace(scenario: &Scenario) -> Result<Workspace<'_>, Failure> {
    Workspace::new(scenario).map_err(|e| input_failure(format!("invalid scenario data: {e}")))
}

/// SHA-256 hex digest of the scenario's canonical JSON serialization.
fn digest(scenario: &Scenario) -> String {
    let hash = Sha256::digest(scenario.to_json().as_bytes());
    let mut hex = String::with_capacity(hash.len() * 2);
    for byte in hash {
        hex.push_str(&format!("{byte:02x}"));
    }
    hex
}

fn check_report(entry: scenarios::ValidationEntry) -> CheckReport {
    CheckReport {
        label: entry.label,
        pass: entry.pass,
        detail: entry.detail,
    }
}

fn relation_str(relation: &Relation) -> &'static str {
    match relation {
        Relation::Eq => "=",
        Relation::Le => "<=",
        Relation::Ge => ">=",
    }
}

fn exactness_str(exactness: Exactness) -> &'static str {
    match exactness {
        Exactness::Exact => "exact",
        Exactness::AtMost => "upper-bound",
    }
}

/// Converts an executed scenario run into its report entry.
fn run_report(scenario: &Scenario, run: ScenarioRun) -> ScenarioReport {
    let mut entry = ScenarioReport::new(&run.id, digest(scenario));
    entry.validation = run.validation.entries.into_iter().map(check_report).collect();
    entry.records = run
        .records
        .into_iter()
        .map(|rec| RecordReport {
            name: rec.name,
            op: rec.op,
            pass: rec.pass,
            result: rec.outcome.as_ref().map(|o| o.value.to_string()),
            exactness: rec.outcome.as_ref().map(|o| exactness_str(o.exactness)),
            detail: rec.outcome.and_then(|o| o.detail),
            relation: rec.relation.as_ref().map(relation_str),
            expected: rec.expected,
            provenance: rec.provenance,
            error: rec.error,
        })
        .collect();
    entry
}

/// Runs the computations of one scenario whose kind is in `kinds`.
fn filtered_run(
    command: &'static str,
    stamp: Option<u64>,
    target: &str,
    eps: Option<&str>,
    kinds: &[&str],
) -> Result<Report, Failure> {
    let scenario = load_scenario(target, eps)?;
    let ws = workspace(&scenario)?;
    let mut entry = ScenarioReport::new(&scenario.id, digest(&scenario));
    entry.records = scenario
        .compute
        .iter()
        .filter(|comp| kinds.contains(&comp.op.kind()))
        .map(|comp| run_record(&ws, comp))
        .collect();
    let mut report = Report::new(command, stamp);
    report.scenarios.push(entry);
    report.tally();
    Ok(report)
}

/// Runs one computation and checks its expectation, mirroring the record
/// layout of a full scenario run.
fn run_record(ws: &Workspace<'_>, comp: &Computation) -> RecordReport {
    let mut rec = RecordReport {
        name: comp.name.clone(),
        op: comp.op.kind(),
        pass: false,
        result: None,
        exactness: None,
        detail: None,
        relation: comp.expect.as_ref().map(|e| relation_str(&e.relation)),
        expected: comp.expect.as_ref().map(|e| e.value.clone()),
        provenance: comp.provenance.clone(),
        error: None,
    };
    match run_computation(ws, &comp.op) {
        Ok(outcome) => {
            rec.result = Some(outcome.value.to_string());
            rec.exactness = Some(exactness_str(outcome.exactness));
            rec.detail = outcome.detail.clone();
            rec.pass = match &comp.expect {
                None => true,
                Some(exp) => {
                    let checked = parse_value(&exp.value).and_then(|expected| {
                        satisfies(
                            &outcome.value,
                            outcome.exactness,
                            exp.relation.clone(),
                            &expected,
                        )
                    });
                    match checked {
                        Ok(ok) => ok,
                        Err(e) => {
                            rec.error = Some(e.to_string());
                            false
                        }
                    }
                }
            };
        }
        Err(e) => rec.error = Some(e.to_string()),
    }
    rec
}

// ---------------------------------------------------------------------------
// Zariski listings
// ---------------------------------------------------------------------------

/// Builds decomposition listings for every sweep a scenario declares:
/// ledger sweeps on a threefold, declared families, or flag-curve sweeps
/// on a surface.
fn zariski_reports(
    scenario: &Scenario,
    ws: &Workspace<'_>,
    param: Option<&str>,
) -> Result<Vec<SweepReport>, Failure> {
    let at = param
        .map(|p| {
            parse_scalar(p).map_err(|e| input_failure(format!("bad --param value `{p}`: {e}")))
        })
        .transpose()?;
    let mut out = Vec::new();
    for sweep in &scenario.ledger {
        out.push(ledger_sweep_report(ws, &sweep.name, at.as_ref())?);
    }
    for family in &scenario.family {
        out.push(family_report(ws, family, at.as_ref())?);
    }
    for flag in &scenario.flags {
        out.push(flag_sweep_report(ws, flag, at.as_ref())?);
    }
    Ok(out)
}

/// Lists the declared (and revalidated) decomposition pieces of a ledger
/// sweep, or evaluates the piece containing `at`.
fn ledger_sweep_report(
    ws: &Workspace<'_>,
    name: &str,
    at: Option<&Scalar>,
) -> Result<SweepReport, Failure> {
    let (setup, spec) = ws
        .sweep(name)
        .map_err(|e| input_failure(format!("sweep `{name}`: {e}")))?;
    let subject = format!(
        "sweep {name}: -K - u*{} restricted to {}",
        spec.s_class, spec.surface.name
    );
    let mut report = SweepReport {
        subject,
        param: at.map(|s| s.to_string()),
        cells: Vec::new(),
        point: None,
    };
    match at {
        None => {
            for (i, piece) in setup.pieces().iter().enumerate() {
                let positive = setup
                    .positive_part(i)
                    .map_err(|e| compute_failure(format!("sweep `{name}`: {e}")))?;
                let volume = positive
                    .cube()
                    .map_err(|e| compute_failure(format!("sweep `{name}`: {e}")))?;
                report.cells.push(CellReport {
                    lo: piece.lo().to_string(),
                    hi: piece.hi().to_string(),
                    support: piece.negative().iter().map(|(n, _)| n.clone()).collect(),
                    coefficients: piece
                        .negative()
                        .iter()
                        .map(|(_, c)| c.to_string())
                        .collect(),
                    positive: piece.positive().iter().map(|p| p.to_string()).collect(),
                    volume: volume.to_string(),
                });
            }
        }
        Some(q) => {
            let piece = setup
                .pieces()
                .iter()
                .enumerate()
                .find(|(_, p)| {
                    Scalar::from(p.lo().clone()) <= *q && *q <= Scalar::from(p.hi().clone())
                })
                .ok_or_else(|| {
                    input_failure(format!(
                        "sweep `{name}`: parameter {q} lies outside [0, {}]",
                        setup.tau()
                    ))
                })?;
            let (i, p) = piece;
            let fail = |e: &dyn std::fmt::Display| compute_failure(format!("sweep `{name}`: {e}"));
            let parametric = setup.positive_part(i).map_err(|e| fail(&e))?;
            let positive = parametric.substitute(Var::U, q).map_err(|e| fail(&e))?;
            let cube = positive.cube().map_err(|e| fail(&e))?;
            let volume = cube.eval_constant().map_err(|e| fail(&e))?;
            let mut support = Vec::new();
            let mut coefficients = Vec::new();
            for (divisor, coeff) in p.negative() {
                let value = coeff
                    .eval1(Var::U, q)
                    .map_err(|e| compute_failure(format!("sweep `{name}`: {e}")))?;
                if !value.is_zero() {
                    support.push(divisor.clone());
                    coefficients.push(value.to_string());
                }
            }
            report.point = Some(PointReport {
                positive: positive.coords().iter().map(|c| c.to_string()).collect(),
                support,
                coefficients,
                volume: volume.to_string(),
            });
        }
    }
    Ok(report)
}

/// Decomposes a declared family at one parameter value (`--param`, else
/// the family's lower endpoint).
fn family_report(
    ws: &Workspace<'_>,
    family: &scenarios::FamilySpec,
    at: Option<&Scalar>,
) -> Result<SweepReport, Failure> {
    let outer = family_var(family)?;
    let class = family_class(ws, family)?;
    let lo = parse_scalar(&family.lo)
        .map_err(|e| input_failure(format!("family `{}`: bad endpoint: {e}", family.name)))?;
    let value = at.cloned().unwrap_or(lo);
    let fixed = class
        .substitute(outer, &value)
        .map_err(|e| compute_failure(format!("family `{}`: {e}", family.name)))?;
    let d = decompose(&fixed)
        .map_err(|e| compute_failure(format!("family `{}`: {e}", family.name)))?;
    let names = fixed.lattice().basis_names().to_vec();
    let volume = d
        .volume()
        .map_err(|e| compute_failure(format!("family `{}`: {e}", family.name)))?;
    Ok(SweepReport {
        subject: format!(
            "family {} at {} = {value}",
            family.name,
            outer.symbol()
        ),
        param: Some(value.to_string()),
        cells: Vec::new(),
        point: Some(PointReport {
            positive: d.positive().coords().iter().map(|c| c.to_string()).collect(),
            support: d.support().iter().map(|&i| names[i].clone()).collect(),
            coefficients: d.coefficients().iter().map(|c| c.to_string()).collect(),
            volume: volume.to_string(),
        }),
    })
}

/// Sweeps a flag curve against its polarization: the full parametric cell
/// structure, or a single decomposition at `--param`.
fn flag_sweep_report(
    ws: &Workspace<'_>,
    flag: &scenarios::FlagCaseSpec,
    at: Option<&Scalar>,
) -> Result<SweepReport, Failure> {
    let context = |e: &dyn std::fmt::Display| format!("flag curve `{}`: {e}", flag.curve);
    let polarization = ws
        .class(None, &flag.polarization)
        .map_err(|e| input_failure(context(&e)))?;
    let curve = ws
        .class(None, &flag.curve)
        .map_err(|e| input_failure(context(&e)))?;
    let tau = polarization
        .pseff_threshold(&curve)
        .map_err(|e| compute_failure(context(&e)))?;
    let swept = curve
        .scale_poly(&Poly::var(Var::U))
        .and_then(|scaled| polarization.sub(&scaled))
        .map_err(|e| compute_failure(context(&e)))?;
    let names = swept.lattice().basis_names().to_vec();
    let subject = format!(
        "sweep {} - u*{} for u in [0, {tau}]",
        flag.polarization, flag.curve
    );
    match at {
        None => {
            let sweep = decompose_parametric(&swept, Var::U, &Scalar::zero(), &Scalar::from(tau))
                .map_err(|e| compute_failure(context(&e)))?;
            let cells = sweep
                .cells()
                .iter()
                .map(|cell| CellReport {
                    lo: cell.lo().to_string(),
                    hi: cell.hi().to_string(),
                    support: cell.support().iter().map(|&i| names[i].clone()).collect(),
                    coefficients: cell.coefficients().iter().map(|c| c.to_string()).collect(),
                    positive: cell.positive().coords().iter().map(|c| c.to_string()).collect(),
                    volume: cell.volume().to_string(),
                })
                .collect();
            Ok(SweepReport {
                subject,
                param: None,
                cells,
                point: None,
            })
        }
        Some(q) => {
            let fixed = swept
                .substitute(Var::U, q)
                .map_err(|e| compute_failure(context(&e)))?;
            let d = decompose(&fixed).map_err(|e| compute_failure(context(&e)))?;
            let volume = d.volume().map_err(|e| compute_failure(context(&e)))?;
            Ok(SweepReport {
                subject,
                param: Some(q.to_string()),
                cells: Vec::new(),
                point: Some(PointReport {
                    positive: d.positive().coords().iter().map(|c| c.to_string()).collect(),
                    support: d.support().iter().map(|&i| names[i].clone()).collect(),
                    coefficients: d.coefficients().iter().map(|c| c.to_string()).collect(),
                    volume: volume.to_string(),
                }),
            })
        }
    }
}

fn family_var(family: &scenarios::FamilySpec) -> Result<Var, Failure> {
    match family.var.as_str() {
        "t" => Ok(Var::T),
        "v" => Ok(Var::V),
        other => Err(input_failure(format!(
            "family `{}`: parameter `{other}` is not a recognized outer variable",
            family.name
        ))),
    }
}

fn family_class(ws: &Workspace<'_>, family: &scenarios::FamilySpec) -> Result<DivClass, Failure> {
    let lattice = ws
        .lattice(family.lattice.as_deref())
        .map_err(|e| input_failure(format!("family `{}`: {e}", family.name)))?;
    let coords = family
        .coords
        .iter()
        .map(|c| parse_poly(c))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| input_failure(format!("family `{}`: bad coordinate: {e}", family.name)))?;
    DivClass::new(lattice.clone(), coords)
        .map_err(|e| input_failure(format!("family `{}`: {e}", family.name)))
}

// ---------------------------------------------------------------------------
// Chamber listings
// ---------------------------------------------------------------------------

/// Builds chamber structures for everything a scenario sweeps: refined
/// two-parameter complexes over ledger sweeps, family complexes over
/// their parameter boxes, and parametric cells of flag sweeps.
fn chamber_reports(
    scenario: &Scenario,
    ws: &Workspace<'_>,
) -> Result<Vec<ComplexReport>, Failure> {
    let mut out = Vec::new();
    for (sweep, curve) in ledger_curve_pairs(scenario) {
        out.extend(ledger_complexes(ws, &sweep, &curve)?);
    }
    for (family, curve, lo, hi) in family_windows(scenario) {
        let spec = scenario
            .family
            .iter()
            .find(|f| f.name == family)
            .ok_or_else(|| input_failure(format!("family `{family}` is not declared")))?;
        out.push(family_complex(ws, spec, &curve, &lo, hi.as_deref())?);
    }
    for flag in &scenario.flags {
        out.push(flag_complex(ws, flag)?);
    }
    Ok(out)
}

/// The distinct (sweep, curve) pairs the scenario's computations refine.
fn ledger_curve_pairs(scenario: &Scenario) -> Vec<(String, String)> {
    let mut pairs = Vec::new();
    for comp in &scenario.compute {
        let pair = match &comp.op {
            OpSpec::SWCurve(args) => Some((args.sweep.clone(), args.curve.clone())),
            OpSpec::SWPoint(args) => Some((args.sweep.clone(), args.curve.clone())),
            _ => None,
        };
        if let Some(p) = pair {
            if !pairs.contains(&p) {
                pairs.push(p);
            }
        }
    }
    pairs
}

/// The distinct (family, curve, lo, hi) windows the computations use.
fn family_windows(scenario: &Scenario) -> Vec<(String, String, String, Option<String>)> {
    let mut windows = Vec::new();
    let mut push = |w: (String, String, String, Option<String>)| {
        if !windows.contains(&w) {
            windows.push(w);
        }
    };
    for comp in &scenario.compute {
        match &comp.op {
            OpSpec::WindowOrders(args) => push((
                args.family.clone(),
                args.curve.clone(),
                args.lo.clone(),
                args.hi.clone(),
            )),
            OpSpec::WindowValue(args) => push((
                args.family.clone(),
                args.curve.clone(),
                args.lo.clone(),
                args.hi.clone(),
            )),
            OpSpec::CertifiedMin(args) => {
                for cand in &args.candidates {
                    push((
                        cand.family.clone(),
                        cand.curve.clone(),
                        args.lo.clone(),
                        args.hi.clone(),
                    ));
                }
            }
            _ => {}
        }
    }
    windows
}

/// Refined chamber complexes of one curve against one ledger sweep, one
/// per decomposition piece.
fn ledger_complexes(
    ws: &Workspace<'_>,
    sweep: &str,
    curve: &str,
) -> Result<Vec<ComplexReport>, Failure> {
    let (setup, spec) = ws
        .sweep(sweep)
        .map_err(|e| input_failure(format!("sweep `{sweep}`: {e}")))?;
    let surface = setup.surface().clone();
    let coords = surface
        .coords_of(curve)
        .or_else(|_| {
            setup
                .restricted()
                .iter()
                .find(|r| r.curve == curve)
                .map(|r| r.coords.clone())
                .ok_or_else(|| {
                    crate::lattice::LatticeError::UnknownClass(format!(
                        "{curve} on {}",
                        spec.surface.name
                    ))
                })
        })
        .map_err(|e| input_failure(e.to_string()))?;
    let class = DivClass::from_rationals(&surface, &coords)
        .map_err(|e| input_failure(e.to_string()))?;
    let mut out = Vec::new();
    for (i, piece) in setup.pieces().iter().enumerate() {
        let complex = setup
            .piece_complex(i, &class)
            .map_err(|e| compute_failure(format!("sweep `{sweep}`, curve `{curve}`: {e}")))?;
        out.push(complex_report(
            format!(
                "sweep {sweep} piece [{}, {}], refined along {curve}",
                piece.lo(),
                piece.hi()
            ),
            &complex,
            surface.basis_names(),
        ));
    }
    Ok(out)
}

/// The chamber complex of one family window, swept along a flag curve.
fn family_complex(
    ws: &Workspace<'_>,
    family: &scenarios::FamilySpec,
    curve: &str,
    lo: &str,
    hi: Option<&str>,
) -> Result<ComplexReport, Failure> {
    let outer = family_var(family)?;
    let class = family_class(ws, family)?;
    let curve_class = ws
        .class(family.lattice.as_deref(), curve)
        .map_err(|e| input_failure(e.to_string()))?;
    let lo_s =
        parse_scalar(lo).map_err(|e| input_failure(format!("bad window endpoint `{lo}`: {e}")))?;
    // Rays are probed over a bounded span past their lower endpoint,
    // matching the engine's certified-minimum window.
    let hi_s = match hi {
        Some(h) => parse_scalar(h)
            .map_err(|e| input_failure(format!("bad window endpoint `{h}`: {e}")))?,
        None => lo_s
            .try_add(&Scalar::from(num_rational::BigRational::from_integer(8.into())))
            .map_err(|e| compute_failure(e.to_string()))?,
    };
    let swept = curve_class
        .scale_poly(&Poly::var(Var::U))
        .and_then(|scaled| class.sub(&scaled))
        .map_err(|e| compute_failure(e.to_string()))?;
    let complex = two_param_chambers(&swept, outer, Var::U, &lo_s, &hi_s)
        .map_err(|e| compute_failure(format!("family `{}`: {e}", family.name)))?;
    let names = swept.lattice().basis_names().to_vec();
    Ok(complex_report(
        format!(
            "family {} swept along {curve} for {} in [{lo_s}, {hi_s}]",
            family.name,
            outer.symbol()
        ),
        &complex,
        &names,
    ))
}

fn complex_report(subject: String, complex: &ChamberComplex, names: &[String]) -> ComplexReport {
    ComplexReport {
        subject,
        outer: complex.outer().symbol().to_string(),
        inner: Some(complex.inner().symbol().to_string()),
        cells: complex
            .cells()
            .iter()
            .map(|cell| OuterCellReport {
                lo: cell.lo().to_string(),
                hi: cell.hi().to_string(),
                threshold: Some(cell.threshold().to_string()),
                chambers: cell
                    .chambers()
                    .iter()
                    .map(|ch| ChamberReport {
                        wall_lo: ch.wall_lo().to_string(),
                        wall_hi: ch.wall_hi().to_string(),
                        support: ch.support().iter().map(|&i| names[i].clone()).collect(),
                        volume: ch.volume().to_string(),
                    })
                    .collect(),
                support: Vec::new(),
                volume: None,
            })
            .collect(),
    }
}

/// The one-parameter cell structure of a flag sweep, reported as outer
/// cells without inner walls.
fn flag_complex(
    ws: &Workspace<'_>,
    flag: &scenarios::FlagCaseSpec,
) -> Result<ComplexReport, Failure> {
    let context = |e: &dyn std::fmt::Display| format!("flag curve `{}`: {e}", flag.curve);
    let polarization = ws
        .class(None, &flag.polarization)
        .map_err(|e| input_failure(context(&e)))?;
    let curve = ws
        .class(None, &flag.curve)
        .map_err(|e| input_failure(context(&e)))?;
    let tau = polarization
        .pseff_threshold(&curve)
        .map_err(|e| compute_failure(context(&e)))?;
    let swept = curve
        .scale_poly(&Poly::var(Var::U))
        .and_then(|scaled| polarization.sub(&scaled))
        .map_err(|e| compute_failure(context(&e)))?;
    let names = swept.lattice().basis_names().to_vec();
    let subject = format!(
        "sweep {} - u*{} for u in [0, {tau}]",
        flag.polarization, flag.curve
    );
    let sweep = decompose_parametric(&swept, Var::U, &Scalar::zero(), &Scalar::from(tau))
        .map_err(|e| compute_failure(context(&e)))?;
    Ok(ComplexReport {
        subject,
        outer: Var::U.symbol().to_string(),
        inner: None,
        cells: sweep
            .cells()
            .iter()
            .map(|cell| OuterCellReport {
                lo: cell.lo().to_string(),
                hi: cell.hi().to_string(),
                threshold: None,
                chambers: Vec::new(),
                support: cell.support().iter().map(|&i| names[i].clone()).collect(),
                volume: Some(cell.volume().to_string()),
            })
            .collect(),
    })
}

// ---------------------------------------------------------------------------
// Rendering
// ---------------------------------------------------------------------------

fn render(format: Format, report: &Report, out: &mut dyn Write) {
    match format {
        Format::Json => {
            let json = serde_json::to_string_pretty(report)
                .expect("report serialization is infallible");
            let _ = writeln!(out, "{json}");
        }
        Format::Text => render_text(report, out),
    }
}

fn render_text(report: &Report, out: &mut dyn Write) {
    for scenario in &report.scenarios {
        let _ = writeln!(
            out,
            "{}  (digest {})",
            scenario.id,
            &scenario.digest[..12]
        );
        let failures: Vec<_> = scenario.validation.iter().filter(|c| !c.pass).collect();
        if !scenario.validation.is_empty() {
            let _ = writeln!(
                out,
                "  validation: {}/{} checks passed",
                scenario.validation.len() - failures.len(),
                scenario.validation.len()
            );
            for check in failures {
                let _ = writeln!(out, "    FAIL {}: {}", check.label, check.detail);
            }
        }
        for rec in &scenario.records {
            let status = if rec.pass { "ok  " } else { "FAIL" };
            let mut line = format!("  {status} {} [{}]", rec.name, rec.op);
            if let Some(result) = &rec.result {
                line.push_str(&format!(" = {result}"));
            }
            if let Some(exactness) = rec.exactness {
                if exactness != "exact" {
                    line.push_str(&format!(" ({exactness})"));
                }
            }
            if let (Some(rel), Some(exp)) = (&rec.relation, &rec.expected) {
                line.push_str(&format!("  expected {rel} {exp}"));
            }
            if let Some(prov) = &rec.provenance {
                line.push_str(&format!("  [{prov}]"));
            }
            if let Some(err) = &rec.error {
                line.push_str(&format!("  error: {err}"));
            }
            let _ = writeln!(out, "{line}");
            if let Some(detail) = &rec.detail {
                let _ = writeln!(out, "         {detail}");
            }
        }
        for sweep in &scenario.sweeps {
            let _ = writeln!(out, "  {}", sweep.subject);
            for cell in &sweep.cells {
                let _ = writeln!(
                    out,
                    "    cell [{}, {}]: P = ({}){}",
                    cell.lo,
                    cell.hi,
                    cell.positive.join(", "),
                    negative_suffix(&cell.support, &cell.coefficients)
                );
                let _ = writeln!(out, "      volume: {}", cell.volume);
            }
            if let Some(point) = &sweep.point {
                let _ = writeln!(
                    out,
                    "    P = ({}){}",
                    point.positive.join(", "),
                    negative_suffix(&point.support, &point.coefficients)
                );
                let _ = writeln!(out, "    volume: {}", point.volume);
            }
        }
        for complex in &scenario.complexes {
            let _ = writeln!(out, "  {}", complex.subject);
            for cell in &complex.cells {
                match (&cell.threshold, &cell.volume) {
                    (Some(threshold), _) => {
                        let _ = writeln!(
                            out,
                            "    {} in [{}, {}], inner threshold {}",
                            complex.outer, cell.lo, cell.hi, threshold
                        );
                        for chamber in &cell.chambers {
                            let support = if chamber.support.is_empty() {
                                String::from("nef")
                            } else {
                                format!("support {{{}}}", chamber.support.join(", "))
                            };
                            let inner = complex.inner.as_deref().unwrap_or("u");
                            let _ = writeln!(
                                out,
                                "      {inner} in [{}, {}]: {support}, volume {}",
                                chamber.wall_lo, chamber.wall_hi, chamber.volume
                            );
                        }
                    }
                    (None, volume) => {
                        let support = if cell.support.is_empty() {
                            String::from("nef")
                        } else {
                            format!("support {{{}}}", cell.support.join(", "))
                        };
                        let _ = writeln!(
                            out,
                            "    {} in [{}, {}]: {support}, volume {}",
                            complex.outer,
                            cell.lo,
                            cell.hi,
                            volume.as_deref().unwrap_or("-")
                        );
                    }
                }
            }
        }
    }
    let s = &report.summary;
    let _ = writeln!(
        out,
        "summary: {} scenario(s), validation {}/{}, records {} passed / {} failed / {} errored",
        s.scenarios,
        s.validation_checks - s.validation_failures,
        s.validation_checks,
        s.records_passed,
        s.records_failed,
        s.computation_errors
    );
}

fn negative_suffix(support: &[String], coefficients: &[String]) -> String {
    if support.is_empty() {
        return String::new();
    }
    let terms: Vec<String> = support
        .iter()
        .zip(coefficients)
        .map(|(name, coeff)| format!("({coeff})*{name}"))
        .collect();
    format!(", N = {}", terms.join(" + "))
}
