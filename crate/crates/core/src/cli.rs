//! Command-line front end: single evaluations, sweeps, perturbative
//! scatter, the parametric curve and oracle cross-checks, written as CSV or
//! JSON.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::{Map, Value};

use crate::error::{Error, Result};
use crate::measures::{measure_report, MeasureReport};
use crate::numerics::{
    auto_grid, covariance_of, overlap, sample_ground_state_on, GridOptions, DEFAULT_GRID_POINTS, DEFAULT_TARGET_TAIL,
};
use crate::oracle::fd_ground_state;
use crate::perturbation::{parametric_curve, scatter_sample};
use crate::potentials::{ground_energy, morse_n, PotentialSpec};
use crate::specfun::entropy_h;

/// Largest accepted `1 - fidelity` between analytic and finite-difference states.
pub const ORACLE_FIDELITY_TOLERANCE: f64 = 1e-5;
/// Largest accepted analytic vs finite-difference energy mismatch.
pub const ORACLE_ENERGY_TOLERANCE: f64 = 1e-4;

#[derive(Debug, Parser)]
#[command(name = "anharmonic", version, about = "Ground-state nonlinearity measures for 1D quantum oscillators")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate eta_b and eta_ng for one potential.
    Measure {
        #[arg(long)]
        potential: PotentialSpec,
        #[command(flatten)]
        grid: GridArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Evaluate both measures along one parameter of a potential.
    Sweep {
        #[arg(long)]
        potential: PotentialSpec,
        /// Parameter to vary, e.g. `alpha`, `D`, `a`, `p`.
        #[arg(long)]
        axis: String,
        #[arg(long, allow_hyphen_values = true)]
        from: f64,
        #[arg(long, allow_hyphen_values = true)]
        to: f64,
        #[arg(long, default_value_t = 20)]
        points: usize,
        /// Space sweep points geometrically instead of linearly.
        #[arg(long)]
        log_spacing: bool,
        #[command(flatten)]
        grid: GridArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Sample random cubic and quartic perturbations of a harmonic oscillator.
    Scatter {
        #[arg(long, default_value_t = 1000)]
        n: usize,
        #[arg(long, value_parser = parse_range, allow_hyphen_values = true, default_value = "-0.1,0.1")]
        eps3: (f64, f64),
        #[arg(long, value_parser = parse_range, allow_hyphen_values = true, default_value = "-0.25,0.25")]
        eps4: (f64, f64),
        #[arg(long, default_value_t = 1.0)]
        omega: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Tabulate the printed and corrected eta_ng(eta_b) curves.
    Curve {
        #[arg(long, default_value_t = 0.0)]
        from: f64,
        #[arg(long, default_value_t = 0.5)]
        to: f64,
        #[arg(long, default_value_t = 51)]
        points: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Compare the analytic ground state with a finite-difference solution.
    OracleCheck {
        #[arg(long)]
        potential: PotentialSpec,
        #[command(flatten)]
        grid: GridArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
}

#[derive(Debug, Clone, Copy, Args)]
pub struct GridArgs {
    #[arg(long, default_value_t = DEFAULT_GRID_POINTS)]
    pub grid_points: usize,
    /// Ground-state amplitude at the grid ends relative to its peak.
    #[arg(long, default_value_t = DEFAULT_TARGET_TAIL)]
    pub tail: f64,
}

impl From<GridArgs> for GridOptions {
    fn from(g: GridArgs) -> Self {
        GridOptions { n_points: g.grid_points, target_tail: g.tail }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Write to this file instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn parse_range(s: &str) -> std::result::Result<(f64, f64), String> {
    let (lo, hi) = s.split_once(',').ok_or_else(|| format!("expected 'lo,hi', got '{s}'"))?;
    let parse = |t: &str| t.trim().parse::<f64>().map_err(|e| format!("'{t}': {e}"));
    Ok((parse(lo)?, parse(hi)?))
}

/// A table cell; numbers are rounded to 12 significant digits on output.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(Option<f64>),
    Text(Option<String>),
}

impl Cell {
    fn rounded(x: f64) -> Option<f64> {
        x.is_finite().then(|| format!("{x:.11e}").parse().expect("formatted float parses"))
    }

    fn to_json(&self) -> Value {
        match self {
            Cell::Num(x) => x.and_then(Self::rounded).map_or(Value::Null, Value::from),
            Cell::Text(t) => t.clone().map_or(Value::Null, Value::String),
        }
    }

    fn to_csv(&self) -> String {
        match self {
            Cell::Num(_) => match self.to_json() {
                Value::Null => String::new(),
                v => v.to_string(),
            },
            // CSV fields never need quoting
            Cell::Text(t) => t.as_deref().unwrap_or("").replace([',', '\n', '\r', '"'], " "),
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(Some(x))
    }
}

impl From<Option<f64>> for Cell {
    fn from(x: Option<f64>) -> Self {
        Cell::Num(x)
    }
}

/// Rows of named columns, rendered as CSV or as JSON.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    fn new(columns: &[&str]) -> Self {
        Self { columns: columns.iter().map(|c| c.to_string()).collect(), rows: Vec::new() }
    }

    fn json_row(&self, row: &[Cell]) -> Value {
        Value::Object(self.columns.iter().cloned().zip(row.iter().map(Cell::to_json)).collect::<Map<_, _>>())
    }

    /// CSV with a header row, or JSON: an object when `single`, an array of objects otherwise.
    pub fn render(&self, format: Format, single: bool) -> String {
        match format {
            Format::Csv => {
                let mut out = self.columns.join(",");
                out.push('\n');
                for row in &self.rows {
                    out.push_str(&row.iter().map(Cell::to_csv).collect::<Vec<_>>().join(","));
                    out.push('\n');
                }
                out
            }
            Format::Json => {
                let doc = if single && self.rows.len() == 1 {
                    self.json_row(&self.rows[0])
                } else {
                    Value::Array(self.rows.iter().map(|r| self.json_row(r)).collect())
                };
                let mut out = serde_json::to_string_pretty(&doc).expect("JSON values serialize");
                out.push('\n');
                out
            }
        }
    }
}

/// Result of a command: the document to emit, warnings for the error
/// stream, and a failure that must turn into a nonzero exit after the
/// document is written.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub document: String,
    pub warnings: Vec<String>,
    pub failure: Option<String>,
}

const REPORT_COLUMNS: [&str; 6] = ["eta_b", "eta_ng", "omega_r", "ground_energy", "det_sigma", "fidelity_to_reference"];

fn report_cells(r: &MeasureReport) -> Vec<Cell> {
    vec![
        r.eta_b.into(),
        r.eta_ng.into(),
        r.omega_r.into(),
        r.ground_energy.into(),
        r.det_sigma.into(),
        r.fidelity_to_reference.into(),
    ]
}

fn run_measure(spec: &PotentialSpec, grid: GridArgs, format: Format) -> Result<Outcome> {
    let report = measure_report(spec, &grid.into())?;
    let mut columns = REPORT_COLUMNS.to_vec();
    columns.push("moments");
    let mut table = Table::new(&columns);
    let mut row = report_cells(&report);
    let route = serde_json::to_value(report.diagnostics.moments).expect("route serializes");
    row.push(Cell::Text(route.as_str().map(str::to_owned)));
    table.rows.push(row);
    Ok(Outcome { document: table.render(format, true), warnings: report.diagnostics.warnings, failure: None })
}

/// Sweep points in ascending order, endpoints exact.
pub fn sweep_values(from: f64, to: f64, points: usize, log_spacing: bool) -> Result<Vec<f64>> {
    if !(from.is_finite() && to.is_finite() && from < to) {
        return Err(Error::InvalidArgument(format!("sweep range must be strictly increasing, got {from} to {to}")));
    }
    if points < 2 {
        return Err(Error::InvalidArgument(format!("sweep needs at least 2 points, got {points}")));
    }
    if log_spacing && from <= 0.0 {
        return Err(Error::InvalidArgument("log spacing needs a positive range".into()));
    }
    let last = (points - 1) as f64;
    Ok((0..points)
        .map(|k| {
            let t = k as f64 / last;
            match (k, log_spacing) {
                (0, _) => from,
                (k, _) if k == points - 1 => to,
                (_, true) => from * (to / from).powf(t),
                (_, false) => from + (to - from) * t,
            }
        })
        .collect())
}

fn run_sweep(base: &PotentialSpec, axis: &str, values: &[f64], grid: GridArgs, format: Format) -> Result<Outcome> {
    if !base.parameter_names().contains(&axis) {
        return Err(Error::InvalidArgument(format!(
            "'{axis}' is not a parameter of {} (expected one of {})",
            base.kind(),
            base.parameter_names().join(", ")
        )));
    }
    let options: GridOptions = grid.into();
    let results: Vec<Result<MeasureReport>> = values
        .par_iter()
        .map(|&v| base.with_parameter(axis, v).and_then(|spec| measure_report(&spec, &options)))
        .collect();

    let mut columns = vec![axis];
    columns.extend(REPORT_COLUMNS);
    columns.push("error");
    let mut table = Table::new(&columns);
    let mut warnings = Vec::new();
    for (&v, result) in values.iter().zip(&results) {
        let mut row = vec![Cell::from(v)];
        match result {
            Ok(r) => {
                row.extend(report_cells(r));
                row.push(Cell::Text(None));
                warnings.extend(r.diagnostics.warnings.iter().map(|w| format!("{axis} = {v}: {w}")));
            }
            Err(e) => {
                row.extend(std::iter::repeat_n(Cell::Num(None), REPORT_COLUMNS.len()));
                row.push(Cell::Text(Some(e.to_string())));
            }
        }
        table.rows.push(row);
    }
    if results.iter().all(|r| r.is_err()) {
        let first = results.into_iter().find_map(|r| r.err()).expect("sweep has points");
        return Err(first);
    }
    Ok(Outcome { document: table.render(format, false), warnings, failure: None })
}

fn run_scatter(n: usize, eps3: (f64, f64), eps4: (f64, f64), omega: f64, seed: u64, format: Format) -> Result<Outcome> {
    let records = scatter_sample(n, eps3, eps4, omega, seed)?;
    let mut table = Table::new(&["eps3", "eps4", "eta_b", "eta_ng"]);
    table.rows = records.iter().map(|r| vec![r.eps3.into(), r.eps4.into(), r.eta_b.into(), r.eta_ng.into()]).collect();
    Ok(Outcome { document: table.render(format, false), warnings: Vec::new(), failure: None })
}

fn run_curve(from: f64, to: f64, points: usize, format: Format) -> Result<Outcome> {
    let mut table = Table::new(&["eta_b", "eta_ng_printed", "eta_ng_corrected"]);
    for eta_b in sweep_values(from, to, points, false)? {
        let c = parametric_curve(eta_b)?;
        table.rows.push(vec![eta_b.into(), c.printed.into(), c.corrected.into()]);
    }
    Ok(Outcome { document: table.render(format, false), warnings: Vec::new(), failure: None })
}

/// Analytic vs finite-difference comparison for one potential.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleComparison {
    pub analytic_energy: f64,
    pub fd_energy: f64,
    pub fidelity: f64,
    pub eta_ng_analytic: f64,
    pub eta_ng_fd: f64,
    /// Morse only: the energy read as `-alpha N^2 / 2`.
    pub printed_alpha_energy: Option<f64>,
}

impl OracleComparison {
    pub fn energy_difference(&self) -> f64 {
        self.analytic_energy - self.fd_energy
    }

    pub fn passes(&self) -> bool {
        self.fidelity >= 1.0 - ORACLE_FIDELITY_TOLERANCE && self.energy_difference().abs() <= ORACLE_ENERGY_TOLERANCE
    }
}

pub fn oracle_comparison(spec: &PotentialSpec, options: &GridOptions) -> Result<OracleComparison> {
    let grid = auto_grid(spec, options)?;
    let analytic = sample_ground_state_on(spec, grid, options.target_tail)?;
    let fd = fd_ground_state(spec, &grid)?;
    let ov = overlap(&analytic, &fd.wavefunction)?;
    let eta = |cov: crate::numerics::CovarianceMatrix| entropy_h(cov.det().sqrt());
    Ok(OracleComparison {
        analytic_energy: ground_energy(spec)?,
        fd_energy: fd.energy,
        fidelity: ov * ov,
        eta_ng_analytic: eta(covariance_of(&analytic)?)?,
        eta_ng_fd: eta(covariance_of(&fd.wavefunction)?)?,
        printed_alpha_energy: match *spec {
            PotentialSpec::Morse { depth, alpha } => Some(-0.5 * alpha * morse_n(depth, alpha).powi(2)),
            _ => None,
        },
    })
}

fn run_oracle_check(spec: &PotentialSpec, grid: GridArgs, format: Format) -> Result<Outcome> {
    let c = oracle_comparison(spec, &grid.into())?;
    let mut table = Table::new(&[
        "analytic_energy",
        "fd_energy",
        "energy_difference",
        "fidelity",
        "eta_ng_analytic",
        "eta_ng_fd",
        "printed_alpha_energy",
        "printed_alpha_difference",
    ]);
    table.rows.push(vec![
        c.analytic_energy.into(),
        c.fd_energy.into(),
        c.energy_difference().into(),
        c.fidelity.into(),
        c.eta_ng_analytic.into(),
        c.eta_ng_fd.into(),
        c.printed_alpha_energy.into(),
        c.printed_alpha_energy.map(|e| e - c.fd_energy).into(),
    ]);
    let failure = (!c.passes()).then(|| {
        format!(
            "oracle mismatch: fidelity {:.3e} below 1 - {ORACLE_FIDELITY_TOLERANCE:e} or |energy difference| {:.3e} above {ORACLE_ENERGY_TOLERANCE:e}",
            c.fidelity,
            c.energy_difference().abs()
        )
    });
    Ok(Outcome { document: table.render(format, true), warnings: Vec::new(), failure })
}

/// Runs a parsed command line.
pub fn execute(cli: &Cli) -> Result<Outcome> {
    match &cli.command {
        Command::Measure { potential, grid, output } => run_measure(potential, *grid, output.format),
        Command::Sweep { potential, axis, from, to, points, log_spacing, grid, output } => {
            let values = sweep_values(*from, *to, *points, *log_spacing)?;
            run_sweep(potential, axis, &values, *grid, output.format)
        }
        Command::Scatter { n, eps3, eps4, omega, seed, output } => {
            run_scatter(*n, *eps3, *eps4, *omega, *seed, output.format)
        }
        Command::Curve { from, to, points, output } => run_curve(*from, *to, *points, output.format),
        Command::OracleCheck { potential, grid, output } => run_oracle_check(potential, *grid, output.format),
    }
}

fn output_args(cli: &Cli) -> &OutputArgs {
    match &cli.command {
        Command::Measure { output, .. }
        | Command::Sweep { output, .. }
        | Command::Scatter { output, .. }
        | Command::Curve { output, .. }
        | Command::OracleCheck { output, .. } => output,
    }
}

fn write_outcome(cli: &Cli, outcome: &Outcome, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<()> {
    for w in &outcome.warnings {
        writeln!(stderr, "warning: {w}")?;
    }
    match &output_args(cli).out {
        Some(path) => std::fs::write(path, &outcome.document)?,
        None => stdout.write_all(outcome.document.as_bytes())?,
    }
    Ok(())
}

/// Parses `args`, runs the command and writes its output. Returns the
/// process exit code; failures print one line to `stderr`.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let rendered = e.render().to_string();
            if !e.use_stderr() {
                let _ = write!(stdout, "{rendered}");
                return 0;
            }
            let first = rendered.lines().find(|l| !l.trim().is_empty()).unwrap_or("error: invalid arguments");
            let _ = writeln!(stderr, "{first}");
            return 2;
        }
    };
    let result = execute(&cli).and_then(|outcome| write_outcome(&cli, &outcome, stdout, stderr).map(|_| outcome));
    match result {
        Ok(Outcome { failure: None, .. }) => 0,
        Ok(Outcome { failure: Some(msg), .. }) => {
            let _ = writeln!(stderr, "error: {msg}");
            1
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            1
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_str(args: &[&str]) -> (i32, String, String) {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let mut full = vec!["anharmonic"];
        full.extend_from_slice(args);
        let code = run(full, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn cells_round_to_twelve_digits() {
        assert_eq!(Cell::from(0.1234567890123456).to_csv(), "0.123456789012");
        assert_eq!(Cell::from(1.0 / 3.0).to_json(), Value::from(0.333333333333));
        assert_eq!(Cell::from(0.0).to_csv(), "0.0");
        assert_eq!(Cell::Num(None).to_csv(), "");
        assert_eq!(Cell::from(f64::NAN).to_json(), Value::Null);
        assert_eq!(Cell::Text(Some("a,b".into())).to_csv(), "a b");
    }

    #[test]
    fn sweep_value_examples() {
        assert_eq!(sweep_values(0.0, 1.0, 3, false).unwrap(), vec![0.0, 0.5, 1.0]);
        let v = sweep_values(0.2, 50.0, 40, true).unwrap();
        assert_eq!((v[0], v[39]), (0.2, 50.0));
        assert!(v.windows(2).all(|w| w[1] > w[0]));
        assert!(sweep_values(1.0, 1.0, 3, false).is_err());
        assert!(sweep_values(0.0, 1.0, 1, false).is_err());
        assert!(sweep_values(0.0, 1.0, 3, true).is_err());
    }

    #[test]
    fn range_parsing() {
        assert_eq!(parse_range("-0.1,0.2").unwrap(), (-0.1, 0.2));
        assert!(parse_range("0.1").is_err());
        assert!(parse_range("a,1").is_err());
    }

    #[test]
    fn measure_outputs() {
        let (code, out, _) = run_str(&["measure", "--potential", "harmonic:omega=1", "--format", "json"]);
        assert_eq!(code, 0);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert!(v["eta_b"].as_f64().unwrap() <= 1e-6 && v["eta_ng"].as_f64().unwrap() <= 1e-6);
        assert_eq!(v["ground_energy"].as_f64(), Some(0.5));

        let (code, out, _) = run_str(&["measure", "--potential", "fs:p=-0.6"]);
        assert_eq!(code, 0);
        let lines: Vec<&str> = out.lines().collect();
        assert_eq!(lines[0], "eta_b,eta_ng,omega_r,ground_energy,det_sigma,fidelity_to_reference,moments");
        assert!(lines[1].starts_with(",") && lines.len() == 2);

        let (code, out, err) = run_str(&["measure", "--potential", "morse:D=1,alpha=3"]);
        assert_ne!(code, 0);
        assert!(out.is_empty());
        assert!(err.contains("bound-state constraint") && err.lines().count() == 1, "{err}");
    }

    #[test]
    fn bad_arguments_fail() {
        assert_ne!(run_str(&["measure", "--potential", "square:w=1"]).0, 0);
        assert_ne!(run_str(&["sweep", "--potential", "mio:a=1", "--axis", "alpha", "--from", "1", "--to", "2"]).0, 0);
        assert_ne!(run_str(&["sweep", "--potential", "mio:a=1", "--axis", "a", "--from", "2", "--to", "1"]).0, 0);
        assert_ne!(run_str(&["scatter", "--eps3", "-0.7,0.1"]).0, 0);
    }

    #[test]
    fn sweep_records_failures_per_point() {
        let (code, out, _) = run_str(&[
            "sweep",
            "--potential",
            "morse:D=1,alpha=1",
            "--axis",
            "alpha",
            "--from",
            "2",
            "--to",
            "3.2",
            "--points",
            "4",
        ]);
        assert_eq!(code, 0);
        let rows: Vec<&str> = out.lines().skip(1).collect();
        assert_eq!(rows.len(), 4);
        assert!(rows[0].ends_with(','));
        assert!(rows[3].contains("bound-state constraint"));
    }

    #[test]
    fn curve_output() {
        let (code, out, _) = run_str(&["curve", "--points", "3", "--to", "0.4"]);
        assert_eq!(code, 0);
        let lines: Vec<&str> = out.lines().collect();
        assert_eq!(lines[0], "eta_b,eta_ng_printed,eta_ng_corrected");
        assert_eq!(lines[1], "0.0,0.0,0.0");
        assert!(lines[2].starts_with("0.2,,"));
    }

    #[test]
    fn oracle_check_outputs() {
        let (code, out, _) = run_str(&["oracle-check", "--potential", "mpt:D=1,alpha=1", "--format", "json"]);
        assert_eq!(code, 0, "{out}");
        let v: Value = serde_json::from_str(&out).unwrap();
        assert!(v["energy_difference"].as_f64().unwrap().abs() <= 1e-5);
        assert!(v["printed_alpha_energy"].is_null());

        let (code, out, _) = run_str(&["oracle-check", "--potential", "morse:D=1,alpha=0.5", "--format", "json"]);
        assert_eq!(code, 0);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert!(v["printed_alpha_difference"].as_f64().unwrap().abs() > 0.1);
    }
}
