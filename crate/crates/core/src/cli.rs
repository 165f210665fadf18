//! Command-line front end: argument parsing, record formatting and the
//! individual subcommands. The binary only forwards `argv` to [`run`].

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs::{self, File};
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::nonlinearization::{build_profiles, write_plot_data};
use crate::observables::{transition_curve, GapSource, TransitionResult};
use crate::oracle::solve_exact;
use crate::prolate::{Geometry, StateLabel};
use crate::variational::{curve, minimize, CurveMode, SolveResult, SolverConfig, DEFAULT_QUAD_ORDER};
use crate::verify::run_suite;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Parser)]
#[command(name = "h2ion", version, about = "H2+ compact uniform wavefunctions: energies, corrections, oscillator strengths")]
pub struct Cli {
    /// Gauss-Legendre order per coordinate.
    #[arg(long, global = true, env = "H2ION_QUAD_ORDER", default_value_t = DEFAULT_QUAD_ORDER)]
    pub order: usize,

    /// Energy-evaluation budget per minimization.
    #[arg(long, global = true)]
    pub budget: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Minimize the energy at one internuclear distance.
    Solve {
        /// State label: 1ssg or 2psu.
        #[arg(long, value_parser = parse_state)]
        state: StateLabel,
        /// Internuclear distance (Bohr).
        #[arg(long = "R")]
        r: f64,
        /// Add the shooting-solver comparison to the record.
        #[arg(long)]
        verify: bool,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Potential-energy curve over a grid of R.
    Curve {
        /// State label: 1ssg or 2psu.
        #[arg(long, value_parser = parse_state)]
        state: StateLabel,
        #[command(flatten)]
        grid: GridArgs,
        /// Seed each point from its neighbour as well as the preset table.
        #[arg(long)]
        warm_start: bool,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// 1ssg -> 2psu dipole matrix element and oscillator strength.
    Oscillator {
        #[command(flatten)]
        grid: GridArgs,
        /// Source of the g/u energy gap.
        #[arg(long, value_enum, default_value_t = Gap::Variational)]
        gap: Gap,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Write X0, Y0, phi1 and rho1 profiles as two-column text files.
    Correction {
        /// State label: 1ssg or 2psu.
        #[arg(long, value_parser = parse_state)]
        state: StateLabel,
        /// Internuclear distance (Bohr).
        #[arg(long = "R")]
        r: f64,
        /// Output directory.
        #[arg(long, default_value = ".")]
        dir: PathBuf,
    },
    /// Run the acceptance suite and print one PASS/FAIL line per criterion.
    Verify {
        /// Only the R = 2 subset.
        #[arg(long)]
        quick: bool,
        #[command(flatten)]
        out: OutputArgs,
    },
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Output file; standard output when absent.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct GridArgs {
    /// Single internuclear distance (Bohr).
    #[arg(long = "R", conflicts_with_all = ["grid", "min"])]
    pub r: Option<f64>,
    /// Comma-separated list of R values.
    #[arg(long, value_delimiter = ',', conflicts_with = "min")]
    pub grid: Option<Vec<f64>>,
    /// Uniform grid: first R.
    #[arg(long, requires_all = ["max", "count"])]
    pub min: Option<f64>,
    /// Uniform grid: last R.
    #[arg(long)]
    pub max: Option<f64>,
    /// Uniform grid: number of points.
    #[arg(long)]
    pub count: Option<usize>,
}

impl GridArgs {
    pub fn values(&self) -> Result<Vec<f64>> {
        let grid = if let Some(r) = self.r {
            vec![r]
        } else if let Some(g) = &self.grid {
            g.clone()
        } else if let (Some(lo), Some(hi), Some(n)) = (self.min, self.max, self.count) {
            match n {
                0 => Vec::new(),
                1 => vec![lo],
                _ => (0..n).map(|k| lo + (hi - lo) * k as f64 / (n - 1) as f64).collect(),
            }
        } else {
            return Err(Error::Usage("give --R, --grid or --min/--max/--count".into()));
        };
        if grid.is_empty() {
            return Err(Error::Usage("empty R grid".into()));
        }
        if let Some(bad) = grid.iter().find(|r| !(**r > 0.0) || !r.is_finite()) {
            return Err(Error::Usage(format!("R must be positive, got {bad}")));
        }
        Ok(grid)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Gap {
    Variational,
    Oracle,
}

fn parse_state(s: &str) -> std::result::Result<StateLabel, String> {
    s.parse::<StateLabel>().map_err(|e| e.to_string())
}

/// `x` with 12 significant digits.
pub fn sig12(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let exp = x.abs().log10().floor() as i32;
    if (-4..12).contains(&exp) {
        format!("{:.*}", (11 - exp) as usize, x)
    } else {
        format!("{x:.11e}")
    }
}

#[derive(Clone, Debug)]
pub enum Field {
    Num(f64),
    Int(u64),
    Text(String),
    Flag(bool),
}

impl Field {
    fn csv(&self) -> String {
        match self {
            Field::Num(x) => sig12(*x),
            Field::Int(n) => n.to_string(),
            Field::Text(s) if s.contains([',', '"', '\n']) => format!("\"{}\"", s.replace('"', "\"\"")),
            Field::Text(s) => s.clone(),
            Field::Flag(b) => b.to_string(),
        }
    }

    fn json(&self) -> Value {
        match self {
            // rounded like the CSV so both outputs agree
            Field::Num(x) => sig12(*x).parse::<f64>().map_or(Value::Null, |v| json!(v)),
            Field::Int(n) => json!(n),
            Field::Text(s) => json!(s),
            Field::Flag(b) => json!(b),
        }
    }
}

/// Column name (with units) and value.
pub type Record = Vec<(&'static str, Field)>;

/// Records plus the metadata echoed in the file header.
pub struct Report {
    pub meta: Vec<(String, String)>,
    pub records: Vec<Record>,
}

impl Report {
    fn new(command: &str, cli: &Cli) -> Self {
        Report {
            meta: vec![
                ("tool".into(), format!("h2ion {VERSION}")),
                ("command".into(), command.into()),
                ("quad_order".into(), cli.order.to_string()),
                ("budget".into(), cli.budget.map_or("default".into(), |b| b.to_string())),
                ("units".into(), "energies in Ry, lengths in Bohr".into()),
            ],
            records: Vec::new(),
        }
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::new();
        for (k, v) in &self.meta {
            let _ = writeln!(s, "# {k}: {v}");
        }
        if let Some(first) = self.records.first() {
            let header: Vec<&str> = first.iter().map(|(k, _)| *k).collect();
            let _ = writeln!(s, "{}", header.join(","));
        }
        for rec in &self.records {
            let row: Vec<String> = rec.iter().map(|(_, f)| f.csv()).collect();
            let _ = writeln!(s, "{}", row.join(","));
        }
        s
    }

    pub fn to_json(&self) -> String {
        let meta: Map<String, Value> = self.meta.iter().map(|(k, v)| (k.clone(), json!(v))).collect();
        let records: Vec<Value> = self
            .records
            .iter()
            .map(|r| Value::Object(r.iter().map(|(k, f)| (k.to_string(), f.json())).collect()))
            .collect();
        let mut text = serde_json::to_string_pretty(&json!({ "meta": meta, "records": records })).unwrap_or_default();
        text.push('\n');
        text
    }

    fn emit(&self, out: &OutputArgs) -> Result<()> {
        let text = match out.format {
            Format::Csv => self.to_csv(),
            Format::Json => self.to_json(),
        };
        write_text(out.output.as_deref(), &text)
    }
}

fn write_text(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text)?,
        None => {
            let mut stdout = io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()?;
        }
    }
    Ok(())
}

fn status_of<T>(res: &Result<T>) -> String {
    match res {
        Ok(_) => "ok".into(),
        Err(Error::IterationLimit { .. }) => "budget".into(),
        Err(e) => format!("error: {e}"),
    }
}

/// Record for one solve; failed points keep their `R`, state and status.
pub fn solve_record(state: StateLabel, r: f64, res: &Result<SolveResult>) -> Record {
    let status = status_of(res);
    let best = match res {
        Ok(s) => Some(s),
        Err(Error::IterationLimit { best, .. }) => Some(best.as_ref()),
        Err(_) => None,
    };
    let num = |f: fn(&SolveResult) -> f64| Field::Num(best.map_or(f64::NAN, f));
    vec![
        ("state", Field::Text(state.to_string())),
        ("R_bohr", Field::Num(r)),
        ("E_total_Ry", num(|s| s.e_total)),
        ("E_electronic_Ry", num(|s| s.e_prime)),
        ("p", num(|s| s.p_opt)),
        ("alpha", num(|s| s.params.alpha)),
        ("gamma", num(|s| s.params.gamma)),
        ("a1", num(|s| s.params.a1)),
        ("a2", num(|s| s.params.a2)),
        ("b2", num(|s| s.params.b2)),
        ("b3", num(|s| s.params.b3)),
        ("A1_xi", num(|s| s.a1x)),
        ("A1_eta", num(|s| s.a1y)),
        ("p_consistency", num(|s| s.diagnostics.p_consistency)),
        ("p_argmin", num(|s| s.diagnostics.p_argmin)),
        ("quadrature_error", num(|s| s.diagnostics.quadrature_error)),
        ("evaluations", Field::Int(best.map_or(0, |s| s.diagnostics.evaluations as u64))),
        ("converged", Field::Flag(best.is_some_and(|s| s.diagnostics.converged))),
        ("status", Field::Text(status)),
    ]
}

pub fn transition_record(r: f64, res: &Result<TransitionResult>) -> Record {
    let t = res.as_ref().ok();
    let num = |f: fn(&TransitionResult) -> f64| Field::Num(t.map_or(f64::NAN, f));
    vec![
        ("R_bohr", Field::Num(r)),
        ("E_g_Ry", num(|t| t.e_g)),
        ("E_u_Ry", num(|t| t.e_u)),
        ("dE_Ry", num(|t| t.delta_e)),
        ("Q_z_bohr", num(|t| t.q_z)),
        ("f01", num(|t| t.f01)),
        ("status", Field::Text(status_of(res))),
    ]
}

impl Cli {
    pub fn solver_config(&self) -> Result<SolverConfig> {
        if self.order < 8 {
            return Err(Error::Usage(format!("quadrature order {} is too small (need >= 8)", self.order)));
        }
        let mut c = SolverConfig {
            quad_order: self.order,
            ..SolverConfig::default()
        };
        if let Some(b) = self.budget {
            c.max_evaluations = b;
        }
        Ok(c)
    }
}

/// Outcome of a command: `Ok(true)` when every record succeeded.
fn execute(cli: &Cli) -> Result<bool> {
    let config = cli.solver_config()?;
    match &cli.command {
        Command::Solve { state, r, verify, out } => {
            state.ensure_supported()?;
            let geometry = Geometry::new(*r)?;
            let res = minimize(geometry, *state, None, &config);
            let mut report = Report::new("solve", cli);
            report.meta.push(("state".into(), state.to_string()));
            report.meta.push(("R".into(), sig12(*r)));
            let mut rec = solve_record(*state, *r, &res);
            let mut ok = res.is_ok();
            if *verify {
                let hint = res.as_ref().ok().map(|s| s.p_opt);
                match (solve_exact(geometry, *state, hint), &res) {
                    (Ok(o), Ok(s)) => {
                        let d = (s.e_total - o.e_total).abs();
                        rec.push(("E_oracle_Ry", Field::Num(o.e_total)));
                        rec.push(("A_oracle", Field::Num(o.a)));
                        rec.push(("dE_oracle_Ry", Field::Num(d)));
                        ok &= d <= 1e-9;
                    }
                    (Err(e), _) => {
                        rec.push(("E_oracle_Ry", Field::Num(f64::NAN)));
                        rec.push(("A_oracle", Field::Num(f64::NAN)));
                        rec.push(("dE_oracle_Ry", Field::Text(format!("error: {e}"))));
                        ok = false;
                    }
                    (Ok(o), Err(_)) => {
                        rec.push(("E_oracle_Ry", Field::Num(o.e_total)));
                        rec.push(("A_oracle", Field::Num(o.a)));
                        rec.push(("dE_oracle_Ry", Field::Num(f64::NAN)));
                    }
                }
            }
            if let Err(e) = &res {
                eprintln!("h2ion: {e}");
            }
            report.records.push(rec);
            report.emit(out)?;
            Ok(ok)
        }
        Command::Curve { state, grid, warm_start, out } => {
            state.ensure_supported()?;
            let mut values = grid.values()?;
            values.sort_by(f64::total_cmp);
            values.dedup();
            let mode = if *warm_start { CurveMode::WarmStart } else { CurveMode::Parallel };
            let results = curve(&values, *state, &config, mode)?;
            let mut report = Report::new("curve", cli);
            report.meta.push(("state".into(), state.to_string()));
            report.meta.push(("mode".into(), format!("{mode:?}")));
            let ok = results.iter().all(|r| r.is_ok());
            report.records = values.iter().zip(&results).map(|(&r, res)| solve_record(*state, r, res)).collect();
            report.emit(out)?;
            Ok(ok)
        }
        Command::Oscillator { grid, gap, out } => {
            let values = grid.values()?;
            let source = match gap {
                Gap::Variational => GapSource::Variational,
                Gap::Oracle => GapSource::Oracle,
            };
            let results = transition_curve(&values, &config, source);
            let mut report = Report::new("oscillator", cli);
            report.meta.push(("gap".into(), format!("{source:?}")));
            report.meta.push(("f01".into(), "(2/3) dE[Ry] Q_z^2, origin at the midpoint".into()));
            let ok = results.iter().all(|r| r.is_ok());
            report.records = values.iter().zip(&results).map(|(&r, res)| transition_record(r, res)).collect();
            report.emit(out)?;
            Ok(ok)
        }
        Command::Correction { state, r, dir } => {
            state.ensure_supported()?;
            let s = minimize(Geometry::new(*r)?, *state, None, &config)?;
            let files = write_correction_files(&s, dir)?;
            for f in files {
                println!("{}", f.display());
            }
            Ok(true)
        }
        Command::Verify { quick, out } => {
            let outcomes = run_suite(*quick, &config);
            let ok = outcomes.iter().all(|o| o.passed);
            let text = match out.format {
                Format::Csv => {
                    let mut s = String::new();
                    for o in &outcomes {
                        let _ = writeln!(s, "{o}");
                    }
                    s
                }
                Format::Json => {
                    let mut s = serde_json::to_string_pretty(&outcomes).unwrap_or_default();
                    s.push('\n');
                    s
                }
            };
            write_text(out.output.as_deref(), &text)?;
            Ok(ok)
        }
    }
}

/// Write `X₀(ξ)`, `Y₀(η)`, `φ₁(ξ)` and `ρ₁(η)` next to each other in `dir`.
pub fn write_correction_files(s: &SolveResult, dir: &Path) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let (xi, eta) = build_profiles(&s.params)?;
    let tag = format!("{}_R{}", s.state, s.r);
    let params = &s.params;
    let header = |what: &str, x: &str| {
        format!(
            "h2ion {VERSION}\n{what} for {} at R = {} Bohr, p = {}, A1 = {}\ncolumns: {x} value",
            s.state,
            sig12(s.r),
            sig12(s.p_opt),
            sig12(xi.a1)
        )
    };
    let x0: Vec<(f64, f64)> = xi.grid.iter().map(|&x| Ok((x, params.eval_x0(x)?))).collect::<Result<_>>()?;
    let y0: Vec<(f64, f64)> = (0..=400)
        .map(|k| {
            let e = -1.0 + k as f64 / 200.0;
            Ok((e, params.eval_y0(e)?))
        })
        .collect::<Result<_>>()?;
    let outputs = [
        (format!("x0_{tag}.dat"), header("X0(xi)", "xi"), x0),
        (format!("y0_{tag}.dat"), header("Y0(eta)", "eta"), y0),
        (format!("phi1_{tag}.dat"), header("phi1(xi), phi1(1) = 0", "xi"), xi.plot_pairs(true)),
        (format!("rho1_{tag}.dat"), header("rho1(eta), rho1(0) = 0", "eta"), eta.plot_pairs(true)),
    ];
    let mut written = Vec::new();
    for (name, head, pairs) in outputs {
        let path = dir.join(name);
        let file = io::BufWriter::new(File::create(&path)?);
        write_plot_data(file, &head, &pairs)?;
        written.push(path);
    }
    Ok(written)
}

/// Parse `args`, run the command and return the process exit code:
/// 0 on success, 1 when some record or check failed, 2 on usage errors.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(&cli) {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(e) => {
            eprintln!("h2ion: {e}");
            match e {
                Error::Usage(_) | Error::UnsupportedState(_) | Error::Domain(_) => 2,
                _ => 1,
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(sig12(-1.20526842899), "-1.20526842899");
        assert_eq!(sig12(2.0), "2.00000000000");
        assert_eq!(sig12(8.191e-6), "8.19100000000e-6");
        assert_eq!(sig12(0.639527), "0.639527000000");
    }

    #[test]
    fn grid_forms() {
        let g = GridArgs { r: None, grid: None, min: Some(1.0), max: Some(2.0), count: Some(3) };
        assert_eq!(g.values().unwrap(), vec![1.0, 1.5, 2.0]);
        let g = GridArgs { r: None, grid: Some(vec![2.0, -1.0]), min: None, max: None, count: None };
        assert!(matches!(g.values(), Err(Error::Usage(_))));
    }

    #[test]
    fn unknown_state_is_a_usage_error() {
        assert_eq!(run(["h2ion", "solve", "--state", "3dsg", "--R", "2"]), 2);
        assert_eq!(run(["h2ion", "solve", "--state", "1ssg", "--R", "-1"]), 2);
    }
}
