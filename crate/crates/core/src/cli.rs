//! Command-line front end.
//!
//! Exit codes: 0 success, 1 I/O failure, 2 invalid arguments or parameters,
//! 3 a check exceeded its tolerance. Results go to stdout (or `--output`),
//! diagnostics to stderr.

use std::collections::HashMap;
use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::checks::{run_checks, CheckOutcome, VerifySettings};
use crate::error::{Error, Result};
use crate::fourier::SeriesSpec;
use crate::green::{kl_weights, mass_spectrum, RestFrameGreen};
use crate::io::{Cell, Table};
use crate::modes::{eigenvalue_check_on, mode_table, LinearizedOperator};
use crate::solutions::{Branch, Family, FieldConfig, Solution, WaveFrame};

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_TOLERANCE: i32 = 3;

pub const TOL_ENV: &str = "ELLIPTICA_TOL";
pub const DEFAULT_N: usize = 16;
pub const DEFAULT_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Plot,
}

#[derive(Debug, Parser)]
#[command(name = "elliptica", version, about = "Exact elliptic waves of quartic scalar fields")]
struct Cli {
    #[command(flatten)]
    flags: Flags,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Default, Clone, Args)]
struct Flags {
    /// massive, massless or ssb
    #[arg(long, global = true)]
    family: Option<String>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    mu0: Option<f64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    mu: Option<f64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    lambda: Option<f64>,
    /// Number of terms, poles or rows
    #[arg(long, global = true)]
    n: Option<usize>,
    #[arg(long, global = true)]
    tol: Option<f64>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    #[arg(long, global = true, conflicts_with_all = ["csv", "plot"])]
    json: bool,
    #[arg(long, global = true, conflicts_with = "plot")]
    csv: bool,
    #[arg(long, global = true)]
    plot: bool,
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    /// Flat key=value file; explicit flags take precedence
    #[arg(long, global = true)]
    config: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Sample the field along the phase u = p·x + θ
    Eval {
        /// start:end:points
        #[arg(long, default_value = "0:10:100")]
        grid: String,
        #[arg(long)]
        minus: bool,
        /// Also report the field-equation residual and fail above --tol
        #[arg(long)]
        self_check: bool,
    },
    /// Pole masses of the propagator
    Spectrum,
    /// Pole masses with their spectral weights
    Kl,
    /// Rest-frame Green function
    Green {
        #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
        index: i64,
        /// Sample span in periods
        #[arg(long, default_value_t = 2.0)]
        periods: f64,
        #[arg(long, default_value_t = 400)]
        points: usize,
    },
    /// Fluctuation modes and their eigenvalue checks
    Modes {
        #[arg(long, value_enum, default_value_t = ModeChoice::Zero)]
        mode: ModeChoice,
        #[arg(long, default_value_t = crate::modes::DEFAULT_POINTS_PER_PERIOD)]
        points: usize,
    },
    /// Fourier coefficients of the wave profile
    Series,
    /// Run the invariant suite
    Verify {
        /// Run only checks whose name starts with this prefix
        #[arg(long)]
        only: Option<String>,
        /// Relative error injected into p² (negative control)
        #[arg(long, allow_negative_numbers = true)]
        perturb_dispersion: Option<f64>,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = 0x5eed)]
        seed: u64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeChoice {
    Zero,
    Excited,
}

/// Resolved settings of one invocation.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub family: Option<Family>,
    pub mu0: Option<f64>,
    pub mu: f64,
    pub lambda: f64,
    pub n: usize,
    pub tol: f64,
    pub format: Format,
    pub output: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            family: None,
            mu0: None,
            mu: 1.0,
            lambda: 2.0,
            n: DEFAULT_N,
            tol: DEFAULT_TOL,
            format: Format::Csv,
            output: None,
        }
    }
}

impl RunConfig {
    /// The family's field configuration. `mu0` defaults to 0 for the
    /// massless family and to 1 otherwise.
    pub fn field(&self) -> Result<FieldConfig> {
        let family = self.family.unwrap_or(Family::MasslessSn);
        let mu0 = self.mu0.unwrap_or(match family {
            Family::MasslessSn => 0.0,
            _ => 1.0,
        });
        let mu = if family == Family::SsbDn { 0.0 } else { self.mu };
        FieldConfig::new(family, mu0, mu, self.lambda)
    }

    fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::InvalidConfig("n must be at least 1".into()));
        }
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return Err(Error::InvalidConfig(format!("tol must be positive, got {}", self.tol)));
        }
        self.field().map(|_| ())
    }
}

fn parse_value<T: std::str::FromStr>(key: &str, v: &str) -> Result<T> {
    v.trim()
        .parse()
        .map_err(|_| Error::InvalidConfig(format!("bad value for {key}: {v:?}")))
}

/// Parses `key = value` lines; `#` starts a comment.
pub fn parse_config_file(text: &str) -> Result<HashMap<String, String>> {
    let mut out = HashMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| Error::InvalidConfig(format!("line {}: expected key=value", i + 1)))?;
        out.insert(k.trim().to_ascii_lowercase(), v.trim().to_string());
    }
    Ok(out)
}

fn resolve(flags: &Flags, env_tol: Option<&str>) -> Result<RunConfig> {
    let mut cfg = RunConfig::default();
    if let Some(v) = env_tol {
        cfg.tol = parse_value(TOL_ENV, v)?;
    }
    if let Some(path) = &flags.config {
        let text = fs::read_to_string(path)?;
        for (k, v) in parse_config_file(&text)? {
            match k.as_str() {
                "family" => cfg.family = Some(v.parse()?),
                "mu0" => cfg.mu0 = Some(parse_value(&k, &v)?),
                "mu" => cfg.mu = parse_value(&k, &v)?,
                "lambda" => cfg.lambda = parse_value(&k, &v)?,
                "n" => cfg.n = parse_value(&k, &v)?,
                "tol" => cfg.tol = parse_value(&k, &v)?,
                "format" => {
                    cfg.format = Format::from_str(&v, true)
                        .map_err(|_| Error::InvalidConfig(format!("bad format {v:?}")))?
                }
                "output" => cfg.output = Some(PathBuf::from(v)),
                other => return Err(Error::InvalidConfig(format!("unknown config key {other:?}"))),
            }
        }
    }
    if let Some(f) = &flags.family {
        cfg.family = Some(f.parse()?);
    }
    cfg.mu0 = flags.mu0.or(cfg.mu0);
    cfg.mu = flags.mu.unwrap_or(cfg.mu);
    cfg.lambda = flags.lambda.unwrap_or(cfg.lambda);
    cfg.n = flags.n.unwrap_or(cfg.n);
    cfg.tol = flags.tol.unwrap_or(cfg.tol);
    if let Some(f) = flags.format {
        cfg.format = f;
    }
    if flags.json {
        cfg.format = Format::Json;
    } else if flags.csv {
        cfg.format = Format::Csv;
    } else if flags.plot {
        cfg.format = Format::Plot;
    }
    if flags.output.is_some() {
        cfg.output = flags.output.clone();
    }
    Ok(cfg)
}

/// What a subcommand produced.
struct Report {
    results: Table,
    /// Columns used for plot output.
    plot: (usize, usize),
    checks: Vec<CheckOutcome>,
}

struct Envelope<'a> {
    family: String,
    config: &'a RunConfig,
    report: &'a Report,
}

impl Serialize for Envelope<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        struct Params<'a>(&'a RunConfig);
        impl Serialize for Params<'_> {
            fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
                let c = self.0;
                let mut map = s.serialize_map(None)?;
                match c.family.map(|_| c.field()) {
                    Some(Ok(f)) => {
                        map.serialize_entry("mu0", &Cell::Real(f.mu0()))?;
                        map.serialize_entry("mu", &Cell::Real(f.mu()))?;
                    }
                    _ => {
                        map.serialize_entry("mu0", &Cell::Real(c.mu0.unwrap_or(1.0)))?;
                        map.serialize_entry("mu", &Cell::Real(c.mu))?;
                    }
                }
                map.serialize_entry("lambda", &Cell::Real(c.lambda))?;
                map.serialize_entry("n", &c.n)?;
                map.serialize_entry("tol", &Cell::Real(c.tol))?;
                map.end()
            }
        }
        let mut map = s.serialize_map(Some(4))?;
        map.serialize_entry("family", &self.family)?;
        map.serialize_entry("params", &Params(self.config))?;
        map.serialize_entry("results", &self.report.results)?;
        map.serialize_entry("checks", &self.report.checks)?;
        map.end()
    }
}

fn parse_grid(spec: &str) -> Result<(f64, f64, usize)> {
    let parts: Vec<&str> = spec.split(':').collect();
    if parts.len() != 3 {
        return Err(Error::InvalidConfig(format!("grid must be start:end:points, got {spec:?}")));
    }
    let a: f64 = parse_value("grid start", parts[0])?;
    let b: f64 = parse_value("grid end", parts[1])?;
    let n: usize = parse_value("grid points", parts[2])?;
    if n == 0 || !a.is_finite() || !b.is_finite() {
        return Err(Error::InvalidConfig(format!("empty or non-finite grid {spec:?}")));
    }
    Ok((a, b, n))
}

fn grid_points(a: f64, b: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![a];
    }
    (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect()
}

fn cmd_eval(cfg: &RunConfig, grid: &str, minus: bool, self_check: bool) -> Result<Report> {
    let field = cfg.field()?;
    let (a, b, n) = parse_grid(grid)?;
    let branch = if minus { Branch::Minus } else { Branch::Plus };
    let solution = Solution::new(field, WaveFrame::rest(&field, 0.0), branch)?;
    let p0 = solution.frame().p[0];
    let columns: &[&str] = if self_check { &["u", "phi", "residual"] } else { &["u", "phi"] };
    let mut table = Table::new(columns);
    let mut worst = 0.0f64;
    for u in grid_points(a, b, n) {
        let mut row = vec![Cell::Real(u), Cell::Real(solution.profile(u))];
        if self_check {
            let r = if p0 > 0.0 {
                solution.eom_residual([u / p0, 0.0, 0.0, 0.0], 1e-3)?.relative()
            } else {
                0.0
            };
            worst = worst.max(r);
            row.push(Cell::Real(r));
        }
        table.push(row);
    }
    let checks = if self_check {
        vec![check("eom_residual", worst, cfg.tol)]
    } else {
        Vec::new()
    };
    Ok(Report { results: table, plot: (0, 1), checks })
}

fn check(name: &str, value: f64, tol: f64) -> CheckOutcome {
    CheckOutcome {
        name: name.into(),
        pass: value.is_finite() && value <= tol,
        value,
        tol,
    }
}

fn cmd_spectrum(cfg: &RunConfig) -> Result<Report> {
    let field = cfg.field()?;
    let mut table = Table::new(&["n", "mass"]);
    for (i, m) in mass_spectrum(&field, cfg.n).into_iter().enumerate() {
        table.push(vec![Cell::from(i), Cell::Real(m)]);
    }
    Ok(Report { results: table, plot: (0, 1), checks: Vec::new() })
}

fn cmd_kl(cfg: &RunConfig) -> Result<Report> {
    let field = cfg.field()?;
    let poles = kl_weights(&field, cfg.n)?;
    Ok(Report { results: poles.table(), plot: (1, 2), checks: Vec::new() })
}

fn cmd_green(cfg: &RunConfig, index: i64, periods: f64, points: usize) -> Result<Report> {
    if !(periods > 0.0 && periods.is_finite()) || points < 2 {
        return Err(Error::InvalidConfig("need a positive span and at least two points".into()));
    }
    let g = RestFrameGreen::new(cfg.field()?, index)?;
    let end = periods * g.period();
    let mut table = Table::new(&["t", "green"]);
    for t in grid_points(0.0, end, points) {
        table.push(vec![Cell::Real(t), Cell::Real(g.value(t))]);
    }
    Ok(Report { results: table, plot: (0, 1), checks: Vec::new() })
}

fn cmd_modes(cfg: &RunConfig, choice: ModeChoice, points: usize) -> Result<Report> {
    let field = cfg.field()?;
    let solution = Solution::new(field, WaveFrame::rest(&field, 0.0), Branch::Plus)?;
    let op = LinearizedOperator::new(solution)?;
    let modes = op.claimed_modes();
    let mode = match choice {
        ModeChoice::Zero => modes[0],
        ModeChoice::Excited => modes[1],
    };
    let grid = op.grid(points);
    let table = mode_table(&op, &mode, &grid)?;
    let p2 = op.p_squared();
    let mut checks = Vec::new();
    for m in modes {
        let c = eigenvalue_check_on(&op, &m, &grid)?;
        checks.push(check(&format!("eigenvalue {}", m.product.name()), c.error() / p2, cfg.tol));
    }
    Ok(Report { results: table, plot: (0, 1), checks })
}

fn cmd_series(cfg: &RunConfig) -> Result<Report> {
    let field = cfg.field()?;
    let spec = SeriesSpec::for_family(&field, cfg.n)?;
    let frequency = match field.kind() {
        Family::SsbDn => field.mu0() / 3f64.sqrt(),
        _ => field.effective_mass(),
    };
    let e = field.modulus();
    let shape = |u: f64| {
        let j = e.jacobi(u);
        field.amplitude() * if field.kind() == Family::SsbDn { j.dn } else { j.sn }
    };
    let samples = 512;
    let worst = (0..samples)
        .map(|i| e.period() * i as f64 / samples as f64)
        .map(|u| (spec.eval(u) - shape(u)).abs())
        .fold(0.0, f64::max);
    Ok(Report {
        results: spec.table(frequency),
        plot: (0, 1),
        checks: vec![check("series_vs_direct", worst, cfg.tol)],
    })
}

fn cmd_verify(
    cfg: &RunConfig,
    only: Option<&str>,
    perturb: Option<f64>,
    samples: usize,
    seed: u64,
) -> Result<Report> {
    let settings = VerifySettings {
        mu0: cfg.mu0.unwrap_or(1.0),
        mu: cfg.mu,
        lambda: cfg.lambda,
        family: cfg.family,
        samples,
        seed,
        dispersion_error: perturb.unwrap_or(0.0),
        ..VerifySettings::default()
    };
    for f in Family::ALL {
        if settings.family.is_none_or(|g| g == f) {
            settings.config(f)?;
        }
    }
    let checks = run_checks(&settings, only);
    if checks.is_empty() {
        return Err(Error::InvalidConfig(format!("no check matches {:?}", only.unwrap_or(""))));
    }
    let mut table = Table::new(&["pass", "value", "tol"]);
    for c in &checks {
        table.push(vec![Cell::Int(c.pass as i64), Cell::Real(c.value), Cell::Real(c.tol)]);
    }
    Ok(Report { results: table, plot: (0, 1), checks })
}

fn render(cfg: &RunConfig, family: String, report: &Report, verify: bool) -> Result<Vec<u8>> {
    let mut out = Vec::new();
    match cfg.format {
        Format::Json => {
            let env = Envelope { family, config: cfg, report };
            serde_json::to_writer_pretty(&mut out, &env)?;
            out.push(b'\n');
        }
        Format::Csv if verify => {
            let mut w = csv::Writer::from_writer(&mut out);
            w.write_record(["name", "pass", "value", "tol"])?;
            for c in &report.checks {
                w.write_record([
                    c.name.clone(),
                    c.pass.to_string(),
                    crate::io::fmt17(c.value),
                    crate::io::fmt17(c.tol),
                ])?;
            }
            w.flush()?;
        }
        Format::Csv => report.results.write_csv(&mut out)?,
        Format::Plot if verify => {
            for c in &report.checks {
                writeln!(out, "{} {}", c.name, crate::io::fmt17(c.value))?;
            }
        }
        Format::Plot => report.results.write_plot(&mut out, report.plot.0, report.plot.1)?,
    }
    Ok(out)
}

fn exit_code_for(err: &Error) -> i32 {
    match err {
        Error::Io(_) => EXIT_IO,
        _ => EXIT_INVALID,
    }
}

fn execute(cli: Cli, env_tol: Option<&str>, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32> {
    let mut cfg = resolve(&cli.flags, env_tol)?;
    cfg.validate()?;
    let verify = matches!(cli.command, Command::Verify { .. });
    if !verify && cfg.family.is_none() {
        cfg.family = Some(cfg.field()?.kind());
    }
    let report = match &cli.command {
        Command::Eval { grid, minus, self_check } => cmd_eval(&cfg, grid, *minus, *self_check)?,
        Command::Spectrum => cmd_spectrum(&cfg)?,
        Command::Kl => cmd_kl(&cfg)?,
        Command::Green { index, periods, points } => cmd_green(&cfg, *index, *periods, *points)?,
        Command::Modes { mode, points } => cmd_modes(&cfg, *mode, *points)?,
        Command::Series => cmd_series(&cfg)?,
        Command::Verify { only, perturb_dispersion, samples, seed } => {
            cmd_verify(&cfg, only.as_deref(), *perturb_dispersion, *samples, *seed)?
        }
    };
    let family = match (verify, cfg.family) {
        (true, None) => "all".to_string(),
        _ => cfg.field()?.kind().to_string(),
    };
    let bytes = render(&cfg, family, &report, verify)?;
    match &cfg.output {
        Some(path) => write_file(path, &bytes)?,
        None => stdout.write_all(&bytes)?,
    }
    let failed: Vec<&CheckOutcome> = report.checks.iter().filter(|c| !c.pass).collect();
    for c in &failed {
        writeln!(stderr, "check {} failed: {:e} > {:e}", c.name, c.value, c.tol)?;
    }
    Ok(if failed.is_empty() { EXIT_OK } else { EXIT_TOLERANCE })
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<()> {
    Ok(fs::write(path, bytes)?)
}

/// Runs one invocation; `args` includes the program name.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = stderr.write_all(text.as_bytes());
                EXIT_INVALID
            } else {
                let _ = stdout.write_all(text.as_bytes());
                EXIT_OK
            };
        }
    };
    let env_tol = std::env::var(TOL_ENV).ok();
    match execute(cli, env_tol.as_deref(), stdout, stderr) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            exit_code_for(&e)
        }
    }
}
