//! Command-line front end. Every command writes a versioned CSV table to
//! `--out` or stdout.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::channel::{channel_at, cp_check, time_local_rates, NoiseParams, TimeLocalRates};
use crate::error::Error;
use crate::metrology::{fisher_report, optimal_setting};
use crate::numeric::{linear_grid, log_grid};
use crate::optimize::{
    efficiency_point, optimal_time_with, scaling_fit, scan_lambda, scan_size, FisherMode, Objective, SizeRow,
    TimeSearch,
};
use crate::oracle::verify::{verify, VerifyConfig};
use crate::blockstate::MeasurementSetting;

pub const SCHEMA_VERSION: u32 = 1;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 1;
pub const EXIT_IO: i32 = 2;
pub const EXIT_VERIFY: i32 = 3;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("I/O error on {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("verification failed: {0}")]
    Verification(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => EXIT_CONFIG,
            CliError::Io { .. } => EXIT_IO,
            CliError::Verification(_) => EXIT_VERIFY,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Config(e.to_string())
    }
}

#[derive(Debug, Parser)]
#[command(name = "enfreq", version, about = "Energy-efficient frequency estimation with GHZ-diagonal probes")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub flags: Flags,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Channel parameters, time-local rates and CP margin over a time grid.
    Channel,
    /// Classical and quantum Fisher information against the readout angle ζ2.
    Fisher,
    /// Optimal times and efficiencies over a range of probe sizes.
    ScanSize,
    /// Energy-optimal time and efficiency over a range of memory rates λ.
    ScanLambda,
    /// Optimal interrogation time for one probe size.
    OptimalTime,
    /// Randomised comparison of the block formulas with a dense simulation.
    Verify,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Channel => "channel",
            Command::Fisher => "fisher",
            Command::ScanSize => "scan-size",
            Command::ScanLambda => "scan-lambda",
            Command::OptimalTime => "optimal-time",
            Command::Verify => "verify",
        }
    }
}

fn parse_serde<T: serde::de::DeserializeOwned>(s: &str) -> Result<T, String> {
    serde_json::from_value(serde_json::Value::String(s.to_owned())).map_err(|e| e.to_string())
}

/// Flags shared by all commands; each overrides the config file.
#[derive(Debug, Default, Clone, Args)]
pub struct Flags {
    /// Qubit frequency ω.
    #[arg(long, global = true)]
    pub omega: Option<f64>,
    /// Bath temperature T.
    #[arg(long, global = true)]
    pub temp: Option<f64>,
    /// Coupling rate γ0.
    #[arg(long, global = true)]
    pub gamma0: Option<f64>,
    /// Memory-kernel rate λ.
    #[arg(long, global = true)]
    pub lambda: Option<f64>,
    /// Probe size for single-size commands.
    #[arg(long, global = true)]
    pub n: Option<usize>,
    /// First probe size of a scan.
    #[arg(long, global = true)]
    pub n_min: Option<usize>,
    /// Last probe size of a scan.
    #[arg(long, global = true)]
    pub n_max: Option<usize>,
    /// Probe-size stride.
    #[arg(long, global = true)]
    pub n_step: Option<usize>,
    /// Smallest size entering the scan-size fits.
    #[arg(long, global = true)]
    pub fit_n_min: Option<usize>,
    /// Interrogation time.
    #[arg(long, global = true)]
    pub t: Option<f64>,
    /// End of the time grid or of the optimizer bracket.
    #[arg(long, global = true)]
    pub t_max: Option<f64>,
    /// Number of time samples.
    #[arg(long, global = true)]
    pub t_points: Option<usize>,
    /// Number of readout angles in [-π, π].
    #[arg(long, global = true)]
    pub zeta2_points: Option<usize>,
    /// small-r or exact.
    #[arg(long, global = true, value_parser = parse_serde::<FisherMode>)]
    pub fisher_mode: Option<FisherMode>,
    /// energy or time.
    #[arg(long, global = true, value_parser = parse_serde::<Objective>)]
    pub objective: Option<Objective>,
    /// Smallest λ of the scan.
    #[arg(long, global = true)]
    pub lambda_min: Option<f64>,
    /// Largest λ of the scan.
    #[arg(long, global = true)]
    pub lambda_max: Option<f64>,
    /// Number of log-spaced λ values.
    #[arg(long, global = true)]
    pub lambda_points: Option<usize>,
    /// RNG seed for verify.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Random draws for verify.
    #[arg(long, global = true)]
    pub draws: Option<usize>,
    /// Fixed energy cost added to every round.
    #[arg(long, global = true)]
    pub surcharge: Option<f64>,
    /// Write CSV here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// JSON file with any of the flag values.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Worker threads for sweeps (default: all cores).
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    #[arg(long, global = true, hide = true)]
    pub inject_sign_flip: bool,
}

/// Fully resolved run configuration. Unset size and time fields fall back to
/// per-command defaults.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub omega: f64,
    pub temp: f64,
    pub gamma0: f64,
    pub lambda: f64,
    pub n: Option<usize>,
    pub n_min: Option<usize>,
    pub n_max: Option<usize>,
    pub n_step: usize,
    /// Smallest size entering the scan-size power-law fits.
    pub fit_n_min: usize,
    pub t: Option<f64>,
    pub t_max: Option<f64>,
    pub t_points: usize,
    pub zeta2_points: usize,
    pub fisher_mode: FisherMode,
    pub objective: Objective,
    pub lambda_min: f64,
    pub lambda_max: f64,
    pub lambda_points: usize,
    pub seed: u64,
    pub draws: usize,
    pub surcharge: f64,
    pub grid_points: usize,
    pub rel_tol: f64,
}

impl Default for RunConfig {
    fn default() -> Self {
        let search = TimeSearch::default();
        Self {
            omega: 1.0,
            temp: 200.0,
            gamma0: 1e-4,
            lambda: 5.0,
            n: None,
            n_min: None,
            n_max: None,
            n_step: 1,
            fit_n_min: 10,
            t: None,
            t_max: None,
            t_points: 100,
            zeta2_points: 721,
            fisher_mode: FisherMode::SmallR,
            objective: Objective::Energy,
            lambda_min: 1.0,
            lambda_max: 100.0,
            lambda_points: 30,
            seed: VerifyConfig::default().seed,
            draws: VerifyConfig::default().draws,
            surcharge: 0.0,
            grid_points: search.grid_points,
            rel_tol: search.rel_tol,
        }
    }
}

impl RunConfig {
    /// Defaults, then the JSON config file, then explicit flags.
    pub fn resolve(flags: &Flags) -> Result<Self, CliError> {
        let mut cfg = match &flags.config {
            Some(path) => Self::from_file(path)?,
            None => Self::default(),
        };
        macro_rules! take {
            ($($field:ident),*) => { $( if let Some(v) = flags.$field { cfg.$field = v; } )* };
        }
        take!(omega, temp, gamma0, lambda, n_step, fit_n_min, t_points, zeta2_points, fisher_mode, objective);
        take!(lambda_min, lambda_max, lambda_points, seed, draws, surcharge);
        macro_rules! take_opt {
            ($($field:ident),*) => { $( if flags.$field.is_some() { cfg.$field = flags.$field; } )* };
        }
        take_opt!(n, n_min, n_max, t, t_max);
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_file(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.display().to_string(), source })?;
        serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let bad = |msg: String| Err(CliError::Config(msg));
        for (name, v) in [("omega", self.omega), ("temp", self.temp), ("lambda", self.lambda)] {
            if !(v > 0.0) {
                return bad(format!("{name} must be positive, got {v}"));
            }
        }
        if !(self.gamma0 >= 0.0 && self.gamma0.is_finite()) {
            return bad(format!("gamma0 must be finite and nonnegative, got {}", self.gamma0));
        }
        if self.n == Some(0) || self.n_min == Some(0) {
            return bad("probe sizes start at 1".into());
        }
        if let (Some(lo), Some(hi)) = (self.n_min, self.n_max) {
            if lo > hi {
                return bad(format!("empty size range [{lo}, {hi}]"));
            }
        }
        if self.n_step == 0 || self.t_points == 0 || self.zeta2_points == 0 || self.lambda_points == 0 {
            return bad("grid sizes and steps must be at least 1".into());
        }
        if !(self.lambda_min > 0.0 && self.lambda_min <= self.lambda_max) {
            return bad(format!("invalid lambda range [{}, {}]", self.lambda_min, self.lambda_max));
        }
        for (name, v) in [("t", self.t), ("t_max", self.t_max)] {
            if let Some(v) = v {
                if !(v > 0.0 && v.is_finite()) {
                    return bad(format!("{name} must be positive and finite, got {v}"));
                }
            }
        }
        if !(self.surcharge >= 0.0 && self.surcharge.is_finite()) {
            return bad(format!("surcharge must be finite and nonnegative, got {}", self.surcharge));
        }
        Ok(())
    }

    pub fn params(&self) -> Result<NoiseParams, CliError> {
        Ok(NoiseParams::new(self.omega, self.temp, self.gamma0, self.lambda)?)
    }

    pub fn search(&self) -> TimeSearch {
        TimeSearch {
            t_max: self.t_max,
            grid_points: self.grid_points,
            rel_tol: self.rel_tol,
            surcharge: self.surcharge,
            ..TimeSearch::default()
        }
    }

    /// Sizes `n_min, n_min + n_step, …, n_max`.
    pub fn sizes(&self, default_min: usize, default_max: usize) -> Vec<usize> {
        let lo = self.n_min.unwrap_or(default_min);
        let hi = self.n_max.unwrap_or(default_max.max(lo));
        (lo..=hi).step_by(self.n_step).collect()
    }
}

/// Shortest round-trip decimal; exponent form outside `[1e-4, 1e15)`, and
/// no negative zero.
pub fn fmt_num(x: f64) -> String {
    if x == 0.0 {
        "0".to_owned()
    } else if !x.is_finite() || (1e-4..1e15).contains(&x.abs()) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
    pub footer: Vec<String>,
}

impl Table {
    fn new(columns: &[&'static str]) -> Self {
        Self { columns: columns.to_vec(), rows: Vec::new(), footer: Vec::new() }
    }

    fn push_nums(&mut self, row: &[f64]) {
        self.rows.push(row.iter().copied().map(fmt_num).collect());
    }

    pub fn to_csv(&self, command: Command, config: &RunConfig) -> String {
        let mut out = String::new();
        let json = serde_json::to_string(config).expect("config serializes");
        let _ = writeln!(out, "# schema={SCHEMA_VERSION}");
        let _ = writeln!(out, "# command={}", command.name());
        let _ = writeln!(out, "# config={json}");
        let _ = writeln!(out, "{}", self.columns.join(","));
        for row in &self.rows {
            let _ = writeln!(out, "{}", row.join(","));
        }
        for line in &self.footer {
            let _ = writeln!(out, "# {line}");
        }
        out
    }
}

pub fn cmd_channel(cfg: &RunConfig) -> Result<Table, CliError> {
    let params = cfg.params()?;
    let t_max = cfg.t_max.unwrap_or(10.0 / params.lambda());
    let times = linear_grid(0.0, t_max, cfg.t_points);
    let mut table = Table::new(&["t", "eta_par", "eta_perp", "kappa", "gamma_plus", "gamma_minus", "gamma_z", "cp_margin"]);
    let rows: Vec<Result<[f64; 8], Error>> = times
        .par_iter()
        .map(|&t| {
            let s = channel_at(&params, t)?;
            let rates = match time_local_rates(&params, t) {
                Ok(r) => r,
                Err(Error::SingularRate { .. }) => {
                    TimeLocalRates { gamma_plus: f64::NAN, gamma_minus: f64::NAN, gamma_z: f64::NAN }
                }
                Err(e) => return Err(e),
            };
            Ok([t, s.eta_par, s.eta_perp, s.kappa, rates.gamma_plus, rates.gamma_minus, rates.gamma_z, cp_check(&s).margin])
        })
        .collect();
    for row in rows {
        table.push_nums(&row?);
    }
    Ok(table)
}

pub fn cmd_fisher(cfg: &RunConfig) -> Result<Table, CliError> {
    let params = cfg.params()?;
    let n = cfg.n.unwrap_or(9);
    let t = cfg.t.unwrap_or(1.0);
    let zeta1 = optimal_setting(n, params.omega(), t).zeta1;
    let pi = std::f64::consts::PI;
    let grid = linear_grid(-pi, pi, cfg.zeta2_points);
    let reports: Result<Vec<_>, Error> = grid
        .par_iter()
        .map(|&z2| fisher_report(&params, n, t, &MeasurementSetting::new(zeta1, z2, params.omega())).map(|r| (z2, r)))
        .collect();
    let mut table = Table::new(&["zeta2", "cfi_exact", "cfi_small_R", "qfi_exact", "qfi_small_R"]);
    for (z2, r) in reports? {
        table.push_nums(&[z2, r.cfi_exact, r.cfi_small_r, r.qfi_exact, r.qfi_small_r]);
    }
    Ok(table)
}

fn fit_line(quantity: &str, points: &[(f64, f64)]) -> Result<String, CliError> {
    let fit = scaling_fit(points)?;
    Ok(format!(
        "fit quantity={quantity} exponent={} intercept={} r_squared={} n_min={} n_max={}",
        fmt_num(fit.exponent),
        fmt_num(fit.intercept),
        fmt_num(fit.r_squared),
        fmt_num(fit.n_range.0),
        fmt_num(fit.n_range.1),
    ))
}

/// Power-law fits of a size scan over the rows with `n ≥ fit_n_min`.
pub fn size_fits(rows: &[SizeRow], omega: f64, fit_n_min: usize) -> Result<Vec<String>, CliError> {
    let used: Vec<&SizeRow> = rows.iter().filter(|r| r.n >= fit_n_min).collect();
    if used.len() < 2 {
        return Ok(Vec::new());
    }
    let series = |f: &dyn Fn(&SizeRow) -> f64| -> Vec<(f64, f64)> { used.iter().map(|r| (r.n as f64, f(r))).collect() };
    Ok(vec![
        fit_line("eta_time", &series(&|r| r.eta_time))?,
        fit_line("eta_energy", &series(&|r| r.eta_energy))?,
        fit_line("omega_t_star", &series(&|r| omega * r.t_star_energy))?,
    ])
}

pub fn cmd_scan_size(cfg: &RunConfig) -> Result<Table, CliError> {
    let params = cfg.params()?;
    let sizes = cfg.sizes(2, 200);
    let rows = scan_size(&params, &sizes, cfg.fisher_mode, &cfg.search())?;
    let mut table = Table::new(&[
        "n", "t_star_time", "eta_time", "t_star_energy", "eta_energy", "e_init", "e_meas", "fisher",
    ]);
    for r in &rows {
        table.push_nums(&[r.n as f64, r.t_star_time, r.eta_time, r.t_star_energy, r.eta_energy, r.e_init, r.e_meas, r.fisher]);
    }
    table.footer = size_fits(&rows, params.omega(), cfg.fit_n_min)?;
    Ok(table)
}

pub fn cmd_scan_lambda(cfg: &RunConfig) -> Result<Table, CliError> {
    let params = cfg.params()?;
    let n = cfg.n.unwrap_or(2);
    let lambdas = log_grid(cfg.lambda_min, cfg.lambda_max, cfg.lambda_points);
    let rows = scan_lambda(&params, &lambdas, n, cfg.fisher_mode, &cfg.search())?;
    let mut table = Table::new(&["lambda", "t_star", "eta_energy"]);
    for r in &rows {
        table.push_nums(&[r.lambda, r.t_star, r.eta_energy]);
    }
    Ok(table)
}

pub fn cmd_optimal_time(cfg: &RunConfig) -> Result<Table, CliError> {
    let params = cfg.params()?;
    let search = cfg.search();
    let sizes = match cfg.n {
        Some(n) => vec![n],
        None if cfg.n_min.is_some() || cfg.n_max.is_some() => cfg.sizes(1, 9),
        None => vec![9],
    };
    let rows: Result<Vec<_>, Error> = sizes
        .par_iter()
        .map(|&n| {
            let opt = optimal_time_with(&params, n, cfg.objective, cfg.fisher_mode, &search)?;
            let point = efficiency_point(&params, n, opt.t_star, cfg.fisher_mode, search.surcharge)?;
            Ok((n, opt, point))
        })
        .collect();
    let mut table = Table::new(&[
        "n", "t_star", "value", "eta_time", "eta_energy", "fisher", "e_init", "e_meas", "bracket_lo", "bracket_hi", "converged",
    ]);
    for (n, opt, p) in rows? {
        let mut row: Vec<String> = [
            n as f64, opt.t_star, opt.value, p.eta_time, p.eta_energy, p.fisher, p.ledger.e_init, p.ledger.e_meas,
            opt.bracket.0, opt.bracket.1,
        ]
        .into_iter()
        .map(fmt_num)
        .collect();
        row.push(opt.converged.to_string());
        table.rows.push(row);
    }
    Ok(table)
}

pub fn cmd_verify(cfg: &RunConfig, inject_sign_flip: bool) -> Result<(Table, bool), CliError> {
    let config = VerifyConfig {
        seed: cfg.seed,
        draws: cfg.draws,
        n_min: cfg.n.or(cfg.n_min).unwrap_or(2),
        n_max: cfg.n.or(cfg.n_max).unwrap_or(6),
        inject_sign_flip,
    };
    let report = verify(&config)?;
    let mut table = Table::new(&["check", "max_deviation", "tolerance", "passed"]);
    for c in &report.checks {
        table.rows.push(vec![c.kind.name().to_owned(), fmt_num(c.max_deviation), fmt_num(c.tolerance), c.passed.to_string()]);
    }
    table.footer.push(format!("draws={} seed={}", report.draws, config.seed));
    Ok((table, report.passed()))
}

fn write_output(path: Option<&Path>, text: &str) -> Result<(), CliError> {
    use std::io::Write;
    match path {
        Some(p) => std::fs::write(p, text).map_err(|source| CliError::Io { path: p.display().to_string(), source }),
        None => std::io::stdout()
            .lock()
            .write_all(text.as_bytes())
            .map_err(|source| CliError::Io { path: "<stdout>".into(), source }),
    }
}

/// Run one parsed invocation.
pub fn execute(cli: &Cli) -> Result<(), CliError> {
    let cfg = RunConfig::resolve(&cli.flags)?;
    let (table, verified) = match cli.command {
        Command::Channel => (cmd_channel(&cfg)?, true),
        Command::Fisher => (cmd_fisher(&cfg)?, true),
        Command::ScanSize => (cmd_scan_size(&cfg)?, true),
        Command::ScanLambda => (cmd_scan_lambda(&cfg)?, true),
        Command::OptimalTime => (cmd_optimal_time(&cfg)?, true),
        Command::Verify => cmd_verify(&cfg, cli.flags.inject_sign_flip)?,
    };
    write_output(cli.flags.out.as_deref(), &table.to_csv(cli.command, &cfg))?;
    if verified {
        Ok(())
    } else {
        let failed: Vec<&str> = table.rows.iter().filter(|r| r[3] == "false").map(|r| r[0].as_str()).collect();
        Err(CliError::Verification(failed.join(", ")))
    }
}

/// Parse `args` (program name first) and run; returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
        }
    };
    let outcome = match cli.flags.jobs {
        Some(0) => Err(CliError::Config("--jobs must be at least 1".into())),
        Some(jobs) => match rayon::ThreadPoolBuilder::new().num_threads(jobs).build() {
            Ok(pool) => pool.install(|| execute(&cli)),
            Err(e) => Err(CliError::Config(e.to_string())),
        },
        None => execute(&cli),
    };
    match outcome {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("enfreq: {e}");
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(args: &[&str]) -> Cli {
        Cli::try_parse_from(std::iter::once("enfreq").chain(args.iter().copied())).unwrap()
    }

    #[test]
    fn number_format_round_trips() {
        for x in [0.0, 1.0, -2.5, 1e-10, 3.3e-5, 123456.789, 1e300, f64::MIN_POSITIVE, 0.1 + 0.2] {
            let s = fmt_num(x);
            assert_eq!(s.parse::<f64>().unwrap(), x, "{s}");
        }
        assert_eq!(fmt_num(1e-10), "1e-10");
        assert_eq!(fmt_num(0.5), "0.5");
        assert_eq!(fmt_num(f64::NAN), "NaN");
    }

    #[test]
    fn flags_override_defaults() {
        let cli = parse(&["fisher", "--n", "5", "--omega", "2", "--fisher-mode", "exact", "--objective", "time"]);
        assert_eq!(cli.command, Command::Fisher);
        let cfg = RunConfig::resolve(&cli.flags).unwrap();
        assert_eq!(cfg.n, Some(5));
        assert_eq!(cfg.omega, 2.0);
        assert_eq!(cfg.temp, 200.0);
        assert_eq!(cfg.fisher_mode, FisherMode::Exact);
        assert_eq!(cfg.objective, Objective::Time);
        assert!(Cli::try_parse_from(["enfreq", "fisher", "--fisher-mode", "fast"]).is_err());
    }

    #[test]
    fn config_file_sits_between_defaults_and_flags() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("cfg.json");
        std::fs::write(&path, r#"{"omega": 3.0, "temp": 50.0, "surcharge": 0.25}"#).unwrap();
        let p = path.to_str().unwrap();
        let cfg = RunConfig::resolve(&parse(&["channel", "--config", p, "--temp", "70"]).flags).unwrap();
        assert_eq!((cfg.omega, cfg.temp, cfg.gamma0, cfg.surcharge), (3.0, 70.0, 1e-4, 0.25));

        std::fs::write(&path, r#"{"omgea": 3.0}"#).unwrap();
        let err = RunConfig::resolve(&parse(&["channel", "--config", p]).flags).unwrap_err();
        assert_eq!(err.exit_code(), EXIT_CONFIG);
        let missing = dir.path().join("none.json");
        let err = RunConfig::resolve(&parse(&["channel", "--config", missing.to_str().unwrap()]).flags).unwrap_err();
        assert_eq!(err.exit_code(), EXIT_IO);
    }

    #[test]
    fn invalid_values_are_config_errors() {
        for args in [
            &["channel", "--omega=-1"][..],
            &["channel", "--temp", "0"],
            &["scan-size", "--n-min", "5", "--n-max", "4"],
            &["scan-lambda", "--lambda-min", "10", "--lambda-max", "1"],
            &["channel", "--t-points", "0"],
        ] {
            let err = RunConfig::resolve(&parse(args).flags).unwrap_err();
            assert_eq!(err.exit_code(), EXIT_CONFIG, "{args:?}");
        }
    }

    #[test]
    fn channel_table_starts_at_identity() {
        let table = cmd_channel(&RunConfig::default()).unwrap();
        assert_eq!(table.rows.len(), 100);
        assert_eq!(table.rows[0], ["0", "1", "1", "0", "0", "0", "0", "0"]);
        let csv = table.to_csv(Command::Channel, &RunConfig::default());
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("# schema=1"));
        assert_eq!(lines.next(), Some("# command=channel"));
        assert!(lines.next().unwrap().starts_with("# config={"));
        assert_eq!(lines.next(), Some("t,eta_par,eta_perp,kappa,gamma_plus,gamma_minus,gamma_z,cp_margin"));
    }

    #[test]
    fn sizes_follow_step() {
        let cfg = RunConfig { n_min: Some(10), n_max: Some(30), n_step: 7, ..RunConfig::default() };
        assert_eq!(cfg.sizes(2, 200), [10, 17, 24]);
        assert_eq!(RunConfig::default().sizes(2, 6), [2, 3, 4, 5, 6]);
    }
}
