//! Command-line front end.
//!
//! Input is a flat list of `key=value` settings, read from a config file
//! (`config=path`), from arguments (`key=value`, `--key=value`,
//! `--key value`), or both; later settings win. A leading bare word is taken
//! as the command. Lists are comma-separated.
//!
//! | key        | meaning                                                          |
//! |------------|------------------------------------------------------------------|
//! | command    | solve, temporal-study, spatial-study, caputo-check, bound-report |
//! | example    | ex1 (interval) or ex2 (unit square)                              |
//! | alpha      | fractional order(s) in (1, 2)                                    |
//! | N          | time step count(s)                                               |
//! | Ms         | spatial division count(s)                                        |
//! | r          | grading exponent, default (2 − β)/β                              |
//! | beta       | L1 order(s) in (0, 1) for caputo-check                           |
//! | sigma      | power of the caputo-check test function, default β               |
//! | quad       | quadrature points for loads                                      |
//! | error_quad | quadrature points for error norms, default by dimension          |
//! | tol        | relative residual for the linear solver                          |
//! | output     | CSV destination; CSV goes to stdout when absent                  |
//! | threads    | worker threads across independent runs (`FRACWAVE_THREADS`)     |
//! | timing     | true/false, whether to fill the `seconds` column                 |

mod format;

pub use format::{fixed6, sci, Table};

use std::fmt;
use std::io::Write;
use std::path::PathBuf;
use std::str::FromStr;

use crate::caputo_l1::truncation_study;
use crate::error::{Error, Result};
use crate::fem_space::{QuadratureRule, SolverOptions, DEFAULT_TOL};
use crate::graded_time::recommended_grading;
use crate::mms_harness::{
    bound_study, run_case, run_jobs, spatial_jobs, temporal_jobs, ConvergenceReport, Example, ManufacturedCase,
    StudyJob, StudyKind, StudyOptions,
};

/// Environment variable overriding `threads`.
pub const THREADS_ENV: &str = "FRACWAVE_THREADS";

const KEYS: &[&str] = &[
    "command",
    "example",
    "alpha",
    "N",
    "Ms",
    "r",
    "beta",
    "sigma",
    "quad",
    "error_quad",
    "tol",
    "output",
    "threads",
    "timing",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Solve,
    TemporalStudy,
    SpatialStudy,
    CaputoCheck,
    BoundReport,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Solve => "solve",
            Command::TemporalStudy => "temporal-study",
            Command::SpatialStudy => "spatial-study",
            Command::CaputoCheck => "caputo-check",
            Command::BoundReport => "bound-report",
        }
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Command {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        [
            Command::Solve,
            Command::TemporalStudy,
            Command::SpatialStudy,
            Command::CaputoCheck,
            Command::BoundReport,
        ]
        .into_iter()
        .find(|c| c.name() == s)
        .ok_or_else(|| config_err("command", format!("unknown command {s:?}")))
    }
}

fn config_err(key: &str, reason: impl Into<String>) -> Error {
    Error::Config {
        key: key.to_string(),
        reason: reason.into(),
    }
}

/// Validated settings for one invocation.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub example: Example,
    pub alpha: Vec<f64>,
    /// `N` values.
    pub steps: Vec<usize>,
    /// `Mₛ` values; empty means coupled to `N` (solve only).
    pub divisions: Vec<usize>,
    pub grading: Option<f64>,
    pub beta: Vec<f64>,
    pub sigma: Option<f64>,
    pub quad: usize,
    pub error_quad: Option<usize>,
    pub tol: f64,
    pub output: Option<PathBuf>,
    pub threads: usize,
    pub timing: bool,
}

impl RunConfig {
    pub fn study_options(&self) -> StudyOptions {
        StudyOptions {
            grading: self.grading,
            quadrature_points: self.quad,
            error_points: self.error_quad,
            solver: SolverOptions {
                tol: self.tol,
                ..SolverOptions::default()
            },
            threads: self.threads,
            ..StudyOptions::default()
        }
    }
}

/// Raw `key=value` settings in input order.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Settings {
    pairs: Vec<(String, String)>,
}

impl Settings {
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        if !KEYS.contains(&key) {
            return Err(config_err(key, "unknown key"));
        }
        self.pairs.retain(|(k, _)| k != key);
        self.pairs.push((key.to_string(), value.to_string()));
        Ok(())
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.pairs.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    /// Adds the settings in config-file text: whitespace-separated
    /// `key=value` tokens, `#` starting a comment.
    pub fn extend_from_text(&mut self, text: &str) -> Result<()> {
        for line in text.lines() {
            let line = line.split('#').next().unwrap_or("");
            for token in line.split_whitespace() {
                let token = token.trim_start_matches("--");
                let (k, v) = token
                    .split_once('=')
                    .ok_or_else(|| config_err(token, "expected key=value"))?;
                self.set(k, v)?;
            }
        }
        Ok(())
    }

    /// Adds command-line arguments; `config=path` splices in a file.
    pub fn extend_from_args<I, S>(&mut self, args: I) -> Result<()>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let args: Vec<String> = args.into_iter().map(|s| s.as_ref().to_string()).collect();
        let mut i = 0;
        while i < args.len() {
            let arg = &args[i];
            let (key, value) = if let Some(flag) = arg.strip_prefix("--") {
                match flag.split_once('=') {
                    Some((k, v)) => (k.to_string(), v.to_string()),
                    None => {
                        i += 1;
                        let v = args.get(i).ok_or_else(|| config_err(flag, "missing value"))?;
                        (flag.to_string(), v.clone())
                    }
                }
            } else if let Some((k, v)) = arg.split_once('=') {
                (k.to_string(), v.to_string())
            } else if i == 0 {
                ("command".to_string(), arg.clone())
            } else {
                return Err(config_err(arg, "expected key=value"));
            };
            if key == "config" {
                let text = std::fs::read_to_string(&value).map_err(|e| Error::Io {
                    path: value.clone(),
                    reason: e.to_string(),
                })?;
                self.extend_from_text(&text)?;
            } else {
                self.set(&key, &value)?;
            }
            i += 1;
        }
        Ok(())
    }

    /// Applies a `FRACWAVE_THREADS` value, if any.
    pub fn apply_threads_env(&mut self, value: Option<&str>) -> Result<()> {
        match value {
            Some(v) if !v.trim().is_empty() => self.set("threads", v.trim()),
            _ => Ok(()),
        }
    }
}

fn parse_one<T: FromStr>(key: &str, v: &str) -> Result<T> {
    v.trim()
        .parse()
        .map_err(|_| config_err(key, format!("cannot parse {v:?}")))
}

fn parse_list<T: FromStr>(key: &str, v: &str) -> Result<Vec<T>> {
    let items: Vec<T> = v
        .split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| parse_one(key, s))
        .collect::<Result<_>>()?;
    if items.is_empty() {
        return Err(config_err(key, "empty list"));
    }
    Ok(items)
}

fn check_doubling(key: &str, values: &[usize]) -> Result<()> {
    for w in values.windows(2) {
        if w[1] != 2 * w[0] {
            return Err(config_err(key, format!("values must double: {} then {}", w[0], w[1])));
        }
    }
    Ok(())
}

fn check_single<T>(key: &str, values: &[T]) -> Result<()> {
    if values.len() != 1 {
        return Err(config_err(key, "solve takes exactly one value"));
    }
    Ok(())
}

/// Parses config-file text; see the module docs for the format.
pub fn parse_config(text: &str) -> Result<RunConfig> {
    let mut s = Settings::default();
    s.extend_from_text(text)?;
    RunConfig::try_from(&s)
}

/// Parses command-line arguments and applies `threads_env`.
pub fn parse_args<I, S>(args: I, threads_env: Option<&str>) -> Result<RunConfig>
where
    I: IntoIterator<Item = S>,
    S: AsRef<str>,
{
    let mut s = Settings::default();
    s.extend_from_args(args)?;
    s.apply_threads_env(threads_env)?;
    RunConfig::try_from(&s)
}

impl TryFrom<&Settings> for RunConfig {
    type Error = Error;

    fn try_from(s: &Settings) -> Result<Self> {
        let command: Command = s
            .get("command")
            .ok_or_else(|| config_err("command", "command required"))?
            .parse()?;
        let example: Example = s
            .get("example")
            .unwrap_or("ex1")
            .parse()
            .map_err(|_| config_err("example", "expected ex1 or ex2"))?;
        let one_d = example == Example::Interval;

        let alpha = match s.get("alpha") {
            Some(v) => parse_list::<f64>("alpha", v)?,
            None if command == Command::Solve || command == Command::BoundReport => vec![1.5],
            None => vec![1.4, 1.5, 1.8],
        };
        for &a in &alpha {
            if !(a > 1.0 && a < 2.0) {
                return Err(config_err("alpha", format!("{a} is outside (1, 2)")));
            }
        }

        let default_steps: &[usize] = match (command, one_d) {
            (Command::Solve, _) => &[32],
            (Command::TemporalStudy, true) => &[128, 256, 512, 1024],
            (Command::TemporalStudy, false) => &[16, 32, 64],
            (Command::CaputoCheck, _) => &[64, 128, 256, 512, 1024],
            (Command::BoundReport, _) => &[32, 64, 128, 256],
            (Command::SpatialStudy, _) => &[],
        };
        let steps = match s.get("N") {
            Some(v) => parse_list::<usize>("N", v)?,
            None => default_steps.to_vec(),
        };
        if let Some(&n) = steps.iter().find(|&&n| n < 2) {
            return Err(config_err("N", format!("needs at least 2 steps, got {n}")));
        }

        let divisions = match s.get("Ms") {
            Some(v) => parse_list::<usize>("Ms", v)?,
            None if command == Command::SpatialStudy && one_d => vec![16, 32, 64, 128],
            None if command == Command::SpatialStudy => vec![8, 16, 32],
            None => Vec::new(),
        };
        if let Some(&m) = divisions.iter().find(|&&m| m < 2) {
            return Err(config_err("Ms", format!("needs at least 2 divisions, got {m}")));
        }

        let grading = s.get("r").map(|v| parse_one::<f64>("r", v)).transpose()?;
        if let Some(r) = grading {
            if !(r >= 1.0) || !r.is_finite() {
                return Err(config_err("r", format!("must be >= 1, got {r}")));
            }
        }

        let beta = match s.get("beta") {
            Some(v) => parse_list::<f64>("beta", v)?,
            None => vec![0.7],
        };
        if let Some(b) = beta.iter().find(|b| !(**b > 0.0 && **b < 1.0)) {
            return Err(config_err("beta", format!("{b} is outside (0, 1)")));
        }
        let sigma = s.get("sigma").map(|v| parse_one::<f64>("sigma", v)).transpose()?;
        if let Some(sg) = sigma {
            if !(sg > 0.0) || !sg.is_finite() {
                return Err(config_err("sigma", format!("must be positive, got {sg}")));
            }
        }

        let dim = example.domain().dimension();
        let quad = match s.get("quad") {
            Some(v) => parse_one::<usize>("quad", v)?,
            None => crate::fem_space::DEFAULT_POINTS,
        };
        QuadratureRule::for_dimension(dim, quad).map_err(|e| config_err("quad", e.to_string()))?;
        let error_quad = s.get("error_quad").map(|v| parse_one::<usize>("error_quad", v)).transpose()?;
        if let Some(q) = error_quad {
            QuadratureRule::for_dimension(dim, q).map_err(|e| config_err("error_quad", e.to_string()))?;
        }

        let tol = match s.get("tol") {
            Some(v) => parse_one::<f64>("tol", v)?,
            None => DEFAULT_TOL,
        };
        if !(tol > 0.0 && tol < 1.0) {
            return Err(config_err("tol", format!("must lie in (0, 1), got {tol}")));
        }
        let threads = match s.get("threads") {
            Some(v) => parse_one::<usize>("threads", v)?,
            None => 1,
        };
        if threads == 0 {
            return Err(config_err("threads", "must be at least 1"));
        }
        let timing = match s.get("timing") {
            Some(v) => parse_one::<bool>("timing", v)?,
            None => true,
        };
        let output = s.get("output").filter(|v| !v.is_empty()).map(PathBuf::from);

        match command {
            Command::Solve => {
                check_single("alpha", &alpha)?;
                check_single("N", &steps)?;
                if divisions.len() > 1 {
                    return Err(config_err("Ms", "solve takes at most one value"));
                }
            }
            Command::TemporalStudy | Command::CaputoCheck => check_doubling("N", &steps)?,
            Command::SpatialStudy => check_doubling("Ms", &divisions)?,
            Command::BoundReport => {}
        }

        Ok(RunConfig {
            command,
            example,
            alpha,
            steps,
            divisions,
            grading,
            beta,
            sigma,
            quad,
            error_quad,
            tol,
            output,
            threads,
            timing,
        })
    }
}

fn study_table(report: &ConvergenceReport, timing: bool) -> Table {
    let mut t = Table::new(vec!["alpha", "N", "Ms", "r", "error", "oc", "seconds", "cg_iters"]);
    for r in &report.rows {
        t.rows.push(vec![
            r.alpha.to_string(),
            r.steps.to_string(),
            r.divisions.to_string(),
            fixed6(r.grading),
            sci(r.error, 2),
            r.order.map(fixed6).unwrap_or_default(),
            if timing { format!("{:.3}", r.seconds) } else { String::new() },
            r.cg_iters.to_string(),
        ]);
    }
    t.notes = report.notes.clone();
    t
}

fn cases(cfg: &RunConfig) -> Result<Vec<ManufacturedCase>> {
    cfg.alpha.iter().map(|&a| ManufacturedCase::new(cfg.example, a)).collect()
}

/// Executes the configured command and returns its report.
pub fn run(cfg: &RunConfig) -> Result<Table> {
    let opts = cfg.study_options();
    match cfg.command {
        Command::TemporalStudy => {
            let jobs: Vec<StudyJob> = cases(cfg)?
                .iter()
                .flat_map(|c| temporal_jobs(c, &cfg.steps, &opts))
                .collect();
            let report = ConvergenceReport::from_rows(StudyKind::Temporal, run_jobs(&jobs, &opts)?, Vec::new())?;
            Ok(study_table(&report, cfg.timing))
        }
        Command::SpatialStudy => {
            let mut jobs = Vec::new();
            let mut notes = Vec::new();
            for c in cases(cfg)? {
                let (j, n) = spatial_jobs(&c, &cfg.divisions, &opts);
                jobs.extend(j);
                notes.extend(n);
            }
            let report = ConvergenceReport::from_rows(StudyKind::Spatial, run_jobs(&jobs, &opts)?, notes)?;
            Ok(study_table(&report, cfg.timing))
        }
        Command::Solve => {
            let case = ManufacturedCase::new(cfg.example, cfg.alpha[0])?;
            let steps = cfg.steps[0];
            let divisions = cfg
                .divisions
                .first()
                .copied()
                .unwrap_or_else(|| crate::mms_harness::coupled_divisions(steps, case.beta()));
            let job = StudyJob::new(&case, steps, divisions, cfg.grading);
            let run = run_case(&job, &opts)?;
            let h1 = run.h1_errors(&case);
            let l2 = run.l2_errors(&case);
            let bound = run.bound_quantity();
            let mut t = Table::new(vec!["n", "t_n", "h1_error", "l2_error", "bound_quantity"]);
            for n in 0..=steps {
                t.rows.push(vec![
                    n.to_string(),
                    sci(run.time.t(n), 9),
                    sci(h1[n], 6),
                    sci(l2[n], 6),
                    sci(bound[n], 6),
                ]);
            }
            t.notes.push(format!(
                "{} alpha={} N={steps} Ms={divisions} r={}",
                cfg.example,
                case.alpha(),
                fixed6(job.grading)
            ));
            Ok(t)
        }
        Command::CaputoCheck => {
            let mut t = Table::new(vec!["beta", "sigma", "r", "N", "weighted_error", "oc"]);
            for &beta in &cfg.beta {
                let sigma = cfg.sigma.unwrap_or(beta);
                let r = match cfg.grading {
                    Some(r) => r,
                    None => recommended_grading(beta)?,
                };
                for row in truncation_study(beta, sigma, &cfg.steps, r)? {
                    t.rows.push(vec![
                        beta.to_string(),
                        sigma.to_string(),
                        fixed6(r),
                        row.steps.to_string(),
                        sci(row.weighted_error, 2),
                        row.order.map(fixed6).unwrap_or_default(),
                    ]);
                }
            }
            Ok(t)
        }
        Command::BoundReport => {
            let mut t = Table::new(vec![
                "alpha",
                "N",
                "Ms",
                "max_bound_quantity",
                "final_bound_quantity",
            ]);
            for case in cases(cfg)? {
                for row in bound_study(&case, &cfg.steps, &opts)? {
                    t.rows.push(vec![
                        row.alpha.to_string(),
                        row.steps.to_string(),
                        row.divisions.to_string(),
                        sci(row.max_bound, 6),
                        sci(row.final_bound, 6),
                    ]);
                }
            }
            Ok(t)
        }
    }
}

/// Runs `cfg`, writes the CSV to `cfg.output` (or to `stdout` when unset)
/// and, when a file was written, the aligned table to `stdout`.
pub fn execute(cfg: &RunConfig, stdout: &mut dyn Write) -> Result<()> {
    let table = run(cfg)?;
    let io = |path: &str, e: std::io::Error| Error::Io {
        path: path.to_string(),
        reason: e.to_string(),
    };
    match &cfg.output {
        Some(path) => {
            let name = path.display().to_string();
            std::fs::write(path, table.to_csv()).map_err(|e| io(&name, e))?;
            stdout.write_all(table.to_aligned().as_bytes()).map_err(|e| io("stdout", e))?;
        }
        None => stdout.write_all(table.to_csv().as_bytes()).map_err(|e| io("stdout", e))?,
    }
    Ok(())
}

/// Entry point for the binary; returns the process exit code.
pub fn main_with_args<I, S>(args: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: AsRef<str>,
{
    let env = std::env::var(THREADS_ENV).ok();
    let result = parse_args(args, env.as_deref()).and_then(|cfg| execute(&cfg, &mut std::io::stdout().lock()));
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("fracwave: {e}");
            1
        }
    }
}
