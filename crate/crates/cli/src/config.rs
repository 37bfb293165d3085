//! Run configuration: flat `key = value` text, one key per line, `#` starts a comment.
//!
//! ```text
//! mode = trajectory
//! algorithm = oneplusone
//! algorithm.kappa_sigma = 0.3333333333
//! algorithm.p_target = 0.2
//! objective = sphere
//! n = 10
//! x0 = 0.8            # scalar fill, or a comma-separated vector
//! sigma0 = 1e-6
//! seed = 1
//! replicates = 6
//! max_evals = 10000
//! target_f = 1e-18
//! ```

use std::fmt;
use std::str::FromStr;

use cbsars::algorithms::{
    default_population, default_weights, AlgorithmKind, AlgorithmSpec, CommaEsParams, OnePlusOneParams, SaParams,
};
use cbsars::objectives::Objective;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
#[error("{}{key}: {message}", line.map(|l| format!("line {l}: ")).unwrap_or_default())]
pub struct ConfigError {
    /// 1-based line in the config text; `None` for command-line overrides and defaults.
    pub line: Option<usize>,
    pub key: String,
    pub message: String,
}

fn err(line: Option<usize>, key: &str, message: impl Into<String>) -> ConfigError {
    ConfigError { line, key: key.to_string(), message: message.into() }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Trajectory,
    NormalizedChain,
    CrEstimate,
    InvarianceSuite,
    SiCheck,
    ConstantSigma,
}

impl Mode {
    pub const ALL: [Mode; 6] = [
        Mode::Trajectory,
        Mode::NormalizedChain,
        Mode::CrEstimate,
        Mode::InvarianceSuite,
        Mode::SiCheck,
        Mode::ConstantSigma,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Trajectory => "trajectory",
            Mode::NormalizedChain => "normalized-chain",
            Mode::CrEstimate => "cr-estimate",
            Mode::InvarianceSuite => "invariance-suite",
            Mode::SiCheck => "si-check",
            Mode::ConstantSigma => "constant-sigma",
        }
    }
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Mode::ALL
            .into_iter()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| format!("unknown mode {s:?}, expected one of {}", mode_list()))
    }
}

fn mode_list() -> String {
    Mode::ALL.iter().map(|m| m.as_str()).collect::<Vec<_>>().join(", ")
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum StartPoint {
    Fill(f64),
    Vector(Vec<f64>),
}

impl StartPoint {
    pub fn resolve(&self, n: usize) -> Vec<f64> {
        match self {
            StartPoint::Fill(v) => vec![*v; n],
            StartPoint::Vector(v) => v.clone(),
        }
    }
}

/// Algorithm name plus optional parameter overrides; unset parameters take the defaults.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct AlgorithmConfig {
    pub name: String,
    pub p: Option<usize>,
    pub kappa_m: Option<f64>,
    pub kappa_sigma: Option<f64>,
    pub p_target: Option<f64>,
    pub tau: Option<f64>,
}

impl AlgorithmConfig {
    pub fn build(&self, n: usize) -> Result<AlgorithmSpec, String> {
        let p = self.p.unwrap_or_else(|| default_population(n));
        let kind = match self.name.as_str() {
            "csa" | "xnes" => {
                let params = CommaEsParams::new(
                    n,
                    self.kappa_m.unwrap_or(1.0),
                    self.kappa_sigma.unwrap_or(1.0),
                    default_weights(p).map_err(|e| e.to_string())?,
                )
                .map_err(|e| e.to_string())?;
                if self.name == "csa" {
                    AlgorithmKind::Csa(params)
                } else {
                    AlgorithmKind::Xnes(params)
                }
            }
            "sa" => AlgorithmKind::SelfAdaptive(
                SaParams::new(self.tau.unwrap_or(1.0 / (n as f64).sqrt()), p).map_err(|e| e.to_string())?,
            ),
            "oneplusone" => AlgorithmKind::OnePlusOne(
                OnePlusOneParams::new(self.kappa_sigma.unwrap_or(1.0 / 3.0), self.p_target.unwrap_or(0.2))
                    .map_err(|e| e.to_string())?,
            ),
            "constant" => AlgorithmKind::ConstantStep,
            other => return Err(format!("unknown algorithm {other:?}")),
        };
        AlgorithmSpec::new(n, kind).map_err(|e| e.to_string())
    }

    fn describe(&self) -> String {
        let mut s = self.name.clone();
        for (k, v) in [
            ("p", self.p.map(|v| v as f64)),
            ("kappa_m", self.kappa_m),
            ("kappa_sigma", self.kappa_sigma),
            ("p_target", self.p_target),
            ("tau", self.tau),
        ] {
            if let Some(v) = v {
                s.push_str(&format!(" algorithm.{k}={v}"));
            }
        }
        s
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub mode: Mode,
    pub algorithm: AlgorithmConfig,
    pub objective: String,
    pub n: usize,
    pub x0: StartPoint,
    pub sigma0: f64,
    pub seed: u64,
    pub replicates: usize,
    pub max_evals: u64,
    pub target_f: Option<f64>,
    /// Exit with status 2 if any replicate misses `target_f`.
    pub require_target: bool,
    /// Keep every `record_every`-th trace row.
    pub record_every: u64,
    /// Samples per scaling-invariance check.
    pub trials: usize,
    /// Iterations per paired run in the invariance suite.
    pub horizon: usize,
}

pub const KEYS: [&str; 19] = [
    "mode",
    "algorithm",
    "algorithm.p",
    "algorithm.kappa_m",
    "algorithm.kappa_sigma",
    "algorithm.p_target",
    "algorithm.tau",
    "objective",
    "n",
    "x0",
    "sigma0",
    "seed",
    "replicates",
    "max_evals",
    "target_f",
    "require_target",
    "record_every",
    "trials",
    "horizon",
];

/// Accumulates keys before validation.
#[derive(Debug, Default)]
pub struct ConfigBuilder {
    entries: Vec<(String, String, Option<usize>)>,
}

impl ConfigBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    /// Parses config text. Later lines override earlier ones.
    pub fn parse_text(&mut self, text: &str) -> Result<(), ConfigError> {
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            self.set_at(line, Some(i + 1))?;
        }
        Ok(())
    }

    /// `key=value`, as given to `--set`.
    pub fn set(&mut self, assignment: &str) -> Result<(), ConfigError> {
        self.set_at(assignment, None)
    }

    fn set_at(&mut self, assignment: &str, line: Option<usize>) -> Result<(), ConfigError> {
        let Some((key, value)) = assignment.split_once('=') else {
            return Err(err(line, assignment.trim(), "expected key = value"));
        };
        let (key, value) = (key.trim(), value.trim());
        if !KEYS.contains(&key) {
            return Err(err(line, key, "unknown key"));
        }
        self.entries.retain(|(k, _, _)| k != key);
        self.entries.push((key.to_string(), value.to_string(), line));
        Ok(())
    }

    fn get(&self, key: &str) -> Option<(&str, Option<usize>)> {
        self.entries.iter().find(|(k, _, _)| k == key).map(|(_, v, l)| (v.as_str(), *l))
    }

    fn parsed<T: FromStr>(&self, key: &str) -> Result<Option<T>, ConfigError> {
        match self.get(key) {
            None => Ok(None),
            Some((v, line)) => v.parse::<T>().map(Some).map_err(|_| err(line, key, format!("cannot parse {v:?}"))),
        }
    }

    fn line_of(&self, key: &str) -> Option<usize> {
        self.get(key).and_then(|(_, l)| l)
    }

    /// Applies defaults and validates every field.
    pub fn build(&self) -> Result<RunConfig, ConfigError> {
        let mode = match self.get("mode") {
            None => Mode::Trajectory,
            Some((v, line)) => v.parse().map_err(|m| err(line, "mode", m))?,
        };
        let name = match self.get("algorithm") {
            Some((v, _)) => v.to_string(),
            None if mode == Mode::ConstantSigma || mode == Mode::SiCheck => "constant".into(),
            None => return Err(err(None, "algorithm", "missing")),
        };
        let algorithm = AlgorithmConfig {
            name,
            p: self.parsed("algorithm.p")?,
            kappa_m: self.parsed("algorithm.kappa_m")?,
            kappa_sigma: self.parsed("algorithm.kappa_sigma")?,
            p_target: self.parsed("algorithm.p_target")?,
            tau: self.parsed("algorithm.tau")?,
        };
        if mode == Mode::ConstantSigma && algorithm.name != "constant" {
            return Err(err(self.line_of("algorithm"), "algorithm", "constant-sigma mode runs the constant algorithm"));
        }
        let objective = self.get("objective").map(|(v, _)| v.to_string()).ok_or_else(|| err(None, "objective", "missing"))?;
        let n: usize = self.parsed("n")?.ok_or_else(|| err(None, "n", "missing"))?;
        if n == 0 {
            return Err(err(self.line_of("n"), "n", "n must be at least 1"));
        }
        let x0 = match self.get("x0") {
            None => StartPoint::Fill(0.8),
            Some((v, line)) => {
                let values: Vec<f64> = v
                    .split(',')
                    .map(|s| s.trim().parse::<f64>())
                    .collect::<Result<_, _>>()
                    .map_err(|_| err(line, "x0", format!("cannot parse {v:?}")))?;
                if values.iter().any(|v| !v.is_finite()) {
                    return Err(err(line, "x0", "x0 must be finite"));
                }
                match values.len() {
                    1 => StartPoint::Fill(values[0]),
                    len if len == n => StartPoint::Vector(values),
                    len => return Err(err(line, "x0", format!("x0 has {len} entries but n = {n}"))),
                }
            }
        };
        let sigma0: f64 = self.parsed("sigma0")?.unwrap_or(1.0);
        if !(sigma0 > 0.0 && sigma0.is_finite()) {
            return Err(err(self.line_of("sigma0"), "sigma0", "sigma0 must be positive"));
        }
        let seed: u64 = self.parsed("seed")?.ok_or_else(|| err(None, "seed", "missing"))?;
        let replicates: usize = self.parsed("replicates")?.unwrap_or(1);
        if replicates == 0 {
            return Err(err(self.line_of("replicates"), "replicates", "replicates must be at least 1"));
        }
        let max_evals: u64 = self.parsed("max_evals")?.unwrap_or(1_000_000);
        if max_evals == 0 {
            return Err(err(self.line_of("max_evals"), "max_evals", "max_evals must be at least 1"));
        }
        let target_f: Option<f64> = self.parsed("target_f")?;
        if let Some(t) = target_f {
            if t.is_nan() {
                return Err(err(self.line_of("target_f"), "target_f", "target_f must be a number"));
            }
        }
        let require_target: bool = self.parsed("require_target")?.unwrap_or(false);
        if require_target && target_f.is_none() {
            return Err(err(self.line_of("require_target"), "require_target", "needs target_f"));
        }
        let record_every: u64 = self.parsed("record_every")?.unwrap_or(1);
        if record_every == 0 {
            return Err(err(self.line_of("record_every"), "record_every", "record_every must be at least 1"));
        }
        let trials: usize = self.parsed("trials")?.unwrap_or(1000);
        let horizon: usize = self.parsed("horizon")?.unwrap_or(1000);
        if trials == 0 {
            return Err(err(self.line_of("trials"), "trials", "trials must be at least 1"));
        }
        algorithm.build(n).map_err(|m| err(self.line_of("algorithm"), "algorithm", m))?;
        Objective::from_name(&objective, n).map_err(|e| err(self.line_of("objective"), "objective", e.to_string()))?;
        Ok(RunConfig {
            mode,
            algorithm,
            objective,
            n,
            x0,
            sigma0,
            seed,
            replicates,
            max_evals,
            target_f,
            require_target,
            record_every,
            trials,
            horizon,
        })
    }
}

/// Parses and validates a whole config text.
pub fn parse_config(text: &str) -> Result<RunConfig, ConfigError> {
    let mut b = ConfigBuilder::new();
    b.parse_text(text)?;
    b.build()
}

impl RunConfig {
    pub fn spec(&self) -> AlgorithmSpec {
        self.algorithm.build(self.n).expect("validated when the config was built")
    }

    pub fn objective(&self) -> Objective {
        Objective::from_name(&self.objective, self.n).expect("validated when the config was built")
    }

    /// One line listing every resolved field, used as the comment row of output files.
    pub fn describe(&self) -> String {
        let x0 = match &self.x0 {
            StartPoint::Fill(v) => format!("{v}"),
            StartPoint::Vector(v) => v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","),
        };
        let target = self.target_f.map_or("none".to_string(), |t| t.to_string());
        format!(
            "mode={} algorithm={} objective={} n={} x0={x0} sigma0={} seed={} replicates={} max_evals={} target_f={target} require_target={} record_every={} trials={} horizon={}",
            self.mode,
            self.algorithm.describe(),
            self.objective,
            self.n,
            self.sigma0,
            self.seed,
            self.replicates,
            self.max_evals,
            self.require_target,
            self.record_every,
            self.trials,
            self.horizon,
        )
    }
}
