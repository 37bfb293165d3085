//! Experiment modes. Every output file starts with a header row naming the columns,
//! followed by a `#` comment row holding the resolved configuration.

use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use cbsars::chain::{
    default_burn_in, estimate_cr_from_log_etas, normalized_step, run_trajectory, CrEstimate, NormalizedState,
    StopCondition, TrajectoryRecord,
};
use cbsars::invariance::{
    test_monotone_invariance, test_scale_invariance, test_translation_invariance, PairedRunReport, PairedRunSetup,
    PairedVerdict, DEFAULT_TOLERANCE,
};
use cbsars::objectives::{check_scaling_invariance, default_rho_grid, Transform};
use cbsars::{AlgorithmState, CbsarsError, RngStream, SearchAlgorithm};
use rayon::prelude::*;
use thiserror::Error;

use crate::config::{Mode, RunConfig};

pub const TRACE_COLUMNS: &str = "t,evals,x_norm,sigma,z_norm,log_eta";

/// Target used by `constant-sigma` when the config sets none: `f <= 1e-6` on `f = ||x||^2`.
pub const CONSTANT_SIGMA_TARGET: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExitStatus {
    Success = 0,
    ConfigError = 1,
    TargetNotReached = 2,
    InvariantViolation = 3,
}

#[derive(Debug, Error)]
pub enum RunError {
    #[error("i/o error: {0}")]
    Io(#[from] io::Error),
    #[error(transparent)]
    Library(#[from] CbsarsError),
}

impl RunError {
    pub fn status(&self) -> ExitStatus {
        match self {
            RunError::Library(CbsarsError::InvalidInput(_)) | RunError::Library(CbsarsError::DegenerateState(_)) => {
                ExitStatus::ConfigError
            }
            RunError::Library(_) => ExitStatus::InvariantViolation,
            RunError::Io(_) => ExitStatus::ConfigError,
        }
    }
}

#[derive(Clone, Debug)]
pub struct ExperimentOutcome {
    pub status: ExitStatus,
    pub files: Vec<PathBuf>,
    /// Human-readable lines for stdout.
    pub messages: Vec<String>,
}

/// Lossless decimal rendering with 17 significant digits.
pub fn num(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        format!("{v}")
    }
}

fn opt_num(v: Option<f64>) -> String {
    v.map(num).unwrap_or_default()
}

fn create(path: &Path, header: &str, cfg: &RunConfig, extra: &str) -> io::Result<BufWriter<File>> {
    let mut w = BufWriter::new(File::create(path)?);
    writeln!(w, "{header}")?;
    writeln!(w, "# {}{extra}", cfg.describe())?;
    Ok(w)
}

fn trace_path(out: &Path, k: usize) -> PathBuf {
    out.join(format!("trace_{k:03}.csv"))
}

fn write_row(w: &mut impl Write, r: &TrajectoryRecord) -> io::Result<()> {
    writeln!(w, "{},{},{},{},{},{}", r.t, r.evals, num(r.x_norm), num(r.sigma), num(r.z_norm), num(r.log_eta))
}

/// CR from per-row `ln sigma` increments of rows spaced `every` steps apart.
fn cr_from_ln_sigma(rows: &[(u64, f64)], every: u64) -> Option<CrEstimate> {
    let regular: Vec<f64> = rows.iter().filter(|(t, _)| t % every == 0).map(|(_, s)| *s).collect();
    let incs: Vec<f64> = regular.windows(2).map(|w| (w[1] - w[0]) / every as f64).collect();
    if incs.is_empty() {
        return None;
    }
    estimate_cr_from_log_etas(&incs, default_burn_in(incs.len())).ok()
}

struct ReplicateSummary {
    iterations: u64,
    evals: u64,
    final_f: Option<f64>,
    evals_to_target: Option<u64>,
    cr: Option<CrEstimate>,
}

const SUMMARY_COLUMNS: &str = "replicate,seed,stream,iterations,evals,final_f,evals_to_target,cr,cr_half_width";

fn write_summary(out: &Path, cfg: &RunConfig, rows: &[ReplicateSummary]) -> io::Result<PathBuf> {
    let path = out.join("summary.csv");
    let mut w = create(&path, SUMMARY_COLUMNS, cfg, "")?;
    for (k, r) in rows.iter().enumerate() {
        writeln!(
            w,
            "{k},{},{k},{},{},{},{},{},{}",
            cfg.seed,
            r.iterations,
            r.evals,
            opt_num(r.final_f),
            r.evals_to_target.map(|e| e.to_string()).unwrap_or_default(),
            opt_num(r.cr.map(|c| c.cr)),
            opt_num(r.cr.map(|c| c.half_width)),
        )?;
    }
    w.flush()?;
    Ok(path)
}

fn trajectory_replicate(cfg: &RunConfig, k: usize, out: &Path) -> Result<ReplicateSummary, RunError> {
    let spec = cfg.spec();
    let f = cfg.objective();
    let state0 = AlgorithmState::new(cfg.x0.resolve(cfg.n), cfg.sigma0)?;
    let mut stop = StopCondition::evals(cfg.max_evals).every(cfg.record_every);
    let target = match (cfg.mode, cfg.target_f) {
        (_, Some(t)) => Some(t),
        (Mode::ConstantSigma, None) => Some(CONSTANT_SIGMA_TARGET),
        _ => None,
    };
    if let Some(t) = target {
        stop = stop.with_target(t);
    }
    if f.x_star().iter().all(|v| *v == 0.0) {
        stop = stop.extended();
    }
    let tr = run_trajectory(&spec, &f, state0, &mut RngStream::for_run(cfg.seed, k as u64), stop)?;
    let mut w = create(&trace_path(out, k), TRACE_COLUMNS, cfg, &format!(" replicate={k} stream={k}"))?;
    for r in &tr.records {
        write_row(&mut w, r)?;
    }
    w.flush()?;
    let rows: Vec<(u64, f64)> = tr.records.iter().map(|r| (r.t, r.ln_sigma)).collect();
    Ok(ReplicateSummary {
        iterations: tr.iterations,
        evals: tr.evals,
        final_f: tr.final_f.is_finite().then_some(tr.final_f),
        evals_to_target: tr.evals_to_target,
        cr: cr_from_ln_sigma(&rows, cfg.record_every),
    })
}

fn chain_replicate(cfg: &RunConfig, k: usize, out: &Path, write_trace: bool) -> Result<ReplicateSummary, RunError> {
    let spec = cfg.spec();
    let f = cfg.objective();
    let state0 = AlgorithmState::new(cfg.x0.resolve(cfg.n), cfg.sigma0)?;
    let mut z = NormalizedState::from_state(&state0, f.x_star())?;
    if z.norm() == 0.0 {
        return Err(CbsarsError::DegenerateState("initial normalized state is zero".into()).into());
    }
    let per_iter = spec.evals_per_iteration() as u64;
    let steps = cfg.max_evals / per_iter;
    let mut rng = RngStream::for_run(cfg.seed, k as u64);
    let mut writer = if write_trace {
        Some(create(&trace_path(out, k), TRACE_COLUMNS, cfg, &format!(" replicate={k} stream={k}"))?)
    } else {
        None
    };
    let mut ln_sigma = cfg.sigma0.ln();
    let mut log_etas = Vec::with_capacity(steps as usize);
    let row = |t: u64, z: &NormalizedState, ln_sigma: f64, log_eta: f64| TrajectoryRecord {
        t,
        evals: t * per_iter,
        x_norm: (z.norm().ln() + ln_sigma).exp(),
        sigma: ln_sigma.exp(),
        z_norm: z.norm(),
        log_eta,
        ln_x_norm: z.norm().ln() + ln_sigma,
        ln_sigma,
    };
    if let Some(w) = writer.as_mut() {
        write_row(w, &row(0, &z, ln_sigma, 0.0))?;
    }
    for t in 1..=steps {
        let u = spec.sample(&mut rng);
        let o = normalized_step(&z, &u, &spec, &f)?;
        z = o.z_next;
        ln_sigma += o.log_eta;
        log_etas.push(o.log_eta);
        if let Some(w) = writer.as_mut() {
            if t % cfg.record_every == 0 || t == steps {
                write_row(w, &row(t, &z, ln_sigma, o.log_eta))?;
            }
        }
    }
    if let Some(mut w) = writer {
        w.flush()?;
    }
    let cr = estimate_cr_from_log_etas(&log_etas, default_burn_in(log_etas.len())).ok();
    Ok(ReplicateSummary { iterations: steps, evals: steps * per_iter, final_f: None, evals_to_target: None, cr })
}

fn replicated(cfg: &RunConfig, out: &Path) -> Result<ExperimentOutcome, RunError> {
    let results: Vec<Result<ReplicateSummary, RunError>> = (0..cfg.replicates)
        .into_par_iter()
        .map(|k| match cfg.mode {
            Mode::Trajectory | Mode::ConstantSigma => trajectory_replicate(cfg, k, out),
            Mode::NormalizedChain => chain_replicate(cfg, k, out, true),
            _ => chain_replicate(cfg, k, out, false),
        })
        .collect();
    let rows = results.into_iter().collect::<Result<Vec<_>, _>>()?;
    let mut files = Vec::new();
    if cfg.mode != Mode::CrEstimate {
        files.extend((0..cfg.replicates).map(|k| trace_path(out, k)));
    }
    files.push(write_summary(out, cfg, &rows)?);
    let mut messages = Vec::new();
    let mut missed = 0;
    for (k, r) in rows.iter().enumerate() {
        let mut line = format!("replicate {k}: {} iterations, {} evals", r.iterations, r.evals);
        if let Some(fv) = r.final_f {
            line.push_str(&format!(", final f {fv:.6e}"));
        }
        match (cfg.mode, r.evals_to_target) {
            (Mode::Trajectory | Mode::ConstantSigma, Some(e)) => line.push_str(&format!(", target after {e} evals")),
            (Mode::Trajectory, None) if cfg.target_f.is_some() => {
                missed += 1;
                line.push_str(", target not reached");
            }
            (Mode::ConstantSigma, None) => {
                missed += 1;
                line.push_str(", target not reached");
            }
            _ => {}
        }
        if let Some(c) = r.cr {
            line.push_str(&format!(", CR {:.6} +- {:.6}", c.cr, c.half_width));
        }
        messages.push(line);
    }
    let status = if cfg.require_target && missed > 0 { ExitStatus::TargetNotReached } else { ExitStatus::Success };
    Ok(ExperimentOutcome { status, files, messages })
}

fn verdict_cells(r: &PairedRunReport) -> (String, String) {
    match &r.verdict {
        PairedVerdict::Pass => ("pass".into(), String::new()),
        PairedVerdict::FailAt { t, .. } => ("fail".into(), t.to_string()),
    }
}

fn invariance_suite(cfg: &RunConfig, out: &Path) -> Result<ExperimentOutcome, RunError> {
    let spec = cfg.spec();
    let f = cfg.objective();
    let setup = PairedRunSetup {
        state0: AlgorithmState::new(cfg.x0.resolve(cfg.n), cfg.sigma0)?,
        seed: cfg.seed,
        horizon: cfg.horizon,
    };
    let shift = vec![1.0; cfg.n];
    let mut rows = Vec::new();
    for g in [Transform::Identity, Transform::QuarterRoot, Transform::Arctan] {
        let fg = f.compose(g.clone());
        rows.push((g.label(), "monotone".to_string(), test_monotone_invariance(&spec, &f, &g, &setup)?));
        rows.push((
            g.label(),
            "translation x0=1".to_string(),
            test_translation_invariance(&spec, &fg, &shift, &setup, DEFAULT_TOLERANCE)?,
        ));
        for alpha in [2f64.powi(-4), 3.0, 2f64.powi(10)] {
            rows.push((g.label(), format!("scale alpha={alpha}"), test_scale_invariance(&spec, &fg, alpha, &setup)?));
        }
    }
    let path = out.join("invariance.csv");
    let mut w = create(
        &path,
        "transform,test,horizon,tolerance,max_x_deviation,max_sigma_deviation,verdict,first_failure_t",
        cfg,
        "",
    )?;
    let mut messages = Vec::new();
    let mut failed = 0;
    for (g, test, r) in &rows {
        let (verdict, t) = verdict_cells(r);
        writeln!(
            w,
            "{g},{test},{},{},{},{},{verdict},{t}",
            r.horizon,
            num(r.tolerance),
            num(r.max_x_deviation),
            num(r.max_sigma_deviation)
        )?;
        if !r.passed() {
            failed += 1;
            messages.push(format!("{g} {test}: fails at t={t}"));
        }
    }
    w.flush()?;
    messages.push(format!("{} of {} paired runs pass", rows.len() - failed, rows.len()));
    let status = if failed == 0 { ExitStatus::Success } else { ExitStatus::InvariantViolation };
    Ok(ExperimentOutcome { status, files: vec![path], messages })
}

fn si_check(cfg: &RunConfig, out: &Path) -> Result<ExperimentOutcome, RunError> {
    let f = cfg.objective();
    let grid = default_rho_grid();
    let path = out.join("si_check.csv");
    let mut w = create(&path, "replicate,trials,verdict,witness_x,witness_y,witness_rho", cfg, "")?;
    let mut messages = Vec::new();
    for k in 0..cfg.replicates {
        let r = check_scaling_invariance(&f, cfg.trials, &grid, &mut RngStream::for_run(cfg.seed, k as u64))?;
        let (verdict, x, y, rho) = match &r.witness {
            None => ("consistent", String::new(), String::new(), String::new()),
            Some(wt) => {
                let join = |v: &[f64]| v.iter().map(|a| num(*a)).collect::<Vec<_>>().join(" ");
                ("refuted", join(&wt.x), join(&wt.y), num(wt.rho))
            }
        };
        writeln!(w, "{k},{},{verdict},{x},{y},{rho}", r.trials)?;
        messages.push(format!("replicate {k}: {verdict} after {} trials", r.trials));
    }
    w.flush()?;
    Ok(ExperimentOutcome { status: ExitStatus::Success, files: vec![path], messages })
}

/// Runs the configured mode and writes its files into `out`.
pub fn run_experiment(cfg: &RunConfig, out: &Path) -> Result<ExperimentOutcome, RunError> {
    fs::create_dir_all(out)?;
    match cfg.mode {
        Mode::Trajectory | Mode::ConstantSigma | Mode::NormalizedChain | Mode::CrEstimate => replicated(cfg, out),
        Mode::InvarianceSuite => invariance_suite(cfg, out),
        Mode::SiCheck => si_check(cfg, out),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_digits_round_trip() {
        for v in [0.1, 1.0 / 3.0, 6.02214076e23, -2.5e-300, 0.0] {
            let s = num(v);
            assert_eq!(s.parse::<f64>().unwrap(), v);
            let digits = s.split('e').next().unwrap().chars().filter(|c| c.is_ascii_digit()).count();
            assert_eq!(digits, 17);
        }
    }

    #[test]
    fn cr_from_constant_log_sigma_slope() {
        let rows: Vec<(u64, f64)> = (0..=1000).map(|t| (t * 2, -0.01 * (t * 2) as f64)).collect();
        let c = cr_from_ln_sigma(&rows, 2).unwrap();
        assert!((c.cr - 0.01).abs() < 1e-12);
    }
}
