//! Unnormalized runs `(X_t, sigma_t)` and runs coupled with the normalized chain.
//!
//! Long runs on converging problems leave the `f64` exponent range (`sigma_t` below
//! `1e-308` after a few thousand iterations). With `extended_range` the state is stored as
//! `2^e (x, sigma)`: whenever `sigma` leaves `[2^-300, 2^300]` both components are multiplied
//! by an exact power of two. Floating-point arithmetic commutes with such factors, so on an
//! objective that is scaling-invariant about the origin every ranking, and hence the whole
//! run, is bit-identical to the same run in an unbounded exponent range.

use super::{norm, normalized_step, NormalizedState};
use crate::error::{invalid, CbsarsError, Result};
use crate::framework::{rank_block, update, AlgorithmState, SearchAlgorithm};
use crate::objectives::Objective;
use crate::rng::RngStream;

const RESCALE_LIMIT: i32 = 300;

/// `(X, sigma) = 2^exponent * (state.x, state.sigma)`.
#[derive(Clone, Debug, PartialEq)]
pub struct ScaledState {
    pub state: AlgorithmState,
    pub exponent: i32,
}

impl ScaledState {
    pub fn new(state: AlgorithmState) -> Self {
        Self { state, exponent: 0 }
    }

    pub fn ln_sigma(&self) -> f64 {
        self.state.sigma().ln() + self.exponent as f64 * std::f64::consts::LN_2
    }

    /// `ln ||X - x*||`.
    pub fn ln_distance(&self, x_star: &[f64]) -> f64 {
        norm(&diff(self.state.x(), x_star)).ln() + self.exponent as f64 * std::f64::consts::LN_2
    }

    /// `(X - x*) / sigma`, independent of the exponent.
    pub fn normalized(&self, x_star: &[f64]) -> Vec<f64> {
        let s = self.state.sigma();
        self.state.x().iter().zip(x_star).map(|(x, r)| (x - r) / s).collect()
    }

    fn rescale(&mut self) {
        let sigma = self.state.sigma();
        let k = if sigma < 2f64.powi(-RESCALE_LIMIT) {
            RESCALE_LIMIT
        } else if sigma > 2f64.powi(RESCALE_LIMIT) {
            -RESCALE_LIMIT
        } else {
            return;
        };
        let factor = 2f64.powi(k);
        let x = self.state.x().iter().map(|v| v * factor).collect();
        self.state = AlgorithmState::new(x, sigma * factor).expect("power-of-two rescaling keeps state valid");
        self.exponent -= k;
    }
}

fn diff(x: &[f64], r: &[f64]) -> Vec<f64> {
    x.iter().zip(r).map(|(a, b)| a - b).collect()
}

fn reference_is_origin(f: &Objective) -> bool {
    f.x_star().iter().all(|v| *v == 0.0)
}

/// One row of a trace. `log_eta` is `ln(sigma_t / sigma_{t-1})` (zero on the first row).
#[derive(Clone, Debug, PartialEq)]
pub struct TrajectoryRecord {
    pub t: u64,
    pub evals: u64,
    /// `||X_t - x*||`; may underflow to zero in extended-range runs, as may `sigma`, see `ln_x_norm`.
    pub x_norm: f64,
    pub sigma: f64,
    pub z_norm: f64,
    pub log_eta: f64,
    pub ln_x_norm: f64,
    pub ln_sigma: f64,
}

impl TrajectoryRecord {
    fn from_state(t: u64, evals: u64, s: &ScaledState, f: &Objective, log_eta: f64) -> Self {
        let ln_x_norm = s.ln_distance(f.x_star());
        let ln_sigma = s.ln_sigma();
        Self {
            t,
            evals,
            x_norm: libm::scalbn(norm(&diff(s.state.x(), f.x_star())), s.exponent),
            sigma: libm::scalbn(s.state.sigma(), s.exponent),
            z_norm: norm(&s.normalized(f.x_star())),
            log_eta,
            ln_x_norm,
            ln_sigma,
        }
    }
}

/// When to stop a run and how densely to record it.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StopCondition {
    pub max_evals: u64,
    /// Stop once `f(X_t) <= target_f`.
    pub target_f: Option<f64>,
    /// Keep every `record_every`-th row; the first and last rows are always kept.
    pub record_every: u64,
    pub extended_range: bool,
}

impl StopCondition {
    pub fn evals(max_evals: u64) -> Self {
        Self { max_evals, target_f: None, record_every: 1, extended_range: false }
    }

    pub fn with_target(mut self, target_f: f64) -> Self {
        self.target_f = Some(target_f);
        self
    }

    pub fn every(mut self, record_every: u64) -> Self {
        self.record_every = record_every.max(1);
        self
    }

    pub fn extended(mut self) -> Self {
        self.extended_range = true;
        self
    }
}

#[derive(Clone, Debug)]
pub struct Trajectory {
    pub records: Vec<TrajectoryRecord>,
    pub final_state: ScaledState,
    pub iterations: u64,
    pub evals: u64,
    /// `f(X_T)` at the final state; NaN when the state is rescaled.
    pub final_f: f64,
    pub evals_to_target: Option<u64>,
}

/// Iterates the algorithm from `state0` until the evaluation budget or the target is hit.
pub fn run_trajectory<A>(
    alg: &A,
    f: &Objective,
    state0: AlgorithmState,
    rng: &mut RngStream,
    stop: StopCondition,
) -> Result<Trajectory>
where
    A: SearchAlgorithm + ?Sized,
{
    if stop.extended_range && !reference_is_origin(f) {
        return invalid("extended-range runs need an objective centred at the origin");
    }
    let per_iter = alg.evals_per_iteration() as u64;
    let mut s = ScaledState::new(state0);
    let mut records = vec![TrajectoryRecord::from_state(0, 0, &s, f, 0.0)];
    let mut t = 0u64;
    let mut f_value = f.eval(s.state.x());
    let mut evals_to_target = stop.target_f.filter(|&target| f_value <= target).map(|_| 0);
    let mut last_recorded = 0;
    while evals_to_target.is_none() && (t + 1) * per_iter <= stop.max_evals {
        let u = alg.sample(rng);
        let ranked = rank_block(alg, &s.state, &u, f)?;
        let log_eta = alg.update_step_size(1.0, &ranked.block).ln();
        s.state = update(alg, &s.state, &ranked.block)?;
        if stop.extended_range {
            s.rescale();
        }
        t += 1;
        if s.exponent == 0 {
            f_value = f.eval(s.state.x());
            if let Some(target) = stop.target_f {
                if f_value <= target {
                    evals_to_target = Some(t * per_iter);
                }
            }
        } else {
            f_value = f64::NAN;
        }
        if t % stop.record_every == 0 || evals_to_target.is_some() {
            records.push(TrajectoryRecord::from_state(t, t * per_iter, &s, f, log_eta));
            last_recorded = t;
        }
    }
    if last_recorded != t {
        let log_eta = 0.0;
        let mut last = TrajectoryRecord::from_state(t, t * per_iter, &s, f, log_eta);
        last.log_eta = f64::NAN;
        records.push(last);
    }
    Ok(Trajectory {
        records,
        final_state: s,
        iterations: t,
        evals: t * per_iter,
        final_f: f_value,
        evals_to_target,
    })
}

/// State of both chains after one shared block.
#[derive(Clone, Debug, PartialEq)]
pub struct CoupledStep {
    pub ln_x_norm: f64,
    pub ln_sigma: f64,
    /// `(X_t - x*) / sigma_t` from the unnormalized run.
    pub x_over_sigma: Vec<f64>,
    /// `Z_t` from the free-running normalized chain.
    pub z: Vec<f64>,
    /// `Z_t` obtained by one normalized step from `(X_{t-1} - x*) / sigma_{t-1}`.
    pub z_one_step: Vec<f64>,
    /// `ln eta*` of the free-running chain's step into this row (zero on the first row).
    pub log_eta: f64,
    /// `ln eta*(Y((X_{t-1} - x*) / sigma_{t-1}, U_t))` (zero on the first row).
    pub log_eta_one_step: f64,
}

/// Rows `0..=steps` of an unnormalized run and its normalized chain driven by the same blocks.
#[derive(Clone, Debug, PartialEq)]
pub struct CoupledTrace {
    pub steps: Vec<CoupledStep>,
}

/// Relative distance `||a - b|| / ||b||`.
fn rel_dev(a: &[f64], b: &[f64]) -> f64 {
    let d: Vec<f64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
    norm(&d) / norm(b)
}

impl CoupledTrace {
    /// `max_t ||Z_t - (X_t - x*)/sigma_t|| / ||(X_t - x*)/sigma_t||` for the free-running chain.
    pub fn max_free_deviation(&self) -> f64 {
        self.steps.iter().map(|s| rel_dev(&s.z, &s.x_over_sigma)).fold(0.0, f64::max)
    }

    /// The same for the one-step chain.
    pub fn max_one_step_deviation(&self) -> f64 {
        self.steps.iter().map(|s| rel_dev(&s.z_one_step, &s.x_over_sigma)).fold(0.0, f64::max)
    }

    /// First row where the free chain deviates by more than `tol`.
    pub fn first_free_divergence(&self, tol: f64) -> Option<usize> {
        self.steps.iter().position(|s| !(rel_dev(&s.z, &s.x_over_sigma) <= tol))
    }
}

/// Runs `(X, sigma)` and `Z` side by side for `steps` iterations with the same blocks.
pub fn run_coupled<A>(
    alg: &A,
    f: &Objective,
    state0: AlgorithmState,
    steps: usize,
    rng: &mut RngStream,
) -> Result<CoupledTrace>
where
    A: SearchAlgorithm + ?Sized,
{
    let x_star = f.x_star().to_vec();
    let extended = reference_is_origin(f);
    let mut s = ScaledState::new(state0);
    let mut z = NormalizedState::new(s.normalized(&x_star))?;
    let row = |s: &ScaledState, z: &NormalizedState, z1: Vec<f64>, log_eta: f64, log_eta_one_step: f64| {
        CoupledStep {
            ln_x_norm: s.ln_distance(&x_star),
            ln_sigma: s.ln_sigma(),
            x_over_sigma: s.normalized(&x_star),
            z: z.z().to_vec(),
            z_one_step: z1,
            log_eta,
            log_eta_one_step,
        }
    };
    let mut out = Vec::with_capacity(steps + 1);
    out.push(row(&s, &z, z.z().to_vec(), 0.0, 0.0));
    for _ in 0..steps {
        let u = alg.sample(rng);
        let resync = NormalizedState::new(s.normalized(&x_star))?;
        let one = normalized_step(&resync, &u, alg, f)?;
        let free = normalized_step(&z, &u, alg, f)?;
        let ranked = rank_block(alg, &s.state, &u, f)?;
        s.state = update(alg, &s.state, &ranked.block)?;
        if extended {
            s.rescale();
        }
        z = free.z_next;
        out.push(row(&s, &z, one.z_next.z().to_vec(), free.log_eta, one.log_eta));
    }
    Ok(CoupledTrace { steps: out })
}

/// Largest violation of `ln(||X_{t+1}|| / ||X_t||) = ln(||Z_{t+1}|| eta*_t / ||Z_t||)` over a
/// coupled trace, where `Z_t = (X_t - x*) / sigma_t` and `eta*_t = eta*(Y(Z_t, U_{t+1}))`.
pub fn log_progress_check(trace: &CoupledTrace) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for (t, w) in trace.steps.windows(2).enumerate() {
        let (a, b) = (&w[0], &w[1]);
        let za = norm(&a.x_over_sigma);
        let zb = norm(&b.x_over_sigma);
        if !(za > 0.0 && zb > 0.0) || !a.ln_x_norm.is_finite() || !b.ln_x_norm.is_finite() {
            return Err(CbsarsError::DegenerateState(format!("zero norm at step {t}")));
        }
        let lhs = b.ln_x_norm - a.ln_x_norm;
        let rhs = zb.ln() - za.ln() + b.log_eta_one_step;
        worst = worst.max((lhs - rhs).abs());
    }
    Ok(worst)
}

/// Largest violation of `(1/t) ln(sigma_t / sigma_0) = (1/t) sum_{k<t} ln eta*_k` with
/// `eta*_k` as in [`log_progress_check`].
pub fn sigma_telescoping_check(trace: &CoupledTrace) -> f64 {
    let s0 = trace.steps[0].ln_sigma;
    let mut sum = 0.0;
    let mut worst: f64 = 0.0;
    for (t, s) in trace.steps.iter().enumerate().skip(1) {
        sum += s.log_eta_one_step;
        let lhs = (s.ln_sigma - s0) / t as f64;
        worst = worst.max((lhs - sum / t as f64).abs());
    }
    worst
}
