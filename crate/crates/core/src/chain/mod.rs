//! The normalized chain `Z_t = (X_t - x*) / sigma_t`.
//!
//! For a translation- and scale-invariant algorithm on a function that is scaling-invariant
//! with respect to `x*`, `Z` is a time-homogeneous Markov chain of its own:
//!
//! ```text
//! y       = Ord(f(Sol((z, 1), u^i))) * u
//! z_next  = G1((z, 1), y) / G2(1, y)
//! eta*(y) = G2(1, y)
//! ```
//!
//! and the log-step-size increments `ln eta*` drive the convergence rate.

mod estimate;
mod trajectory;

pub use estimate::{
    batched_slope, default_burn_in, estimate_cr, estimate_cr_from_log_etas, regression_slope, CrEstimate,
};
pub use trajectory::{
    log_progress_check, run_coupled, run_trajectory, sigma_telescoping_check, CoupledStep,
    CoupledTrace, ScaledState, StopCondition, Trajectory, TrajectoryRecord,
};

use crate::error::{invalid, CbsarsError, Result};
use crate::framework::{rank_block, AlgorithmState, SampleBlock, SearchAlgorithm};
use crate::objectives::Objective;
use crate::rng::RngStream;

/// A point of the normalized chain.
#[derive(Clone, Debug, PartialEq)]
pub struct NormalizedState {
    z: Vec<f64>,
}

impl NormalizedState {
    pub fn new(z: Vec<f64>) -> Result<Self> {
        if z.is_empty() {
            return invalid("normalized state needs at least one coordinate");
        }
        if let Some(v) = z.iter().find(|v| !v.is_finite()) {
            return invalid(format!("normalized state has non-finite coordinate {v}"));
        }
        Ok(Self { z })
    }

    /// `(x - x*) / sigma`.
    pub fn from_state(state: &AlgorithmState, x_star: &[f64]) -> Result<Self> {
        let s = state.sigma();
        Self::new(state.x().iter().zip(x_star).map(|(x, r)| (x - r) / s).collect())
    }

    pub fn z(&self) -> &[f64] {
        &self.z
    }

    pub fn norm(&self) -> f64 {
        norm(&self.z)
    }

    pub fn dim(&self) -> usize {
        self.z.len()
    }
}

/// One transition of the normalized chain.
#[derive(Clone, Debug, PartialEq)]
pub struct StepOutcome {
    pub z_next: NormalizedState,
    /// `ln eta*(Y(z, u))`.
    pub log_eta: f64,
    pub ranked_block: SampleBlock,
}

pub(crate) fn norm(v: &[f64]) -> f64 {
    v.iter().map(|a| a * a).sum::<f64>().sqrt()
}

/// Advances `z` with the raw block `u`. Candidates are ranked on `f` relative to its
/// reference point, so `f` must be scaling-invariant with respect to `x*`.
pub fn normalized_step<A>(z: &NormalizedState, u: &SampleBlock, alg: &A, f: &Objective) -> Result<StepOutcome>
where
    A: SearchAlgorithm + ?Sized,
{
    if z.dim() != alg.dim() || f.dim() != alg.dim() {
        return invalid(format!(
            "dimension mismatch: z has {}, objective {}, {} works in {}",
            z.dim(),
            f.dim(),
            alg.name(),
            alg.dim()
        ));
    }
    let unit = AlgorithmState::new(z.z.clone(), 1.0)?;
    let ranked = rank_block(alg, &unit, u, &f.centered())?;
    let eta = alg.update_step_size(1.0, &ranked.block);
    if !(eta > 0.0 && eta.is_finite()) {
        return Err(CbsarsError::Invariant(format!("{} produced multiplier {eta}", alg.name())));
    }
    let mean = alg.update_mean(&unit, &ranked.block);
    let z_next = NormalizedState::new(mean.into_iter().map(|v| v / eta).collect())
        .map_err(|e| CbsarsError::Invariant(e.to_string()))?;
    Ok(StepOutcome { z_next, log_eta: eta.ln(), ranked_block: ranked.block })
}

/// `steps` transitions from `z0`, each with a fresh block from `rng`.
pub fn run_chain<A>(
    z0: &NormalizedState,
    alg: &A,
    f: &Objective,
    steps: usize,
    rng: &mut RngStream,
) -> Result<Vec<StepOutcome>>
where
    A: SearchAlgorithm + ?Sized,
{
    let mut out = Vec::with_capacity(steps);
    let mut z = z0.clone();
    for _ in 0..steps {
        let u = alg.sample(rng);
        let o = normalized_step(&z, &u, alg, f)?;
        z = o.z_next.clone();
        out.push(o);
    }
    Ok(out)
}

/// Like [`run_chain`] but keeps only `ln eta*` and `||Z_t||`, for long runs.
pub fn run_chain_log_etas<A>(
    z0: &NormalizedState,
    alg: &A,
    f: &Objective,
    steps: usize,
    rng: &mut RngStream,
) -> Result<(Vec<f64>, Vec<f64>)>
where
    A: SearchAlgorithm + ?Sized,
{
    let mut log_etas = Vec::with_capacity(steps);
    let mut z_norms = Vec::with_capacity(steps + 1);
    let mut z = z0.clone();
    z_norms.push(z.norm());
    for _ in 0..steps {
        let u = alg.sample(rng);
        let o = normalized_step(&z, &u, alg, f)?;
        log_etas.push(o.log_eta);
        z = o.z_next;
        z_norms.push(z.norm());
    }
    Ok((log_etas, z_norms))
}

/// Monte-Carlo estimate of `R(z) = E[ln eta*(Y(z, U))]`, returned as `(mean, stderr)`.
pub fn estimate_r_of_z<A>(
    z: &NormalizedState,
    alg: &A,
    f: &Objective,
    mc_samples: usize,
    rng: &mut RngStream,
) -> Result<(f64, f64)>
where
    A: SearchAlgorithm + ?Sized,
{
    if mc_samples == 0 {
        return invalid("mc_samples must be at least 1");
    }
    let mut mean = 0.0;
    let mut m2 = 0.0;
    for k in 1..=mc_samples {
        let u = alg.sample(rng);
        let v = normalized_step(z, &u, alg, f)?.log_eta;
        let delta = v - mean;
        mean += delta / k as f64;
        m2 += delta * (v - mean);
    }
    let stderr = if mc_samples > 1 {
        (m2 / (mc_samples - 1) as f64 / mc_samples as f64).sqrt()
    } else {
        0.0
    };
    Ok((mean, stderr))
}
