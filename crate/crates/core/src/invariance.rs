//! Paired runs that check invariance to monotone transformations, translations and scalings.
//!
//! Both runs of a pair consume the same sequence of sample blocks. Run A optimizes `f` from
//! `(X_0, sigma_0)`; run B optimizes the transformed problem from the transformed initial
//! state, and the two state sequences are compared through the corresponding morphism.

use crate::chain::norm;
use crate::error::{invalid, Result};
use crate::framework::{rank_block, update, AlgorithmState, ObjectiveFn, SearchAlgorithm};
use crate::objectives::{Objective, Transform};
use crate::rng::RngStream;

pub const DEFAULT_TOLERANCE: f64 = 1e-9;

/// Initial state, stream and length shared by both runs of a pair.
#[derive(Clone, Debug, PartialEq)]
pub struct PairedRunSetup {
    pub state0: AlgorithmState,
    pub seed: u64,
    pub horizon: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub enum PairedVerdict {
    Pass,
    /// First iteration whose deviation exceeds the tolerance, with both states there.
    FailAt { t: usize, state_a: AlgorithmState, state_b: AlgorithmState },
}

#[derive(Clone, Debug, PartialEq)]
pub struct PairedRunReport {
    /// Largest relative deviation of the mapped means.
    pub max_x_deviation: f64,
    pub max_sigma_deviation: f64,
    pub horizon: usize,
    /// Zero means bit-exact comparison.
    pub tolerance: f64,
    pub verdict: PairedVerdict,
}

impl PairedRunReport {
    pub fn passed(&self) -> bool {
        self.verdict == PairedVerdict::Pass
    }
}

fn run_pair<A, FA, FB, M>(
    alg: &A,
    setup: &PairedRunSetup,
    state_b0: AlgorithmState,
    fa: &FA,
    fb: &FB,
    tolerance: f64,
    deviation: M,
) -> Result<PairedRunReport>
where
    A: SearchAlgorithm + ?Sized,
    FA: ObjectiveFn + ?Sized,
    FB: ObjectiveFn + ?Sized,
    M: Fn(&AlgorithmState, &AlgorithmState) -> (f64, f64),
{
    let mut rng = RngStream::new(setup.seed);
    let mut a = setup.state0.clone();
    let mut b = state_b0;
    let mut max_x: f64 = 0.0;
    let mut max_s: f64 = 0.0;
    let mut verdict = PairedVerdict::Pass;
    let mut note = |t: usize, a: &AlgorithmState, b: &AlgorithmState, verdict: &mut PairedVerdict| {
        let (dx, ds) = deviation(a, b);
        max_x = max_x.max(dx);
        max_s = max_s.max(ds);
        let within = if tolerance == 0.0 { dx == 0.0 && ds == 0.0 } else { dx <= tolerance && ds <= tolerance };
        if !within && *verdict == PairedVerdict::Pass {
            *verdict = PairedVerdict::FailAt { t, state_a: a.clone(), state_b: b.clone() };
        }
    };
    note(0, &a, &b, &mut verdict);
    for t in 1..=setup.horizon {
        let u = alg.sample(&mut rng);
        let ra = rank_block(alg, &a, &u, fa)?;
        let rb = rank_block(alg, &b, &u, fb)?;
        a = update(alg, &a, &ra.block)?;
        b = update(alg, &b, &rb.block)?;
        note(t, &a, &b, &mut verdict);
    }
    Ok(PairedRunReport { max_x_deviation: max_x, max_sigma_deviation: max_s, horizon: setup.horizon, tolerance, verdict })
}

fn rel(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / b.abs()
    }
}

fn rel_vec(a: &[f64], b: &[f64]) -> f64 {
    let d: Vec<f64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
    let dn = norm(&d);
    if dn == 0.0 {
        0.0
    } else {
        dn / norm(b)
    }
}

/// Runs on `f` and on `g o f`. Orderings are integer data, so the state sequences must be
/// identical; any difference fails.
pub fn test_monotone_invariance<A>(alg: &A, f: &Objective, g: &Transform, setup: &PairedRunSetup) -> Result<PairedRunReport>
where
    A: SearchAlgorithm + ?Sized,
{
    let gf = |x: &[f64]| g.apply(f.eval(x));
    run_pair(alg, setup, setup.state0.clone(), f, &gf, 0.0, |a, b| {
        let dx = if a.x() == b.x() { 0.0 } else { rel_vec(b.x(), a.x()).max(f64::MIN_POSITIVE) };
        let ds = if a.sigma() == b.sigma() { 0.0 } else { rel(b.sigma(), a.sigma()).max(f64::MIN_POSITIVE) };
        (dx, ds)
    })
}

/// Runs on `f` from `(X_0, sigma_0)` and on `x -> f(x - x0)` from `(X_0 + x0, sigma_0)`.
/// Checks `X^B = X^A + x0` relative to `||X^A + x0||` and `sigma^B = sigma^A`.
pub fn test_translation_invariance<A>(
    alg: &A,
    f: &Objective,
    x0: &[f64],
    setup: &PairedRunSetup,
    tolerance: f64,
) -> Result<PairedRunReport>
where
    A: SearchAlgorithm + ?Sized,
{
    if x0.len() != setup.state0.dim() {
        return invalid(format!("offset has dimension {}, state has {}", x0.len(), setup.state0.dim()));
    }
    if !(tolerance >= 0.0) {
        return invalid(format!("tolerance must be non-negative, got {tolerance}"));
    }
    let shift = |x: &[f64]| x.iter().zip(x0).map(|(a, b)| a + b).collect::<Vec<_>>();
    let fb = |x: &[f64]| f.eval(&x.iter().zip(x0).map(|(a, b)| a - b).collect::<Vec<_>>());
    let b0 = AlgorithmState::new(shift(setup.state0.x()), setup.state0.sigma())?;
    run_pair(alg, setup, b0, f, &fb, tolerance, |a, b| {
        (rel_vec(b.x(), &shift(a.x())), rel(b.sigma(), a.sigma()))
    })
}

/// True when `alpha` is an exact power of two, so that scaling by it is exact.
pub fn is_power_of_two(alpha: f64) -> bool {
    alpha > 0.0 && alpha.is_normal() && {
        let bits = alpha.to_bits();
        bits & ((1u64 << 52) - 1) == 0
    }
}

/// Runs on `f` from `(X_0, sigma_0)` and on `x -> f(alpha x)` from `(X_0 / alpha, sigma_0 / alpha)`.
/// Exact when `alpha` is a power of two, otherwise [`DEFAULT_TOLERANCE`] relative.
pub fn test_scale_invariance<A>(alg: &A, f: &Objective, alpha: f64, setup: &PairedRunSetup) -> Result<PairedRunReport>
where
    A: SearchAlgorithm + ?Sized,
{
    if !(alpha > 0.0 && alpha.is_finite()) {
        return invalid(format!("alpha must be positive, got {alpha}"));
    }
    let tolerance = if is_power_of_two(alpha) { 0.0 } else { DEFAULT_TOLERANCE };
    let fb = |x: &[f64]| f.eval(&x.iter().map(|v| alpha * v).collect::<Vec<_>>());
    let scaled = |s: &AlgorithmState| -> (Vec<f64>, f64) {
        (s.x().iter().map(|v| v / alpha).collect(), s.sigma() / alpha)
    };
    let (bx, bs) = scaled(&setup.state0);
    let b0 = AlgorithmState::new(bx, bs)?;
    run_pair(alg, setup, b0, f, &fb, tolerance, |a, b| {
        let (ax, as_) = scaled(a);
        (rel_vec(b.x(), &ax), rel(b.sigma(), as_))
    })
}
