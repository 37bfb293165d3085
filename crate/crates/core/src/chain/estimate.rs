use super::StepOutcome;
use crate::error::{invalid, CbsarsError, Result};

const Z_95: f64 = 1.96;
const MIN_BATCHES: usize = 10;

/// Ergodic-average estimate of the convergence rate.
///
/// Positive `cr` means the step-size decreases geometrically.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CrEstimate {
    pub cr: f64,
    /// Half-width of the 95% confidence interval from batch means.
    pub half_width: f64,
    /// Total number of steps, including burn-in.
    pub samples: usize,
    pub burn_in: usize,
}

impl CrEstimate {
    pub fn lower(&self) -> f64 {
        self.cr - self.half_width
    }

    pub fn upper(&self) -> f64 {
        self.cr + self.half_width
    }

    /// True when `|self.cr - other.cr|` is within the sum of both half-widths.
    pub fn agrees_with(&self, other: &CrEstimate) -> bool {
        (self.cr - other.cr).abs() <= self.half_width + other.half_width
    }
}

/// The first 20% of `len`, capped at 10^4.
pub fn default_burn_in(len: usize) -> usize {
    (len / 5).min(10_000)
}

pub fn estimate_cr(outcomes: &[StepOutcome], burn_in: usize) -> Result<CrEstimate> {
    let log_etas: Vec<f64> = outcomes.iter().map(|o| o.log_eta).collect();
    estimate_cr_from_log_etas(&log_etas, burn_in)
}

/// `cr = -mean(ln eta*)` after burn-in, with a batch-means interval over `ceil(sqrt(N))`
/// batches of `floor(N / batches)` consecutive steps.
pub fn estimate_cr_from_log_etas(log_etas: &[f64], burn_in: usize) -> Result<CrEstimate> {
    if burn_in >= log_etas.len() {
        return invalid(format!(
            "burn-in {burn_in} leaves nothing of {} samples",
            log_etas.len()
        ));
    }
    let kept = &log_etas[burn_in..];
    let (mean, half_width) = batch_means(kept)?;
    Ok(CrEstimate { cr: -mean, half_width, samples: log_etas.len(), burn_in })
}

/// Mean of `values` and the 95% half-width of the batch-means interval.
pub(crate) fn batch_means(values: &[f64]) -> Result<(f64, f64)> {
    let n = values.len();
    let batches = (n as f64).sqrt().ceil() as usize;
    if batches < MIN_BATCHES {
        return Err(CbsarsError::InsufficientData(format!(
            "{n} samples give {batches} batches, need at least {MIN_BATCHES}"
        )));
    }
    let size = n / batches;
    let mean = values.iter().sum::<f64>() / n as f64;
    let means: Vec<f64> = values
        .chunks_exact(size)
        .take(batches)
        .map(|c| c.iter().sum::<f64>() / size as f64)
        .collect();
    let bm = means.iter().sum::<f64>() / batches as f64;
    let var = means.iter().map(|m| (m - bm).powi(2)).sum::<f64>() / (batches - 1) as f64;
    Ok((mean, Z_95 * (var / batches as f64).sqrt()))
}

/// Least-squares slope of `ys` against `0, 1, 2, ...`.
pub fn regression_slope(ys: &[f64]) -> f64 {
    let n = ys.len() as f64;
    let mean_t = (n - 1.0) / 2.0;
    let mean_y = ys.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for (t, y) in ys.iter().enumerate() {
        let dt = t as f64 - mean_t;
        sxy += dt * (y - mean_y);
        sxx += dt * dt;
    }
    sxy / sxx
}

/// Least-squares slope of a random-walk-like series (such as `ln sigma_t`) and its 95%
/// half-width.
///
/// The OLS slope of a random walk has variance `6/5` times that of its mean increment, whose
/// variance comes from batch means over the increments.
pub fn batched_slope(ys: &[f64]) -> Result<(f64, f64)> {
    if ys.len() < 2 {
        return invalid("slope needs at least two points");
    }
    let increments: Vec<f64> = ys.windows(2).map(|w| w[1] - w[0]).collect();
    let (_, hw) = batch_means(&increments)?;
    Ok((regression_slope(ys), (1.2f64).sqrt() * hw))
}
