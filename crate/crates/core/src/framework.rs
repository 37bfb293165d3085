//! The abstract comparison-based step-size adaptive search.
//!
//! One iteration maps a state `(x, sigma)` and a raw sample block `u = (u^1, ..., u^p)` to
//! the next state through three stages:
//!
//! 1. candidates `x^i = Sol((x, sigma), u^i)`,
//! 2. the ranking `S = Ord(f(x^1), ..., f(x^p))`,
//! 3. the update `(x', sigma') = (G1((x, sigma), S*u), G2(sigma, S*u))`.
//!
//! The objective is only consulted through the ranking, and the step-size update never sees
//! `x`: [`SearchAlgorithm::update_step_size`] simply does not receive it.

use std::cmp::Ordering;

use crate::error::{invalid, CbsarsError, Result};
use crate::rng::RngStream;

/// Incumbent point and step-size.
#[derive(Clone, Debug, PartialEq)]
pub struct AlgorithmState {
    x: Vec<f64>,
    sigma: f64,
}

impl AlgorithmState {
    pub fn new(x: Vec<f64>, sigma: f64) -> Result<Self> {
        if !(sigma > 0.0 && sigma.is_finite()) {
            return invalid(format!("sigma must be positive and finite, got {sigma}"));
        }
        if x.is_empty() {
            return invalid("x must have at least one coordinate");
        }
        if let Some(v) = x.iter().find(|v| !v.is_finite()) {
            return invalid(format!("x has a non-finite coordinate {v}"));
        }
        Ok(Self { x, sigma })
    }

    pub fn x(&self) -> &[f64] {
        &self.x
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn dim(&self) -> usize {
        self.x.len()
    }

    pub fn into_parts(self) -> (Vec<f64>, f64) {
        (self.x, self.sigma)
    }
}

/// The `p` coordinates `u^1, ..., u^p` of one iteration's randomness, each in `R^m`.
///
/// Stored row-major in one buffer.
#[derive(Clone, Debug, PartialEq)]
pub struct SampleBlock {
    data: Vec<f64>,
    p: usize,
    m: usize,
}

impl SampleBlock {
    pub fn from_coords(coords: Vec<Vec<f64>>) -> Result<Self> {
        let p = coords.len();
        if p == 0 {
            return invalid("a sample block needs at least one coordinate");
        }
        let m = coords[0].len();
        if m == 0 {
            return invalid("sample coordinates must have positive dimension");
        }
        if coords.iter().any(|c| c.len() != m) {
            return invalid("all sample coordinates must share one dimension");
        }
        Ok(Self { data: coords.concat(), p, m })
    }

    /// Builds a block from a flat row-major buffer of `p * m` values.
    pub fn from_flat(data: Vec<f64>, p: usize, m: usize) -> Result<Self> {
        if p == 0 || m == 0 || data.len() != p * m {
            return invalid(format!(
                "flat buffer of length {} does not hold {p} coordinates of dimension {m}",
                data.len()
            ));
        }
        Ok(Self { data, p, m })
    }

    pub fn len(&self) -> usize {
        self.p
    }

    pub fn is_empty(&self) -> bool {
        self.p == 0
    }

    pub fn coord_dim(&self) -> usize {
        self.m
    }

    /// Coordinate `i`, zero-based.
    pub fn coord(&self, i: usize) -> &[f64] {
        &self.data[i * self.m..(i + 1) * self.m]
    }

    pub fn coords(&self) -> impl ExactSizeIterator<Item = &[f64]> + '_ {
        self.data.chunks_exact(self.m)
    }

    pub fn to_coords(&self) -> Vec<Vec<f64>> {
        self.coords().map(<[f64]>::to_vec).collect()
    }
}

/// A permutation `S` of `{0, ..., p-1}` with `indices[k] = S(k)`.
///
/// Indices are zero-based; [`RankingPermutation::one_based`] gives the usual 1..p form.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RankingPermutation {
    indices: Vec<usize>,
}

impl RankingPermutation {
    pub fn new(indices: Vec<usize>) -> Result<Self> {
        let p = indices.len();
        let mut seen = vec![false; p];
        for &i in &indices {
            if i >= p || seen[i] {
                return invalid(format!("{indices:?} is not a permutation of 0..{p}"));
            }
            seen[i] = true;
        }
        Ok(Self { indices })
    }

    pub fn identity(p: usize) -> Self {
        Self { indices: (0..p).collect() }
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn one_based(&self) -> Vec<usize> {
        self.indices.iter().map(|i| i + 1).collect()
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.indices.iter().enumerate().all(|(k, &i)| k == i)
    }
}

/// Which of two equal values is ranked first.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum TieBreak {
    /// Stable: the smaller original index wins.
    #[default]
    LowestIndex,
    /// The larger original index wins. Used by the (1+1)-ES so that a candidate equal to the
    /// incumbent counts as a failure.
    HighestIndex,
}

/// The ranking of `values` in ascending order, ties broken stably.
pub fn ord(values: &[f64]) -> Result<RankingPermutation> {
    ord_with(values, TieBreak::LowestIndex)
}

pub fn ord_with(values: &[f64], tie_break: TieBreak) -> Result<RankingPermutation> {
    if values.is_empty() {
        return invalid("cannot rank an empty list of values");
    }
    if let Some(v) = values.iter().find(|v| !v.is_finite()) {
        return invalid(format!("cannot rank non-finite value {v}"));
    }
    let mut indices: Vec<usize> = (0..values.len()).collect();
    // All values are finite, so partial_cmp never fails.
    indices.sort_by(|&a, &b| {
        let by_value = values[a].partial_cmp(&values[b]).unwrap_or(Ordering::Equal);
        match tie_break {
            TieBreak::LowestIndex => by_value.then(a.cmp(&b)),
            TieBreak::HighestIndex => by_value.then(b.cmp(&a)),
        }
    });
    Ok(RankingPermutation { indices })
}

/// `S * u = (u^{S(1)}, ..., u^{S(p)})`.
pub fn apply_permutation(s: &RankingPermutation, u: &SampleBlock) -> Result<SampleBlock> {
    if s.len() != u.len() {
        return invalid(format!(
            "permutation of size {} applied to a block of {} coordinates",
            s.len(),
            u.len()
        ));
    }
    let mut data = Vec::with_capacity(u.data.len());
    for &i in &s.indices {
        data.extend_from_slice(u.coord(i));
    }
    Ok(SampleBlock { data, p: u.p, m: u.m })
}

/// Anything that maps a point of `R^n` to a real value.
pub trait ObjectiveFn {
    fn value(&self, x: &[f64]) -> f64;
}

impl<F> ObjectiveFn for F
where
    F: Fn(&[f64]) -> f64,
{
    fn value(&self, x: &[f64]) -> f64 {
        self(x)
    }
}

/// A concrete instance of the framework: the quadruplet `(Sol, (G1, G2), U^p, p_U)`.
pub trait SearchAlgorithm {
    fn name(&self) -> &str;

    /// Search-space dimension `n`.
    fn dim(&self) -> usize;

    /// Number of sample coordinates `p` per iteration.
    fn population(&self) -> usize;

    /// Dimension `m` of one sample coordinate.
    fn coord_dim(&self) -> usize;

    fn tie_break(&self) -> TieBreak {
        TieBreak::LowestIndex
    }

    /// Objective evaluations charged per iteration.
    fn evals_per_iteration(&self) -> usize {
        self.population()
    }

    /// Draws one block from `p_U`.
    fn sample(&self, rng: &mut RngStream) -> SampleBlock;

    /// `Sol((x, sigma), u^i)`.
    fn solution(&self, state: &AlgorithmState, u: &[f64]) -> Vec<f64>;

    /// `G1((x, sigma), y)` for a ranked block `y`.
    fn update_mean(&self, state: &AlgorithmState, y: &SampleBlock) -> Vec<f64>;

    /// `G2(sigma, y)` for a ranked block `y`.
    fn update_step_size(&self, sigma: f64, y: &SampleBlock) -> f64;
}

/// Outcome of the ranking stage of one iteration.
#[derive(Clone, Debug, PartialEq)]
pub struct Ranked {
    pub permutation: RankingPermutation,
    pub block: SampleBlock,
    /// Objective values in sampling order.
    pub values: Vec<f64>,
}

/// Generates the candidates, evaluates them and returns `S` together with `S * u`.
pub fn rank_block<A, F>(alg: &A, state: &AlgorithmState, u: &SampleBlock, f: &F) -> Result<Ranked>
where
    A: SearchAlgorithm + ?Sized,
    F: ObjectiveFn + ?Sized,
{
    check_block(alg, u)?;
    if state.dim() != alg.dim() {
        return invalid(format!(
            "state has dimension {} but {} works in dimension {}",
            state.dim(),
            alg.name(),
            alg.dim()
        ));
    }
    let mut values = Vec::with_capacity(u.len());
    for ui in u.coords() {
        let candidate = alg.solution(state, ui);
        let value = f.value(&candidate);
        if !value.is_finite() {
            return Err(CbsarsError::Evaluation { point: candidate, value });
        }
        values.push(value);
    }
    let permutation = ord_with(&values, alg.tie_break())?;
    let block = apply_permutation(&permutation, u)?;
    Ok(Ranked { permutation, block, values })
}

/// Applies `G` to a ranked block.
pub fn update<A>(alg: &A, state: &AlgorithmState, y: &SampleBlock) -> Result<AlgorithmState>
where
    A: SearchAlgorithm + ?Sized,
{
    let x = alg.update_mean(state, y);
    let sigma = alg.update_step_size(state.sigma(), y);
    if !(sigma > 0.0) {
        return Err(CbsarsError::Invariant(format!(
            "{} produced step-size {sigma} from {}",
            alg.name(),
            state.sigma()
        )));
    }
    AlgorithmState::new(x, sigma).map_err(|e| CbsarsError::Invariant(e.to_string()))
}

/// One iteration `F^f((x, sigma), u) = G((x, sigma), Ord(f(Sol((x, sigma), u^i))) * u)`.
pub fn step<A, F>(alg: &A, state: &AlgorithmState, u: &SampleBlock, f: &F) -> Result<AlgorithmState>
where
    A: SearchAlgorithm + ?Sized,
    F: ObjectiveFn + ?Sized,
{
    let ranked = rank_block(alg, state, u, f)?;
    update(alg, state, &ranked.block)
}

fn check_block<A: SearchAlgorithm + ?Sized>(alg: &A, u: &SampleBlock) -> Result<()> {
    if u.len() != alg.population() || u.coord_dim() != alg.coord_dim() {
        return invalid(format!(
            "{} expects {} coordinates of dimension {}, got {} of dimension {}",
            alg.name(),
            alg.population(),
            alg.coord_dim(),
            u.len(),
            u.coord_dim()
        ));
    }
    Ok(())
}
