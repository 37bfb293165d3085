//! Concrete step-size adaptive evolution strategies.
//!
//! | name         | samples `U`              | step-size update                          |
//! |--------------|--------------------------|-------------------------------------------|
//! | `csa`        | `p` x `N(0, I_n)`        | path length of the recombined step        |
//! | `xnes`       | `p` x `N(0, I_n)`        | exponential natural-gradient update       |
//! | `sa`         | `p` x `N(0, I_{n+1})`    | log-normal self-adaptation                |
//! | `oneplusone` | `(N(0, I_n), 0)`         | generalized one-fifth success rule        |
//! | `constant`   | `(N(0, I_n), 0)`         | none (elitist random search with fixed step) |
//!
//! Every update here is translation invariant and scale invariant: `Sol` and `G1` commute
//! with shifts of `x`, and `Sol`, `G1`, `G2` are positively homogeneous in `(x, sigma)`.

use crate::error::{invalid, Result};
use crate::framework::{AlgorithmState, SampleBlock, SearchAlgorithm, TieBreak};
use crate::rng::RngStream;

/// Tolerance on the weight normalization and on `mu_w`.
const WEIGHT_TOL: f64 = 1e-12;

/// Parameters shared by the two weighted-recombination strategies.
#[derive(Clone, Debug, PartialEq)]
pub struct CommaEsParams {
    kappa_m: f64,
    kappa_sigma: f64,
    weights: Vec<f64>,
    mu_w: f64,
    chi_mean: f64,
}

impl CommaEsParams {
    /// `weights` must be non-increasing with `sum |w_i| = 1`.
    pub fn new(n: usize, kappa_m: f64, kappa_sigma: f64, weights: Vec<f64>) -> Result<Self> {
        if !(kappa_m > 0.0 && kappa_m.is_finite()) {
            return invalid(format!("kappa_m must be positive, got {kappa_m}"));
        }
        if !(kappa_sigma > 0.0 && kappa_sigma.is_finite()) {
            return invalid(format!("kappa_sigma must be positive, got {kappa_sigma}"));
        }
        if weights.is_empty() || weights.iter().any(|w| !w.is_finite()) {
            return invalid("weights must be a non-empty list of finite values");
        }
        if weights.windows(2).any(|w| w[0] < w[1]) {
            return invalid("weights must be sorted non-increasing");
        }
        let l1: f64 = weights.iter().map(|w| w.abs()).sum();
        if (l1 - 1.0).abs() > WEIGHT_TOL {
            return invalid(format!("sum of |w_i| must be 1, got {l1}"));
        }
        let mu_w = 1.0 / weights.iter().map(|w| w * w).sum::<f64>();
        Ok(Self { kappa_m, kappa_sigma, weights, mu_w, chi_mean: chi_mean(n)? })
    }

    /// `kappa_m = 1`, `kappa_sigma = 1` and [`default_weights`] for `p` candidates.
    pub fn defaults(n: usize, p: usize) -> Result<Self> {
        Self::new(n, 1.0, 1.0, default_weights(p)?)
    }

    pub fn kappa_m(&self) -> f64 {
        self.kappa_m
    }

    pub fn kappa_sigma(&self) -> f64 {
        self.kappa_sigma
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn mu_w(&self) -> f64 {
        self.mu_w
    }

    pub fn chi_mean(&self) -> f64 {
        self.chi_mean
    }

    pub fn population(&self) -> usize {
        self.weights.len()
    }
}

/// Self-adaptation parameters.
#[derive(Clone, Debug, PartialEq)]
pub struct SaParams {
    tau: f64,
    p: usize,
}

impl SaParams {
    /// `tau = 0` is accepted: it degenerates to a non-adaptive (1,p)-ES, which is handy in
    /// tests.
    pub fn new(tau: f64, p: usize) -> Result<Self> {
        if !(tau >= 0.0 && tau.is_finite()) {
            return invalid(format!("tau must be non-negative, got {tau}"));
        }
        if p == 0 {
            return invalid("p must be at least 1");
        }
        Ok(Self { tau, p })
    }

    /// `tau = 1/sqrt(n)`.
    pub fn defaults(n: usize, p: usize) -> Result<Self> {
        if n == 0 {
            return invalid("n must be at least 1");
        }
        Self::new(1.0 / (n as f64).sqrt(), p)
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn population(&self) -> usize {
        self.p
    }
}

/// Generalized one-fifth success rule: multiply by `gamma` on success and by
/// `gamma^(-1/q)` on failure.
#[derive(Clone, Debug, PartialEq)]
pub struct OnePlusOneParams {
    gamma: f64,
    q: f64,
    success: f64,
    failure: f64,
}

impl OnePlusOneParams {
    pub fn new(kappa_sigma: f64, p_target: f64) -> Result<Self> {
        if !(kappa_sigma > 0.0 && kappa_sigma.is_finite()) {
            return invalid(format!("kappa_sigma must be positive, got {kappa_sigma}"));
        }
        if !(p_target > 0.0 && p_target < 1.0) {
            return invalid(format!("p_target must lie in (0, 1), got {p_target}"));
        }
        Self::from_gamma_q(kappa_sigma.exp(), (1.0 - p_target) / p_target)
    }

    pub fn from_gamma_q(gamma: f64, q: f64) -> Result<Self> {
        if !(gamma > 1.0 && gamma.is_finite()) {
            return invalid(format!("gamma must exceed 1, got {gamma}"));
        }
        if !(q > 0.0 && q.is_finite()) {
            return invalid(format!("q must be positive, got {q}"));
        }
        Ok(Self { gamma, q, success: gamma, failure: gamma.powf(-1.0 / q) })
    }

    /// `kappa_sigma = 1/3`, `p_target = 1/5`.
    pub fn defaults() -> Self {
        Self::new(1.0 / 3.0, 0.2).expect("default parameters are valid")
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn success_factor(&self) -> f64 {
        self.success
    }

    pub fn failure_factor(&self) -> f64 {
        self.failure
    }
}

/// Which update rule a spec uses.
#[derive(Clone, Debug, PartialEq)]
pub enum AlgorithmKind {
    Csa(CommaEsParams),
    Xnes(CommaEsParams),
    SelfAdaptive(SaParams),
    OnePlusOne(OnePlusOneParams),
    /// (1+1) elitist selection with the step-size held fixed.
    ConstantStep,
}

/// A concrete algorithm in dimension `n`.
#[derive(Clone, Debug, PartialEq)]
pub struct AlgorithmSpec {
    n: usize,
    kind: AlgorithmKind,
}

/// Population size `4 + floor(3 ln n)`.
pub fn default_population(n: usize) -> usize {
    4 + (3.0 * (n.max(1) as f64).ln()).floor() as usize
}

impl AlgorithmSpec {
    pub fn new(n: usize, kind: AlgorithmKind) -> Result<Self> {
        if n == 0 {
            return invalid("dimension n must be at least 1");
        }
        Ok(Self { n, kind })
    }

    pub fn csa(n: usize) -> Result<Self> {
        Self::new(n, AlgorithmKind::Csa(CommaEsParams::defaults(n, default_population(n))?))
    }

    pub fn xnes(n: usize) -> Result<Self> {
        Self::new(n, AlgorithmKind::Xnes(CommaEsParams::defaults(n, default_population(n))?))
    }

    pub fn self_adaptive(n: usize) -> Result<Self> {
        Self::new(n, AlgorithmKind::SelfAdaptive(SaParams::defaults(n, default_population(n))?))
    }

    pub fn one_plus_one(n: usize) -> Result<Self> {
        Self::new(n, AlgorithmKind::OnePlusOne(OnePlusOneParams::defaults()))
    }

    pub fn constant_step(n: usize) -> Result<Self> {
        Self::new(n, AlgorithmKind::ConstantStep)
    }

    /// Default-parameter spec by registry name.
    pub fn by_name(name: &str, n: usize) -> Result<Self> {
        match name {
            "csa" => Self::csa(n),
            "xnes" => Self::xnes(n),
            "sa" => Self::self_adaptive(n),
            "oneplusone" => Self::one_plus_one(n),
            "constant" => Self::constant_step(n),
            other => invalid(format!("unknown algorithm {other:?}")),
        }
    }

    pub fn kind(&self) -> &AlgorithmKind {
        &self.kind
    }

    /// True when the step-size is adapted, i.e. everything but [`AlgorithmKind::ConstantStep`].
    pub fn is_adaptive(&self) -> bool {
        !matches!(self.kind, AlgorithmKind::ConstantStep)
    }
}

pub const ALGORITHM_NAMES: [&str; 5] = ["csa", "xnes", "sa", "oneplusone", "constant"];

impl SearchAlgorithm for AlgorithmSpec {
    fn name(&self) -> &str {
        match self.kind {
            AlgorithmKind::Csa(_) => "csa",
            AlgorithmKind::Xnes(_) => "xnes",
            AlgorithmKind::SelfAdaptive(_) => "sa",
            AlgorithmKind::OnePlusOne(_) => "oneplusone",
            AlgorithmKind::ConstantStep => "constant",
        }
    }

    fn dim(&self) -> usize {
        self.n
    }

    fn population(&self) -> usize {
        match &self.kind {
            AlgorithmKind::Csa(c) | AlgorithmKind::Xnes(c) => c.population(),
            AlgorithmKind::SelfAdaptive(s) => s.population(),
            AlgorithmKind::OnePlusOne(_) | AlgorithmKind::ConstantStep => 2,
        }
    }

    fn coord_dim(&self) -> usize {
        match self.kind {
            AlgorithmKind::SelfAdaptive(_) => self.n + 1,
            _ => self.n,
        }
    }

    fn tie_break(&self) -> TieBreak {
        match self.kind {
            AlgorithmKind::OnePlusOne(_) | AlgorithmKind::ConstantStep => TieBreak::HighestIndex,
            _ => TieBreak::LowestIndex,
        }
    }

    fn evals_per_iteration(&self) -> usize {
        match self.kind {
            // The second candidate is the incumbent itself, whose value is already known.
            AlgorithmKind::OnePlusOne(_) | AlgorithmKind::ConstantStep => 1,
            _ => self.population(),
        }
    }

    fn sample(&self, rng: &mut RngStream) -> SampleBlock {
        let p = self.population();
        let m = self.coord_dim();
        let data = match self.kind {
            AlgorithmKind::OnePlusOne(_) | AlgorithmKind::ConstantStep => {
                let mut d = rng.normal_vec(m);
                d.resize(2 * m, 0.0);
                d
            }
            _ => rng.normal_vec(p * m),
        };
        SampleBlock::from_flat(data, p, m).expect("block shape follows the spec")
    }

    fn solution(&self, state: &AlgorithmState, u: &[f64]) -> Vec<f64> {
        match &self.kind {
            AlgorithmKind::SelfAdaptive(s) => sol_sa(state, u, s),
            _ => sol_es(state, u),
        }
    }

    fn update_mean(&self, state: &AlgorithmState, y: &SampleBlock) -> Vec<f64> {
        match &self.kind {
            AlgorithmKind::Csa(c) | AlgorithmKind::Xnes(c) => comma_mean(state, y, c),
            AlgorithmKind::SelfAdaptive(s) => sol_sa(state, y.coord(0), s),
            AlgorithmKind::OnePlusOne(_) | AlgorithmKind::ConstantStep => sol_es(state, y.coord(0)),
        }
    }

    fn update_step_size(&self, sigma: f64, y: &SampleBlock) -> f64 {
        match &self.kind {
            AlgorithmKind::Csa(c) => csa_sigma(sigma, y, c),
            AlgorithmKind::Xnes(c) => xnes_sigma(sigma, y, c, self.n),
            AlgorithmKind::SelfAdaptive(s) => sigma * (s.tau * y.coord(0)[self.n]).exp(),
            AlgorithmKind::OnePlusOne(o) => one_plus_one_sigma(sigma, y, o),
            AlgorithmKind::ConstantStep => sigma,
        }
    }
}

/// `x + sigma * u`.
pub fn sol_es(state: &AlgorithmState, u: &[f64]) -> Vec<f64> {
    let sigma = state.sigma();
    state.x().iter().zip(u).map(|(x, u)| x + sigma * u).collect()
}

/// `x + sigma * exp(tau * u_{n+1}) * u_{1..n}`.
pub fn sol_sa(state: &AlgorithmState, u: &[f64], params: &SaParams) -> Vec<f64> {
    let n = state.dim();
    let scale = state.sigma() * (params.tau * u[n]).exp();
    state.x().iter().zip(&u[..n]).map(|(x, u)| x + scale * u).collect()
}

/// `sum_i w_i y^i`.
fn recombined_step(y: &SampleBlock, weights: &[f64]) -> Vec<f64> {
    let mut acc = vec![0.0; y.coord_dim()];
    for (w, yi) in weights.iter().zip(y.coords()) {
        if *w == 0.0 {
            continue;
        }
        for (a, v) in acc.iter_mut().zip(yi) {
            *a += w * v;
        }
    }
    acc
}

fn comma_mean(state: &AlgorithmState, y: &SampleBlock, params: &CommaEsParams) -> Vec<f64> {
    let step = recombined_step(y, &params.weights);
    let scale = params.kappa_m * state.sigma();
    state.x().iter().zip(&step).map(|(x, s)| x + scale * s).collect()
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|a| a * a).sum::<f64>().sqrt()
}

fn csa_sigma(sigma: f64, y: &SampleBlock, params: &CommaEsParams) -> f64 {
    let len = norm(&recombined_step(y, &params.weights));
    sigma * (params.kappa_sigma * (params.mu_w.sqrt() * len / params.chi_mean - 1.0)).exp()
}

fn xnes_sigma(sigma: f64, y: &SampleBlock, params: &CommaEsParams, n: usize) -> f64 {
    let nf = n as f64;
    let s: f64 = params
        .weights
        .iter()
        .zip(y.coords())
        .map(|(w, yi)| w * (yi.iter().map(|v| v * v).sum::<f64>() - nf))
        .sum();
    sigma * (params.kappa_sigma / (2.0 * nf) * s).exp()
}

fn one_plus_one_sigma(sigma: f64, y: &SampleBlock, params: &OnePlusOneParams) -> f64 {
    if is_success(y) {
        sigma * params.success
    } else {
        sigma * params.failure
    }
}

/// `1{y^1 != 0}`.
fn is_success(y: &SampleBlock) -> bool {
    y.coord(0).iter().any(|v| *v != 0.0)
}

/// Mean and step-size update of the weighted-recombination ES with path-length control
/// without cumulation.
pub fn g_comma_csa(state: &AlgorithmState, y: &SampleBlock, params: &CommaEsParams) -> (Vec<f64>, f64) {
    (comma_mean(state, y, params), csa_sigma(state.sigma(), y, params))
}

/// Mean and step-size update of xNES restricted to the step-size.
pub fn g_comma_xnes(state: &AlgorithmState, y: &SampleBlock, params: &CommaEsParams) -> (Vec<f64>, f64) {
    (comma_mean(state, y, params), xnes_sigma(state.sigma(), y, params, state.dim()))
}

/// (1,p) self-adaptation: only the best coordinate `y^1` is used.
pub fn g_sa(state: &AlgorithmState, y: &SampleBlock, params: &SaParams) -> (Vec<f64>, f64) {
    let n = state.dim();
    let factor = (params.tau * y.coord(0)[n]).exp();
    (sol_sa(state, y.coord(0), params), state.sigma() * factor)
}

/// (1+1)-ES with generalized one-fifth success rule on the ranked block
/// `(y^1, y^2)`, where `y^1` is either the sampled step or the zero vector.
pub fn g_oneplusone(
    state: &AlgorithmState,
    y: &SampleBlock,
    params: &OnePlusOneParams,
) -> (Vec<f64>, f64) {
    (sol_es(state, y.coord(0)), one_plus_one_sigma(state.sigma(), y, params))
}

/// Positive recombination weights `ln(p/2 + 1/2) - ln i` for `i <= floor(p/2)`, zero
/// beyond, normalized to unit sum.
pub fn default_weights(p: usize) -> Result<Vec<f64>> {
    if p < 2 {
        return invalid(format!("default weights need p >= 2, got {p}"));
    }
    let mu = p / 2;
    let top = (p as f64 / 2.0 + 0.5).ln();
    let raw: Vec<f64> = (1..=mu).map(|i| top - (i as f64).ln()).collect();
    let total: f64 = raw.iter().sum();
    let mut w: Vec<f64> = raw.into_iter().map(|r| r / total).collect();
    w.resize(p, 0.0);
    Ok(w)
}

/// `E ||N(0, I_n)|| = sqrt(2) Gamma((n+1)/2) / Gamma(n/2)`, evaluated through log-gamma.
pub fn chi_mean(n: usize) -> Result<f64> {
    if n == 0 {
        return invalid("chi_mean needs n >= 1");
    }
    let nf = n as f64;
    let log_ratio = libm::lgamma((nf + 1.0) / 2.0) - libm::lgamma(nf / 2.0);
    Ok(std::f64::consts::SQRT_2 * log_ratio.exp())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::framework::{step, SampleBlock};

    fn state(x: &[f64], sigma: f64) -> AlgorithmState {
        AlgorithmState::new(x.to_vec(), sigma).unwrap()
    }

    fn block(coords: &[Vec<f64>]) -> SampleBlock {
        SampleBlock::from_coords(coords.to_vec()).unwrap()
    }

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * b.abs().max(1.0)
    }

    #[test]
    fn sol_es_examples() {
        assert_eq!(sol_es(&state(&[0.0, 0.0, 0.0], 1.0), &[1.0, 0.0, 0.0]), vec![1.0, 0.0, 0.0]);
        assert_eq!(sol_es(&state(&[1.0, 1.0], 2.0), &[0.5, -0.5]), vec![2.0, 0.0]);
        assert_eq!(sol_es(&state(&[0.3, -7.0], 3.5), &[0.0, 0.0]), vec![0.3, -7.0]);
    }

    #[test]
    fn sol_sa_examples() {
        let s = state(&[0.5, -1.0], 0.7);
        let sa = SaParams::new(0.4, 3).unwrap();
        assert_eq!(sol_sa(&s, &[0.2, 0.3, 0.0], &sa), sol_es(&s, &[0.2, 0.3]));
        let frozen = SaParams::new(0.0, 3).unwrap();
        assert_eq!(sol_sa(&s, &[0.2, 0.3, 1.7], &frozen), sol_es(&s, &[0.2, 0.3]));
        let one = SaParams::new(1.0, 3).unwrap();
        let out = sol_sa(&state(&[0.0, 0.0, 0.0], 1.0), &[1.0, 0.0, 0.0, 2f64.ln()], &one);
        assert!(close(out[0], 2.0, 1e-15) && out[1] == 0.0 && out[2] == 0.0);
    }

    #[test]
    fn csa_neutral_length_keeps_sigma() {
        let n = 4;
        let params = CommaEsParams::new(n, 1.0, 0.7, vec![0.5, 0.5]).unwrap();
        // recombined step of norm chi/sqrt(mu_w) along e1
        let target = params.chi_mean() / params.mu_w().sqrt();
        let y = block(&[vec![target, 0.0, 0.0, 0.0], vec![target, 0.0, 0.0, 0.0]]);
        let (_, sigma) = g_comma_csa(&state(&[1.0; 4], 2.0), &y, &params);
        assert!(close(sigma, 2.0, 1e-14));
    }

    #[test]
    fn csa_zero_step() {
        let params = CommaEsParams::new(3, 1.0, 0.5, vec![0.5, 0.5]).unwrap();
        let y = block(&[vec![1.0, 2.0, 3.0], vec![-1.0, -2.0, -3.0]]);
        let s = state(&[1.0, 2.0, 3.0], 1.5);
        let (x, sigma) = g_comma_csa(&s, &y, &params);
        assert_eq!(x, s.x());
        assert!(close(sigma, 1.5 * (-0.5f64).exp(), 1e-15));
    }

    #[test]
    fn csa_double_length_multiplies_by_e() {
        let n = 10;
        let params = CommaEsParams::new(n, 1.0, 1.0, vec![1.0]).unwrap();
        let mut y1 = vec![0.0; n];
        y1[3] = 2.0 * params.chi_mean();
        let (_, sigma) = g_comma_csa(&state(&[0.0; 10], 1.0), &block(&[y1]), &params);
        assert!(close(sigma, std::f64::consts::E, 1e-14));
    }

    #[test]
    fn xnes_examples() {
        let n = 3;
        let params = CommaEsParams::new(n, 1.0, 1.0, vec![0.6, 0.4]).unwrap();
        let r = (n as f64).sqrt();
        let y = block(&[vec![r, 0.0, 0.0], vec![0.0, 0.0, -r]]);
        let (_, sigma) = g_comma_xnes(&state(&[0.0; 3], 0.25), &y, &params);
        assert!(close(sigma, 0.25, 1e-15));

        let single = CommaEsParams::new(n, 1.0, 1.0, vec![1.0]).unwrap();
        let big = (3.0 * n as f64).sqrt();
        let (_, sigma) = g_comma_xnes(&state(&[0.0; 3], 1.0), &block(&[vec![0.0, big, 0.0]]), &single);
        assert!(close(sigma, std::f64::consts::E, 1e-14));
    }

    #[test]
    fn comma_mean_update() {
        let params = CommaEsParams::new(2, 0.5, 1.0, vec![0.75, 0.25]).unwrap();
        let y = block(&[vec![1.0, 0.0], vec![0.0, 4.0]]);
        let (x, _) = g_comma_csa(&state(&[1.0, 1.0], 2.0), &y, &params);
        assert_eq!(x, vec![1.0 + 0.5 * 2.0 * 0.75, 1.0 + 0.5 * 2.0 * 1.0]);
    }

    #[test]
    fn sa_examples() {
        let sa = SaParams::new(0.5, 4).unwrap();
        let s = state(&[1.0, -2.0], 3.0);
        let (_, sigma) = g_sa(&s, &block(&[vec![0.3, 0.1, 0.0]]), &sa);
        assert_eq!(sigma, 3.0);

        let y = block(&[vec![0.3, 0.1, 2f64.ln() / 0.5]]);
        let (x, sigma) = g_sa(&s, &y, &sa);
        assert!(close(sigma, 6.0, 1e-15));
        for i in 0..2 {
            assert!(close((x[i] - s.x()[i]) / sigma, y.coord(0)[i], 1e-14));
        }
    }

    #[test]
    fn one_plus_one_branches() {
        let params = OnePlusOneParams::new(1.0 / 3.0, 0.2).unwrap();
        assert_eq!(params.q(), 4.0);
        assert!((params.success_factor() - 1.395_612_425_086_089_5).abs() < 1e-15);
        assert!((params.failure_factor() - 0.920_044_414_629_323_3).abs() < 1e-15);

        let s = state(&[1.0, 2.0], 0.5);
        let success = block(&[vec![0.1, -0.2], vec![0.0, 0.0]]);
        let (x, sigma) = g_oneplusone(&s, &success, &params);
        assert_eq!(x, vec![1.0 + 0.05, 2.0 - 0.1]);
        assert_eq!(sigma, 0.5 * params.success_factor());

        let failure = block(&[vec![0.0, 0.0], vec![0.1, -0.2]]);
        let (x, sigma) = g_oneplusone(&s, &failure, &params);
        assert_eq!(x, s.x());
        assert_eq!(sigma, 0.5 * params.failure_factor());
    }

    #[test]
    fn step_one_plus_one_failure_and_success() {
        let spec = AlgorithmSpec::one_plus_one(2).unwrap();
        let o = OnePlusOneParams::defaults();
        let sphere = |x: &[f64]| x.iter().map(|v| v * v).sum::<f64>();
        let s = state(&[1.0, 0.0], 1.0);

        let worse = block(&[vec![0.5, 0.0], vec![0.0, 0.0]]);
        let next = step(&spec, &s, &worse, &sphere).unwrap();
        assert_eq!(next.x(), s.x());
        assert_eq!(next.sigma(), o.failure_factor());

        let better = block(&[vec![-0.5, 0.0], vec![0.0, 0.0]]);
        let next = step(&spec, &s, &better, &sphere).unwrap();
        assert_eq!(next.x(), &[0.5, 0.0]);
        assert_eq!(next.sigma(), o.gamma());

        // equal value counts as failure
        let equal = block(&[vec![-2.0, 0.0], vec![0.0, 0.0]]);
        let next = step(&spec, &s, &equal, &sphere).unwrap();
        assert_eq!(next.x(), s.x());
    }

    #[test]
    fn step_csa_all_weight_on_first() {
        let n = 3;
        let params = CommaEsParams::new(n, 0.8, 1.0, vec![1.0, 0.0]).unwrap();
        let spec = AlgorithmSpec::new(n, AlgorithmKind::Csa(params)).unwrap();
        let s = state(&[2.0, 2.0, 2.0], 0.5);
        // first coordinate already the better candidate
        let u = block(&[vec![-1.0, -1.0, -1.0], vec![1.0, 1.0, 1.0]]);
        let sphere = |x: &[f64]| x.iter().map(|v| v * v).sum::<f64>();
        let next = step(&spec, &s, &u, &sphere).unwrap();
        assert_eq!(next.x(), &[2.0 - 0.8 * 0.5, 2.0 - 0.8 * 0.5, 2.0 - 0.8 * 0.5]);
    }

    #[test]
    fn step_reports_bad_objective() {
        let spec = AlgorithmSpec::csa(2).unwrap();
        let mut rng = RngStream::new(1);
        let u = spec.sample(&mut rng);
        let bad = |_: &[f64]| f64::NAN;
        let err = step(&spec, &state(&[0.0, 0.0], 1.0), &u, &bad).unwrap_err();
        assert!(matches!(err, crate::CbsarsError::Evaluation { .. }));
    }

    #[test]
    fn default_weights_values() {
        assert_eq!(default_weights(2).unwrap(), vec![1.0, 0.0]);
        // ln(5.5) - ln(i), i = 1..5, over their sum 3.7362487184100797
        let expected = [
            0.456_272_646_903_405_97,
            0.270_753_097_001_785_2,
            0.162_231_117_158_669_78,
            0.085_233_547_100_164_48,
            0.025_509_591_835_974_777,
            0.0,
            0.0,
            0.0,
            0.0,
            0.0,
        ];
        let w = default_weights(10).unwrap();
        for (a, b) in w.iter().zip(expected) {
            assert!((a - b).abs() < 1e-15, "{a} vs {b}");
        }
        assert!(default_weights(1).is_err());
        assert!(default_weights(0).is_err());
    }

    #[test]
    fn default_weights_normalized_and_sorted() {
        for p in 2..60 {
            let w = default_weights(p).unwrap();
            assert_eq!(w.len(), p);
            let l1: f64 = w.iter().map(|v| v.abs()).sum();
            assert!((l1 - 1.0).abs() < 1e-12);
            assert!(w.windows(2).all(|x| x[0] >= x[1]));
            assert!(CommaEsParams::new(5, 1.0, 1.0, w).is_ok());
        }
    }

    #[test]
    fn chi_mean_values() {
        // closed forms sqrt(2/pi), sqrt(pi/2); n = 10 from 30-digit gamma evaluation
        assert!((chi_mean(1).unwrap() - 0.797_884_560_802_865_4).abs() < 1e-14);
        assert!((chi_mean(2).unwrap() - 1.253_314_137_315_500_3).abs() < 1e-14);
        assert!((chi_mean(10).unwrap() - 3.084_327_759_799_863_9).abs() < 1e-13);
        assert!(chi_mean(0).is_err());
    }

    #[test]
    fn params_validation() {
        assert!(CommaEsParams::new(2, 1.0, 1.0, vec![0.4, 0.6]).is_err());
        assert!(CommaEsParams::new(2, 1.0, 1.0, vec![0.6, 0.3]).is_err());
        assert!(CommaEsParams::new(2, 0.0, 1.0, vec![1.0]).is_err());
        assert!(CommaEsParams::new(2, 1.0, -1.0, vec![1.0]).is_err());
        // negative weights are allowed when |w| sums to one
        assert!(CommaEsParams::new(2, 1.0, 1.0, vec![0.5, 0.25, -0.25]).is_ok());
        assert!(OnePlusOneParams::from_gamma_q(1.0, 4.0).is_err());
        assert!(OnePlusOneParams::from_gamma_q(2.0, 0.0).is_err());
        assert!(OnePlusOneParams::new(1.0, 1.0).is_err());
        assert!(SaParams::new(-0.1, 3).is_err());
        assert!(AlgorithmSpec::by_name("cmaes", 3).is_err());
    }

    #[test]
    fn population_sizes() {
        assert_eq!(default_population(10), 10);
        assert_eq!(default_population(2), 6);
        assert_eq!(default_population(1), 4);
        for name in ALGORITHM_NAMES {
            let spec = AlgorithmSpec::by_name(name, 10).unwrap();
            assert_eq!(spec.name(), name);
            let u = spec.sample(&mut RngStream::new(9));
            assert_eq!(u.len(), spec.population());
            assert_eq!(u.coord_dim(), spec.coord_dim());
        }
        assert_eq!(AlgorithmSpec::self_adaptive(10).unwrap().coord_dim(), 11);
    }
}
