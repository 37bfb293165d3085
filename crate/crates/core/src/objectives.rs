//! Scaling-invariant objective functions and randomized checks of their defining properties.
//!
//! An objective evaluates `f(x - x*)` for a base form `f` and a reference point `x*`. All
//! base forms in the catalog are positively homogeneous, hence scaling-invariant with respect
//! to `x*`, and stay scaling-invariant under composition with strictly increasing maps.

use std::fmt;
use std::sync::Arc;

use crate::error::{invalid, Result};
use crate::framework::ObjectiveFn;
use crate::rng::RngStream;

/// A strictly increasing map `g` used to build composites `g(f(x))`.
#[derive(Clone)]
pub enum Transform {
    Identity,
    /// `sign(u) |u|^(1/4)`, i.e. `u^(1/4)` extended oddly to negative values.
    QuarterRoot,
    Arctan,
    /// `u + c`. Preserves orderings but not homogeneity.
    Shift(f64),
    Custom { label: String, map: Arc<dyn Fn(f64) -> f64 + Send + Sync> },
}

impl Transform {
    pub fn apply(&self, u: f64) -> f64 {
        match self {
            Transform::Identity => u,
            Transform::QuarterRoot => u.signum() * u.abs().sqrt().sqrt(),
            Transform::Arctan => u.atan(),
            Transform::Shift(c) => u + c,
            Transform::Custom { map, .. } => map(u),
        }
    }

    pub fn label(&self) -> String {
        match self {
            Transform::Identity => "id".into(),
            Transform::QuarterRoot => "g^{1/4}".into(),
            Transform::Arctan => "arctan".into(),
            Transform::Shift(c) => format!("shift{c}"),
            Transform::Custom { label, .. } => label.clone(),
        }
    }
}

impl fmt::Debug for Transform {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

/// `d^T H d` with `H` symmetric positive definite.
#[derive(Clone, Debug, PartialEq)]
pub enum QuadraticForm {
    Diagonal(Vec<f64>),
    Dense { n: usize, h: Vec<f64> },
}

impl QuadraticForm {
    pub fn diagonal(eigenvalues: Vec<f64>) -> Result<Self> {
        if eigenvalues.is_empty() || eigenvalues.iter().any(|l| !(*l > 0.0 && l.is_finite())) {
            return invalid("diagonal quadratic needs positive finite eigenvalues");
        }
        Ok(QuadraticForm::Diagonal(eigenvalues))
    }

    /// Row-major `n x n` matrix; rejected unless symmetric and positive definite.
    pub fn dense(n: usize, h: Vec<f64>) -> Result<Self> {
        if n == 0 || h.len() != n * n {
            return invalid(format!("matrix buffer of length {} is not {n}x{n}", h.len()));
        }
        for i in 0..n {
            for j in 0..i {
                if h[i * n + j] != h[j * n + i] {
                    return invalid("quadratic form matrix is not symmetric");
                }
            }
        }
        if !cholesky_ok(n, &h) {
            return invalid("quadratic form matrix is not positive definite");
        }
        Ok(QuadraticForm::Dense { n, h })
    }

    /// Ellipsoid with eigenvalues `cond^((i-1)/(n-1))`.
    pub fn ellipsoid(n: usize, cond: f64) -> Result<Self> {
        if !(cond >= 1.0 && cond.is_finite()) {
            return invalid(format!("condition number must be >= 1, got {cond}"));
        }
        if n == 0 {
            return invalid("ellipsoid needs n >= 1");
        }
        let eig = (0..n)
            .map(|i| if n == 1 { 1.0 } else { cond.powf(i as f64 / (n - 1) as f64) })
            .collect();
        Self::diagonal(eig)
    }

    pub fn dim(&self) -> usize {
        match self {
            QuadraticForm::Diagonal(l) => l.len(),
            QuadraticForm::Dense { n, .. } => *n,
        }
    }

    fn eval(&self, d: &[f64]) -> f64 {
        match self {
            QuadraticForm::Diagonal(l) => l.iter().zip(d).map(|(l, v)| l * v * v).sum(),
            QuadraticForm::Dense { n, h } => (0..*n)
                .map(|i| d[i] * (0..*n).map(|j| h[i * n + j] * d[j]).sum::<f64>())
                .sum(),
        }
    }
}

fn cholesky_ok(n: usize, h: &[f64]) -> bool {
    let mut l = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..=i {
            let s: f64 = (0..j).map(|k| l[i * n + k] * l[j * n + k]).sum();
            if i == j {
                let d = h[i * n + i] - s;
                if !(d > 0.0) {
                    return false;
                }
                l[i * n + i] = d.sqrt();
            } else {
                l[i * n + j] = (h[i * n + j] - s) / l[j * n + j];
            }
        }
    }
    true
}

/// Base form of an objective, evaluated on `d = x - x*`.
#[derive(Clone)]
pub enum ObjectiveKind {
    /// `||d||^2`
    Sphere,
    Quadratic(QuadraticForm),
    /// `(sum |d_i|^p)^(1/p)`
    PNorm(f64),
    /// `d_1`
    Linear,
    Composite(Transform, Box<ObjectiveKind>),
    Custom { label: String, eval: Arc<dyn Fn(&[f64]) -> f64 + Send + Sync> },
}

impl ObjectiveKind {
    fn eval(&self, d: &[f64]) -> f64 {
        match self {
            ObjectiveKind::Sphere => d.iter().map(|v| v * v).sum(),
            ObjectiveKind::Quadratic(q) => q.eval(d),
            ObjectiveKind::PNorm(p) => {
                if *p == 1.0 {
                    d.iter().map(|v| v.abs()).sum()
                } else if *p == 2.0 {
                    d.iter().map(|v| v * v).sum::<f64>().sqrt()
                } else {
                    d.iter().map(|v| v.abs().powf(*p)).sum::<f64>().powf(1.0 / p)
                }
            }
            ObjectiveKind::Linear => d[0],
            ObjectiveKind::Composite(g, base) => g.apply(base.eval(d)),
            ObjectiveKind::Custom { eval, .. } => eval(d),
        }
    }

    pub fn label(&self) -> String {
        match self {
            ObjectiveKind::Sphere => "sphere".into(),
            ObjectiveKind::Quadratic(QuadraticForm::Diagonal(l)) => {
                let spectrum: Vec<String> = l.iter().map(|v| v.to_string()).collect();
                format!("quad:{}", spectrum.join(","))
            }
            ObjectiveKind::Quadratic(QuadraticForm::Dense { n, .. }) => format!("quad:dense{n}"),
            ObjectiveKind::PNorm(p) => format!("pnorm:{p}"),
            ObjectiveKind::Linear => "linear".into(),
            ObjectiveKind::Composite(g, base) => format!("{}∘{}", g.label(), base.label()),
            ObjectiveKind::Custom { label, .. } => label.clone(),
        }
    }
}

impl fmt::Debug for ObjectiveKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

/// `x -> f(x - x*)`.
#[derive(Clone, Debug)]
pub struct Objective {
    kind: ObjectiveKind,
    x_star: Vec<f64>,
    label: String,
}

impl Objective {
    pub fn new(kind: ObjectiveKind, x_star: Vec<f64>) -> Result<Self> {
        if x_star.is_empty() || x_star.iter().any(|v| !v.is_finite()) {
            return invalid("reference point must be a non-empty finite vector");
        }
        check_kind(&kind, x_star.len())?;
        let label = kind.label();
        Ok(Self { kind, x_star, label })
    }

    pub fn sphere(n: usize) -> Self {
        Self::new(ObjectiveKind::Sphere, vec![0.0; n.max(1)]).expect("sphere is valid")
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    /// `g o f` with the same reference point.
    pub fn compose(&self, g: Transform) -> Self {
        let kind = ObjectiveKind::Composite(g, Box::new(self.kind.clone()));
        let label = kind.label();
        Self { kind, x_star: self.x_star.clone(), label }
    }

    /// Catalog lookup: `sphere`, `linear`, `pnorm:<p>`, `quad:<cond>` (ellipsoid) or
    /// `quad:<l1>,<l2>,...` (explicit diagonal), optionally prefixed with `g^{1/4}∘` or
    /// `arctan∘` (`quarter@` and `arctan@` are ASCII spellings).
    pub fn from_name(name: &str, n: usize) -> Result<Self> {
        let kind = parse_kind(name.trim(), n)?;
        Ok(Self::new(kind, vec![0.0; n])?.with_label(name.trim()))
    }

    pub fn kind(&self) -> &ObjectiveKind {
        &self.kind
    }

    pub fn x_star(&self) -> &[f64] {
        &self.x_star
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn dim(&self) -> usize {
        self.x_star.len()
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        let d: Vec<f64> = x.iter().zip(&self.x_star).map(|(x, s)| x - s).collect();
        self.kind.eval(&d)
    }

    /// The base form evaluated directly on offsets `d = x - x*`.
    pub fn eval_centered(&self, d: &[f64]) -> f64 {
        self.kind.eval(d)
    }

    /// View that evaluates offsets from the reference point.
    pub fn centered(&self) -> Centered<'_> {
        Centered(self)
    }
}

impl ObjectiveFn for Objective {
    fn value(&self, x: &[f64]) -> f64 {
        self.eval(x)
    }
}

/// See [`Objective::centered`].
#[derive(Clone, Copy, Debug)]
pub struct Centered<'a>(&'a Objective);

impl ObjectiveFn for Centered<'_> {
    fn value(&self, d: &[f64]) -> f64 {
        self.0.eval_centered(d)
    }
}

fn check_kind(kind: &ObjectiveKind, n: usize) -> Result<()> {
    match kind {
        ObjectiveKind::Quadratic(q) if q.dim() != n => {
            invalid(format!("quadratic form has dimension {} but x* has {n}", q.dim()))
        }
        ObjectiveKind::PNorm(p) if !(*p > 0.0 && p.is_finite()) => {
            invalid(format!("p-norm exponent must be positive, got {p}"))
        }
        ObjectiveKind::Composite(_, base) => check_kind(base, n),
        _ => Ok(()),
    }
}

fn parse_kind(name: &str, n: usize) -> Result<ObjectiveKind> {
    for (prefix, g) in [
        ("g^{1/4}∘", Transform::QuarterRoot),
        ("quarter@", Transform::QuarterRoot),
        ("arctan∘", Transform::Arctan),
        ("arctan@", Transform::Arctan),
    ] {
        if let Some(rest) = name.strip_prefix(prefix) {
            return Ok(ObjectiveKind::Composite(g, Box::new(parse_kind(rest, n)?)));
        }
    }
    if name == "sphere" {
        return Ok(ObjectiveKind::Sphere);
    }
    if name == "linear" {
        return Ok(ObjectiveKind::Linear);
    }
    if let Some(p) = name.strip_prefix("pnorm:") {
        let p: f64 = p.parse().map_err(|_| bad_name(name))?;
        return Ok(ObjectiveKind::PNorm(p));
    }
    if let Some(spec) = name.strip_prefix("quad:") {
        let values: Vec<f64> = spec
            .split(',')
            .map(|s| s.trim().parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| bad_name(name))?;
        let form = if values.len() == 1 && n != 1 {
            QuadraticForm::ellipsoid(n, values[0])?
        } else if values.len() == n {
            QuadraticForm::diagonal(values)?
        } else {
            return invalid(format!("{name}: spectrum has {} entries, expected 1 or {n}", values.len()));
        };
        return Ok(ObjectiveKind::Quadratic(form));
    }
    Err(bad_name(name))
}

fn bad_name(name: &str) -> crate::CbsarsError {
    crate::CbsarsError::InvalidInput(format!("unknown objective {name:?}"))
}

/// Outcome of a randomized property check.
#[derive(Clone, Debug, PartialEq)]
pub enum Verdict {
    /// No violation found in the sampled trials. Not a proof.
    Consistent,
    Refuted,
}

/// A triple violating scaling invariance: the order of `f(x)` and `f(y)` differs from the
/// order of the points scaled by `rho` about the reference point.
#[derive(Clone, Debug, PartialEq)]
pub struct Witness {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub rho: f64,
}

impl Witness {
    /// Re-evaluates the triple; true when it still violates the property.
    pub fn reproduces(&self, f: &Objective) -> bool {
        let dx = offsets(&self.x, f.x_star());
        let dy = offsets(&self.y, f.x_star());
        order_flips(f, &dx, &dy, self.rho)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct InvarianceReport {
    pub verdict: Verdict,
    pub witness: Option<Witness>,
    /// Trials actually run (stops at the first violation).
    pub trials: usize,
}

impl InvarianceReport {
    pub fn is_consistent(&self) -> bool {
        self.verdict == Verdict::Consistent
    }
}

/// `{2^k : k = -4..4}`.
pub fn default_rho_grid() -> Vec<f64> {
    (-4..=4).map(|k| 2f64.powi(k)).collect()
}

fn offsets(x: &[f64], x_star: &[f64]) -> Vec<f64> {
    x.iter().zip(x_star).map(|(a, b)| a - b).collect()
}

fn scaled(d: &[f64], rho: f64) -> Vec<f64> {
    d.iter().map(|v| rho * v).collect()
}

fn order_flips(f: &Objective, dx: &[f64], dy: &[f64], rho: f64) -> bool {
    let fx = f.eval_centered(dx);
    let fy = f.eval_centered(dy);
    let sx = f.eval_centered(&scaled(dx, rho));
    let sy = f.eval_centered(&scaled(dy, rho));
    (sx <= sy) != (fx <= fy) || (sy <= sx) != (fy <= fx)
}

/// Samples pairs `x, y ~ N(x*, I)` and checks, for every `rho` in the grid, that scaling
/// both about `x*` preserves their order. Stops at the first violation.
pub fn check_scaling_invariance(
    f: &Objective,
    trials: usize,
    rho_grid: &[f64],
    rng: &mut RngStream,
) -> Result<InvarianceReport> {
    if trials == 0 {
        return invalid("trials must be at least 1");
    }
    if rho_grid.is_empty() || rho_grid.iter().any(|r| !(*r > 0.0 && r.is_finite())) {
        return invalid("rho grid must be a non-empty list of positive values");
    }
    let n = f.dim();
    for trial in 1..=trials {
        let x: Vec<f64> = f.x_star().iter().map(|s| s + rng.normal()).collect();
        let y: Vec<f64> = f.x_star().iter().map(|s| s + rng.normal()).collect();
        debug_assert_eq!(x.len(), n);
        let dx = offsets(&x, f.x_star());
        let dy = offsets(&y, f.x_star());
        for &rho in rho_grid {
            if order_flips(f, &dx, &dy, rho) {
                return Ok(InvarianceReport {
                    verdict: Verdict::Refuted,
                    witness: Some(Witness { x, y, rho }),
                    trials: trial,
                });
            }
        }
    }
    Ok(InvarianceReport { verdict: Verdict::Consistent, witness: None, trials })
}

/// A point `x` and scale `rho` where `f(x* + rho d) != rho^alpha f(x* + d)`.
#[derive(Clone, Debug, PartialEq)]
pub struct HomogeneityWitness {
    pub x: Vec<f64>,
    pub rho: f64,
    pub lhs: f64,
    pub rhs: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct HomogeneityReport {
    pub verdict: Verdict,
    pub witness: Option<HomogeneityWitness>,
    pub trials: usize,
}

impl HomogeneityReport {
    pub fn is_consistent(&self) -> bool {
        self.verdict == Verdict::Consistent
    }
}

const HOMOGENEITY_TOL: f64 = 1e-9;

/// Checks `f(rho d) = rho^alpha f(d)` within `1e-9` relative on random offsets `d ~ N(0, I)`
/// and scales `rho = 2^s`, `s ~ U(-4, 4)`.
pub fn check_positive_homogeneity(
    f: &Objective,
    alpha: f64,
    trials: usize,
    rng: &mut RngStream,
) -> Result<HomogeneityReport> {
    if trials == 0 {
        return invalid("trials must be at least 1");
    }
    if !alpha.is_finite() {
        return invalid("degree alpha must be finite");
    }
    for trial in 1..=trials {
        let d = rng.normal_vec(f.dim());
        let rho = 2f64.powf(8.0 * rng.uniform() - 4.0);
        let lhs = f.eval_centered(&scaled(&d, rho));
        let rhs = rho.powf(alpha) * f.eval_centered(&d);
        let scale = lhs.abs().max(rhs.abs());
        if !((lhs - rhs).abs() <= HOMOGENEITY_TOL * scale) {
            let x = f.x_star().iter().zip(&d).map(|(s, v)| s + v).collect();
            return Ok(HomogeneityReport {
                verdict: Verdict::Refuted,
                witness: Some(HomogeneityWitness { x, rho, lhs, rhs }),
                trials: trial,
            });
        }
    }
    Ok(HomogeneityReport { verdict: Verdict::Consistent, witness: None, trials })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tilted_sphere(n: usize) -> Objective {
        let kind = ObjectiveKind::Custom {
            label: "sphere+x1".into(),
            eval: Arc::new(|d: &[f64]| d.iter().map(|v| v * v).sum::<f64>() + d[0]),
        };
        Objective::new(kind, vec![0.0; n]).unwrap()
    }

    #[test]
    fn sphere_value() {
        assert_eq!(Objective::sphere(2).eval(&[3.0, 4.0]), 25.0);
    }

    #[test]
    fn identity_quadratic_is_sphere() {
        let mut h = vec![0.0; 9];
        h[0] = 1.0;
        h[4] = 1.0;
        h[8] = 1.0;
        let q = Objective::new(ObjectiveKind::Quadratic(QuadraticForm::dense(3, h).unwrap()), vec![0.0; 3])
            .unwrap();
        let s = Objective::sphere(3);
        let mut rng = RngStream::new(5);
        for _ in 0..100 {
            let x = rng.normal_vec(3);
            assert_eq!(q.eval(&x), s.eval(&x));
        }
    }

    #[test]
    fn diagonal_quadratic_matches_direct_sum() {
        let lambda = vec![1.0, 10.0, 100.0, 0.5];
        let x_star = vec![0.5, -1.0, 2.0, 0.0];
        let f = Objective::new(
            ObjectiveKind::Quadratic(QuadraticForm::diagonal(lambda.clone()).unwrap()),
            x_star.clone(),
        )
        .unwrap();
        let mut rng = RngStream::new(8);
        for _ in 0..100 {
            let x = rng.normal_vec(4);
            let direct: f64 = (0..4).map(|i| lambda[i] * (x[i] - x_star[i]).powi(2)).sum();
            assert!((f.eval(&x) - direct).abs() <= 1e-12 * direct.max(1.0));
        }
    }

    #[test]
    fn quarter_root_composite() {
        let f = Objective::sphere(2).compose(Transform::QuarterRoot);
        assert!((f.eval(&[3.0, 4.0]) - 2.236_067_977_499_79).abs() < 1e-12);
        assert_eq!(Transform::QuarterRoot.apply(-16.0), -2.0);
    }

    #[test]
    fn non_spd_rejected() {
        assert!(QuadraticForm::dense(2, vec![1.0, 2.0, 2.0, 1.0]).is_err());
        assert!(QuadraticForm::dense(2, vec![1.0, 0.5, 0.4, 1.0]).is_err());
        assert!(QuadraticForm::dense(2, vec![2.0, 0.5, 0.5, 1.0]).is_ok());
        assert!(QuadraticForm::diagonal(vec![1.0, 0.0]).is_err());
        assert!(Objective::new(ObjectiveKind::Quadratic(QuadraticForm::diagonal(vec![1.0]).unwrap()), vec![0.0; 2])
            .is_err());
    }

    #[test]
    fn registry() {
        let n = 4;
        assert_eq!(Objective::from_name("sphere", n).unwrap().eval(&[1.0, 1.0, 1.0, 1.0]), 4.0);
        assert_eq!(Objective::from_name("linear", n).unwrap().eval(&[-2.0, 1.0, 1.0, 1.0]), -2.0);
        assert_eq!(Objective::from_name("pnorm:1", n).unwrap().eval(&[-2.0, 1.0, 1.0, 1.0]), 5.0);
        let ell = Objective::from_name("quad:1000", n).unwrap();
        assert!((ell.eval(&[0.0, 0.0, 0.0, 1.0]) - 1000.0).abs() < 1e-9);
        let diag = Objective::from_name("quad:1,2,3,4", n).unwrap();
        assert_eq!(diag.eval(&[1.0, 1.0, 1.0, 1.0]), 10.0);
        let c = Objective::from_name("arctan∘g^{1/4}∘sphere", n).unwrap();
        assert_eq!(c.eval(&[1.0, 1.0, 1.0, 1.0]), (2f64.sqrt()).atan());
        assert_eq!(c.label(), "arctan∘g^{1/4}∘sphere");
        assert!(Objective::from_name("arctan@sphere", n).is_ok());
        assert!(Objective::from_name("rosenbrock", n).is_err());
        assert!(Objective::from_name("quad:1,2", n).is_err());
        assert!(Objective::from_name("pnorm:-1", n).is_err());
    }

    #[test]
    fn sphere_is_scaling_invariant() {
        let mut rng = RngStream::new(1);
        let r = check_scaling_invariance(&Objective::sphere(5), 500, &default_rho_grid(), &mut rng).unwrap();
        assert!(r.is_consistent());
        assert_eq!(r.trials, 500);
        assert!(r.witness.is_none());
    }

    #[test]
    fn linear_is_scaling_invariant() {
        let mut rng = RngStream::new(2);
        let f = Objective::from_name("linear", 3).unwrap();
        assert!(check_scaling_invariance(&f, 500, &default_rho_grid(), &mut rng).unwrap().is_consistent());
    }

    #[test]
    fn tilted_sphere_hand_witness() {
        let f = tilted_sphere(3);
        let w = Witness { x: vec![-1.0, 0.0, 0.0], y: vec![0.0, 0.5, 0.0], rho: 3.0 };
        assert_eq!(f.eval(&w.x), 0.0);
        assert_eq!(f.eval(&w.y), 0.25);
        assert_eq!(f.eval(&[-3.0, 0.0, 0.0]), 6.0);
        assert_eq!(f.eval(&[0.0, 1.5, 0.0]), 2.25);
        assert!(w.reproduces(&f));
    }

    #[test]
    fn tilted_sphere_is_refuted() {
        let f = tilted_sphere(3);
        let mut rng = RngStream::new(3);
        let r = check_scaling_invariance(&f, 1000, &default_rho_grid(), &mut rng).unwrap();
        assert_eq!(r.verdict, Verdict::Refuted);
        assert!(r.witness.as_ref().unwrap().reproduces(&f));
    }

    #[test]
    fn shifted_reference_point() {
        let f = Objective::new(ObjectiveKind::Sphere, vec![10.0, -3.0]).unwrap();
        assert_eq!(f.eval(&[10.0, -3.0]), 0.0);
        let mut rng = RngStream::new(4);
        assert!(check_scaling_invariance(&f, 300, &default_rho_grid(), &mut rng).unwrap().is_consistent());
    }

    #[test]
    fn homogeneity() {
        let mut rng = RngStream::new(6);
        let sphere = Objective::sphere(4);
        assert!(check_positive_homogeneity(&sphere, 2.0, 300, &mut rng).unwrap().is_consistent());
        assert!(!check_positive_homogeneity(&sphere, 1.0, 300, &mut rng).unwrap().is_consistent());
        for name in ["pnorm:1", "pnorm:3", "pnorm:2"] {
            let f = Objective::from_name(name, 4).unwrap();
            assert!(check_positive_homogeneity(&f, 1.0, 300, &mut rng).unwrap().is_consistent(), "{name}");
        }
        let shifted = sphere.compose(Transform::Shift(1.0));
        for alpha in [0.0, 1.0, 2.0] {
            let r = check_positive_homogeneity(&shifted, alpha, 300, &mut rng).unwrap();
            assert_eq!(r.verdict, Verdict::Refuted);
        }
        assert!(check_scaling_invariance(&shifted, 300, &default_rho_grid(), &mut rng).unwrap().is_consistent());
    }

    #[test]
    fn checker_input_validation() {
        let mut rng = RngStream::new(0);
        let f = Objective::sphere(2);
        assert!(check_scaling_invariance(&f, 0, &default_rho_grid(), &mut rng).is_err());
        assert!(check_scaling_invariance(&f, 5, &[1.0, -2.0], &mut rng).is_err());
        assert!(check_positive_homogeneity(&f, 2.0, 0, &mut rng).is_err());
    }
}
