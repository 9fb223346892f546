//! RBF-kernel support vector machines trained by sequential minimal
//! optimization.
//!
//! Both detectors solve a dual of the form
//!
//! ```text
//! min ½ αᵀQα + pᵀα   s.t.  yᵀα = Δ,  0 ≤ αᵢ ≤ U
//! ```
//!
//! * binary: `Q = yyᵀ∘K`, `p = −1`, `Δ = 0`, `U = C`; humans are `+1`.
//! * one-class: `Q = K`, `p = 0`, `y = 1`, `Δ = 1`, `U = 1/(νn)`.
//!
//! The working set is the maximal violating pair, ties broken by the lowest
//! index. Scores are `Σ coefᵢ k(sᵢ, x) − ρ`, oriented so that human is
//! positive in both modes. Features are standardized internally.

use std::path::Path;

use rand::seq::index::sample;
use serde::{Deserialize, Serialize};

use crate::envelope;
use crate::error::{Error, Result};
use crate::features::Standardizer;
use crate::stats::{self, median};

pub const DEFAULT_C: f64 = 1.0;
pub const DEFAULT_NU: f64 = 0.05;
pub const DEFAULT_TOL: f64 = 1e-3;
const GAMMA_SUBSAMPLE: usize = 1000;
const TAU: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SvmMode {
    Binary,
    OneClass,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KernelParams {
    pub gamma: f64,
}

impl KernelParams {
    pub fn new(gamma: f64) -> Result<Self> {
        if !(gamma > 0.0 && gamma.is_finite()) {
            return Err(Error::Invalid(format!("RBF gamma must be positive, got {gamma}")));
        }
        Ok(KernelParams { gamma })
    }

    pub fn eval(&self, a: &[f64], b: &[f64]) -> f64 {
        (-self.gamma * sq_dist(a, b)).exp()
    }
}

fn sq_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SvmParams {
    pub c: f64,
    pub nu: f64,
    /// `None` selects the median heuristic on the standardized features.
    pub gamma: Option<f64>,
    pub tol: f64,
    pub seed: u64,
    pub max_iter: usize,
}

impl Default for SvmParams {
    fn default() -> Self {
        SvmParams {
            c: DEFAULT_C,
            nu: DEFAULT_NU,
            gamma: None,
            tol: DEFAULT_TOL,
            seed: 0,
            max_iter: 10_000_000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrainSummary {
    pub n_train: usize,
    pub iterations: usize,
    /// Final maximal KKT violation `m(α) − M(α)`.
    pub kkt_gap: f64,
    pub objective: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SvmModel {
    pub mode: SvmMode,
    pub kernel: KernelParams,
    pub standardizer: Standardizer,
    /// Standardized support vectors.
    pub support_vectors: Vec<Vec<f64>>,
    /// Index of each support vector in the training set.
    pub support_indices: Vec<usize>,
    /// Dual variables of the support vectors.
    pub alpha: Vec<f64>,
    /// `αᵢyᵢ` (binary) or `αᵢ` (one-class).
    pub coef: Vec<f64>,
    pub rho: f64,
    /// Box bound `C` (binary) or `1/(νn)` (one-class).
    pub upper_bound: f64,
    pub c: Option<f64>,
    pub nu: Option<f64>,
    pub tol: f64,
    pub summary: TrainSummary,
}

impl SvmModel {
    pub fn dim(&self) -> usize {
        self.standardizer.dim()
    }

    /// Bias of the binary decision function, `−ρ`.
    pub fn bias(&self) -> f64 {
        -self.rho
    }

    pub fn decision_score(&self, x: &[f64]) -> Result<f64> {
        let z = self.standardizer.apply(x)?;
        Ok(self.score_standardized(&z))
    }

    fn score_standardized(&self, z: &[f64]) -> f64 {
        self.support_vectors
            .iter()
            .zip(&self.coef)
            .map(|(sv, c)| c * self.kernel.eval(sv, z))
            .sum::<f64>()
            - self.rho
    }

    /// Dual variables over the whole training set (zeros off the support).
    pub fn alpha_full(&self) -> Vec<f64> {
        let mut a = vec![0.0; self.summary.n_train];
        for (&i, &v) in self.support_indices.iter().zip(&self.alpha) {
            a[i] = v;
        }
        a
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        envelope::save("svm", self, path)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        envelope::load("svm", path)
    }
}

pub fn decision_score(model: &SvmModel, x: &[f64]) -> Result<f64> {
    model.decision_score(x)
}

/// Median heuristic: `1 / median(‖a − b‖²)` over all pairs of a seeded
/// subsample of at most 1000 rows; `1/d` when that median is zero.
pub fn default_gamma(features: &[Vec<f64>], seed: u64) -> f64 {
    let dim = features.first().map_or(1, Vec::len).max(1);
    let rows: Vec<&Vec<f64>> = if features.len() > GAMMA_SUBSAMPLE {
        let mut rng = stats::rng(seed);
        let mut idx = sample(&mut rng, features.len(), GAMMA_SUBSAMPLE).into_vec();
        idx.sort_unstable();
        idx.into_iter().map(|i| &features[i]).collect()
    } else {
        features.iter().collect()
    };
    let mut d2 = Vec::with_capacity(rows.len() * rows.len().saturating_sub(1) / 2);
    for i in 0..rows.len() {
        for j in i + 1..rows.len() {
            d2.push(sq_dist(rows[i], rows[j]));
        }
    }
    let m = if d2.is_empty() { 0.0 } else { median(&d2) };
    if m > 1e-12 {
        1.0 / m
    } else {
        1.0 / dim as f64
    }
}

fn validate(features: &[Vec<f64>]) -> Result<usize> {
    let first = features.first().ok_or(Error::TooFewSamples { needed: 1, got: 0 })?;
    let dim = first.len();
    if dim == 0 {
        return Err(Error::Invalid("feature vectors are empty".into()));
    }
    for (row, f) in features.iter().enumerate() {
        if f.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: f.len(),
            });
        }
        if let Some(col) = f.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { row, col });
        }
    }
    Ok(dim)
}

struct Prepared {
    standardizer: Standardizer,
    z: Vec<Vec<f64>>,
    kernel: KernelParams,
}

fn prepare(features: &[Vec<f64>], params: &SvmParams) -> Result<Prepared> {
    validate(features)?;
    let standardizer = Standardizer::fit(features)?;
    let z: Vec<Vec<f64>> = features
        .iter()
        .map(|f| standardizer.apply(f))
        .collect::<Result<_>>()?;
    let gamma = match params.gamma {
        Some(g) => g,
        None => default_gamma(&z, params.seed),
    };
    Ok(Prepared {
        standardizer,
        z,
        kernel: KernelParams::new(gamma)?,
    })
}

fn kernel_matrix(z: &[Vec<f64>], k: &KernelParams) -> Vec<f64> {
    let n = z.len();
    let mut m = vec![0.0; n * n];
    for i in 0..n {
        m[i * n + i] = 1.0;
        for j in i + 1..n {
            let v = k.eval(&z[i], &z[j]);
            m[i * n + j] = v;
            m[j * n + i] = v;
        }
    }
    m
}

/// Dense SMO over `min ½αᵀQα + pᵀα, yᵀα fixed, 0 ≤ α ≤ ub`.
struct Smo<'a> {
    q: &'a [f64],
    p: &'a [f64],
    y: &'a [f64],
    ub: f64,
    n: usize,
}

struct SmoResult {
    alpha: Vec<f64>,
    grad: Vec<f64>,
    iterations: usize,
    gap: f64,
}

impl Smo<'_> {
    fn in_up(&self, a: f64, y: f64) -> bool {
        (y > 0.0 && a < self.ub) || (y < 0.0 && a > 0.0)
    }

    fn in_low(&self, a: f64, y: f64) -> bool {
        (y > 0.0 && a > 0.0) || (y < 0.0 && a < self.ub)
    }

    /// Maximal violating pair and the current gap `m − M`.
    fn select(&self, alpha: &[f64], grad: &[f64]) -> (usize, usize, f64) {
        let (mut i, mut gmax) = (usize::MAX, f64::NEG_INFINITY);
        let (mut j, mut gmin) = (usize::MAX, f64::INFINITY);
        for t in 0..self.n {
            let v = -self.y[t] * grad[t];
            if self.in_up(alpha[t], self.y[t]) && v > gmax {
                gmax = v;
                i = t;
            }
            if self.in_low(alpha[t], self.y[t]) && v < gmin {
                gmin = v;
                j = t;
            }
        }
        (i, j, gmax - gmin)
    }

    fn solve(&self, mut alpha: Vec<f64>, tol: f64, max_iter: usize) -> SmoResult {
        let n = self.n;
        let mut grad = self.p.to_vec();
        for (j, &a) in alpha.iter().enumerate() {
            if a != 0.0 {
                let row = &self.q[j * n..(j + 1) * n];
                for t in 0..n {
                    grad[t] += a * row[t];
                }
            }
        }
        let mut iterations = 0;
        let mut gap;
        loop {
            let (i, j, g) = self.select(&alpha, &grad);
            gap = g;
            if i == usize::MAX || j == usize::MAX || gap < tol || iterations >= max_iter {
                break;
            }
            iterations += 1;
            let (qi, qj) = (&self.q[i * n..(i + 1) * n], &self.q[j * n..(j + 1) * n]);
            let (old_i, old_j) = (alpha[i], alpha[j]);
            let c = self.ub;
            if self.y[i] != self.y[j] {
                let quad = (qi[i] + qj[j] + 2.0 * qi[j]).max(TAU);
                let delta = (-grad[i] - grad[j]) / quad;
                let diff = alpha[i] - alpha[j];
                alpha[i] += delta;
                alpha[j] += delta;
                if diff > 0.0 {
                    if alpha[j] < 0.0 {
                        alpha[j] = 0.0;
                        alpha[i] = diff;
                    }
                } else if alpha[i] < 0.0 {
                    alpha[i] = 0.0;
                    alpha[j] = -diff;
                }
                if diff > 0.0 {
                    if alpha[i] > c {
                        alpha[i] = c;
                        alpha[j] = c - diff;
                    }
                } else if alpha[j] > c {
                    alpha[j] = c;
                    alpha[i] = c + diff;
                }
            } else {
                let quad = (qi[i] + qj[j] - 2.0 * qi[j]).max(TAU);
                let delta = (grad[i] - grad[j]) / quad;
                let sum = alpha[i] + alpha[j];
                alpha[i] -= delta;
                alpha[j] += delta;
                if sum > c {
                    if alpha[i] > c {
                        alpha[i] = c;
                        alpha[j] = sum - c;
                    }
                } else if alpha[j] < 0.0 {
                    alpha[j] = 0.0;
                    alpha[i] = sum;
                }
                if sum > c {
                    if alpha[j] > c {
                        alpha[j] = c;
                        alpha[i] = sum - c;
                    }
                } else if alpha[i] < 0.0 {
                    alpha[i] = 0.0;
                    alpha[j] = sum;
                }
            }
            let (di, dj) = (alpha[i] - old_i, alpha[j] - old_j);
            for t in 0..n {
                grad[t] += qi[t] * di + qj[t] * dj;
            }
        }
        SmoResult {
            alpha,
            grad,
            iterations,
            gap,
        }
    }

    /// Offset from free variables, or the midpoint of the feasible interval.
    fn rho(&self, alpha: &[f64], grad: &[f64]) -> f64 {
        let (mut ub, mut lb) = (f64::INFINITY, f64::NEG_INFINITY);
        let (mut sum, mut free) = (0.0, 0usize);
        for t in 0..self.n {
            let yg = self.y[t] * grad[t];
            let at_upper = alpha[t] >= self.ub;
            let at_lower = alpha[t] <= 0.0;
            if at_upper {
                if self.y[t] < 0.0 {
                    ub = ub.min(yg);
                } else {
                    lb = lb.max(yg);
                }
            } else if at_lower {
                if self.y[t] > 0.0 {
                    ub = ub.min(yg);
                } else {
                    lb = lb.max(yg);
                }
            } else {
                free += 1;
                sum += yg;
            }
        }
        if free > 0 {
            sum / free as f64
        } else {
            0.5 * (ub + lb)
        }
    }

    fn objective(&self, alpha: &[f64], grad: &[f64]) -> f64 {
        alpha
            .iter()
            .zip(grad.iter().zip(self.p))
            .map(|(a, (g, p))| 0.5 * a * (g + p))
            .sum()
    }
}

fn finish(
    mode: SvmMode,
    prep: Prepared,
    y: &[f64],
    res: SmoResult,
    rho: f64,
    objective: f64,
    upper_bound: f64,
    params: &SvmParams,
) -> SvmModel {
    let mut support_vectors = Vec::new();
    let mut support_indices = Vec::new();
    let mut alpha = Vec::new();
    let mut coef = Vec::new();
    let n = prep.z.len();
    let z = prep.z;
    for (i, row) in z.into_iter().enumerate() {
        let a = res.alpha[i];
        if a > 0.0 {
            support_vectors.push(row);
            support_indices.push(i);
            alpha.push(a);
            coef.push(a * y[i]);
        }
    }
    SvmModel {
        mode,
        kernel: prep.kernel,
        standardizer: prep.standardizer,
        support_vectors,
        support_indices,
        alpha,
        coef,
        rho,
        upper_bound,
        c: (mode == SvmMode::Binary).then_some(params.c),
        nu: (mode == SvmMode::OneClass).then_some(params.nu),
        tol: params.tol,
        summary: TrainSummary {
            n_train: n,
            iterations: res.iterations,
            kkt_gap: res.gap,
            objective,
        },
    }
}

/// Binary human-vs-bot SVM. `labels[i]` is `true` for human.
pub fn train_binary(features: &[Vec<f64>], labels: &[bool], params: &SvmParams) -> Result<SvmModel> {
    if features.len() != labels.len() {
        return Err(Error::DimensionMismatch {
            expected: features.len(),
            got: labels.len(),
        });
    }
    validate(features)?;
    if labels.iter().all(|&l| l) || labels.iter().all(|&l| !l) {
        return Err(Error::SingleClass);
    }
    if !(params.c > 0.0) {
        return Err(Error::Invalid(format!("C must be positive, got {}", params.c)));
    }
    let prep = prepare(features, params)?;
    let n = prep.z.len();
    let y: Vec<f64> = labels.iter().map(|&h| if h { 1.0 } else { -1.0 }).collect();
    let mut q = kernel_matrix(&prep.z, &prep.kernel);
    for i in 0..n {
        for j in 0..n {
            q[i * n + j] *= y[i] * y[j];
        }
    }
    let p = vec![-1.0; n];
    let smo = Smo {
        q: &q,
        p: &p,
        y: &y,
        ub: params.c,
        n,
    };
    let res = smo.solve(vec![0.0; n], params.tol, params.max_iter);
    let rho = smo.rho(&res.alpha, &res.grad);
    let objective = smo.objective(&res.alpha, &res.grad);
    Ok(finish(SvmMode::Binary, prep, &y, res, rho, objective, params.c, params))
}

/// One-class SVM on human features only.
pub fn train_one_class(features: &[Vec<f64>], params: &SvmParams) -> Result<SvmModel> {
    let nu = params.nu;
    if !(nu > 0.0 && nu <= 1.0) {
        return Err(Error::Invalid(format!("nu must lie in (0, 1], got {nu}")));
    }
    let needed = (1.0 / nu).ceil() as usize;
    if features.len() < needed.max(2) {
        return Err(Error::TooFewSamples {
            needed: needed.max(2),
            got: features.len(),
        });
    }
    let prep = prepare(features, params)?;
    let n = prep.z.len();
    let ub = 1.0 / (nu * n as f64);
    let q = kernel_matrix(&prep.z, &prep.kernel);
    let y = vec![1.0; n];
    let p = vec![0.0; n];

    // feasible start: fill the first variables to the bound until Σα = 1
    let mut alpha = vec![0.0; n];
    let mut remaining = 1.0;
    for a in &mut alpha {
        if remaining <= 0.0 {
            break;
        }
        *a = ub.min(remaining);
        remaining -= *a;
    }

    let smo = Smo {
        q: &q,
        p: &p,
        y: &y,
        ub,
        n,
    };
    let res = smo.solve(alpha, params.tol, params.max_iter);
    let rho = smo.rho(&res.alpha, &res.grad);
    let objective = smo.objective(&res.alpha, &res.grad);
    Ok(finish(SvmMode::OneClass, prep, &y, res, rho, objective, ub, params))
}

/// Largest KKT violation of a trained model over its training set, measured
/// from decision values rather than solver state.
///
/// For binary models with `g = y·f(x)`: `α = 0 ⇒ g ≥ 1`, free `⇒ g = 1`,
/// `α = C ⇒ g ≤ 1`. For one-class models with `g = f(x)` the target is 0.
pub fn kkt_residual(model: &SvmModel, features: &[Vec<f64>], labels: Option<&[bool]>) -> Result<f64> {
    if features.len() != model.summary.n_train {
        return Err(Error::DimensionMismatch {
            expected: model.summary.n_train,
            got: features.len(),
        });
    }
    let alpha = model.alpha_full();
    let mut worst: f64 = 0.0;
    for (i, x) in features.iter().enumerate() {
        let f = model.decision_score(x)?;
        let (g, target) = match model.mode {
            SvmMode::Binary => {
                let y = match labels {
                    Some(l) if l[i] => 1.0,
                    Some(_) => -1.0,
                    None => return Err(Error::Invalid("binary residual needs labels".into())),
                };
                (y * f, 1.0)
            }
            SvmMode::OneClass => (f, 0.0),
        };
        // tiny relative slack for values stored exactly at the bound
        let at_upper = alpha[i] >= model.upper_bound * (1.0 - 1e-12);
        let v = if alpha[i] <= 0.0 {
            target - g
        } else if at_upper {
            g - target
        } else {
            (g - target).abs()
        };
        worst = worst.max(v);
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use rand::Rng as _;
    use rand_distr::StandardNormal;

    use super::*;

    fn params() -> SvmParams {
        SvmParams::default()
    }

    #[test]
    fn two_point_problem() {
        let x = vec![vec![0.0, 0.0], vec![1.0, 1.0]];
        let m = train_binary(&x, &[true, false], &SvmParams { gamma: Some(1.0), c: 1.0, ..params() }).unwrap();
        assert_eq!(m.support_vectors.len(), 2);
        let a = m.decision_score(&x[0]).unwrap();
        let b = m.decision_score(&x[1]).unwrap();
        assert!(a > 0.0 && b < 0.0);
        assert!((a + b).abs() < 1e-9, "bisector: {a} {b}");
        // midpoint lies on the boundary
        assert!(m.decision_score(&[0.5, 0.5]).unwrap().abs() < 1e-9);
        let sum: f64 = m.coef.iter().sum();
        assert!(sum.abs() < 1e-6);
    }

    #[test]
    fn xor_is_separable() {
        let x = vec![vec![0.0, 0.0], vec![1.0, 1.0], vec![0.0, 1.0], vec![1.0, 0.0]];
        let y = [true, true, false, false];
        let m = train_binary(&x, &y, &SvmParams { gamma: Some(1.0), c: 10.0, ..params() }).unwrap();
        for (xi, &yi) in x.iter().zip(&y) {
            assert_eq!(m.decision_score(xi).unwrap() > 0.0, yi);
        }
    }

    #[test]
    fn errors() {
        let x = vec![vec![0.0], vec![1.0]];
        assert!(matches!(train_binary(&x, &[true, true], &params()), Err(Error::SingleClass)));
        let bad = vec![vec![0.0], vec![f64::NAN]];
        assert!(matches!(
            train_binary(&bad, &[true, false], &params()),
            Err(Error::NonFinite { row: 1, col: 0 })
        ));
        let few: Vec<Vec<f64>> = (0..5).map(|i| vec![i as f64]).collect();
        assert!(matches!(
            train_one_class(&few, &SvmParams { nu: 0.1, ..params() }),
            Err(Error::TooFewSamples { needed: 10, got: 5 })
        ));
        let m = train_binary(&x, &[true, false], &params()).unwrap();
        assert!(matches!(m.decision_score(&[1.0, 2.0]), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn one_class_identical_pair() {
        let x = vec![vec![0.3, 0.3], vec![0.3, 0.3]];
        let m = train_one_class(&x, &SvmParams { nu: 0.5, ..params() }).unwrap();
        // any split of the unit mass is optimal for duplicate points
        let total: f64 = m.alpha.iter().sum();
        assert!((total - 1.0).abs() < 1e-12);
        assert!(m.alpha.iter().all(|a| *a > 0.0 && *a <= 1.0 + 1e-12));
        let s = m.decision_score(&x[0]).unwrap();
        assert!(s.abs() < 1e-9);
    }

    #[test]
    fn gamma_heuristic() {
        assert_eq!(default_gamma(&[vec![0.0, 0.0], vec![1.0, 0.0]], 0), 1.0);
        assert_eq!(default_gamma(&[vec![2.0; 4], vec![2.0; 4], vec![2.0; 4]], 0), 0.25);
        let mut rng = stats::rng(1);
        let pts: Vec<Vec<f64>> = (0..60)
            .map(|_| (0..3).map(|_| rng.sample::<f64, _>(StandardNormal)).collect())
            .collect();
        let mut all = Vec::new();
        for i in 0..pts.len() {
            for j in 0..pts.len() {
                if i < j {
                    all.push(sq_dist(&pts[i], &pts[j]));
                }
            }
        }
        all.sort_by(f64::total_cmp);
        let m = all.len();
        let med = 0.5 * (all[m / 2 - 1] + all[m / 2]);
        assert!((default_gamma(&pts, 3) - 1.0 / med).abs() < 1e-12);
    }

    #[test]
    fn outlier_scores_below_cluster() {
        let mut rng = stats::rng(7);
        let mut x: Vec<Vec<f64>> = (0..100)
            .map(|_| (0..2).map(|_| 0.1 * rng.sample::<f64, _>(StandardNormal)).collect())
            .collect();
        let m = train_one_class(&x, &params()).unwrap();
        let inlier_min = x
            .iter()
            .map(|v| m.decision_score(v).unwrap())
            .fold(f64::INFINITY, f64::min);
        x.push(vec![5.0, 5.0]);
        assert!(m.decision_score(&x[100]).unwrap() < inlier_min);
    }

    #[test]
    fn constraints_hold() {
        let mut rng = stats::rng(2);
        let x: Vec<Vec<f64>> = (0..80)
            .map(|i| {
                let shift = if i % 2 == 0 { 0.8 } else { -0.8 };
                (0..3).map(|_| shift + rng.sample::<f64, _>(StandardNormal)).collect()
            })
            .collect();
        let y: Vec<bool> = (0..80).map(|i| i % 2 == 0).collect();
        let m = train_binary(&x, &y, &params()).unwrap();
        assert!(m.alpha.iter().all(|&a| a > 0.0 && a <= 1.0));
        assert!(m.coef.iter().sum::<f64>().abs() < 1e-6);
        assert!(m.summary.kkt_gap < 1e-3);
        assert!(kkt_residual(&m, &x, Some(&y)).unwrap() <= 1e-3);

        let oc = train_one_class(&x, &SvmParams { nu: 0.2, ..params() }).unwrap();
        assert!((oc.alpha.iter().sum::<f64>() - 1.0).abs() < 1e-6);
        assert!(oc.alpha.iter().all(|&a| a <= oc.upper_bound * (1.0 + 1e-12)));
        assert!(kkt_residual(&oc, &x, None).unwrap() <= 1e-3);
    }

    #[test]
    fn model_file_round_trip() {
        let x = vec![vec![0.0, 0.0], vec![1.0, 1.0], vec![0.2, 0.1]];
        let m = train_binary(&x, &[true, false, true], &params()).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("svm.json");
        m.save(&path).unwrap();
        let back = SvmModel::load(&path).unwrap();
        assert_eq!(m, back);
        assert_eq!(m.decision_score(&[0.4, 0.4]).unwrap(), back.decision_score(&[0.4, 0.4]).unwrap());
    }
}
