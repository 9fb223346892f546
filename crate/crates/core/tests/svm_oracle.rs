//! SMO solutions against exhaustive active-set enumeration of the dual.

use becaptcha::stats;
use becaptcha::svm::{kkt_residual, train_binary, train_one_class, SvmModel, SvmParams};
use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::StandardNormal;

mod common;
use common::{qp_brute_force, qp_objective};

fn kernel(model: &SvmModel, x: &[Vec<f64>]) -> DMatrix<f64> {
    let z: Vec<Vec<f64>> = x.iter().map(|r| model.standardizer.apply(r).unwrap()).collect();
    DMatrix::from_fn(z.len(), z.len(), |i, j| model.kernel.eval(&z[i], &z[j]))
}

fn blobs(rng: &mut impl Rng, n: usize, dim: usize, shift: f64) -> Vec<Vec<f64>> {
    (0..n)
        .map(|_| (0..dim).map(|_| rng.sample::<f64, _>(StandardNormal) + shift).collect())
        .collect()
}

#[test]
fn binary_dual_matches_enumeration() {
    for trial in 0..6u64 {
        let mut rng = stats::rng(500 + trial);
        let mut x = blobs(&mut rng, 5, 3, 0.0);
        x.extend(blobs(&mut rng, 5, 3, 0.8));
        let labels: Vec<bool> = (0..10).map(|i| i < 5).collect();
        let params = SvmParams {
            c: [0.5, 1.0, 10.0][trial as usize % 3],
            ..SvmParams::default()
        };
        let m = train_binary(&x, &labels, &params).unwrap();
        let y: Vec<f64> = labels.iter().map(|&h| if h { 1.0 } else { -1.0 }).collect();
        let k = kernel(&m, &x);
        let q = DMatrix::from_fn(10, 10, |i, j| y[i] * y[j] * k[(i, j)]);
        let p = vec![-1.0; 10];
        let want = qp_brute_force(&q, &p, &y, 0.0, params.c);
        let got = qp_objective(&q, &p, &m.alpha_full());
        assert!((got - want).abs() <= 1e-4, "trial {trial}: {got} vs {want}");
        assert!((m.summary.objective - want).abs() <= 1e-4);
        let r = kkt_residual(&m, &x, Some(&labels)).unwrap();
        assert!(r <= 1e-3, "kkt residual {r}");
    }
}

#[test]
fn one_class_dual_matches_enumeration() {
    for trial in 0..6u64 {
        let mut rng = stats::rng(900 + trial);
        let x = blobs(&mut rng, 10, 2, 0.0);
        let nu = [0.2, 0.5, 0.8][trial as usize % 3];
        let params = SvmParams { nu, ..SvmParams::default() };
        let m = train_one_class(&x, &params).unwrap();
        let q = kernel(&m, &x);
        let p = vec![0.0; 10];
        let ones = vec![1.0; 10];
        let want = qp_brute_force(&q, &p, &ones, 1.0, 1.0 / (nu * 10.0));
        let got = qp_objective(&q, &p, &m.alpha_full());
        assert!((got - want).abs() <= 1e-4, "trial {trial}: {got} vs {want}");
        let sum: f64 = m.alpha_full().iter().sum();
        assert!((sum - 1.0).abs() < 1e-9);
        let r = kkt_residual(&m, &x, None).unwrap();
        assert!(r <= 1e-3, "kkt residual {r}");
    }
}

#[test]
fn nu_bounds_outlier_fraction() {
    let mut rng = stats::rng(31);
    let x = blobs(&mut rng, 200, 4, 0.0);
    for nu in [0.05, 0.1, 0.2, 0.5] {
        let m = train_one_class(&x, &SvmParams { nu, ..SvmParams::default() }).unwrap();
        let outside = x.iter().filter(|r| m.decision_score(r).unwrap() < 0.0).count() as f64 / 200.0;
        let sv = m.support_indices.len() as f64 / 200.0;
        assert!((outside - nu).abs() <= 0.05, "nu {nu}: outlier fraction {outside}");
        // ν upper-bounds the outlier fraction and lower-bounds the SV fraction;
        // points within the stopping tolerance of the boundary are not outliers
        let clear = x.iter().filter(|r| m.decision_score(r).unwrap() < -m.tol).count() as f64 / 200.0;
        assert!(clear <= nu + 1e-9 && sv >= nu - 1e-9, "nu {nu}: {clear} {sv}");
    }
}
