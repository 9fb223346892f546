//! Independent oracles shared by the oracle tests and the acceptance run.
//! None of these call into the library code they check.

#![allow(dead_code)]

use becaptcha::gan::Network;
use nalgebra::{DMatrix, DVector};

/// [D, L, P, α, V, E] computed index by index from `(x, y, t)` points.
pub fn touch_oracle(pts: &[(f64, f64, f64)]) -> [f64; 6] {
    let n = pts.len();
    let dx = pts[n - 1].0 - pts[0].0;
    let dy = pts[n - 1].1 - pts[0].1;
    let l = (dx * dx + dy * dy).sqrt();
    let mut p = 0.0;
    let mut speeds = Vec::new();
    for i in 1..n {
        let sx = pts[i].0 - pts[i - 1].0;
        let sy = pts[i].1 - pts[i - 1].1;
        let seg = (sx * sx + sy * sy).sqrt();
        p += seg;
        speeds.push(seg / (pts[i].2 - pts[i - 1].2));
    }
    let v = speeds.iter().sum::<f64>() / speeds.len() as f64;
    [pts[n - 1].2 - pts[0].2, l, p, dx.atan2(dy), v, p / l]
}

/// mean, median, rms and population std of one axis, in that order.
pub fn axis_oracle(mut v: Vec<f64>) -> [f64; 4] {
    let n = v.len() as f64;
    let mean = v.iter().sum::<f64>() / n;
    let rms = (v.iter().map(|x| x * x).sum::<f64>() / n).sqrt();
    let var = v.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / n;
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let k = v.len();
    let median = if k % 2 == 1 { v[k / 2] } else { (v[k / 2 - 1] + v[k / 2]) / 2.0 };
    [mean, median, rms, var.sqrt()]
}

pub fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * (1.0 + b.abs())
}

/// Minimum of ½αᵀQα + pᵀα subject to yᵀα = s, 0 ≤ α ≤ ub, found by trying
/// every assignment of each variable to {0, free, ub} and solving the
/// equality-constrained system on the free set.
pub fn qp_brute_force(q: &DMatrix<f64>, p: &[f64], y: &[f64], s: f64, ub: f64) -> f64 {
    let n = p.len();
    let mut best = f64::INFINITY;
    let mut state = vec![0u8; n];
    loop {
        let free: Vec<usize> = (0..n).filter(|&i| state[i] == 1).collect();
        let mut alpha = vec![0.0; n];
        for i in 0..n {
            if state[i] == 2 {
                alpha[i] = ub;
            }
        }
        let fixed_sum: f64 = (0..n).map(|i| y[i] * alpha[i]).sum();
        let ok = if free.is_empty() {
            (fixed_sum - s).abs() < 1e-12
        } else {
            let k = free.len();
            let mut a = DMatrix::zeros(k + 1, k + 1);
            let mut b = DVector::zeros(k + 1);
            for (r, &i) in free.iter().enumerate() {
                for (c, &j) in free.iter().enumerate() {
                    a[(r, c)] = q[(i, j)];
                }
                a[(r, k)] = y[i];
                a[(k, r)] = y[i];
                b[r] = -p[i] - (0..n).filter(|&j| state[j] == 2).map(|j| q[(i, j)] * ub).sum::<f64>();
            }
            b[k] = s - fixed_sum;
            match a.lu().solve(&b) {
                Some(sol) => {
                    let mut feasible = true;
                    for (r, &i) in free.iter().enumerate() {
                        if sol[r] < -1e-12 || sol[r] > ub + 1e-12 {
                            feasible = false;
                        }
                        alpha[i] = sol[r];
                    }
                    feasible
                }
                None => false,
            }
        };
        if ok {
            best = best.min(qp_objective(q, p, &alpha));
        }
        // next assignment in base 3
        let mut i = 0;
        while i < n && state[i] == 2 {
            state[i] = 0;
            i += 1;
        }
        if i == n {
            break;
        }
        state[i] += 1;
    }
    best
}

pub fn qp_objective(q: &DMatrix<f64>, p: &[f64], alpha: &[f64]) -> f64 {
    let a = DVector::from_row_slice(alpha);
    0.5 * a.dot(&(q * &a)) + DVector::from_row_slice(p).dot(&a)
}

/// Sweeps 200 001 evenly spaced thresholds and returns the mean of FMR and
/// FNMR where they are closest, in percent.
pub fn eer_sweep(genuine: &[f64], impostor: &[f64]) -> f64 {
    let lo = genuine.iter().chain(impostor).cloned().fold(f64::INFINITY, f64::min) - 1e-9;
    let hi = genuine.iter().chain(impostor).cloned().fold(f64::NEG_INFINITY, f64::max) + 1e-9;
    let mut g = genuine.to_vec();
    let mut i = impostor.to_vec();
    g.sort_by(f64::total_cmp);
    i.sort_by(f64::total_cmp);
    let steps = 200_000;
    let mut best = (f64::INFINITY, 0.0);
    for k in 0..=steps {
        let t = lo + (hi - lo) * k as f64 / steps as f64;
        let fmr = (i.len() - i.partition_point(|&s| s < t)) as f64 / i.len() as f64;
        let fnmr = g.partition_point(|&s| s < t) as f64 / g.len() as f64;
        let gap = (fmr - fnmr).abs();
        if gap < best.0 {
            best = (gap, 50.0 * (fmr + fnmr));
        }
    }
    best.1
}

pub fn rel_err(a: f64, n: f64) -> f64 {
    (a - n).abs() / a.abs().max(n.abs()).max(1e-6)
}

/// Largest relative error between analytic and central-difference gradients
/// of `Σ w·predict(x)` over every parameter and every input.
pub fn gradcheck(net: &mut Network, x: &[f64], w: &[f64], h: f64) -> f64 {
    let loss = |net: &Network, x: &[f64]| -> f64 { net.predict(x).unwrap().iter().zip(w).map(|(a, b)| a * b).sum() };
    let trace = net.forward(x).unwrap();
    let (grad, dx) = net.backward(&trace, w, true);
    assert_eq!(grad.len(), net.param_count());
    assert_eq!(dx.len(), x.len());
    let mut worst: f64 = 0.0;
    for i in 0..net.param_count() {
        let orig = net.params[i];
        net.params[i] = orig + h;
        let up = loss(net, x);
        net.params[i] = orig - h;
        let down = loss(net, x);
        net.params[i] = orig;
        worst = worst.max(rel_err(grad[i], (up - down) / (2.0 * h)));
    }
    let mut xs = x.to_vec();
    for i in 0..x.len() {
        xs[i] = x[i] + h;
        let up = loss(net, &xs);
        xs[i] = x[i] - h;
        let down = loss(net, &xs);
        xs[i] = x[i];
        worst = worst.max(rel_err(dx[i], (up - down) / (2.0 * h)));
    }
    worst
}
