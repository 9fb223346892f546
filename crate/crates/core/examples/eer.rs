//! Equal error rate of a few score sets.

use becaptcha::eval::{compute_eer, ScoreSet};

fn show(name: &str, genuine: &[f64], impostor: &[f64]) -> becaptcha::Result<()> {
    let p = compute_eer(&ScoreSet { genuine: genuine.to_vec(), impostor: impostor.to_vec() })?;
    println!("{name:<12} EER {:>6.2}%  at threshold {:.4}", p.eer_percent, p.threshold);
    Ok(())
}

fn main() -> becaptcha::Result<()> {
    show("separated", &[0.9, 0.8], &[0.1, 0.2])?;
    show("inverted", &[0.1, 0.2], &[0.8, 0.9])?;
    show("overlapping", &[0.2, 0.5, 0.7, 0.9], &[0.1, 0.3, 0.6, 0.8])?;
    let genuine: Vec<f64> = (0..100).map(|i| i as f64 / 100.0 + 0.2).collect();
    let impostor: Vec<f64> = (0..100).map(|i| i as f64 / 100.0).collect();
    show("shifted", &genuine, &impostor)?;
    Ok(())
}
