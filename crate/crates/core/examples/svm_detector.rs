//! One-class and binary RBF detectors on hand-made feature clouds.

use becaptcha::stats;
use becaptcha::svm::{kkt_residual, train_binary, train_one_class, SvmParams};
use rand::Rng;
use rand_distr::StandardNormal;

fn cloud(rng: &mut stats::Rng, n: usize, center: f64) -> Vec<Vec<f64>> {
    (0..n)
        .map(|_| (0..3).map(|_| center + rng.sample::<f64, _>(StandardNormal)).collect())
        .collect()
}

fn main() -> becaptcha::Result<()> {
    let mut rng = stats::rng(5);
    let humans = cloud(&mut rng, 300, 0.0);
    let bots = cloud(&mut rng, 300, 2.5);

    let one = train_one_class(&humans, &SvmParams { nu: 0.05, ..SvmParams::default() })?;
    let inside = humans.iter().filter(|x| one.decision_score(x).unwrap() >= 0.0).count();
    let caught = bots.iter().filter(|x| one.decision_score(x).unwrap() < 0.0).count();
    println!(
        "one-class: γ {:.3}, {} support vectors, {inside}/300 humans inside, {caught}/300 bots outside, KKT residual {:.1e}",
        one.kernel.gamma,
        one.support_vectors.len(),
        kkt_residual(&one, &humans, None)?
    );

    let mut x = humans.clone();
    x.extend(bots.iter().cloned());
    let y: Vec<bool> = (0..600).map(|i| i < 300).collect();
    let bin = train_binary(&x, &y, &SvmParams { c: 1.0, ..SvmParams::default() })?;
    let correct = x.iter().zip(&y).filter(|(xi, &yi)| (bin.decision_score(xi).unwrap() > 0.0) == yi).count();
    println!(
        "binary: {} support vectors, {correct}/600 correct, objective {:.4}, {} iterations",
        bin.support_vectors.len(),
        bin.summary.objective,
        bin.summary.iterations
    );
    Ok(())
}
