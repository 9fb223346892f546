//! Fits priors on humans and forges straight, accelerating swipes.

use becaptcha::features::touch_features;
use becaptcha::fixture::{fixture_corpus, FixtureConfig};
use becaptcha::synth::{fit_priors, synth_batch, synth_touch, SynthConfig, DEFAULT_LOG_BASE, DEFAULT_PRIOR_FLOOR};

fn main() -> becaptcha::Result<()> {
    let humans = fixture_corpus(1, 500, &FixtureConfig::default())?;
    let priors = fit_priors(&humans, DEFAULT_PRIOR_FLOOR)?;
    println!("length   {:?}", priors.length);
    println!("angle    {:?}", priors.angle);
    println!("duration {:?}", priors.duration);

    let t = synth_touch(&priors, 3, 8, DEFAULT_LOG_BASE, (1080, 1920))?;
    println!("\none fake, 8 points:");
    for p in t.points() {
        println!("  t {:.3}  x {:.4}  y {:.4}", p.t, p.x, p.y);
    }

    let fakes = synth_batch(&priors, 4, 1000, &SynthConfig::default())?;
    let worst = fakes
        .iter()
        .map(|g| (touch_features(&g.touch).map(|f| f.move_efficiency).unwrap_or(f64::NAN) - 1.0).abs())
        .fold(0.0, f64::max);
    println!("\n{} fakes; largest |E - 1| = {worst:.1e}", fakes.len());
    Ok(())
}
