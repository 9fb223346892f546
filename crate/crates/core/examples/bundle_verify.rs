//! Trains a deployable bundle and verifies a few gestures with it.

use becaptcha::bundle::{train_bundle, verify, BundleConfig};
use becaptcha::fixture::{fixture_corpus, FixtureConfig};
use becaptcha::synth::{fit_priors, synth_batch, SynthConfig, DEFAULT_PRIOR_FLOOR};

fn main() -> becaptcha::Result<()> {
    let mut corpus = fixture_corpus(1, 400, &FixtureConfig::default())?;
    let priors = fit_priors(&corpus, DEFAULT_PRIOR_FLOOR)?;
    corpus.extend(synth_batch(&priors, 2, 400, &SynthConfig::default())?);
    let bundle = train_bundle(&corpus, priors.clone(), None, &BundleConfig::default())?;
    println!(
        "calibrated at EER {:.2}%, threshold {:.4}",
        bundle.detector.calibration_eer_percent, bundle.detector.threshold
    );

    let human = fixture_corpus(99, 1, &FixtureConfig::default())?.remove(0);
    let bot = synth_batch(&priors, 99, 1, &SynthConfig::default())?.remove(0);
    let mut no_accel = human.clone();
    no_accel.accel = None;
    for (name, g) in [("human", &human), ("handcrafted", &bot), ("human, no accel", &no_accel)] {
        let v = verify(&bundle, g)?;
        println!("{name:<16} human {}  score {:?}  {:?}", v.is_human, v.human_score, v.warnings);
    }

    let path = std::env::temp_dir().join("becaptcha-example-bundle.json");
    bundle.save(&path)?;
    println!("saved {}", path.display());
    Ok(())
}
