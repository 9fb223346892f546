//! Trains a touch generator and compares its fakes with humans and with
//! uniformly random scribbles.
//!
//! ```text
//! cargo run --release --example gan_training -- [epochs] [seed]
//! ```

use becaptcha::features::touch_features;
use becaptcha::fixture::{fixture_corpus, uniform_random_touch, FixtureConfig};
use becaptcha::gan::{synth_gan_batch, train_gan, GanPair, GanShape, Modality, TrainConfig};
use becaptcha::stats::{self, ks_statistic};
use becaptcha::synth::{fit_priors, DEFAULT_PRIOR_FLOOR};

fn column(rows: &[[f64; 6]], k: usize) -> Vec<f64> {
    rows.iter().map(|r| r[k]).collect()
}

fn main() -> becaptcha::Result<()> {
    let mut args = std::env::args().skip(1);
    let epochs: usize = args.next().map_or(10, |a| a.parse().expect("epochs"));
    let seed: u64 = args.next().map_or(0, |a| a.parse().expect("seed"));

    let humans = fixture_corpus(seed, 500, &FixtureConfig::default())?;
    let priors = fit_priors(&humans, DEFAULT_PRIOR_FLOOR)?;
    let config = TrainConfig { epochs, rng_seed: seed, ..TrainConfig::default() };
    let model = train_gan(&humans, Modality::Touch, GanShape::default(), config)?;
    for (i, l) in model.history.iter().enumerate() {
        println!("epoch {:>3}  D {:.4}  G {:.4}", i + 1, l.discriminator, l.generator);
    }

    let pair = GanPair { touch: model, accel: None };
    let fakes = synth_gan_batch(&pair, &priors, seed + 1, 500)?;
    let feats = |gs: &[becaptcha::model::GestureSample]| -> Vec<[f64; 6]> {
        gs.iter().filter_map(|g| touch_features(&g.touch).ok()).map(|f| f.to_array()).collect()
    };
    let h = feats(&humans);
    let g = feats(&fakes);
    let mut rng = stats::rng(seed + 2);
    let u: Vec<[f64; 6]> = (0..500)
        .filter_map(|_| uniform_random_touch(&mut rng, 32, priors.duration.mean).ok())
        .filter_map(|t| touch_features(&t).ok())
        .map(|f| f.to_array())
        .collect();
    println!("\n{:>16} {:>8} {:>8}", "KS vs human", "gan", "uniform");
    for (k, name) in becaptcha::eval::TOUCH_FEATURE_NAMES.iter().enumerate() {
        let hk = column(&h, k);
        println!("{name:>16} {:>8.3} {:>8.3}", ks_statistic(&hk, &column(&g, k)), ks_statistic(&hk, &column(&u, k)));
    }
    Ok(())
}
