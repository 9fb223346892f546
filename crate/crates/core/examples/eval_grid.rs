//! Full evaluation grid on the fixture corpus: one-class and multiclass
//! detectors, touch and touch+accel features, handcrafted and GAN fakes,
//! plus both cross-generation directions.
//!
//! ```text
//! cargo run --release --example eval_grid -- [humans] [gan_epochs] [seed]
//! ```
//!
//! Every stage draws its own seed from the master seed, so the default run
//! matches the acceptance test.

use std::time::Instant;

use becaptcha::eval::{run_cross_generation_table, run_protocol_table, BotMethod, EvalConfig, FeatureTable, Scenario};
use becaptcha::features::FeatureMode;
use becaptcha::fixture::{fixture_corpus, FixtureConfig};
use becaptcha::stats::derive_seed;
use becaptcha::gan::{synth_gan_batch, train_gan, GanPair, GanShape, Modality, TrainConfig};
use becaptcha::synth::{fit_priors, synth_batch, SynthConfig, DEFAULT_PRIOR_FLOOR};

fn main() -> becaptcha::Result<()> {
    let args: Vec<u64> = std::env::args().skip(1).map(|a| a.parse().expect("numeric argument")).collect();
    let n = args.first().copied().unwrap_or(1000) as usize;
    let epochs = args.get(1).copied().unwrap_or(50) as usize;
    let seed = args.get(2).copied().unwrap_or(0);

    let started = Instant::now();
    let human = fixture_corpus(derive_seed(seed, 1), n, &FixtureConfig::default())?;
    let priors = fit_priors(&human, DEFAULT_PRIOR_FLOOR)?;
    let handcrafted = synth_batch(&priors, derive_seed(seed, 2), n, &SynthConfig::default())?;

    let train = TrainConfig {
        epochs,
        rng_seed: derive_seed(seed, 3),
        ..TrainConfig::default()
    };
    let gan_humans = &human[..n.min(500)];
    let pair = GanPair {
        touch: train_gan(gan_humans, Modality::Touch, GanShape::default(), train)?,
        accel: Some(train_gan(gan_humans, Modality::Accel, GanShape::default(), TrainConfig { rng_seed: derive_seed(seed, 4), ..train })?),
    };
    let gan = synth_gan_batch(&pair, &priors, derive_seed(seed, 5), n)?;
    println!("data ready in {:.1?}", started.elapsed());

    let mut corpus = human;
    corpus.extend(handcrafted);
    corpus.extend(gan);
    let config = EvalConfig {
        seed: derive_seed(seed, 6),
        ..EvalConfig::default()
    };

    println!("{:<18} {:<12} {:>12} {:>8}", "scenario", "features", "handcrafted", "gan");
    for mode in [FeatureMode::Touch, FeatureMode::TouchAccel] {
        let table = FeatureTable::extract(&corpus, mode)?;
        for scenario in [Scenario::OneClass, Scenario::Multiclass] {
            let hc = run_protocol_table(&table, scenario, BotMethod::Handcrafted, &config)?;
            let g = run_protocol_table(&table, scenario, BotMethod::Gan, &config)?;
            println!(
                "{:<18} {:<12} {:>11.1}% {:>7.1}%",
                scenario.as_str(),
                mode.as_str(),
                hc.mean_eer_percent,
                g.mean_eer_percent
            );
        }
        if mode == FeatureMode::TouchAccel {
            let a = run_cross_generation_table(&table, BotMethod::Handcrafted, BotMethod::Gan, &config)?;
            let b = run_cross_generation_table(&table, BotMethod::Gan, BotMethod::Handcrafted, &config)?;
            println!("cross: train handcrafted / test gan {:.1}%", a.mean_eer_percent);
            println!("cross: train gan / test handcrafted {:.1}%", b.mean_eer_percent);
        }
    }
    println!("total {:.1?}", started.elapsed());
    Ok(())
}
