//! Generates a pseudo-human corpus and writes it as a gesture file.
//!
//! ```text
//! cargo run --example fixture_corpus -- [n] [seed] [out.jsonl]
//! ```

use becaptcha::features::touch_features;
use becaptcha::fixture::{fixture_corpus, FixtureConfig};
use becaptcha::session::save_sessions;
use becaptcha::stats;

fn main() -> becaptcha::Result<()> {
    let mut args = std::env::args().skip(1);
    let n: usize = args.next().map_or(200, |a| a.parse().expect("n"));
    let seed: u64 = args.next().map_or(0, |a| a.parse().expect("seed"));
    let out = args.next().unwrap_or_else(|| "fixture.jsonl".into());

    let corpus = fixture_corpus(seed, n, &FixtureConfig::default())?;
    let durations: Vec<f64> = corpus.iter().map(|g| g.touch.duration()).collect();
    let efficiencies: Vec<f64> = corpus
        .iter()
        .filter_map(|g| touch_features(&g.touch).ok())
        .map(|f| f.move_efficiency)
        .collect();
    println!("{n} gestures, seed {seed}");
    println!("duration        mean {:.3} s  std {:.3}", stats::mean(&durations), stats::pop_std(&durations));
    println!("move efficiency mean {:.4}    min {:.4}", stats::mean(&efficiencies), efficiencies.iter().cloned().fold(f64::INFINITY, f64::min));
    save_sessions(&corpus, &out)?;
    println!("wrote {out}");
    Ok(())
}
