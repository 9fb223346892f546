//! Per-feature histograms of humans and handcrafted fakes as CSV on stdout,
//! with the KS statistic of each group against the humans on stderr.

use becaptcha::eval::{feature_distribution_report, DistributionConfig};
use becaptcha::fixture::{fixture_corpus, FixtureConfig};
use becaptcha::synth::{fit_priors, synth_batch, SynthConfig, DEFAULT_PRIOR_FLOOR};

fn main() -> becaptcha::Result<()> {
    let humans = fixture_corpus(1, 500, &FixtureConfig::default())?;
    let priors = fit_priors(&humans, DEFAULT_PRIOR_FLOOR)?;
    let fakes = synth_batch(&priors, 2, 500, &SynthConfig::default())?;
    let report = feature_distribution_report(&humans, &fakes, None, &DistributionConfig::default())?;
    for f in &report.features {
        let ks = f.group("handcrafted").map_or(f64::NAN, |g| g.ks_vs_human);
        eprintln!("{:>16}  KS handcrafted vs human {ks:.3}", f.feature);
    }
    report.write_csv(std::io::stdout().lock())
}
