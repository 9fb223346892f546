//! Runs the verification service on a freshly trained bundle.
//!
//! ```text
//! cargo run --example serve -- [addr]
//! curl -s localhost:8080/health
//! curl -s 'localhost:8080/synth?method=handcrafted&seed=1' | curl -s -d @- localhost:8080/verify
//! ```

use std::sync::Arc;

use becaptcha::bundle::{bundle_hash, train_bundle, BundleConfig};
use becaptcha::fixture::{fixture_corpus, FixtureConfig};
use becaptcha::service::{serve_on, AppState};
use becaptcha::synth::{fit_priors, synth_batch, SynthConfig, DEFAULT_PRIOR_FLOOR};

#[tokio::main]
async fn main() -> becaptcha::Result<()> {
    let addr = std::env::args().nth(1).unwrap_or_else(|| "127.0.0.1:8080".into());
    let mut corpus = fixture_corpus(1, 400, &FixtureConfig::default())?;
    let priors = fit_priors(&corpus, DEFAULT_PRIOR_FLOOR)?;
    corpus.extend(synth_batch(&priors, 2, 400, &SynthConfig::default())?);
    let bundle = train_bundle(&corpus, priors, None, &BundleConfig::default())?;
    let bytes = bundle.to_json()?;
    let state = Arc::new(AppState { bundle, bundle_sha256: bundle_hash(bytes.as_bytes()) });

    let listener = tokio::net::TcpListener::bind(&addr).await?;
    println!("listening on http://{}", listener.local_addr()?);
    serve_on(listener, state).await
}
