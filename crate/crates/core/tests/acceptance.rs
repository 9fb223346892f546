//! Acceptance run: one PASS/FAIL line per criterion.
//!
//! ```text
//! cargo test --release --test acceptance -- --nocapture
//! ```
//!
//! Criterion 7 uses the same master seed and per-stage seed derivation as
//! `examples/eval_grid.rs`, so the two print the same grid.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::sync::Arc;
use std::time::{Duration, Instant};

use axum::body::Body;
use axum::http::{Request, StatusCode};
use becaptcha::eval::{
    compute_eer, run_cross_generation_table, run_protocol_table, BotMethod, EvalConfig, EvalReport, FeatureTable,
    Scenario, ScoreSet,
};
use becaptcha::features::{accel_features, touch_features, FeatureMode, TouchFeatureVector};
use becaptcha::fixture::{fixture_corpus, uniform_random_touch, FixtureConfig};
use becaptcha::gan::{synth_gan_batch, train_gan, GanModel, GanPair, GanShape, Head, Modality, NetConfig, Network, TrainConfig};
use becaptcha::model::{AccelSample, AccelSequence, GestureRecord, GestureSample, Label, TouchPoint, TouchTrajectory};
use becaptcha::service::{router, AppState};
use becaptcha::stats::{self, derive_seed, ks_statistic};
use becaptcha::svm::{kkt_residual, train_binary, train_one_class, SvmModel, SvmParams};
use becaptcha::synth::{fit_priors, synth_batch, Gaussian, SwipePriors, SynthConfig, DEFAULT_PRIOR_FLOOR};
use http_body_util::BodyExt;
use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::StandardNormal;
use tower::ServiceExt;

mod common;
use common::{axis_oracle, eer_sweep, gradcheck, qp_brute_force, qp_objective, touch_oracle};

/// Master seed of the reproduction run.
const SEED: u64 = 0;
const HUMANS: usize = 1000;
const GAN_HUMANS: usize = 500;

type Check = std::result::Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

struct Outcome {
    pass: bool,
}

/// Runs one criterion, catching panics, and prints its line.
fn criterion(n: u32, name: &str, limit: Duration, extra: Duration, f: impl FnOnce() -> Check) -> Outcome {
    let started = Instant::now();
    let result = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
        let msg = e
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_else(|| "panic".into());
        Err(format!("panicked: {msg}"))
    });
    let elapsed = started.elapsed() + extra;
    let result = match result {
        Ok(detail) if elapsed > limit => Err(format!("{detail}; exceeded {limit:?}")),
        other => other,
    };
    let (pass, detail) = match result {
        Ok(d) => (true, d),
        Err(d) => (false, d),
    };
    println!(
        "criterion {n} {name}: {} ({detail}; {:.1}s)",
        if pass { "PASS" } else { "FAIL" },
        elapsed.as_secs_f64()
    );
    Outcome { pass }
}

fn c1_features() -> Check {
    let traj = TouchTrajectory::new(
        vec![TouchPoint::new(0.0, 0.0, 0.0), TouchPoint::new(0.3, 0.4, 0.1), TouchPoint::new(0.6, 0.0, 0.3)],
        100,
        100,
    )
    .map_err(|e| e.to_string())?;
    let f = touch_features(&traj).map_err(|e| e.to_string())?;
    let want = [0.3, 0.6, 1.0, std::f64::consts::FRAC_PI_2, 3.75, 1.0 / 0.6];
    let got = f.to_array();
    ensure(got.iter().zip(&want).all(|(g, w)| (g - w).abs() < 1e-12), || format!("worked example {got:?}"))?;

    let mut rng = stats::rng(77);
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let n = rng.random_range(2..80);
        let mut t = 0.0;
        let pts: Vec<(f64, f64, f64)> = (0..n)
            .map(|i| {
                if i > 0 {
                    t += rng.random_range(0.001..0.05);
                }
                (rng.random::<f64>(), rng.random::<f64>(), t)
            })
            .collect();
        let traj = TouchTrajectory::new(pts.iter().map(|&(x, y, t)| TouchPoint::new(x, y, t)).collect(), 1080, 1920)
            .map_err(|e| e.to_string())?;
        let got = touch_features(&traj).map_err(|e| e.to_string())?.to_array();
        let want = touch_oracle(&pts);
        for k in 0..6 {
            worst = worst.max((got[k] - want[k]).abs() / (1.0 + want[k].abs()));
        }
        let m = rng.random_range(4..120);
        let samples: Vec<AccelSample> = (0..m)
            .map(|i| AccelSample::new(rng.random_range(-3.0..3.0), rng.random_range(5.0..10.0), rng.random_range(-1.0..8.0), i as f64 * 0.005))
            .collect();
        let a = accel_features(&AccelSequence::new(samples.clone(), 200.0).map_err(|e| e.to_string())?)
            .map_err(|e| e.to_string())?;
        for axis in 0..3 {
            let want = axis_oracle(samples.iter().map(|s| s.axes()[axis]).collect());
            for (g, w) in [a.mean[axis], a.median[axis], a.rms[axis], a.std[axis]].iter().zip(want) {
                worst = worst.max((g - w).abs() / (1.0 + w.abs()));
            }
        }
    }
    ensure(worst <= 1e-9, || format!("max relative deviation {worst:.2e}"))?;
    Ok(format!("1000 gestures, max relative deviation {worst:.1e}"))
}

fn c2_handcrafted() -> Check {
    let humans = fixture_corpus(derive_seed(SEED, 1), 300, &FixtureConfig::default()).map_err(|e| e.to_string())?;
    let priors = fit_priors(&humans, DEFAULT_PRIOR_FLOOR).map_err(|e| e.to_string())?;
    let fakes = synth_batch(&priors, derive_seed(SEED, 2), 1000, &SynthConfig::default()).map_err(|e| e.to_string())?;
    let mut worst_e: f64 = 0.0;
    for g in &fakes {
        let f = touch_features(&g.touch).map_err(|e| e.to_string())?;
        worst_e = worst_e.max((f.move_efficiency - 1.0).abs());
        let speeds: Vec<f64> = g
            .touch
            .points()
            .windows(2)
            .map(|w| (w[1].x - w[0].x).hypot(w[1].y - w[0].y) / (w[1].t - w[0].t))
            .collect();
        ensure(speeds.windows(2).all(|s| s[1] > s[0]), || "segment speeds not strictly increasing".into())?;
    }
    ensure(worst_e <= 1e-9, || format!("|E - 1| up to {worst_e:.2e}"))?;

    let truth = SwipePriors {
        length: Gaussian::new(0.4, 0.05),
        angle: Gaussian::new(1.2, 0.1),
        duration: Gaussian::new(0.3, 0.05),
        start_point: [Gaussian::new(0.25, 0.04), Gaussian::new(0.4, 0.04)],
        accel_stats: None,
        point_count: Gaussian::new(30.0, 4.0),
        n_fitted: 0,
    };
    let n = 1000;
    let mut refit = synth_batch(&truth, 7, n, &SynthConfig::default()).map_err(|e| e.to_string())?;
    refit.iter_mut().for_each(|g| g.label = Label::Human);
    let fit = fit_priors(&refit, DEFAULT_PRIOR_FLOOR).map_err(|e| e.to_string())?;
    for (name, want, got) in [
        ("length", truth.length, fit.length),
        ("angle", truth.angle, fit.angle),
        ("duration", truth.duration, fit.duration),
        ("x0", truth.start_point[0], fit.start_point[0]),
        ("y0", truth.start_point[1], fit.start_point[1]),
    ] {
        let bound = 3.0 * want.std / (n as f64).sqrt();
        ensure((got.mean - want.mean).abs() <= bound, || format!("{name} mean {} vs {}", got.mean, want.mean))?;
    }
    Ok(format!("1000 fakes, max |E - 1| {worst_e:.1e}, priors recovered within 3σ/√n"))
}

fn c3_gradients() -> Check {
    let mut worst: f64 = 0.0;
    for (head, out) in [(Head::Sequence, 2), (Head::Logistic, 1)] {
        let config = NetConfig { input_dim: 3, lstm_units: [4, 3], output_dim: out, seq_len: 5, head };
        let mut rng = stats::rng(derive_seed(SEED, 0x6763));
        let mut net = Network::init(config, &mut rng);
        net.params.iter_mut().for_each(|p| *p *= 2.0);
        let x: Vec<f64> = (0..15).map(|_| rng.random_range(-1.5..1.5)).collect();
        let n_out = net.predict(&x).map_err(|e| e.to_string())?.len();
        let w: Vec<f64> = (0..n_out).map(|_| rng.random_range(-1.0..1.0)).collect();
        worst = worst.max(gradcheck(&mut net, &x, &w, 1e-5));
    }
    ensure(worst <= 1e-4, || format!("relative error {worst:.2e}"))?;
    Ok(format!("both heads, every parameter, max relative error {worst:.1e}"))
}

fn mean_ks(reference: &[TouchFeatureVector], other: &[TouchFeatureVector]) -> f64 {
    (0..6)
        .map(|k| {
            let a: Vec<f64> = reference.iter().map(|f| f.to_array()[k]).collect();
            let b: Vec<f64> = other.iter().map(|f| f.to_array()[k]).collect();
            ks_statistic(&a, &b)
        })
        .sum::<f64>()
        / 6.0
}

fn touch_rows(samples: &[GestureSample]) -> Vec<TouchFeatureVector> {
    samples.iter().filter_map(|g| touch_features(&g.touch).ok()).collect()
}

/// The exact training recipe: defaults are T = 32, batch 128, lr 2e-4, β₁ 0.5.
fn gan_recipe(rng_seed: u64) -> TrainConfig {
    TrainConfig { epochs: 50, rng_seed, ..TrainConfig::default() }
}

fn c4_gan(humans: &[GestureSample], priors: &SwipePriors, touch_gan: &GanModel) -> Check {
    let again = train_gan(&humans[..GAN_HUMANS], Modality::Touch, GanShape::default(), gan_recipe(derive_seed(SEED, 3)))
        .map_err(|e| e.to_string())?;
    ensure(&again == touch_gan, || "two runs with the same seed differ".into())?;
    let cfg = touch_gan.train;
    ensure(
        cfg.epochs == 50 && cfg.batch_size == 128 && cfg.learning_rate == 2e-4 && cfg.adam_beta1 == 0.5 && touch_gan.shape.seq_len == 32,
        || format!("recipe {cfg:?}"),
    )?;

    let pair = GanPair { touch: touch_gan.clone(), accel: None };
    let fakes = synth_gan_batch(&pair, priors, derive_seed(SEED, 5), HUMANS).map_err(|e| e.to_string())?;
    let human_rows = touch_rows(humans);
    let gan_rows = touch_rows(&fakes);
    let mut rng = stats::rng(derive_seed(SEED, 0x7572));
    let uniform: Vec<TouchFeatureVector> = (0..HUMANS)
        .filter_map(|_| {
            let duration = priors.duration.mean;
            uniform_random_touch(&mut rng, 32, duration).ok().and_then(|t| touch_features(&t).ok())
        })
        .collect();
    let ks_gan = mean_ks(&human_rows, &gan_rows);
    let ks_uniform = mean_ks(&human_rows, &uniform);
    ensure(ks_gan < ks_uniform, || format!("mean KS gan {ks_gan:.3} vs uniform {ks_uniform:.3}"))?;
    Ok(format!("mean KS gan {ks_gan:.3} < uniform {ks_uniform:.3}; retrain identical"))
}

fn standardized_kernel(model: &SvmModel, x: &[Vec<f64>]) -> DMatrix<f64> {
    let z: Vec<Vec<f64>> = x.iter().map(|r| model.standardizer.apply(r).unwrap()).collect();
    DMatrix::from_fn(z.len(), z.len(), |i, j| model.kernel.eval(&z[i], &z[j]))
}

fn blobs(rng: &mut impl Rng, n: usize, dim: usize, shift: f64) -> Vec<Vec<f64>> {
    (0..n).map(|_| (0..dim).map(|_| rng.sample::<f64, _>(StandardNormal) + shift).collect()).collect()
}

fn c5_svm() -> Check {
    let mut worst_obj: f64 = 0.0;
    let mut worst_kkt: f64 = 0.0;
    for trial in 0..6u64 {
        let mut rng = stats::rng(derive_seed(SEED, 0x5100 + trial));
        let mut x = blobs(&mut rng, 5, 3, 0.0);
        x.extend(blobs(&mut rng, 5, 3, 0.8));
        let labels: Vec<bool> = (0..10).map(|i| i < 5).collect();
        let c = [0.5, 1.0, 10.0][trial as usize % 3];
        let m = train_binary(&x, &labels, &SvmParams { c, ..SvmParams::default() }).map_err(|e| e.to_string())?;
        let y: Vec<f64> = labels.iter().map(|&h| if h { 1.0 } else { -1.0 }).collect();
        let k = standardized_kernel(&m, &x);
        let q = DMatrix::from_fn(10, 10, |i, j| y[i] * y[j] * k[(i, j)]);
        let p = vec![-1.0; 10];
        let want = qp_brute_force(&q, &p, &y, 0.0, c);
        worst_obj = worst_obj.max((qp_objective(&q, &p, &m.alpha_full()) - want).abs());
        worst_kkt = worst_kkt.max(kkt_residual(&m, &x, Some(&labels)).map_err(|e| e.to_string())?);

        let x = blobs(&mut rng, 10, 2, 0.0);
        let nu = [0.2, 0.5, 0.8][trial as usize % 3];
        let m = train_one_class(&x, &SvmParams { nu, ..SvmParams::default() }).map_err(|e| e.to_string())?;
        let q = standardized_kernel(&m, &x);
        let p = vec![0.0; 10];
        let want = qp_brute_force(&q, &p, &[1.0; 10], 1.0, 1.0 / (nu * 10.0));
        worst_obj = worst_obj.max((qp_objective(&q, &p, &m.alpha_full()) - want).abs());
        worst_kkt = worst_kkt.max(kkt_residual(&m, &x, None).map_err(|e| e.to_string())?);
    }
    let mut rng = stats::rng(derive_seed(SEED, 0x5200));
    let x = blobs(&mut rng, 200, 4, 0.0);
    let mut worst_nu: f64 = 0.0;
    for nu in [0.05, 0.1, 0.2, 0.5] {
        let m = train_one_class(&x, &SvmParams { nu, ..SvmParams::default() }).map_err(|e| e.to_string())?;
        let outside = x.iter().filter(|r| m.decision_score(r).unwrap() < 0.0).count() as f64 / 200.0;
        worst_nu = worst_nu.max((outside - nu).abs());
        worst_kkt = worst_kkt.max(kkt_residual(&m, &x, None).map_err(|e| e.to_string())?);
    }
    ensure(worst_obj <= 1e-4, || format!("objective gap {worst_obj:.2e}"))?;
    ensure(worst_kkt <= 1e-3, || format!("KKT residual {worst_kkt:.2e}"))?;
    ensure(worst_nu <= 0.05, || format!("outlier fraction off ν by {worst_nu:.3}"))?;
    Ok(format!(
        "objective gap {worst_obj:.1e}, KKT residual {worst_kkt:.1e}, ν deviation {:.1} points",
        100.0 * worst_nu
    ))
}

fn c6_eer() -> Check {
    let mut rng = stats::rng(derive_seed(SEED, 0x4545));
    let gaussian = |rng: &mut stats::Rng, n: usize, mu: f64, sd: f64| -> Vec<f64> {
        (0..n).map(|_| mu + sd * rng.sample::<f64, _>(StandardNormal)).collect()
    };
    let mut worst: f64 = 0.0;
    for _ in 0..50 {
        let sep = rng.random_range(0.0..3.0);
        let genuine = gaussian(&mut rng, 1000, sep, 1.0);
        let sd = rng.random_range(0.5..2.0);
        let impostor = gaussian(&mut rng, 1000, 0.0, sd);
        let got = compute_eer(&ScoreSet { genuine: genuine.clone(), impostor: impostor.clone() }).map_err(|e| e.to_string())?;
        worst = worst.max((got.eer_percent - eer_sweep(&genuine, &impostor)).abs());
    }
    ensure(worst <= 0.1, || format!("deviation {worst:.3} points"))?;
    let sep = compute_eer(&ScoreSet { genuine: vec![0.9, 0.8], impostor: vec![0.1, 0.2] }).map_err(|e| e.to_string())?;
    let inv = compute_eer(&ScoreSet { genuine: vec![0.1, 0.2], impostor: vec![0.8, 0.9] }).map_err(|e| e.to_string())?;
    ensure(sep.eer_percent == 0.0 && inv.eer_percent == 100.0, || format!("{} / {}", sep.eer_percent, inv.eer_percent))?;
    Ok(format!("50 sets, max deviation {worst:.3} points; separated 0%, inverted 100%"))
}

fn c7_eval_grid(humans: &[GestureSample], priors: &SwipePriors, touch_gan: &GanModel) -> Check {
    let e = |e: becaptcha::Error| e.to_string();
    let handcrafted = synth_batch(priors, derive_seed(SEED, 2), HUMANS, &SynthConfig::default()).map_err(e)?;
    let accel_gan = train_gan(
        &humans[..GAN_HUMANS],
        Modality::Accel,
        GanShape::default(),
        gan_recipe(derive_seed(SEED, 4)),
    )
    .map_err(e)?;
    let pair = GanPair { touch: touch_gan.clone(), accel: Some(accel_gan) };
    let gan = synth_gan_batch(&pair, priors, derive_seed(SEED, 5), HUMANS).map_err(e)?;
    let mut corpus = humans.to_vec();
    corpus.extend(handcrafted);
    corpus.extend(gan);
    let config = EvalConfig { seed: derive_seed(SEED, 6), ..EvalConfig::default() };

    let mut grid = Vec::new();
    let mut cross = Vec::new();
    for mode in [FeatureMode::Touch, FeatureMode::TouchAccel] {
        let table = FeatureTable::extract(&corpus, mode).map_err(e)?;
        for method in [BotMethod::Handcrafted, BotMethod::Gan] {
            let one = run_protocol_table(&table, Scenario::OneClass, method, &config).map_err(e)?;
            let multi = run_protocol_table(&table, Scenario::Multiclass, method, &config).map_err(e)?;
            println!(
                "    {:<12} {:<12} one_class {:>5.1}%  multiclass {:>5.1}%",
                mode.as_str(),
                method.as_str(),
                one.mean_eer_percent,
                multi.mean_eer_percent
            );
            grid.push((mode, method, one.mean_eer_percent, multi.mean_eer_percent));
        }
        if mode == FeatureMode::TouchAccel {
            for (a, b) in [(BotMethod::Handcrafted, BotMethod::Gan), (BotMethod::Gan, BotMethod::Handcrafted)] {
                let r = run_cross_generation_table(&table, a, b, &config).map_err(e)?;
                println!("    cross {} > {}: {:.1}%", a.as_str(), b.as_str(), r.mean_eer_percent);
                cross.push((b, r.mean_eer_percent));
            }
        }
    }
    let cell = |mode, method| grid.iter().find(|c| c.0 == mode && c.1 == method).copied().unwrap();

    let a = grid.iter().all(|c| c.3 <= c.2);
    let b = cell(FeatureMode::TouchAccel, BotMethod::Handcrafted).2 <= 5.0;
    let (touch_hc, touch_gan_eer) = (cell(FeatureMode::Touch, BotMethod::Handcrafted).2, cell(FeatureMode::Touch, BotMethod::Gan).2);
    let c = touch_gan_eer >= touch_hc;
    // each cross run is matched with multiclass training on its test method
    let cross_mean = cross.iter().map(|c| c.1).sum::<f64>() / cross.len() as f64;
    let matched_mean = cross.iter().map(|c| cell(FeatureMode::TouchAccel, c.0).3).sum::<f64>() / cross.len() as f64;
    let d = cross_mean >= matched_mean;
    let detail = format!(
        "(a) {} (b) {} {:.1}% (c) {} {:.1}% >= {:.1}% (d) {} cross {:.1}% >= matched {:.1}%",
        verdict(a),
        verdict(b),
        cell(FeatureMode::TouchAccel, BotMethod::Handcrafted).2,
        verdict(c),
        touch_gan_eer,
        touch_hc,
        verdict(d),
        cross_mean,
        matched_mean
    );
    if a && b && c && d {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "ok"
    } else {
        "violated"
    }
}

/// synth → GAN → train → eval on a reduced corpus, serialized.
fn pipeline_reports(seed: u64) -> becaptcha::Result<String> {
    let humans = fixture_corpus(derive_seed(seed, 1), 300, &FixtureConfig::default())?;
    let priors = fit_priors(&humans, DEFAULT_PRIOR_FLOOR)?;
    let mut corpus = humans.clone();
    corpus.extend(synth_batch(&priors, derive_seed(seed, 2), 300, &SynthConfig::default())?);
    let shape = GanShape { seq_len: 16, lstm_units: [8, 8], residual: true };
    let train = TrainConfig { epochs: 3, batch_size: 64, rng_seed: derive_seed(seed, 3), ..TrainConfig::default() };
    let pair = GanPair {
        touch: train_gan(&humans, Modality::Touch, shape, train)?,
        accel: Some(train_gan(&humans, Modality::Accel, shape, TrainConfig { rng_seed: derive_seed(seed, 4), ..train })?),
    };
    corpus.extend(synth_gan_batch(&pair, &priors, derive_seed(seed, 5), 300)?);
    let config = EvalConfig { seed: derive_seed(seed, 6), ..EvalConfig::default() };
    let table = FeatureTable::extract(&corpus, FeatureMode::TouchAccel)?;
    let reports: Vec<EvalReport> = vec![
        run_protocol_table(&table, Scenario::OneClass, BotMethod::Handcrafted, &config)?,
        run_protocol_table(&table, Scenario::Multiclass, BotMethod::Gan, &config)?,
        run_cross_generation_table(&table, BotMethod::Handcrafted, BotMethod::Gan, &config)?,
    ];
    becaptcha::envelope::to_string("eval_reports", &reports)
}

fn c8_determinism() -> Check {
    let a = pipeline_reports(SEED).map_err(|e| e.to_string())?;
    let b = pipeline_reports(SEED).map_err(|e| e.to_string())?;
    ensure(a == b, || "reports differ between runs".into())?;
    let c = pipeline_reports(SEED + 1).map_err(|e| e.to_string())?;
    ensure(a != c, || "a different seed gave the same reports".into())?;
    Ok(format!("two runs byte-identical ({} bytes)", a.len()))
}

fn c9_service() -> Check {
    let golden = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden");
    let state = Arc::new(AppState::load(golden.join("bundle.json")).map_err(|e| e.to_string())?);
    let gesture = std::fs::read(golden.join("gesture.json")).map_err(|e| e.to_string())?;
    let want = std::fs::read(golden.join("verdict.json")).map_err(|e| e.to_string())?;
    let runtime = tokio::runtime::Runtime::new().map_err(|e| e.to_string())?;
    runtime.block_on(async {
        let app = router(state.clone());
        let post = |body: Vec<u8>| Request::post("/verify").header("content-type", "application/json").body(Body::from(body)).unwrap();
        let call = |app: axum::Router, req: Request<Body>| async move {
            let resp = app.oneshot(req).await.unwrap();
            let status = resp.status();
            (status, resp.into_body().collect().await.unwrap().to_bytes().to_vec())
        };
        let (status, body) = call(app.clone(), post(gesture)).await;
        ensure(status == StatusCode::OK && body == want, || format!("golden verdict mismatch: {status} {}", String::from_utf8_lossy(&body)))?;

        let mut bodies: Vec<Vec<u8>> = fixture_corpus(31, 50, &FixtureConfig::default())
            .unwrap()
            .into_iter()
            .chain(synth_batch(&state.bundle.priors, 32, 50, &SynthConfig::default()).unwrap())
            .map(|g| serde_json::to_vec(&GestureRecord::from(g)).unwrap())
            .collect();
        bodies.truncate(100);
        let mut serial = Vec::new();
        for b in &bodies {
            serial.push(call(app.clone(), post(b.clone())).await);
        }
        let tasks: Vec<_> = bodies.iter().map(|b| tokio::spawn(call(app.clone(), post(b.clone())))).collect();
        for (t, s) in tasks.into_iter().zip(&serial) {
            let got = t.await.unwrap();
            ensure(&got == s, || "concurrent response differs from serial".into())?;
        }
        Ok(format!("golden verdict reproduced; {} concurrent requests match serial", bodies.len()))
    })
}

#[test]
fn acceptance() {
    let mut outcomes = Vec::new();
    let secs = Duration::from_secs;
    outcomes.push(criterion(1, "feature oracle", secs(1), Duration::ZERO, c1_features));
    outcomes.push(criterion(2, "handcrafted fidelity", secs(5), Duration::ZERO, c2_handcrafted));
    outcomes.push(criterion(3, "GAN gradients", secs(30), Duration::ZERO, c3_gradients));

    // shared by criteria 4 and 7, with the seeds of examples/eval_grid.rs
    let data_started = Instant::now();
    let humans = fixture_corpus(derive_seed(SEED, 1), HUMANS, &FixtureConfig::default()).expect("fixture corpus");
    let priors = fit_priors(&humans, DEFAULT_PRIOR_FLOOR).expect("priors");
    let touch_gan = train_gan(&humans[..GAN_HUMANS], Modality::Touch, GanShape::default(), gan_recipe(derive_seed(SEED, 3)))
        .expect("touch GAN");
    let shared = data_started.elapsed();

    outcomes.push(criterion(4, "GAN usefulness", secs(600), shared, || c4_gan(&humans, &priors, &touch_gan)));
    outcomes.push(criterion(5, "SVM correctness", secs(30), Duration::ZERO, c5_svm));
    outcomes.push(criterion(6, "EER estimator", secs(5), Duration::ZERO, c6_eer));
    outcomes.push(criterion(7, "evaluation grid ordering", secs(900), shared, || c7_eval_grid(&humans, &priors, &touch_gan)));
    outcomes.push(criterion(8, "determinism", Duration::MAX, Duration::ZERO, c8_determinism));
    outcomes.push(criterion(9, "service contract", Duration::MAX, Duration::ZERO, c9_service));

    let failed = outcomes.iter().filter(|o| !o.pass).count();
    assert_eq!(failed, 0, "{failed} acceptance criteria failed");
}
