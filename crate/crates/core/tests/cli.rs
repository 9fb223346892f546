//! The `becaptcha` binary end to end: exit codes, determinism, file formats.
//!
//! Golden files are rewritten with `BECAPTCHA_REGEN_GOLDEN=1`.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use becaptcha::bundle::ModelBundle;
use becaptcha::gan::GanModel;
use becaptcha::model::{Label, Source};
use becaptcha::session::load_sessions;
use becaptcha::synth::SwipePriors;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_becaptcha"));
    c.env("SOURCE_DATE_EPOCH", "1700000000");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("spawn becaptcha")
}

fn ok(args: &[&str]) -> Output {
    let out = run(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    out
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn golden(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name)
}

fn check_golden(name: &str, actual: &[u8]) {
    let path = golden(name);
    if std::env::var_os("BECAPTCHA_REGEN_GOLDEN").is_some() {
        std::fs::write(&path, actual).unwrap();
    }
    let want = std::fs::read(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    assert_eq!(String::from_utf8_lossy(actual), String::from_utf8_lossy(&want), "{name} differs");
}

/// Fixture humans plus handcrafted fakes, built through the CLI.
fn corpus(dir: &Path) -> (PathBuf, PathBuf, PathBuf) {
    let humans = dir.join("humans.jsonl");
    let priors = dir.join("priors.json");
    let fakes = dir.join("fakes.jsonl");
    ok(&["fixture", "--n", "200", "--seed", "11", "--out", p(&humans)]);
    ok(&["fit-priors", "--input", p(&humans), "--out", p(&priors)]);
    ok(&["synth", "--method", "handcrafted", "--n", "200", "--seed", "12", "--priors", p(&priors), "--out", p(&fakes)]);
    (humans, priors, fakes)
}

#[test]
fn synth_is_seed_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let (_, priors, fakes) = corpus(dir.path());
    let again = dir.path().join("again.jsonl");
    ok(&["synth", "--method", "handcrafted", "--n", "200", "--seed", "12", "--priors", p(&priors), "--out", p(&again)]);
    assert_eq!(std::fs::read(&fakes).unwrap(), std::fs::read(&again).unwrap());
    let other = dir.path().join("other.jsonl");
    ok(&["synth", "--method", "handcrafted", "--n", "200", "--seed", "13", "--priors", p(&priors), "--out", p(&other)]);
    assert_ne!(std::fs::read(&fakes).unwrap(), std::fs::read(&other).unwrap());

    let loaded = load_sessions(&fakes).unwrap();
    assert_eq!(loaded.len(), 200);
    assert!(loaded.iter().all(|g| g.label == Label::FakeHandcrafted));
    assert!(SwipePriors::load(&priors).unwrap().n_fitted > 0);
}

#[test]
fn eval_matches_golden_csv() {
    let dir = tempfile::tempdir().unwrap();
    let (humans, _, fakes) = corpus(dir.path());
    let report = dir.path().join("report.json");
    let out = ok(&[
        "eval", "--input", p(&humans), p(&fakes), "--scenario", "one-class", "--bot", "handcrafted", "--mode", "touch",
        "--seed", "13", "--out", p(&report),
    ]);
    check_golden("eval_one_class_touch.csv", &out.stdout);
    let text = std::fs::read_to_string(&report).unwrap();
    assert!(text.starts_with(r#"{"format":"becaptcha-model","version":1,"kind":"eval_reports""#));

    let csv = dir.path().join("multi.csv");
    ok(&[
        "eval", "--input", p(&humans), p(&fakes), "--scenario", "multiclass", "--bot", "handcrafted", "--seed", "13",
        "--csv", p(&csv),
    ]);
    let text = std::fs::read_to_string(&csv).unwrap();
    assert_eq!(text.lines().count(), 1 + 5 + 1);
    assert!(text.lines().nth(1).unwrap().starts_with("multiclass,touch_accel,handcrafted,0,"));
}

#[test]
fn usage_and_data_errors() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(run(&["fixture", "--n", "5", "--seed", "1", "--bogus"]).status.code(), Some(2));
    assert_eq!(run(&["fixture", "--n", "5", "--out", "x.jsonl"]).status.code(), Some(2), "--seed is required");
    assert_eq!(run(&["nope"]).status.code(), Some(2));
    let args = ["train-gan", "--modality", "touch", "--input", "x", "--seed", "1", "--out", "y", "--units", "4,4,4"];
    assert_eq!(run(&args).status.code(), Some(2));
    assert_eq!(run(&["--help"]).status.code(), Some(0));

    let missing = dir.path().join("missing.jsonl");
    let out = run(&["fit-priors", "--input", p(&missing), "--out", p(&dir.path().join("x"))]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("missing.jsonl"));

    let bad = dir.path().join("bad.jsonl");
    std::fs::write(&bad, "{\"schema\":\"becaptcha/1\"}\n{not json\n").unwrap();
    let out = run(&["extract", "--input", p(&bad), "--out", p(&dir.path().join("f.csv"))]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"), "{}", String::from_utf8_lossy(&out.stderr));

    let (humans, priors, fakes) = corpus(dir.path());
    let out = run(&[
        "eval", "--input", p(&humans), p(&fakes), "--scenario", "one-class", "--bot", "cross", "--seed", "1",
    ]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["synth", "--method", "gan", "--n", "3", "--seed", "1", "--priors", p(&priors), "--out", p(&dir.path().join("g"))]);
    assert_eq!(out.status.code(), Some(2));
    // humans only: the multiclass scenario has no fakes to train on
    let out = run(&["eval", "--input", p(&humans), "--scenario", "multiclass", "--bot", "handcrafted", "--seed", "1"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn ingest_captures() {
    let dir = tempfile::tempdir().unwrap();
    let input = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data/captures.jsonl");
    let out = dir.path().join("ingested.jsonl");
    ok(&["ingest", "--input", p(&input), "--out", p(&out)]);
    let g = load_sessions(&out).unwrap();
    assert_eq!(g.len(), 3);
    assert!(g.iter().all(|s| s.label == Label::Human && s.meta.source == Source::Recorded));
    assert!(g[0].accel.is_some() && g[1].accel.is_some() && g[2].accel.is_none());
    assert_eq!(g[0].touch.first().t, 0.0);
    assert!((g[0].accel.as_ref().unwrap().rate_hz() - 200.0).abs() < 1e-12);
    // estimated from timestamps: one sample every 5 ms
    assert!((g[1].accel.as_ref().unwrap().rate_hz() - 200.0).abs() < 1e-6);

    let csv = dir.path().join("features.csv");
    ok(&["extract", "--input", p(&out), "--mode", "touch", "--out", p(&csv)]);
    let text = std::fs::read_to_string(&csv).unwrap();
    assert_eq!(text.lines().count(), 4);
}

#[test]
fn gan_and_bundle_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    let (humans, priors, fakes) = corpus(dir.path());
    let tg = dir.path().join("touch_gan.json");
    let ag = dir.path().join("accel_gan.json");
    let small = ["--epochs", "2", "--batch-size", "32", "--seq-len", "8", "--units", "4,4", "--seed", "5"];
    ok(&[&["train-gan", "--modality", "touch", "--input", p(&humans), "--out", p(&tg)], &small[..]].concat());
    ok(&[&["train-gan", "--modality", "accel", "--input", p(&humans), "--out", p(&ag)], &small[..]].concat());
    assert_eq!(GanModel::load(&tg).unwrap().history.len(), 2);

    let gan_fakes = dir.path().join("gan.jsonl");
    let gan_args = ["--touch-gan", p(&tg), "--accel-gan", p(&ag)];
    ok(&[&["synth", "--method", "gan", "--n", "50", "--seed", "6", "--priors", p(&priors), "--out", p(&gan_fakes)], &gan_args[..]].concat());
    let g = load_sessions(&gan_fakes).unwrap();
    assert_eq!(g.len(), 50);
    assert!(g.iter().all(|s| s.label == Label::FakeGan && s.accel.is_some()));

    let bundle = dir.path().join("bundle.json");
    ok(&[
        &["train-detector", "--input", p(&humans), p(&fakes), "--scenario", "one-class", "--seed", "7", "--priors", p(&priors), "--out", p(&bundle)],
        &gan_args[..],
    ]
    .concat());
    let b = ModelBundle::load(&bundle).unwrap();
    assert_eq!(b.created_at, 1_700_000_000);
    assert!(b.gans.is_some() && b.touch_fallback.is_some());

    let csv = dir.path().join("dist.csv");
    ok(&["report-distributions", "--input", p(&humans), p(&fakes), "--bins", "10", "--min-per-group", "50", "--csv", p(&csv)]);
    assert_eq!(std::fs::read_to_string(&csv).unwrap().lines().count(), 1 + 6 * 2 * 10);
}
