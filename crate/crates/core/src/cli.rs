//! Command-line front end. Usage errors exit with 2, data errors with 1.

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::net::SocketAddr;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::bundle::{train_bundle, BundleConfig};
use crate::capture::{ingest_capture, read_captures};
use crate::envelope;
use crate::error::{Error, Result};
use crate::eval::{
    feature_distribution_report, run_cross_generation_table, run_protocol_table, write_eval_csv, BotMethod,
    DistributionConfig, EvalConfig, EvalReport, FeatureTable, Scenario,
};
use crate::features::{accel_features, combine, touch_features, write_feature_csv, FeatureMode};
use crate::fixture::{fixture_corpus, FixtureConfig};
use crate::gan::{synth_gan_batch, train_gan, GanModel, GanPair, GanShape, GeneratorLoss, Modality, TrainConfig};
use crate::model::{GestureSample, Label, Source};
use crate::service::{self, BUNDLE_ENV};
use crate::session::{load_sessions, save_sessions};
use crate::svm::SvmParams;
use crate::synth::{fit_priors, synth_batch, SwipePriors, SynthConfig, DEFAULT_LOG_BASE, DEFAULT_PRIOR_FLOOR};

pub const EXIT_DATA: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "becaptcha", version, about = "Swipe-based bot detection toolkit")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate a simulated pseudo-human corpus.
    Fixture(FixtureArgs),
    /// Convert raw captures into a gesture file.
    Ingest(IngestArgs),
    /// Fit handcrafted-synthesis priors on human gestures.
    FitPriors(FitPriorsArgs),
    /// Generate fake gestures.
    Synth(SynthArgs),
    /// Train a GAN generator for one modality.
    TrainGan(TrainGanArgs),
    /// Write feature vectors as CSV.
    Extract(ExtractArgs),
    /// Train and calibrate a detector bundle.
    TrainDetector(TrainDetectorArgs),
    /// Run the repeated 70/30 evaluation protocol.
    Eval(EvalArgs),
    /// Per-feature histograms and KS statistics by group.
    ReportDistributions(ReportArgs),
    /// Serve the verification API.
    Serve(ServeArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum MethodArg {
    Handcrafted,
    Gan,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum BotArg {
    Handcrafted,
    Gan,
    Cross,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ScenarioArg {
    OneClass,
    Multiclass,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ModeArg {
    Touch,
    TouchAccel,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ModalityArg {
    Touch,
    Accel,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum LossArg {
    Lsgan,
    Reconstruction,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum LabelArg {
    Human,
    Unknown,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SourceArg {
    Recorded,
    Fixture,
    Synthetic,
}

impl From<MethodArg> for BotMethod {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Handcrafted => BotMethod::Handcrafted,
            MethodArg::Gan => BotMethod::Gan,
        }
    }
}

impl From<ScenarioArg> for Scenario {
    fn from(s: ScenarioArg) -> Self {
        match s {
            ScenarioArg::OneClass => Scenario::OneClass,
            ScenarioArg::Multiclass => Scenario::Multiclass,
        }
    }
}

impl From<ModeArg> for FeatureMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Touch => FeatureMode::Touch,
            ModeArg::TouchAccel => FeatureMode::TouchAccel,
        }
    }
}

#[derive(Debug, Args)]
struct FixtureArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    seed: u64,
    #[arg(long, default_value_t = 50)]
    subjects: usize,
    #[arg(long)]
    no_accel: bool,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct IngestArgs {
    /// Capture file, one JSON object per line.
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_enum, default_value = "human")]
    label: LabelArg,
    #[arg(long, value_enum, default_value = "recorded")]
    source: SourceArg,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct FitPriorsArgs {
    /// Gesture files; only human gestures are used.
    #[arg(long, required = true, num_args = 1..)]
    input: Vec<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_PRIOR_FLOOR)]
    floor: usize,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct GanFiles {
    /// Touch generator (required whenever GAN fakes are needed).
    #[arg(long)]
    touch_gan: Option<PathBuf>,
    /// Accelerometer generator.
    #[arg(long)]
    accel_gan: Option<PathBuf>,
}

impl GanFiles {
    fn load(&self) -> Result<Option<GanPair>> {
        let Some(touch) = &self.touch_gan else {
            return match &self.accel_gan {
                Some(_) => Err(Error::ModelMissing("--accel-gan given without --touch-gan".into())),
                None => Ok(None),
            };
        };
        let touch = GanModel::load(touch)?;
        let accel = self.accel_gan.as_ref().map(GanModel::load).transpose()?;
        Ok(Some(GanPair { touch, accel }))
    }
}

#[derive(Debug, Args)]
struct SynthArgs {
    #[arg(long, value_enum)]
    method: MethodArg,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    seed: u64,
    #[arg(long)]
    priors: PathBuf,
    #[command(flatten)]
    gans: GanFiles,
    /// Fixed point count for handcrafted fakes.
    #[arg(long)]
    points: Option<usize>,
    #[arg(long, default_value_t = DEFAULT_LOG_BASE)]
    log_base: f64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct TrainGanArgs {
    #[arg(long, value_enum)]
    modality: ModalityArg,
    #[arg(long, required = true, num_args = 1..)]
    input: Vec<PathBuf>,
    #[arg(long)]
    seed: u64,
    #[arg(long, default_value_t = 50)]
    epochs: usize,
    #[arg(long, default_value_t = 128)]
    batch_size: usize,
    #[arg(long, default_value_t = 2e-4)]
    lr: f64,
    #[arg(long, default_value_t = 32)]
    seq_len: usize,
    /// LSTM widths of the two layers, e.g. `16,16`.
    #[arg(long, value_delimiter = ',', default_values_t = [16, 16])]
    units: Vec<usize>,
    #[arg(long, default_value_t = 8)]
    noise_dim: usize,
    #[arg(long, value_enum, default_value = "lsgan")]
    loss: LossArg,
    /// Generator without the skip connection from its conditioning input.
    #[arg(long)]
    plain: bool,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct ExtractArgs {
    #[arg(long, required = true, num_args = 1..)]
    input: Vec<PathBuf>,
    #[arg(long, value_enum, default_value = "touch-accel")]
    mode: ModeArg,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct SvmArgs {
    #[arg(long, default_value_t = 1.0)]
    c: f64,
    #[arg(long, default_value_t = 0.05)]
    nu: f64,
    /// RBF width; median heuristic when absent.
    #[arg(long)]
    gamma: Option<f64>,
}

impl SvmArgs {
    fn params(&self) -> SvmParams {
        SvmParams {
            c: self.c,
            nu: self.nu,
            gamma: self.gamma,
            ..SvmParams::default()
        }
    }
}

#[derive(Debug, Args)]
struct TrainDetectorArgs {
    /// Gesture files with humans and fakes of `--bot`.
    #[arg(long, required = true, num_args = 1..)]
    input: Vec<PathBuf>,
    #[arg(long, value_enum)]
    scenario: ScenarioArg,
    #[arg(long, value_enum, default_value = "touch-accel")]
    mode: ModeArg,
    /// Fakes for multiclass training and threshold calibration.
    #[arg(long, value_enum, default_value = "handcrafted")]
    bot: MethodArg,
    #[arg(long)]
    seed: u64,
    #[arg(long, default_value_t = 0.7)]
    train_frac: f64,
    /// Fitted on the human inputs when absent.
    #[arg(long)]
    priors: Option<PathBuf>,
    #[command(flatten)]
    gans: GanFiles,
    #[command(flatten)]
    svm: SvmArgs,
    #[arg(long)]
    no_fallback: bool,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct EvalArgs {
    #[arg(long, required = true, num_args = 1..)]
    input: Vec<PathBuf>,
    #[arg(long, value_enum)]
    scenario: ScenarioArg,
    #[arg(long, value_enum)]
    bot: BotArg,
    #[arg(long, value_enum, default_value = "touch-accel")]
    mode: ModeArg,
    #[arg(long)]
    seed: u64,
    #[arg(long, default_value_t = 5)]
    reps: usize,
    #[arg(long, default_value_t = 0.7)]
    train_frac: f64,
    #[command(flatten)]
    svm: SvmArgs,
    /// Structured report.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Flat CSV; stdout when absent.
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ReportArgs {
    #[arg(long, required = true, num_args = 1..)]
    input: Vec<PathBuf>,
    #[arg(long, default_value_t = 30)]
    bins: usize,
    #[arg(long, default_value_t = 100)]
    min_per_group: usize,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Plot-ready CSV; stdout when absent.
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ServeArgs {
    #[arg(long, env = BUNDLE_ENV)]
    bundle: PathBuf,
    #[arg(long, default_value = "127.0.0.1:8080")]
    bind: SocketAddr,
}

fn load_all(paths: &[PathBuf]) -> Result<Vec<GestureSample>> {
    let mut all = Vec::new();
    for p in paths {
        all.extend(load_sessions(p)?);
    }
    Ok(all)
}

fn humans(samples: &[GestureSample]) -> Vec<GestureSample> {
    samples.iter().filter(|g| g.label == Label::Human).cloned().collect()
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    Ok(BufWriter::new(File::create(path).map_err(|e| Error::io(path, e))?))
}

/// Runs `f` with a file writer, or stdout when `path` is `None`.
fn with_output(path: Option<&Path>, f: impl FnOnce(&mut dyn Write) -> Result<()>) -> Result<()> {
    match path {
        Some(p) => {
            let mut w = create(p)?;
            f(&mut w)?;
            w.flush()?;
            Ok(())
        }
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            f(&mut lock)
        }
    }
}

fn created_at() -> u64 {
    if let Some(v) = std::env::var("SOURCE_DATE_EPOCH").ok().and_then(|v| v.parse().ok()) {
        return v;
    }
    SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs())
}

enum Failure {
    Usage(String),
    Data(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Data(e)
    }
}

fn execute(command: Command) -> std::result::Result<(), Failure> {
    match command {
        Command::Fixture(a) => {
            let cfg = FixtureConfig {
                subjects: a.subjects,
                with_accel: !a.no_accel,
                ..FixtureConfig::default()
            };
            save_sessions(&fixture_corpus(a.seed, a.n, &cfg)?, &a.out)?;
            eprintln!("wrote {} fixture gestures (seed {})", a.n, a.seed);
        }
        Command::Ingest(a) => {
            let file = File::open(&a.input).map_err(|e| Error::io(&a.input, e))?;
            let label = match a.label {
                LabelArg::Human => Label::Human,
                LabelArg::Unknown => Label::Unknown,
            };
            let source = match a.source {
                SourceArg::Recorded => Source::Recorded,
                SourceArg::Fixture => Source::Fixture,
                SourceArg::Synthetic => Source::Synthetic,
            };
            let gestures = read_captures(BufReader::new(file))?
                .iter()
                .map(|c| ingest_capture(c, label, source))
                .collect::<Result<Vec<_>>>()?;
            save_sessions(&gestures, &a.out)?;
            eprintln!("ingested {} gestures", gestures.len());
        }
        Command::FitPriors(a) => {
            let priors = fit_priors(&humans(&load_all(&a.input)?), a.floor)?;
            priors.save(&a.out)?;
            eprintln!("fitted priors on {} human gestures", priors.n_fitted);
        }
        Command::Synth(a) => {
            let priors = SwipePriors::load(&a.priors)?;
            let fakes = match a.method {
                MethodArg::Handcrafted => {
                    let cfg = SynthConfig {
                        points: a.points,
                        log_base: a.log_base,
                        ..SynthConfig::default()
                    };
                    synth_batch(&priors, a.seed, a.n, &cfg)?
                }
                MethodArg::Gan => {
                    let pair = a
                        .gans
                        .load()?
                        .ok_or_else(|| Failure::Usage("--method gan needs --touch-gan".into()))?;
                    synth_gan_batch(&pair, &priors, a.seed, a.n)?
                }
            };
            save_sessions(&fakes, &a.out)?;
            eprintln!("wrote {} fakes (seed {})", fakes.len(), a.seed);
        }
        Command::TrainGan(a) => {
            if a.units.len() != 2 {
                return Err(Failure::Usage(format!("--units takes two widths, got {}", a.units.len())));
            }
            let modality = match a.modality {
                ModalityArg::Touch => Modality::Touch,
                ModalityArg::Accel => Modality::Accel,
            };
            let shape = GanShape {
                seq_len: a.seq_len,
                lstm_units: [a.units[0], a.units[1]],
                residual: !a.plain,
            };
            let config = TrainConfig {
                learning_rate: a.lr,
                epochs: a.epochs,
                batch_size: a.batch_size,
                noise_dim: a.noise_dim,
                generator_loss: match a.loss {
                    LossArg::Lsgan => GeneratorLoss::Lsgan,
                    LossArg::Reconstruction => GeneratorLoss::Reconstruction,
                },
                rng_seed: a.seed,
                ..TrainConfig::default()
            };
            let model = train_gan(&humans(&load_all(&a.input)?), modality, shape, config)?;
            model.save(&a.out)?;
            if let Some(last) = model.history.last() {
                eprintln!(
                    "trained {} epochs (seed {}); final losses D {:.4} G {:.4}",
                    model.history.len(),
                    a.seed,
                    last.discriminator,
                    last.generator
                );
            }
        }
        Command::Extract(a) => {
            let mode = FeatureMode::from(a.mode);
            let mut rows = Vec::new();
            let mut skipped = 0;
            for g in load_all(&a.input)? {
                let touch = match touch_features(&g.touch) {
                    Ok(t) => t,
                    Err(Error::DegenerateGesture) => {
                        skipped += 1;
                        continue;
                    }
                    Err(e) => return Err(e.into()),
                };
                let accel = match (mode, &g.accel) {
                    (FeatureMode::TouchAccel, Some(acc)) => Some(accel_features(acc)?),
                    _ => None,
                };
                rows.push(combine(touch, accel));
            }
            write_feature_csv(&rows, create(&a.out)?)?;
            eprintln!("wrote {} rows; skipped {skipped} degenerate gestures", rows.len());
        }
        Command::TrainDetector(a) => {
            let samples = load_all(&a.input)?;
            let priors = match &a.priors {
                Some(p) => SwipePriors::load(p)?,
                None => fit_priors(&humans(&samples), DEFAULT_PRIOR_FLOOR)?,
            };
            let config = BundleConfig {
                scenario: a.scenario.into(),
                feature_mode: a.mode.into(),
                bot_method: a.bot.into(),
                eval: EvalConfig {
                    reps: 1,
                    train_frac: a.train_frac,
                    seed: a.seed,
                    svm: a.svm.params(),
                },
                touch_fallback: !a.no_fallback,
                created_at: created_at(),
            };
            let bundle = train_bundle(&samples, priors, a.gans.load()?, &config)?;
            bundle.save(&a.out)?;
            eprintln!(
                "detector calibrated at EER {:.2}% (threshold {}; seed {})",
                bundle.detector.calibration_eer_percent, bundle.detector.threshold, a.seed
            );
        }
        Command::Eval(a) => {
            let samples = load_all(&a.input)?;
            let table = FeatureTable::extract(&samples, a.mode.into())?;
            let config = EvalConfig {
                reps: a.reps,
                train_frac: a.train_frac,
                seed: a.seed,
                svm: a.svm.params(),
            };
            let reports: Vec<EvalReport> = match a.bot {
                BotArg::Handcrafted | BotArg::Gan => {
                    let method = if matches!(a.bot, BotArg::Gan) { BotMethod::Gan } else { BotMethod::Handcrafted };
                    vec![run_protocol_table(&table, a.scenario.into(), method, &config)?]
                }
                BotArg::Cross => {
                    if a.scenario != ScenarioArg::Multiclass {
                        return Err(Failure::Usage("--bot cross requires --scenario multiclass".into()));
                    }
                    vec![
                        run_cross_generation_table(&table, BotMethod::Handcrafted, BotMethod::Gan, &config)?,
                        run_cross_generation_table(&table, BotMethod::Gan, BotMethod::Handcrafted, &config)?,
                    ]
                }
            };
            if let Some(out) = &a.out {
                envelope::save("eval_reports", &reports, out)?;
            }
            with_output(a.csv.as_deref(), |w| write_eval_csv(&reports, w))?;
            for r in &reports {
                eprintln!("{} {}: mean EER {:.2}% (seed {})", r.scenario.as_str(), r.feature_mode.as_str(), r.mean_eer_percent, a.seed);
            }
        }
        Command::ReportDistributions(a) => {
            let samples = load_all(&a.input)?;
            let group = |l: Label| -> Vec<GestureSample> { samples.iter().filter(|g| g.label == l).cloned().collect() };
            let gan = group(Label::FakeGan);
            let config = DistributionConfig {
                bins: a.bins,
                min_per_group: a.min_per_group,
            };
            let report = feature_distribution_report(
                &group(Label::Human),
                &group(Label::FakeHandcrafted),
                (!gan.is_empty()).then_some(gan.as_slice()),
                &config,
            )?;
            if let Some(out) = &a.out {
                report.save(out)?;
            }
            with_output(a.csv.as_deref(), |w| report.write_csv(w))?;
        }
        Command::Serve(a) => service::serve(&a.bundle, a.bind)?,
    }
    Ok(())
}

/// Parses `args` (including the program name) and runs the command.
/// Returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let _ = e.print();
            return code;
        }
    };
    match execute(cli.command) {
        Ok(()) => 0,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Data(e)) => {
            eprintln!("error: {e}");
            EXIT_DATA
        }
    }
}
