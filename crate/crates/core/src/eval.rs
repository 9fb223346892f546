//! Detector evaluation: EER estimation, the repeated 70/30 protocol in its
//! one-class, multiclass and cross-generation forms, and per-feature
//! distribution reports.

use std::io::Write;
use std::path::Path;

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use crate::envelope;
use crate::error::{Error, Result};
use crate::features::{accel_features, combine, touch_features, FeatureMode, TOUCH_DIM};
use crate::model::{GestureSample, Label};
use crate::stats::{self, derive_seed};
use crate::svm::{train_binary, train_one_class, SvmModel, SvmParams};

/// Detector scores split by ground truth. Higher means more human.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ScoreSet {
    pub genuine: Vec<f64>,
    pub impostor: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EerPoint {
    pub eer_percent: f64,
    pub threshold: f64,
}

fn fraction_at_least(sorted: &[f64], theta: f64) -> f64 {
    let below = sorted.partition_point(|s| *s < theta);
    (sorted.len() - below) as f64 / sorted.len() as f64
}

/// Equal error rate of a score set.
///
/// Thresholds run over every distinct score plus one just above the maximum.
/// `FMR(θ)` is the fraction of impostors with score `≥ θ`, `FNMR(θ)` the
/// fraction of genuine scores `< θ`. The first threshold where `FMR ≤ FNMR`
/// is located; an exact tie is returned as is (the lowest such threshold),
/// otherwise both rates and the threshold are interpolated linearly from the
/// previous grid point to where the rates meet.
pub fn compute_eer(scores: &ScoreSet) -> Result<EerPoint> {
    if scores.genuine.is_empty() || scores.impostor.is_empty() {
        return Err(Error::EmptyScores);
    }
    let finite = |v: &[f64]| v.iter().all(|s| s.is_finite());
    if !finite(&scores.genuine) || !finite(&scores.impostor) {
        return Err(Error::Invalid("scores must be finite".into()));
    }
    let mut genuine = scores.genuine.clone();
    let mut impostor = scores.impostor.clone();
    genuine.sort_by(f64::total_cmp);
    impostor.sort_by(f64::total_cmp);

    let mut grid: Vec<f64> = genuine.iter().chain(&impostor).copied().collect();
    grid.sort_by(f64::total_cmp);
    grid.dedup();
    grid.push(grid[grid.len() - 1].next_up());

    let rates = |theta: f64| {
        let fmr = fraction_at_least(&impostor, theta);
        let fnmr = 1.0 - fraction_at_least(&genuine, theta);
        (fmr, fnmr)
    };

    // d = FMR − FNMR is 1 at the lowest score and −1 at the sentinel
    let mut prev = (grid[0], rates(grid[0]));
    for &theta in &grid {
        let (fmr, fnmr) = rates(theta);
        let d = fmr - fnmr;
        if d == 0.0 {
            return Ok(EerPoint {
                eer_percent: 100.0 * fmr,
                threshold: theta,
            });
        }
        if d < 0.0 {
            let (t0, (fmr0, fnmr0)) = prev;
            let d0 = fmr0 - fnmr0;
            let w = d0 / (d0 - d);
            return Ok(EerPoint {
                eer_percent: 100.0 * (fmr0 + w * (fmr - fmr0)),
                threshold: t0 + w * (theta - t0),
            });
        }
        prev = (theta, (fmr, fnmr));
    }
    unreachable!("sentinel threshold rejects every genuine score")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scenario {
    OneClass,
    Multiclass,
    CrossMulticlass,
}

impl Scenario {
    pub fn as_str(self) -> &'static str {
        match self {
            Scenario::OneClass => "one_class",
            Scenario::Multiclass => "multiclass",
            Scenario::CrossMulticlass => "cross_multiclass",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BotMethod {
    Handcrafted,
    Gan,
}

impl BotMethod {
    pub fn label(self) -> Label {
        match self {
            BotMethod::Handcrafted => Label::FakeHandcrafted,
            BotMethod::Gan => Label::FakeGan,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            BotMethod::Handcrafted => "handcrafted",
            BotMethod::Gan => "gan",
        }
    }
}

/// Split tag of a class; fixed so that a class is split identically whatever
/// the scenario.
fn class_tag(label: Label) -> u64 {
    match label {
        Label::Human => 0x48,
        Label::FakeHandcrafted => 0x4843,
        Label::FakeGan => 0x47414e,
        Label::Unknown => 0x3f,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvalConfig {
    pub reps: usize,
    pub train_frac: f64,
    pub seed: u64,
    pub svm: SvmParams,
}

impl Default for EvalConfig {
    fn default() -> Self {
        EvalConfig {
            reps: 5,
            train_frac: 0.7,
            seed: 0,
            svm: SvmParams::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RepResult {
    pub rep: usize,
    pub seed: u64,
    pub eer_percent: f64,
    pub threshold: f64,
    pub n_train: usize,
    pub n_test_genuine: usize,
    pub n_test_impostor: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub scenario: Scenario,
    pub feature_mode: FeatureMode,
    /// Fakes used in training (multiclass) or testing (one-class).
    pub bot_method: BotMethod,
    /// Fakes used in testing when they differ from `bot_method`.
    pub test_bot_method: Option<BotMethod>,
    pub reps: Vec<RepResult>,
    pub mean_eer_percent: f64,
    pub config: EvalConfig,
    pub excluded_degenerate: usize,
}

impl EvalReport {
    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        envelope::save("eval_report", self, path)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        envelope::load("eval_report", path)
    }

    fn method_column(&self) -> String {
        match self.test_bot_method {
            Some(t) => format!("{}>{}", self.bot_method.as_str(), t.as_str()),
            None => self.bot_method.as_str().to_string(),
        }
    }
}

/// One row per repetition plus a `mean` row per report.
pub fn write_eval_csv<W: Write>(reports: &[EvalReport], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["scenario", "mode", "method", "rep", "eer"])?;
    for r in reports {
        let method = r.method_column();
        let rows = r
            .reps
            .iter()
            .map(|x| (x.rep.to_string(), x.eer_percent))
            .chain([("mean".to_string(), r.mean_eer_percent)]);
        for (rep, eer) in rows {
            w.write_record([r.scenario.as_str(), r.feature_mode.as_str(), &method, &rep, &eer.to_string()])?;
        }
    }
    w.flush()?;
    Ok(())
}

/// Feature rows of a corpus for one mode, grouped by label. Degenerate
/// gestures are left out and counted.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureTable {
    pub mode: FeatureMode,
    pub rows: Vec<Vec<f64>>,
    pub labels: Vec<Label>,
    pub excluded_degenerate: usize,
}

impl FeatureTable {
    pub fn extract(samples: &[GestureSample], mode: FeatureMode) -> Result<Self> {
        let mut table = FeatureTable {
            mode,
            rows: Vec::with_capacity(samples.len()),
            labels: Vec::with_capacity(samples.len()),
            excluded_degenerate: 0,
        };
        for (i, g) in samples.iter().enumerate() {
            let touch = match touch_features(&g.touch) {
                Ok(t) => t,
                Err(Error::DegenerateGesture) => {
                    table.excluded_degenerate += 1;
                    continue;
                }
                Err(e) => return Err(e),
            };
            let accel = match (mode, &g.accel) {
                (FeatureMode::Touch, _) => None,
                (FeatureMode::TouchAccel, Some(a)) => Some(accel_features(a)?),
                (FeatureMode::TouchAccel, None) => {
                    return Err(Error::InsufficientData(format!(
                        "sample {i} has no accelerometer data for touch+accel evaluation"
                    )))
                }
            };
            table.rows.push(combine(touch, accel).project(mode)?);
            table.labels.push(g.label);
        }
        Ok(table)
    }

    fn indices(&self, label: Label) -> Vec<usize> {
        (0..self.labels.len()).filter(|&i| self.labels[i] == label).collect()
    }

    fn select(&self, idx: &[usize]) -> Vec<Vec<f64>> {
        idx.iter().map(|&i| self.rows[i].clone()).collect()
    }
}

/// Seeded shuffle of `0..n` cut into `round(train_frac · n)` training and
/// the remaining test positions.
pub fn split_indices(n: usize, train_frac: f64, seed: u64) -> (Vec<usize>, Vec<usize>) {
    let mut idx: Vec<usize> = (0..n).collect();
    idx.shuffle(&mut stats::rng(seed));
    let cut = ((train_frac * n as f64).round() as usize).min(n);
    let test = idx.split_off(cut);
    (idx, test)
}

struct ClassSplit {
    train: Vec<usize>,
    test: Vec<usize>,
}

fn split_class(table: &FeatureTable, label: Label, config: &EvalConfig, rep_seed: u64) -> Result<ClassSplit> {
    let members = table.indices(label);
    let (tr, te) = split_indices(members.len(), config.train_frac, derive_seed(rep_seed, class_tag(label)));
    if tr.len() < 2 || te.is_empty() {
        return Err(Error::InsufficientData(format!(
            "{label:?}: {} usable samples do not give a train/test split",
            members.len()
        )));
    }
    Ok(ClassSplit {
        train: tr.into_iter().map(|k| members[k]).collect(),
        test: te.into_iter().map(|k| members[k]).collect(),
    })
}

fn check_config(config: &EvalConfig) -> Result<()> {
    if config.reps == 0 {
        return Err(Error::Invalid("at least one repetition is required".into()));
    }
    if !(config.train_frac > 0.0 && config.train_frac < 1.0) {
        return Err(Error::Invalid(format!("train fraction {} outside (0, 1)", config.train_frac)));
    }
    Ok(())
}

/// Trains the detector of a scenario on the given training rows.
pub(crate) fn fit_detector(
    human: &[Vec<f64>],
    fake: &[Vec<f64>],
    scenario: Scenario,
    params: &SvmParams,
) -> Result<SvmModel> {
    match scenario {
        Scenario::OneClass => train_one_class(human, params),
        Scenario::Multiclass | Scenario::CrossMulticlass => {
            let mut x = human.to_vec();
            x.extend_from_slice(fake);
            let mut y = vec![true; human.len()];
            y.resize(human.len() + fake.len(), false);
            train_binary(&x, &y, params)
        }
    }
}

pub(crate) fn score_rows(model: &SvmModel, rows: &[Vec<f64>]) -> Result<Vec<f64>> {
    rows.iter().map(|r| model.decision_score(r)).collect()
}

/// Detector fitted on one repetition's training split.
pub(crate) struct RepFit {
    pub model: SvmModel,
    pub result: RepResult,
}

pub(crate) fn fit_rep(
    table: &FeatureTable,
    scenario: Scenario,
    train_method: BotMethod,
    test_method: BotMethod,
    config: &EvalConfig,
    rep: usize,
) -> Result<RepFit> {
    check_config(config)?;
    let rep_seed = derive_seed(config.seed, rep as u64);
    let human = split_class(table, Label::Human, config, rep_seed)?;
    let train_fake = split_class(table, train_method.label(), config, rep_seed)?;
    let other = if test_method == train_method {
        None
    } else {
        Some(split_class(table, test_method.label(), config, rep_seed)?)
    };
    let test_fake = other.as_ref().unwrap_or(&train_fake);

    let params = SvmParams {
        seed: derive_seed(rep_seed, 0x5356),
        ..config.svm
    };
    let fake_train = match scenario {
        Scenario::OneClass => Vec::new(),
        _ => table.select(&train_fake.train),
    };
    let model = fit_detector(&table.select(&human.train), &fake_train, scenario, &params)?;
    let scores = ScoreSet {
        genuine: score_rows(&model, &table.select(&human.test))?,
        impostor: score_rows(&model, &table.select(&test_fake.test))?,
    };
    let eer = compute_eer(&scores)?;
    let result = RepResult {
        rep,
        seed: rep_seed,
        eer_percent: eer.eer_percent,
        threshold: eer.threshold,
        n_train: human.train.len() + fake_train.len(),
        n_test_genuine: scores.genuine.len(),
        n_test_impostor: scores.impostor.len(),
    };
    Ok(RepFit { model, result })
}

fn run(
    table: &FeatureTable,
    scenario: Scenario,
    train_method: BotMethod,
    test_method: BotMethod,
    config: &EvalConfig,
) -> Result<EvalReport> {
    check_config(config)?;
    let reps = (0..config.reps)
        .map(|rep| Ok(fit_rep(table, scenario, train_method, test_method, config, rep)?.result))
        .collect::<Result<Vec<_>>>()?;
    let eers: Vec<f64> = reps.iter().map(|r| r.eer_percent).collect();
    Ok(EvalReport {
        scenario,
        feature_mode: table.mode,
        bot_method: train_method,
        test_bot_method: (test_method != train_method).then_some(test_method),
        mean_eer_percent: stats::mean(&eers),
        reps,
        config: *config,
        excluded_degenerate: table.excluded_degenerate,
    })
}

/// Repeated stratified train/test evaluation on pre-extracted features.
pub fn run_protocol_table(
    table: &FeatureTable,
    scenario: Scenario,
    bot_method: BotMethod,
    config: &EvalConfig,
) -> Result<EvalReport> {
    if scenario == Scenario::CrossMulticlass {
        return Err(Error::Invalid("cross-generation needs two bot methods".into()));
    }
    run(table, scenario, bot_method, bot_method, config)
}

/// Repeated stratified train/test evaluation. In the one-class scenario the
/// detector sees only the human training part; fakes appear only at test.
pub fn run_protocol(
    samples: &[GestureSample],
    scenario: Scenario,
    feature_mode: FeatureMode,
    bot_method: BotMethod,
    config: &EvalConfig,
) -> Result<EvalReport> {
    let table = FeatureTable::extract(samples, feature_mode)?;
    run_protocol_table(&table, scenario, bot_method, config)
}

/// Multiclass training on `train_method` fakes, tested on held-out humans and
/// held-out `test_method` fakes.
pub fn run_cross_generation_table(
    table: &FeatureTable,
    train_method: BotMethod,
    test_method: BotMethod,
    config: &EvalConfig,
) -> Result<EvalReport> {
    run(table, Scenario::CrossMulticlass, train_method, test_method, config)
}

pub fn run_cross_generation(
    samples: &[GestureSample],
    feature_mode: FeatureMode,
    train_method: BotMethod,
    test_method: BotMethod,
    config: &EvalConfig,
) -> Result<EvalReport> {
    let table = FeatureTable::extract(samples, feature_mode)?;
    run_cross_generation_table(&table, train_method, test_method, config)
}

pub const TOUCH_FEATURE_NAMES: [&str; TOUCH_DIM] = [
    "duration",
    "distance",
    "displacement",
    "angle",
    "velocity",
    "move_efficiency",
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupHistogram {
    pub group: String,
    pub n: usize,
    /// Fraction of the group in each bin; sums to 1.
    pub fractions: Vec<f64>,
    /// Two-sample KS statistic against the human group.
    pub ks_vs_human: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureDistribution {
    pub feature: String,
    /// `bins + 1` edges spanning the pooled range of all groups.
    pub edges: Vec<f64>,
    pub groups: Vec<GroupHistogram>,
}

impl FeatureDistribution {
    /// Bin holding `value`; the last bin is closed on the right.
    pub fn bin_of(&self, value: f64) -> Option<usize> {
        let bins = self.edges.len() - 1;
        if value < self.edges[0] || value > self.edges[bins] {
            return None;
        }
        Some((self.edges.partition_point(|e| *e <= value)).clamp(1, bins) - 1)
    }

    pub fn group(&self, name: &str) -> Option<&GroupHistogram> {
        self.groups.iter().find(|g| g.group == name)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistributionReport {
    pub bins: usize,
    pub features: Vec<FeatureDistribution>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DistributionConfig {
    pub bins: usize,
    pub min_per_group: usize,
}

impl Default for DistributionConfig {
    fn default() -> Self {
        DistributionConfig {
            bins: 30,
            min_per_group: 100,
        }
    }
}

fn touch_columns(name: &str, samples: &[GestureSample], min: usize) -> Result<Vec<Vec<f64>>> {
    let mut cols = vec![Vec::with_capacity(samples.len()); TOUCH_DIM];
    for g in samples {
        match touch_features(&g.touch) {
            Ok(f) => {
                for (c, v) in cols.iter_mut().zip(f.to_array()) {
                    c.push(v);
                }
            }
            Err(Error::DegenerateGesture) => {}
            Err(e) => return Err(e),
        }
    }
    if cols[0].len() < min {
        return Err(Error::InsufficientData(format!(
            "{name}: {} usable gestures, at least {min} required",
            cols[0].len()
        )));
    }
    Ok(cols)
}

fn histogram(values: &[f64], edges: &[f64]) -> Vec<f64> {
    let bins = edges.len() - 1;
    let (lo, hi) = (edges[0], edges[bins]);
    let mut counts = vec![0usize; bins];
    for &v in values {
        let k = (((v - lo) / (hi - lo)) * bins as f64).floor();
        counts[(k.max(0.0) as usize).min(bins - 1)] += 1;
    }
    counts.iter().map(|&c| c as f64 / values.len() as f64).collect()
}

/// Fixed-bin histograms of the six touch features per group, with the KS
/// statistic of each group against the humans.
pub fn feature_distribution_report(
    human: &[GestureSample],
    handcrafted: &[GestureSample],
    gan: Option<&[GestureSample]>,
    config: &DistributionConfig,
) -> Result<DistributionReport> {
    if config.bins == 0 {
        return Err(Error::Invalid("histograms need at least one bin".into()));
    }
    let mut groups = vec![
        ("human", touch_columns("human", human, config.min_per_group)?),
        ("handcrafted", touch_columns("handcrafted", handcrafted, config.min_per_group)?),
    ];
    if let Some(gan) = gan {
        groups.push(("gan", touch_columns("gan", gan, config.min_per_group)?));
    }

    let features = TOUCH_FEATURE_NAMES
        .iter()
        .enumerate()
        .map(|(f, name)| {
            let all = groups.iter().flat_map(|(_, cols)| cols[f].iter().copied());
            let (mut lo, mut hi) = all.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(v), b.max(v)));
            if hi - lo < 1e-12 {
                lo -= 0.5;
                hi += 0.5;
            }
            let edges: Vec<f64> = (0..=config.bins)
                .map(|k| if k == config.bins { hi } else { lo + (hi - lo) * k as f64 / config.bins as f64 })
                .collect();
            let reference = &groups[0].1[f];
            FeatureDistribution {
                feature: name.to_string(),
                groups: groups
                    .iter()
                    .map(|(group, cols)| GroupHistogram {
                        group: group.to_string(),
                        n: cols[f].len(),
                        fractions: histogram(&cols[f], &edges),
                        ks_vs_human: stats::ks_statistic(reference, &cols[f]),
                    })
                    .collect(),
                edges,
            }
        })
        .collect();
    Ok(DistributionReport {
        bins: config.bins,
        features,
    })
}

impl DistributionReport {
    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        envelope::save("distribution_report", self, path)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        envelope::load("distribution_report", path)
    }

    pub fn feature(&self, name: &str) -> Option<&FeatureDistribution> {
        self.features.iter().find(|f| f.feature == name)
    }

    /// Long format: one row per (feature, group, bin).
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["feature", "group", "bin", "lo", "hi", "fraction", "ks_vs_human"])?;
        for f in &self.features {
            for g in &f.groups {
                for (k, frac) in g.fractions.iter().enumerate() {
                    w.write_record([
                        f.feature.clone(),
                        g.group.clone(),
                        k.to_string(),
                        f.edges[k].to_string(),
                        f.edges[k + 1].to_string(),
                        frac.to_string(),
                        g.ks_vs_human.to_string(),
                    ])?;
                }
            }
        }
        w.flush()?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixture::{fixture_corpus, FixtureConfig};
    use crate::synth::{fit_priors, synth_batch, SynthConfig, DEFAULT_PRIOR_FLOOR};

    fn eer(g: &[f64], i: &[f64]) -> EerPoint {
        compute_eer(&ScoreSet {
            genuine: g.to_vec(),
            impostor: i.to_vec(),
        })
        .unwrap()
    }

    #[test]
    fn separated_and_inverted() {
        assert_eq!(eer(&[0.9, 0.8], &[0.1, 0.2]).eer_percent, 0.0);
        assert_eq!(eer(&[0.1, 0.2], &[0.8, 0.9]).eer_percent, 100.0);
        let p = eer(&[0.9, 0.8], &[0.1, 0.2]);
        assert_eq!(p.threshold, 0.8);
    }

    #[test]
    fn identical_scores_meet_halfway() {
        let p = eer(&[0.5, 0.5], &[0.5]);
        assert!((p.eer_percent - 50.0).abs() < 1e-12);
    }

    #[test]
    fn interpolated_crossing() {
        // θ=2: FMR 1/2, FNMR 0; θ=3: FMR 0, FNMR 1/2
        let p = eer(&[2.0, 3.0], &[1.0, 2.0]);
        assert!((p.eer_percent - 25.0).abs() < 1e-12, "{p:?}");
        assert!((p.threshold - 2.5).abs() < 1e-12);
        // exact tie at θ=2.5 and no later one
        let p = eer(&[2.0, 3.0], &[1.0, 2.5]);
        assert_eq!(p.eer_percent, 50.0);
        assert_eq!(p.threshold, 2.5);
        // θ=2: FMR 2/3, FNMR 1/2; θ=3: FMR 1/3, FNMR 1/2 → meet halfway
        let p = eer(&[1.5, 4.0], &[1.0, 2.0, 3.0]);
        assert!((p.eer_percent - 50.0).abs() < 1e-12, "{p:?}");
        assert!((p.threshold - 2.5).abs() < 1e-12);
    }

    #[test]
    fn empty_scores() {
        assert!(matches!(compute_eer(&ScoreSet::default()), Err(Error::EmptyScores)));
    }

    #[test]
    fn split_covers_everything_once() {
        let (tr, te) = split_indices(10, 0.7, 3);
        assert_eq!(tr.len(), 7);
        let mut all: Vec<usize> = tr.iter().chain(&te).copied().collect();
        all.sort_unstable();
        assert_eq!(all, (0..10).collect::<Vec<_>>());
    }

    fn small_corpus() -> Vec<GestureSample> {
        let mut human = fixture_corpus(1, 120, &FixtureConfig::default()).unwrap();
        let priors = fit_priors(&human, DEFAULT_PRIOR_FLOOR).unwrap();
        human.extend(synth_batch(&priors, 2, 120, &SynthConfig::default()).unwrap());
        human
    }

    #[test]
    fn multiclass_handcrafted_is_easy_and_deterministic() {
        let corpus = small_corpus();
        let cfg = EvalConfig {
            reps: 2,
            seed: 9,
            ..EvalConfig::default()
        };
        let a = run_protocol(&corpus, Scenario::Multiclass, FeatureMode::TouchAccel, BotMethod::Handcrafted, &cfg).unwrap();
        let b = run_protocol(&corpus, Scenario::Multiclass, FeatureMode::TouchAccel, BotMethod::Handcrafted, &cfg).unwrap();
        assert_eq!(envelope::to_string("r", &a).unwrap(), envelope::to_string("r", &b).unwrap());
        assert_eq!(a.reps.len(), 2);
        assert!(a.mean_eer_percent < 1.0, "{a:?}");
        assert_eq!(a.reps[0].n_test_genuine, 36);

        let cross =
            run_cross_generation(&corpus, FeatureMode::TouchAccel, BotMethod::Handcrafted, BotMethod::Handcrafted, &cfg)
                .unwrap();
        assert_eq!(cross.reps, a.reps);
    }

    #[test]
    fn missing_class_is_insufficient() {
        let human = fixture_corpus(1, 30, &FixtureConfig::default()).unwrap();
        let r = run_protocol(&human, Scenario::OneClass, FeatureMode::Touch, BotMethod::Gan, &EvalConfig::default());
        assert!(matches!(r, Err(Error::InsufficientData(_))));
    }

    #[test]
    fn csv_has_mean_rows() {
        let corpus = small_corpus();
        let cfg = EvalConfig {
            reps: 2,
            ..EvalConfig::default()
        };
        let r = run_protocol(&corpus, Scenario::OneClass, FeatureMode::Touch, BotMethod::Handcrafted, &cfg).unwrap();
        let mut buf = Vec::new();
        write_eval_csv(&[r], &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "scenario,mode,method,rep,eer");
        assert_eq!(lines.len(), 4);
        assert!(lines[3].starts_with("one_class,touch,handcrafted,mean,"));
    }

    #[test]
    fn handcrafted_efficiency_in_one_bin() {
        let corpus = small_corpus();
        let (human, fake): (Vec<_>, Vec<_>) = corpus.into_iter().partition(|g| g.label == Label::Human);
        let report = feature_distribution_report(&human, &fake, None, &DistributionConfig::default()).unwrap();
        let eff = report.feature("move_efficiency").unwrap();
        let hc = eff.group("handcrafted").unwrap();
        let bin = eff.bin_of(1.0).unwrap();
        assert!((hc.fractions[bin] - 1.0).abs() < 1e-12);
        assert_eq!(eff.group("human").unwrap().ks_vs_human, 0.0);
        for f in &report.features {
            for g in &f.groups {
                assert!((g.fractions.iter().sum::<f64>() - 1.0).abs() < 1e-9);
            }
        }
        let too_few = DistributionConfig {
            min_per_group: 500,
            ..DistributionConfig::default()
        };
        assert!(matches!(
            feature_distribution_report(&human, &fake, None, &too_few),
            Err(Error::InsufficientData(_))
        ));
    }
}
