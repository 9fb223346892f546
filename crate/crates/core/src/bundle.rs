//! Deployable detector bundle and single-gesture verification.

use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::envelope;
use crate::error::{Error, Result};
use crate::eval::{fit_rep, BotMethod, EvalConfig, FeatureTable, Scenario};
use crate::features::{accel_features, combine, touch_features, CombinedFeatureVector, FeatureMode};
use crate::gan::GanPair;
use crate::model::{GestureRecord, GestureSample};
use crate::svm::SvmModel;
use crate::synth::SwipePriors;

pub const BUNDLE_KIND: &str = "bundle";

/// A trained SVM with the threshold at which it was calibrated.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Detector {
    pub scenario: Scenario,
    pub feature_mode: FeatureMode,
    pub model: SvmModel,
    /// EER threshold on the held-out calibration split.
    pub threshold: f64,
    pub calibration_eer_percent: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelBundle {
    pub format_version: u32,
    /// Unix seconds.
    pub created_at: u64,
    pub feature_mode: FeatureMode,
    pub detector: Detector,
    /// Touch-only detector for gestures without accelerometer data.
    pub touch_fallback: Option<Detector>,
    pub priors: SwipePriors,
    pub gans: Option<GanPair>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    /// Decision score; absent when the gesture could not be scored.
    pub human_score: Option<f64>,
    pub is_human: bool,
    pub threshold: f64,
    pub features: Option<CombinedFeatureVector>,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BundleConfig {
    pub scenario: Scenario,
    pub feature_mode: FeatureMode,
    /// Fakes used for multiclass training and for calibration.
    pub bot_method: BotMethod,
    pub eval: EvalConfig,
    pub touch_fallback: bool,
    pub created_at: u64,
}

impl Default for BundleConfig {
    fn default() -> Self {
        BundleConfig {
            scenario: Scenario::OneClass,
            feature_mode: FeatureMode::TouchAccel,
            bot_method: BotMethod::Handcrafted,
            eval: EvalConfig::default(),
            touch_fallback: true,
            created_at: 0,
        }
    }
}

fn train_detector(samples: &[GestureSample], mode: FeatureMode, config: &BundleConfig) -> Result<Detector> {
    let table = FeatureTable::extract(samples, mode)?;
    let fit = fit_rep(&table, config.scenario, config.bot_method, config.bot_method, &config.eval, 0)?;
    Ok(Detector {
        scenario: config.scenario,
        feature_mode: mode,
        model: fit.model,
        threshold: fit.result.threshold,
        calibration_eer_percent: fit.result.eer_percent,
    })
}

/// Trains the detector on a stratified `train_frac` split of `samples` and
/// calibrates its threshold at the EER of the remaining part. The split is
/// the first repetition of the evaluation protocol with the same seed.
pub fn train_bundle(
    samples: &[GestureSample],
    priors: SwipePriors,
    gans: Option<GanPair>,
    config: &BundleConfig,
) -> Result<ModelBundle> {
    if config.scenario == Scenario::CrossMulticlass {
        return Err(Error::Invalid("a bundle detector is one-class or multiclass".into()));
    }
    let detector = train_detector(samples, config.feature_mode, config)?;
    let touch_fallback = if config.touch_fallback && config.feature_mode == FeatureMode::TouchAccel {
        Some(train_detector(samples, FeatureMode::Touch, config)?)
    } else {
        None
    };
    let bundle = ModelBundle {
        format_version: envelope::VERSION,
        created_at: config.created_at,
        feature_mode: config.feature_mode,
        detector,
        touch_fallback,
        priors,
        gans,
    };
    bundle.validate()?;
    Ok(bundle)
}

impl ModelBundle {
    pub fn validate(&self) -> Result<()> {
        let check = |d: &Detector| {
            if d.model.dim() != d.feature_mode.dim() {
                return Err(Error::DimensionMismatch {
                    expected: d.feature_mode.dim(),
                    got: d.model.dim(),
                });
            }
            Ok(())
        };
        if self.detector.feature_mode != self.feature_mode {
            return Err(Error::Invalid("detector feature mode differs from bundle".into()));
        }
        check(&self.detector)?;
        if let Some(f) = &self.touch_fallback {
            if f.feature_mode != FeatureMode::Touch {
                return Err(Error::Invalid("fallback detector must be touch-only".into()));
            }
            check(f)?;
        }
        Ok(())
    }

    pub fn to_json(&self) -> Result<String> {
        envelope::to_string(BUNDLE_KIND, self)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        envelope::save(BUNDLE_KIND, self, path)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_bytes(&read_file(path.as_ref())?)
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let bundle: ModelBundle = envelope::read(BUNDLE_KIND, bytes)?;
        bundle.validate()?;
        Ok(bundle)
    }
}

fn read_file(path: &Path) -> Result<Vec<u8>> {
    std::fs::read(path).map_err(|e| Error::io(path, e))
}

/// Hex SHA-256 of a bundle file's bytes.
pub fn bundle_hash(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

fn rejected(threshold: f64, reason: &str) -> Verdict {
    Verdict {
        human_score: None,
        is_human: false,
        threshold,
        features: None,
        warnings: vec![reason.to_string()],
    }
}

/// Scores one gesture. The label is ignored. A swipe that does not move
/// fails the challenge rather than erroring.
pub fn verify(bundle: &ModelBundle, gesture: &GestureSample) -> Result<Verdict> {
    let touch = match touch_features(&gesture.touch) {
        Ok(t) => t,
        Err(Error::DegenerateGesture) => {
            return Ok(rejected(bundle.detector.threshold, "degenerate gesture: start equals end"))
        }
        Err(e) => return Err(e),
    };
    let mut warnings = Vec::new();
    let (detector, features) = match (bundle.feature_mode, &gesture.accel) {
        (FeatureMode::Touch, _) => (&bundle.detector, combine(touch, None)),
        (FeatureMode::TouchAccel, Some(a)) => (&bundle.detector, combine(touch, Some(accel_features(a)?))),
        (FeatureMode::TouchAccel, None) => {
            let fallback = bundle
                .touch_fallback
                .as_ref()
                .ok_or_else(|| Error::ModelMissing("gesture has no accelerometer data and the bundle has no touch-only detector".into()))?;
            warnings.push("accelerometer data absent; scored with the touch-only detector".to_string());
            (fallback, combine(touch, None))
        }
    };
    let score = detector.model.decision_score(&features.project(detector.feature_mode)?)?;
    Ok(Verdict {
        human_score: Some(score),
        is_human: score >= detector.threshold,
        threshold: detector.threshold,
        features: Some(features),
        warnings,
    })
}

/// [`verify`] on the unvalidated wire form. Fewer than two touch points is
/// a failed challenge; any other invalid gesture is an error.
pub fn verify_record(bundle: &ModelBundle, record: GestureRecord) -> Result<Verdict> {
    match GestureSample::try_from(record) {
        Ok(g) => verify(bundle, &g),
        Err(Error::EmptyGesture) => Ok(rejected(bundle.detector.threshold, "gesture has fewer than 2 points")),
        Err(e) => Err(e),
    }
}
