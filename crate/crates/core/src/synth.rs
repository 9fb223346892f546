//! Handcrafted fake swipes.
//!
//! Gaussian priors over start point, length, angle and duration are fitted
//! on human swipes. A fake is a straight segment with uniformly spaced
//! timestamps and log-spaced positions, so the spatial gaps (and therefore
//! the per-segment speed) grow along the swipe. Fake accelerometer data is
//! i.i.d. Gaussian per axis with the pooled human mean and deviation.

use std::path::Path;

use rand::Rng as _;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::envelope;
use crate::error::{Error, Result};
use crate::features::touch_features;
use crate::model::{
    AccelSample, AccelSequence, GestureSample, Label, SessionMeta, TouchPoint, TouchTrajectory,
    DEFAULT_ACCEL_RATE_HZ,
};
use crate::stats::{self, derive_seed, Rng};

pub const DEFAULT_PRIOR_FLOOR: usize = 30;
pub const DEFAULT_LOG_BASE: f64 = 10.0;
pub const DEFAULT_POINT_COUNT: usize = 32;
const MAX_REJECTIONS: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Gaussian {
    pub mean: f64,
    pub std: f64,
}

impl Gaussian {
    pub fn new(mean: f64, std: f64) -> Self {
        Gaussian { mean, std }
    }

    pub fn fit(xs: &[f64]) -> Self {
        Gaussian {
            mean: stats::mean(xs),
            std: stats::sample_std(xs),
        }
    }

    pub fn sample(&self, rng: &mut Rng) -> f64 {
        let z: f64 = rng.sample(StandardNormal);
        self.mean + self.std * z
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SwipePriors {
    pub length: Gaussian,
    /// Circular mean direction and the spread of wrapped deviations around it.
    pub angle: Gaussian,
    pub duration: Gaussian,
    pub start_point: [Gaussian; 2],
    /// Pooled per-axis statistics of raw accelerometer samples, if any human
    /// gesture carried accelerometer data.
    pub accel_stats: Option<[Gaussian; 3]>,
    /// Distribution of point counts of human swipes.
    pub point_count: Gaussian,
    pub n_fitted: usize,
}

impl SwipePriors {
    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        envelope::save("priors", self, path)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        envelope::load("priors", path)
    }
}

fn wrap_angle(a: f64) -> f64 {
    let w = (a + std::f64::consts::PI).rem_euclid(2.0 * std::f64::consts::PI) - std::f64::consts::PI;
    if w == -std::f64::consts::PI {
        std::f64::consts::PI
    } else {
        w
    }
}

/// Fits priors on human gestures. Zero-length swipes are skipped.
pub fn fit_priors(human: &[GestureSample], floor: usize) -> Result<SwipePriors> {
    if let Some(g) = human.iter().find(|g| g.label != Label::Human) {
        return Err(Error::Invalid(format!(
            "prior fitting needs human gestures, got {:?}",
            g.label
        )));
    }
    let mut length = Vec::new();
    let mut angle = Vec::new();
    let mut duration = Vec::new();
    let mut x0 = Vec::new();
    let mut y0 = Vec::new();
    let mut count = Vec::new();
    let mut accel: [Vec<f64>; 3] = Default::default();
    for g in human {
        let fv = match touch_features(&g.touch) {
            Ok(fv) => fv,
            Err(Error::DegenerateGesture) => continue,
            Err(e) => return Err(e),
        };
        length.push(fv.distance);
        angle.push(fv.angle_rad);
        duration.push(fv.duration_s);
        x0.push(g.touch.first().x);
        y0.push(g.touch.first().y);
        count.push(g.touch.len() as f64);
        if let Some(a) = &g.accel {
            for s in a.samples() {
                for (axis, v) in s.axes().into_iter().enumerate() {
                    accel[axis].push(v);
                }
            }
        }
    }
    if length.len() < floor.max(2) {
        return Err(Error::TooFewSamples {
            needed: floor.max(2),
            got: length.len(),
        });
    }

    let (s, c) = angle
        .iter()
        .fold((0.0, 0.0), |(s, c), a| (s + a.sin(), c + a.cos()));
    let center = s.atan2(c);
    let deviations: Vec<f64> = angle.iter().map(|a| wrap_angle(a - center)).collect();
    let spread = stats::sample_std(&deviations);

    let accel_stats = if accel[0].len() >= 2 {
        Some([
            Gaussian::fit(&accel[0]),
            Gaussian::fit(&accel[1]),
            Gaussian::fit(&accel[2]),
        ])
    } else {
        None
    };

    Ok(SwipePriors {
        length: Gaussian::fit(&length),
        angle: Gaussian::new(wrap_angle(center + stats::mean(&deviations)), spread),
        duration: Gaussian::fit(&duration),
        start_point: [Gaussian::fit(&x0), Gaussian::fit(&y0)],
        accel_stats,
        point_count: Gaussian::fit(&count),
        n_fitted: length.len(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SynthConfig {
    /// Fixed point count; `None` draws it from the fitted point-count prior.
    pub points: Option<usize>,
    pub log_base: f64,
    pub screen: (u32, u32),
    pub accel_rate_hz: f64,
}

impl Default for SynthConfig {
    fn default() -> Self {
        SynthConfig {
            points: None,
            log_base: DEFAULT_LOG_BASE,
            screen: (1080, 1920),
            accel_rate_hz: DEFAULT_ACCEL_RATE_HZ,
        }
    }
}

/// Arc-length fractions `(b^(i/(T-1)) - 1) / (b - 1)` for `i = 0..T`.
pub fn log_fractions(count: usize, base: f64) -> Vec<f64> {
    let last = (count - 1) as f64;
    (0..count)
        .map(|i| {
            if i == 0 {
                0.0
            } else if i == count - 1 {
                1.0
            } else {
                (base.powf(i as f64 / last) - 1.0) / (base - 1.0)
            }
        })
        .collect()
}

/// Draws a positive duration, re-drawing non-positive values.
pub(crate) fn draw_duration(prior: &Gaussian, rng: &mut Rng) -> Result<f64> {
    for _ in 0..MAX_REJECTIONS {
        let d = prior.sample(rng);
        if d > 0.0 && d.is_finite() {
            return Ok(d);
        }
    }
    Err(Error::PriorRejectionExceeded {
        attempts: MAX_REJECTIONS,
    })
}

fn draw_point_count(priors: &SwipePriors, rng: &mut Rng) -> usize {
    if priors.point_count.mean.is_finite() && priors.point_count.mean >= 2.0 {
        priors.point_count.sample(rng).round().max(2.0) as usize
    } else {
        DEFAULT_POINT_COUNT
    }
}

pub fn synth_touch(
    priors: &SwipePriors,
    seed: u64,
    count: usize,
    base: f64,
    screen: (u32, u32),
) -> Result<TouchTrajectory> {
    let mut rng = stats::rng(seed);
    synth_touch_with(priors, &mut rng, count, base, screen)
}

fn synth_touch_with(
    priors: &SwipePriors,
    rng: &mut Rng,
    count: usize,
    base: f64,
    screen: (u32, u32),
) -> Result<TouchTrajectory> {
    if count < 2 {
        return Err(Error::EmptyGesture);
    }
    if !(base > 1.0) {
        return Err(Error::Invalid(format!("log base must exceed 1, got {base}")));
    }
    let unit = 0.0..=1.0;
    for _ in 0..MAX_REJECTIONS {
        let x0 = priors.start_point[0].sample(rng);
        let y0 = priors.start_point[1].sample(rng);
        let length = priors.length.sample(rng);
        let angle = priors.angle.sample(rng);
        let duration = priors.duration.sample(rng);
        let (dx, dy) = (length * angle.sin(), length * angle.cos());
        let ok = unit.contains(&x0)
            && unit.contains(&y0)
            && unit.contains(&(x0 + dx))
            && unit.contains(&(y0 + dy))
            && length > 0.0
            && duration > 0.0;
        if !ok {
            continue;
        }
        let last = (count - 1) as f64;
        let points = log_fractions(count, base)
            .into_iter()
            .enumerate()
            .map(|(i, s)| TouchPoint::new(x0 + s * dx, y0 + s * dy, duration * i as f64 / last))
            .collect();
        return TouchTrajectory::new(points, screen.0, screen.1);
    }
    Err(Error::PriorRejectionExceeded {
        attempts: MAX_REJECTIONS,
    })
}

pub fn synth_accel(priors: &SwipePriors, seed: u64, duration_s: f64, rate_hz: f64) -> Result<AccelSequence> {
    let mut rng = stats::rng(seed);
    synth_accel_with(priors, &mut rng, duration_s, rate_hz)
}

fn synth_accel_with(
    priors: &SwipePriors,
    rng: &mut Rng,
    duration_s: f64,
    rate_hz: f64,
) -> Result<AccelSequence> {
    let axes = priors
        .accel_stats
        .ok_or_else(|| Error::InsufficientData("priors carry no accelerometer statistics".into()))?;
    if !(duration_s > 0.0 && rate_hz > 0.0) {
        return Err(Error::Invalid(format!(
            "accelerometer duration {duration_s} s at {rate_hz} Hz"
        )));
    }
    // guard against 200.00000000003 rounding up to 201
    let n = ((duration_s * rate_hz - 1e-9).ceil() as usize).max(AccelSequence::MIN_SAMPLES);
    let samples = (0..n)
        .map(|i| {
            AccelSample::new(
                axes[0].sample(rng),
                axes[1].sample(rng),
                axes[2].sample(rng),
                i as f64 / rate_hz,
            )
        })
        .collect();
    AccelSequence::new(samples, rate_hz)
}

/// One complete handcrafted fake: touch plus accelerometer when the priors
/// carry accelerometer statistics.
pub fn synth_gesture(priors: &SwipePriors, seed: u64, config: &SynthConfig) -> Result<GestureSample> {
    let mut rng = stats::rng(derive_seed(seed, 0x4843));
    let count = config.points.unwrap_or_else(|| draw_point_count(priors, &mut rng));
    let touch = synth_touch_with(priors, &mut rng, count, config.log_base, config.screen)?;
    let accel = match priors.accel_stats {
        Some(_) => Some(synth_accel(
            priors,
            derive_seed(seed, 0x4143),
            touch.duration(),
            config.accel_rate_hz,
        )?),
        None => None,
    };
    GestureSample::new(
        touch,
        accel,
        Label::FakeHandcrafted,
        SessionMeta::synthetic(format!("handcrafted-{seed}")),
    )
}

pub fn synth_batch(priors: &SwipePriors, seed: u64, n: usize, config: &SynthConfig) -> Result<Vec<GestureSample>> {
    (0..n as u64)
        .map(|i| synth_gesture(priors, derive_seed(seed, i), config))
        .collect()
}
