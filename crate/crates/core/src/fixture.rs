//! Simulated pseudo-human swipes for tests, examples and desk-scale
//! evaluation when no recorded corpus is available.
//!
//! Each swipe is a left-to-right drag across the lower part of a portrait
//! screen. The path follows a minimum-jerk progress profile with a slightly
//! early velocity peak, a lateral bow, correlated finger tremor, ~60 Hz
//! event timing with jitter and integer pixel coordinates. Accelerometer data
//! at 200 Hz combines gravity projected through a per-gesture device tilt, the
//! reaction to the finger's acceleration, slow hand sway and sensor noise.
//!
//! Every generated gesture carries `source: fixture`.

use std::f64::consts::{FRAC_PI_2, PI};

use rand::Rng as _;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::model::{
    normalize_touch, AccelSample, AccelSequence, GestureSample, Label, Orientation, RawTouch,
    SessionMeta, Source, TouchPoint, TouchTrajectory,
};
use crate::stats::{self, derive_seed, Rng};

const GRAVITY: f64 = 9.81;
const DEVICES: [(&str, u32, u32); 4] = [
    ("fixture-phone-a", 1080, 1920),
    ("fixture-phone-b", 720, 1280),
    ("fixture-phone-c", 1440, 2560),
    ("fixture-phone-d", 1080, 2340),
];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FixtureConfig {
    pub subjects: usize,
    pub touch_rate_hz: f64,
    pub accel_rate_hz: f64,
    pub with_accel: bool,
}

impl Default for FixtureConfig {
    fn default() -> Self {
        FixtureConfig {
            subjects: 50,
            touch_rate_hz: 60.0,
            accel_rate_hz: 200.0,
            with_accel: true,
        }
    }
}

/// Per-subject habits shared by all of that subject's swipes.
struct Habit {
    tempo: f64,
    bow: f64,
    peak_skew: f64,
    tilt: f64,
    device: usize,
}

fn normal(rng: &mut Rng) -> f64 {
    rng.sample(StandardNormal)
}

fn habit(seed: u64, subject: usize) -> Habit {
    let mut rng = stats::rng(derive_seed(seed ^ 0x5EB7, subject as u64));
    Habit {
        tempo: (1.0 + 0.18 * normal(&mut rng)).clamp(0.6, 1.6),
        bow: 0.025 * normal(&mut rng),
        peak_skew: (0.85 + 0.08 * normal(&mut rng)).clamp(0.6, 1.1),
        tilt: 0.7 + 0.2 * normal(&mut rng),
        device: rng.random_range(0..DEVICES.len()),
    }
}

/// Minimum-jerk progress `10τ³ − 15τ⁴ + 6τ⁵` and its second derivative.
fn min_jerk(tau: f64) -> (f64, f64) {
    let t2 = tau * tau;
    let t3 = t2 * tau;
    (
        10.0 * t3 - 15.0 * t3 * tau + 6.0 * t3 * t2,
        60.0 * tau - 180.0 * t2 + 120.0 * t3,
    )
}

pub fn fixture_gesture(seed: u64, index: usize, config: &FixtureConfig) -> Result<GestureSample> {
    let subject = index % config.subjects.max(1);
    let h = habit(seed, subject);
    let mut rng = stats::rng(derive_seed(seed, index as u64));
    let (device, w, hgt) = DEVICES[h.device];

    let x0 = (0.17 + 0.035 * normal(&mut rng)).clamp(0.02, 0.4);
    let y0 = (0.86 + 0.03 * normal(&mut rng)).clamp(0.6, 0.97);
    let length = (0.58 + 0.07 * normal(&mut rng)).clamp(0.25, 0.95 - x0);
    let angle = FRAC_PI_2 + 0.03 + 0.05 * normal(&mut rng);
    let duration = (0.42 * h.tempo + 0.07 * normal(&mut rng)).clamp(0.18, 1.4);
    let bow = h.bow + 0.03 * normal(&mut rng);
    let skew = (h.peak_skew + 0.05 * normal(&mut rng)).clamp(0.55, 1.2);

    let (ux, uy) = (angle.sin(), angle.cos());
    let (nx, ny) = (-uy, ux);

    // event times: ~60 Hz with jitter, last event exactly at the end
    let period = 1.0 / config.touch_rate_hz;
    let mut times = vec![0.0];
    let mut t = 0.0;
    loop {
        t += period * (1.0 + 0.12 * normal(&mut rng)).clamp(0.5, 1.6);
        if t >= duration - 0.25 * period {
            break;
        }
        times.push(t);
    }
    times.push(duration);

    let mut tremor = [0.0, 0.0];
    let mut raw = Vec::with_capacity(times.len());
    let mut finger_acc = Vec::with_capacity(times.len());
    for &t in &times {
        let tau = (t / duration).powf(skew);
        let (s, acc) = min_jerk(tau);
        finger_acc.push((t, acc * length / (duration * duration)));
        for v in &mut tremor {
            *v = 0.7 * *v + 0.0012 * normal(&mut rng);
        }
        let lateral = bow * length * (PI * s).sin();
        let x = x0 + s * length * ux + lateral * nx + tremor[0];
        let y = y0 + s * length * uy + lateral * ny + tremor[1];
        raw.push(RawTouch {
            x_px: (x * f64::from(w)).round().clamp(0.0, f64::from(w)),
            y_px: (y * f64::from(hgt)).round().clamp(0.0, f64::from(hgt)),
            p: Some((0.35 + 0.1 * normal(&mut rng)).clamp(0.0, 1.0)),
            t_ms: (t * 1000.0).round(),
        });
    }
    let touch = normalize_touch(&raw, w, hgt)?;

    let accel = if config.with_accel {
        Some(fixture_accel(&mut rng, &h, touch.duration(), &finger_acc, config.accel_rate_hz)?)
    } else {
        None
    };

    let meta = SessionMeta {
        subject_id: format!("fixture-{subject:03}"),
        device_model: device.into(),
        orientation: Orientation::Portrait,
        captured_at: "2020-01-01".into(),
        source: Source::Fixture,
    };
    GestureSample::new(touch, accel, Label::Human, meta)
}

fn fixture_accel(
    rng: &mut Rng,
    h: &Habit,
    duration: f64,
    finger_acc: &[(f64, f64)],
    rate_hz: f64,
) -> Result<AccelSequence> {
    let pitch = h.tilt + 0.12 * normal(rng);
    let roll = 0.1 * normal(rng);
    let gravity = [
        GRAVITY * roll.sin(),
        GRAVITY * pitch.sin() * roll.cos(),
        GRAVITY * pitch.cos() * roll.cos(),
    ];
    let reaction = (0.004 + 0.0015 * normal(rng)).max(0.0);
    let sway_amp = 0.03 + 0.05 * rng.random::<f64>();
    let mut sway = [0.0; 3];
    let n = ((duration * rate_hz).floor() as usize + 1).max(AccelSequence::MIN_SAMPLES);
    let mut k = 0;
    let mut samples = Vec::with_capacity(n);
    for i in 0..n {
        let t = i as f64 / rate_hz;
        while k + 1 < finger_acc.len() && finger_acc[k + 1].0 <= t {
            k += 1;
        }
        let push = -reaction * finger_acc[k].1;
        for v in &mut sway {
            *v = 0.97 * *v + sway_amp * 0.25 * normal(rng);
        }
        let noise = |rng: &mut Rng| 0.02 * normal(rng);
        samples.push(AccelSample::new(
            gravity[0] + push + sway[0] + noise(rng),
            gravity[1] + 0.3 * push + sway[1] + noise(rng),
            gravity[2] + sway[2] + noise(rng),
            t,
        ));
    }
    AccelSequence::new(samples, rate_hz)
}

/// `n` fixture swipes, deterministic in `seed`.
pub fn fixture_corpus(seed: u64, n: usize, config: &FixtureConfig) -> Result<Vec<GestureSample>> {
    (0..n).map(|i| fixture_gesture(seed, i, config)).collect()
}

/// Baseline with no human structure: `count` points uniform on the unit
/// square at uniform times over `duration`.
pub fn uniform_random_touch(rng: &mut Rng, count: usize, duration: f64) -> Result<TouchTrajectory> {
    let last = (count - 1) as f64;
    let points = (0..count)
        .map(|i| TouchPoint::new(rng.random(), rng.random(), duration * i as f64 / last))
        .collect();
    TouchTrajectory::new(points, 1, 1)
}
