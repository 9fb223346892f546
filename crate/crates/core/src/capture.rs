//! Raw device captures and their conversion into gestures.
//!
//! A capture file holds one JSON object per line:
//!
//! ```json
//! {"screen_w":1080,"screen_h":1920,
//!  "touch":[[212,1650,0.4,1000],[230,1648,null,1016]],
//!  "accel":[[0.1,6.2,7.4,998],[0.1,6.3,7.4,1003]],
//!  "accel_rate_hz":200,
//!  "subject_id":"u01","device_model":"pixel","orientation":"portrait","captured_at":"2024-05-01"}
//! ```
//!
//! Touch events are `[x_px, y_px, pressure|null, t_ms]`, motion samples
//! `[ax, ay, az, t_ms]` in m/s² on the same clock.

use std::io::BufRead;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{
    normalize_touch, AccelSample, AccelSequence, GestureSample, Label, Orientation, RawTouch, SessionMeta, Source,
};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RawCapture {
    pub screen_w: u32,
    pub screen_h: u32,
    pub touch: Vec<RawTouch>,
    #[serde(default)]
    pub accel: Option<Vec<[f64; 4]>>,
    /// Estimated from the timestamps when absent.
    #[serde(default)]
    pub accel_rate_hz: Option<f64>,
    #[serde(default)]
    pub subject_id: String,
    #[serde(default)]
    pub device_model: String,
    #[serde(default = "portrait")]
    pub orientation: Orientation,
    #[serde(default)]
    pub captured_at: String,
}

fn portrait() -> Orientation {
    Orientation::Portrait
}

/// Normalizes a capture into a gesture with the given label and source.
/// Motion samples are put on the touch clock; those before the first touch
/// event are dropped.
pub fn ingest_capture(capture: &RawCapture, label: Label, source: Source) -> Result<GestureSample> {
    let touch = normalize_touch(&capture.touch, capture.screen_w, capture.screen_h)?;
    let t0 = capture.touch.iter().map(|r| r.t_ms).fold(f64::INFINITY, f64::min);

    let accel = match &capture.accel {
        None => None,
        Some(raw) => {
            let mut raw = raw.clone();
            raw.sort_by(|a, b| a[3].total_cmp(&b[3]));
            let samples: Vec<AccelSample> = raw
                .iter()
                .filter(|s| s[3] >= t0)
                .map(|s| AccelSample::new(s[0], s[1], s[2], (s[3] - t0) / 1000.0))
                .collect();
            let rate = match capture.accel_rate_hz {
                Some(r) => r,
                None => {
                    let span = samples.last().map_or(0.0, |s| s.t) - samples.first().map_or(0.0, |s| s.t);
                    if samples.len() < 2 || span <= 0.0 {
                        return Err(Error::TooFewSamples {
                            needed: AccelSequence::MIN_SAMPLES,
                            got: samples.len(),
                        });
                    }
                    (samples.len() - 1) as f64 / span
                }
            };
            Some(AccelSequence::new(samples, rate)?)
        }
    };

    let meta = SessionMeta {
        subject_id: capture.subject_id.clone(),
        device_model: capture.device_model.clone(),
        orientation: capture.orientation,
        captured_at: capture.captured_at.clone(),
        source,
    };
    GestureSample::new(touch, accel, label, meta)
}

/// Reads a capture file; blank lines are skipped.
pub fn read_captures<R: BufRead>(input: R) -> Result<Vec<RawCapture>> {
    let mut out = Vec::new();
    for (i, line) in input.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        out.push(serde_json::from_str(&line).map_err(|e| Error::Parse {
            line: i + 1,
            message: e.to_string(),
        })?);
    }
    Ok(out)
}
