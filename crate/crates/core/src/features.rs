//! Global swipe features and detector input assembly.
//!
//! Six touch features describe the shape and timing of a swipe:
//!
//! | name | meaning |
//! |------|---------|
//! | `D`  | duration, `t_N - t_0` |
//! | `L`  | distance between first and last point |
//! | `P`  | displacement: summed Euclidean length of all segments |
//! | `α`  | `atan2(x_N - x_0, y_N - y_0)` |
//! | `V`  | mean of per-segment speeds |
//! | `E`  | move efficiency, `P / L` |
//!
//! Twelve accelerometer statistics (mean, median, rms, population std per
//! axis) complete the 18-dimensional vector. Pressure never enters.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{AccelSequence, TouchPoint, TouchTrajectory};
use crate::stats;

pub const TOUCH_DIM: usize = 6;
pub const ACCEL_DIM: usize = 12;
pub const FULL_DIM: usize = TOUCH_DIM + ACCEL_DIM;

/// Column names in flattening order. Serialized models depend on this order.
pub const COLUMNS: [&str; FULL_DIM] = [
    "duration",
    "distance",
    "displacement",
    "angle",
    "mean_velocity",
    "move_efficiency",
    "mean_x",
    "mean_y",
    "mean_z",
    "median_x",
    "median_y",
    "median_z",
    "rms_x",
    "rms_y",
    "rms_z",
    "std_x",
    "std_y",
    "std_z",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FeatureMode {
    Touch,
    TouchAccel,
}

impl FeatureMode {
    pub fn dim(self) -> usize {
        match self {
            FeatureMode::Touch => TOUCH_DIM,
            FeatureMode::TouchAccel => FULL_DIM,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            FeatureMode::Touch => "touch",
            FeatureMode::TouchAccel => "touch_accel",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TouchFeatureVector {
    pub duration_s: f64,
    pub distance: f64,
    pub displacement: f64,
    pub angle_rad: f64,
    pub mean_velocity: f64,
    pub move_efficiency: f64,
}

impl TouchFeatureVector {
    pub fn to_array(&self) -> [f64; TOUCH_DIM] {
        [
            self.duration_s,
            self.distance,
            self.displacement,
            self.angle_rad,
            self.mean_velocity,
            self.move_efficiency,
        ]
    }

    pub fn from_array(a: &[f64; TOUCH_DIM]) -> Self {
        TouchFeatureVector {
            duration_s: a[0],
            distance: a[1],
            displacement: a[2],
            angle_rad: a[3],
            mean_velocity: a[4],
            move_efficiency: a[5],
        }
    }

    /// True for zero-length swipes, whose move efficiency is the 0 sentinel.
    pub fn is_degenerate(&self) -> bool {
        self.distance == 0.0
    }
}

/// Per-axis statistics, each array ordered `[x, y, z]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AccelFeatureVector {
    pub mean: [f64; 3],
    pub median: [f64; 3],
    pub rms: [f64; 3],
    pub std: [f64; 3],
}

impl AccelFeatureVector {
    pub fn to_array(&self) -> [f64; ACCEL_DIM] {
        let mut out = [0.0; ACCEL_DIM];
        for (k, block) in [self.mean, self.median, self.rms, self.std].iter().enumerate() {
            out[3 * k..3 * k + 3].copy_from_slice(block);
        }
        out
    }

    pub fn from_array(a: &[f64; ACCEL_DIM]) -> Self {
        let block = |k: usize| [a[3 * k], a[3 * k + 1], a[3 * k + 2]];
        AccelFeatureVector {
            mean: block(0),
            median: block(1),
            rms: block(2),
            std: block(3),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CombinedFeatureVector {
    pub touch: TouchFeatureVector,
    pub accel: Option<AccelFeatureVector>,
}

impl CombinedFeatureVector {
    pub fn mode(&self) -> FeatureMode {
        if self.accel.is_some() {
            FeatureMode::TouchAccel
        } else {
            FeatureMode::Touch
        }
    }

    /// Flattens to 6 (touch only) or 18 values.
    pub fn as_array(&self) -> Vec<f64> {
        let mut v = self.touch.to_array().to_vec();
        if let Some(a) = &self.accel {
            v.extend_from_slice(&a.to_array());
        }
        v
    }

    /// Flattened vector for a given mode; fails when accelerometer features
    /// are requested but absent.
    pub fn project(&self, mode: FeatureMode) -> Result<Vec<f64>> {
        match (mode, &self.accel) {
            (FeatureMode::Touch, _) => Ok(self.touch.to_array().to_vec()),
            (FeatureMode::TouchAccel, Some(_)) => Ok(self.as_array()),
            (FeatureMode::TouchAccel, None) => Err(Error::DimensionMismatch {
                expected: FULL_DIM,
                got: TOUCH_DIM,
            }),
        }
    }

    pub fn from_array(values: &[f64]) -> Result<Self> {
        match values.len() {
            TOUCH_DIM => Ok(CombinedFeatureVector {
                touch: TouchFeatureVector::from_array(values.try_into().unwrap()),
                accel: None,
            }),
            FULL_DIM => Ok(CombinedFeatureVector {
                touch: TouchFeatureVector::from_array(values[..TOUCH_DIM].try_into().unwrap()),
                accel: Some(AccelFeatureVector::from_array(
                    values[TOUCH_DIM..].try_into().unwrap(),
                )),
            }),
            n => Err(Error::DimensionMismatch {
                expected: FULL_DIM,
                got: n,
            }),
        }
    }
}

pub fn combine(touch: TouchFeatureVector, accel: Option<AccelFeatureVector>) -> CombinedFeatureVector {
    CombinedFeatureVector { touch, accel }
}

/// Touch features with the zero-length sentinel: `E = 0` when `L = 0`.
pub fn touch_features_lenient(points: &[TouchPoint]) -> Result<TouchFeatureVector> {
    if points.len() < 2 {
        return Err(Error::EmptyGesture);
    }
    let n = points.len() - 1;
    let (first, last) = (&points[0], &points[n]);
    let (dx, dy) = (last.x - first.x, last.y - first.y);
    let distance = dx.hypot(dy);

    let mut displacement = 0.0;
    let mut speed_sum = 0.0;
    for (i, w) in points.windows(2).enumerate() {
        let len = (w[1].x - w[0].x).hypot(w[1].y - w[0].y);
        let dt = w[1].t - w[0].t;
        if dt <= 0.0 {
            return Err(Error::ZeroDt { index: i });
        }
        displacement += len;
        speed_sum += len / dt;
    }

    Ok(TouchFeatureVector {
        duration_s: last.t - first.t,
        distance,
        displacement,
        angle_rad: dx.atan2(dy),
        mean_velocity: speed_sum / n as f64,
        move_efficiency: if distance > 0.0 { displacement / distance } else { 0.0 },
    })
}

/// Six global touch features; zero-length swipes are rejected.
pub fn touch_features(traj: &TouchTrajectory) -> Result<TouchFeatureVector> {
    let fv = touch_features_lenient(traj.points())?;
    if fv.is_degenerate() {
        return Err(Error::DegenerateGesture);
    }
    Ok(fv)
}

pub fn accel_features(seq: &AccelSequence) -> Result<AccelFeatureVector> {
    let samples = seq.samples();
    if samples.len() < AccelSequence::MIN_SAMPLES {
        return Err(Error::TooFewSamples {
            needed: AccelSequence::MIN_SAMPLES,
            got: samples.len(),
        });
    }
    let mut fv = AccelFeatureVector {
        mean: [0.0; 3],
        median: [0.0; 3],
        rms: [0.0; 3],
        std: [0.0; 3],
    };
    let n = samples.len() as f64;
    for axis in 0..3 {
        let values: Vec<f64> = samples.iter().map(|s| s.axes()[axis]).collect();
        let mean = stats::mean(&values);
        fv.mean[axis] = mean;
        fv.median[axis] = stats::median(&values);
        fv.rms[axis] = (values.iter().map(|v| v * v).sum::<f64>() / n).sqrt();
        fv.std[axis] = stats::pop_std(&values);
    }
    Ok(fv)
}

/// Per-dimension z-scoring fitted on a training set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Standardizer {
    pub mean: Vec<f64>,
    pub std: Vec<f64>,
}

impl Standardizer {
    /// Standard deviations below this are treated as a constant feature.
    pub const MIN_STD: f64 = 1e-12;

    pub fn fit(rows: &[Vec<f64>]) -> Result<Self> {
        if rows.len() < 2 {
            return Err(Error::TooFewSamples {
                needed: 2,
                got: rows.len(),
            });
        }
        let dim = rows[0].len();
        if let Some(r) = rows.iter().find(|r| r.len() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: r.len(),
            });
        }
        let mut mean = vec![0.0; dim];
        let mut std = vec![0.0; dim];
        let mut column = Vec::with_capacity(rows.len());
        for j in 0..dim {
            column.clear();
            column.extend(rows.iter().map(|r| r[j]));
            mean[j] = stats::mean(&column);
            let s = stats::pop_std(&column);
            std[j] = if s < Self::MIN_STD { 1.0 } else { s };
        }
        Ok(Standardizer { mean, std })
    }

    pub fn dim(&self) -> usize {
        self.mean.len()
    }

    pub fn apply(&self, v: &[f64]) -> Result<Vec<f64>> {
        if v.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: v.len(),
            });
        }
        Ok(v.iter()
            .zip(self.mean.iter().zip(&self.std))
            .map(|(x, (m, s))| (x - m) / s)
            .collect())
    }
}

pub fn fit_standardizer(train: &[Vec<f64>]) -> Result<Standardizer> {
    Standardizer::fit(train)
}

pub fn apply_standardizer(std: &Standardizer, v: &[f64]) -> Result<Vec<f64>> {
    std.apply(v)
}

/// Writes feature vectors as CSV with the fixed 18-column header; touch-only
/// rows leave the accelerometer columns empty.
pub fn write_feature_csv<W: Write>(rows: &[CombinedFeatureVector], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(COLUMNS)?;
    for r in rows {
        let mut cells: Vec<String> = r.touch.to_array().iter().map(f64::to_string).collect();
        match &r.accel {
            Some(a) => cells.extend(a.to_array().iter().map(f64::to_string)),
            None => cells.extend(std::iter::repeat_n(String::new(), ACCEL_DIM)),
        }
        w.write_record(&cells)?;
    }
    w.flush()?;
    Ok(())
}
