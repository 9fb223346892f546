//! Gesture and session types, screen normalization and resampling.
//!
//! Coordinates are fractions of the screen (`0..=1`) and timestamps are
//! seconds relative to the first touch point. Raw captures in pixels and
//! milliseconds enter through [`normalize_touch`].

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default accelerometer sampling rate of the capture app.
pub const DEFAULT_ACCEL_RATE_HZ: f64 = 200.0;

/// Raw coordinates may overshoot the screen by this fraction of its size
/// before the capture is treated as corrupt.
const SCREEN_SLACK: f64 = 0.01;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(from = "(f64, f64, Option<f64>, f64)", into = "(f64, f64, Option<f64>, f64)")]
pub struct TouchPoint {
    pub x: f64,
    pub y: f64,
    /// Carried for provenance only; no feature uses it.
    pub p: Option<f64>,
    pub t: f64,
}

impl TouchPoint {
    pub fn new(x: f64, y: f64, t: f64) -> Self {
        TouchPoint { x, y, p: None, t }
    }
}

impl From<(f64, f64, Option<f64>, f64)> for TouchPoint {
    fn from((x, y, p, t): (f64, f64, Option<f64>, f64)) -> Self {
        TouchPoint { x, y, p, t }
    }
}

impl From<TouchPoint> for (f64, f64, Option<f64>, f64) {
    fn from(p: TouchPoint) -> Self {
        (p.x, p.y, p.p, p.t)
    }
}

/// A screen-normalized swipe: `N + 1` points, `N >= 1` segments, `t0 = 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "TouchRecord", into = "TouchRecord")]
pub struct TouchTrajectory {
    points: Vec<TouchPoint>,
    screen_w: u32,
    screen_h: u32,
}

/// Unvalidated wire form of [`TouchTrajectory`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TouchRecord {
    pub points: Vec<TouchPoint>,
    pub screen_w: u32,
    pub screen_h: u32,
}

impl TouchTrajectory {
    pub fn new(points: Vec<TouchPoint>, screen_w: u32, screen_h: u32) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::EmptyGesture);
        }
        if screen_w == 0 || screen_h == 0 {
            return Err(Error::Invalid("screen dimensions must be positive".into()));
        }
        for (i, p) in points.iter().enumerate() {
            if !(p.x.is_finite() && p.y.is_finite() && p.t.is_finite()) {
                return Err(Error::Invalid(format!("point {i} is not finite")));
            }
            if !(0.0..=1.0).contains(&p.x) || !(0.0..=1.0).contains(&p.y) {
                return Err(Error::Invalid(format!(
                    "point {i} ({}, {}) is outside the unit square",
                    p.x, p.y
                )));
            }
            if let Some(pr) = p.p {
                if !(0.0..=1.0).contains(&pr) {
                    return Err(Error::Invalid(format!("point {i} pressure {pr} outside [0,1]")));
                }
            }
        }
        if points[0].t != 0.0 {
            return Err(Error::Invalid(format!(
                "first timestamp must be 0, got {}",
                points[0].t
            )));
        }
        if let Some(i) = points.windows(2).position(|w| w[1].t < w[0].t) {
            return Err(Error::Invalid(format!(
                "timestamps decrease between points {i} and {}",
                i + 1
            )));
        }
        Ok(TouchTrajectory {
            points,
            screen_w,
            screen_h,
        })
    }

    pub fn points(&self) -> &[TouchPoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Number of segments `N`.
    pub fn segments(&self) -> usize {
        self.points.len() - 1
    }

    pub fn screen(&self) -> (u32, u32) {
        (self.screen_w, self.screen_h)
    }

    pub fn duration(&self) -> f64 {
        self.points[self.points.len() - 1].t
    }

    pub fn first(&self) -> &TouchPoint {
        &self.points[0]
    }

    pub fn last(&self) -> &TouchPoint {
        &self.points[self.points.len() - 1]
    }
}

impl TryFrom<TouchRecord> for TouchTrajectory {
    type Error = Error;

    fn try_from(r: TouchRecord) -> Result<Self> {
        TouchTrajectory::new(r.points, r.screen_w, r.screen_h)
    }
}

impl From<TouchTrajectory> for TouchRecord {
    fn from(t: TouchTrajectory) -> Self {
        TouchRecord {
            points: t.points,
            screen_w: t.screen_w,
            screen_h: t.screen_h,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(from = "[f64; 4]", into = "[f64; 4]")]
pub struct AccelSample {
    pub ax: f64,
    pub ay: f64,
    pub az: f64,
    pub t: f64,
}

impl AccelSample {
    pub fn new(ax: f64, ay: f64, az: f64, t: f64) -> Self {
        AccelSample { ax, ay, az, t }
    }

    pub fn axes(&self) -> [f64; 3] {
        [self.ax, self.ay, self.az]
    }
}

impl From<[f64; 4]> for AccelSample {
    fn from([ax, ay, az, t]: [f64; 4]) -> Self {
        AccelSample { ax, ay, az, t }
    }
}

impl From<AccelSample> for [f64; 4] {
    fn from(s: AccelSample) -> Self {
        [s.ax, s.ay, s.az, s.t]
    }
}

/// Accelerometer samples in m/s², at least four of them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "AccelRecord", into = "AccelRecord")]
pub struct AccelSequence {
    samples: Vec<AccelSample>,
    rate_hz: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AccelRecord {
    pub rate_hz: f64,
    pub samples: Vec<AccelSample>,
}

impl AccelSequence {
    pub const MIN_SAMPLES: usize = 4;

    pub fn new(samples: Vec<AccelSample>, rate_hz: f64) -> Result<Self> {
        if samples.len() < Self::MIN_SAMPLES {
            return Err(Error::TooFewSamples {
                needed: Self::MIN_SAMPLES,
                got: samples.len(),
            });
        }
        if !(rate_hz.is_finite() && rate_hz > 0.0) {
            return Err(Error::Invalid(format!("accelerometer rate {rate_hz} Hz")));
        }
        for (i, s) in samples.iter().enumerate() {
            if !(s.ax.is_finite() && s.ay.is_finite() && s.az.is_finite() && s.t.is_finite()) {
                return Err(Error::Invalid(format!("accel sample {i} is not finite")));
            }
            if s.t < 0.0 {
                return Err(Error::Invalid(format!("accel sample {i} has negative time")));
            }
        }
        if let Some(i) = samples.windows(2).position(|w| w[1].t < w[0].t) {
            return Err(Error::Invalid(format!(
                "accel timestamps decrease between samples {i} and {}",
                i + 1
            )));
        }
        Ok(AccelSequence { samples, rate_hz })
    }

    pub fn samples(&self) -> &[AccelSample] {
        &self.samples
    }

    pub fn rate_hz(&self) -> f64 {
        self.rate_hz
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn span(&self) -> (f64, f64) {
        (self.samples[0].t, self.samples[self.samples.len() - 1].t)
    }
}

impl TryFrom<AccelRecord> for AccelSequence {
    type Error = Error;

    fn try_from(r: AccelRecord) -> Result<Self> {
        AccelSequence::new(r.samples, r.rate_hz)
    }
}

impl From<AccelSequence> for AccelRecord {
    fn from(a: AccelSequence) -> Self {
        AccelRecord {
            rate_hz: a.rate_hz,
            samples: a.samples,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Label {
    Human,
    FakeHandcrafted,
    FakeGan,
    Unknown,
}

impl Label {
    pub fn is_fake(self) -> bool {
        matches!(self, Label::FakeHandcrafted | Label::FakeGan)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Orientation {
    Landscape,
    Portrait,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Source {
    Recorded,
    Synthetic,
    Fixture,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SessionMeta {
    pub subject_id: String,
    pub device_model: String,
    pub orientation: Orientation,
    pub captured_at: String,
    pub source: Source,
}

impl SessionMeta {
    pub fn synthetic(subject_id: impl Into<String>) -> Self {
        SessionMeta {
            subject_id: subject_id.into(),
            device_model: "synthetic".into(),
            orientation: Orientation::Portrait,
            captured_at: "1970-01-01".into(),
            source: Source::Synthetic,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "GestureRecord", into = "GestureRecord")]
pub struct GestureSample {
    pub touch: TouchTrajectory,
    pub accel: Option<AccelSequence>,
    pub label: Label,
    pub meta: SessionMeta,
}

/// Wire form of a gesture; deserializes anything structurally well-formed
/// so that callers can decide how to treat invalid gestures.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GestureRecord {
    pub touch: TouchRecord,
    pub accel: Option<AccelRecord>,
    pub label: Label,
    pub meta: SessionMeta,
}

impl GestureSample {
    pub fn new(
        touch: TouchTrajectory,
        accel: Option<AccelSequence>,
        label: Label,
        meta: SessionMeta,
    ) -> Result<Self> {
        if meta.source == Source::Recorded && meta.subject_id.is_empty() {
            return Err(Error::Invalid("recorded gesture without subject_id".into()));
        }
        if let Some(a) = &accel {
            let (a0, a1) = a.span();
            if a0 > touch.duration() || a1 < 0.0 {
                return Err(Error::Invalid(format!(
                    "accelerometer span [{a0}, {a1}] does not overlap touch span [0, {}]",
                    touch.duration()
                )));
            }
        }
        Ok(GestureSample {
            touch,
            accel,
            label,
            meta,
        })
    }
}

impl TryFrom<GestureRecord> for GestureSample {
    type Error = Error;

    fn try_from(r: GestureRecord) -> Result<Self> {
        let touch = TouchTrajectory::try_from(r.touch)?;
        let accel = r.accel.map(AccelSequence::try_from).transpose()?;
        GestureSample::new(touch, accel, r.label, r.meta)
    }
}

impl From<GestureSample> for GestureRecord {
    fn from(g: GestureSample) -> Self {
        GestureRecord {
            touch: g.touch.into(),
            accel: g.accel.map(Into::into),
            label: g.label,
            meta: g.meta,
        }
    }
}

/// One raw touch event as delivered by a capture: pixels and milliseconds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(from = "(f64, f64, Option<f64>, f64)", into = "(f64, f64, Option<f64>, f64)")]
pub struct RawTouch {
    pub x_px: f64,
    pub y_px: f64,
    pub p: Option<f64>,
    pub t_ms: f64,
}

impl RawTouch {
    pub fn new(x_px: f64, y_px: f64, t_ms: f64) -> Self {
        RawTouch {
            x_px,
            y_px,
            p: None,
            t_ms,
        }
    }
}

impl From<(f64, f64, Option<f64>, f64)> for RawTouch {
    fn from((x_px, y_px, p, t_ms): (f64, f64, Option<f64>, f64)) -> Self {
        RawTouch { x_px, y_px, p, t_ms }
    }
}

impl From<RawTouch> for (f64, f64, Option<f64>, f64) {
    fn from(r: RawTouch) -> Self {
        (r.x_px, r.y_px, r.p, r.t_ms)
    }
}

/// Converts a raw pixel/millisecond capture into a normalized trajectory.
///
/// Points are sorted by time, shifted to start at zero and converted to
/// seconds. Points sharing a timestamp collapse into the last one received.
/// Coordinates within 1% outside the screen are clamped onto it; anything
/// further out is rejected as a corrupt capture.
pub fn normalize_touch(raw: &[RawTouch], screen_w: u32, screen_h: u32) -> Result<TouchTrajectory> {
    if screen_w == 0 || screen_h == 0 {
        return Err(Error::Invalid("screen dimensions must be positive".into()));
    }
    let (w, h) = (f64::from(screen_w), f64::from(screen_h));
    for r in raw {
        if !(r.x_px.is_finite() && r.y_px.is_finite() && r.t_ms.is_finite()) {
            return Err(Error::Invalid("raw touch contains a non-finite value".into()));
        }
        let out_x = r.x_px < -SCREEN_SLACK * w || r.x_px > (1.0 + SCREEN_SLACK) * w;
        let out_y = r.y_px < -SCREEN_SLACK * h || r.y_px > (1.0 + SCREEN_SLACK) * h;
        if out_x || out_y {
            return Err(Error::OutOfScreen {
                x: r.x_px,
                y: r.y_px,
                width: screen_w,
                height: screen_h,
            });
        }
    }

    // Stable sort keeps arrival order among equal timestamps, so "last" below
    // is the last event the driver delivered.
    let mut sorted: Vec<RawTouch> = raw.to_vec();
    sorted.sort_by(|a, b| a.t_ms.total_cmp(&b.t_ms));
    let mut dedup: Vec<RawTouch> = Vec::with_capacity(sorted.len());
    for r in sorted {
        match dedup.last_mut() {
            Some(prev) if prev.t_ms == r.t_ms => *prev = r,
            _ => dedup.push(r),
        }
    }
    if dedup.len() < 2 {
        return Err(Error::EmptyGesture);
    }

    let t0 = dedup[0].t_ms;
    let points = dedup
        .iter()
        .map(|r| TouchPoint {
            x: (r.x_px / w).clamp(0.0, 1.0),
            y: (r.y_px / h).clamp(0.0, 1.0),
            p: r.p.map(|p| p.clamp(0.0, 1.0)),
            t: (r.t_ms - t0) / 1000.0,
        })
        .collect();
    TouchTrajectory::new(points, screen_w, screen_h)
}

/// Piecewise-linear interpolation of a monotone time grid at `t`.
/// Returns the segment index and the fraction within it.
fn locate(times: &[f64], t: f64, hint: usize) -> (usize, f64) {
    let mut k = hint;
    while k + 2 < times.len() && times[k + 1] <= t {
        k += 1;
    }
    let dt = times[k + 1] - times[k];
    let frac = if dt > 0.0 { ((t - times[k]) / dt).clamp(0.0, 1.0) } else { 1.0 };
    (k, frac)
}

/// Resamples a trajectory onto `count` uniformly spaced timestamps spanning
/// the original duration. First and last points are kept exactly.
pub fn resample_touch(traj: &TouchTrajectory, count: usize) -> Result<TouchTrajectory> {
    if count < 2 {
        return Err(Error::EmptyGesture);
    }
    let pts = traj.points();
    let times: Vec<f64> = pts.iter().map(|p| p.t).collect();
    let duration = traj.duration();
    let last = count - 1;
    let mut out = Vec::with_capacity(count);
    let mut hint = 0;
    for i in 0..count {
        if i == 0 {
            out.push(TouchPoint { p: None, ..pts[0] });
            continue;
        }
        if i == last {
            out.push(TouchPoint { p: None, ..pts[pts.len() - 1] });
            continue;
        }
        let t = duration * i as f64 / last as f64;
        let (k, f) = locate(&times, t, hint);
        hint = k;
        let (a, b) = (&pts[k], &pts[k + 1]);
        out.push(TouchPoint {
            x: a.x + f * (b.x - a.x),
            y: a.y + f * (b.y - a.y),
            p: None,
            t,
        });
    }
    let (w, h) = traj.screen();
    TouchTrajectory::new(out, w, h)
}

/// Resamples accelerometer axes onto `count` uniform timestamps over the
/// sequence span.
pub fn resample_accel(seq: &AccelSequence, count: usize) -> Result<AccelSequence> {
    if count < AccelSequence::MIN_SAMPLES {
        return Err(Error::TooFewSamples {
            needed: AccelSequence::MIN_SAMPLES,
            got: count,
        });
    }
    let s = seq.samples();
    let times: Vec<f64> = s.iter().map(|a| a.t).collect();
    let (t0, t1) = seq.span();
    let last = count - 1;
    let mut out = Vec::with_capacity(count);
    let mut hint = 0;
    for i in 0..count {
        let t = if i == last { t1 } else { t0 + (t1 - t0) * i as f64 / last as f64 };
        let (k, f) = locate(&times, t, hint);
        hint = k;
        let (a, b) = (&s[k], &s[k + 1]);
        out.push(AccelSample {
            ax: a.ax + f * (b.ax - a.ax),
            ay: a.ay + f * (b.ay - a.ay),
            az: a.az + f * (b.az - a.az),
            t,
        });
    }
    let rate = if t1 > t0 { last as f64 / (t1 - t0) } else { seq.rate_hz() };
    AccelSequence::new(out, rate)
}
