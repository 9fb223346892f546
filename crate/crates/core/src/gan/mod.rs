//! Recurrent GAN for swipe sequences.
//!
//! Generator and discriminator share the topology of [`net::Network`]: two
//! LSTM layers and a dense head. The generator reads a human sequence with
//! Gaussian noise appended at every timestep and emits a sequence of the same
//! shape; the discriminator reads a sequence and returns the probability that
//! it is human.
//!
//! The touch model works on `{x, y}` in screen units; the accelerometer model
//! works on `{x, y, z}` standardized per axis with pooled human statistics.

pub mod adam;
pub mod net;

use std::path::Path;

use rand::seq::SliceRandom;
use rand::Rng as _;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::envelope;
use crate::error::{Error, Result};
use crate::model::{
    resample_accel, resample_touch, AccelSample, AccelSequence, GestureSample, Label, SessionMeta,
    TouchPoint, TouchTrajectory,
};
use crate::stats::{self, derive_seed, Rng};
use crate::synth::{draw_duration, SwipePriors};

pub use adam::Adam;
pub use net::{Head, NetConfig, Network, Trace};

pub const DEFAULT_SEQ_LEN: usize = 32;
pub const DEFAULT_NOISE_DIM: usize = 8;
pub const DEFAULT_UNITS: [usize; 2] = [16, 16];
/// Human sequences kept in a model to condition generation.
pub const SEED_BANK_SIZE: usize = 256;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Modality {
    Touch,
    Accel,
}

impl Modality {
    pub fn dim(self) -> usize {
        match self {
            Modality::Touch => 2,
            Modality::Accel => 3,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GeneratorLoss {
    /// Squared error of the discriminator output on fakes toward 1.
    Lsgan,
    /// Squared error of the generated sequence toward its conditioning input.
    Reconstruction,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrainConfig {
    pub learning_rate: f64,
    pub adam_beta1: f64,
    pub adam_beta2: f64,
    pub adam_eps: f64,
    pub epochs: usize,
    pub batch_size: usize,
    pub noise_dim: usize,
    pub generator_loss: GeneratorLoss,
    pub rng_seed: u64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            learning_rate: 2e-4,
            adam_beta1: 0.5,
            adam_beta2: 0.999,
            adam_eps: 1e-8,
            epochs: 50,
            batch_size: 128,
            noise_dim: DEFAULT_NOISE_DIM,
            generator_loss: GeneratorLoss::Lsgan,
            rng_seed: 0,
        }
    }
}

/// Shape of both networks of one GAN.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GanShape {
    pub seq_len: usize,
    pub lstm_units: [usize; 2],
    /// Generator output is the conditioning sequence plus the dense head,
    /// with the head starting at zero.
    pub residual: bool,
}

impl Default for GanShape {
    fn default() -> Self {
        GanShape {
            seq_len: DEFAULT_SEQ_LEN,
            lstm_units: DEFAULT_UNITS,
            residual: true,
        }
    }
}

impl GanShape {
    pub fn generator(&self, modality: Modality, noise_dim: usize) -> NetConfig {
        NetConfig {
            input_dim: modality.dim() + noise_dim,
            lstm_units: self.lstm_units,
            output_dim: modality.dim(),
            seq_len: self.seq_len,
            head: Head::Sequence,
        }
    }

    pub fn discriminator(&self, modality: Modality) -> NetConfig {
        NetConfig {
            input_dim: modality.dim(),
            lstm_units: self.lstm_units,
            output_dim: 1,
            seq_len: self.seq_len,
            head: Head::Logistic,
        }
    }
}

/// Per-axis affine map between m/s² and model space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AxisScaler {
    pub mean: [f64; 3],
    pub std: [f64; 3],
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EpochLoss {
    pub discriminator: f64,
    pub generator: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GanModel {
    pub modality: Modality,
    pub shape: GanShape,
    pub train: TrainConfig,
    pub generator: Network,
    pub discriminator: Network,
    pub history: Vec<EpochLoss>,
    pub scaler: Option<AxisScaler>,
    /// Human sequences (model space, flattened `T × d`) used to condition
    /// generation after training.
    pub seed_bank: Vec<Vec<f64>>,
}

/// Flattened `T × 2` coordinates of a trajectory resampled to `seq_len`.
pub fn touch_sequence(traj: &TouchTrajectory, seq_len: usize) -> Result<Vec<f64>> {
    let r = resample_touch(traj, seq_len)?;
    Ok(r.points().iter().flat_map(|p| [p.x, p.y]).collect())
}

/// Flattened `T × 3` raw axes of an accelerometer sequence resampled to `seq_len`.
pub fn accel_sequence(seq: &AccelSequence, seq_len: usize) -> Result<Vec<f64>> {
    let r = resample_accel(seq, seq_len)?;
    Ok(r.samples().iter().flat_map(|s| s.axes()).collect())
}

fn fit_scaler(seqs: &[Vec<f64>]) -> AxisScaler {
    let mut mean = [0.0; 3];
    let mut std = [1.0; 3];
    for axis in 0..3 {
        let vals: Vec<f64> = seqs
            .iter()
            .flat_map(|s| s.iter().skip(axis).step_by(3).copied())
            .collect();
        mean[axis] = stats::mean(&vals);
        let s = stats::pop_std(&vals);
        std[axis] = if s > 1e-12 { s } else { 1.0 };
    }
    AxisScaler { mean, std }
}

impl AxisScaler {
    fn to_model(&self, seq: &mut [f64]) {
        for (i, v) in seq.iter_mut().enumerate() {
            *v = (*v - self.mean[i % 3]) / self.std[i % 3];
        }
    }

    fn to_physical(&self, seq: &mut [f64]) {
        for (i, v) in seq.iter_mut().enumerate() {
            *v = *v * self.std[i % 3] + self.mean[i % 3];
        }
    }
}

/// Extracts the training sequences of one modality from human gestures.
/// Gestures without accelerometer data are skipped for the accel modality.
pub fn training_sequences(
    human: &[GestureSample],
    modality: Modality,
    seq_len: usize,
) -> Result<(Vec<Vec<f64>>, Option<AxisScaler>)> {
    match modality {
        Modality::Touch => {
            let seqs = human
                .iter()
                .map(|g| touch_sequence(&g.touch, seq_len))
                .collect::<Result<Vec<_>>>()?;
            Ok((seqs, None))
        }
        Modality::Accel => {
            let mut seqs = human
                .iter()
                .filter_map(|g| g.accel.as_ref())
                .map(|a| accel_sequence(a, seq_len))
                .collect::<Result<Vec<_>>>()?;
            let scaler = fit_scaler(&seqs);
            for s in &mut seqs {
                scaler.to_model(s);
            }
            Ok((seqs, Some(scaler)))
        }
    }
}

fn gaussian_noise(rng: &mut Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.sample(StandardNormal)).collect()
}

fn interleave(seq: &[f64], noise: &[f64], d: usize, k: usize) -> Vec<f64> {
    let steps = seq.len() / d;
    let mut out = Vec::with_capacity(steps * (d + k));
    for t in 0..steps {
        out.extend_from_slice(&seq[t * d..(t + 1) * d]);
        out.extend_from_slice(&noise[t * k..(t + 1) * k]);
    }
    out
}

/// Softplus, `ln(1 + e^z)`, without overflow.
fn softplus(z: f64) -> f64 {
    if z > 0.0 {
        z + (-z).exp().ln_1p()
    } else {
        z.exp().ln_1p()
    }
}

impl GanModel {
    fn clamps(&self) -> bool {
        self.modality == Modality::Touch
    }

    /// Generator output for a conditioning sequence and per-step noise, both
    /// flattened. Touch outputs are clamped into the unit square.
    pub fn generate(&self, human_seq: &[f64], noise: &[f64]) -> Result<Vec<f64>> {
        let d = self.modality.dim();
        let k = self.train.noise_dim;
        if human_seq.len() % d != 0 || noise.len() != (human_seq.len() / d) * k {
            return Err(Error::ShapeMismatch(format!(
                "conditioning length {} / noise length {} for d={d}, noise_dim={k}",
                human_seq.len(),
                noise.len()
            )));
        }
        let mut out = self.generator.predict(&interleave(human_seq, noise, d, k))?;
        if self.shape.residual {
            out.iter_mut().zip(human_seq).for_each(|(o, h)| *o += h);
        }
        if self.clamps() {
            out.iter_mut().for_each(|v| *v = v.clamp(0.0, 1.0));
        }
        Ok(out)
    }

    /// Draws a conditioning sequence from the seed bank and fresh noise.
    /// Output is in model space.
    pub fn sample(&self, rng: &mut Rng) -> Result<Vec<f64>> {
        if self.seed_bank.is_empty() {
            return Err(Error::ModelMissing("GAN has no conditioning sequences".into()));
        }
        let cond = &self.seed_bank[rng.random_range(0..self.seed_bank.len())];
        let noise = gaussian_noise(rng, self.shape.seq_len * self.train.noise_dim);
        self.generate(cond, &noise)
    }

    /// Discriminator probability that a model-space sequence is human.
    pub fn discriminate(&self, seq: &[f64]) -> Result<f64> {
        Ok(self.discriminator.predict(seq)?[0])
    }

    /// Converts a generated accelerometer sequence back to m/s².
    pub fn to_physical(&self, seq: &mut [f64]) {
        if let Some(s) = &self.scaler {
            s.to_physical(seq);
        }
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        envelope::save("gan", self, path)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let m: GanModel = envelope::load("gan", path)?;
        m.validate()?;
        Ok(m)
    }

    fn validate(&self) -> Result<()> {
        let g = Network::zeros(self.shape.generator(self.modality, self.train.noise_dim));
        let d = Network::zeros(self.shape.discriminator(self.modality));
        if g.config != self.generator.config
            || d.config != self.discriminator.config
            || g.params.len() != self.generator.params.len()
            || d.params.len() != self.discriminator.params.len()
        {
            return Err(Error::ShapeMismatch("GAN parameters inconsistent with its shape".into()));
        }
        Ok(())
    }
}

pub fn save_gan(model: &GanModel, path: impl AsRef<Path>) -> Result<()> {
    model.save(path)
}

pub fn load_gan(path: impl AsRef<Path>) -> Result<GanModel> {
    GanModel::load(path)
}

/// Adversarial training on prepared model-space sequences.
///
/// Each batch first updates the discriminator with binary cross-entropy on
/// real (target 1) and generated (target 0) sequences, then the generator
/// through the frozen discriminator.
pub fn train_on_sequences(
    seqs: &[Vec<f64>],
    modality: Modality,
    shape: GanShape,
    config: TrainConfig,
    scaler: Option<AxisScaler>,
) -> Result<GanModel> {
    let d = modality.dim();
    let t_len = shape.seq_len;
    if seqs.len() < config.batch_size.max(1) {
        return Err(Error::TooFewSamples {
            needed: config.batch_size.max(1),
            got: seqs.len(),
        });
    }
    if let Some(s) = seqs.iter().find(|s| s.len() != t_len * d) {
        return Err(Error::ShapeMismatch(format!(
            "training sequence of length {} (expected {})",
            s.len(),
            t_len * d
        )));
    }

    let mut rng = stats::rng(config.rng_seed);
    let mut model = GanModel {
        modality,
        shape,
        train: config,
        generator: Network::init(shape.generator(modality, config.noise_dim), &mut rng),
        discriminator: Network::init(shape.discriminator(modality), &mut rng),
        history: Vec::with_capacity(config.epochs),
        scaler,
        seed_bank: Vec::new(),
    };
    if shape.residual {
        model.generator.zero_head();
    }
    let new_adam = |n| {
        Adam::new(n, config.learning_rate, config.adam_beta1, config.adam_beta2, config.adam_eps)
    };
    let mut adam_g = new_adam(model.generator.param_count());
    let mut adam_d = new_adam(model.discriminator.param_count());
    let noise_len = t_len * config.noise_dim;
    let mut order: Vec<usize> = (0..seqs.len()).collect();

    for epoch in 0..config.epochs {
        order.shuffle(&mut rng);
        let (mut d_sum, mut g_sum, mut batches) = (0.0, 0.0, 0usize);
        for batch in order.chunks(config.batch_size) {
            let scale = 1.0 / batch.len() as f64;

            let mut grad_d = vec![0.0; model.discriminator.param_count()];
            let mut d_loss = 0.0;
            for &i in batch {
                let tr = model.discriminator.forward(&seqs[i])?;
                let z = tr.logit();
                d_loss += 0.5 * scale * softplus(-z);
                let (g, _) =
                    model.discriminator.backward_raw(&tr, &[0.5 * scale * (net::logistic(z) - 1.0)], false);
                add_into(&mut grad_d, &g);

                let noise = gaussian_noise(&mut rng, noise_len);
                let fake = model.generate(&seqs[i], &noise)?;
                let tr = model.discriminator.forward(&fake)?;
                let z = tr.logit();
                d_loss += 0.5 * scale * softplus(z);
                let (g, _) = model.discriminator.backward_raw(&tr, &[0.5 * scale * net::logistic(z)], false);
                add_into(&mut grad_d, &g);
            }
            adam_d.step(&mut model.discriminator.params, &grad_d);

            let mut grad_g = vec![0.0; model.generator.param_count()];
            let mut g_loss = 0.0;
            for &i in batch {
                let noise = gaussian_noise(&mut rng, noise_len);
                let g_trace = model.generator.forward(&interleave(&seqs[i], &noise, d, config.noise_dim))?;
                let mut fake = g_trace.output.clone();
                if shape.residual {
                    fake.iter_mut().zip(&seqs[i]).for_each(|(f, h)| *f += h);
                }
                let mut mask = vec![1.0; fake.len()];
                if modality == Modality::Touch {
                    for (v, m) in fake.iter_mut().zip(&mut mask) {
                        if *v < 0.0 || *v > 1.0 {
                            *m = 0.0;
                            *v = v.clamp(0.0, 1.0);
                        }
                    }
                }
                let d_out: Vec<f64> = match config.generator_loss {
                    GeneratorLoss::Lsgan => {
                        let tr = model.discriminator.forward(&fake)?;
                        let p = tr.probability();
                        g_loss += scale * (p - 1.0) * (p - 1.0);
                        let (_, dx) = model.discriminator.backward(&tr, &[2.0 * scale * (p - 1.0)], true);
                        dx
                    }
                    GeneratorLoss::Reconstruction => {
                        let m = fake.len() as f64;
                        fake.iter()
                            .zip(&seqs[i])
                            .map(|(f, r)| {
                                g_loss += scale * (f - r) * (f - r) / m;
                                2.0 * scale * (f - r) / m
                            })
                            .collect()
                    }
                };
                let d_out: Vec<f64> = d_out.iter().zip(&mask).map(|(g, m)| g * m).collect();
                let (g, _) = model.generator.backward(&g_trace, &d_out, false);
                add_into(&mut grad_g, &g);
            }
            adam_g.step(&mut model.generator.params, &grad_g);

            d_sum += d_loss;
            g_sum += g_loss;
            batches += 1;
        }
        let loss = EpochLoss {
            discriminator: d_sum / batches as f64,
            generator: g_sum / batches as f64,
        };
        if !(loss.discriminator.is_finite() && loss.generator.is_finite()) {
            return Err(Error::Diverged { epoch });
        }
        model.history.push(loss);
    }

    let mut bank_order: Vec<usize> = (0..seqs.len()).collect();
    bank_order.shuffle(&mut rng);
    model.seed_bank = bank_order
        .into_iter()
        .take(SEED_BANK_SIZE)
        .map(|i| seqs[i].clone())
        .collect();
    Ok(model)
}

fn add_into(acc: &mut [f64], g: &[f64]) {
    for (a, b) in acc.iter_mut().zip(g) {
        *a += b;
    }
}

/// Trains a GAN of the given modality on human gestures.
pub fn train_gan(
    human: &[GestureSample],
    modality: Modality,
    shape: GanShape,
    config: TrainConfig,
) -> Result<GanModel> {
    let (seqs, scaler) = training_sequences(human, modality, shape.seq_len)?;
    train_on_sequences(&seqs, modality, shape, config, scaler)
}

/// Touch and accelerometer generators used together to forge complete
/// gestures.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GanPair {
    pub touch: GanModel,
    pub accel: Option<GanModel>,
}

/// One complete GAN fake. Timestamps are uniform over a duration drawn from
/// the human duration prior.
pub fn synth_gan_gesture(pair: &GanPair, priors: &SwipePriors, seed: u64) -> Result<GestureSample> {
    let mut rng = stats::rng(derive_seed(seed, 0x4741));
    let duration = draw_duration(&priors.duration, &mut rng)?;
    let seq = pair.touch.sample(&mut rng)?;
    let steps = seq.len() / 2;
    let last = (steps - 1) as f64;
    let points = (0..steps)
        .map(|i| {
            let t = if i == steps - 1 { duration } else { duration * i as f64 / last };
            TouchPoint::new(seq[2 * i], seq[2 * i + 1], t)
        })
        .collect();
    let touch = TouchTrajectory::new(points, 1080, 1920)?;

    let accel = match &pair.accel {
        Some(model) => {
            let mut a = model.sample(&mut rng)?;
            model.to_physical(&mut a);
            let n = a.len() / 3;
            let samples = (0..n)
                .map(|i| {
                    let t = if i == n - 1 { duration } else { duration * i as f64 / (n - 1) as f64 };
                    AccelSample::new(a[3 * i], a[3 * i + 1], a[3 * i + 2], t)
                })
                .collect();
            Some(AccelSequence::new(samples, (n - 1) as f64 / duration)?)
        }
        None => None,
    };
    GestureSample::new(touch, accel, Label::FakeGan, SessionMeta::synthetic(format!("gan-{seed}")))
}

pub fn synth_gan_batch(pair: &GanPair, priors: &SwipePriors, seed: u64, n: usize) -> Result<Vec<GestureSample>> {
    (0..n as u64)
        .map(|i| synth_gan_gesture(pair, priors, derive_seed(seed, i)))
        .collect()
}
