//! Two stacked LSTM layers followed by a dense head, with hand-written
//! backpropagation through time.
//!
//! All parameters live in one flat vector so that the optimizer and the
//! model file can treat them uniformly. Layout, in order:
//!
//! 1. LSTM 1: `W` (4u₁ × in), `U` (4u₁ × u₁), `b` (4u₁)
//! 2. LSTM 2: `W` (4u₂ × u₁), `U` (4u₂ × u₂), `b` (4u₂)
//! 3. dense: `W` (out × u₂), `b` (out)
//!
//! Matrices are row-major; gate rows are ordered input, forget, cell, output.

use rand::Rng as _;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::stats::Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Head {
    /// Linear map applied at every timestep (generator).
    Sequence,
    /// Linear map of the final hidden state squashed to (0, 1) (discriminator).
    Logistic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct NetConfig {
    pub input_dim: usize,
    pub lstm_units: [usize; 2],
    pub output_dim: usize,
    pub seq_len: usize,
    pub head: Head,
}

#[derive(Debug, Clone, Copy)]
struct LstmLayout {
    input: usize,
    units: usize,
    w: usize,
    u: usize,
    b: usize,
}

impl LstmLayout {
    fn new(offset: usize, input: usize, units: usize) -> Self {
        let w = offset;
        let u = w + 4 * units * input;
        let b = u + 4 * units * units;
        LstmLayout { input, units, w, u, b }
    }

    fn end(&self) -> usize {
        self.b + 4 * self.units
    }
}

#[derive(Debug, Clone, Copy)]
struct Layout {
    l1: LstmLayout,
    l2: LstmLayout,
    dense_w: usize,
    dense_b: usize,
    total: usize,
}

impl Layout {
    fn new(c: &NetConfig) -> Self {
        let l1 = LstmLayout::new(0, c.input_dim, c.lstm_units[0]);
        let l2 = LstmLayout::new(l1.end(), c.lstm_units[0], c.lstm_units[1]);
        let dense_w = l2.end();
        let dense_b = dense_w + c.output_dim * c.lstm_units[1];
        Layout {
            l1,
            l2,
            dense_w,
            dense_b,
            total: dense_b + c.output_dim,
        }
    }
}

fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

/// Forward intermediates of one LSTM layer over a sequence.
#[derive(Debug, Clone)]
struct LstmTrace {
    /// T × in
    x: Vec<f64>,
    /// (T+1) × u, row 0 is the zero initial state
    h: Vec<f64>,
    c: Vec<f64>,
    /// T × 4u activated gates
    gates: Vec<f64>,
    /// T × u
    tanh_c: Vec<f64>,
}

/// Everything the backward pass needs from one forward pass.
#[derive(Debug, Clone)]
pub struct Trace {
    l1: LstmTrace,
    l2: LstmTrace,
    /// Generator: T × out outputs. Discriminator: the single logit.
    pub output: Vec<f64>,
}

impl Trace {
    /// Discriminator probability; only meaningful for the logistic head.
    pub fn probability(&self) -> f64 {
        sigmoid(self.output[0])
    }

    pub fn logit(&self) -> f64 {
        self.output[0]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Network {
    pub config: NetConfig,
    pub params: Vec<f64>,
}

fn lstm_forward(p: &[f64], l: &LstmLayout, x: Vec<f64>, steps: usize) -> LstmTrace {
    let (n_in, u) = (l.input, l.units);
    let mut h = vec![0.0; (steps + 1) * u];
    let mut c = vec![0.0; (steps + 1) * u];
    let mut gates = vec![0.0; steps * 4 * u];
    let mut tanh_c = vec![0.0; steps * u];
    let mut z = vec![0.0; 4 * u];
    for t in 0..steps {
        let xt = &x[t * n_in..(t + 1) * n_in];
        let hp = &h[t * u..(t + 1) * u];
        for (r, zr) in z.iter_mut().enumerate() {
            let wr = &p[l.w + r * n_in..l.w + (r + 1) * n_in];
            let ur = &p[l.u + r * u..l.u + (r + 1) * u];
            let mut acc = p[l.b + r];
            for k in 0..n_in {
                acc += wr[k] * xt[k];
            }
            for k in 0..u {
                acc += ur[k] * hp[k];
            }
            *zr = acc;
        }
        let g = &mut gates[t * 4 * u..(t + 1) * 4 * u];
        for j in 0..u {
            g[j] = sigmoid(z[j]);
            g[u + j] = sigmoid(z[u + j]);
            g[2 * u + j] = z[2 * u + j].tanh();
            g[3 * u + j] = sigmoid(z[3 * u + j]);
        }
        for j in 0..u {
            let cn = g[u + j] * c[t * u + j] + g[j] * g[2 * u + j];
            c[(t + 1) * u + j] = cn;
            let tc = cn.tanh();
            tanh_c[t * u + j] = tc;
            h[(t + 1) * u + j] = g[3 * u + j] * tc;
        }
    }
    LstmTrace { x, h, c, gates, tanh_c }
}

/// Backpropagates `dh` (T × u, gradient w.r.t. each step's hidden output)
/// through one layer. Accumulates parameter gradients into `grad` and
/// returns the gradient w.r.t. the layer input when requested.
fn lstm_backward(
    p: &[f64],
    l: &LstmLayout,
    tr: &LstmTrace,
    dh: &[f64],
    grad: &mut [f64],
    want_dx: bool,
) -> Vec<f64> {
    let (n_in, u) = (l.input, l.units);
    let steps = dh.len() / u;
    let mut dx = if want_dx { vec![0.0; steps * n_in] } else { Vec::new() };
    let mut dh_next = vec![0.0; u];
    let mut dc_next = vec![0.0; u];
    let mut dz = vec![0.0; 4 * u];
    for t in (0..steps).rev() {
        let g = &tr.gates[t * 4 * u..(t + 1) * 4 * u];
        let tc = &tr.tanh_c[t * u..(t + 1) * u];
        let c_prev = &tr.c[t * u..(t + 1) * u];
        for j in 0..u {
            let (ig, fg, cg, og) = (g[j], g[u + j], g[2 * u + j], g[3 * u + j]);
            let dhj = dh[t * u + j] + dh_next[j];
            let d_o = dhj * tc[j];
            let dc = dc_next[j] + dhj * og * (1.0 - tc[j] * tc[j]);
            dz[j] = dc * cg * ig * (1.0 - ig);
            dz[u + j] = dc * c_prev[j] * fg * (1.0 - fg);
            dz[2 * u + j] = dc * ig * (1.0 - cg * cg);
            dz[3 * u + j] = d_o * og * (1.0 - og);
            dc_next[j] = dc * fg;
        }
        let xt = &tr.x[t * n_in..(t + 1) * n_in];
        let hp = &tr.h[t * u..(t + 1) * u];
        dh_next.iter_mut().for_each(|v| *v = 0.0);
        for (r, &dzr) in dz.iter().enumerate() {
            if dzr == 0.0 {
                continue;
            }
            let gw = l.w + r * n_in;
            for k in 0..n_in {
                grad[gw + k] += dzr * xt[k];
            }
            let gu = l.u + r * u;
            for k in 0..u {
                grad[gu + k] += dzr * hp[k];
                dh_next[k] += dzr * p[gu + k];
            }
            grad[l.b + r] += dzr;
            if want_dx {
                let dxt = &mut dx[t * n_in..(t + 1) * n_in];
                for k in 0..n_in {
                    dxt[k] += dzr * p[gw + k];
                }
            }
        }
    }
    dx
}

impl Network {
    pub fn zeros(config: NetConfig) -> Self {
        let n = Layout::new(&config).total;
        Network {
            config,
            params: vec![0.0; n],
        }
    }

    /// Uniform initialization in `±1/sqrt(fan_in)` per weight block.
    pub fn init(config: NetConfig, rng: &mut Rng) -> Self {
        let lay = Layout::new(&config);
        let mut params = vec![0.0; lay.total];
        let mut fill = |range: std::ops::Range<usize>, fan_in: usize| {
            let a = 1.0 / (fan_in.max(1) as f64).sqrt();
            for v in &mut params[range] {
                *v = rng.random_range(-a..a);
            }
        };
        for l in [lay.l1, lay.l2] {
            fill(l.w..l.u, l.input);
            fill(l.u..l.b, l.units);
            fill(l.b..l.end(), l.units);
        }
        fill(lay.dense_w..lay.dense_b, config.lstm_units[1]);
        fill(lay.dense_b..lay.total, config.lstm_units[1]);
        Network { config, params }
    }

    /// Sets the dense head's weights and biases to zero.
    pub fn zero_head(&mut self) {
        let start = Layout::new(&self.config).dense_w;
        self.params[start..].iter_mut().for_each(|v| *v = 0.0);
    }

    pub fn param_count(&self) -> usize {
        self.params.len()
    }

    fn check(&self, input: &[f64]) -> Result<usize> {
        let lay = Layout::new(&self.config);
        if self.params.len() != lay.total {
            return Err(Error::ShapeMismatch(format!(
                "network expects {} parameters, has {}",
                lay.total,
                self.params.len()
            )));
        }
        let d = self.config.input_dim;
        if d == 0 || input.is_empty() || input.len() % d != 0 {
            return Err(Error::ShapeMismatch(format!(
                "input of length {} is not a sequence of {d}-vectors",
                input.len()
            )));
        }
        Ok(input.len() / d)
    }

    /// Runs the network on a flattened `T × input_dim` sequence.
    pub fn forward(&self, input: &[f64]) -> Result<Trace> {
        let steps = self.check(input)?;
        let lay = Layout::new(&self.config);
        let p = &self.params;
        let l1 = lstm_forward(p, &lay.l1, input.to_vec(), steps);
        let h1: Vec<f64> = l1.h[lay.l1.units..].to_vec();
        let l2 = lstm_forward(p, &lay.l2, h1, steps);
        let u2 = lay.l2.units;
        let out_dim = self.config.output_dim;
        let dense = |h: &[f64], o: usize| {
            let w = &p[lay.dense_w + o * u2..lay.dense_w + (o + 1) * u2];
            p[lay.dense_b + o] + w.iter().zip(h).map(|(a, b)| a * b).sum::<f64>()
        };
        let output = match self.config.head {
            Head::Sequence => {
                let mut out = vec![0.0; steps * out_dim];
                for t in 0..steps {
                    let h = &l2.h[(t + 1) * u2..(t + 2) * u2];
                    for o in 0..out_dim {
                        out[t * out_dim + o] = dense(h, o);
                    }
                }
                out
            }
            Head::Logistic => {
                let h = &l2.h[steps * u2..(steps + 1) * u2];
                (0..out_dim).map(|o| dense(h, o)).collect()
            }
        };
        Ok(Trace { l1, l2, output })
    }

    /// Gradients given the upstream gradient w.r.t. the raw head output
    /// (the per-step outputs for a sequence head, the logit for a logistic
    /// head). Returns (parameter gradients, input gradients); input gradients
    /// are empty unless `want_dx`.
    pub fn backward_raw(&self, trace: &Trace, upstream: &[f64], want_dx: bool) -> (Vec<f64>, Vec<f64>) {
        let lay = Layout::new(&self.config);
        let p = &self.params;
        let mut grad = vec![0.0; lay.total];
        let u2 = lay.l2.units;
        let steps = trace.l1.x.len() / lay.l1.input;
        let out_dim = self.config.output_dim;
        let mut dh2 = vec![0.0; steps * u2];
        let mut head_step = |t: usize, dout: &[f64], grad: &mut [f64]| {
            let h = &trace.l2.h[(t + 1) * u2..(t + 2) * u2];
            for (o, &g) in dout.iter().enumerate() {
                grad[lay.dense_b + o] += g;
                let w = lay.dense_w + o * u2;
                for k in 0..u2 {
                    grad[w + k] += g * h[k];
                    dh2[t * u2 + k] += g * p[w + k];
                }
            }
        };
        match self.config.head {
            Head::Sequence => {
                for t in 0..steps {
                    head_step(t, &upstream[t * out_dim..(t + 1) * out_dim], &mut grad);
                }
            }
            Head::Logistic => head_step(steps - 1, &upstream[..out_dim], &mut grad),
        }
        let dh1 = lstm_backward(p, &lay.l2, &trace.l2, &dh2, &mut grad, true);
        let dx = lstm_backward(p, &lay.l1, &trace.l1, &dh1, &mut grad, want_dx);
        (grad, dx)
    }

    /// Gradients given the upstream gradient w.r.t. the reported output: the
    /// sequence for a sequence head, the probability for a logistic head.
    pub fn backward(&self, trace: &Trace, upstream: &[f64], want_dx: bool) -> (Vec<f64>, Vec<f64>) {
        match self.config.head {
            Head::Sequence => self.backward_raw(trace, upstream, want_dx),
            Head::Logistic => {
                let raw: Vec<f64> = trace
                    .output
                    .iter()
                    .zip(upstream)
                    .map(|(&z, &g)| {
                        let s = sigmoid(z);
                        g * s * (1.0 - s)
                    })
                    .collect();
                self.backward_raw(trace, &raw, want_dx)
            }
        }
    }

    /// Reported output: the sequence, or the probabilities for a logistic head.
    pub fn predict(&self, input: &[f64]) -> Result<Vec<f64>> {
        let tr = self.forward(input)?;
        Ok(match self.config.head {
            Head::Sequence => tr.output,
            Head::Logistic => tr.output.iter().map(|&z| sigmoid(z)).collect(),
        })
    }
}

pub(crate) fn logistic(z: f64) -> f64 {
    sigmoid(z)
}
