//! Swipe-gesture bot detection.
//!
//! Human swipes are described by six touch features (duration, distance,
//! displacement, angle, mean speed, move efficiency) and twelve
//! accelerometer statistics. Fake swipes come from two generators: a
//! handcrafted one sampling fitted Gaussian priors and an LSTM GAN. RBF SVM
//! detectors (one-class on humans only, or binary human vs bot) are trained
//! by an in-crate SMO solver and evaluated by equal error rate.
//!
//! Start with [`fixture::fixture_corpus`] for data, [`synth`] and [`gan`]
//! for fakes, [`eval`] for the protocol and [`bundle::verify`] for scoring a
//! single gesture.

pub mod bundle;
pub mod capture;
pub mod cli;
pub mod envelope;
pub mod error;
pub mod eval;
pub mod features;
pub mod fixture;
pub mod gan;
pub mod model;
pub mod service;
pub mod session;
pub mod stats;
pub mod svm;
pub mod synth;

pub use error::{Error, Result};
