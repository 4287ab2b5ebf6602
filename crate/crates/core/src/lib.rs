//! Thermal-only crowd counting on synthetic scenes.
//!
//! The crate is organized around the stages of the pipeline:
//!
//! - [`metrics`] — density-map rasterization from point annotations and the
//!   GAME / RMSE / MAE evaluation suite.
//! - [`scenes`] — deterministic synthetic thermal/depth scene generator and
//!   the on-disk dataset format.
//! - [`schedule`] — variance-preserving noise schedules and the step-count
//!   error surrogate.
//! - [`extractor`] — the toy depth-conditioned consistency denoiser: fixed
//!   latent, single- and multi-step feature extraction, pretraining.
//! - [`counting`] — thermal encoder, cross-attention feature enhancement and
//!   the density regression head.
//! - [`objectives`] — prototype alignment loss, regression loss and the
//!   combined training objective.
//! - [`pipeline`] — configuration, training loops, evaluation, checkpoints,
//!   ablation suites and report emission.
//!
//! Everything is `f64` and deterministic: all randomness flows through
//! explicitly seeded ChaCha8 streams, and data-parallel sections (enabled by
//! the default `parallel` feature) collect results in index order so that
//! parallel and sequential builds produce bit-identical output.

pub mod counting;
pub mod error;
pub mod extractor;
pub mod grid;
pub mod metrics;
pub mod nn;
pub mod objectives;
pub(crate) mod par;
pub mod pipeline;
pub mod rng;
pub mod scenes;
pub mod schedule;

pub use error::{Error, Result};
