//! Toolkit for diagnosing supervised fine-tuning instances a model failed to
//! internalize, attributing each failure to a cause, and emitting executable
//! mitigation plans.
//!
//! The pipeline is: convert free-form SFT pairs to multiple-choice probes
//! ([`convert`]), query base and fine-tuned endpoints ([`inference`]), detect
//! unlearned instances ([`detect`]), gather knowledge-state and conflict
//! signals ([`probe`]), assign one of five causes per instance
//! ([`attribute`]), and plan mitigations ([`mitigate`]). The [`sandbox`]
//! module generates synthetic corpora with injected failure modes and a toy
//! trainer so the whole pipeline can be exercised offline against known
//! ground truth.

pub mod attribute;
pub mod config;
pub mod convert;
pub mod data;
pub mod detect;
pub mod error;
pub mod inference;
pub mod mitigate;
pub mod pipeline;
pub mod probe;
pub mod report;
pub mod rng;
pub mod sandbox;

pub use config::{validate_config, RunConfig};
pub use data::{load_dataset, save_dataset, McItem, SftInstance};
