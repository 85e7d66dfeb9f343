//! Error types shared across the toolkit.

use thiserror::Error;

/// Errors raised while reading or validating datasets and config files.
#[derive(Debug, Error)]
pub enum DataError {
    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("parse error at {path}:{line}: {message}")]
    Parse {
        path: String,
        line: usize,
        message: String,
    },
    #[error("duplicate id {id:?} at lines {first_line} and {second_line}")]
    DuplicateId {
        id: String,
        first_line: usize,
        second_line: usize,
    },
    #[error("empty {field} at {path}:{line}")]
    EmptyField {
        path: String,
        line: usize,
        field: &'static str,
    },
}

/// Errors raised during multiple-choice conversion.
#[derive(Debug, Error)]
pub enum ConvertError {
    #[error("n_options must be at least 2, got {0}")]
    TooFewOptions(usize),
    #[error("distractor shortfall for instance {instance_id}: requested {requested}, usable {usable}")]
    Shortfall {
        instance_id: String,
        requested: usize,
        usable: usize,
    },
    #[error("generator failed for instance {instance_id}: {message}")]
    Generator { instance_id: String, message: String },
}

/// Errors raised by model endpoints and probing.
#[derive(Debug, Error)]
pub enum InferenceError {
    #[error("endpoint {tag} returned an invalid distribution: {message}")]
    InvalidDistribution { tag: String, message: String },
    #[error("endpoint request failed: {0}")]
    Transport(String),
    #[error("endpoint response lacks probability information: {0}")]
    MissingProbabilities(String),
    #[error("probe failed for instance {instance_id} after {attempts} attempts: {message}")]
    ProbeFailed {
        instance_id: String,
        attempts: usize,
        message: String,
    },
    #[error("{failed} of {total} probes failed, above tolerance {tolerance}")]
    TooManyFailures {
        failed: usize,
        total: usize,
        tolerance: f64,
    },
    #[error("unknown instance {0} for simulated endpoint with no default profile")]
    UnknownInstance(String),
}

/// Errors raised by detection, probing analysis, and attribution.
#[derive(Debug, Error)]
pub enum AnalysisError {
    #[error("record/item alignment error: {0}")]
    Alignment(String),
    #[error("distribution support mismatch: {left} vs {right} entries")]
    SupportMismatch { left: usize, right: usize },
    #[error("distribution not normalized: sums to {0}")]
    NotNormalized(f64),
    #[error("distribution has negative entry {0}")]
    NegativeEntry(f64),
    #[error("no probe summary for candidate {0}")]
    MissingSummary(String),
    #[error("cannot report a taxonomy over an empty label set")]
    EmptyLabels,
    #[error("judge unavailable: {0}")]
    JudgeUnavailable(String),
}

/// Errors raised by mitigation planners.
#[derive(Debug, Error)]
pub enum PlanError {
    #[error("bucket_count must be >= 2 when a conflict group has >= 2 members, got {0}")]
    InvalidBucketCount(usize),
    #[error("step {step} is not a multiple of the resample interval {interval}")]
    StepOffInterval { step: usize, interval: usize },
    #[error("evaluator failed at epoch {epoch}: {message}")]
    EvaluatorFailed { epoch: usize, message: String },
    #[error("plan references unknown instance {0}")]
    UnknownId(String),
}

/// Errors raised by the sandbox generator and toy trainer.
#[derive(Debug, Error)]
pub enum SimError {
    #[error("cause mix fractions sum to {0}, which exceeds 1")]
    InfeasibleMix(f64),
    #[error("instance {0} has cause IntraSftConflict but no conflict partner")]
    MissingPartner(String),
    #[error("probability out of [0,1] for instance {id}: {value}")]
    InvalidProbability { id: String, value: f64 },
    #[error("n_instances must be positive")]
    EmptyCorpus,
    #[error("training order references unknown instance {0}")]
    UnknownId(String),
}
