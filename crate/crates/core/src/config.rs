//! Run configuration shared across the pipeline.
//!
//! Field names are mirrored verbatim in the JSON config file and in CLI flags
//! (kebab-case). All downstream randomness flows from `seed`.

use serde::{Deserialize, Serialize};

/// How a resample threshold is interpreted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DropMode {
    /// (previous - current) / previous compared against the threshold.
    Relative,
    /// previous - current compared against the threshold.
    Absolute,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RunConfig {
    /// N of pass@N: independent inference runs per instance.
    pub n_runs: usize,
    /// Width of the Best-of-N selection window.
    pub bon_width: usize,
    /// T: an instance is unlearned when its pass@N rate falls strictly below this.
    pub pass_threshold: f64,
    /// K: size cap of the severity-ranked candidate set.
    pub top_k: usize,
    /// Knowledge exists when base accuracy strictly exceeds this.
    pub existence_acc_threshold: f64,
    /// Jensen-Shannon divergence above which base/SFT distributions conflict.
    pub js_conflict_threshold: f64,
    /// T_conf: confidence above which a wrong base answer is a high-confidence error.
    pub confidence_threshold: f64,
    /// X: similarity above which an instance pair is potentially conflicting.
    pub similarity_threshold: f64,
    /// B: number of training buckets for conflict separation.
    pub bucket_count: usize,
    /// K_steps: training steps between resample evaluations.
    pub resample_interval: usize,
    /// Accuracy drop that triggers a resample event (strict >).
    pub drop_threshold: f64,
    /// Interpretation of `drop_threshold`.
    pub drop_mode: DropMode,
    /// δ: loss tolerance of the epoch stopping condition.
    pub epoch_delta: f64,
    /// Cap on progressive epoch increments.
    pub epoch_cap: usize,
    /// General-corpus share of the CPT mix.
    pub mix_general: f64,
    /// Augmented-corpus share of the CPT mix.
    pub mix_aug: f64,
    /// Target documents retrieved per unresolved entity.
    pub docs_per_entity: usize,
    /// Upweight factor applied by a resample event, decaying back to 1.0
    /// over one interval.
    pub upweight_factor: f64,
    /// Steps between conflict re-bucketing passes.
    pub rebucket_interval: usize,
    /// Sampling temperature for repeated inference runs.
    pub temperature: f64,
    /// Fraction of probe failures tolerated before the run aborts.
    pub failure_tolerance: f64,
    /// Maximum concurrent in-flight endpoint requests.
    pub max_in_flight: usize,
    /// Options per multiple-choice item produced by conversion.
    pub n_options: usize,
    /// Root seed for every random decision downstream.
    pub seed: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            n_runs: 5,
            bon_width: 5,
            pass_threshold: 0.2,
            top_k: 1000,
            existence_acc_threshold: 0.8,
            js_conflict_threshold: 0.3,
            confidence_threshold: 0.8,
            similarity_threshold: 0.85,
            bucket_count: 2,
            resample_interval: 500,
            drop_threshold: 0.05,
            drop_mode: DropMode::Relative,
            epoch_delta: 0.01,
            epoch_cap: 10,
            mix_general: 0.8,
            mix_aug: 0.2,
            docs_per_entity: 20,
            upweight_factor: 2.0,
            rebucket_interval: 500,
            temperature: 0.7,
            failure_tolerance: 0.05,
            max_in_flight: 8,
            n_options: 4,
            seed: 0,
        }
    }
}

/// A named constraint violation found by [`validate_config`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfigViolation {
    pub field: String,
    pub constraint: String,
}

impl std::fmt::Display for ConfigViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: {}", self.field, self.constraint)
    }
}

/// Check every config invariant. An empty vector means the config is valid.
pub fn validate_config(cfg: &RunConfig) -> Vec<ConfigViolation> {
    let mut violations = Vec::new();
    let mut fraction = |field: &str, value: f64| {
        if !(0.0..=1.0).contains(&value) || value.is_nan() {
            violations.push(ConfigViolation {
                field: field.to_string(),
                constraint: "fraction out of [0,1]".to_string(),
            });
        }
    };
    fraction("pass_threshold", cfg.pass_threshold);
    fraction("existence_acc_threshold", cfg.existence_acc_threshold);
    fraction("confidence_threshold", cfg.confidence_threshold);
    fraction("similarity_threshold", cfg.similarity_threshold);
    fraction("mix_general", cfg.mix_general);
    fraction("mix_aug", cfg.mix_aug);
    fraction("failure_tolerance", cfg.failure_tolerance);
    if cfg.drop_mode == DropMode::Relative {
        fraction("drop_threshold", cfg.drop_threshold);
    }

    if (cfg.mix_general + cfg.mix_aug - 1.0).abs() > 1e-9 {
        violations.push(ConfigViolation {
            field: "mix_general/mix_aug".to_string(),
            constraint: "mix fractions must sum to 1".to_string(),
        });
    }
    if cfg.js_conflict_threshold < 0.0 || cfg.js_conflict_threshold.is_nan() {
        violations.push(ConfigViolation {
            field: "js_conflict_threshold".to_string(),
            constraint: "must be non-negative".to_string(),
        });
    }
    if cfg.epoch_delta < 0.0 || cfg.epoch_delta.is_nan() {
        violations.push(ConfigViolation {
            field: "epoch_delta".to_string(),
            constraint: "must be non-negative".to_string(),
        });
    }
    let mut positive = |field: &str, value: usize| {
        if value == 0 {
            violations.push(ConfigViolation {
                field: field.to_string(),
                constraint: "must be positive".to_string(),
            });
        }
    };
    positive("n_runs", cfg.n_runs);
    positive("bon_width", cfg.bon_width);
    positive("top_k", cfg.top_k);
    positive("bucket_count", cfg.bucket_count);
    positive("resample_interval", cfg.resample_interval);
    positive("rebucket_interval", cfg.rebucket_interval);
    positive("max_in_flight", cfg.max_in_flight);
    if cfg.n_options < 2 {
        violations.push(ConfigViolation {
            field: "n_options".to_string(),
            constraint: "must be at least 2".to_string(),
        });
    }
    if cfg.temperature < 0.0 || cfg.temperature.is_nan() {
        violations.push(ConfigViolation {
            field: "temperature".to_string(),
            constraint: "must be non-negative".to_string(),
        });
    }
    violations
}

/// Hex SHA-256 of the canonical JSON serialization. Covers every field, so
/// any config change yields a different hash.
pub fn config_hash(cfg: &RunConfig) -> String {
    use sha2::{Digest, Sha256};
    let bytes = serde_json::to_vec(cfg).expect("config serializes");
    let digest = Sha256::digest(&bytes);
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_valid() {
        assert!(validate_config(&RunConfig::default()).is_empty());
    }

    #[test]
    fn mix_must_sum_to_one() {
        let cfg = RunConfig {
            mix_general: 0.7,
            mix_aug: 0.2,
            ..RunConfig::default()
        };
        let violations = validate_config(&cfg);
        assert!(violations
            .iter()
            .any(|v| v.constraint == "mix fractions must sum to 1"));
    }

    #[test]
    fn out_of_range_fraction_is_named() {
        let cfg = RunConfig {
            pass_threshold: 1.5,
            ..RunConfig::default()
        };
        let violations = validate_config(&cfg);
        assert_eq!(violations.len(), 1);
        assert_eq!(violations[0].field, "pass_threshold");
        assert_eq!(violations[0].constraint, "fraction out of [0,1]");
    }

    #[test]
    fn zero_runs_rejected() {
        let cfg = RunConfig {
            n_runs: 0,
            ..RunConfig::default()
        };
        assert!(validate_config(&cfg)
            .iter()
            .any(|v| v.field == "n_runs"));
    }

    #[test]
    fn hash_covers_every_field() {
        let base = config_hash(&RunConfig::default());
        let as_value = serde_json::to_value(RunConfig::default()).unwrap();
        let serde_json::Value::Object(fields) = as_value.clone() else {
            panic!("config is an object");
        };
        for key in fields.keys() {
            let mut perturbed = as_value.clone();
            let entry = perturbed.get_mut(key).unwrap();
            *entry = match entry {
                serde_json::Value::Number(n) if n.is_u64() => {
                    serde_json::json!(n.as_u64().unwrap() + 1)
                }
                serde_json::Value::Number(n) => serde_json::json!(n.as_f64().unwrap() + 0.123),
                serde_json::Value::String(_) => serde_json::json!("absolute"),
                other => panic!("unexpected field type {other:?}"),
            };
            let cfg: RunConfig = serde_json::from_value(perturbed).unwrap();
            assert_ne!(config_hash(&cfg), base, "field {key} not covered by hash");
        }
    }

    #[test]
    fn config_file_round_trip() {
        let cfg = RunConfig {
            n_runs: 10,
            seed: 99,
            ..RunConfig::default()
        };
        let text = serde_json::to_string_pretty(&cfg).unwrap();
        let back: RunConfig = serde_json::from_str(&text).unwrap();
        assert_eq!(back, cfg);
    }

    #[test]
    fn partial_config_uses_defaults() {
        let cfg: RunConfig = serde_json::from_str(r#"{"seed": 7, "n_runs": 3}"#).unwrap();
        assert_eq!(cfg.seed, 7);
        assert_eq!(cfg.n_runs, 3);
        assert_eq!(cfg.pass_threshold, 0.2);
    }
}
