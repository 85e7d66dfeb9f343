//! Conversion of free-form SFT instances into multiple-choice probes.
//!
//! The original response is preserved as the correct option and distractors
//! come from a pluggable [`DistractorGenerator`]. Correct-option placement is
//! a seeded shuffle keyed by (instance id, seed), so conversion of distinct
//! instances is order-independent and repeatable.

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use crate::data::{McItem, SftInstance};
use crate::error::ConvertError;
use crate::rng::rng_for;

/// Produces plausible-but-wrong alternatives for one instance.
///
/// Implementations must return pairwise-distinct distractors that differ from
/// the instance response; `convert` re-validates and reports shortfalls.
pub trait DistractorGenerator: Send + Sync {
    fn generate(
        &self,
        instance: &SftInstance,
        count: usize,
        seed: u64,
    ) -> Result<Vec<String>, ConvertError>;
}

/// Built-in generator: samples responses (without replacement, seeded) from
/// *other* instances sharing the same `dataset_tag`, falling back to the
/// global pool when the tag pool runs dry.
pub struct PoolDistractorGenerator {
    pool: Vec<(String, String)>, // (dataset_tag, response)
}

impl PoolDistractorGenerator {
    pub fn new(dataset: &[SftInstance]) -> Self {
        Self {
            pool: dataset
                .iter()
                .map(|i| (i.dataset_tag.clone(), i.response.clone()))
                .collect(),
        }
    }
}

impl DistractorGenerator for PoolDistractorGenerator {
    fn generate(
        &self,
        instance: &SftInstance,
        count: usize,
        seed: u64,
    ) -> Result<Vec<String>, ConvertError> {
        let mut rng = rng_for(seed, "distractor-pool", &instance.id);
        let mut picked: Vec<String> = Vec::with_capacity(count);
        let mut take_from = |candidates: &mut Vec<&String>, picked: &mut Vec<String>| {
            candidates.shuffle(&mut rng);
            for cand in candidates.iter() {
                if picked.len() == count {
                    break;
                }
                if **cand != instance.response && !picked.contains(*cand) {
                    picked.push((*cand).clone());
                }
            }
        };
        let mut same_tag: Vec<&String> = self
            .pool
            .iter()
            .filter(|(tag, _)| *tag == instance.dataset_tag)
            .map(|(_, r)| r)
            .collect();
        take_from(&mut same_tag, &mut picked);
        if picked.len() < count {
            let mut global: Vec<&String> = self
                .pool
                .iter()
                .filter(|(tag, _)| *tag != instance.dataset_tag)
                .map(|(_, r)| r)
                .collect();
            take_from(&mut global, &mut picked);
        }
        // Shortfall is reported by returning fewer than requested.
        Ok(picked)
    }
}

/// Fixed-list generator, mainly for tests and hand-authored probe sets.
pub struct StaticDistractorGenerator(pub Vec<String>);

impl DistractorGenerator for StaticDistractorGenerator {
    fn generate(
        &self,
        _instance: &SftInstance,
        count: usize,
        _seed: u64,
    ) -> Result<Vec<String>, ConvertError> {
        Ok(self.0.iter().take(count).cloned().collect())
    }
}

/// Convert one instance into a multiple-choice item with `n_options` options.
///
/// The response lands at a seed-determined position; option order depends
/// only on (instance id, seed).
pub fn convert(
    instance: &SftInstance,
    gen: &dyn DistractorGenerator,
    n_options: usize,
    seed: u64,
) -> Result<McItem, ConvertError> {
    if n_options < 2 {
        return Err(ConvertError::TooFewOptions(n_options));
    }
    let requested = n_options - 1;
    let distractors = gen.generate(instance, requested, seed)?;

    let mut usable: Vec<String> = Vec::with_capacity(requested);
    for d in distractors {
        if d != instance.response && !usable.contains(&d) {
            usable.push(d);
        } else {
            return Err(ConvertError::Shortfall {
                instance_id: instance.id.clone(),
                requested,
                usable: usable.len(),
            });
        }
    }
    if usable.len() < requested {
        return Err(ConvertError::Shortfall {
            instance_id: instance.id.clone(),
            requested,
            usable: usable.len(),
        });
    }

    let mut options = Vec::with_capacity(n_options);
    options.push(instance.response.clone());
    options.extend(usable);
    let mut rng = rng_for(seed, "mc-placement", &instance.id);
    options.shuffle(&mut rng);
    let correct_index = options
        .iter()
        .position(|o| *o == instance.response)
        .expect("response is one of the options");

    Ok(McItem {
        instance_id: instance.id.clone(),
        stem: instance.prompt.clone(),
        options,
        correct_index,
    })
}

/// Per-dataset conversion outcome.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct ConversionReport {
    pub converted: usize,
    pub failures: Vec<ConversionFailure>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConversionFailure {
    pub instance_id: String,
    pub reason: String,
}

/// Convert a whole dataset. Per-instance failures are reported, never fatal;
/// the input dataset is untouched.
pub fn convert_dataset(
    instances: &[SftInstance],
    gen: &dyn DistractorGenerator,
    n_options: usize,
    seed: u64,
) -> Result<(Vec<McItem>, ConversionReport), ConvertError> {
    if n_options < 2 {
        return Err(ConvertError::TooFewOptions(n_options));
    }
    let mut items = Vec::with_capacity(instances.len());
    let mut report = ConversionReport::default();
    for instance in instances {
        match convert(instance, gen, n_options, seed) {
            Ok(item) => {
                items.push(item);
                report.converted += 1;
            }
            Err(e) => report.failures.push(ConversionFailure {
                instance_id: instance.id.clone(),
                reason: e.to_string(),
            }),
        }
    }
    Ok((items, report))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn instance(id: &str, prompt: &str, response: &str) -> SftInstance {
        SftInstance::new(id, prompt, response)
    }

    #[test]
    fn four_option_conversion_keeps_original_response() {
        let inst = instance(
            "dl1",
            "Explain what deep learning is.",
            "is a machine learning method based on neural networks.",
        );
        let gen = StaticDistractorGenerator(vec![
            "is a rule-based system.".into(),
            "is a reinforcement learning method.".into(),
            "is a traditional statistical method.".into(),
        ]);
        let item = convert(&inst, &gen, 4, 3).unwrap();
        assert_eq!(item.options.len(), 4);
        assert_eq!(item.options[item.correct_index], inst.response);
        assert!(item.validate().is_ok());
    }

    #[test]
    fn two_option_yes_no() {
        let inst = instance("yn", "Is water wet?", "yes");
        let gen = StaticDistractorGenerator(vec!["no".into()]);
        let item = convert(&inst, &gen, 2, 0).unwrap();
        let mut opts = item.options.clone();
        opts.sort();
        assert_eq!(opts, vec!["no".to_string(), "yes".to_string()]);
        assert_eq!(item.options[item.correct_index], "yes");
    }

    #[test]
    fn distractor_equal_to_response_is_an_error() {
        let inst = instance("dup", "q", "yes");
        let gen = StaticDistractorGenerator(vec!["yes".into()]);
        match convert(&inst, &gen, 2, 0).unwrap_err() {
            ConvertError::Shortfall { instance_id, .. } => assert_eq!(instance_id, "dup"),
            other => panic!("unexpected {other}"),
        }
    }

    #[test]
    fn shortfall_when_generator_returns_too_few() {
        let inst = instance("few", "q", "r");
        let gen = StaticDistractorGenerator(vec!["a".into()]);
        assert!(matches!(
            convert(&inst, &gen, 4, 0).unwrap_err(),
            ConvertError::Shortfall { requested: 3, usable: 1, .. }
        ));
    }

    #[test]
    fn n_options_below_two_rejected() {
        let inst = instance("x", "q", "r");
        let gen = StaticDistractorGenerator(vec![]);
        assert!(matches!(
            convert(&inst, &gen, 1, 0).unwrap_err(),
            ConvertError::TooFewOptions(1)
        ));
    }

    fn synthetic_dataset(n: usize) -> Vec<SftInstance> {
        (0..n)
            .map(|i| {
                let mut inst = instance(
                    &format!("q{i}"),
                    &format!("prompt {i}"),
                    &format!("response {i}"),
                );
                inst.dataset_tag = format!("tag{}", i % 2);
                inst.position_index = i;
                inst
            })
            .collect()
    }

    #[test]
    fn dataset_conversion_counts_and_failures() {
        let mut data = synthetic_dataset(10);
        let gen = StaticDistractorGenerator(vec!["d1".into(), "d2".into(), "d3".into()]);
        let (items, report) = convert_dataset(&data, &gen, 4, 1).unwrap();
        assert_eq!(items.len(), 10);
        assert_eq!(report.converted, 10);
        assert!(report.failures.is_empty());

        data[3].response = "d1".into(); // collides with a distractor
        let (items, report) = convert_dataset(&data, &gen, 4, 1).unwrap();
        assert_eq!(items.len(), 9);
        assert_eq!(report.failures.len(), 1);
        assert_eq!(report.failures[0].instance_id, "q3");
    }

    #[test]
    fn empty_input_is_empty_output() {
        let gen = StaticDistractorGenerator(vec![]);
        let (items, report) = convert_dataset(&[], &gen, 4, 1).unwrap();
        assert!(items.is_empty());
        assert_eq!(report.converted, 0);
    }

    #[test]
    fn pool_generator_prefers_same_tag() {
        let data = synthetic_dataset(20);
        let gen = PoolDistractorGenerator::new(&data);
        let ds = gen.generate(&data[0], 3, 5).unwrap();
        assert_eq!(ds.len(), 3);
        // tag0 holds the even indices, and has enough members to cover count=3
        for d in &ds {
            let idx: usize = d.trim_start_matches("response ").parse().unwrap();
            assert_eq!(idx % 2, 0, "distractor {d} not from tag0");
        }
    }

    #[test]
    fn pool_generator_falls_back_to_global() {
        let mut data = synthetic_dataset(6);
        data[0].dataset_tag = "lonely".into();
        let gen = PoolDistractorGenerator::new(&data);
        let ds = gen.generate(&data[0], 3, 5).unwrap();
        assert_eq!(ds.len(), 3);
    }

    #[test]
    fn conversion_is_idempotent_under_seed() {
        let data = synthetic_dataset(30);
        let gen = PoolDistractorGenerator::new(&data);
        let (a, _) = convert_dataset(&data, &gen, 4, 17).unwrap();
        let (b, _) = convert_dataset(&data, &gen, 4, 17).unwrap();
        assert_eq!(a, b);
        let (c, _) = convert_dataset(&data, &gen, 4, 18).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn correct_index_is_position_balanced() {
        // Multinomial 3-sigma bound on each slot count.
        let n = 4000;
        let k = 4;
        let data = synthetic_dataset(n);
        let gen = PoolDistractorGenerator::new(&data);
        let (items, report) = convert_dataset(&data, &gen, k, 99).unwrap();
        assert!(report.failures.is_empty());
        let mut counts = vec![0usize; k];
        for item in &items {
            counts[item.correct_index] += 1;
        }
        let p = 1.0 / k as f64;
        let sigma = (n as f64 * p * (1.0 - p)).sqrt();
        for (slot, &c) in counts.iter().enumerate() {
            let dev = (c as f64 - n as f64 * p).abs();
            assert!(
                dev <= 3.0 * sigma,
                "slot {slot} count {c} deviates {dev:.1} > 3σ {:.1}",
                3.0 * sigma
            );
        }
    }
}
