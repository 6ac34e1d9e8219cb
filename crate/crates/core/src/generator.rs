//! Seeded random instance generator.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::model::{Instance, Item};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CapacityRule {
    /// `⌈Σ w_i / 2⌉`, raised to the largest weight if needed.
    HalfTotalWeight,
    Fixed(u64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GeneratorConfig {
    pub n: usize,
    pub seed: u64,
    /// Weights are uniform in `1..=w_max`.
    pub w_max: u64,
    /// Intercepts and slopes are uniform in `-c_max..=c_max`.
    pub c_max: i64,
    pub capacity: CapacityRule,
}

impl GeneratorConfig {
    pub fn new(n: usize, seed: u64) -> Self {
        Self {
            n,
            seed,
            w_max: 10,
            c_max: 10,
            capacity: CapacityRule::HalfTotalWeight,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeneratorError {
    #[error("need at least one item")]
    NoItems,
    #[error("w_max must be at least 1")]
    ZeroWeightRange,
    #[error("c_max must be non-negative, got {0}")]
    NegativeCoefficientRange(i64),
    #[error("fixed capacity {capacity} is below w_max {w_max}")]
    CapacityBelowWeights { capacity: u64, w_max: u64 },
}

/// Same config, same instance.
pub fn generate(config: &GeneratorConfig) -> Result<Instance, GeneratorError> {
    if config.n == 0 {
        return Err(GeneratorError::NoItems);
    }
    if config.w_max == 0 {
        return Err(GeneratorError::ZeroWeightRange);
    }
    if config.c_max < 0 {
        return Err(GeneratorError::NegativeCoefficientRange(config.c_max));
    }
    if let CapacityRule::Fixed(capacity) = config.capacity {
        if capacity < config.w_max {
            return Err(GeneratorError::CapacityBelowWeights {
                capacity,
                w_max: config.w_max,
            });
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let items: Vec<Item> = (0..config.n)
        .map(|_| {
            let weight = rng.gen_range(1..=config.w_max);
            let intercept = rng.gen_range(-config.c_max..=config.c_max);
            let slope = rng.gen_range(-config.c_max..=config.c_max);
            Item::new(weight, intercept, slope)
        })
        .collect();
    let capacity = match config.capacity {
        CapacityRule::Fixed(capacity) => capacity,
        CapacityRule::HalfTotalWeight => {
            let total: u64 = items.iter().map(|i| i.weight).sum();
            let heaviest = items.iter().map(|i| i.weight).max().unwrap_or(1);
            total.div_ceil(2).max(heaviest)
        }
    };
    Ok(Instance::new(capacity, items).expect("generated weights fit the capacity"))
}
