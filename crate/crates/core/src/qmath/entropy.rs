use super::state::{ProbabilityDistribution, QuantumState};

/// Base-2 entropy of raw weights with `0·log 0 = 0`. Nonpositive entries are
/// treated as zero; no normalization check.
pub fn entropy_bits(probs: &[f64]) -> f64 {
    probs
        .iter()
        .filter(|&&p| p > 0.0)
        .map(|&p| -p * p.log2())
        .sum()
}

pub fn shannon_entropy(p: &ProbabilityDistribution) -> f64 {
    entropy_bits(p.probs())
}

/// Entropy of the squared-magnitude distribution of a unit vector.
pub fn h2(u: &QuantumState) -> f64 {
    entropy_bits(&u.probabilities())
}
