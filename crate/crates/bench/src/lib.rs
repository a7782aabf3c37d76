//! Shared fixtures for the benchmarks.

use ibis_core::ibl::Memory;
use ibis_core::synth::{generate_cohort, generate_embeddings, CohortConfig};
use ibis_core::{Category, Dataset, Embedding, GroundTruth};

/// Synthetic embeddings of dimension `dim`, `per_category` of each category.
pub fn embeddings(dim: usize, per_category: usize) -> Vec<Embedding> {
    let config = CohortConfig {
        dimension: dim,
        n_emails_per_category: per_category,
        ..CohortConfig::default()
    };
    generate_embeddings(&config).1
}

/// A memory holding one instance per embedding, each seen at a few steps.
pub fn populated_memory(embs: &[Embedding]) -> Memory {
    let mut m = Memory::new();
    for (i, e) in embs.iter().enumerate() {
        let option = if i % 2 == 0 { Category::Phishing } else { Category::Ham };
        m.store(&e.email_id, &e.values, option, (i % 3) as f64 / 2.0);
        m.advance();
    }
    m
}

/// Unit-square points on a jittered grid.
pub fn grid_points(n: usize) -> Vec<[f64; 2]> {
    let side = (n as f64).sqrt().ceil() as usize;
    (0..n)
        .map(|i| {
            let (r, c) = (i / side, i % side);
            let jitter = ((i * 7919) % 97) as f64 / 970.0;
            [
                (c as f64 + jitter) / side as f64,
                (r as f64 + 0.5 * jitter) / side as f64,
            ]
        })
        .collect()
}

/// The bundled cohort with `n` participants.
pub fn cohort(n: usize) -> (Dataset, GroundTruth) {
    generate_cohort(&CohortConfig {
        n_participants: n,
        ..CohortConfig::default()
    })
    .expect("default cohort is valid")
}
