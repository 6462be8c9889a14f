//! Toy token and embedding layer.
//!
//! Vocabulary with sub-word tokenization, mean-pooled embeddings, cosine
//! retrieval over a chunk store, prompt composition with a running composite
//! embedding, semantic-charge sums, anchor drift, and a bridge from an
//! embedding vector to an initial wave packet.

mod fixture;
mod prompt;
mod rag;
mod retrieval;
mod space;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::state::{make_gaussian, SpatialGrid, WaveFunction};

pub use fixture::{generate_fixture, Fixture, FIXTURE_CHUNKS, FIXTURE_DIM};
pub use prompt::{compose_prompt, PromptPart, PromptState, Role};
pub use rag::{run_rag_demo, RagConfig, RagTranscript, TurnRecord};
pub use retrieval::{brute_force_top_k, retrieve_top_k, Chunk, ChunkRecord, ChunkStore};
pub use space::{coverage, embed, embed_text, tokenize, total_semantic_charge, TokenEntry, TokenSpace, UNKNOWN_TOKEN};

pub(crate) fn dot(u: &[f64], v: &[f64]) -> f64 {
    u.iter().zip(v).map(|(a, b)| a * b).sum()
}

pub(crate) fn l2(v: &[f64]) -> f64 {
    dot(v, v).sqrt()
}

/// `v / ‖v‖`.
pub fn normalized(v: &[f64]) -> Result<Vec<f64>> {
    let n = l2(v);
    if !(n > 0.0) || !n.is_finite() {
        return Err(Error::DegenerateVector(format!("cannot normalize a vector of norm {n}")));
    }
    Ok(v.iter().map(|x| x / n).collect())
}

pub fn cosine_similarity(u: &[f64], v: &[f64]) -> Result<f64> {
    if u.len() != v.len() {
        return Err(Error::invalid(format!("dimension mismatch: {} vs {}", u.len(), v.len())));
    }
    let (nu, nv) = (l2(u), l2(v));
    if !(nu > 0.0) || !(nv > 0.0) {
        return Err(Error::DegenerateVector("cosine similarity of a zero vector".into()));
    }
    Ok((dot(u, v) / (nu * nv)).clamp(-1.0, 1.0))
}

/// Phase applied by [`complexify`]: one angle for every coordinate, or one per coordinate.
#[derive(Debug, Clone, PartialEq)]
pub enum Phase {
    Scalar(f64),
    Vector(Vec<f64>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComplexEmbedding(pub Vec<Complex64>);

impl ComplexEmbedding {
    pub fn dim(&self) -> usize {
        self.0.len()
    }

    /// Coordinate moduli, the projection back to the real embedding space.
    pub fn projection(&self) -> Vec<f64> {
        self.0.iter().map(|z| z.norm()).collect()
    }
}

/// `vₖ·e^{iφₖ}`.
pub fn complexify(v: &[f64], phase: &Phase) -> Result<ComplexEmbedding> {
    let angle = |k: usize| match phase {
        Phase::Scalar(p) => *p,
        Phase::Vector(p) => p[k],
    };
    if let Phase::Vector(p) = phase {
        if p.len() != v.len() {
            return Err(Error::invalid(format!("phase has {} entries, embedding has {}", p.len(), v.len())));
        }
    }
    let out: Vec<Complex64> = v
        .iter()
        .enumerate()
        .map(|(k, &x)| {
            let phi = angle(k);
            if phi == 0.0 {
                Complex64::new(x, 0.0)
            } else {
                let (s, c) = phi.sin_cos();
                Complex64::new(x * c, x * s)
            }
        })
        .collect();
    if out.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::invalid("complexified embedding has non-finite entries"));
    }
    Ok(ComplexEmbedding(out))
}

/// `1 − cos(hₜ, anchor)` for each history vector.
pub fn anchor_drift(history: &[Vec<f64>], anchor: &[f64]) -> Result<Vec<f64>> {
    history
        .iter()
        .map(|h| {
            if h.len() != anchor.len() {
                return Err(Error::invalid(format!("dimension mismatch: {} vs anchor {}", h.len(), anchor.len())));
            }
            Ok(1.0 - cosine_similarity(h, anchor)?)
        })
        .collect()
}

/// Gaussian packet centred at the scalar projection `v·axis`, clamped to the
/// inner 90% of the grid.
pub fn embedding_to_wavepacket(v: &[f64], axis: &[f64], grid: SpatialGrid, width: f64) -> Result<WaveFunction> {
    if v.len() != axis.len() {
        return Err(Error::invalid(format!("dimension mismatch: {} vs axis {}", v.len(), axis.len())));
    }
    let norm = l2(axis);
    if !((norm - 1.0).abs() <= 1e-9) {
        return Err(Error::invalid(format!("axis must be unit-norm, got norm {norm}")));
    }
    if !(width > 0.0) || !width.is_finite() {
        return Err(Error::invalid(format!("packet width must be positive, got {width}")));
    }
    let margin = 0.05 * grid.length();
    let center = dot(v, axis).clamp(grid.x_min() + margin, grid.x_max() - margin);
    make_gaussian(grid, center, width, 0.0)
}
