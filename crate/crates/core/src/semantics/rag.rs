//! Multi-turn retrieval-augmented conversation around a fixed anchor.
//!
//! Turn 1 prompts with `context ⊕ question`; its embedding is the anchor.
//! Each turn retrieves the top `k` chunks for the current prompt, composes
//! `chunks ⊕ prompt`, and synthesizes the response embedding as that
//! composition plus seeded Gaussian noise. The next prompt is
//! `prompt ⊕ response ⊕ question`. A random walk of the same step size,
//! started at the anchor, serves as the drift control.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use super::prompt::{compose_prompt, PromptPart, PromptState, Role};
use super::retrieval::{retrieve_top_k, ChunkStore};
use super::space::{total_semantic_charge, TokenSpace};
use super::{anchor_drift, normalized};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RagConfig {
    pub context: String,
    pub question: String,
    pub k: usize,
    pub turns: usize,
    pub seed: u64,
    /// Expected norm of the noise added to each response.
    pub response_noise: f64,
    /// Expected norm of each control random-walk step.
    pub control_step: f64,
}

impl RagConfig {
    pub fn new(context: impl Into<String>, question: impl Into<String>, seed: u64) -> Self {
        RagConfig {
            context: context.into(),
            question: question.into(),
            k: 5,
            turns: 10,
            seed,
            response_noise: 0.3,
            control_step: 0.3,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Retrieved {
    pub id: u64,
    pub similarity: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TurnRecord {
    pub turn: usize,
    pub query: Vec<f64>,
    pub retrieved: Vec<Retrieved>,
    pub prompt_tokens: usize,
    pub prompt_charge: f64,
    pub enhanced_embedding: Vec<f64>,
    pub response: Vec<f64>,
    pub drift: f64,
    pub control: Vec<f64>,
    pub control_drift: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RagTranscript {
    pub config: RagConfig,
    pub anchor: Vec<f64>,
    pub anchor_tokens: Vec<String>,
    pub turns: Vec<TurnRecord>,
    pub drift: Vec<f64>,
    pub control_drift: Vec<f64>,
    pub max_drift: f64,
    pub max_control_drift: f64,
    /// `max_drift < max_control_drift`.
    pub anchor_held: bool,
}

fn noise(rng: &mut ChaCha8Rng, dim: usize, scale: f64) -> Vec<f64> {
    let s = scale / (dim as f64).sqrt();
    (0..dim).map(|_| s * rng.sample::<f64, _>(StandardNormal)).collect()
}

fn perturbed(v: &[f64], rng: &mut ChaCha8Rng, scale: f64) -> Result<Vec<f64>> {
    let xi = noise(rng, v.len(), scale);
    normalized(&v.iter().zip(&xi).map(|(a, b)| a + b).collect::<Vec<_>>())
}

fn max_of(v: &[f64]) -> f64 {
    v.iter().copied().fold(f64::NEG_INFINITY, f64::max)
}

pub fn run_rag_demo(space: &TokenSpace, store: &ChunkStore, cfg: &RagConfig) -> Result<RagTranscript> {
    if cfg.turns == 0 {
        return Err(Error::invalid("turns must be at least 1"));
    }
    if cfg.k == 0 {
        return Err(Error::invalid("k must be at least 1"));
    }
    for (name, v) in [("response_noise", cfg.response_noise), ("control_step", cfg.control_step)] {
        if !(v >= 0.0) || !v.is_finite() {
            return Err(Error::invalid(format!("{name} must be finite and non-negative, got {v}")));
        }
    }
    if store.dim() != space.dim() {
        return Err(Error::invalid(format!("store dimension {} differs from space {}", store.dim(), space.dim())));
    }
    let base = compose_prompt(&[(Role::Context, &cfg.context), (Role::Question, &cfg.question)], space)?;
    let anchor = base.embedding().to_vec();
    let question = PromptPart::from_text(Role::Question, &cfg.question, space)?;

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut control_rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    control_rng.set_stream(1);

    let mut prompt = base.clone();
    let mut walker = anchor.clone();
    let mut turns = Vec::with_capacity(cfg.turns);
    for turn in 1..=cfg.turns {
        let query = prompt.embedding().to_vec();
        let hits = retrieve_top_k(&query, store, cfg.k)?;
        let mut parts: Vec<PromptPart> = hits
            .iter()
            .map(|(id, _)| {
                let c = store.get(*id).expect("retrieved id is in the store");
                PromptPart { role: Role::Chunk, tokens: c.tokens.clone(), embedding: c.embedding.clone() }
            })
            .collect();
        parts.extend(prompt.parts().iter().cloned());
        let enhanced = PromptState::new(parts)?;
        let response = perturbed(enhanced.embedding(), &mut rng, cfg.response_noise)?;
        walker = perturbed(&walker, &mut control_rng, cfg.control_step)?;

        let drift = anchor_drift(std::slice::from_ref(&response), &anchor)?[0];
        let control_drift = anchor_drift(std::slice::from_ref(&walker), &anchor)?[0];
        let tokens = enhanced.tokens();
        turns.push(TurnRecord {
            turn,
            query,
            retrieved: hits.iter().map(|&(id, similarity)| Retrieved { id, similarity }).collect(),
            prompt_tokens: tokens.len(),
            prompt_charge: total_semantic_charge(&tokens, space),
            enhanced_embedding: enhanced.embedding().to_vec(),
            response: response.clone(),
            drift,
            control: walker.clone(),
            control_drift,
        });

        prompt.push(PromptPart::from_embedding(Role::Response, &response)?)?;
        prompt.push(question.clone())?;
    }

    let drift: Vec<f64> = turns.iter().map(|t| t.drift).collect();
    let control_drift: Vec<f64> = turns.iter().map(|t| t.control_drift).collect();
    let (max_drift, max_control_drift) = (max_of(&drift), max_of(&control_drift));
    Ok(RagTranscript {
        config: cfg.clone(),
        anchor,
        anchor_tokens: base.tokens(),
        turns,
        drift,
        control_drift,
        max_drift,
        max_control_drift,
        anchor_held: max_drift < max_control_drift,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semantics::generate_fixture;

    fn setup() -> (TokenSpace, ChunkStore) {
        let f = generate_fixture(42).unwrap();
        let store = ChunkStore::from_records(&f.chunks, &f.space).unwrap();
        (f.space, store)
    }

    #[test]
    fn one_turn() {
        let (space, store) = setup();
        let mut cfg = RagConfig::new("the river bank after heavy rain", "when will the water level fall", 42);
        cfg.turns = 1;
        let t = run_rag_demo(&space, &store, &cfg).unwrap();
        assert_eq!(t.turns.len(), 1);
        assert_eq!(t.drift.len(), 1);
        assert_eq!(t.turns[0].retrieved.len(), 5);
        assert_eq!(t.turns[0].query, t.anchor);
    }

    #[test]
    fn zero_noise_tracks_composition() {
        let (space, store) = setup();
        let mut cfg = RagConfig::new("the river bank", "when will it rain", 7);
        cfg.response_noise = 0.0;
        cfg.control_step = 0.0;
        let t = run_rag_demo(&space, &store, &cfg).unwrap();
        for rec in &t.turns {
            let gap = rec.response.iter().zip(&rec.enhanced_embedding).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
            assert!(gap < 1e-15);
            assert!(rec.control_drift.abs() < 1e-15);
        }
    }

    #[test]
    fn bad_config() {
        let (space, store) = setup();
        let mut cfg = RagConfig::new("river", "rain", 1);
        cfg.turns = 0;
        assert!(run_rag_demo(&space, &store, &cfg).is_err());
        let cfg = RagConfig::new("zzz", "qqq", 1);
        assert!(matches!(run_rag_demo(&space, &store, &cfg), Err(Error::DegenerateEmbedding(_))));
    }
}
