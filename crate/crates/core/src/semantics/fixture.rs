use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::normalized;
use super::retrieval::ChunkRecord;
use super::space::{TokenEntry, TokenSpace};
use crate::error::Result;

pub const FIXTURE_DIM: usize = 16;
pub const FIXTURE_CHUNKS: usize = 64;

const TOPICS: [(&str, &[&str]); 4] = [
    ("water", &["river", "water", "flood", "rain", "stream", "shore", "level", "current", "boat", "fish", "fall"]),
    ("money", &["money", "loan", "interest", "account", "deposit", "credit", "rate", "market", "cash", "fund", "flow"]),
    ("weather", &["storm", "cloud", "wind", "sun", "shine", "cold", "warm", "forecast", "season", "snow", "sky"]),
    ("sport", &["team", "game", "score", "match", "player", "goal", "coach", "win", "ball", "field"]),
];

/// Sits between the water and money clusters.
const BRIDGE: &str = "bank";

const SENTIMENT: [(&str, f64); 8] = [
    ("happy", 1.0),
    ("glad", 1.0),
    ("good", 1.0),
    ("calm", 1.0),
    ("sad", -1.0),
    ("bad", -1.0),
    ("angry", -1.0),
    ("fear", -1.0),
];

const FUNCTION_WORDS: [&str; 16] =
    ["the", "a", "of", "and", "to", "in", "on", "at", "is", "will", "when", "after", "what", "how", "heavy", "new"];

/// Compounds written as one word in chunk text; the tokenizer splits them.
const COMPOUNDS: [&[&str]; 4] = [
    &["riverbank", "rainfall", "waterlevel"],
    &["bankaccount", "cashflow"],
    &["sunshine", "snowstorm"],
    &["goalscore", "teamplayer"],
];

/// A generated vocabulary and chunk set.
#[derive(Debug, Clone, PartialEq)]
pub struct Fixture {
    pub space: TokenSpace,
    pub chunks: Vec<ChunkRecord>,
}

impl Fixture {
    pub fn chunks_jsonl(&self) -> Result<String> {
        let mut out = String::new();
        for c in &self.chunks {
            out.push_str(&serde_json::to_string(c)?);
            out.push('\n');
        }
        Ok(out)
    }
}

fn gaussian(rng: &mut ChaCha8Rng, dim: usize) -> Vec<f64> {
    (0..dim).map(|_| rng.sample::<f64, _>(StandardNormal)).collect()
}

fn unit(rng: &mut ChaCha8Rng, dim: usize) -> Vec<f64> {
    loop {
        if let Ok(v) = normalized(&gaussian(rng, dim)) {
            return v;
        }
    }
}

/// Clustered synthetic vocabulary and [`FIXTURE_CHUNKS`] topical chunks.
///
/// Each topic owns a random unit centroid; topic words scatter around it with
/// random lengths. Sentiment words lie along a shared axis with charge ±1,
/// function words are short random vectors with charge 0.
pub fn generate_fixture(seed: u64) -> Result<Fixture> {
    let dim = FIXTURE_DIM;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let centroids: Vec<Vec<f64>> = TOPICS.iter().map(|_| unit(&mut rng, dim)).collect();
    let sentiment_axis = unit(&mut rng, dim);
    let mut entries = Vec::new();
    let mut word = |text: &str, base: &[f64], spread: f64, charge: f64, rng: &mut ChaCha8Rng| {
        let noise = gaussian(rng, dim);
        let scale: f64 = rng.random_range(0.5..1.5);
        let embedding = base.iter().zip(&noise).map(|(b, n)| scale * (b + spread * n / (dim as f64).sqrt())).collect();
        entries.push(TokenEntry { text: text.to_string(), embedding, charge });
    };
    for (t, (_, words)) in TOPICS.iter().enumerate() {
        for w in *words {
            word(w, &centroids[t], 0.45, 0.0, &mut rng);
        }
    }
    let bridge: Vec<f64> = centroids[0].iter().zip(&centroids[1]).map(|(a, b)| 0.5 * (a + b)).collect();
    word(BRIDGE, &bridge, 0.3, 0.0, &mut rng);
    for (w, q) in SENTIMENT {
        let base: Vec<f64> = sentiment_axis.iter().map(|a| q * a).collect();
        word(w, &base, 0.5, q, &mut rng);
    }
    let zero = vec![0.0; dim];
    for w in FUNCTION_WORDS {
        word(w, &zero, 0.3, 0.0, &mut rng);
    }
    let space = TokenSpace::new(dim, entries)?;

    let per_topic = FIXTURE_CHUNKS / TOPICS.len();
    let mut chunks = Vec::with_capacity(FIXTURE_CHUNKS);
    for i in 0..FIXTURE_CHUNKS {
        let t = i / per_topic;
        let words = TOPICS[t].1;
        let mut text: Vec<&str> = Vec::new();
        let n_words = rng.random_range(6..=10);
        for _ in 0..n_words {
            let roll: f64 = rng.random();
            let w = if roll < 0.6 {
                *words.choose(&mut rng).unwrap()
            } else if roll < 0.8 {
                *FUNCTION_WORDS.choose(&mut rng).unwrap()
            } else if roll < 0.9 {
                SENTIMENT.choose(&mut rng).unwrap().0
            } else if t <= 1 && roll < 0.95 {
                BRIDGE
            } else {
                *COMPOUNDS[t].choose(&mut rng).unwrap()
            };
            text.push(w);
        }
        chunks.push(ChunkRecord { id: i as u64 + 1, text: text.join(" ") });
    }
    Ok(Fixture { space, chunks })
}
