use std::cmp::Ordering;
use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use super::space::{embed, tokenize, TokenSpace};
use super::{cosine_similarity, dot, l2};
use crate::error::{Error, Result};

/// One line of a chunk file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChunkRecord {
    pub id: u64,
    pub text: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Chunk {
    pub id: u64,
    pub text: String,
    pub tokens: Vec<String>,
    pub embedding: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChunkStore {
    dim: usize,
    chunks: Vec<Chunk>,
}

impl ChunkStore {
    pub fn new(dim: usize, chunks: Vec<Chunk>) -> Result<Self> {
        let mut seen = HashSet::new();
        for c in &chunks {
            if !seen.insert(c.id) {
                return Err(Error::invalid(format!("duplicate chunk id {}", c.id)));
            }
            if c.embedding.len() != dim {
                return Err(Error::invalid(format!(
                    "chunk {} has embedding length {}, expected {dim}",
                    c.id,
                    c.embedding.len()
                )));
            }
            if c.embedding.iter().any(|v| !v.is_finite()) {
                return Err(Error::invalid(format!("chunk {} has a non-finite embedding", c.id)));
            }
        }
        Ok(ChunkStore { dim, chunks })
    }

    /// Tokenizes and embeds each record.
    pub fn from_records(records: &[ChunkRecord], space: &TokenSpace) -> Result<Self> {
        let chunks = records
            .iter()
            .map(|r| {
                let tokens = tokenize(&r.text, space);
                let embedding = embed(&tokens, space).map_err(|e| match e {
                    Error::DegenerateEmbedding(m) => Error::DegenerateEmbedding(format!("chunk {}: {m}", r.id)),
                    other => other,
                })?;
                Ok(Chunk { id: r.id, text: r.text.clone(), tokens, embedding })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(space.dim(), chunks)
    }

    /// JSON lines, one `{id, text}` object per non-blank line.
    pub fn from_jsonl(text: &str, space: &TokenSpace) -> Result<Self> {
        let records = text
            .lines()
            .enumerate()
            .filter(|(_, l)| !l.trim().is_empty())
            .map(|(i, l)| {
                serde_json::from_str::<ChunkRecord>(l).map_err(|e| Error::Parse(format!("chunk line {}: {e}", i + 1)))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_records(&records, space)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.chunks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chunks.is_empty()
    }

    pub fn chunks(&self) -> &[Chunk] {
        &self.chunks
    }

    pub fn get(&self, id: u64) -> Option<&Chunk> {
        self.chunks.iter().find(|c| c.id == id)
    }
}

fn check_query(query: &[f64], store: &ChunkStore, k: usize) -> Result<()> {
    if store.is_empty() {
        return Err(Error::invalid("retrieval from an empty chunk store"));
    }
    if k == 0 {
        return Err(Error::invalid("k must be at least 1"));
    }
    if query.len() != store.dim {
        return Err(Error::invalid(format!("query has dimension {}, store has {}", query.len(), store.dim)));
    }
    if !(l2(query) > 0.0) {
        return Err(Error::DegenerateVector("zero query vector".into()));
    }
    Ok(())
}

/// Ids of the `min(k, |store|)` most similar chunks, best first; equal
/// similarities go to the smaller id.
///
/// Keeps a bounded buffer of the best `k` instead of sorting the whole store.
pub fn retrieve_top_k(query: &[f64], store: &ChunkStore, k: usize) -> Result<Vec<(u64, f64)>> {
    check_query(query, store, k)?;
    let k = k.min(store.len());
    let qn = l2(query);
    let better = |a: &(u64, f64), b: &(u64, f64)| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0));
    let mut top: Vec<(u64, f64)> = Vec::with_capacity(k + 1);
    for c in &store.chunks {
        let norm = l2(&c.embedding);
        if !(norm > 0.0) {
            return Err(Error::DegenerateVector(format!("chunk {} has a zero embedding", c.id)));
        }
        let sim = (dot(query, &c.embedding) / (qn * norm)).clamp(-1.0, 1.0);
        let cand = (c.id, sim);
        if top.len() == k && better(&cand, &top[k - 1]) != Ordering::Less {
            continue;
        }
        let pos = top.partition_point(|t| better(t, &cand) == Ordering::Less);
        top.insert(pos, cand);
        top.truncate(k);
    }
    Ok(top)
}

/// Reference ranking: every similarity through [`cosine_similarity`], then a full sort.
pub fn brute_force_top_k(query: &[f64], store: &ChunkStore, k: usize) -> Result<Vec<(u64, f64)>> {
    check_query(query, store, k)?;
    let mut all =
        store.chunks.iter().map(|c| Ok((c.id, cosine_similarity(query, &c.embedding)?))).collect::<Result<Vec<_>>>()?;
    all.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
    all.truncate(k);
    Ok(all)
}
