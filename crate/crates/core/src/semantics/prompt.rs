use serde::{Deserialize, Serialize};

use super::normalized;
use super::space::{embed, tokenize, TokenSpace};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Role {
    Context,
    Question,
    Chunk,
    Response,
}

/// A prompt component with its own normalized embedding.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PromptPart {
    pub role: Role,
    pub tokens: Vec<String>,
    pub embedding: Vec<f64>,
}

impl PromptPart {
    pub fn from_text(role: Role, text: &str, space: &TokenSpace) -> Result<Self> {
        let tokens = tokenize(text, space);
        let embedding = embed(&tokens, space)?;
        Ok(PromptPart { role, tokens, embedding })
    }

    /// A part known only by its embedding, such as a synthesized response.
    pub fn from_embedding(role: Role, embedding: &[f64]) -> Result<Self> {
        if embedding.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("part embedding has non-finite entries"));
        }
        Ok(PromptPart { role, tokens: Vec::new(), embedding: normalized(embedding)? })
    }
}

/// Ordered parts plus the composite embedding, kept in sync on every push.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PromptState {
    parts: Vec<PromptPart>,
    embedding: Vec<f64>,
}

impl PromptState {
    pub fn new(parts: Vec<PromptPart>) -> Result<Self> {
        let embedding = compose_embedding(&parts)?;
        Ok(PromptState { parts, embedding })
    }

    pub fn parts(&self) -> &[PromptPart] {
        &self.parts
    }

    pub fn embedding(&self) -> &[f64] {
        &self.embedding
    }

    /// Concatenated token sequence in part order.
    pub fn tokens(&self) -> Vec<String> {
        self.parts.iter().flat_map(|p| p.tokens.iter().cloned()).collect()
    }

    pub fn push(&mut self, part: PromptPart) -> Result<()> {
        let mut parts = self.parts.clone();
        parts.push(part);
        *self = PromptState::new(parts)?;
        Ok(())
    }

    pub fn push_text(&mut self, role: Role, text: &str, space: &TokenSpace) -> Result<()> {
        self.push(PromptPart::from_text(role, text, space)?)
    }

    /// `self ⊕ other`: parts of `other` appended after those of `self`.
    pub fn concat(&self, other: &PromptState) -> Result<PromptState> {
        PromptState::new(self.parts.iter().chain(&other.parts).cloned().collect())
    }
}

/// Normalized mean of the part embeddings.
///
/// The parts are summed in a canonical order (lexicographic on the vectors),
/// so reordering the parts gives a bit-identical result.
fn compose_embedding(parts: &[PromptPart]) -> Result<Vec<f64>> {
    let first = parts.first().ok_or_else(|| Error::invalid("a prompt needs at least one part"))?;
    let dim = first.embedding.len();
    if let Some(p) = parts.iter().find(|p| p.embedding.len() != dim) {
        return Err(Error::invalid(format!("part embedding length {} differs from {dim}", p.embedding.len())));
    }
    let mut order: Vec<&Vec<f64>> = parts.iter().map(|p| &p.embedding).collect();
    order.sort_by(|a, b| {
        a.iter().zip(b.iter()).map(|(x, y)| x.total_cmp(y)).find(|o| o.is_ne()).unwrap_or(std::cmp::Ordering::Equal)
    });
    let mut sum = vec![0.0; dim];
    for e in order {
        for (s, v) in sum.iter_mut().zip(e) {
            *s += v;
        }
    }
    let n = parts.len() as f64;
    for s in &mut sum {
        *s /= n;
    }
    normalized(&sum).map_err(|_| Error::DegenerateEmbedding("part embeddings cancel to zero".into()))
}

/// `part₁ ⊕ part₂ ⊕ …`: token concatenation in the given order with the
/// normalized-mean composite embedding.
pub fn compose_prompt(parts: &[(Role, &str)], space: &TokenSpace) -> Result<PromptState> {
    if parts.is_empty() {
        return Err(Error::invalid("compose_prompt needs at least one part"));
    }
    let parts =
        parts.iter().map(|(role, text)| PromptPart::from_text(*role, text, space)).collect::<Result<Vec<_>>>()?;
    PromptState::new(parts)
}
