use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Emitted for every maximal run of characters the vocabulary cannot cover.
pub const UNKNOWN_TOKEN: &str = "<unk>";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TokenEntry {
    pub text: String,
    pub embedding: Vec<f64>,
    #[serde(default)]
    pub charge: f64,
}

#[derive(Serialize, Deserialize)]
struct TokenSpaceFile {
    dim: usize,
    tokens: Vec<TokenEntry>,
}

/// Vocabulary with real embeddings and per-token semantic charges.
///
/// Immutable once built; lookups go through a hash index.
#[derive(Debug, Clone)]
pub struct TokenSpace {
    dim: usize,
    entries: Vec<TokenEntry>,
    index: HashMap<String, usize>,
    max_token_chars: usize,
}

impl PartialEq for TokenSpace {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.entries == other.entries
    }
}

impl TokenSpace {
    pub fn new(dim: usize, entries: Vec<TokenEntry>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::invalid("embedding dimension must be positive"));
        }
        let mut index = HashMap::with_capacity(entries.len());
        let mut max_token_chars = 0;
        for (i, e) in entries.iter().enumerate() {
            if e.text.is_empty() || e.text.chars().any(char::is_whitespace) {
                return Err(Error::invalid(format!("token {i} is empty or contains whitespace: {:?}", e.text)));
            }
            if e.text == UNKNOWN_TOKEN {
                return Err(Error::invalid(format!("{UNKNOWN_TOKEN} is reserved")));
            }
            if e.embedding.len() != dim {
                return Err(Error::invalid(format!(
                    "token {:?} has embedding length {}, expected {dim}",
                    e.text,
                    e.embedding.len()
                )));
            }
            if e.embedding.iter().any(|v| !v.is_finite()) || !e.charge.is_finite() {
                return Err(Error::invalid(format!("token {:?} has a non-finite entry", e.text)));
            }
            if index.insert(e.text.clone(), i).is_some() {
                return Err(Error::invalid(format!("duplicate token {:?}", e.text)));
            }
            max_token_chars = max_token_chars.max(e.text.chars().count());
        }
        Ok(TokenSpace { dim, entries, index, max_token_chars })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: TokenSpaceFile = serde_json::from_str(text)?;
        Self::new(file.dim, file.tokens)
    }

    pub fn to_json(&self) -> Result<String> {
        let file = TokenSpaceFile { dim: self.dim, tokens: self.entries.clone() };
        Ok(serde_json::to_string_pretty(&file)?)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[TokenEntry] {
        &self.entries
    }

    pub fn tokens(&self) -> impl Iterator<Item = &str> {
        self.entries.iter().map(|e| e.text.as_str())
    }

    pub fn contains(&self, token: &str) -> bool {
        self.index.contains_key(token)
    }

    pub fn embedding(&self, token: &str) -> Option<&[f64]> {
        self.index.get(token).map(|&i| self.entries[i].embedding.as_slice())
    }

    /// Zero for unknown tokens.
    pub fn charge(&self, token: &str) -> f64 {
        self.index.get(token).map_or(0.0, |&i| self.entries[i].charge)
    }

    /// Copy with every embedding multiplied by `lambda`.
    pub fn scaled(&self, lambda: f64) -> Result<Self> {
        let entries = self
            .entries
            .iter()
            .map(|e| TokenEntry { embedding: e.embedding.iter().map(|v| v * lambda).collect(), ..e.clone() })
            .collect();
        Self::new(self.dim, entries)
    }
}

/// Sub-word segmentation of whitespace-separated words.
///
/// Each word is split into vocabulary pieces by longest match, with lookahead:
/// among segmentations with the fewest uncovered characters and then the fewest
/// pieces, the one whose piece lengths are lexicographically largest wins. When
/// plain greedy longest-match is optimal this is exactly its output.
pub fn tokenize(text: &str, space: &TokenSpace) -> Vec<String> {
    let mut out = Vec::new();
    for word in text.split_whitespace() {
        segment_word(word, space, &mut out);
    }
    out
}

fn segment_word(word: &str, space: &TokenSpace, out: &mut Vec<String>) {
    let chars: Vec<char> = word.chars().collect();
    let n = chars.len();
    // best[i]: (uncovered chars, pieces, first piece length or 0 for uncovered) for chars[i..]
    let mut best: Vec<(usize, usize, usize)> = vec![(0, 0, 0); n + 1];
    let mut buf = String::new();
    for i in (0..n).rev() {
        let rest = best[i + 1];
        let mut choice = (rest.0 + 1, rest.1 + 1, 0);
        let longest = space.max_token_chars.min(n - i);
        for len in (1..=longest).rev() {
            buf.clear();
            buf.extend(&chars[i..i + len]);
            if !space.contains(&buf) {
                continue;
            }
            let rest = best[i + len];
            let cand = (rest.0, rest.1 + 1, len);
            // strict comparison keeps the longest piece among equal costs
            if (cand.0, cand.1) < (choice.0, choice.1) || (choice.2 == 0 && (cand.0, cand.1) == (choice.0, choice.1)) {
                choice = cand;
            }
        }
        best[i] = choice;
    }
    let mut i = 0;
    let mut in_unknown = false;
    while i < n {
        let len = best[i].2;
        if len == 0 {
            if !in_unknown {
                out.push(UNKNOWN_TOKEN.to_string());
                in_unknown = true;
            }
            i += 1;
        } else {
            out.push(chars[i..i + len].iter().collect());
            in_unknown = false;
            i += len;
        }
    }
}

/// Fraction of whitespace words that segment without the unknown token.
pub fn coverage(corpus: &str, space: &TokenSpace) -> Result<f64> {
    let words: Vec<&str> = corpus.split_whitespace().collect();
    if words.is_empty() {
        return Err(Error::invalid("coverage of an empty corpus"));
    }
    let covered = words
        .iter()
        .filter(|w| {
            let mut toks = Vec::new();
            segment_word(w, space, &mut toks);
            toks.iter().all(|t| t != UNKNOWN_TOKEN)
        })
        .count();
    Ok(covered as f64 / words.len() as f64)
}

/// Normalized mean of the known tokens' embeddings.
pub fn embed(tokens: &[String], space: &TokenSpace) -> Result<Vec<f64>> {
    let mut sum = vec![0.0; space.dim];
    let mut count = 0usize;
    for t in tokens {
        if let Some(e) = space.embedding(t) {
            for (s, v) in sum.iter_mut().zip(e) {
                *s += v;
            }
            count += 1;
        }
    }
    if count == 0 {
        return Err(Error::DegenerateEmbedding(format!("no known tokens among {} tokens", tokens.len())));
    }
    for s in &mut sum {
        *s /= count as f64;
    }
    super::normalized(&sum).map_err(|_| Error::DegenerateEmbedding("token embeddings cancel to zero".into()))
}

pub fn embed_text(text: &str, space: &TokenSpace) -> Result<Vec<f64>> {
    embed(&tokenize(text, space), space)
}

/// Sum of per-token charges. Charges are summed in sorted order, so any
/// permutation of `tokens` gives a bit-identical total.
pub fn total_semantic_charge(tokens: &[String], space: &TokenSpace) -> f64 {
    let mut charges: Vec<f64> = tokens.iter().map(|t| space.charge(t)).collect();
    charges.sort_by(f64::total_cmp);
    charges.iter().sum()
}
