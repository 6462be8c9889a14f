use std::fs;
use std::path::{Path, PathBuf};

use clap::Args;
use semwave::semantics::{run_rag_demo, RagConfig};
use semwave::{ChunkStore, TokenSpace};
use serde::Serialize;

use crate::failure::Failure;
use crate::output::OutDir;
use crate::Global;

const SHIPPED_SPACE: &str = include_str!("../../fixtures/space.json");
const SHIPPED_CHUNKS: &str = include_str!("../../fixtures/chunks.jsonl");

/// Multi-turn retrieval-augmented conversation with a drift report.
#[derive(Debug, Args)]
pub struct RagArgs {
    /// Token space JSON; the shipped fixture when omitted.
    #[arg(long)]
    space: Option<PathBuf>,
    /// Chunk store, one JSON object per line; the shipped fixture when omitted.
    #[arg(long)]
    chunks: Option<PathBuf>,
    #[arg(long, default_value = "the river bank after heavy rain")]
    context: String,
    #[arg(long, default_value = "when will the water level fall")]
    question: String,
    #[arg(long, default_value_t = 5, value_parser = clap::value_parser!(u64).range(1..))]
    k: u64,
    #[arg(long, default_value_t = 10, value_parser = clap::value_parser!(u64).range(1..))]
    turns: u64,
    /// Expected norm of the noise added to each response.
    #[arg(long, default_value_t = 0.3)]
    noise: f64,
    /// Expected norm of each control random-walk step.
    #[arg(long, default_value_t = 0.3)]
    control_step: f64,
}

#[derive(Serialize)]
struct RagParams<'a> {
    space: Option<&'a PathBuf>,
    chunks: Option<&'a PathBuf>,
    config: &'a RagConfig,
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::io(format!("cannot read {}: {e}", path.display())))
}

pub fn run(args: &RagArgs, global: &Global) -> Result<(), Failure> {
    let space_text = args.space.as_deref().map(read).transpose()?;
    let chunks_text = args.chunks.as_deref().map(read).transpose()?;
    let space = TokenSpace::from_json(space_text.as_deref().unwrap_or(SHIPPED_SPACE))
        .map_err(|e| Failure::from(e).context("token space"))?;
    let store = ChunkStore::from_jsonl(chunks_text.as_deref().unwrap_or(SHIPPED_CHUNKS), &space)
        .map_err(|e| Failure::from(e).context("chunk store"))?;

    let mut config = RagConfig::new(args.context.clone(), args.question.clone(), global.seed);
    config.k = args.k as usize;
    config.turns = args.turns as usize;
    config.response_noise = args.noise;
    config.control_step = args.control_step;
    let transcript = run_rag_demo(&space, &store, &config)?;

    let mut out = OutDir::create(&global.out)?;
    out.write_json("transcript.json", &transcript)?;
    let params = RagParams { space: args.space.as_ref(), chunks: args.chunks.as_ref(), config: &config };
    out.finish("rag-demo", global.seed, global.format.ext(), &params)
}
