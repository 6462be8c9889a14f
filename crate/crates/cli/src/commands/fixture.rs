use clap::Args;
use semwave::semantics::generate_fixture;

use crate::failure::Failure;
use crate::output::OutDir;
use crate::Global;

/// Writes the synthetic token space and chunk store generated from --seed.
#[derive(Debug, Args)]
pub struct FixtureArgs {}

pub fn run(_args: &FixtureArgs, global: &Global) -> Result<(), Failure> {
    let fixture = generate_fixture(global.seed)?;
    let mut space = fixture.space.to_json()?;
    space.push('\n');
    let mut out = OutDir::create(&global.out)?;
    out.write("space.json", &space)?;
    out.write("chunks.jsonl", &fixture.chunks_jsonl()?)?;
    out.finish("fixture", global.seed, global.format.ext(), &serde_json::json!({}))
}
