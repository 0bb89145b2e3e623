//! A declarative experiment: parse a spec, run seeded trials in parallel and
//! print the JSON-lines head and the CSV summary.
//!
//! cargo run --release --example experiment

use sublinear_fpp::harness::{run_experiment, summarize, trials_to_jsonl, ExperimentSpec};

const SPEC: &str = "\
graph.kind = tree
graph.arity = 3
graph.depth = 12
dist.kind = exp
dist.rate = 1
seed = 2024
trials = 8
workers = 2
probes = recur, image, offsets
probe.recur.kind = recur
probe.recur.C = 2
probe.image.kind = morse_image
probe.image.C = 2
probe.offsets.kind = bi_infinite
probe.offsets.radii = 5,10
";

fn main() -> sublinear_fpp::Result<()> {
    let spec = ExperimentSpec::parse(SPEC)?;
    println!("spec hash {}", spec.spec_hash());
    let results = run_experiment(&spec)?;
    let jsonl = trials_to_jsonl(&results)?;
    if let Some(first) = jsonl.lines().next() {
        println!("{}...", &first[..first.len().min(160)]);
    }
    print!("{}", summarize(&results)?.to_csv());
    Ok(())
}
