// Feed an insert/delete stream through the leveled sampler and check that
// the query returns exactly the `C` live edges with the smallest hashes.
//
// cargo run --example stream_sampling

use std::error::Error;

use densketch::hashing::min_hash_select;
use densketch::sketch::{LeveledSampler, SamplerConfig};
use densketch::stream::{generate_stream, StreamSpec};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let spec = StreamSpec::Churn {
        n: 200,
        events: 20_000,
        live: 800,
    };
    let stream = generate_stream(&spec, 42)?;

    let mut sampler = LeveledSampler::new(SamplerConfig::new(stream.n, 64, 7))?;
    for event in &stream.events {
        sampler.update(event)?;
    }
    let layout = sampler.layout();
    println!(
        "{} events, {} live edges; sketch: {} levels, {}x{} cells per level, {}-wise hash",
        stream.events.len(),
        sampler.live_edges(),
        layout.levels,
        layout.sparse.rows,
        layout.sparse.width,
        layout.independence
    );

    let sample = sampler.query()?;
    println!(
        "sampled {} edges from level {}, p = {}",
        sample.sample.len(),
        sample.level,
        sample.p
    );

    // The same selection computed directly from the final edge set.
    let live: Vec<_> = stream.graph.edge_ids().collect();
    let expected = min_hash_select(&live, sampler.hash(), 64)?;
    assert_eq!(sample.sample, expected);
    println!("matches the bottom-64 of the live edge set");
    for e in sample.edges().iter().take(5) {
        println!("  {} - {}", e.u, e.v);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
