// Densest subgraph over a dynamic stream: edges of a planted clique arrive
// interleaved with noise that is later deleted, and the sampler's sample
// is solved at the end.
//
// cargo run --example densest_streaming

use std::error::Error;

use densketch::densest::{approx_densest_streaming, exact_densest, Solver};
use densketch::graph::density_f64;
use densketch::sketch::{LeveledSampler, SamplerConfig};
use densketch::stream::{generate_stream, StreamEvent, StreamSpec};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let base = generate_stream(
        &StreamSpec::PlantedDense {
            n: 400,
            prob: 0.03,
            clique: 20,
        },
        5,
    )?;
    let noise = generate_stream(
        &StreamSpec::ErdosRenyi {
            n: 400,
            prob: 0.02,
            directed: false,
        },
        6,
    )?;

    // Noise edges not already in the base graph come and go.
    let transient: Vec<_> = noise
        .graph
        .edges()
        .iter()
        .filter(|e| !base.graph.contains(e.u, e.v))
        .collect();
    let mut sampler = LeveledSampler::new(SamplerConfig::new(400, 600, 9))?;
    for e in &transient {
        sampler.insert(e.u, e.v)?;
    }
    sampler.update_batch(&base.events)?;
    for e in &transient {
        sampler.update(&StreamEvent::delete(e.u, e.v))?;
    }
    println!(
        "{} transient edges inserted and deleted, {} live",
        transient.len(),
        sampler.live_edges()
    );

    let r = approx_densest_streaming(&sampler, Solver::Exact, Some(&base.graph))?;
    let opt = exact_densest(&base.graph)?.density();
    let den_g = r.density_in_source.expect("reference graph given");
    println!("p = {}, sample solved, |S| = {}", r.p, r.vertices.len());
    println!(
        "den_G(S) = {:.3}, optimum {:.3}",
        density_f64(&den_g),
        density_f64(&opt)
    );
    let hits = r
        .vertices
        .iter()
        .filter(|v| base.planted.contains(v))
        .count();
    println!(
        "{hits} of {} returned vertices are planted clique members",
        r.vertices.len()
    );
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
