// Sample-and-solve for densest subgraph on a graph held in memory: keep
// `C` uniformly random edges, solve on them, and report the density of the
// returned vertex set in the full graph.
//
// cargo run --example densest_offline

use std::error::Error;

use densketch::densest::{
    approx_densest_offline, compute_sample_size, exact_densest, SampleSize, Solver,
};
use densketch::graph::density_f64;
use densketch::stream::{generate_stream, StreamSpec};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let planted = generate_stream(
        &StreamSpec::PlantedDense {
            n: 300,
            prob: 0.04,
            clique: 25,
        },
        3,
    )?;
    let g = &planted.graph;
    let opt = exact_densest(g)?;
    println!(
        "n = {}, m = {}, optimum density {} on {} vertices",
        g.vertex_count(),
        g.edge_count(),
        opt.density(),
        opt.vertices.len()
    );

    let formula = compute_sample_size(g.vertex_count() as u64, g.edge_count() as u64, 0.5, 1.0)?;
    println!(
        "accuracy 0.5, confidence 1: C = {} (at least m here, so the whole graph is solved)",
        formula.c
    );

    let m = g.edge_count() as u64;
    for c in [m / 10, m / 4, m / 2] {
        for solver in [Solver::Charikar, Solver::Exact] {
            let r = approx_densest_offline(g, SampleSize::Fixed(c), solver, 11)?;
            let den_g = r
                .density_in_source
                .expect("offline runs know the source graph");
            println!(
                "C = {c:5} {solver:?}: |S| = {:3}, den_G = {:.3} ({:.1}% of opt), den_H/p = {:.3}",
                r.vertices.len(),
                density_f64(&den_g),
                100.0 * density_f64(&den_g) / density_f64(&opt.density()),
                r.scaled_sample_density()
            );
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
