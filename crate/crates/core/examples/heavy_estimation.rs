// Estimating optima of heavy subgraph problems from an edge sample, and
// checking the per-class lower bound that makes the estimate concentrate.
//
// cargo run --example heavy_estimation

use std::error::Error;

use densketch::densest::SampleSize;
use densketch::graph::Graph;
use densketch::heavy::{estimate_heavy, HeavyProblem, SolveMode};
use densketch::stream::{generate_stream, StreamSpec};

fn er(n: usize, prob: f64, directed: bool, seed: u64) -> Result<Graph, Box<dyn Error>> {
    Ok(generate_stream(&StreamSpec::ErdosRenyi { n, prob, directed }, seed)?.graph)
}

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let undirected = er(14, 0.5, false, 1)?;
    let directed = er(9, 0.3, true, 2)?;
    let problems = [
        (HeavyProblem::d_max_cut(2)?, &undirected),
        (HeavyProblem::d_max_cut(3)?, &undirected),
        (HeavyProblem::d_sum_max(3)?, &undirected),
        (HeavyProblem::directed_densest(), &directed),
        (HeavyProblem::densest_bipartite(), &er(10, 0.4, false, 3)?),
    ];
    for (problem, g) in problems {
        let m = g.edge_count() as u64;
        let exact = estimate_heavy(&problem, g, SampleSize::Fixed(m), SolveMode::Exact, 0)?;
        let half = estimate_heavy(&problem, g, SampleSize::Fixed(m / 2), SolveMode::Exact, 4)?;
        let gamma = problem.check_gamma_bound(g)?;
        let worst = gamma.worst().expect("at least one class");
        println!(
            "{:18} n={:2} m={:3}  opt={:7.2}  estimate at p=1/2: {:7.2}  gamma={:.3}  bound holds: {} (largest class bound {:.2})",
            format!("{}{}", problem.name(), if problem.d > 0 { format!(" d={}", problem.d) } else { String::new() }),
            g.vertex_count(),
            m,
            exact.estimate,
            half.estimate,
            gamma.gamma,
            gamma.holds(),
            worst.bound
        );
    }
    let formula = HeavyProblem::d_max_cut(2)?.sample_size(100, 0.5, 1.0)?;
    println!("d-max cut, n = 100, eps = 0.5: C = {formula}");
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
