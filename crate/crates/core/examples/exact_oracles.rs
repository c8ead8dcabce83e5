// The exact densest-subgraph solvers next to greedy peeling.
//
// cargo run --example exact_oracles

use std::error::Error;

use densketch::densest::{brute_force_densest, charikar_peel, exact_densest};
use densketch::graph::{density_f64, families};
use densketch::stream::{generate_stream, StreamSpec};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let g = families::k4_with_pendant_path();
    let flow = exact_densest(&g)?;
    let brute = brute_force_densest(&g)?;
    let peel = charikar_peel(&g)?;
    println!(
        "K4 with a pendant path: flow {:?} at {}, brute force {:?}, peeling {:?}",
        flow.vertices,
        flow.density(),
        brute.vertices,
        peel.vertices
    );
    assert_eq!(flow, brute);

    let mut worst: f64 = 1.0;
    for seed in 0..20 {
        let g = generate_stream(
            &StreamSpec::ErdosRenyi {
                n: 60,
                prob: 0.1,
                directed: false,
            },
            seed,
        )?
        .graph;
        let opt = density_f64(&exact_densest(&g)?.density());
        let greedy = density_f64(&charikar_peel(&g)?.density());
        if opt > 0.0 {
            worst = worst.min(greedy / opt);
        }
    }
    println!("peeling over 20 random graphs: worst ratio to the optimum {worst:.3}");
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
