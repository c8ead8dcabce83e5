use std::collections::BTreeSet;

use num_rational::Ratio;
use proptest::prelude::*;

use densketch::densest::{
    approx_densest_offline, brute_force_densest, charikar_peel, exact_densest, SampleSize, Solver,
};
use densketch::hashing::min_hash_select;
use densketch::heavy::{estimate_heavy, HeavyProblem, SolveMode};
use densketch::sketch::{codec, LeveledSampler, SamplerConfig};
use densketch::stream::{
    generate_stream, replay, validate_strict_turnstile, Op, StreamEvent, StreamSpec,
};
use densketch::{EdgeId, Graph};

fn arb_graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n).prop_flat_map(|n| {
        let pairs: Vec<(usize, usize)> = (0..n)
            .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
            .collect();
        proptest::sample::subsequence(pairs.clone(), 0..=pairs.len())
            .prop_map(move |edges| Graph::from_edges(n, false, edges).unwrap())
    })
}

/// Inserts of a random edge set followed by deletes of a random subset.
fn arb_turnstile(n: usize) -> impl Strategy<Value = (Vec<StreamEvent>, BTreeSet<(usize, usize)>)> {
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .collect();
    proptest::sample::subsequence(pairs, 0..=60)
        .prop_flat_map(|inserted| {
            let len = inserted.len();
            (
                Just(inserted),
                proptest::sample::subsequence((0..len).collect::<Vec<_>>(), 0..=len),
                any::<u64>(),
            )
        })
        .prop_map(|(inserted, dropped, shuffle)| {
            let mut events: Vec<StreamEvent> = inserted
                .iter()
                .map(|&(u, v)| StreamEvent::insert(u, v))
                .collect();
            events.extend(
                dropped
                    .iter()
                    .map(|&i| StreamEvent::delete(inserted[i].0, inserted[i].1)),
            );
            // Rotating the insert block keeps the stream strict-turnstile.
            let k = if inserted.is_empty() {
                0
            } else {
                (shuffle % inserted.len() as u64) as usize
            };
            events[..inserted.len()].rotate_left(k);
            let mut live: BTreeSet<(usize, usize)> = inserted.into_iter().collect();
            for ev in events.iter().filter(|ev| ev.op == Op::Delete) {
                live.remove(&(ev.u, ev.v));
            }
            (events, live)
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn update_order_does_not_change_state(
        (events, _) in arb_turnstile(14),
        seed in any::<u64>(),
        c in 1usize..8,
    ) {
        let config = SamplerConfig::new(14, c, seed);
        let mut forward = LeveledSampler::new(config.clone()).unwrap();
        forward.update_batch(&events).unwrap();
        // Any permutation of the same updates; the sketch is linear so
        // intermediate negative counts are harmless.
        let mut backward = LeveledSampler::new(config).unwrap();
        for ev in events.iter().rev() {
            backward.update(ev).unwrap();
        }
        prop_assert!(forward == backward);
    }

    #[test]
    fn query_equals_bottom_c_of_live_set(
        (events, live) in arb_turnstile(16),
        seed in any::<u64>(),
        c in 1usize..10,
    ) {
        let mut sampler = LeveledSampler::new(SamplerConfig::new(16, c, seed)).unwrap();
        sampler.update_batch(&events).unwrap();
        prop_assert_eq!(sampler.live_edges(), live.len() as i64);
        if let Ok(sample) = sampler.query() {
            let ids: Vec<EdgeId> = live.iter().map(|&(u, v)| EdgeId((u * 16 + v) as u64)).collect();
            prop_assert_eq!(&sample.sample, &min_hash_select(&ids, sampler.hash(), c).unwrap());
            prop_assert_eq!(sample.m, live.len() as u64);
            let kept = sample.sample.len() as u64;
            prop_assert_eq!(sample.p, if live.is_empty() { Ratio::from_integer(1) } else { Ratio::new(kept, live.len() as u64) });
        }
    }

    #[test]
    fn merge_of_split_equals_whole(
        (events, _) in arb_turnstile(12),
        seed in any::<u64>(),
        split in any::<prop::sample::Index>(),
    ) {
        let config = SamplerConfig::new(12, 4, seed);
        let at = split.index(events.len() + 1);
        let mut whole = LeveledSampler::new(config.clone()).unwrap();
        whole.update_batch(&events).unwrap();
        let mut a = LeveledSampler::new(config.clone()).unwrap();
        a.update_batch(&events[..at]).unwrap();
        let mut b = LeveledSampler::new(config).unwrap();
        b.update_batch(&events[at..]).unwrap();
        prop_assert!(LeveledSampler::merged(&a, &b).unwrap() == whole);
    }

    #[test]
    fn codec_round_trips((events, _) in arb_turnstile(12), seed in any::<u64>(), c in 1usize..6) {
        let mut sampler = LeveledSampler::new(SamplerConfig::new(12, c, seed)).unwrap();
        sampler.update_batch(&events).unwrap();
        let bytes = codec::encode(&sampler);
        prop_assert!(codec::decode(&bytes).unwrap() == sampler);
    }

    #[test]
    fn densest_bounds(g in arb_graph(9)) {
        let opt = exact_densest(&g).unwrap();
        prop_assert_eq!(&opt, &brute_force_densest(&g).unwrap());
        // At least the average density.
        prop_assert!(opt.density() >= Ratio::new(g.edge_count() as u64, g.vertex_count() as u64));
        prop_assert_eq!(g.density_of(&opt.vertices).unwrap(), opt.density());
        let peel = charikar_peel(&g).unwrap();
        prop_assert!(peel.density() * 2 >= opt.density());
        prop_assert_eq!(g.density_of(&peel.vertices).unwrap(), peel.density());
    }

    #[test]
    fn full_rate_sampling_is_the_solver(g in arb_graph(9), seed in any::<u64>()) {
        let c = g.edge_count().max(1) as u64;
        for solver in [Solver::Charikar, Solver::Exact] {
            let r = approx_densest_offline(&g, SampleSize::Fixed(c), solver, seed).unwrap();
            let direct = solver.solve(&g).unwrap();
            prop_assert_eq!(r.density_in_source, Some(direct.density()));
            prop_assert_eq!(r.vertices, direct.vertices);
        }
    }

    #[test]
    fn full_rate_estimate_is_normalized_optimum(g in arb_graph(7), seed in any::<u64>(), d in 2usize..4) {
        let c = g.edge_count().max(1) as u64;
        let problems = [HeavyProblem::d_max_cut(d).unwrap(), HeavyProblem::densest_bipartite()];
        for problem in problems {
            let e = estimate_heavy(&problem, &g, SampleSize::Fixed(c), SolveMode::Exact, seed).unwrap();
            let opt = problem.solve(&g, SolveMode::Exact, seed).unwrap().evaluation;
            prop_assert_eq!(e.estimate, opt.normalized);
            prop_assert_eq!(e.raw_estimate, opt.raw);
        }
    }

    #[test]
    fn evaluation_is_linear_in_surviving_edges(g in arb_graph(8), mask in any::<u64>(), d in 2usize..4) {
        let problem = HeavyProblem::d_max_cut(d).unwrap();
        let sol = problem.solve(&g, SolveMode::Exact, 0).unwrap().solution;
        let mut bit = 0;
        let h = g.spanning_subgraph(|_| { bit += 1; mask >> (bit % 64) & 1 == 1 });
        let surviving = problem
            .solution_edges(&sol, &g)
            .unwrap()
            .into_iter()
            .filter(|e| h.contains(e.u, e.v))
            .count();
        let eval = problem.evaluate(&sol, &h).unwrap();
        prop_assert_eq!(eval.edges, surviving as u64);
        prop_assert_eq!(eval.normalized, problem.scale(eval.class, g.vertex_count()) * surviving as f64);
    }

    #[test]
    fn regular_graphs_have_density_half_degree(n in 3usize..12) {
        for (g, r) in [(densketch::graph::families::cycle(n), 2u64), (densketch::graph::families::complete(n), n as u64 - 1)] {
            let opt = brute_force_densest(&g).unwrap().density();
            prop_assert_eq!(opt, Ratio::new(r, 2));
            prop_assert_eq!(g.density().unwrap(), Ratio::new(r, 2));
        }
    }

    #[test]
    fn churn_streams_replay_to_their_graph(seed in any::<u64>(), n in 5usize..40, events in 0usize..500) {
        let live = n;
        let spec = StreamSpec::Churn { n, events: events.max(live), live };
        let s = generate_stream(&spec, seed).unwrap();
        prop_assert!(validate_strict_turnstile(&s.events, false).is_ok());
        prop_assert_eq!(replay(n, false, &s.events).unwrap(), s.graph);
    }
}
