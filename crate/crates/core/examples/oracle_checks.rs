//! The verification oracles on small graphs: exact arboricity by subset
//! scan, the optimal max outdegree by flow, and orientations produced by
//! the dynamic algorithms compared against that optimum.
//!
//! cargo run --release --example oracle_checks -- [graphs] [seed]

use orientlab::generators::{gen_random_with, RandomConfig};
use orientlab::oracles::{arboricity_bruteforce, min_max_outdegree, orient_within};
use orientlab::orient::{run_sequence_with, Algorithm, OrientConfig};
use orientlab::OrientedGraph;

fn main() -> orientlab::Result<()> {
    let mut args = std::env::args().skip(1).map(|a| a.parse::<u64>().expect("integer argument"));
    let graphs = args.next().unwrap_or(200);
    let seed = args.next().unwrap_or(13);

    let mut histogram = std::collections::BTreeMap::new();
    for s in 0..graphs {
        let alpha = 1 + (s % 3) as u32;
        let n = 4 + (s % 7) as usize;
        let seq = gen_random_with(&RandomConfig::new(alpha, n, 3 * n, seed * 1000 + s).deletes(0.2));
        let mut g = OrientedGraph::new();
        let delta = 4 * alpha;
        run_sequence_with(Algorithm::Bf, &seq, &OrientConfig::bf(delta), &mut g, |_, _, _| Ok(()))?;

        let (arb, _) = arboricity_bruteforce(&g, 10)?;
        let (opt, witness) = min_max_outdegree(&g);
        assert!(opt <= arb && arb <= alpha, "graph {s}: optimum {opt}, arboricity {arb}, promise {alpha}");
        assert_eq!(witness.max_outdegree() as u32, opt);
        assert!(orient_within(&g, opt).is_some());
        assert!(opt == 0 || orient_within(&g, opt - 1).is_none());
        assert!(g.max_outdegree() as u32 >= opt && g.max_outdegree() as u32 <= delta);
        *histogram.entry((arb, opt)).or_insert(0u32) += 1;
    }
    println!("{graphs} graphs checked; (arboricity, optimal max outdegree) counts:");
    for ((a, o), c) in histogram {
        println!("  ({a}, {o}): {c}");
    }
    Ok(())
}
