//! Splits a Δ-orientation into forests and derives adjacency labels of
//! `Δ + 1` ids: two vertices are adjacent exactly when one lists the other
//! as a parent.
//!
//! cargo run --release --example forest_labels -- [n] [seed]

use orientlab::apps::{forest_decompose, label_adjacent, make_labels};
use orientlab::generators::{gen_random_with, RandomConfig};
use orientlab::oracles::check_forest_decomposition;
use orientlab::orient::{run_sequence_with, Algorithm, OrientConfig};
use orientlab::OrientedGraph;

fn main() -> orientlab::Result<()> {
    let mut args = std::env::args().skip(1).map(|a| a.parse::<u64>().expect("integer argument"));
    let n = args.next().unwrap_or(300) as usize;
    let seed = args.next().unwrap_or(5);
    let alpha = 2;
    let delta = 4 * alpha;

    let seq = gen_random_with(&RandomConfig::new(alpha, n, 6 * n, seed).deletes(0.2).hubs(0.5));
    let mut g = OrientedGraph::new();
    run_sequence_with(Algorithm::Bf, &seq, &OrientConfig::bf(delta), &mut g, |_, _, _| Ok(()))?;
    let d = forest_decompose(&g, delta)?;
    if let Err(v) = check_forest_decomposition(&g, &d.class) {
        panic!("decomposition rejected: {v}");
    }
    println!(
        "{} vertices, {} edges, max outdegree {} → {} forests",
        g.vertex_count(),
        g.edge_count(),
        g.max_outdegree(),
        d.classes
    );

    let labels = make_labels(&g, &d);
    let widest = labels.values().map(|l| l.size()).max().unwrap_or(0);
    let vs: Vec<_> = g.vertices().collect();
    let mut pairs = 0u64;
    for (i, &u) in vs.iter().enumerate() {
        for &v in &vs[i + 1..] {
            assert_eq!(label_adjacent(&labels[&u], &labels[&v]), g.has_edge(u, v), "{u}-{v}");
            pairs += 1;
        }
    }
    println!("labels of at most {widest} ids decide all {pairs} pairs correctly");
    Ok(())
}
