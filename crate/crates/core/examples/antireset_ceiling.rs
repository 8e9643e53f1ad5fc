//! Anti-reset cascades on random arboricity-2 churn: the outdegree never
//! passes Δ + 1, even in the middle of a cascade.
//!
//! cargo run --release --example antireset_ceiling -- [n] [t] [seed]

use orientlab::generators::{gen_random_with, RandomConfig};
use orientlab::orient::{run_sequence_with, Algorithm, Cascade, OrientConfig};
use orientlab::OrientedGraph;

fn main() -> orientlab::Result<()> {
    let mut args = std::env::args().skip(1).map(|a| a.parse::<u64>().expect("integer argument"));
    let n = args.next().unwrap_or(2000) as usize;
    let t = args.next().unwrap_or(20_000) as usize;
    let seed = args.next().unwrap_or(7);
    let alpha = 2;
    let delta = 10;

    let seq = gen_random_with(&RandomConfig::new(alpha, n, t, seed).deletes(0.3).hubs(0.6));
    let cfg = OrientConfig::antireset(delta, alpha);
    let mut cascades = 0u64;
    let mut largest = 0usize;
    let mut worst_edge = 0u32;
    let mut g = OrientedGraph::new();
    let m = run_sequence_with(Algorithm::AntiReset, &seq, &cfg, &mut g, |_, _, c| {
        if let Cascade::AntiReset(ar) = c {
            cascades += 1;
            largest = largest.max(ar.internal.len() + ar.boundary.len());
            worst_edge = worst_edge.max(ar.max_flips_per_edge);
        }
        Ok(())
    })?;
    println!("{} ops, t = {}, Δ = {delta}, α = {alpha}", seq.len(), m.t);
    println!("cascades: {cascades}, largest reached set: {largest}");
    println!("flips: {} ({:.3} per edge update)", m.f, m.f as f64 / m.t as f64);
    println!("peak outdegree: {} (ceiling Δ + 1 = {})", m.peak_outdeg, delta + 1);
    println!("most flips of one colored edge in a cascade: {worst_edge}");
    Ok(())
}
