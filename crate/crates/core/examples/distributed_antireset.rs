//! The synchronous distributed simulator running anti-reset cascades:
//! per-cascade rounds, message counts and the colored-edge decay.
//!
//! cargo run --release --example distributed_antireset -- [n] [t] [seed]

use orientlab::distsim::{DistConfig, DistSim};
use orientlab::generators::{gen_random_with, RandomConfig};

fn main() -> orientlab::Result<()> {
    let mut args = std::env::args().skip(1).map(|a| a.parse::<u64>().expect("integer argument"));
    let n = args.next().unwrap_or(300) as usize;
    let t = args.next().unwrap_or(6000) as usize;
    let seed = args.next().unwrap_or(2);
    let alpha = 2;

    let seq = gen_random_with(&RandomConfig::new(alpha, n, t, seed).deletes(0.4).hubs(0.7));
    let cfg = DistConfig::new(alpha);
    let mut sim = DistSim::new(cfg.clone())?;
    sim.run(&seq)?;

    println!("Δ = {}, α = {alpha}, {} ops, {} cascades", cfg.delta, seq.len(), sim.cascades.len());
    println!("{:>7} {:>6} {:>8} {:>6} {:>6} {:>8} {:>9}  per-round (uncolored, left)", "trigger", "nodes", "internal", "edges", "rounds", "messages", "final max");
    for c in sim.cascades.iter().take(12) {
        println!(
            "{:>7} {:>6} {:>8} {:>6} {:>6} {:>8} {:>9}  {:?}",
            c.trigger, c.nodes, c.internal, c.edges, c.rounds, c.messages, c.internal_final_max, c.per_round
        );
    }
    let m = sim.metrics();
    println!(
        "rounds/op {:.2}, messages/op {:.2}, peak outdegree {}, peak memory {} entries (budget {})",
        m.rounds as f64 / seq.len() as f64,
        m.messages as f64 / seq.len() as f64,
        m.peak_outdeg,
        m.peak_mem_entries,
        cfg.mem_budget()
    );
    Ok(())
}
