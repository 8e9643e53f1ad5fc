//! Distributed maximal matching over sibling and free-in chains, with a
//! message trace written as JSON lines.
//!
//! cargo run --release --example distributed_matching -- [n] [t] [seed] [trace.jsonl]

use orientlab::distsim::{DistConfig, DistSim};
use orientlab::generators::{gen_random_with, RandomConfig};

fn main() -> orientlab::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let num = |i: usize, d: u64| args.get(i).map_or(d, |a| a.parse().expect("integer argument"));
    let n = num(0, 200) as usize;
    let t = num(1, 3000) as usize;
    let seed = num(2, 8);
    let trace = args.get(3);
    let alpha = 2;

    let seq = gen_random_with(&RandomConfig::new(alpha, n, t, seed).deletes(0.3).hubs(0.5).churn(0.02));
    // audit: chains, matching maximality and wakeup locality after every op
    let mut sim = DistSim::new(DistConfig::new(alpha).matching(true).audit(true))?;
    sim.record_trace(trace.is_some());
    let reports = sim.run(&seq)?;

    let busiest = reports.iter().map(|r| r.messages).max().unwrap_or(0);
    let m = sim.metrics();
    println!("{} ops, {} matched pairs at the end", seq.len(), sim.matching().len());
    println!(
        "messages/op {:.2} (busiest op {busiest}), rounds/op {:.2}, peak memory {} entries",
        m.messages as f64 / seq.len() as f64,
        m.rounds as f64 / seq.len() as f64,
        m.peak_mem_entries
    );
    if let Some(path) = trace {
        let text: String = sim.trace().iter().map(|l| l.to_json() + "\n").collect();
        std::fs::write(path, text)?;
        println!("trace: {} lines written to {path}", sim.trace().len());
    }
    Ok(())
}
