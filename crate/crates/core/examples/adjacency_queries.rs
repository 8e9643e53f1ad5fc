//! Adjacency queries answered from short sorted out-lists. Query endpoints
//! with more than Δ' out-edges are reset first, so a lookup never scans a
//! long list.
//!
//! cargo run --release --example adjacency_queries -- [n] [ops] [seed]

use std::collections::BTreeSet;

use orientlab::apps::AdjacencyStructure;
use orientlab::generators::{gen_random_with, RandomConfig};
use orientlab::UpdateOp;

fn main() -> orientlab::Result<()> {
    let mut args = std::env::args().skip(1).map(|a| a.parse::<u64>().expect("integer argument"));
    let n = args.next().unwrap_or(4096) as usize;
    let t = args.next().unwrap_or(50_000) as usize;
    let seed = args.next().unwrap_or(9);
    let alpha = 2u32;
    let delta_prime = (4.0 * alpha as f64 * (n as f64).log2()).ceil() as u32;

    let seq = gen_random_with(&RandomConfig::new(alpha, n, t, seed).deletes(0.3).hubs(0.8).queries(1.0, 0.0));
    let mut adj = AdjacencyStructure::new(delta_prime);
    let mut reference = BTreeSet::new();
    let (mut yes, mut no) = (0u64, 0u64);
    for (i, op) in seq.iter().enumerate() {
        let answer = adj.op(op).map_err(|e| e.at(i))?;
        match *op {
            UpdateOp::InsertEdge(u, v) => {
                reference.insert((u.min(v), u.max(v)));
            }
            UpdateOp::DeleteEdge(u, v) => {
                reference.remove(&(u.min(v), u.max(v)));
            }
            UpdateOp::Query(u, Some(v)) => {
                let truth = reference.contains(&(u.min(v), u.max(v)));
                assert_eq!(answer, Some(truth), "op {i}: {op}");
                if truth {
                    yes += 1;
                } else {
                    no += 1;
                }
            }
            _ => {}
        }
    }
    adj.check_index()?;
    let m = adj.graph().metrics();
    println!("Δ' = {delta_prime}; {} queries answered ({yes} adjacent, {no} not), all correct", adj.queries);
    println!(
        "flips {} ({:.4} per op), resets {}, work per op {:.2}, peak outdegree {}",
        m.f,
        m.f as f64 / seq.len() as f64,
        m.resets,
        adj.work as f64 / seq.len() as f64,
        m.peak_outdeg
    );
    Ok(())
}
