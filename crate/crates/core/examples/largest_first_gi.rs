//! Largest-first reset cascades on the `G_i` family: a vertex of the first
//! cycle climbs to outdegree `i` before it is reset, although every
//! outdegree is at most 2 before the trigger.
//!
//! cargo run --release --example largest_first_gi -- [max_i]

use orientlab::generators::{gen_gi, gi_edges};
use orientlab::orient::{Algorithm, CascadeOrder, OrientConfig, Orienter, ResetStepper};
use orientlab::{InsertRule, OrientedGraph, UpdateOp};

fn main() -> orientlab::Result<()> {
    let max_i: u32 = std::env::args().nth(1).map_or(10, |a| a.parse().expect("integer argument"));
    let cfg = OrientConfig::bf(2)
        .with_order(CascadeOrder::LargestFirst)
        .with_rule(InsertRule::HigherOutdegree);
    let orienter = Orienter::new(Algorithm::BfLargest, cfg)?;
    println!("{:>3} {:>9} {:>26}", "i", "vertices", "first-cycle outdeg at reset");
    for i in 3..=max_i {
        let gadget = gen_gi(i)?;
        let mut g = OrientedGraph::new();
        for op in gadget.setup.iter() {
            orienter.apply(&mut g, op)?;
        }
        g.apply_raw(&gadget.trigger, cfg.insert_rule)?;
        let UpdateOp::InsertDirected(tail, _) = gadget.trigger else {
            unreachable!("G_i triggers are directed inserts")
        };
        // The cascade may not settle at Δ = 2, so only its prefix is stepped.
        let (_, cycles) = gi_edges(i)?;
        let mut best = 0;
        let mut stepper = ResetStepper::new(&mut g, &[tail], &cfg);
        for _ in 0..1 << 22 {
            let Some((x, d)) = stepper.step() else { break };
            if cycles[1].contains(&x) {
                best = best.max(d);
                if best >= i as usize {
                    break;
                }
            }
        }
        println!("{i:>3} {:>9} {best:>26}", gadget.n);
    }
    Ok(())
}
