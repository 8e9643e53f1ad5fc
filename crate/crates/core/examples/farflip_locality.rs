//! Far-flip chains: one insertion forces reset cascades to flip edges about
//! log2 n hops away, while the flipping game only flips edges at the
//! vertices it touches.
//!
//! cargo run --release --example farflip_locality

use orientlab::flipgame::{FlipGame, GameMode};
use orientlab::generators::gen_farflip_chain;
use orientlab::orient::{Algorithm, OrientConfig, Orienter};
use orientlab::OrientedGraph;

fn main() -> orientlab::Result<()> {
    println!("{:>7} {:>10} {:>14} {:>18}", "n", "BF flips", "BF max dist", "game max dist");
    for k in 6..=14 {
        let gadget = gen_farflip_chain(1 << k)?;

        let bf = Orienter::new(Algorithm::Bf, OrientConfig::bf(2))?;
        let mut g = OrientedGraph::new();
        for op in gadget.setup.iter() {
            bf.apply(&mut g, op)?;
        }
        let f0 = g.metrics().f;
        g.set_distance_tracking(true);
        bf.apply(&mut g, &gadget.trigger)?;

        let mut game = FlipGame::new(GameMode::Basic);
        game.touch_on_edge_updates = true;
        game.vg.g.set_distance_tracking(true);
        for op in gadget.sequence().iter() {
            game.op(op)?;
        }

        println!(
            "{:>7} {:>10} {:>14} {:>18}",
            gadget.n,
            g.metrics().f - f0,
            g.metrics().max_flip_distance().unwrap_or(0),
            game.graph().metrics().max_flip_distance().unwrap_or(0)
        );
    }
    Ok(())
}
