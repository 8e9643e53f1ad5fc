//! A FIFO reset cascade on the blowup tree piles `Δ^(h-1)` edges onto a
//! single sink, while anti-reset cascades keep every outdegree near Δ.
//!
//! cargo run --release --example blowup_cascade -- [delta] [height]

use orientlab::generators::gen_blowup_tree;
use orientlab::orient::{Algorithm, OrientConfig, Orienter};
use orientlab::OrientedGraph;

fn main() -> orientlab::Result<()> {
    let mut args = std::env::args().skip(1).map(|a| a.parse::<u32>().expect("integer argument"));
    let delta = args.next().unwrap_or(3);
    let height = args.next().unwrap_or(7);

    let gadget = gen_blowup_tree(delta, height)?;
    let sink = gadget.watch.expect("blowup tree watches its sink");
    let bf = Orienter::new(Algorithm::Bf, OrientConfig::bf(delta))?;
    let mut g = OrientedGraph::new();
    for op in gadget.setup.iter() {
        bf.apply(&mut g, op)?;
    }
    g.reset_vertex_peaks();
    let f0 = g.metrics().f;
    bf.apply(&mut g, &gadget.trigger)?;
    println!("blowup tree: Δ={delta}, height={height}, {} vertices", gadget.n);
    println!(
        "BF (FIFO): sink {sink} peaked at outdegree {} (Δ^(h-1) = {}), cascade flipped {} edges",
        g.vertex_peak(sink),
        delta.pow(height - 1),
        g.metrics().f - f0
    );

    let alpha = gadget.alpha;
    let ar_delta = 7 * alpha;
    let ar = Orienter::new(Algorithm::AntiReset, OrientConfig::antireset(ar_delta, alpha))?;
    for (label, seq) in [
        ("same sequence", gadget.sequence()),
        ("tree built for the anti-reset threshold", gen_blowup_tree(ar_delta, 3)?.sequence()),
    ] {
        let mut g = OrientedGraph::new();
        for op in seq.iter() {
            ar.apply(&mut g, op)?;
        }
        println!(
            "anti-reset (Δ={ar_delta}, α={alpha}) on {label}: peak outdegree {}, {} flips",
            g.metrics().peak_outdeg,
            g.metrics().f
        );
    }
    Ok(())
}
