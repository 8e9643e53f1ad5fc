//! The flipping game against reset cascades in one cost model: both answer
//! the same value and adjacency queries; the ledgers show what each paid.
//!
//! cargo run --release --example flipping_game_costs -- [n] [t] [seed]

use orientlab::flipgame::{compare, simulate_bf_via_resets, GameMode};
use orientlab::generators::{gen_random_with, RandomConfig};
use orientlab::orient::OrientConfig;

fn main() -> orientlab::Result<()> {
    let mut args = std::env::args().skip(1).map(|a| a.parse::<u64>().expect("integer argument"));
    let n = args.next().unwrap_or(1000) as usize;
    let t = args.next().unwrap_or(10_000) as usize;
    let seed = args.next().unwrap_or(1);
    let alpha = 2;
    let delta = 4 * alpha;

    let seq = gen_random_with(
        &RandomConfig::new(alpha, n, t, seed)
            .deletes(0.25)
            .hubs(0.5)
            .queries(0.2, 0.3)
            .values(0.3),
    );
    println!("{} ops over {n} vertices", seq.len());
    println!("{:<22} {:>8} {:>8} {:>8} {:>8} {:>10}", "", "c", "flips", "resets", "scans", "c / c_BF");
    for (name, mode) in [
        ("basic game", GameMode::Basic),
        ("threshold game 3Δ-1", GameMode::Threshold(3 * delta - 1)),
    ] {
        let cmp = compare(&seq, mode, OrientConfig::bf(delta))?;
        if name == "basic game" {
            println!(
                "{:<22} {:>8} {:>8} {:>8} {:>8} {:>10}",
                format!("BF at Δ={delta}"),
                cmp.bf.c(),
                cmp.f_bf,
                cmp.bf.r,
                cmp.bf.outdeg_charges,
                "1.000"
            );
        }
        println!(
            "{:<22} {:>8} {:>8} {:>8} {:>8} {:>10.3}",
            name,
            cmp.game.c(),
            cmp.game.flips(),
            cmp.game.r,
            cmp.game.outdeg_charges,
            cmp.game.c() as f64 / cmp.bf.c() as f64
        );
    }

    let sim = simulate_bf_via_resets(&seq, delta)?;
    println!(
        "BF viewed as a game: {} resets, {} flips, k = {:.3}, bound k·t/(1 - k/(Δ+1)) = {:.1}",
        sim.r,
        sim.f,
        sim.k,
        sim.flip_bound(delta)
    );
    Ok(())
}
