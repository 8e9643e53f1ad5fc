//! Maximal matching maintained on top of two orientation engines, checked
//! against the maximality oracle after every op.
//!
//! cargo run --release --example local_matching -- [n] [t] [seed]

use orientlab::apps::{MatchEngine, Matching};
use orientlab::flipgame::GameMode;
use orientlab::generators::{gen_random_with, RandomConfig};
use orientlab::oracles::check_maximal_matching;
use orientlab::orient::{Algorithm, OrientConfig, Orienter};

fn main() -> orientlab::Result<()> {
    let mut args = std::env::args().skip(1).map(|a| a.parse::<u64>().expect("integer argument"));
    let n = args.next().unwrap_or(1000) as usize;
    let t = args.next().unwrap_or(10_000) as usize;
    let seed = args.next().unwrap_or(3);
    let alpha = 2;

    let seq = gen_random_with(&RandomConfig::new(alpha, n, t, seed).deletes(0.3).hubs(0.5).churn(0.02));
    let engines = [
        ("flipping game", MatchEngine::Game(GameMode::Basic)),
        ("reset cascades Δ=8", MatchEngine::Orient(Orienter::new(Algorithm::Bf, OrientConfig::bf(4 * alpha))?)),
    ];
    for (name, engine) in engines {
        let mut m = Matching::new(engine);
        for (i, op) in seq.iter().enumerate() {
            m.op(op).map_err(|e| e.at(i))?;
            if let Err(v) = check_maximal_matching(&m.g, &m.matching()) {
                panic!("{name}: not maximal after op {i}: {v}");
            }
        }
        println!(
            "{name:<20} {} pairs at the end, work/op {:.2}, flips {}, peak outdegree {}",
            m.matching().len(),
            m.work as f64 / seq.len() as f64,
            m.g.metrics().f,
            m.g.metrics().peak_outdeg
        );
    }
    Ok(())
}
