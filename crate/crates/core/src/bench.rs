//! Benchmark suites: fixed grids of workloads whose rows feed the CSV and
//! plot-data outputs of `orientlab bench`.

use std::fmt::Write as _;

use serde::Serialize;

use crate::apps::{AdjacencyStructure, MatchEngine, Matching};
use crate::distsim::{DistConfig, DistSim};
use crate::error::{Error, Result};
use crate::flipgame::{compare, FlipGame, GameMode};
use crate::generators::{gen_farflip_chain, gen_random_with, RandomConfig};
use crate::graph::OrientedGraph;
use crate::orient::{run_sequence, Algorithm, OrientConfig, Orienter};
use crate::seq::{UpdateOp, UpdateSequence};

pub const SUITES: [&str; 6] = [
    "scaling-bf",
    "competitive",
    "locality",
    "matching",
    "adjacency",
    "distributed",
];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchRow {
    pub suite: String,
    pub n: usize,
    /// Edge updates.
    pub t: u64,
    pub algo: String,
    pub f_per_t: f64,
    /// Cost (or work) per op of the sequence.
    pub c_per_ops: f64,
    pub peak_outdeg: u64,
    pub rounds_per_op: f64,
    pub msgs_per_op: f64,
    /// Suite-specific column; see [`extra_column`].
    pub extra: f64,
}

/// Name of the suite-specific column.
pub fn extra_column(suite: &str) -> &'static str {
    match suite {
        "competitive" => "c_r_over_c_a",
        "locality" => "max_flip_distance",
        "matching" => "work_per_op_scaled",
        "adjacency" => "answers_checked",
        "distributed" => "msgs_per_op_scaled",
        _ => "random_f_per_t",
    }
}

/// Random forest-union workload with hubs and deletions.
pub fn workload(alpha: u32, n: usize, t: usize, seed: u64) -> UpdateSequence {
    gen_random_with(&RandomConfig::new(alpha, n, t, seed).deletes(0.2).hubs(0.5))
}

fn ratio(a: u64, b: u64) -> f64 {
    if b == 0 {
        0.0
    } else {
        a as f64 / b as f64
    }
}

fn sizes(quick: bool, lo: u32, hi: u32, quick_hi: u32) -> Vec<usize> {
    let hi = if quick { quick_hi.min(hi) } else { hi };
    (lo..=hi).map(|k| 1usize << k).collect()
}

fn log2(n: usize) -> f64 {
    (n as f64).log2()
}

pub fn run_suite(name: &str, quick: bool) -> Result<Vec<BenchRow>> {
    match name {
        "scaling-bf" => scaling_bf(quick),
        "competitive" => competitive(quick),
        "locality" => locality(quick),
        "matching" => matching(quick),
        "adjacency" => adjacency(quick),
        "distributed" => distributed(quick),
        _ => Err(Error::Config(format!(
            "unknown suite `{name}` (known: {})",
            SUITES.join(", ")
        ))),
    }
}

fn row(suite: &str, n: usize, t: u64, algo: &str) -> BenchRow {
    BenchRow {
        suite: suite.to_string(),
        n,
        t,
        algo: algo.to_string(),
        f_per_t: 0.0,
        c_per_ops: 0.0,
        peak_outdeg: 0,
        rounds_per_op: 0.0,
        msgs_per_op: 0.0,
        extra: 0.0,
    }
}

/// Reset cascades (Δ = 2) on far-flip chains, whose flips per update grow
/// with n. `extra` is f/t of a random α = 2 workload at Δ = 5 for contrast.
fn scaling_bf(quick: bool) -> Result<Vec<BenchRow>> {
    let mut rows = Vec::new();
    for n in sizes(quick, 10, 16, 13) {
        let seq = gen_farflip_chain(n)?.sequence();
        let m = run_sequence(Algorithm::Bf, &seq, &OrientConfig::bf(2))?;
        let mut r = row("scaling-bf", n, m.t, "bf");
        r.f_per_t = ratio(m.f, m.t);
        r.c_per_ops = ratio(m.t + m.f, seq.len() as u64);
        r.peak_outdeg = m.peak_outdeg;
        let random = run_sequence(Algorithm::Bf, &workload(2, n, 4 * n, 1), &OrientConfig::bf(5))?;
        r.extra = ratio(random.f, random.t);
        rows.push(r);
    }
    Ok(rows)
}

/// Flipping games against reset cascades at Δ = 4α on query-heavy workloads.
fn competitive(quick: bool) -> Result<Vec<BenchRow>> {
    let alpha = 2;
    let delta = 4 * alpha;
    let mut rows = Vec::new();
    for n in sizes(quick, 8, 14, 10) {
        let cfg = RandomConfig::new(alpha, n, 4 * n, 2)
            .deletes(0.2)
            .hubs(0.5)
            .queries(0.3, 0.3)
            .values(0.3);
        let seq = gen_random_with(&cfg);
        for (algo, mode) in [
            ("flipgame", GameMode::Basic),
            ("flipgame-threshold", GameMode::Threshold(3 * delta - 1)),
        ] {
            let cmp = compare(&seq, mode, OrientConfig::bf(delta))?;
            let mut r = row("competitive", n, cmp.t, algo);
            r.f_per_t = ratio(cmp.game.flips(), cmp.t);
            r.c_per_ops = ratio(cmp.game.c(), seq.len() as u64);
            r.peak_outdeg = cmp.game_peak_outdeg;
            r.extra = ratio(cmp.game.c(), cmp.bf.c());
            rows.push(r);
        }
    }
    Ok(rows)
}

/// Far-flip chains: flips forced far from the update under BF(Δ=2) and
/// the games' flips next to it.
fn locality(quick: bool) -> Result<Vec<BenchRow>> {
    let mut rows = Vec::new();
    for n in sizes(quick, 6, 14, 10) {
        let gadget = gen_farflip_chain(n)?;
        let seq = gadget.sequence();

        let mut g = OrientedGraph::new();
        let orienter = Orienter::new(Algorithm::Bf, OrientConfig::bf(2))?;
        for op in gadget.setup.iter() {
            orienter.apply(&mut g, op)?;
        }
        let before = g.metrics().clone();
        g.set_distance_tracking(true);
        orienter.apply(&mut g, &gadget.trigger)?;
        let m = g.metrics().delta_since(&before);
        let mut r = row("locality", gadget.n, m.t, "bf");
        r.f_per_t = m.f as f64;
        r.peak_outdeg = g.metrics().peak_outdeg;
        r.extra = m.max_flip_distance().unwrap_or(0) as f64;
        rows.push(r);

        for (algo, mode) in [("flipgame", GameMode::Basic), ("flipgame-threshold", GameMode::Threshold(5))] {
            let mut game = FlipGame::new(mode);
            game.touch_on_edge_updates = true;
            game.vg.g.set_distance_tracking(true);
            for op in seq.iter() {
                game.op(op)?;
            }
            let m = game.graph().metrics();
            let mut r = row("locality", gadget.n, m.t, algo);
            r.f_per_t = ratio(game.ledger.flips(), m.t);
            r.c_per_ops = ratio(game.ledger.c(), seq.len() as u64);
            r.peak_outdeg = m.peak_outdeg;
            r.extra = m.max_flip_distance().unwrap_or(0) as f64;
            rows.push(r);
        }
    }
    Ok(rows)
}

/// Maximal matching work per op, scaled by `α + sqrt(α log2 n)`.
fn matching(quick: bool) -> Result<Vec<BenchRow>> {
    let alpha = 2u32;
    let mut rows = Vec::new();
    for n in sizes(quick, 10, 16, 12) {
        let seq = gen_random_with(&RandomConfig::new(alpha, n, 2 * n, 3).deletes(0.3).hubs(0.5).churn(0.02));
        let engines = [
            ("matching-local", MatchEngine::Game(GameMode::Basic)),
            (
                "matching-orient",
                MatchEngine::Orient(Orienter::new(Algorithm::Bf, OrientConfig::bf(4 * alpha))?),
            ),
        ];
        for (algo, engine) in engines {
            let mut mm = Matching::new(engine);
            for (i, op) in seq.iter().enumerate() {
                mm.op(op).map_err(|e| e.at(i))?;
            }
            let m = mm.g.metrics();
            let per_op = ratio(mm.work, seq.len() as u64);
            let mut r = row("matching", n, m.t, algo);
            r.f_per_t = ratio(m.f, m.t);
            r.c_per_ops = per_op;
            r.peak_outdeg = m.peak_outdeg;
            r.extra = per_op / (alpha as f64 + (alpha as f64 * log2(n)).sqrt());
            rows.push(r);
        }
    }
    Ok(rows)
}

/// Adjacency queries at Δ′ = 4α log2 n, answers checked against the graph.
fn adjacency(quick: bool) -> Result<Vec<BenchRow>> {
    let alpha = 2u32;
    let mut rows = Vec::new();
    for n in sizes(quick, 10, 16, 12) {
        let seq = gen_random_with(&RandomConfig::new(alpha, n, 2 * n, 4).deletes(0.3).hubs(0.5).queries(1.0, 0.0));
        let dp = (4.0 * alpha as f64 * log2(n)).ceil() as u32;
        let mut adj = AdjacencyStructure::new(dp);
        let mut checked = 0u64;
        for (i, op) in seq.iter().enumerate() {
            let expect = match *op {
                UpdateOp::Query(u, Some(v)) => Some(adj.graph().has_edge(u, v)),
                _ => None,
            };
            let got = adj.op(op).map_err(|e| e.at(i))?;
            if got != expect {
                return Err(Error::Protocol(format!("op #{i}: answered {got:?}, expected {expect:?}")));
            }
            checked += u64::from(expect.is_some());
        }
        let m = adj.graph().metrics();
        let mut r = row("adjacency", n, m.t, "adjacency");
        r.f_per_t = ratio(m.f, m.t);
        r.c_per_ops = ratio(adj.work, seq.len() as u64);
        r.peak_outdeg = m.peak_outdeg;
        r.extra = checked as f64;
        rows.push(r);
    }
    Ok(rows)
}

/// Distributed anti-reset with matching; messages per op scaled by `α + log2 n`.
fn distributed(quick: bool) -> Result<Vec<BenchRow>> {
    let alpha = 2u32;
    let mut rows = Vec::new();
    for n in sizes(quick, 10, 14, 11) {
        let seq = gen_random_with(&RandomConfig::new(alpha, n, 2 * n, 5).deletes(0.2).hubs(0.5).churn(0.01));
        for (algo, on) in [("antireset-dist", false), ("matching-dist", true)] {
            let mut sim = DistSim::new(DistConfig::new(alpha).matching(on).audit(false))?;
            sim.run(&seq)?;
            let m = sim.metrics();
            let ops = seq.len() as u64;
            let mut r = row("distributed", n, m.t, algo);
            r.f_per_t = ratio(m.f, m.t);
            r.peak_outdeg = m.peak_outdeg;
            r.rounds_per_op = ratio(m.rounds, ops);
            r.msgs_per_op = ratio(m.messages, ops);
            r.extra = r.msgs_per_op / (alpha as f64 + log2(n));
            rows.push(r);
        }
    }
    Ok(rows)
}

pub fn to_csv(rows: &[BenchRow]) -> String {
    let extra = rows.first().map_or("extra", |r| extra_column(&r.suite));
    let mut s = format!("suite,n,t,algo,f_per_t,c_per_ops,peak_outdeg,rounds_per_op,msgs_per_op,{extra}\n");
    for r in rows {
        let _ = writeln!(
            s,
            "{},{},{},{},{:.6},{:.6},{},{:.6},{:.6},{:.6}",
            r.suite, r.n, r.t, r.algo, r.f_per_t, r.c_per_ops, r.peak_outdeg, r.rounds_per_op, r.msgs_per_op, r.extra
        );
    }
    s
}

/// `series,x,y` lines: one series per algorithm and column, x = n.
pub fn plot_data(rows: &[BenchRow]) -> String {
    let mut s = String::from("series,x,y\n");
    for r in rows {
        for (col, y) in [
            ("f_per_t", r.f_per_t),
            ("c_per_ops", r.c_per_ops),
            ("peak_outdeg", r.peak_outdeg as f64),
            ("msgs_per_op", r.msgs_per_op),
            (extra_column(&r.suite), r.extra),
        ] {
            let _ = writeln!(s, "{}/{},{},{:.6}", r.algo, col, r.n, y);
        }
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_suite_is_config_error() {
        assert!(matches!(run_suite("nope", true), Err(Error::Config(_))));
    }

    #[test]
    fn csv_has_header_and_rows() {
        let rows = run_suite("locality", true).unwrap();
        let csv = to_csv(&rows);
        assert!(csv.starts_with("suite,n,t,algo,"));
        assert_eq!(csv.lines().count(), rows.len() + 1);
        assert!(plot_data(&rows).lines().count() > rows.len());
    }
}
