//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any
//! criterion fails. Runs without the libtest harness so the lines always show.

use std::collections::BTreeSet;
use std::time::Instant;

use rayon::prelude::*;

use orientlab::apps::{AdjacencyStructure, MatchEngine, Matching};
use orientlab::bench;
use orientlab::distsim::{CascadeReport, DistConfig, DistSim};
use orientlab::flipgame::{compare, FlipGame, GameMode};
use orientlab::generators::{
    gen_blowup_tree, gen_farflip_chain, gen_gi, gen_random_with, gi_edges, RandomConfig,
};
use orientlab::oracles::{arboricity_bruteforce, check_maximal_matching, min_max_outdegree, orient_within};
use orientlab::orient::{
    run_sequence, run_sequence_with, Algorithm, Cascade, CascadeOrder, OrientConfig, Orienter, ResetStepper,
};
use orientlab::{Error, InsertRule, OrientedGraph, UpdateOp, UpdateSequence, VertexId};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn all_ok<T: Send>(items: Vec<Result<T, String>>) -> Result<Vec<T>, String> {
    items.into_iter().collect()
}

fn log2(n: usize) -> f64 {
    (n as f64).log2()
}

fn build(setup: &UpdateSequence, o: &Orienter) -> Result<OrientedGraph, String> {
    let mut g = OrientedGraph::new();
    for op in setup.iter() {
        o.apply(&mut g, op).map_err(|e| e.to_string())?;
    }
    g.reset_vertex_peaks();
    Ok(g)
}

fn ac1_forest_safety() -> Outcome {
    let orders = [CascadeOrder::Fifo, CascadeOrder::Lifo, CascadeOrder::LargestFirst];
    let runs: Vec<Result<u64, String>> = (0..200u64)
        .into_par_iter()
        .map(|seed| {
            let seq = gen_random_with(&RandomConfig::new(1, 1000, 10_000, 1000 + seed).deletes(0.3));
            let mut worst = 0;
            for delta in [2u32, 4] {
                for order in orders {
                    let cfg = OrientConfig::bf(delta).with_order(order);
                    let mut g = OrientedGraph::new();
                    let m = run_sequence_with(Algorithm::Bf, &seq, &cfg, &mut g, |_, g, _| {
                        if g.max_outdegree() > delta as usize {
                            return Err(Error::Promise(format!("steady outdegree {}", g.max_outdegree())));
                        }
                        Ok(())
                    })
                    .map_err(|e| format!("seed {seed} Δ={delta} {order:?}: {e}"))?;
                    g.check_invariants().map_err(|e| format!("seed {seed}: {e}"))?;
                    ensure(m.peak_outdeg <= delta as u64 + 1, || {
                        format!("seed {seed} Δ={delta} {order:?}: peak {}", m.peak_outdeg)
                    })?;
                    worst = worst.max(m.peak_outdeg as i64 - delta as i64);
                }
            }
            Ok(worst as u64)
        })
        .collect();
    let worst = all_ok(runs)?.into_iter().max().unwrap_or(0);
    Ok(format!("1200 runs, peak - Δ ≤ {worst}"))
}

fn ac2_blowup() -> Outcome {
    let (delta, height) = (3, 7);
    let gadget = gen_blowup_tree(delta, height).map_err(|e| e.to_string())?;
    let bf = Orienter::new(Algorithm::Bf, OrientConfig::bf(delta)).unwrap();
    let mut g = build(&gadget.setup, &bf)?;
    bf.apply(&mut g, &gadget.trigger).map_err(|e| e.to_string())?;
    let sink = gadget.watch.unwrap();
    let peak = g.vertex_peak(sink);
    let floor = delta.pow(height - 1) as usize;
    ensure(peak >= floor, || format!("sink peak {peak} < {floor}"))?;
    ensure(peak as f64 >= gadget.n as f64 / (2.0 * delta as f64), || format!("sink peak {peak} < n/2Δ"))?;

    let (ar_delta, alpha) = (14, 2);
    let ar = Orienter::new(Algorithm::AntiReset, OrientConfig::antireset(ar_delta, alpha)).unwrap();
    let mut peaks = Vec::new();
    for seq in [gadget.sequence(), gen_blowup_tree(ar_delta, 3).unwrap().sequence()] {
        let m = run_sequence(Algorithm::AntiReset, &seq, &ar.cfg).map_err(|e| e.to_string())?;
        ensure(m.peak_outdeg <= ar_delta as u64 + 1, || format!("anti-reset peak {}", m.peak_outdeg))?;
        peaks.push(m.peak_outdeg);
    }
    Ok(format!(
        "n={}, BF sink peak {peak} ≥ {floor}; anti-reset Δ=14 peaks {peaks:?}",
        gadget.n
    ))
}

fn ac3_largest_first() -> Outcome {
    let n = 1 << 12;
    let runs: Vec<Result<(u64, u64), String>> = (0..100u64)
        .into_par_iter()
        .map(|seed| {
            let alpha = 1 + (seed % 3) as u32;
            let delta = 4 * alpha;
            let seq = gen_random_with(&RandomConfig::new(alpha, n, 100_000, 3000 + seed).deletes(0.3).hubs(0.5));
            let cfg = OrientConfig::bf(delta).with_order(CascadeOrder::LargestFirst);
            let mut g = OrientedGraph::new();
            let m = run_sequence_with(Algorithm::BfLargest, &seq, &cfg, &mut g, |_, _, _| Ok(()))
                .map_err(|e| format!("seed {seed}: {e}"))?;
            g.check_invariants().map_err(|e| format!("seed {seed}: {e}"))?;
            let bound = 4 * alpha as u64 * log2(n / alpha as usize).ceil() as u64 + delta as u64;
            ensure(m.peak_outdeg <= bound, || format!("seed {seed}: peak {} > {bound}", m.peak_outdeg))?;
            ensure(g.max_outdegree() <= delta as usize, || format!("seed {seed}: steady violation"))?;
            Ok((m.peak_outdeg, bound))
        })
        .collect();
    let upper = all_ok(runs)?;
    let headroom = upper.iter().map(|&(p, b)| b - p).min().unwrap_or(0);

    let cfg = OrientConfig::bf(2)
        .with_order(CascadeOrder::LargestFirst)
        .with_rule(InsertRule::HigherOutdegree);
    let o = Orienter::new(Algorithm::BfLargest, cfg).unwrap();
    let lower: Vec<Result<usize, String>> = (8..=12u32)
        .into_par_iter()
        .map(|i| {
            let gadget = gen_gi(i).map_err(|e| e.to_string())?;
            let mut g = build(&gadget.setup, &o)?;
            g.apply_raw(&gadget.trigger, cfg.insert_rule).map_err(|e| e.to_string())?;
            let UpdateOp::InsertDirected(tail, _) = gadget.trigger else {
                return Err("G_i trigger is not directed".into());
            };
            let (_, cycles) = gi_edges(i).map_err(|e| e.to_string())?;
            let mut stepper = ResetStepper::new(&mut g, &[tail], &cfg);
            let mut seen: Vec<Option<usize>> = vec![None; cycles[1].len()];
            for _ in 0..1 << 24 {
                let Some((x, d)) = stepper.step() else { break };
                if let Some(k) = cycles[1].iter().position(|&c| c == x) {
                    seen[k].get_or_insert(d);
                }
                if seen.iter().all(Option::is_some) {
                    break;
                }
            }
            ensure(seen.contains(&Some(i as usize)), || format!("G_{i}: first-cycle degrees {seen:?}"))?;
            Ok(i as usize)
        })
        .collect();
    let lower = all_ok(lower)?;
    Ok(format!(
        "100 runs within 4α⌈log2(n/α)⌉+Δ (min headroom {headroom}); G_i reached i for i in {:?}",
        lower
    ))
}

fn ac4_antireset_audit() -> Outcome {
    let (alpha, delta) = (2u32, 10u32);
    let cfg = OrientConfig::antireset(delta, alpha);
    let runs: Vec<Result<(u64, u64), String>> = (0..100u64)
        .into_par_iter()
        .map(|seed| {
            let seq = gen_random_with(&RandomConfig::new(alpha, 1000, 10_000, 4000 + seed).deletes(0.3).hubs(0.6));
            let o = Orienter::new(Algorithm::AntiReset, cfg).unwrap();
            let mut g = OrientedGraph::new();
            let mut cascades = 0;
            for (i, op) in seq.iter().enumerate() {
                let (_, cascade) = o.apply(&mut g, op).map_err(|e| format!("seed {seed}: {}", e.at(i)))?;
                let mut touched = op.endpoints();
                if let Cascade::AntiReset(ar) = &cascade {
                    cascades += 1;
                    ensure(ar.max_flips_per_edge <= 1, || {
                        format!("seed {seed} op {i}: a colored edge flipped {} times", ar.max_flips_per_edge)
                    })?;
                    for &b in &ar.boundary {
                        ensure(g.vertex_peak(b) <= delta as usize, || {
                            format!("seed {seed} op {i}: boundary {b} reached {}", g.vertex_peak(b))
                        })?;
                    }
                    touched.extend(ar.internal.iter().chain(&ar.boundary));
                }
                ensure(g.max_outdegree() <= delta as usize, || format!("seed {seed} op {i}: steady violation"))?;
                for v in touched {
                    g.reset_vertex_peak(v);
                }
            }
            g.check_invariants().map_err(|e| format!("seed {seed}: {e}"))?;
            let peak = g.metrics().peak_outdeg;
            ensure(peak <= delta as u64 + 1, || format!("seed {seed}: peak {peak}"))?;
            Ok((peak, cascades))
        })
        .collect();
    let runs = all_ok(runs)?;
    let peak = runs.iter().map(|r| r.0).max().unwrap_or(0);
    let cascades: u64 = runs.iter().map(|r| r.1).sum();
    Ok(format!("100 runs, {cascades} cascades, peak {peak} ≤ Δ+1, every colored edge flipped ≤ once"))
}

fn game_sequences() -> Vec<(u64, UpdateSequence)> {
    (0..50u64)
        .map(|seed| {
            let cfg = RandomConfig::new(2, 500, 10_000, 5000 + seed)
                .deletes(0.3)
                .hubs(0.5)
                .churn(0.005)
                .queries(0.3, 0.3)
                .values(0.3);
            (seed, gen_random_with(&cfg))
        })
        .collect()
}

fn ac5_competitive() -> Outcome {
    let delta = 8;
    let rows: Vec<Result<f64, String>> = game_sequences()
        .into_par_iter()
        .map(|(seed, seq)| {
            let cmp = compare(&seq, GameMode::Basic, OrientConfig::bf(delta)).map_err(|e| format!("seed {seed}: {e}"))?;
            let ratio = cmp.game.c() as f64 / cmp.bf.c() as f64;
            ensure(cmp.game.c() <= 2 * cmp.bf.c(), || {
                format!("seed {seed}: c_R {} > 2 c_A {}", cmp.game.c(), cmp.bf.c())
            })?;
            Ok(ratio)
        })
        .collect();
    let rows = all_ok(rows)?;
    let max = rows.iter().cloned().fold(0.0, f64::max);
    Ok(format!("50 runs, max c_R/c_A = {max:.3} ≤ 2"))
}

fn ac6_token_bounds() -> Outcome {
    let delta = 8u32;
    let dp = 3 * delta - 1;
    let rows: Vec<Result<(f64, f64), String>> = game_sequences()
        .into_par_iter()
        .map(|(seed, seq)| {
            let basic = compare(&seq, GameMode::Basic, OrientConfig::bf(delta)).map_err(|e| e.to_string())?;
            let bound = basic.t + basic.f_bf + 2 * delta as u64 * basic.game.r;
            ensure(basic.game.flips() <= bound, || {
                format!("seed {seed}: basic flips {} > {bound}", basic.game.flips())
            })?;
            let thr = compare(&seq, GameMode::Threshold(dp), OrientConfig::bf(delta)).map_err(|e| e.to_string())?;
            let tf = thr.t + thr.f_bf;
            let formula = tf as f64 * (dp + 1) as f64 / (dp + 1 - 2 * delta) as f64;
            ensure(thr.game.flips() as f64 <= formula && thr.game.flips() <= 3 * tf, || {
                format!("seed {seed}: threshold flips {} > {formula}", thr.game.flips())
            })?;
            Ok((basic.game.flips() as f64 / bound as f64, thr.game.flips() as f64 / formula))
        })
        .collect();
    let rows = all_ok(rows)?;
    let b = rows.iter().map(|r| r.0).fold(0.0, f64::max);
    let t = rows.iter().map(|r| r.1).fold(0.0, f64::max);
    Ok(format!("50 runs, basic flips ≤ {b:.3}·(t+f+2Δr), Δ'=3Δ-1 flips ≤ {t:.3}·3(t+f)"))
}

fn game_max_distance(seq: &UpdateSequence, mode: GameMode, touch_edges: bool) -> Result<u32, String> {
    let mut game = FlipGame::new(mode);
    game.touch_on_edge_updates = touch_edges;
    game.vg.g.set_distance_tracking(true);
    for (i, op) in seq.iter().enumerate() {
        game.op(op).map_err(|e| e.at(i).to_string())?;
    }
    Ok(game.graph().metrics().max_flip_distance().unwrap_or(0))
}

fn ac7_locality() -> Outcome {
    let mut far = Vec::new();
    for k in 6..=14 {
        let gadget = gen_farflip_chain(1 << k).map_err(|e| e.to_string())?;
        let bf = Orienter::new(Algorithm::Bf, OrientConfig::bf(2)).unwrap();
        let mut g = build(&gadget.setup, &bf)?;
        let f0 = g.metrics().f;
        g.set_distance_tracking(true);
        bf.apply(&mut g, &gadget.trigger).map_err(|e| e.to_string())?;
        let flips = g.metrics().f - f0;
        let dist = g.metrics().max_flip_distance().unwrap_or(0);
        let l = log2(gadget.n);
        ensure(flips as f64 >= l, || format!("n={}: {flips} flips < log2 n", gadget.n))?;
        ensure(dist as f64 >= l / 2.0, || format!("n={}: max distance {dist} < log2(n)/2", gadget.n))?;
        far.push(dist);
        for mode in [GameMode::Basic, GameMode::Threshold(2), GameMode::Threshold(5)] {
            let d = game_max_distance(&gadget.sequence(), mode, true)?;
            ensure(d <= 1, || format!("n={}: game {mode:?} flipped at distance {d}", gadget.n))?;
        }
    }
    let games: Vec<Result<u32, String>> = game_sequences()
        .into_par_iter()
        .take(20)
        .flat_map_iter(|(_, seq)| {
            [GameMode::Basic, GameMode::Threshold(23)]
                .into_iter()
                .flat_map(move |mode| [false, true].map(|touch| (mode, touch)))
                .map(move |(mode, touch)| game_max_distance(&seq, mode, touch))
        })
        .collect();
    let games = all_ok(games)?;
    let worst = games.iter().copied().max().unwrap_or(0);
    ensure(worst <= 1, || format!("game flipped at distance {worst}"))?;
    Ok(format!(
        "BF max flip distances {far:?} on n=2^6..2^14; {} game runs, max distance {worst}",
        games.len() + 27
    ))
}

fn ac8_matching() -> Outcome {
    let alpha = 2u32;
    let engines: Vec<(&str, u64)> = vec![("local", 0), ("orient", 0), ("local", 1), ("orient", 1)];
    let runs: Vec<Result<u64, String>> = engines
        .into_par_iter()
        .map(|(kind, seed)| {
            let seq = gen_random_with(&RandomConfig::new(alpha, 400, 96_000, 8000 + seed).deletes(0.35).hubs(0.5).churn(0.02));
            let engine = if kind == "local" {
                MatchEngine::Game(GameMode::Basic)
            } else {
                MatchEngine::Orient(Orienter::new(Algorithm::Bf, OrientConfig::bf(4 * alpha)).unwrap())
            };
            let mut m = Matching::new(engine);
            for (i, op) in seq.iter().enumerate() {
                m.op(op).map_err(|e| format!("{kind}: {}", e.at(i)))?;
                check_maximal_matching(&m.g, &m.matching()).map_err(|v| format!("{kind} seed {seed} op {i}: {v}"))?;
            }
            m.check_free_in().map_err(|e| format!("{kind}: {e}"))?;
            Ok(seq.len() as u64)
        })
        .collect();
    let ops = all_ok(runs)?;
    ensure(ops.iter().all(|&n| n >= 100_000), || format!("runs too short: {ops:?}"))?;

    let rows = bench::run_suite("matching", false).map_err(|e| e.to_string())?;
    let local: Vec<_> = rows.iter().filter(|r| r.algo == "matching-local").collect();
    let base = local[0].extra;
    let ratios: Vec<f64> = local.iter().map(|r| r.extra / base).collect();
    ensure(ratios.iter().all(|&r| (0.1..=10.0).contains(&r)), || {
        format!("scaled work ratios {ratios:?} leave [0.1, 10]")
    })?;
    let shown: Vec<String> = ratios.iter().map(|r| format!("{r:.2}")).collect();
    Ok(format!(
        "4 runs, {} ops each checked for maximality; scaled work vs n=2^10: [{}]",
        ops.iter().min().unwrap(),
        shown.join(", ")
    ))
}

fn ac9_adjacency() -> Outcome {
    let alpha = 2u32;
    let n = 4096;
    let dp = (4.0 * alpha as f64 * log2(n)).ceil() as u32;
    let seq = gen_random_with(&RandomConfig::new(alpha, n, 60_000, 9000).deletes(0.2).hubs(0.97).queries(0.7, 0.0));
    ensure(seq.len() >= 100_000, || format!("only {} ops", seq.len()))?;
    let mut adj = AdjacencyStructure::new(dp);
    let mut reference = BTreeSet::new();
    let mut answered = 0u64;
    for (i, op) in seq.iter().enumerate() {
        let got = adj.op(op).map_err(|e| e.at(i).to_string())?;
        let key = |u: VertexId, v: VertexId| (u.min(v), u.max(v));
        match *op {
            UpdateOp::InsertEdge(u, v) => {
                reference.insert(key(u, v));
            }
            UpdateOp::DeleteEdge(u, v) => {
                reference.remove(&key(u, v));
            }
            UpdateOp::DeleteVertex(x) => reference.retain(|&(a, b)| a != x && b != x),
            UpdateOp::Query(u, Some(v)) => {
                answered += 1;
                let truth = reference.contains(&key(u, v));
                ensure(got == Some(truth), || format!("op {i}: {op} answered {got:?}"))?;
            }
            _ => {}
        }
    }
    adj.check_index().map_err(|e| e.to_string())?;
    let flips = adj.graph().metrics().f;
    let t = adj.graph().metrics().t;
    let mut bounds = Vec::new();
    for delta in [4 * alpha, (dp + 1) / 3] {
        let m = run_sequence(Algorithm::Bf, &seq, &OrientConfig::bf(delta)).map_err(|e| e.to_string())?;
        let bound = (t + m.f) as f64 * (dp + 1) as f64 / (dp + 1 - 2 * delta) as f64;
        ensure(flips as f64 <= bound, || format!("{flips} flips > {bound:.0} (Δ={delta})"))?;
        bounds.push(format!("{:.4}", bound / seq.len() as f64));
    }
    Ok(format!(
        "{} ops, {answered} queries exact; flips/op {:.4} ≤ bounds/op [{}] at Δ'={dp}",
        seq.len(),
        flips as f64 / seq.len() as f64,
        bounds.join(", ")
    ))
}

fn ac10_distributed_cascades() -> Outcome {
    let alpha = 2u32;
    let reports: Vec<Result<Vec<CascadeReport>, String>> = (0..4u64)
        .into_par_iter()
        .map(|seed| {
            let seq = gen_random_with(&RandomConfig::new(alpha, 300, 6000, 10_000 + seed).deletes(0.4).hubs(0.7));
            let mut sim = DistSim::new(DistConfig::new(alpha)).map_err(|e| e.to_string())?;
            sim.run(&seq).map_err(|e| format!("seed {seed}: {e}"))?;
            Ok(sim.cascades.clone())
        })
        .collect();
    let cascades: Vec<CascadeReport> = all_ok(reports)?.into_iter().flatten().collect();
    ensure(cascades.len() >= 50, || format!("only {} cascades", cascades.len()))?;
    let mut worst_rounds = 0i64;
    for (k, c) in cascades.iter().enumerate() {
        let limit = log2(c.nodes).ceil() as u32 + 2;
        ensure(c.rounds <= limit, || format!("cascade {k}: {} rounds > {limit}", c.rounds))?;
        ensure(c.halves_each_round(), || format!("cascade {k}: per-round {:?}", c.per_round))?;
        ensure(c.internal_final_max <= 5 * alpha as usize, || {
            format!("cascade {k}: internal final outdegree {}", c.internal_final_max)
        })?;
        let budget = 4 * c.edges as u64 + 4 * c.nodes as u64;
        ensure(c.messages <= budget, || format!("cascade {k}: {} messages > {budget}", c.messages))?;
        worst_rounds = worst_rounds.max(c.rounds as i64 - limit as i64);
    }
    Ok(format!(
        "{} cascades, rounds - (⌈log2 N⌉+2) ≤ {worst_rounds}, colored edges at least halve each round",
        cascades.len()
    ))
}

fn ac11_memory() -> Outcome {
    let alpha = 2u32;
    let runs: Vec<Result<(usize, usize, u64), String>> = [false, true]
        .into_par_iter()
        .map(|matching| {
            let seq = gen_random_with(&RandomConfig::new(alpha, 512, 10_000, 11_000).deletes(0.3).hubs(0.6).churn(0.01));
            let cfg = DistConfig::new(alpha).matching(matching).audit(true);
            let budget = cfg.mem_budget();
            let mut sim = DistSim::new(cfg).map_err(|e| e.to_string())?;
            sim.run(&seq).map_err(|e| e.to_string())?;
            sim.check_representation().map_err(|e| e.to_string())?;
            ensure(sim.peak_mem <= budget, || format!("peak {} > {budget}", sim.peak_mem))?;
            Ok((sim.peak_mem, budget, sim.graph().metrics().t))
        })
        .collect();
    let runs = all_ok(runs)?;
    ensure(runs.iter().all(|r| r.2 >= 10_000), || "fewer than 10^4 updates".into())?;
    Ok(format!(
        "peak memory {:?} entries ≤ 8(Δ+2) = {}; chains rebuilt exactly after every op",
        runs.iter().map(|r| r.0).collect::<Vec<_>>(),
        runs[0].1
    ))
}

/// Messages/op over `α + log2 n`, locked from the first calibration run
/// (0.32 at n = 2^10 with matching) with headroom for the trend.
const LOCKED_MSG_CONSTANT: f64 = 0.40;

fn ac12_distributed_trend() -> Outcome {
    let rows = bench::run_suite("distributed", false).map_err(|e| e.to_string())?;
    let mut shown = Vec::new();
    for r in &rows {
        ensure(r.extra <= LOCKED_MSG_CONSTANT, || {
            format!("n={} {}: {:.3} > c = {LOCKED_MSG_CONSTANT}", r.n, r.algo, r.extra)
        })?;
        if r.algo == "matching-dist" {
            shown.push(format!("{:.3}", r.extra));
        }
    }
    Ok(format!(
        "msgs/op/(α+log2 n) with matching over n=2^10..2^14: [{}] ≤ {LOCKED_MSG_CONSTANT}",
        shown.join(", ")
    ))
}

fn ac13_oracles() -> Outcome {
    let runs: Vec<Result<(u32, u32, u32), String>> = (0..500u64)
        .into_par_iter()
        .map(|s| {
            let alpha = 1 + (s % 3) as u32;
            let n = 3 + (s % 8) as usize;
            let seq = gen_random_with(&RandomConfig::new(alpha, n, 4 * n, 13_000 + s).deletes(0.25));
            let mut g = OrientedGraph::new();
            for op in seq.iter() {
                g.apply_raw(op, InsertRule::ArbitraryFixed).map_err(|e| e.to_string())?;
            }
            let (arb, cert) = arboricity_bruteforce(&g, 10).map_err(|e| e.to_string())?;
            let (opt, witness) = min_max_outdegree(&g);
            ensure(opt <= arb, || format!("graph {s}: Δ* {opt} > arboricity {arb}"))?;
            ensure(arb <= alpha, || format!("graph {s}: arboricity {arb} breaks promise {alpha}"))?;
            if let Some(c) = cert {
                ensure(c.recount(&g) == c.edges_inside, || format!("graph {s}: certificate recount"))?;
            }
            let mut a: Vec<_> = g.edges().map(|(u, v)| (u.min(v), u.max(v))).collect();
            let mut b: Vec<_> = witness.edges().map(|(u, v)| (u.min(v), u.max(v))).collect();
            a.sort();
            b.sort();
            ensure(a == b && witness.max_outdegree() as u32 == opt, || format!("graph {s}: bad witness"))?;
            ensure(opt == 0 || orient_within(&g, opt - 1).is_none(), || format!("graph {s}: Δ* not minimal"))?;

            let (mut ok, mut refused) = (0u32, 0u32);
            let mut configs: Vec<(Algorithm, OrientConfig)> = Vec::new();
            for d in 1..=6 {
                configs.push((Algorithm::Bf, OrientConfig::bf(d)));
                configs.push((Algorithm::BfLargest, OrientConfig::bf(d).with_order(CascadeOrder::LargestFirst)));
            }
            for d in 5 * alpha..=7 * alpha {
                configs.push((Algorithm::AntiReset, OrientConfig::antireset(d, alpha)));
            }
            for (algo, cfg) in configs {
                let mut h = OrientedGraph::new();
                match run_sequence_with(algo, &seq, &cfg, &mut h, |_, _, _| Ok(())) {
                    Ok(_) => {
                        ensure(cfg.delta >= opt, || format!("graph {s}: {algo} succeeded at Δ={} < Δ*={opt}", cfg.delta))?;
                        ensure(h.max_outdegree() as u32 >= opt, || {
                            format!("graph {s}: {algo} steady max {} < Δ* {opt}", h.max_outdegree())
                        })?;
                        ok += 1;
                    }
                    Err(e) if matches!(e.root(), Error::Watchdog { .. }) => refused += 1,
                    Err(e) => return Err(format!("graph {s}: {algo} Δ={}: {e}", cfg.delta)),
                }
            }
            Ok((ok, refused, opt))
        })
        .collect();
    let runs = all_ok(runs)?;
    let ok: u32 = runs.iter().map(|r| r.0).sum();
    let refused: u32 = runs.iter().map(|r| r.1).sum();
    Ok(format!("500 graphs ≤ 10 vertices, {ok} algorithm runs consistent with Δ*, {refused} watchdog refusals"))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 13] = [
        ("forest safety", ac1_forest_safety),
        ("blowup reproduction", ac2_blowup),
        ("largest-first sandwich", ac3_largest_first),
        ("anti-reset ceilings and audit", ac4_antireset_audit),
        ("flipping-game competitiveness", ac5_competitive),
        ("token bounds", ac6_token_bounds),
        ("locality", ac7_locality),
        ("matching correctness", ac8_matching),
        ("adjacency", ac9_adjacency),
        ("distributed anti-reset", ac10_distributed_cascades),
        ("memory ceiling", ac11_memory),
        ("distributed matching trend", ac12_distributed_trend),
        ("oracle self-consistency", ac13_oracles),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (k, (name, f)) in criteria.iter().enumerate() {
        let id = format!("AC{}", k + 1);
        if !filter.is_empty() && !filter.iter().any(|x| x == &id) {
            continue;
        }
        let start = Instant::now();
        let out = f();
        let secs = start.elapsed().as_secs_f64();
        match out {
            Ok(detail) => println!("{id:<5} PASS  {name} ({secs:.1}s): {detail}"),
            Err(why) => {
                failed += 1;
                println!("{id:<5} FAIL  {name} ({secs:.1}s): {why}");
            }
        }
    }
    if failed > 0 {
        eprintln!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
