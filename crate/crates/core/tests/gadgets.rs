use orientlab::generators::{gen_blowup_tree, gen_farflip_chain, gen_gi, gen_gi_alpha, gi_edges, Gadget};
use orientlab::orient::{Algorithm, CascadeOrder, OrientConfig, Orienter, ResetStepper};
use orientlab::{InsertRule, OrientedGraph, UpdateOp, VertexId};

fn build(g: &Gadget, orienter: &Orienter) -> OrientedGraph {
    let mut gr = OrientedGraph::new();
    for op in g.setup.iter() {
        orienter.apply(&mut gr, op).unwrap();
    }
    gr.reset_vertex_peaks();
    gr
}

#[test]
fn blowup_fifo_reaches_delta_pow() {
    let gadget = gen_blowup_tree(3, 7).unwrap();
    let o = Orienter::new(Algorithm::Bf, OrientConfig::bf(3)).unwrap();
    let mut g = build(&gadget, &o);
    o.apply(&mut g, &gadget.trigger).unwrap();
    let sink = gadget.watch.unwrap();
    assert_eq!(g.vertex_peak(sink), 729);
    assert!(g.max_outdegree() <= 3);
}

#[test]
fn blowup_small_case() {
    let gadget = gen_blowup_tree(2, 2).unwrap();
    let o = Orienter::new(Algorithm::Bf, OrientConfig::bf(2)).unwrap();
    let mut g = build(&gadget, &o);
    o.apply(&mut g, &gadget.trigger).unwrap();
    assert_eq!(g.vertex_peak(gadget.watch.unwrap()), 2);
}

/// Degree of each watched vertex at its first reset, stepping at most `cap` resets.
fn first_reset_degrees(
    g: &mut OrientedGraph,
    trigger_tail: VertexId,
    cfg: &OrientConfig,
    watched: &[VertexId],
    cap: usize,
) -> Vec<Option<usize>> {
    let mut seen = vec![None; watched.len()];
    let mut st = ResetStepper::new(g, &[trigger_tail], cfg);
    for _ in 0..cap {
        let Some((x, d)) = st.step() else { break };
        if let Some(k) = watched.iter().position(|&w| w == x) {
            seen[k].get_or_insert(d);
        }
        if seen.iter().all(Option::is_some) {
            break;
        }
    }
    seen
}

fn tail_of(op: &UpdateOp) -> VertexId {
    match *op {
        UpdateOp::InsertDirected(a, _) => a,
        _ => panic!("trigger must be directed"),
    }
}

#[test]
fn gi_largest_first_climbs_to_i() {
    for i in 3..=10u32 {
        let gadget = gen_gi(i).unwrap();
        let cfg = OrientConfig::bf(2)
            .with_order(CascadeOrder::LargestFirst)
            .with_rule(InsertRule::HigherOutdegree);
        let o = Orienter::new(Algorithm::BfLargest, cfg).unwrap();
        let mut g = build(&gadget, &o);
        g.apply_raw(&gadget.trigger, cfg.insert_rule).unwrap();
        let (_, cycles) = gi_edges(i).unwrap();
        let firsts = first_reset_degrees(&mut g, tail_of(&gadget.trigger), &o.cfg, &cycles[1], 1 << 22);
        assert!(firsts.iter().any(|d| *d == Some(i as usize)), "i={i}: {firsts:?}");
    }
}

#[test]
fn gi_alpha_hub_climbs_to_multiple_of_alpha() {
    for i in 4..=7u32 {
        let alpha = 2;
        let gadget = gen_gi_alpha(i, alpha).unwrap();
        let cfg = OrientConfig::bf(2 * alpha)
            .with_order(CascadeOrder::LargestFirst)
            .with_rule(InsertRule::HigherOutdegree);
        let o = Orienter::new(Algorithm::BfLargest, cfg).unwrap();
        let mut g = build(&gadget, &o);
        g.apply_raw(&gadget.trigger, cfg.insert_rule).unwrap();
        let a = gadget.watch.unwrap();
        let firsts = first_reset_degrees(&mut g, tail_of(&gadget.trigger), &o.cfg, &[a], 1 << 22);
        assert_eq!(firsts, vec![Some(((i - 1) * alpha) as usize)], "i={i}");
    }
}

#[test]
fn farflip_bf_flips_far_from_the_update() {
    for n in [256usize, 1024, 4096] {
        let gadget = gen_farflip_chain(n).unwrap();
        let o = Orienter::new(Algorithm::Bf, OrientConfig::bf(2)).unwrap();
        let mut g = build(&gadget, &o);
        g.set_distance_tracking(true);
        let f0 = g.metrics().f;
        o.apply(&mut g, &gadget.trigger).unwrap();
        let log_n = (n as f64).log2();
        let flips = g.metrics().f - f0;
        let far = g.metrics().max_flip_distance().unwrap();
        assert!(flips as f64 >= log_n, "n={n}: {flips} flips");
        assert!(far as f64 >= log_n / 2.0, "n={n}: max distance {far}");
        assert!(g.max_outdegree() <= 2);
    }
}
