use proptest::prelude::*;

use orientlab::generators::{gen_random, gen_random_with, RandomConfig};
use orientlab::oracles::min_max_outdegree;
use orientlab::orient::{run_sequence, run_sequence_with, Algorithm, Cascade, CascadeOrder, OrientConfig};
use orientlab::{InsertRule, OrientedGraph, UpdateSequence};

fn order(k: u8) -> CascadeOrder {
    [CascadeOrder::Fifo, CascadeOrder::Lifo, CascadeOrder::LargestFirst][k as usize % 3]
}

fn rule(k: u8) -> InsertRule {
    [InsertRule::ArbitraryFixed, InsertRule::HigherOutdegree][k as usize % 2]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn reset_cascades_respect_the_threshold(
        alpha in 1u32..=3,
        extra in 0u32..4,
        seed in any::<u64>(),
        ord in 0u8..3,
        rl in 0u8..2,
        del in 0.0f64..0.6,
    ) {
        let delta = 2 * alpha + extra;
        let seq = gen_random_with(&RandomConfig::new(alpha, 80, 800, seed).deletes(del).hubs(0.5).churn(0.02));
        let cfg = OrientConfig::bf(delta).with_order(order(ord)).with_rule(rule(rl));
        let mut g = OrientedGraph::new();
        let m = run_sequence_with(Algorithm::Bf, &seq, &cfg, &mut g, |_, g, _| {
            assert!(g.max_outdegree() <= delta as usize);
            Ok(())
        }).unwrap();
        prop_assert!(g.check_invariants().is_ok());
        prop_assert_eq!(m.peak_outdeg_steady, g.metrics().peak_outdeg_steady);
        prop_assert!(m.peak_outdeg_steady <= delta as u64);
        prop_assert!(m.f >= m.resets * (delta as u64 + 1));
        let (opt, _) = min_max_outdegree(&g);
        prop_assert!(opt <= g.max_outdegree() as u32);
    }

    #[test]
    fn anti_reset_never_passes_delta_plus_one(
        alpha in 1u32..=3,
        extra in 0u32..3,
        seed in any::<u64>(),
        del in 0.0f64..0.6,
    ) {
        let delta = 5 * alpha + extra;
        let seq = gen_random_with(&RandomConfig::new(alpha, 80, 800, seed).deletes(del).hubs(0.7).churn(0.02));
        let cfg = OrientConfig::antireset(delta, alpha);
        let mut g = OrientedGraph::new();
        let m = run_sequence_with(Algorithm::AntiReset, &seq, &cfg, &mut g, |_, g, c| {
            assert!(g.max_outdegree() <= delta as usize);
            if let Cascade::AntiReset(ar) = c {
                assert!(ar.max_flips_per_edge <= 1);
                assert!(ar.flips >= ar.guaranteed_flips(alpha));
                assert!(ar.peak_outdeg <= delta as usize + 1);
            }
            Ok(())
        }).unwrap();
        prop_assert!(m.peak_outdeg <= delta as u64 + 1);
        prop_assert!(g.check_invariants().is_ok());
    }
}

#[test]
fn replay_is_deterministic_for_every_algorithm() {
    let seq = gen_random(2, 300, 4000, 21, 0.3);
    for algo in [Algorithm::Bf, Algorithm::BfLargest, Algorithm::AntiReset] {
        let cfg = OrientConfig::antireset(10, 2);
        assert_eq!(run_sequence(algo, &seq, &cfg).unwrap(), run_sequence(algo, &seq, &cfg).unwrap(), "{algo}");
    }
}

#[test]
fn sequence_text_round_trips_through_a_file() {
    let seq = gen_random_with(&RandomConfig::new(2, 50, 300, 4).deletes(0.2).churn(0.05).queries(0.2, 0.2).values(0.2));
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("s.txt");
    seq.write_file(&path).unwrap();
    assert_eq!(UpdateSequence::read_file(&path).unwrap(), seq);
}

#[test]
fn antireset_rejects_thresholds_below_five_alpha() {
    let seq = gen_random(2, 30, 100, 1, 0.0);
    assert!(run_sequence(Algorithm::AntiReset, &seq, &OrientConfig::antireset(9, 2)).is_err());
}
