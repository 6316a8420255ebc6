mod common;

use common::{random_balanced_sc, random_digraph};
use dynavg::switching::{case1_schedule, union_digraph, validate_admissible, Repeat, SwitchingSchedule};
use dynavg::WeightedDigraph;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn laplacian_times_ones(g: &WeightedDigraph) -> Vec<f64> {
    let mut out = vec![f64::NAN; g.n()];
    g.laplacian().apply(&vec![1.0; g.n()], &mut out);
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn laplacian_annihilates_ones(seed in any::<u64>(), n in 1usize..=8, p in 0.0f64..1.0) {
        let g = random_digraph(&mut rng(seed), n, p);
        for s in laplacian_times_ones(&g) {
            prop_assert_eq!(s, 0.0);
        }
    }

    #[test]
    fn balanced_graphs_have_zero_column_sums(seed in any::<u64>(), n in 2usize..=10) {
        let g = random_balanced_sc(&mut rng(seed), n);
        prop_assert!(g.is_weight_balanced(1e-10));
        let l = g.laplacian();
        let col = l.matrix().column_iter().map(|c| c.sum().abs()).fold(0.0, f64::max);
        prop_assert!(col <= 1e-10);
        let sp = g.spectral_summary().unwrap();
        prop_assert!(sp.eigenvalues_sym[0].abs() <= 1e-9);
    }

    #[test]
    fn balanced_strongly_connected_has_simple_zero(seed in any::<u64>(), n in 2usize..=10) {
        let g = random_balanced_sc(&mut rng(seed), n);
        let sp = g.spectral_summary().unwrap();
        let zeros = sp.eigenvalues_sym.iter().filter(|e| e.abs() <= 1e-9).count();
        prop_assert_eq!(zeros, 1);
        prop_assert!(sp.lambda_hat_2 > 0.0);
        prop_assert!(sp.re_lambda_2 > 0.0);
    }

    #[test]
    fn union_is_commutative_associative_idempotent(seed in any::<u64>(), n in 1usize..=6) {
        let mut r = rng(seed);
        let a = random_digraph(&mut r, n, 0.4);
        let b = random_digraph(&mut r, n, 0.4);
        let c = random_digraph(&mut r, n, 0.4);
        let ab = union_digraph(&[&a, &b]).unwrap();
        prop_assert_eq!(&ab, &union_digraph(&[&b, &a]).unwrap());
        let left = union_digraph(&[&ab, &c]).unwrap();
        let bc = union_digraph(&[&b, &c]).unwrap();
        prop_assert_eq!(&left, &union_digraph(&[&a, &bc]).unwrap());
        prop_assert_eq!(&union_digraph(&[&a, &a]).unwrap(), &a);
    }

    #[test]
    fn no_chattering(seed in any::<u64>(), dwells in prop::collection::vec(1u32..=6, 1..6)) {
        let mut r = rng(seed);
        let graphs: Vec<_> = (0..dwells.len()).map(|_| random_digraph(&mut r, 4, 0.5)).collect();
        let mut segments = Vec::new();
        let mut t = 0.0;
        for (i, d) in dwells.iter().enumerate() {
            segments.push((t, i));
            t += f64::from(*d) * 0.5;
        }
        let sched = SwitchingSchedule::new(graphs, segments, Repeat::Cyclic(t), None).unwrap();
        let horizon = 30.0;
        let h = 0.01;
        let steps = (horizon / h) as usize;
        let mut changes = 0;
        let mut prev = sched.graph_at(0.0).unwrap();
        for k in 1..steps {
            let idx = sched.graph_at(k as f64 * h).unwrap();
            if idx != prev {
                changes += 1;
                prev = idx;
            }
        }
        let boundaries = sched.switch_times(horizon).iter().filter(|s| **s > 0.0 && **s <= horizon).count();
        prop_assert!(changes <= boundaries);
        prop_assert!(boundaries as f64 <= horizon / sched.dwell_min() + 1e-9);
    }
}

#[test]
fn cyclic_case1_windows_are_jointly_connected() {
    let report = validate_admissible(&case1_schedule(), 40.0, 1e-10).unwrap();
    assert!(report.admissible);
    for k in 0..5 {
        let (a, b) = (8.0 * k as f64, 8.0 * (k + 1) as f64);
        let sched = case1_schedule();
        let idx: Vec<usize> = sched
            .segment_spans(40.0)
            .into_iter()
            .filter(|(s, e, _)| *s >= a && *e <= b)
            .map(|(_, _, i)| i)
            .collect();
        let gs: Vec<_> = idx.iter().map(|&i| sched.graph(i)).collect();
        assert!(union_digraph(&gs).unwrap().is_strongly_connected(), "window [{a}, {b})");
    }
}
