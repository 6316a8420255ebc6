mod common;

use common::{random_inputs, random_smooth_signal};
use dynavg::{InputSet, Signal};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

proptest! {
    #[test]
    fn analytic_derivative_matches_central_difference(seed in any::<u64>(), t in 0.0f64..20.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = random_smooth_signal(&mut rng);
        let h = 1e-5;
        let fd = (s.value(t + h) - s.value(t - h)) / (2.0 * h);
        let d = s.derivative(t);
        prop_assert!((d - fd).abs() <= 1e-5 * (1.0 + d.abs()), "{s:?} at {t}: {d} vs {fd}");
    }

    #[test]
    fn gamma_ignores_common_signal(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let base = random_inputs(&mut rng, 5);
        let common = random_smooth_signal(&mut rng);
        let shifted = InputSet::new(
            base.signals.iter().map(|s| Signal::sum(vec![s.clone(), common.clone()])).collect(),
        ).unwrap();
        let grid: Vec<f64> = (0..400).map(|k| k as f64 * 0.05).collect();
        let g0 = base.disagreement_gamma(&grid).unwrap().gamma;
        let g1 = shifted.disagreement_gamma(&grid).unwrap().gamma;
        prop_assert!((g0 - g1).abs() <= 1e-9 * (1.0 + g0));
    }

    #[test]
    fn average_is_permutation_invariant(seed in any::<u64>(), t in 0.0f64..20.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let base = random_inputs(&mut rng, 6);
        let mut signals = base.signals.clone();
        signals.shuffle(&mut rng);
        let perm = InputSet::new(signals).unwrap();
        let (a0, d0) = base.network_average(t).unwrap();
        let (a1, d1) = perm.network_average(t).unwrap();
        prop_assert!((a0 - a1).abs() <= 1e-12 * (1.0 + a0.abs()));
        prop_assert!((d0 - d1).abs() <= 1e-12 * (1.0 + d0.abs()));
    }
}
