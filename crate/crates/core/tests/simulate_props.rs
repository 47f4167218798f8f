mod common;

use linprobe_core::moments::moment_report;
use linprobe_core::polyalg::{Integer, Rational};
use linprobe_core::simulate::{
    exhaustive_distribution, exhaustive_distribution_limited, lp_insert, monte_carlo, rotation_symmetry_check,
    rotation_symmetry_check_all, HashSequence, SimError, UniformSource,
};
use proptest::prelude::*;

fn sequence(max_m: usize) -> impl Strategy<Value = HashSequence> {
    (2..=max_m)
        .prop_flat_map(|m| (Just(m), prop::collection::vec(0..m, 0..m)))
        .prop_map(|(m, values)| HashSequence::new(m, values).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn insertion_places_every_item(seq in sequence(16)) {
        let m = seq.m();
        let outcome = lp_insert(&seq).unwrap();
        let mut seen = vec![false; m];
        let mut d = 0u64;
        for (&q, &h) in outcome.positions.iter().zip(seq.values()) {
            prop_assert!(q < m && !seen[q]);
            seen[q] = true;
            d += ((q + m - h) % m) as u64;
        }
        prop_assert_eq!(outcome.total_displacement, d);
        prop_assert_eq!(outcome.confined, !seen[0]);
    }

    #[test]
    fn rotation_orbits_sampled(m in 2usize..=12, n_frac in 0.0f64..1.0, seed in any::<u64>()) {
        let n = ((m as f64) * n_frac) as usize;
        rotation_symmetry_check(m, n.min(m - 1), 50, seed).unwrap();
    }

    #[test]
    fn uniform_draws_stay_in_range(bound in 1usize..=1000, seed in any::<u64>()) {
        let mut source = UniformSource::new(seed);
        for _ in 0..100 {
            prop_assert!(source.below(bound) < bound);
        }
    }
}

#[test]
fn enumeration_matches_reference() {
    for m in 2..=7 {
        for n in 1..m {
            for confined in [false, true] {
                let reference = common::enumerate_displacements(m, n, confined);
                let got = exhaustive_distribution(m, n, confined).unwrap();
                assert_eq!(got.histogram, reference, "m = {m}, n = {n}, confined = {confined}");
                if !confined {
                    assert_eq!(got.trials, (m as u64).pow(n as u32));
                }
            }
        }
    }
}

#[test]
fn rotation_orbits_exhaustive() {
    for m in 2..=5 {
        for n in 0..m {
            rotation_symmetry_check_all(m, n).unwrap();
        }
    }
}

#[test]
fn monte_carlo_is_reproducible() {
    let a = monte_carlo(9, 5, 5000, 3).unwrap();
    assert_eq!(a, monte_carlo(9, 5, 5000, 3).unwrap());
    assert_ne!(a.histogram, monte_carlo(9, 5, 5000, 4).unwrap().histogram);
    assert_eq!(a.histogram.values().sum::<u64>(), 5000);
    assert_eq!(a.seed, Some(3));
}

#[test]
fn monte_carlo_mean_converges() {
    let trials = 200_000u64;
    for (m, n) in [(5, 2), (8, 6), (12, 11), (20, 10)] {
        let report = moment_report(m, n).unwrap();
        for seed in 1..=3 {
            let sample = monte_carlo(m, n, trials, seed).unwrap();
            let dev = sample.mean() - &report.mean_d;
            let bound = Rational::from_integer(Integer::from(16)) * &report.variance_d;
            assert!(
                &dev * &dev * Rational::from_integer(trials.into()) <= bound,
                "m = {m}, n = {n}, seed = {seed}"
            );
        }
    }
}

#[test]
fn guards() {
    assert!(matches!(
        exhaustive_distribution(3, 3, false),
        Err(SimError::TableFull { .. })
    ));
    assert!(matches!(exhaustive_distribution(3, 0, false), Err(SimError::NoItems)));
    assert!(matches!(
        exhaustive_distribution(20, 10, false),
        Err(SimError::TooManySequences { .. })
    ));
    assert!(matches!(
        exhaustive_distribution_limited(5, 3, false, 100),
        Err(SimError::TooManySequences { .. })
    ));
    assert!(matches!(monte_carlo(5, 3, 0, 1), Err(SimError::NoTrials)));
    assert!(HashSequence::new(4, vec![0, 4]).is_err());
}
