//! The rank oracle against the closed-form predictions.

use lindim::{
    apolarity_dimension, cycle_multiplicity_probe, effectivity, froberg_prediction,
    interpolation_dimension, k_value, linear_expected_dimension, n3_condition, ContainmentPolicy,
    Effectivity, Error, LinearSystem, MultiIndex, OracleConfig,
};
use num_bigint::BigInt;
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random(rng: &mut ChaCha8Rng, n: u32, d: u32, s: usize) -> LinearSystem {
    LinearSystem::new(
        n,
        d,
        (0..s).map(|_| rng.random_range(1..=d)).collect::<Vec<_>>(),
    )
    .unwrap()
}

#[test]
fn probe_recovers_k_with_few_points() {
    let cfg = OracleConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let mut checked = 0;
    while checked < 120 {
        let n = rng.random_range(1..=3u32);
        let d = rng.random_range(1..=6u32);
        let s = rng.random_range(1..=n as usize + 2);
        let l = random(&mut rng, n, d, s);
        if effectivity(&l) != Effectivity::Nonempty {
            continue;
        }
        let size = rng.random_range(1..=l.s().min(n as usize));
        let mut idx = sample(&mut rng, l.s(), size).into_vec();
        idx.sort_unstable();
        let idx = MultiIndex::new(idx, l.s()).unwrap();
        let k = k_value(&l, &idx).unwrap();
        assert_eq!(
            cycle_multiplicity_probe(&l, &idx, &cfg).unwrap() as u64,
            k,
            "{l} {idx:?}"
        );
        checked += 1;
    }
}

#[test]
fn probe_on_empty_system() {
    let l = LinearSystem::parse(2, 2, "2x3").unwrap();
    let idx = MultiIndex::from_labels(&[1], 3).unwrap();
    let err = cycle_multiplicity_probe(&l, &idx, &OracleConfig::default()).unwrap_err();
    assert!(matches!(err, Error::EmptySystem { .. }), "{err:?}");
}

#[test]
fn froberg_matches_apolarity_where_proven() {
    let cfg = OracleConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    let (mut few, mut many) = (0, 0);
    while few < 80 || many < 40 {
        let n = rng.random_range(1..=4u32);
        let d = rng.random_range(2..=7u32);
        let s = rng.random_range(0..=n as usize + 6);
        let l = random(&mut rng, n, d, s);
        let in_regime = if l.s() <= n as usize + 2 {
            few += 1;
            true
        } else if n3_condition(&l).satisfied {
            many += 1;
            true
        } else {
            false
        };
        if !in_regime {
            continue;
        }
        let a = apolarity_dimension(&l, &cfg).unwrap();
        assert_eq!(froberg_prediction(&l).unwrap(), BigInt::from(a.dim), "{l}");
        if a.dim >= 0 {
            assert_eq!(
                linear_expected_dimension(&l, ContainmentPolicy::default()),
                BigInt::from(a.dim)
            );
        }
    }
}

#[test]
fn seeds_reproduce_and_vary() {
    let l = LinearSystem::parse(3, 5, "3x4,2").unwrap();
    let a = interpolation_dimension(&l, &OracleConfig::with_seed(1)).unwrap();
    let b = interpolation_dimension(&l, &OracleConfig::with_seed(1)).unwrap();
    let c = interpolation_dimension(&l, &OracleConfig::with_seed(2)).unwrap();
    assert_eq!(a, b);
    assert_ne!(a.primes, c.primes);
    assert_eq!(a.dim, c.dim);
    assert_eq!(a.per_trial.len(), 3);
    assert!(a.agreed && !a.retried);
}

#[test]
fn config_errors() {
    let l = LinearSystem::parse(2, 10, "3").unwrap();
    let small = OracleConfig {
        prime_bits: 4,
        ..OracleConfig::default()
    };
    assert!(matches!(
        interpolation_dimension(&l, &small),
        Err(Error::PrimeTooSmall {
            degree: 10,
            bits: 4
        })
    ));
    let none = OracleConfig {
        trials: 0,
        ..OracleConfig::default()
    };
    assert!(interpolation_dimension(&l, &none).is_err());
    assert!(apolarity_dimension(
        &LinearSystem::parse(2, 2, "3").unwrap(),
        &OracleConfig::default()
    )
    .is_err());
}
