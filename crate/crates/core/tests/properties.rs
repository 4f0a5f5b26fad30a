mod oracle;

use langdiv::diversity::{pseudo_period, sweep, Ensemble, SweepConfig};
use langdiv::languages::{canonical_key, delta_similar, is_subword_closed, max_word_difference, support};
use langdiv::machines::classical_analog;
use langdiv::matrix::{classify_stochastic, validate_unitary};
use langdiv::protocol::enumerate_language;
use langdiv::{
    Alphabet, ComplexSquareMatrix, EnumerationConfig, InitialState, Machine, MeasurementProtocol, QuantumGenerator,
    StochasticLanguage,
};
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::SeedableRng;

fn machine(seed: u64, complete: bool) -> QuantumGenerator {
    let (u, blocks) = oracle::random_qdg(&mut StdRng::seed_from_u64(seed), complete);
    let alphabet = Alphabet::new((0..blocks.len()).map(|y| y.to_string())).unwrap();
    QuantumGenerator::with_default_states(alphabet, ComplexSquareMatrix::from_rows(u).unwrap(), blocks).unwrap()
}

fn enumerate(m: &Machine, period: usize, initial: InitialState, len: usize) -> StochasticLanguage {
    let p = MeasurementProtocol::new(period, initial).unwrap();
    enumerate_language(m, &p, &EnumerationConfig::new(len)).unwrap()
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Order of a permutation given as `image[i]`.
fn permutation_order(image: &[usize]) -> usize {
    let mut order = 1;
    for start in 0..image.len() {
        let (mut i, mut len) = (image[start], 1);
        while i != start {
            i = image[i];
            len += 1;
        }
        order = order / gcd(order, len) * len;
    }
    order
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn powers_compose(seed in any::<u64>(), a in 0u64..7, b in 0u64..7) {
        let q = machine(seed, false);
        let u = q.unitary();
        let lhs = u.pow(a + b);
        let rhs = u.pow(a).mul(&u.pow(b));
        prop_assert!(lhs.max_deviation(&rhs) <= 1e-12);
        prop_assert!(validate_unitary(&lhs, 1e-9));
    }

    #[test]
    fn analog_is_doubly_stochastic(seed in any::<u64>()) {
        let q = machine(seed, false);
        let t = ComplexSquareMatrix::from_real(classical_analog(&q).transition());
        let class = classify_stochastic(&t, 1e-9).unwrap();
        prop_assert!(class.stochastic && class.doubly_stochastic);
    }

    #[test]
    fn languages_are_normalized_and_prefix_consistent(seed in any::<u64>(), p in 1usize..5, uniform in any::<bool>()) {
        let q = machine(seed, false);
        let initial = if uniform { InitialState::Uniform } else { InitialState::Basis(0) };
        let quantum = enumerate(&Machine::from(q.clone()), p, initial.clone(), 6);
        let classical = enumerate(&Machine::Classical(classical_analog(&q)), p, initial, 6);
        for lang in [quantum, classical] {
            prop_assert!(lang.normalization_error() <= 1e-9);
            prop_assert!(lang.prefix_consistency_error() <= 1e-9);
        }
    }

    #[test]
    fn global_phase_leaves_languages_unchanged(seed in any::<u64>(), phi in -3.2f64..3.2, p in 1usize..6) {
        let q = machine(seed, false);
        let shifted = q.with_global_phase(phi);
        for i in 0..q.dim() {
            let a = enumerate(&Machine::from(q.clone()), p, InitialState::Basis(i), 6);
            let b = enumerate(&Machine::from(shifted.clone()), p, InitialState::Basis(i), 6);
            prop_assert!(max_word_difference(&a, &b).unwrap() <= 1e-12);
        }
    }

    #[test]
    fn complete_measurement_matches_analog_at_period_one(seed in any::<u64>()) {
        let q = machine(seed, true);
        let analog = Machine::Classical(classical_analog(&q));
        let m = Machine::from(q.clone());
        for i in 0..q.dim() {
            let a = enumerate(&m, 1, InitialState::Basis(i), 6);
            let b = enumerate(&analog, 1, InitialState::Basis(i), 6);
            prop_assert!(delta_similar(&a, &b, 1e-9).unwrap());
        }
    }

    #[test]
    fn classical_uniform_supports_are_subword_closed(seed in any::<u64>(), p in 1usize..6) {
        let analog = Machine::Classical(classical_analog(&machine(seed, false)));
        let lang = enumerate(&analog, p, InitialState::Uniform, 6);
        prop_assert!(is_subword_closed(&support(&lang)));
    }

    #[test]
    fn formal_diversity_never_exceeds_stochastic(seed in any::<u64>(), ensemble in 0usize..4) {
        let m = Machine::from(machine(seed, false));
        let cfg = SweepConfig {
            last_period: 8,
            max_length: 5,
            ..SweepConfig::with_ensemble(Ensemble::ALL[ensemble])
        };
        let r = sweep(&m, &cfg).unwrap();
        prop_assert!(r.formal_diversity <= r.stochastic_diversity + 1e-12);
        prop_assert_eq!(r.entries.len(), r.entries.iter().filter(|e| e.class < r.class_count()).count());
    }

    #[test]
    fn permutation_pseudo_period_is_its_order(image in Just((0..5).collect::<Vec<usize>>()).prop_shuffle()) {
        let n = image.len();
        let rows = (0..n)
            .map(|i| (0..n).map(|j| oracle::c(if image[i] == j { 1.0 } else { 0.0 })).collect())
            .collect();
        let u = ComplexSquareMatrix::from_rows(rows).unwrap();
        prop_assert_eq!(pseudo_period(&u, 64, 1e-9).unwrap(), Some(permutation_order(&image)));
    }

    #[test]
    fn canonical_key_identifies_equal_languages(seed in any::<u64>(), p in 1usize..4) {
        let m = Machine::from(machine(seed, false));
        let a = enumerate(&m, p, InitialState::Uniform, 5);
        let b = enumerate(&m, p, InitialState::Uniform, 5);
        prop_assert_eq!(canonical_key(&a), canonical_key(&b));
        prop_assert!(delta_similar(&a, &b, 0.0).unwrap());
    }

    #[test]
    fn sweeps_are_deterministic(seed in any::<u64>()) {
        let m = Machine::from(machine(seed, false));
        let cfg = SweepConfig { last_period: 6, max_length: 5, ..SweepConfig::with_ensemble(Ensemble::BasisAndUniform) };
        let first = sweep(&m, &cfg).unwrap();
        let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let second = pool.install(|| sweep(&m, &cfg).unwrap());
        prop_assert_eq!(first, second);
    }
}
