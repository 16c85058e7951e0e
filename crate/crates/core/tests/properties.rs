use proptest::prelude::*;

use obliq_core::analysis::{expected_gain, max_leakage, OptimizerConfig};
use obliq_core::encodings::{build_family, mub_family, random_family, tensorized_family, EncodingFamily};
use obliq_core::gf::Gf2m;
use obliq_core::hardening::{xor_reconstruct, xor_split, GfMask};
use obliq_core::povm::{outcome_weight, outcome_weight_under, random_povm};
use obliq_core::protocol::{
    info_account, posterior, run_session, DatabaseState, MeasurementBasis, Strategy as Play,
};
use obliq_core::qmath::{
    entropy_bits, h2, haar_unitary, is_unitary, linf, linf_overlap, random_state, rotation_permutation,
    tensor_product, ComplexMatrix, ProbabilityDistribution, QuantumState, SeededRng, C64,
};

fn complex_matrix(rows: usize, cols: usize) -> impl Strategy<Value = ComplexMatrix> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), rows * cols)
        .prop_map(move |v| ComplexMatrix::from_iterator(rows, cols, v.into_iter().map(|(a, b)| C64::new(a, b))))
}

fn small_family(seed: u64, pick: u8) -> EncodingFamily {
    let mut rng = SeededRng::from_seed(seed);
    let basis = match pick % 4 {
        0 => mub_family(2, 1),
        1 => mub_family(3, 1),
        2 => random_family(2, 2, &mut rng),
        _ => tensorized_family(2, 1, 2, &mut rng),
    };
    build_family(basis.unwrap()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn tensor_product_is_associative(
        a in complex_matrix(2, 3),
        b in complex_matrix(3, 2),
        c in complex_matrix(2, 2),
    ) {
        let left = tensor_product(&tensor_product(&a, &b), &c);
        let right = tensor_product(&a, &tensor_product(&b, &c));
        prop_assert!(linf(&(left - right)) < 1e-15);
    }

    #[test]
    fn permutations_preserve_h2(seed in any::<u64>(), k in 2usize..4, m in 1usize..3, i in 0usize..3) {
        prop_assume!(i < k);
        let n = 1 << (k * m);
        let u = random_state(n, &mut SeededRng::from_seed(seed)).unwrap();
        let p = rotation_permutation(k, m, i).unwrap();
        let v = QuantumState::new(&p * u.amplitudes()).unwrap();
        prop_assert!((h2(&u) - h2(&v)).abs() < 1e-12);
    }

    #[test]
    fn rotations_compose(k in 2usize..5, m in 1usize..3, i in 0usize..4, j in 0usize..4) {
        prop_assume!(i < k && j < k && k * m <= 8);
        let pi = rotation_permutation(k, m, i).unwrap();
        let pj = rotation_permutation(k, m, j).unwrap();
        prop_assert_eq!(&pi * &pj, rotation_permutation(k, m, (i + j) % k).unwrap());
    }

    #[test]
    fn entropy_is_at_most_log_support(weights in prop::collection::vec(0.0f64..1.0, 1..40)) {
        let total: f64 = weights.iter().sum();
        prop_assume!(total > 1e-6);
        let p: Vec<f64> = weights.iter().map(|w| w / total).collect();
        let support = p.iter().filter(|&&x| x > 0.0).count();
        prop_assert!(entropy_bits(&p) <= (support as f64).log2() + 1e-9);
        let u = ProbabilityDistribution::uniform(support).unwrap();
        prop_assert!((entropy_bits(u.probs()) - (support as f64).log2()).abs() < 1e-9);
    }

    #[test]
    fn tensor_overlap_is_multiplicative(seed in any::<u64>()) {
        let mut rng = SeededRng::from_seed(seed);
        let (a1, b1) = (haar_unitary(2, &mut rng).unwrap(), haar_unitary(2, &mut rng).unwrap());
        let (a2, b2) = (haar_unitary(3, &mut rng).unwrap(), haar_unitary(3, &mut rng).unwrap());
        let whole = linf_overlap(&tensor_product(&a1, &a2), &tensor_product(&b1, &b2)).unwrap();
        let parts = linf(&(&a1 * &b1)) * linf(&(&a2 * &b2));
        prop_assert!((whole - parts).abs() < 1e-12);
    }

    #[test]
    fn haar_draws_are_unitary(seed in any::<u64>(), dim in 1usize..80) {
        let u = haar_unitary(dim, &mut SeededRng::from_seed(seed)).unwrap();
        prop_assert!(is_unitary(&u, 1e-9).unwrap());
    }

    #[test]
    fn posteriors_normalize_and_encodings_stay_equally_likely(seed in any::<u64>(), pick in any::<u8>()) {
        let family = small_family(seed, pick);
        let n = family.n();
        let basis = MeasurementBasis::custom(haar_unitary(n, &mut SeededRng::new(seed, 1)).unwrap()).unwrap();
        let prior = ProbabilityDistribution::uniform(n).unwrap();
        for j in 0..n {
            let row = basis.row(j).unwrap();
            let likelihoods: Vec<f64> = (0..family.k())
                .map(|i| family.row_times_encoder(&row, i).unwrap().iter().map(|z| z.norm_sqr()).sum::<f64>() / n as f64)
                .collect();
            for &l in &likelihoods {
                prop_assert!((l - 1.0 / n as f64).abs() < 1e-9);
            }
            for i in 0..family.k() {
                let post = posterior(&basis, &family, i, j, &prior).unwrap();
                prop_assert!((post.probs().iter().sum::<f64>() - 1.0).abs() < 1e-9);
            }
        }
        let acc = info_account(&basis, &family, &prior).unwrap();
        prop_assert!(acc.gain_expected <= acc.gain_worst + 1e-12);
    }

    #[test]
    fn transcripts_replay_their_posterior(seed in any::<u64>(), pick in any::<u8>(), d in any::<usize>(), guess in 0usize..2) {
        let family = small_family(seed, pick);
        let db = DatabaseState::from_index(family.k(), family.m(), d % family.n()).unwrap();
        let strategy = Play::InvertGuess { guess };
        let t = run_session(&db, &family, &strategy, &mut SeededRng::from_seed(seed)).unwrap();
        let again = t.recompute_posterior(&family, &strategy.basis(&family).unwrap()).unwrap();
        prop_assert_eq!(again, t.posterior.clone());
        let parsed = obliq_core::protocol::SessionTranscript::from_json(&t.to_json()).unwrap();
        prop_assert_eq!(parsed, t);
    }

    #[test]
    fn xor_shares_reconstruct(seed in any::<u64>(), m in 1usize..=8, r in 1usize..=8, x in any::<u32>(), y in any::<u32>()) {
        let mask = (1u32 << m) - 1;
        let (d0, d1) = (x & mask, y & mask);
        let shares = xor_split(d0, d1, m, r, &mut SeededRng::from_seed(seed)).unwrap();
        prop_assert_eq!(shares.rounds(), r);
        prop_assert!(shares.shares.iter().all(|&(a, b)| a <= mask && b <= mask));
        prop_assert_eq!(xor_reconstruct(&shares), (d0, d1));
    }

    #[test]
    fn field_axioms_hold(m in 1usize..=12, a in any::<u32>(), b in any::<u32>(), c in any::<u32>()) {
        let f = Gf2m::new(m).unwrap();
        let mask = (1u32 << m) - 1;
        let (a, b, c) = (a & mask, b & mask, c & mask);
        prop_assert_eq!(f.mul(a, f.mul(b, c)), f.mul(f.mul(a, b), c));
        prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        prop_assert_eq!(f.mul(a, b), f.mul(b, a));
        if a != 0 {
            prop_assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
        }
    }

    #[test]
    fn masks_invert(m in 1usize..=16, a in any::<u32>(), b in any::<u32>(), d in any::<u32>()) {
        let order = 1u32 << m;
        let a = 1 + a % (order - 1).max(1);
        prop_assume!(a < order);
        let mask = GfMask::new(m, a, b % order).unwrap();
        let d = d % order;
        prop_assert_eq!(mask.unmask(mask.mask(d).unwrap()).unwrap(), d);
    }

    #[test]
    fn povm_weights_do_not_depend_on_encoding(seed in any::<u64>(), pick in any::<u8>(), outcomes in 1usize..9) {
        let family = small_family(seed, pick);
        let povm = random_povm(family.n(), outcomes, &mut SeededRng::from_seed(seed)).unwrap();
        for j in 0..povm.len() {
            let s2 = outcome_weight(&povm, j).unwrap();
            for i in 0..family.k() {
                prop_assert!((outcome_weight_under(&povm, &family, i, j).unwrap() - s2).abs() < 1e-12);
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn optimizer_results_replay_and_respect_the_cap(seed in any::<u64>()) {
        let family = build_family(mub_family(2, 1).unwrap()).unwrap();
        let config = OptimizerConfig { restarts: 2, iterations: 200, refine_iterations: 20, ..OptimizerConfig::default() };
        let result = max_leakage(&family, &config, &SeededRng::from_seed(seed)).unwrap();
        prop_assert!(result.best_gain <= 1.0 + 1e-6);
        let replay = expected_gain(&result.measurement().unwrap(), &family).unwrap();
        prop_assert!((replay - result.best_gain).abs() < 1e-9);
        let again = max_leakage(&family, &config, &SeededRng::from_seed(seed)).unwrap();
        prop_assert_eq!(again, result);
    }
}
