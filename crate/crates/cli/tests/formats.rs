use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use tensor_jacobi::format::{format_orthomat, format_tensor_set, parse_orthomat, parse_tensor_set};
use tensor_jacobi_core::{random_rotation, SymTensor, TensorSet};

fn random_set(d: usize, n: usize, m: usize, seed: u64) -> TensorSet {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let tensors = (0..m)
        .map(|_| {
            SymTensor::from_fn(d, n, |_| {
                let z: f64 = StandardNormal.sample(&mut rng);
                z * 10f64.powi((seed % 7) as i32 - 3)
            })
            .unwrap()
        })
        .collect();
    TensorSet::new(tensors).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn tensor_files_round_trip_exactly(d in 2usize..=4, n in 2usize..=5, m in 1usize..=3, seed in any::<u64>()) {
        let set = random_set(d, n, m, seed);
        let text = format_tensor_set(&set);
        let back = parse_tensor_set(&text).unwrap();
        prop_assert_eq!(&back, &set);
        prop_assert_eq!(format_tensor_set(&back), text);
    }

    #[test]
    fn orthomat_files_round_trip_exactly(n in 2usize..=8, seed in any::<u64>()) {
        let q = random_rotation(n, seed).unwrap();
        prop_assert_eq!(parse_orthomat(&format_orthomat(&q)).unwrap(), q);
    }

    #[test]
    fn truncated_tensor_files_are_rejected(d in 2usize..=3, n in 2usize..=4, cut in 1usize..40, seed in any::<u64>()) {
        let text = format_tensor_set(&random_set(d, n, 1, seed));
        let values: Vec<&str> = text.split_whitespace().collect();
        prop_assume!(cut < values.len() - 5);
        let shortened = text.trim_end().rsplitn(cut + 1, char::is_whitespace).last().unwrap();
        prop_assert!(parse_tensor_set(shortened).is_err());
    }
}
