use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use wavegate_core::compiler::{circuit_oracle, compile_circuit_with, qubit_gate_matrix};
use wavegate_core::generate::{random_mixed_circuit, random_qubit_circuit};
use wavegate_core::linalg::{max_abs_diff, unitarity_deviation};
use wavegate_core::{
    apply_all, bits_to_channel, channel_to_bits, compile_circuit, compose, ComplexState, HadamardLowering, QubitGate,
    SplitPhases,
};

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn lowering_matches_tensor_oracle(seed in any::<u64>(), mq in 1usize..=4, len in 0usize..12) {
        let c = random_qubit_circuit(&mut rng(seed), mq, len);
        let compiled = compose(&compile_circuit(&c).unwrap(), c.n_channels()).unwrap();
        prop_assert!(max_abs_diff(&compiled, &circuit_oracle(&c).unwrap()) < 1e-10);
    }

    #[test]
    fn mixed_circuits_are_unitary(seed in any::<u64>(), mq in 1usize..=4) {
        let c = random_mixed_circuit(&mut rng(seed), mq, 10);
        let u = compose(&compile_circuit(&c).unwrap(), c.n_channels()).unwrap();
        prop_assert!(unitarity_deviation(&u) < 1e-12);
        prop_assert!(max_abs_diff(&u, &circuit_oracle(&c).unwrap()) < 1e-10);
    }

    #[test]
    fn phased_hadamard_lowering_agrees(seed in any::<u64>(), g in -3.0f64..3.0, gp in -3.0f64..3.0, d in -3.0f64..3.0) {
        let c = random_qubit_circuit(&mut rng(seed), 3, 8);
        let phased = compile_circuit_with(&c, HadamardLowering::Phased(SplitPhases::completing(g, gp, d))).unwrap();
        let u = compose(&phased, c.n_channels()).unwrap();
        prop_assert!(max_abs_diff(&u, &circuit_oracle(&c).unwrap()) < 1e-10);
    }

    #[test]
    fn in_place_application_matches_matrix(seed in any::<u64>(), mq in 1usize..=4) {
        let c = random_mixed_circuit(&mut rng(seed), mq, 12);
        let gates = compile_circuit(&c).unwrap();
        let n = c.n_channels();
        let u = compose(&gates, n).unwrap();
        for channel in 1..=n {
            let mut psi = ComplexState::basis(mq, channel).unwrap();
            apply_all(&gates, &mut psi).unwrap();
            for (i, z) in psi.amplitudes().iter().enumerate() {
                prop_assert!((z - u[(i, channel - 1)]).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn channel_encoding_is_a_bijection(mq in 1usize..=10, raw in any::<usize>()) {
        let alpha = raw % (1 << mq) + 1;
        let bits = channel_to_bits(alpha, mq).unwrap();
        prop_assert_eq!(bits.len(), mq);
        prop_assert_eq!(bits_to_channel(&bits).unwrap(), alpha);
    }
}

#[test]
fn hadamard_squares_to_identity_through_the_compiler() {
    for mq in 1..=4 {
        for qubit in 1..=mq {
            let gate = QubitGate::Hadamard { qubit };
            let c = wavegate_core::Circuit::from_gates(mq, []).unwrap();
            let mut twice = c.clone();
            twice.push(gate).unwrap();
            twice.push(gate).unwrap();
            let u = compose(&compile_circuit(&twice).unwrap(), c.n_channels()).unwrap();
            let id = wavegate_core::CMatrix::identity(c.n_channels(), c.n_channels());
            assert!(max_abs_diff(&u, &id) < 1e-15);
            let h = qubit_gate_matrix(&gate, mq).unwrap();
            assert!(max_abs_diff(&(&h * &h), &id) < 1e-15);
        }
    }
}
