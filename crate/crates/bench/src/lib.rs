//! Workloads shared by the benchmarks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use wavegate_core::generate::{random_channel_gates, random_qubit_circuit};
use wavegate_core::{Circuit, ComplexState, CorrelationGate};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Normalized state with random amplitudes on `2^mq` channels.
pub fn random_state(mq: usize, seed: u64) -> ComplexState {
    let mut rng = rng(seed);
    let raw = (0..1usize << mq)
        .map(|_| wavegate_core::linalg::c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
        .collect();
    ComplexState::normalized(raw).expect("random state is nonzero")
}

/// Mixed phase, switch and beam-split gates over `2^mq` channels.
pub fn channel_workload(mq: usize, len: usize, seed: u64) -> Vec<CorrelationGate> {
    random_channel_gates(&mut rng(seed), 1 << mq, len)
}

/// Qubit-level circuit of H, ROT and CNOT.
pub fn qubit_workload(mq: usize, len: usize, seed: u64) -> Circuit {
    random_qubit_circuit(&mut rng(seed), mq, len)
}
