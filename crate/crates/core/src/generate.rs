//! Random circuits for testing and benchmarking.

use std::f64::consts::PI;

use rand::Rng;

use crate::circuit::{Circuit, Instruction};
use crate::compiler::QubitGate;
use crate::gates::{CorrelationGate, SplitPhases};

/// Angles drawn from multiples of pi/8 half the time, so that serialized
/// circuits exercise both angle notations.
fn random_angle<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    if rng.random_bool(0.5) {
        rng.random_range(-16i32..=16) as f64 * PI / 8.0
    } else {
        rng.random_range(-PI..PI)
    }
}

fn distinct_pair<R: Rng + ?Sized>(rng: &mut R, n: usize) -> (usize, usize) {
    let a = rng.random_range(1..=n);
    let b = (a + rng.random_range(0..n - 1)) % n + 1;
    (a, b)
}

/// Uniform choice among H, ROT and (for `mq >= 2`) CNOT.
pub fn random_qubit_gate<R: Rng + ?Sized>(rng: &mut R, mq: usize) -> QubitGate {
    let choices = if mq >= 2 { 3 } else { 2 };
    match rng.random_range(0..choices) {
        0 => QubitGate::Hadamard {
            qubit: rng.random_range(1..=mq),
        },
        1 => QubitGate::Rotation {
            qubit: rng.random_range(1..=mq),
            delta: random_angle(rng),
        },
        _ => {
            let (control, target) = distinct_pair(rng, mq);
            QubitGate::Cnot { control, target }
        }
    }
}

/// Phase shift, switch or beam split (canonical or with random phases).
/// Needs at least two channels.
pub fn random_channel_gate<R: Rng + ?Sized>(rng: &mut R, n_channels: usize) -> CorrelationGate {
    assert!(n_channels >= 2, "channel gates need two channels");
    match rng.random_range(0..3) {
        0 => {
            let count = rng.random_range(1..=n_channels.min(3));
            let mut phases = Vec::with_capacity(count);
            while phases.len() < count {
                let ch = rng.random_range(1..=n_channels);
                if phases.iter().all(|&(c, _)| c != ch) {
                    phases.push((ch, random_angle(rng)));
                }
            }
            CorrelationGate::phase_shift(phases)
        }
        1 => {
            let (a, b) = distinct_pair(rng, n_channels);
            CorrelationGate::switch(a, b)
        }
        _ => {
            let (a, b) = distinct_pair(rng, n_channels);
            if rng.random_bool(0.5) {
                CorrelationGate::beam_split(a, b)
            } else {
                let phases = SplitPhases::completing(random_angle(rng), random_angle(rng), random_angle(rng));
                CorrelationGate::BeamSplit { a, b, phases }
            }
        }
    }
}

/// Circuit of qubit-level gates only.
pub fn random_qubit_circuit<R: Rng + ?Sized>(rng: &mut R, mq: usize, len: usize) -> Circuit {
    let mut circuit = Circuit::new(mq).expect("qubit count in range");
    for _ in 0..len {
        circuit
            .push(random_qubit_gate(rng, mq))
            .expect("generated gate is valid");
    }
    circuit
}

/// Circuit mixing qubit-level and channel-level instructions.
pub fn random_mixed_circuit<R: Rng + ?Sized>(rng: &mut R, mq: usize, len: usize) -> Circuit {
    let mut circuit = Circuit::new(mq).expect("qubit count in range");
    for _ in 0..len {
        let instruction: Instruction = if rng.random_bool(0.5) {
            random_channel_gate(rng, circuit.n_channels()).into()
        } else {
            random_qubit_gate(rng, mq).into()
        };
        circuit.push(instruction).expect("generated gate is valid");
    }
    circuit
}

/// Sequence of channel-level gates.
pub fn random_channel_gates<R: Rng + ?Sized>(rng: &mut R, n_channels: usize, len: usize) -> Vec<CorrelationGate> {
    (0..len).map(|_| random_channel_gate(rng, n_channels)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn generated_circuits_are_valid() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        for mq in 1..=4 {
            for _ in 0..20 {
                let c = random_mixed_circuit(&mut rng, mq, 15);
                assert_eq!(c.len(), 15);
                for ins in c.instructions() {
                    c.check(ins).unwrap();
                }
            }
        }
    }

    #[test]
    fn pairs_are_distinct_and_cover_the_range() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mut seen = std::collections::BTreeSet::new();
        for _ in 0..2000 {
            let (a, b) = distinct_pair(&mut rng, 4);
            assert_ne!(a, b);
            assert!((1..=4).contains(&a) && (1..=4).contains(&b));
            seen.insert((a, b));
        }
        assert_eq!(seen.len(), 12);
    }
}
