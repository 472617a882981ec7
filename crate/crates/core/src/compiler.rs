//! Lowering of qubit gates into correlation gates, and the tensor-product
//! reference matrices used to check the lowering.
//!
//! Channel `alpha` stands for the bit list obtained by complementing the
//! big-endian binary digits of `alpha - 1`; for three qubits channels 1..8
//! are `111, 110, 101, 100, 011, 010, 001, 000`. Qubit 1 is the leftmost
//! bit and the leftmost tensor factor, and the first component of every 2x2
//! factor is bit value 1 (spin up).
//!
//! CNOT follows the channel-level convention where the target flips when
//! the control bit is **0**. For two qubits this is the swap of channels 3
//! and 4. To get the textbook control-on-1 CNOT, conjugate the control
//! qubit with bit flips or relabel the bit values.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::circuit::{Circuit, Instruction};
use crate::error::{Error, Result};
use crate::gates::{CorrelationGate, SplitPhases};
use crate::linalg::{c, CMatrix};

/// Rotation angle used when a rotation gate names no angle.
pub const DEFAULT_ROTATION: f64 = PI / 4.0;

/// Bijection between 1-based channels and qubit bit lists.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ChannelMap {
    mq: usize,
}

impl ChannelMap {
    pub fn new(mq: usize) -> Self {
        Self { mq }
    }

    pub fn mq(&self) -> usize {
        self.mq
    }

    pub fn n_channels(&self) -> usize {
        1 << self.mq
    }

    fn check_channel(&self, channel: usize) -> Result<()> {
        if channel == 0 || channel > self.n_channels() {
            return Err(Error::ChannelOutOfRange {
                channel,
                n_channels: self.n_channels(),
            });
        }
        Ok(())
    }

    /// Bit `b_j` of a 0-based channel index; no range checks.
    #[inline]
    pub fn bit_of_index(&self, index: usize, qubit: usize) -> u8 {
        1 - ((index >> (self.mq - qubit)) & 1) as u8
    }

    /// Spin `s_j = 2 b_j - 1` of a 0-based channel index.
    #[inline]
    pub fn spin_of_index(&self, index: usize, qubit: usize) -> i8 {
        2 * self.bit_of_index(index, qubit) as i8 - 1
    }

    pub fn bits(&self, channel: usize) -> Result<Vec<u8>> {
        self.check_channel(channel)?;
        Ok((1..=self.mq).map(|j| self.bit_of_index(channel - 1, j)).collect())
    }

    pub fn channel(&self, bits: &[u8]) -> Result<usize> {
        if bits.len() != self.mq {
            return Err(Error::dim(format!("{} bits", self.mq), bits.len()));
        }
        let mut index = 0usize;
        for &b in bits {
            if b > 1 {
                return Err(Error::Unsupported(format!("bit value {b} is not 0 or 1")));
            }
            index = (index << 1) | (1 - b as usize);
        }
        Ok(index + 1)
    }
}

pub fn channel_to_bits(alpha: usize, mq: usize) -> Result<Vec<u8>> {
    ChannelMap::new(mq).bits(alpha)
}

pub fn bits_to_channel(bits: &[u8]) -> Result<usize> {
    ChannelMap::new(bits.len()).channel(bits)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum QubitGate {
    /// `diag(1, e^{i delta})` on one qubit: phases the bit-0 component.
    Rotation {
        qubit: usize,
        delta: f64,
    },
    Hadamard {
        qubit: usize,
    },
    /// Flips `target` where `control` is 0.
    Cnot {
        control: usize,
        target: usize,
    },
}

impl QubitGate {
    pub fn validate(&self, mq: usize) -> Result<()> {
        let in_range = |qubit: usize| {
            if qubit == 0 || qubit > mq {
                Err(Error::QubitOutOfRange { qubit, n_qubits: mq })
            } else {
                Ok(())
            }
        };
        match *self {
            QubitGate::Rotation { qubit, .. } | QubitGate::Hadamard { qubit } => in_range(qubit),
            QubitGate::Cnot { control, target } => {
                if mq < 2 {
                    return Err(Error::TooFewQubits { needed: 2, found: mq });
                }
                in_range(control)?;
                in_range(target)?;
                if control == target {
                    return Err(Error::RepeatedIndex(control));
                }
                Ok(())
            }
        }
    }
}

/// How Hadamard gates are lowered.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum HadamardLowering {
    /// One canonical beam split per channel pair (equal to the Hadamard matrix).
    #[default]
    Canonical,
    /// Beam splits with arbitrary valid phases, wrapped in the phase shifts
    /// that turn them back into Hadamard gates.
    Phased(SplitPhases),
}

fn check_qubit(qubit: usize, mq: usize) -> Result<()> {
    QubitGate::Hadamard { qubit }.validate(mq)
}

/// Phase `delta` on every channel whose bit `qubit` is 0.
pub fn compile_rotation(qubit: usize, delta: f64, mq: usize) -> Result<CorrelationGate> {
    check_qubit(qubit, mq)?;
    let map = ChannelMap::new(mq);
    Ok(CorrelationGate::phase_shift(
        (0..map.n_channels())
            .filter(|&i| map.bit_of_index(i, qubit) == 0)
            .map(|i| (i + 1, delta)),
    ))
}

/// `2^(mq-2)` disjoint switches: among channels with control bit 0, swap the
/// pairs that differ only in the target bit.
pub fn compile_cnot(control: usize, target: usize, mq: usize) -> Result<Vec<CorrelationGate>> {
    QubitGate::Cnot { control, target }.validate(mq)?;
    let map = ChannelMap::new(mq);
    let target_mask = 1usize << (mq - target);
    Ok((0..map.n_channels())
        .filter(|&i| map.bit_of_index(i, control) == 0 && map.bit_of_index(i, target) == 1)
        .map(|i| CorrelationGate::switch(i + 1, (i | target_mask) + 1))
        .collect())
}

/// `2^(mq-1)` disjoint canonical beam splits, each pairing the channel with
/// bit `qubit` = 1 (first) with its partner where the bit is 0.
pub fn compile_hadamard(qubit: usize, mq: usize) -> Result<Vec<CorrelationGate>> {
    Ok(hadamard_pairs(qubit, mq)?
        .map(|(a, b)| CorrelationGate::beam_split(a, b))
        .collect())
}

fn hadamard_pairs(qubit: usize, mq: usize) -> Result<impl Iterator<Item = (usize, usize)>> {
    check_qubit(qubit, mq)?;
    let map = ChannelMap::new(mq);
    let mask = 1usize << (mq - qubit);
    Ok((0..map.n_channels())
        .filter(move |&i| map.bit_of_index(i, qubit) == 1)
        .map(move |i| (i + 1, (i | mask) + 1)))
}

/// Hadamard on `qubit` from beam splits with arbitrary phases.
///
/// A split `U_B = diag(1, e^{i(delta-gamma)}) H diag(e^{i gamma}, e^{i gamma'})`
/// becomes `H` after the pre-shift `diag(e^{-i gamma}, e^{-i gamma'})` and
/// the post-shift `diag(1, e^{-i(delta-gamma)})`. The pre- and post-shifts of
/// all pairs are merged, giving `2^(mq-1) + 2` gates.
pub fn compile_hadamard_phased(qubit: usize, mq: usize, phases: SplitPhases) -> Result<Vec<CorrelationGate>> {
    phases.check()?;
    let pairs: Vec<_> = hadamard_pairs(qubit, mq)?.collect();
    let pre = CorrelationGate::phase_shift(
        pairs
            .iter()
            .flat_map(|&(a, b)| [(a, -phases.gamma), (b, -phases.gamma_p)]),
    );
    let post = CorrelationGate::phase_shift(pairs.iter().map(|&(_, b)| (b, -(phases.delta - phases.gamma))));
    let mut gates = Vec::with_capacity(pairs.len() + 2);
    gates.push(pre);
    gates.extend(pairs.iter().map(|&(a, b)| CorrelationGate::BeamSplit { a, b, phases }));
    gates.push(post);
    Ok(gates)
}

pub fn compile_gate(gate: &QubitGate, mq: usize, lowering: HadamardLowering) -> Result<Vec<CorrelationGate>> {
    match *gate {
        QubitGate::Rotation { qubit, delta } => Ok(vec![compile_rotation(qubit, delta, mq)?]),
        QubitGate::Hadamard { qubit } => match lowering {
            HadamardLowering::Canonical => compile_hadamard(qubit, mq),
            HadamardLowering::Phased(phases) => compile_hadamard_phased(qubit, mq, phases),
        },
        QubitGate::Cnot { control, target } => compile_cnot(control, target, mq),
    }
}

/// Lowers every instruction, preserving order. Channel-level instructions
/// pass through unchanged.
pub fn compile_circuit(circuit: &Circuit) -> Result<Vec<CorrelationGate>> {
    compile_circuit_with(circuit, HadamardLowering::Canonical)
}

pub fn compile_circuit_with(circuit: &Circuit, lowering: HadamardLowering) -> Result<Vec<CorrelationGate>> {
    let mut out = Vec::new();
    for (position, instruction) in circuit.instructions().iter().enumerate() {
        let lowered = match instruction {
            Instruction::Qubit(g) => compile_gate(g, circuit.mq(), lowering),
            Instruction::Channel(g) => g.validate(circuit.n_channels()).map(|_| vec![g.clone()]),
        };
        out.extend(lowered.map_err(|e| Error::AtInstruction {
            position: position + 1,
            source: Box::new(e),
        })?);
    }
    Ok(out)
}

fn identity2() -> CMatrix {
    CMatrix::identity(2, 2)
}

fn kron_all(factors: &[CMatrix]) -> CMatrix {
    factors.iter().fold(CMatrix::identity(1, 1), |acc, f| acc.kronecker(f))
}

/// Single-qubit factor `m` at position `qubit` of an `mq`-fold tensor product.
fn embed_single(m: &CMatrix, qubit: usize, mq: usize) -> CMatrix {
    let factors: Vec<CMatrix> = (1..=mq)
        .map(|j| if j == qubit { m.clone() } else { identity2() })
        .collect();
    kron_all(&factors)
}

/// Embeds a 2x2 operator on `qubit` into the full channel space.
pub fn single_qubit_operator(m: &CMatrix, qubit: usize, mq: usize) -> Result<CMatrix> {
    check_qubit(qubit, mq)?;
    if m.shape() != (2, 2) {
        return Err(Error::dim("2x2 operator", m.nrows()));
    }
    Ok(embed_single(m, qubit, mq))
}

pub fn hadamard_2x2() -> CMatrix {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    CMatrix::from_row_slice(2, 2, &[c(h, 0.0), c(h, 0.0), c(h, 0.0), c(-h, 0.0)])
}

pub fn pauli_x() -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)])
}

pub fn pauli_z() -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0)])
}

/// Tensor-product matrix of a qubit gate over `2^mq` channels.
///
/// The CNOT is `P_up (x) 1 + P_down (x) X` on the (control, target) factors,
/// which for adjacent qubits 1, 2 is the 4x4 block `[[1,0,0,0],[0,1,0,0],
/// [0,0,0,1],[0,0,1,0]]`.
pub fn qubit_gate_matrix(gate: &QubitGate, mq: usize) -> Result<CMatrix> {
    gate.validate(mq)?;
    Ok(match *gate {
        QubitGate::Rotation { qubit, delta } => {
            let r = CMatrix::from_row_slice(
                2,
                2,
                &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), Complex64::from_polar(1.0, delta)],
            );
            embed_single(&r, qubit, mq)
        }
        QubitGate::Hadamard { qubit } => embed_single(&hadamard_2x2(), qubit, mq),
        QubitGate::Cnot { control, target } => {
            let up = DMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]);
            let down = DMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]);
            let idle: Vec<CMatrix> = (1..=mq)
                .map(|j| if j == control { up.clone() } else { identity2() })
                .collect();
            let flip: Vec<CMatrix> = (1..=mq)
                .map(|j| {
                    if j == control {
                        down.clone()
                    } else if j == target {
                        pauli_x()
                    } else {
                        identity2()
                    }
                })
                .collect();
            kron_all(&idle) + kron_all(&flip)
        }
    })
}

/// Reference matrix of a whole circuit: tensor-product matrices for qubit
/// gates, dense gate matrices for channel gates, multiplied in time order.
pub fn circuit_oracle(circuit: &Circuit) -> Result<CMatrix> {
    let n = circuit.n_channels();
    let mut product = CMatrix::identity(n, n);
    for (position, instruction) in circuit.instructions().iter().enumerate() {
        let m = match instruction {
            Instruction::Qubit(g) => qubit_gate_matrix(g, circuit.mq()),
            Instruction::Channel(g) => g.matrix(n),
        }
        .map_err(|e| Error::AtInstruction {
            position: position + 1,
            source: Box::new(e),
        })?;
        product = m * product;
    }
    Ok(product)
}
