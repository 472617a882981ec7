//! Correlation-gate simulation of qubit circuits on arrays of waveguide
//! channels.
//!
//! An `mq`-qubit register lives on `2^mq` channels, one channel per basis
//! state. Qubit gates are lowered to channel-level phase shifts, switches
//! and beam splits, which are applied in place to the channel amplitudes.

pub mod angle;
pub mod circuit;
pub mod compiler;
pub mod density;
pub mod error;
pub mod fieldmap;
pub mod gates;
pub mod generate;
pub mod linalg;
pub mod observables;
pub mod run;
pub mod state;
pub mod tol;
pub mod wdynamics;

pub use circuit::{parse_circuit, serialize_circuit, Circuit, Instruction};
pub use compiler::{
    bits_to_channel, channel_to_bits, circuit_oracle, compile_circuit, compile_circuit_with, compile_gate, ChannelMap,
    HadamardLowering, QubitGate,
};
pub use density::{
    density_from_ensemble, evolve_density, sample_ensemble, DensityMatrix, PhaseEnsembleSpec, PhaseMode,
};
pub use error::{Error, Result};
pub use fieldmap::{assemble_state, extract_channel, field_snapshot, FieldMode, FrameConvention};
pub use gates::{apply_all, apply_gate, compose, CorrelationGate, SplitPhases};
pub use linalg::{CMatrix, RMatrix};
pub use num_complex::Complex64;
pub use observables::{chsh_value, spin_expectation, ChshSettings, DiagonalOperator, SpinObservable};
pub use run::{run_density, run_wdyn, simulate, verify, verify_with, DensityReport, RunResult, WdynReport};
pub use state::{normalize_fields, ComplexState, ComplexStructure, RealState};
pub use wdynamics::{
    antilinear_split, apply_orthogonal, generator, stochastic_gate, AntisymmetricGenerator, OrthogonalStep,
    StochasticKind,
};
