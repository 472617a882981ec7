//! Hardware-level correlation gates: phase shifts, switches and beam splits
//! acting on one or two channels.
//!
//! Channel indices are 1-based throughout the public API. Gate lists are in
//! temporal order: the first gate in a slice acts first, so the composed
//! matrix of `[g1, g2]` is `G2 * G1`.

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_1_SQRT_2, PI};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};
use crate::state::ComplexState;
use crate::tol;

/// The four phases of a two-channel beam split,
///
/// ```text
/// U_B = 1/sqrt(2) [[e^{i gamma}, e^{i gamma'}],
///                  [e^{i delta}, e^{i delta'}]]
/// ```
///
/// Unitarity holds iff `e^{i(delta - delta')} = -e^{i(gamma - gamma')}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SplitPhases {
    pub gamma: f64,
    pub gamma_p: f64,
    pub delta: f64,
    pub delta_p: f64,
}

impl SplitPhases {
    /// Phases for which the beam split is exactly the Hadamard matrix.
    pub const CANONICAL: SplitPhases = SplitPhases {
        gamma: 0.0,
        gamma_p: 0.0,
        delta: 0.0,
        delta_p: PI,
    };

    pub fn new(gamma: f64, gamma_p: f64, delta: f64, delta_p: f64) -> Result<Self> {
        let phases = Self {
            gamma,
            gamma_p,
            delta,
            delta_p,
        };
        phases.check()?;
        Ok(phases)
    }

    /// Picks `delta'` so that the unitarity condition holds.
    pub fn completing(gamma: f64, gamma_p: f64, delta: f64) -> Self {
        Self {
            gamma,
            gamma_p,
            delta,
            delta_p: delta - gamma + gamma_p + PI,
        }
    }

    /// `|e^{i(delta - delta')} + e^{i(gamma - gamma')}|`; zero for a unitary split.
    pub fn residual(&self) -> f64 {
        (Complex64::from_polar(1.0, self.delta - self.delta_p) + Complex64::from_polar(1.0, self.gamma - self.gamma_p))
            .norm()
    }

    pub fn check(&self) -> Result<()> {
        let residual = self.residual();
        if residual <= tol::NORM {
            Ok(())
        } else {
            Err(Error::BeamSplitPhases { residual })
        }
    }

    pub fn is_canonical(&self) -> bool {
        *self == Self::CANONICAL
    }

    /// Row-major 2x2 entries.
    pub fn entries(&self) -> [[Complex64; 2]; 2] {
        if self.is_canonical() {
            let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
            return [[h, h], [h, -h]];
        }
        let e = |phase: f64| Complex64::from_polar(FRAC_1_SQRT_2, phase);
        [[e(self.gamma), e(self.gamma_p)], [e(self.delta), e(self.delta_p)]]
    }
}

impl Default for SplitPhases {
    fn default() -> Self {
        Self::CANONICAL
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum CorrelationGate {
    /// Multiplies `psi_alpha` by `e^{i gamma_alpha}`; unlisted channels are untouched.
    PhaseShift { phases: BTreeMap<usize, f64> },
    /// Exchanges the amplitudes of channels `a` and `b`.
    Switch { a: usize, b: usize },
    /// Mixes channels `a` and `b` with the 2x2 matrix of `phases`.
    BeamSplit { a: usize, b: usize, phases: SplitPhases },
    /// Dense unitary on all channels.
    GenericUnitary { u: CMatrix },
}

impl CorrelationGate {
    pub fn phase(channel: usize, gamma: f64) -> Self {
        Self::PhaseShift {
            phases: BTreeMap::from([(channel, gamma)]),
        }
    }

    pub fn phase_shift(phases: impl IntoIterator<Item = (usize, f64)>) -> Self {
        Self::PhaseShift {
            phases: phases.into_iter().collect(),
        }
    }

    pub fn switch(a: usize, b: usize) -> Self {
        Self::Switch { a, b }
    }

    /// Beam split with the canonical (Hadamard) phases.
    pub fn beam_split(a: usize, b: usize) -> Self {
        Self::BeamSplit {
            a,
            b,
            phases: SplitPhases::CANONICAL,
        }
    }

    pub fn beam_split_with(a: usize, b: usize, phases: SplitPhases) -> Result<Self> {
        phases.check()?;
        Ok(Self::BeamSplit { a, b, phases })
    }

    pub fn generic(u: CMatrix) -> Result<Self> {
        linalg::ensure_unitary(&u, tol::MATRIX)?;
        Ok(Self::GenericUnitary { u })
    }

    /// Channels the gate touches, ascending. Empty for a generic unitary.
    pub fn channels(&self) -> Vec<usize> {
        match self {
            Self::PhaseShift { phases } => phases.keys().copied().collect(),
            Self::Switch { a, b } | Self::BeamSplit { a, b, .. } => {
                let mut v = vec![*a, *b];
                v.sort_unstable();
                v
            }
            Self::GenericUnitary { .. } => Vec::new(),
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Self::PhaseShift { .. } => "phase",
            Self::Switch { .. } => "switch",
            Self::BeamSplit { .. } => "beam-split",
            Self::GenericUnitary { .. } => "unitary",
        }
    }

    /// Checks channel ranges and the per-kind invariants for `n_channels`.
    ///
    /// Generic unitaries are only checked for shape here; their unitarity is
    /// established by [`CorrelationGate::generic`].
    pub fn validate(&self, n_channels: usize) -> Result<()> {
        let in_range = |channel: usize| {
            if channel == 0 || channel > n_channels {
                Err(Error::ChannelOutOfRange { channel, n_channels })
            } else {
                Ok(())
            }
        };
        match self {
            Self::PhaseShift { phases } => phases.keys().try_for_each(|&ch| in_range(ch)),
            Self::Switch { a, b } => {
                in_range(*a)?;
                in_range(*b)?;
                if a == b {
                    return Err(Error::RepeatedIndex(*a));
                }
                Ok(())
            }
            Self::BeamSplit { a, b, phases } => {
                in_range(*a)?;
                in_range(*b)?;
                if a == b {
                    return Err(Error::RepeatedIndex(*a));
                }
                phases.check()
            }
            Self::GenericUnitary { u } => {
                if u.shape() != (n_channels, n_channels) {
                    return Err(Error::dim(format!("{n_channels}x{n_channels} unitary"), u.nrows()));
                }
                Ok(())
            }
        }
    }

    /// In-place update of a raw amplitude vector. Switch and beam split
    /// touch two entries; a phase shift touches its listed channels.
    pub(crate) fn apply_to_slice(&self, amps: &mut [Complex64]) {
        match self {
            Self::PhaseShift { phases } => {
                for (&ch, &gamma) in phases {
                    if gamma != 0.0 {
                        amps[ch - 1] *= Complex64::from_polar(1.0, gamma);
                    }
                }
            }
            Self::Switch { a, b } => amps.swap(a - 1, b - 1),
            Self::BeamSplit { a, b, phases } => {
                let [[m00, m01], [m10, m11]] = phases.entries();
                let (x, y) = (amps[a - 1], amps[b - 1]);
                amps[a - 1] = m00 * x + m01 * y;
                amps[b - 1] = m10 * x + m11 * y;
            }
            Self::GenericUnitary { u } => {
                let out: Vec<Complex64> = (0..u.nrows())
                    .map(|i| (0..u.ncols()).map(|j| u[(i, j)] * amps[j]).sum())
                    .collect();
                amps.copy_from_slice(&out);
            }
        }
    }

    /// Applies the gate to `psi` in place.
    pub fn apply(&self, psi: &mut ComplexState) -> Result<()> {
        self.validate(psi.n_channels())?;
        self.apply_to_slice(psi.amplitudes_mut());
        Ok(())
    }

    /// Dense `N_c x N_c` matrix of the gate.
    pub fn matrix(&self, n_channels: usize) -> Result<CMatrix> {
        self.validate(n_channels)?;
        let one = Complex64::new(1.0, 0.0);
        let mut m = CMatrix::identity(n_channels, n_channels);
        match self {
            Self::PhaseShift { phases } => {
                for (&ch, &gamma) in phases {
                    m[(ch - 1, ch - 1)] = Complex64::from_polar(1.0, gamma);
                }
            }
            Self::Switch { a, b } => {
                let (a, b) = (a - 1, b - 1);
                m[(a, a)] = Complex64::new(0.0, 0.0);
                m[(b, b)] = Complex64::new(0.0, 0.0);
                m[(a, b)] = one;
                m[(b, a)] = one;
            }
            Self::BeamSplit { a, b, phases } => {
                let (a, b) = (a - 1, b - 1);
                let [[m00, m01], [m10, m11]] = phases.entries();
                m[(a, a)] = m00;
                m[(a, b)] = m01;
                m[(b, a)] = m10;
                m[(b, b)] = m11;
            }
            Self::GenericUnitary { u } => m = u.clone(),
        }
        Ok(m)
    }
}

/// Returns `g` applied to a copy of `psi`.
pub fn apply_gate(gate: &CorrelationGate, psi: &ComplexState) -> Result<ComplexState> {
    let mut out = psi.clone();
    gate.apply(&mut out)?;
    Ok(out)
}

/// Applies a gate sequence in temporal order, in place.
pub fn apply_all(gates: &[CorrelationGate], psi: &mut ComplexState) -> Result<()> {
    gates.iter().try_for_each(|g| g.apply(psi))
}

/// Matrix of a gate sequence in temporal order: for `[g1, g2, ..., gk]` the
/// result is `Gk ... G2 G1`.
///
/// Built by pushing every column of the identity through the gates, so no
/// dense matrix product is formed.
pub fn compose(gates: &[CorrelationGate], n_channels: usize) -> Result<CMatrix> {
    for (position, gate) in gates.iter().enumerate() {
        gate.validate(n_channels).map_err(|e| Error::AtInstruction {
            position,
            source: Box::new(e),
        })?;
    }
    let mut m = CMatrix::identity(n_channels, n_channels);
    if n_channels == 0 {
        return Ok(m);
    }
    // column-major storage: each chunk is one column
    for column in m.as_mut_slice().chunks_exact_mut(n_channels) {
        for gate in gates {
            gate.apply_to_slice(column);
        }
    }
    Ok(m)
}

/// Whether two gates commute, by max-entry norm of their commutator.
pub fn commutes(g1: &CorrelationGate, g2: &CorrelationGate, n_channels: usize, tol: f64) -> Result<bool> {
    let m1 = g1.matrix(n_channels)?;
    let m2 = g2.matrix(n_channels)?;
    Ok(linalg::max_abs_diff(&(&m1 * &m2), &(&m2 * &m1)) < tol)
}

/// Hermitian generator `H` of one step, `U = exp(-i eps H)`.
#[derive(Debug, Clone, PartialEq)]
pub struct HamiltonianMatrix {
    pub h: CMatrix,
    pub eps: f64,
}

impl HamiltonianMatrix {
    /// Rebuilds the step `exp(-i eps H)`.
    pub fn step(&self) -> CMatrix {
        linalg::hermitian_exp(&self.h, self.eps)
    }
}

/// Extracts `H = (i / eps) log U` with the principal logarithm
/// (eigenphases in (-pi, pi)).
pub fn generator_of_step(u: &CMatrix, eps: f64) -> Result<HamiltonianMatrix> {
    if eps.is_nan() || eps <= 0.0 {
        return Err(Error::NonPositiveStep(eps));
    }
    linalg::ensure_unitary(u, tol::MATRIX)?;
    let log = linalg::unitary_log(u)?;
    let mut h = log * Complex64::new(0.0, 1.0 / eps);
    // the eigendecomposition is hermitian up to rounding; symmetrize
    h = (&h + h.adjoint()).scale(0.5);
    Ok(HamiltonianMatrix { h, eps })
}
