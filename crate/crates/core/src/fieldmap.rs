//! Scalar model of the guided mode in each waveguide.
//!
//! A mode with reference amplitudes `(f1, f2)` oscillates as
//! `F1 + i F2 = (f1 + i f2) e^{i (beta z - omega t)}`. Its intensity
//! `f1^2 + f2^2` is constant and its phase supplies the phase of the channel
//! amplitude.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::state::{qubits_for_channels, ComplexState};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldMode {
    pub f1: f64,
    pub f2: f64,
    /// Angular frequency.
    pub omega: f64,
    /// Propagation constant.
    pub beta: f64,
}

impl FieldMode {
    pub fn new(f1: f64, f2: f64, omega: f64, beta: f64) -> Result<Self> {
        if omega.is_nan() || omega <= 0.0 || beta.is_nan() || beta <= 0.0 {
            return Err(Error::Unsupported(format!(
                "mode needs omega > 0 and beta > 0, got omega={omega}, beta={beta}"
            )));
        }
        Ok(Self { f1, f2, omega, beta })
    }

    pub fn intensity(&self) -> f64 {
        self.f1 * self.f1 + self.f2 * self.f2
    }

    pub fn is_empty(&self) -> bool {
        self.f1 == 0.0 && self.f2 == 0.0
    }
}

/// `(F1, F2)` at position `z` and time `t`.
pub fn field_snapshot(m: &FieldMode, z: f64, t: f64) -> (f64, f64) {
    let (sin, cos) = (m.beta * z - m.omega * t).sin_cos();
    (m.f1 * cos - m.f2 * sin, m.f2 * cos + m.f1 * sin)
}

/// `(intensity, phase)` of the mode at `z0`, with phase `arg(F1 + i F2)`.
pub fn extract_channel(m: &FieldMode, z0: f64, t: f64) -> Result<(f64, f64)> {
    if m.is_empty() {
        return Err(Error::UndefinedPhase);
    }
    let (f1, f2) = field_snapshot(m, z0, t);
    Ok((m.intensity(), f2.atan2(f1)))
}

/// Where the phase of each channel is read off.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FrameConvention {
    /// A fixed reference point `z0`; phases advance as `-omega t`.
    Fixed { z0: f64 },
    /// `z0(t) = z0_bar + omega t / beta`, moving with the phase front.
    CoMoving { z0_bar: f64 },
}

impl FrameConvention {
    fn z0(&self, m: &FieldMode, t: f64) -> f64 {
        match *self {
            Self::Fixed { z0 } => z0,
            Self::CoMoving { z0_bar } => z0_bar + m.omega * t / m.beta,
        }
    }
}

/// `psi_alpha = sqrt(p_alpha) e^{i phi_alpha}` with `p_alpha = I_alpha / I_tot`.
///
/// Empty channels get amplitude zero. Modes with differing `omega` are
/// accepted but logged, since the common complex structure assumes
/// identical waveguides.
pub fn assemble_state(modes: &[FieldMode], frame: FrameConvention, t: f64) -> Result<ComplexState> {
    if qubits_for_channels(modes.len()).is_none() {
        return Err(Error::dim("2^mq modes", modes.len()));
    }
    if let Some(first) = modes.first() {
        if modes.iter().any(|m| m.omega != first.omega) {
            log::warn!("modes have different angular frequencies; the phases will drift apart");
        }
    }
    let total: f64 = modes.iter().map(FieldMode::intensity).sum();
    if total == 0.0 {
        return Err(Error::DegenerateIntensity);
    }
    let psi = modes
        .iter()
        .map(|m| {
            if m.is_empty() {
                return Ok(Complex64::new(0.0, 0.0));
            }
            let (intensity, phase) = extract_channel(m, frame.z0(m, t), t)?;
            Ok(Complex64::from_polar((intensity / total).sqrt(), phase))
        })
        .collect::<Result<Vec<_>>>()?;
    ComplexState::normalized(psi)
}
