//! Real and complex wave functions over waveguide channels.
//!
//! A real state holds `2 N_c` field amplitudes `q_tau`, interleaved as
//! `(re_1, im_1, re_2, im_2, ...)` so that channel `alpha` owns the
//! contiguous pair `(q_{alpha,1}, q_{alpha,2})`. Pairing them gives the
//! complex amplitude `psi_alpha = q_{alpha,1} + i q_{alpha,2}`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{self, RMatrix};
use crate::tol;

fn check_norm(norm_sq: f64) -> Result<()> {
    let deviation = (norm_sq - 1.0).abs();
    if deviation <= tol::NORM {
        Ok(())
    } else {
        Err(Error::NotNormalized { deviation })
    }
}

/// Qubit count for a channel count, if the count is a power of two.
pub fn qubits_for_channels(n_channels: usize) -> Option<usize> {
    n_channels
        .is_power_of_two()
        .then(|| n_channels.trailing_zeros() as usize)
}

/// Classical wave function: a unit vector of real field amplitudes.
#[derive(Debug, Clone, PartialEq)]
pub struct RealState {
    q: Vec<f64>,
}

impl RealState {
    pub fn new(q: Vec<f64>) -> Result<Self> {
        if q.len() < 2 || q.len() % 2 != 0 || qubits_for_channels(q.len() / 2).is_none() {
            return Err(Error::dim("2 * 2^mq real components", q.len()));
        }
        check_norm(q.iter().map(|x| x * x).sum())?;
        Ok(Self { q })
    }

    pub(crate) fn from_vec_unchecked(q: Vec<f64>) -> Self {
        Self { q }
    }

    pub fn components(&self) -> &[f64] {
        &self.q
    }

    pub fn into_components(self) -> Vec<f64> {
        self.q
    }

    pub fn len(&self) -> usize {
        self.q.len()
    }

    pub fn is_empty(&self) -> bool {
        self.q.is_empty()
    }

    pub fn n_channels(&self) -> usize {
        self.q.len() / 2
    }

    pub fn norm_sq(&self) -> f64 {
        self.q.iter().map(|x| x * x).sum()
    }

    /// Relative intensities `p_tau = q_tau^2`.
    pub fn intensities(&self) -> Vec<f64> {
        self.q.iter().map(|x| x * x).collect()
    }

    pub fn to_complex(&self) -> ComplexState {
        let psi = self
            .q
            .chunks_exact(2)
            .map(|pair| Complex64::new(pair[0], pair[1]))
            .collect::<Vec<_>>();
        let mq = qubits_for_channels(psi.len()).expect("validated length");
        ComplexState { psi, mq }
    }
}

/// Normalizes raw field values into a classical wave function.
///
/// Returns the state `q_tau = F_tau / sqrt(I_tot)` together with the total
/// intensity `I_tot = sum F_tau^2`, so that `q_tau^2` is the relative
/// intensity of field `tau`.
pub fn normalize_fields(fields: &[f64]) -> Result<(RealState, f64)> {
    if fields.len() < 2 || fields.len() % 2 != 0 || qubits_for_channels(fields.len() / 2).is_none() {
        return Err(Error::dim("2 * 2^mq field values", fields.len()));
    }
    let total: f64 = fields.iter().map(|f| f * f).sum();
    if total == 0.0 || !total.is_finite() {
        return Err(Error::DegenerateIntensity);
    }
    let scale = total.sqrt();
    let q = fields.iter().map(|f| f / scale).collect();
    Ok((RealState::from_vec_unchecked(q), total))
}

/// Quantum wave function over the `2^mq` channels.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexState {
    psi: Vec<Complex64>,
    mq: usize,
}

impl ComplexState {
    pub fn new(psi: Vec<Complex64>) -> Result<Self> {
        let mq = qubits_for_channels(psi.len()).ok_or_else(|| Error::dim("2^mq amplitudes", psi.len()))?;
        check_norm(psi.iter().map(|z| z.norm_sqr()).sum())?;
        Ok(Self { psi, mq })
    }

    /// Scales arbitrary amplitudes to unit norm.
    pub fn normalized(mut psi: Vec<Complex64>) -> Result<Self> {
        let mq = qubits_for_channels(psi.len()).ok_or_else(|| Error::dim("2^mq amplitudes", psi.len()))?;
        let norm_sq: f64 = psi.iter().map(|z| z.norm_sqr()).sum();
        if norm_sq == 0.0 || !norm_sq.is_finite() {
            return Err(Error::DegenerateIntensity);
        }
        let scale = norm_sq.sqrt().recip();
        psi.iter_mut().for_each(|z| *z *= scale);
        Ok(Self { psi, mq })
    }

    pub(crate) fn from_vec_unchecked(psi: Vec<Complex64>) -> Self {
        let mq = qubits_for_channels(psi.len()).expect("power-of-two length");
        Self { psi, mq }
    }

    /// All intensity in one channel (1-based).
    pub fn basis(mq: usize, channel: usize) -> Result<Self> {
        let n = 1usize << mq;
        if channel == 0 || channel > n {
            return Err(Error::ChannelOutOfRange { channel, n_channels: n });
        }
        let mut psi = vec![Complex64::new(0.0, 0.0); n];
        psi[channel - 1] = Complex64::new(1.0, 0.0);
        Ok(Self { psi, mq })
    }

    pub fn mq(&self) -> usize {
        self.mq
    }

    pub fn n_channels(&self) -> usize {
        self.psi.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.psi
    }

    pub(crate) fn amplitudes_mut(&mut self) -> &mut [Complex64] {
        &mut self.psi
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.psi
    }

    /// Amplitude of a 1-based channel.
    pub fn amplitude(&self, channel: usize) -> Complex64 {
        self.psi[channel - 1]
    }

    pub fn norm_sq(&self) -> f64 {
        self.psi.iter().map(|z| z.norm_sqr()).sum()
    }

    /// `psi^dagger phi`.
    pub fn inner(&self, other: &ComplexState) -> Complex64 {
        self.psi.iter().zip(&other.psi).map(|(a, b)| a.conj() * b).sum()
    }

    /// Channel probabilities `|psi_alpha|^2`.
    pub fn probabilities(&self) -> Vec<f64> {
        self.psi.iter().map(|z| z.norm_sqr()).collect()
    }

    pub fn to_real(&self) -> RealState {
        let q = self.psi.iter().flat_map(|z| [z.re, z.im]).collect();
        RealState::from_vec_unchecked(q)
    }
}

/// A pair `(K, I)` of real orthogonal maps with `K^2 = 1`, `I^2 = -1` and
/// `KI + IK = 0`. In the complex picture `K` is conjugation and `I` is
/// multiplication by `i`.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexStructure {
    k: RMatrix,
    i: RMatrix,
}

impl ComplexStructure {
    /// Validates the defining identities for a caller-supplied pair.
    pub fn new(k: RMatrix, i: RMatrix) -> Result<Self> {
        if !k.is_square() || k.shape() != i.shape() || k.nrows() % 2 != 0 {
            return Err(Error::dim("matching even square matrices", k.nrows()));
        }
        let n = k.nrows();
        let id = RMatrix::identity(n, n);
        let residuals = [
            linalg::max_abs_diff_real(&(&k * &k), &id),
            linalg::max_abs_diff_real(&(&i * &i), &(-&id)),
            linalg::max_abs_real(&(&k * &i + &i * &k)),
        ];
        if residuals.iter().any(|r| *r > tol::MATRIX) {
            return Err(Error::Unsupported(format!(
                "(K, I) is not a complex structure; residuals {residuals:?}"
            )));
        }
        linalg::ensure_orthogonal(&k, tol::MATRIX)?;
        linalg::ensure_orthogonal(&i, tol::MATRIX)?;
        Ok(Self { k, i })
    }

    /// Block-diagonal structure matching the interleaved pairing:
    /// `K = diag(1, -1)` and `I = [[0, -1], [1, 0]]` on every channel.
    pub fn standard(n_channels: usize) -> Self {
        let n = 2 * n_channels;
        let mut k = RMatrix::zeros(n, n);
        let mut i = RMatrix::zeros(n, n);
        for a in 0..n_channels {
            k[(2 * a, 2 * a)] = 1.0;
            k[(2 * a + 1, 2 * a + 1)] = -1.0;
            i[(2 * a, 2 * a + 1)] = -1.0;
            i[(2 * a + 1, 2 * a)] = 1.0;
        }
        Self { k, i }
    }

    pub fn k(&self) -> &RMatrix {
        &self.k
    }

    pub fn i(&self) -> &RMatrix {
        &self.i
    }

    pub fn dim(&self) -> usize {
        self.k.nrows()
    }

    /// Whether the orthogonal step `s` commutes with `I`, i.e. acts as a
    /// unitary on the complex wave function.
    pub fn is_compatible(&self, s: &RMatrix) -> Result<bool> {
        if s.shape() != self.i.shape() {
            return Err(Error::dim(format!("{0}x{0} matrix", self.dim()), s.nrows()));
        }
        linalg::ensure_orthogonal(s, tol::MATRIX)?;
        let commutator = s * &self.i - &self.i * s;
        Ok(linalg::max_abs_real(&commutator) < tol::MATRIX)
    }
}
