//! Density matrices from phase-randomized inputs and their unitary
//! evolution.

use std::f64::consts::TAU;

use nalgebra::{DVector, SymmetricEigen};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::gates::{apply_all, compose, CorrelationGate};
use crate::linalg::{self, c, CMatrix};
use crate::state::{qubits_for_channels, ComplexState};
use crate::tol;

/// Name of the generator used for random phases.
pub const RNG_NAME: &str = "ChaCha8";

#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    rho: CMatrix,
}

impl DensityMatrix {
    /// Validates hermiticity, unit trace and positivity.
    pub fn new(rho: CMatrix) -> Result<Self> {
        if !rho.is_square() || qubits_for_channels(rho.nrows()).is_none() {
            return Err(Error::dim("2^mq x 2^mq matrix", rho.nrows()));
        }
        linalg::ensure_hermitian(&rho, tol::MATRIX)?;
        let trace = rho.trace();
        if (trace.re - 1.0).abs() > tol::MATRIX || trace.im.abs() > tol::MATRIX {
            return Err(Error::InvalidProbabilities(format!("trace is {trace}")));
        }
        let lowest = SymmetricEigen::new(rho.clone()).eigenvalues.min();
        if lowest < -tol::MATRIX {
            return Err(Error::InvalidProbabilities(format!("negative eigenvalue {lowest:e}")));
        }
        Ok(Self { rho })
    }

    /// `psi psi^dagger`.
    pub fn pure(psi: &ComplexState) -> Self {
        let v = DVector::from_column_slice(psi.amplitudes());
        Self { rho: &v * v.adjoint() }
    }

    /// `diag(pbar)`: the limit of independent uniformly random channel phases.
    pub fn dephased(pbar: &[f64]) -> Result<Self> {
        check_pbar(pbar)?;
        Ok(Self {
            rho: CMatrix::from_diagonal(&DVector::from_iterator(pbar.len(), pbar.iter().map(|&p| c(p, 0.0)))),
        })
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.rho
    }

    pub fn n_channels(&self) -> usize {
        self.rho.nrows()
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.n_channels()).map(|i| self.rho[(i, i)].re).collect()
    }

    pub fn trace(&self) -> Complex64 {
        self.rho.trace()
    }

    /// `tr(rho^2)`.
    pub fn purity(&self) -> f64 {
        // tr(rho rho) = sum |rho_ij|^2 for hermitian rho
        self.rho.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn max_off_diagonal(&self) -> f64 {
        let n = self.n_channels();
        let mut best: f64 = 0.0;
        for j in 0..n {
            for i in 0..n {
                if i != j {
                    best = best.max(self.rho[(i, j)].norm());
                }
            }
        }
        best
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        SymmetricEigen::new(self.rho.clone())
            .eigenvalues
            .iter()
            .copied()
            .collect()
    }
}

fn check_pbar(pbar: &[f64]) -> Result<()> {
    if qubits_for_channels(pbar.len()).is_none() {
        return Err(Error::dim("2^mq probabilities", pbar.len()));
    }
    if let Some(p) = pbar.iter().find(|p| !p.is_finite() || **p < 0.0) {
        return Err(Error::InvalidProbabilities(format!("entry {p} is not a probability")));
    }
    let total: f64 = pbar.iter().sum();
    if (total - 1.0).abs() > tol::MATRIX {
        return Err(Error::InvalidProbabilities(format!("sum is {total}")));
    }
    Ok(())
}

/// `rho = sum_m w_m psi^(m) psi^(m)^dagger`, summed in member order.
pub fn density_from_ensemble(members: &[(f64, ComplexState)]) -> Result<DensityMatrix> {
    let Some((_, first)) = members.first() else {
        return Err(Error::EmptyEnsemble);
    };
    let n = first.n_channels();
    let sum: f64 = members.iter().map(|(w, _)| w).sum();
    if members.iter().any(|(w, _)| w.is_nan() || *w < 0.0) || (sum - 1.0).abs() > tol::MATRIX {
        return Err(Error::InvalidWeights { sum });
    }
    if let Some((_, bad)) = members.iter().find(|(_, psi)| psi.n_channels() != n) {
        return Err(Error::dim(format!("{n} channels"), bad.n_channels()));
    }
    let mut rho = CMatrix::zeros(n, n);
    for (w, psi) in members {
        let amps = psi.amplitudes();
        for j in 0..n {
            let right = amps[j].conj() * *w;
            if right == Complex64::new(0.0, 0.0) {
                continue;
            }
            for i in 0..n {
                rho[(i, j)] += amps[i] * right;
            }
        }
    }
    Ok(DensityMatrix { rho })
}

/// `U rho U^dagger` with `U = compose(gates)`.
pub fn evolve_density(rho: &DensityMatrix, gates: &[CorrelationGate]) -> Result<DensityMatrix> {
    let u = compose(gates, rho.n_channels())?;
    Ok(DensityMatrix {
        rho: &u * &rho.rho * u.adjoint(),
    })
}

/// Evolves each member independently (in parallel), keeping member order.
pub fn evolve_members(members: &[(f64, ComplexState)], gates: &[CorrelationGate]) -> Result<Vec<(f64, ComplexState)>> {
    members
        .par_iter()
        .map(|(w, psi)| {
            let mut out = psi.clone();
            apply_all(gates, &mut out)?;
            Ok((*w, out))
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub enum PhaseMode {
    /// The same phase vector for every member.
    Fixed(Vec<f64>),
    /// Independent phases uniform on [0, 2 pi) per channel and member.
    Uniform,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PhaseEnsembleSpec {
    pub pbar: Vec<f64>,
    pub mode: PhaseMode,
    pub samples: usize,
    pub seed: u64,
}

impl PhaseEnsembleSpec {
    pub fn uniform(pbar: Vec<f64>, samples: usize, seed: u64) -> Self {
        Self {
            pbar,
            mode: PhaseMode::Uniform,
            samples,
            seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        check_pbar(&self.pbar)?;
        if self.samples == 0 {
            return Err(Error::EmptyEnsemble);
        }
        if let PhaseMode::Fixed(phases) = &self.mode {
            if phases.len() != self.pbar.len() {
                return Err(Error::dim(format!("{} phases", self.pbar.len()), phases.len()));
            }
        }
        Ok(())
    }
}

/// Equal-weight members `psi_alpha = sqrt(pbar_alpha) e^{i phi_alpha}`.
///
/// Deterministic in `spec.seed`: phases are drawn member by member, channel
/// by channel, from a ChaCha8 stream.
pub fn sample_ensemble(spec: &PhaseEnsembleSpec) -> Result<Vec<(f64, ComplexState)>> {
    spec.validate()?;
    let weight = 1.0 / spec.samples as f64;
    let magnitudes: Vec<f64> = spec.pbar.iter().map(|p| p.sqrt()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let members = (0..spec.samples)
        .map(|_| {
            let psi = magnitudes
                .iter()
                .enumerate()
                .map(|(alpha, &m)| {
                    let phi = match &spec.mode {
                        PhaseMode::Fixed(phases) => phases[alpha],
                        PhaseMode::Uniform => rng.random_range(0.0..TAU),
                    };
                    if phi == 0.0 {
                        c(m, 0.0)
                    } else {
                        Complex64::from_polar(m, phi)
                    }
                })
                .collect();
            (weight, ComplexState::from_vec_unchecked(psi))
        })
        .collect();
    Ok(members)
}
