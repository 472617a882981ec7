//! Real orthogonal evolution of the field vector `q`: steps, antisymmetric
//! generators, the linear/antilinear split with respect to a complex
//! structure, and gates with random phases.

use std::f64::consts::TAU;

use nalgebra::DVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::gates::{CorrelationGate, SplitPhases};
use crate::linalg::{self, RMatrix};
use crate::state::{ComplexStructure, RealState};
use crate::tol;

/// Real `2N x 2N` step with `S^T S = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct OrthogonalStep {
    s: RMatrix,
}

impl OrthogonalStep {
    pub fn new(s: RMatrix) -> Result<Self> {
        if !s.is_square() || s.nrows() % 2 != 0 {
            return Err(Error::dim("even square matrix", s.nrows()));
        }
        linalg::ensure_orthogonal(&s, tol::MATRIX)?;
        Ok(Self { s })
    }

    pub fn identity(n_channels: usize) -> Self {
        Self {
            s: RMatrix::identity(2 * n_channels, 2 * n_channels),
        }
    }

    /// Rotation by `gamma` in the plane of real components `a`, `b`
    /// (0-based): `q_a' = cos q_a + sin q_b`, `q_b' = -sin q_a + cos q_b`.
    pub fn rotation(dim: usize, a: usize, b: usize, gamma: f64) -> Result<Self> {
        if dim % 2 != 0 {
            return Err(Error::dim("even dimension", dim));
        }
        if a == b {
            return Err(Error::RepeatedIndex(a));
        }
        if a.max(b) >= dim {
            return Err(Error::ChannelOutOfRange {
                channel: a.max(b) + 1,
                n_channels: dim,
            });
        }
        let mut s = RMatrix::identity(dim, dim);
        let (sin, cos) = gamma.sin_cos();
        s[(a, a)] = cos;
        s[(a, b)] = sin;
        s[(b, a)] = -sin;
        s[(b, b)] = cos;
        Ok(Self { s })
    }

    /// Real form of a channel-level gate on `n_channels` channels.
    pub fn from_gate(gate: &CorrelationGate, n_channels: usize) -> Result<Self> {
        Ok(Self {
            s: linalg::real_embedding(&gate.matrix(n_channels)?),
        })
    }

    pub fn matrix(&self) -> &RMatrix {
        &self.s
    }

    pub fn dim(&self) -> usize {
        self.s.nrows()
    }

    pub fn transpose(&self) -> Self {
        Self { s: self.s.transpose() }
    }

    pub fn then(&self, next: &OrthogonalStep) -> Result<Self> {
        if next.dim() != self.dim() {
            return Err(Error::dim(format!("{0}x{0} step", self.dim()), next.dim()));
        }
        Ok(Self { s: &next.s * &self.s })
    }
}

/// `q(t + eps) = S q(t)`.
pub fn apply_orthogonal(step: &OrthogonalStep, q: &RealState) -> Result<RealState> {
    if q.len() != step.dim() {
        return Err(Error::dim(format!("{} real components", step.dim()), q.len()));
    }
    let out = &step.s * DVector::from_column_slice(q.components());
    Ok(RealState::from_vec_unchecked(out.as_slice().to_vec()))
}

/// `W` with `S = exp(eps W)` and `W^T = -W`.
#[derive(Debug, Clone, PartialEq)]
pub struct AntisymmetricGenerator {
    pub w: RMatrix,
    pub eps: f64,
}

impl AntisymmetricGenerator {
    pub fn step(&self) -> RMatrix {
        (&self.w * self.eps).exp()
    }

    pub fn antisymmetry_deviation(&self) -> f64 {
        linalg::max_abs_real(&(&self.w + self.w.transpose()))
    }
}

/// Principal `W = log(S) / eps`.
///
/// Fails with [`Error::BranchAmbiguous`] when `S` has an eigenvalue at -1.
pub fn generator(step: &OrthogonalStep, eps: f64) -> Result<AntisymmetricGenerator> {
    if eps.is_nan() || eps <= 0.0 {
        return Err(Error::NonPositiveStep(eps));
    }
    // S is a real unitary; its principal log is real and antisymmetric
    let log = linalg::unitary_log(&linalg::to_complex_matrix(&step.s))?;
    let real = log.map(|z| z.re) / eps;
    let w = (&real - real.transpose()) * 0.5;
    Ok(AntisymmetricGenerator { w, eps })
}

/// `(linear, antilinear) = ((S - I S I) / 2, (S + I S I) / 2)`.
///
/// The linear part commutes with `I`, the antilinear part anticommutes.
pub fn antilinear_split(step: &OrthogonalStep, cs: &ComplexStructure) -> Result<(RMatrix, RMatrix)> {
    if step.dim() != cs.dim() {
        return Err(Error::dim(format!("{0}x{0} step", cs.dim()), step.dim()));
    }
    let isi = cs.i() * &step.s * cs.i();
    Ok(((&step.s - &isi) * 0.5, (&step.s + &isi) * 0.5))
}

/// Gate family whose phases are drawn at random.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StochasticKind {
    /// `e^{i gamma}` on one channel.
    Phase { channel: usize },
    /// Beam split between two channels with random `gamma`, `gamma'`,
    /// `delta` and the matching `delta'`.
    BeamSplit { a: usize, b: usize },
    /// Rotation by a random angle in the plane of two real components
    /// (0-based). Generally not compatible with the complex structure.
    RealRotation { a: usize, b: usize },
}

fn random_angle(rng: &mut ChaCha8Rng) -> f64 {
    rng.random_range(0.0..TAU)
}

/// Replaces the phases of `gate` with random ones. Switches are returned
/// unchanged.
pub fn randomize_phases(gate: &CorrelationGate, rng: &mut ChaCha8Rng) -> CorrelationGate {
    match gate {
        CorrelationGate::PhaseShift { phases } => {
            CorrelationGate::phase_shift(phases.keys().map(|&ch| (ch, random_angle(rng))))
        }
        CorrelationGate::BeamSplit { a, b, .. } => {
            let phases = SplitPhases::completing(random_angle(rng), random_angle(rng), random_angle(rng));
            CorrelationGate::BeamSplit { a: *a, b: *b, phases }
        }
        other => other.clone(),
    }
}

/// Random orthogonal step of the given kind, reproducible from `seed`.
pub fn stochastic_gate(kind: StochasticKind, n_channels: usize, seed: u64) -> Result<OrthogonalStep> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let gate = match kind {
        StochasticKind::Phase { channel } => CorrelationGate::phase(channel, 0.0),
        StochasticKind::BeamSplit { a, b } => CorrelationGate::beam_split(a, b),
        StochasticKind::RealRotation { a, b } => {
            return OrthogonalStep::rotation(2 * n_channels, a, b, random_angle(&mut rng));
        }
    };
    gate.validate(n_channels)?;
    OrthogonalStep::from_gate(&randomize_phases(&gate, &mut rng), n_channels)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::parse_circuit;
    use crate::compiler::compile_circuit;
    use crate::gates::{compose, generator_of_step};
    use crate::linalg::{c, complex_form};
    use crate::state::ComplexState;
    use num_complex::Complex64;
    use proptest::prelude::{prop_assert, proptest};

    fn random_real_state(dim: usize, seed: u64) -> RealState {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let raw: Vec<f64> = (0..dim).map(|_| rng.random_range(-1.0..1.0)).collect();
        let n = raw.iter().map(|x| x * x).sum::<f64>().sqrt();
        RealState::new(raw.iter().map(|x| x / n).collect()).unwrap()
    }

    /// Product of random plane rotations: a generic orthogonal matrix.
    fn random_orthogonal(dim: usize, seed: u64) -> OrthogonalStep {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut s = OrthogonalStep::identity(dim / 2);
        for _ in 0..3 * dim {
            let a = rng.random_range(0..dim);
            let b = (a + rng.random_range(1..dim)) % dim;
            let r = OrthogonalStep::rotation(dim, a, b, rng.random_range(-3.0..3.0)).unwrap();
            s = s.then(&r).unwrap();
        }
        s
    }

    #[test]
    fn identity_step() {
        let q = random_real_state(8, 1);
        assert_eq!(apply_orthogonal(&OrthogonalStep::identity(4), &q).unwrap(), q);
    }

    #[test]
    fn rotation_block_sign_layout() {
        let gamma = 0.7;
        let step = OrthogonalStep::rotation(2, 0, 1, gamma).unwrap();
        let out = apply_orthogonal(&step, &RealState::new(vec![1.0, 0.0]).unwrap()).unwrap();
        assert_eq!(out.components(), &[gamma.cos(), -gamma.sin()]);
        // on the complex amplitude this is multiplication by e^{-i gamma}
        let z = out.to_complex().amplitude(1);
        assert!((z - Complex64::from_polar(1.0, -gamma)).norm() < 1e-15);
    }

    #[test]
    fn non_orthogonal_rejected() {
        let mut s = RMatrix::identity(2, 2);
        s[(0, 1)] = 0.1;
        assert!(matches!(OrthogonalStep::new(s), Err(Error::NotOrthogonal { .. })));
        assert!(OrthogonalStep::new(RMatrix::identity(3, 3)).is_err());
    }

    #[test]
    fn embedding_agrees_with_complex_evolution() {
        let gates = compile_circuit(&parse_circuit("qubits 2\nH 1\nCNOT 1 2\nROT 2 0.4").unwrap()).unwrap();
        let u = compose(&gates, 4).unwrap();
        let step = OrthogonalStep::new(linalg::real_embedding(&u)).unwrap();
        let q = random_real_state(8, 4);
        let via_real = apply_orthogonal(&step, &q).unwrap();
        let v = DVector::from_column_slice(q.to_complex().amplitudes());
        let via_complex = ComplexState::new((&u * v).as_slice().to_vec()).unwrap().to_real();
        for (x, y) in via_real.components().iter().zip(via_complex.components()) {
            assert!((x - y).abs() < 1e-14);
        }
    }

    #[test]
    fn generator_of_identity_is_zero() {
        let g = generator(&OrthogonalStep::identity(2), 0.5).unwrap();
        assert!(linalg::max_abs_real(&g.w) < 1e-14);
    }

    #[test]
    fn generator_of_rotation_block() {
        let (gamma, eps) = (0.9, 0.25);
        let g = generator(&OrthogonalStep::rotation(2, 0, 1, gamma).unwrap(), eps).unwrap();
        let expected = RMatrix::from_row_slice(2, 2, &[0.0, gamma / eps, -gamma / eps, 0.0]);
        assert!(linalg::max_abs_diff_real(&g.w, &expected) < 1e-12, "{}", g.w);
    }

    #[test]
    fn generator_rejects_minus_one() {
        let flip = OrthogonalStep::new(-RMatrix::identity(2, 2)).unwrap();
        assert!(matches!(generator(&flip, 1.0), Err(Error::BranchAmbiguous { .. })));
        assert!(matches!(
            generator(&OrthogonalStep::identity(1), 0.0),
            Err(Error::NonPositiveStep(_))
        ));
    }

    #[test]
    fn generator_round_trips_generic_orthogonal() {
        let mut checked = 0;
        for seed in 0..5 {
            let s = random_orthogonal(8, seed);
            match generator(&s, 0.1) {
                Ok(g) => {
                    assert!(g.antisymmetry_deviation() < 1e-12);
                    assert!(linalg::max_abs_diff_real(&g.step(), s.matrix()) < 1e-8);
                    checked += 1;
                }
                Err(Error::BranchAmbiguous { .. }) => {}
                Err(e) => panic!("{e}"),
            }
        }
        assert!(checked >= 4);
    }

    #[test]
    fn real_generator_matches_hamiltonian() {
        let eps = 0.3;
        let gates = vec![
            CorrelationGate::beam_split_with(1, 2, SplitPhases::completing(0.2, 0.5, -0.4)).unwrap(),
            CorrelationGate::phase(3, 0.8),
            CorrelationGate::phase(2, -1.1),
        ];
        let u = compose(&gates, 4).unwrap();
        let step = OrthogonalStep::new(linalg::real_embedding(&u)).unwrap();
        let w = generator(&step, eps).unwrap();
        let h_from_w = complex_form(&w.w).unwrap() * c(0.0, 1.0);
        let h = generator_of_step(&u, eps).unwrap().h;
        assert!(linalg::hermiticity_deviation(&h_from_w) < 1e-10);
        assert!(linalg::max_abs_diff(&h_from_w, &h) < 1e-9);
    }

    #[test]
    fn split_of_conjugation_and_compatible_steps() {
        let cs = ComplexStructure::standard(2);
        let k = OrthogonalStep::new(cs.k().clone()).unwrap();
        let (lin, anti) = antilinear_split(&k, &cs).unwrap();
        assert!(linalg::max_abs_real(&lin) < 1e-15);
        assert_eq!(&anti, cs.k());
        assert!(!cs.is_compatible(k.matrix()).unwrap());

        let compatible = OrthogonalStep::from_gate(&CorrelationGate::beam_split(1, 4), 4).unwrap();
        let (_, anti) = antilinear_split(&compatible, &ComplexStructure::standard(4)).unwrap();
        assert!(linalg::max_abs_real(&anti) < 1e-15);
    }

    #[test]
    fn compatibility_equivalences() {
        let cs = ComplexStructure::standard(4);
        let generic = random_orthogonal(8, 77);
        let (lin, anti) = antilinear_split(&generic, &cs).unwrap();
        assert!(linalg::max_abs_diff_real(&(&lin + &anti), generic.matrix()) < 1e-12);
        assert!(linalg::max_abs_real(&(&lin * cs.i() - cs.i() * &lin)) < 1e-12);
        assert!(linalg::max_abs_real(&(&anti * cs.i() + cs.i() * &anti)) < 1e-12);
        assert!(linalg::max_abs_real(&anti) > 1e-3);
        assert!(!cs.is_compatible(generic.matrix()).unwrap());
    }

    #[test]
    fn stochastic_gates_are_orthogonal_and_seeded() {
        let kinds = [
            StochasticKind::Phase { channel: 3 },
            StochasticKind::BeamSplit { a: 1, b: 4 },
            StochasticKind::RealRotation { a: 0, b: 5 },
        ];
        let cs = ComplexStructure::standard(4);
        for kind in kinds {
            for seed in 0..20 {
                let s = stochastic_gate(kind, 4, seed).unwrap();
                assert!(linalg::orthogonality_deviation(s.matrix()) < 1e-12);
                assert_eq!(s, stochastic_gate(kind, 4, seed).unwrap());
                let compatible = cs.is_compatible(s.matrix()).unwrap();
                assert_eq!(
                    compatible,
                    !matches!(kind, StochasticKind::RealRotation { .. }),
                    "{kind:?}"
                );
            }
            assert_ne!(
                stochastic_gate(kind, 4, 1).unwrap(),
                stochastic_gate(kind, 4, 2).unwrap()
            );
        }
        assert!(stochastic_gate(StochasticKind::Phase { channel: 5 }, 4, 0).is_err());
        assert!(stochastic_gate(StochasticKind::BeamSplit { a: 2, b: 2 }, 4, 0).is_err());
    }

    #[test]
    fn thousand_stochastic_gates_keep_the_norm() {
        let mut q = random_real_state(16, 9);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for seed in 0..1000u64 {
            let a = rng.random_range(1..=8usize);
            let b = (a % 8) + 1;
            let kind = match seed % 3 {
                0 => StochasticKind::Phase { channel: a },
                1 => StochasticKind::BeamSplit { a, b },
                _ => StochasticKind::RealRotation {
                    a: 2 * a - 2,
                    b: 2 * b - 1,
                },
            };
            q = apply_orthogonal(&stochastic_gate(kind, 8, seed).unwrap(), &q).unwrap();
        }
        assert!((q.norm_sq() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn long_run_drift_and_reversibility() {
        let step = random_orthogonal(8, 5);
        let start = random_real_state(8, 6);
        let mut q = start.clone();
        for _ in 0..10_000 {
            q = apply_orthogonal(&step, &q).unwrap();
        }
        assert!((q.norm_sq() - 1.0).abs() < 1e-9);
        let back = apply_orthogonal(&step.transpose(), &apply_orthogonal(&step, &start).unwrap()).unwrap();
        for (x, y) in back.components().iter().zip(start.components()) {
            assert!((x - y).abs() < 1e-10);
        }
    }

    proptest! {
        #[test]
        fn block_rotation_keeps_pair_intensity(gamma in -6.0f64..6.0, seed in 0u64..1000) {
            let q = random_real_state(8, seed);
            let out = apply_orthogonal(&OrthogonalStep::rotation(8, 2, 5, gamma).unwrap(), &q).unwrap();
            let (x, y) = (q.components(), out.components());
            prop_assert!(((x[2] * x[2] + x[5] * x[5]) - (y[2] * y[2] + y[5] * y[5])).abs() < 1e-14);
            prop_assert!((out.norm_sq() - 1.0).abs() < 1e-12);
        }

        #[test]
        fn split_sums_to_step(seed in 0u64..500) {
            let s = random_orthogonal(6, seed);
            let (lin, anti) = antilinear_split(&s, &ComplexStructure::standard(3)).unwrap();
            prop_assert!(linalg::max_abs_diff_real(&(lin + anti), s.matrix()) < 1e-12);
        }
    }
}
