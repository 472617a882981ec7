//! Spin expectations, operator expectations and the CHSH combination.

use std::fmt;
use std::str::FromStr;

use nalgebra::DVector;
use num_complex::Complex64;

use crate::compiler::{pauli_x, pauli_z, single_qubit_operator, ChannelMap};
use crate::error::{Error, Result};
use crate::gates::{compose, CorrelationGate};
use crate::linalg::{self, c, CMatrix};
use crate::state::ComplexState;
use crate::tol;

/// Product `s_{j1} s_{j2} ...` of Ising spins over distinct qubits.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SpinObservable {
    qubits: Vec<usize>,
}

impl SpinObservable {
    pub fn new(qubits: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut qubits: Vec<usize> = qubits.into_iter().collect();
        if qubits.is_empty() {
            return Err(Error::Unsupported("spin observable needs at least one qubit".into()));
        }
        let before = qubits.len();
        qubits.sort_unstable();
        qubits.dedup();
        if qubits.len() != before {
            return Err(Error::Unsupported("spin observable repeats a qubit".into()));
        }
        if qubits[0] == 0 {
            return Err(Error::QubitOutOfRange { qubit: 0, n_qubits: 0 });
        }
        Ok(Self { qubits })
    }

    pub fn single(qubit: usize) -> Result<Self> {
        Self::new([qubit])
    }

    pub fn qubits(&self) -> &[usize] {
        &self.qubits
    }

    fn check(&self, mq: usize) -> Result<()> {
        match self.qubits.last() {
            Some(&q) if q > mq => Err(Error::QubitOutOfRange { qubit: q, n_qubits: mq }),
            _ => Ok(()),
        }
    }

    /// `prod_j s_j` for a 0-based channel index.
    fn value_at(&self, map: &ChannelMap, index: usize) -> f64 {
        self.qubits
            .iter()
            .map(|&j| map.spin_of_index(index, j) as f64)
            .product()
    }
}

impl fmt::Display for SpinObservable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for q in &self.qubits {
            write!(f, "s{q}")?;
        }
        Ok(())
    }
}

/// Parses names such as `s1`, `s2s3`, `s1s2s3`.
impl FromStr for SpinObservable {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Unsupported(format!("invalid observable `{s}`; expected e.g. s1 or s1s2"));
        let body = s.trim();
        if !body.starts_with('s') {
            return Err(bad());
        }
        let qubits = body[1..]
            .split('s')
            .map(|part| {
                if part.is_empty() || !part.bytes().all(|b| b.is_ascii_digit()) {
                    Err(bad())
                } else {
                    part.parse::<usize>().map_err(|_| bad())
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(qubits)
    }
}

/// Every single spin followed by every pair.
pub fn default_observables(mq: usize) -> Vec<SpinObservable> {
    let singles = (1..=mq).map(|j| SpinObservable { qubits: vec![j] });
    let pairs = (1..=mq).flat_map(|i| ((i + 1)..=mq).map(move |j| SpinObservable { qubits: vec![i, j] }));
    singles.chain(pairs).collect()
}

/// `sum_alpha pbar_alpha prod_j s_j(alpha)`.
pub fn spin_expectation(pbar: &[f64], obs: &SpinObservable, mq: usize) -> Result<f64> {
    let map = ChannelMap::new(mq);
    if pbar.len() != map.n_channels() {
        return Err(Error::dim(format!("{} probabilities", map.n_channels()), pbar.len()));
    }
    let total: f64 = pbar.iter().sum();
    if (total - 1.0).abs() > tol::PROBABILITY {
        return Err(Error::InvalidProbabilities(format!("sum is {total}")));
    }
    obs.check(mq)?;
    Ok(pbar.iter().enumerate().map(|(i, p)| p * obs.value_at(&map, i)).sum())
}

/// Operator that is diagonal in the channel basis.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagonalOperator {
    pub diag: Vec<f64>,
}

impl DiagonalOperator {
    /// Eigenvalue `prod_j s_j(alpha)` on every channel.
    pub fn from_spins(obs: &SpinObservable, mq: usize) -> Result<Self> {
        obs.check(mq)?;
        let map = ChannelMap::new(mq);
        Ok(Self {
            diag: (0..map.n_channels()).map(|i| obs.value_at(&map, i)).collect(),
        })
    }

    pub fn matrix(&self) -> CMatrix {
        CMatrix::from_diagonal(&DVector::from_iterator(
            self.diag.len(),
            self.diag.iter().map(|&d| c(d, 0.0)),
        ))
    }

    pub fn expectation(&self, psi: &ComplexState) -> Result<f64> {
        if self.diag.len() != psi.n_channels() {
            return Err(Error::dim(
                format!("{} diagonal entries", psi.n_channels()),
                self.diag.len(),
            ));
        }
        Ok(self
            .diag
            .iter()
            .zip(psi.amplitudes())
            .map(|(d, z)| d * z.norm_sqr())
            .sum())
    }
}

/// `psi^dagger O psi` for hermitian `O`.
pub fn operator_expectation(psi: &ComplexState, op: &CMatrix) -> Result<f64> {
    let n = psi.n_channels();
    if op.shape() != (n, n) {
        return Err(Error::dim(format!("{n}x{n} operator"), op.nrows()));
    }
    linalg::ensure_hermitian(op, tol::MATRIX)?;
    let v = DVector::from_column_slice(psi.amplitudes());
    let value: Complex64 = v.dotc(&(op * &v));
    debug_assert!(value.im.abs() < tol::MATRIX, "imaginary part {}", value.im);
    Ok(value.re)
}

/// Heisenberg-picture operator `U O U^dagger`, `U = compose(gates)`.
///
/// Measuring it on the state after the gates gives the expectation of `O`
/// on the state before them.
pub fn heisenberg_operator(op: &CMatrix, gates: &[CorrelationGate], n_channels: usize) -> Result<CMatrix> {
    if op.shape() != (n_channels, n_channels) {
        return Err(Error::dim(format!("{n_channels}x{n_channels} operator"), op.nrows()));
    }
    let u = compose(gates, n_channels)?;
    Ok(&u * op * u.adjoint())
}

/// Four single-qubit settings: `a`, `a_prime` for one qubit, `b`, `b_prime`
/// for the other. Each must be hermitian with eigenvalues +-1.
#[derive(Debug, Clone, PartialEq)]
pub struct ChshSettings {
    pub a: CMatrix,
    pub a_prime: CMatrix,
    pub b: CMatrix,
    pub b_prime: CMatrix,
}

impl ChshSettings {
    /// Settings in the x-z plane: each operator is `cos(t) Z + sin(t) X`.
    pub fn from_angles(a: f64, a_prime: f64, b: f64, b_prime: f64) -> Self {
        let axis = |t: f64| pauli_z().scale(t.cos()) + pauli_x().scale(t.sin());
        Self {
            a: axis(a),
            a_prime: axis(a_prime),
            b: axis(b),
            b_prime: axis(b_prime),
        }
    }

    /// `A = Z`, `A' = X`, `B = (Z + X)/sqrt(2)`, `B' = (Z - X)/sqrt(2)`.
    ///
    /// These are the x-z plane angles `(0, pi/2, pi/4, -pi/4)` found by the
    /// exhaustive angle search in the observables tests.
    pub fn optimal() -> Self {
        use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_4};
        let mut s = Self::from_angles(0.0, FRAC_PI_2, FRAC_PI_4, -FRAC_PI_4);
        // exact forms; the angle evaluation leaves ~1e-17 residue
        s.a = pauli_z();
        s.a_prime = pauli_x();
        s.b = (pauli_z() + pauli_x()).scale(FRAC_1_SQRT_2);
        s.b_prime = (pauli_z() - pauli_x()).scale(FRAC_1_SQRT_2);
        s
    }

    pub fn validate(&self) -> Result<()> {
        let id = CMatrix::identity(2, 2);
        for (name, m) in [
            ("A", &self.a),
            ("A'", &self.a_prime),
            ("B", &self.b),
            ("B'", &self.b_prime),
        ] {
            if m.shape() != (2, 2) {
                return Err(Error::InvalidSettings(format!("{name} is not 2x2")));
            }
            if linalg::hermiticity_deviation(m) > tol::MATRIX {
                return Err(Error::InvalidSettings(format!("{name} is not hermitian")));
            }
            if linalg::max_abs_diff(&(m * m), &id) > tol::MATRIX {
                return Err(Error::InvalidSettings(format!("{name} does not have eigenvalues +-1")));
            }
        }
        Ok(())
    }
}

/// `|<A B> + <A B'> + <A' B> - <A' B'>|` with `A`, `A'` on `qubit_a` and
/// `B`, `B'` on `qubit_b`.
pub fn chsh_value(psi: &ComplexState, settings: &ChshSettings, qubit_a: usize, qubit_b: usize) -> Result<f64> {
    let mq = psi.mq();
    if mq < 2 {
        return Err(Error::TooFewQubits { needed: 2, found: mq });
    }
    if qubit_a == qubit_b {
        return Err(Error::RepeatedIndex(qubit_a));
    }
    settings.validate()?;
    let on_a = |m: &CMatrix| single_qubit_operator(m, qubit_a, mq);
    let on_b = |m: &CMatrix| single_qubit_operator(m, qubit_b, mq);
    let (a, a_prime) = (on_a(&settings.a)?, on_a(&settings.a_prime)?);
    let (b, b_prime) = (on_b(&settings.b)?, on_b(&settings.b_prime)?);
    let corr = |x: &CMatrix, y: &CMatrix| operator_expectation(psi, &(x * y));
    let value = corr(&a, &b)? + corr(&a, &b_prime)? + corr(&a_prime, &b)? - corr(&a_prime, &b_prime)?;
    Ok(value.abs())
}
