//! Dense matrix helpers shared by the verification paths.
//!
//! Gate application never goes through here; these routines back the
//! oracles, generator extraction and the real/complex correspondence.

use std::f64::consts::{PI, TAU};

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;
pub type RMatrix = DMatrix<f64>;

/// Eigenphases closer than this to the branch cut at ±π are rejected.
pub const BRANCH_TOL: f64 = 1e-9;

const GOLDEN: f64 = 0.618_033_988_749_894_9;
const MAX_SHIFT_TRIES: usize = 64;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    assert_eq!(a.shape(), b.shape(), "shape mismatch");
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

pub fn max_abs_diff_real(a: &RMatrix, b: &RMatrix) -> f64 {
    assert_eq!(a.shape(), b.shape(), "shape mismatch");
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

pub fn max_abs(a: &CMatrix) -> f64 {
    a.iter().map(|x| x.norm()).fold(0.0, f64::max)
}

pub fn max_abs_real(a: &RMatrix) -> f64 {
    a.iter().map(|x| x.abs()).fold(0.0, f64::max)
}

/// max |U^dagger U - 1|, or infinity for non-square input.
pub fn unitarity_deviation(u: &CMatrix) -> f64 {
    if !u.is_square() {
        return f64::INFINITY;
    }
    let n = u.nrows();
    max_abs_diff(&(u.adjoint() * u), &CMatrix::identity(n, n))
}

/// max |S^T S - 1|, or infinity for non-square input.
pub fn orthogonality_deviation(s: &RMatrix) -> f64 {
    if !s.is_square() {
        return f64::INFINITY;
    }
    let n = s.nrows();
    max_abs_diff_real(&(s.transpose() * s), &RMatrix::identity(n, n))
}

pub fn hermiticity_deviation(h: &CMatrix) -> f64 {
    if !h.is_square() {
        return f64::INFINITY;
    }
    max_abs_diff(h, &h.adjoint())
}

pub fn ensure_unitary(u: &CMatrix, tol: f64) -> Result<()> {
    let deviation = unitarity_deviation(u);
    if deviation <= tol {
        Ok(())
    } else {
        Err(Error::NotUnitary { deviation })
    }
}

pub fn ensure_orthogonal(s: &RMatrix, tol: f64) -> Result<()> {
    let deviation = orthogonality_deviation(s);
    if deviation <= tol {
        Ok(())
    } else {
        Err(Error::NotOrthogonal { deviation })
    }
}

pub fn ensure_hermitian(h: &CMatrix, tol: f64) -> Result<()> {
    let deviation = hermiticity_deviation(h);
    if deviation <= tol {
        Ok(())
    } else {
        Err(Error::NotHermitian { deviation })
    }
}

fn wrap_phase(mut a: f64) -> f64 {
    while a > PI {
        a -= TAU;
    }
    while a <= -PI {
        a += TAU;
    }
    a
}

fn hermitian_part(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()).scale(0.5)
}

/// Eigendecomposition of a unitary matrix, `U = V diag(e^{i theta}) V^dagger`.
///
/// The unitary is first rotated by a global phase so that no eigenvalue sits
/// near -1, then mapped through the Cayley transform
/// `K = i (1 - U)(1 + U)^{-1}`, which is hermitian with eigenvalues
/// `tan(theta / 2)`. Distinct eigenphases stay distinct under the map, so the
/// hermitian eigensolver recovers a full unitary eigenbasis even for
/// permutation matrices where a Schur iteration may stall.
///
/// Phases are returned in (-pi, pi].
pub fn unitary_eigen(u: &CMatrix) -> Result<(CMatrix, Vec<f64>)> {
    if !u.is_square() {
        return Err(Error::dim("square matrix", u.nrows()));
    }
    let n = u.nrows();
    if n == 0 {
        return Ok((CMatrix::zeros(0, 0), Vec::new()));
    }
    // Accept a shift once every eigenvalue is at least pi/(4n) away from -1.
    let accept = -(PI / (4.0 * n as f64)).cos();
    let mut best = (f64::NEG_INFINITY, 0.0);
    for k in 0..MAX_SHIFT_TRIES {
        let shift = TAU * (k as f64 * GOLDEN).fract();
        let rotated = u * Complex64::from_polar(1.0, -shift);
        let lowest = SymmetricEigen::new(hermitian_part(&rotated)).eigenvalues.min();
        if lowest > best.0 {
            best = (lowest, shift);
        }
        if lowest >= accept {
            break;
        }
    }
    let shift = best.1;
    let rotated = u * Complex64::from_polar(1.0, -shift);
    let id = CMatrix::identity(n, n);
    let inverse = (&id + &rotated)
        .try_inverse()
        .ok_or(Error::NotUnitary { deviation: f64::NAN })?;
    let cayley = hermitian_part(&((&id - &rotated) * inverse * c(0.0, 1.0)));
    let eig = SymmetricEigen::new(cayley);
    let phases = eig
        .eigenvalues
        .iter()
        .map(|t| wrap_phase(2.0 * t.atan() + shift))
        .collect();
    Ok((eig.eigenvectors, phases))
}

/// Principal logarithm of a unitary matrix (anti-hermitian result).
pub fn unitary_log(u: &CMatrix) -> Result<CMatrix> {
    let (v, phases) = unitary_eigen(u)?;
    if let Some(&phase) = phases.iter().find(|p| PI - p.abs() < BRANCH_TOL) {
        return Err(Error::BranchAmbiguous { phase });
    }
    let diag = DVector::from_iterator(phases.len(), phases.iter().map(|&p| c(0.0, p)));
    Ok(&v * CMatrix::from_diagonal(&diag) * v.adjoint())
}

/// `exp(-i t H)` for hermitian `H`.
pub fn hermitian_exp(h: &CMatrix, t: f64) -> CMatrix {
    let eig = SymmetricEigen::new(hermitian_part(h));
    let diag = DVector::from_iterator(
        eig.eigenvalues.len(),
        eig.eigenvalues
            .iter()
            .map(|&lambda| Complex64::from_polar(1.0, -t * lambda)),
    );
    &eig.eigenvectors * CMatrix::from_diagonal(&diag) * eig.eigenvectors.adjoint()
}

/// Real 2N x 2N matrix acting on interleaved (re, im) components.
pub fn real_embedding(u: &CMatrix) -> RMatrix {
    let (rows, cols) = u.shape();
    let mut s = RMatrix::zeros(2 * rows, 2 * cols);
    for i in 0..rows {
        for j in 0..cols {
            let z = u[(i, j)];
            s[(2 * i, 2 * j)] = z.re;
            s[(2 * i, 2 * j + 1)] = -z.im;
            s[(2 * i + 1, 2 * j)] = z.im;
            s[(2 * i + 1, 2 * j + 1)] = z.re;
        }
    }
    s
}

/// Complex N x N matrix of the part of `s` that commutes with the standard
/// multiplication by i. Exact inverse of [`real_embedding`] on compatible
/// matrices.
pub fn complex_form(s: &RMatrix) -> Result<CMatrix> {
    let (rows, cols) = s.shape();
    if rows % 2 != 0 || cols % 2 != 0 {
        return Err(Error::dim("even dimensions", rows));
    }
    Ok(CMatrix::from_fn(rows / 2, cols / 2, |i, j| {
        let re = 0.5 * (s[(2 * i, 2 * j)] + s[(2 * i + 1, 2 * j + 1)]);
        let im = 0.5 * (s[(2 * i + 1, 2 * j)] - s[(2 * i, 2 * j + 1)]);
        c(re, im)
    }))
}

pub fn to_complex_matrix(s: &RMatrix) -> CMatrix {
    s.map(|x| c(x, 0.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cyclic(n: usize, step: usize) -> CMatrix {
        let mut p = CMatrix::zeros(n, n);
        for i in 0..n {
            p[((i + step) % n, i)] = c(1.0, 0.0);
        }
        p
    }

    fn reconstruct(v: &CMatrix, phases: &[f64]) -> CMatrix {
        let d = DVector::from_iterator(phases.len(), phases.iter().map(|&p| Complex64::from_polar(1.0, p)));
        v * CMatrix::from_diagonal(&d) * v.adjoint()
    }

    #[test]
    fn eigen_handles_permutations() {
        for (n, step) in [(2, 1), (3, 1), (8, 1), (16, 5), (32, 7)] {
            let p = cyclic(n, step);
            let (v, phases) = unitary_eigen(&p).unwrap();
            assert!(unitarity_deviation(&v) < 1e-12);
            assert!(max_abs_diff(&reconstruct(&v, &phases), &p) < 1e-12, "n={n}");
        }
    }

    #[test]
    fn eigen_handles_degenerate_spectra() {
        let minus = -CMatrix::identity(4, 4);
        let (v, phases) = unitary_eigen(&minus).unwrap();
        assert!(phases.iter().all(|p| (p - PI).abs() < 1e-12));
        assert!(max_abs_diff(&reconstruct(&v, &phases), &minus) < 1e-12);
    }

    #[test]
    fn log_rejects_minus_one() {
        let swap = cyclic(2, 1);
        assert!(matches!(unitary_log(&swap), Err(Error::BranchAmbiguous { .. })));
    }

    #[test]
    fn log_and_exp_invert() {
        let h = CMatrix::from_row_slice(2, 2, &[c(0.3, 0.0), c(0.1, -0.2), c(0.1, 0.2), c(-0.5, 0.0)]);
        let u = hermitian_exp(&h, 1.0);
        let back = unitary_log(&u).unwrap() * c(0.0, 1.0);
        assert!(max_abs_diff(&back, &h) < 1e-12);
        // independent route: nalgebra's Pade exponential
        assert!(max_abs_diff(&(h * c(0.0, -1.0)).exp(), &u) < 1e-12);
    }

    #[test]
    fn embedding_round_trip() {
        let u = CMatrix::from_row_slice(2, 2, &[c(0.6, 0.0), c(0.0, 0.8), c(0.0, 0.8), c(0.6, 0.0)]);
        let s = real_embedding(&u);
        assert!(orthogonality_deviation(&s) < 1e-15);
        assert_eq!(complex_form(&s).unwrap(), u);
    }
}
