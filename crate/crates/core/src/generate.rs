//! Random instances for experiments and tests.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;

use crate::frames::{DynamicalFrame, FrameError};
use crate::linalg::{self, ComplexMatrix, ComplexVector, LinalgError};
use crate::spectral::{self, JordanSpec, SpectralError};

/// Minimum pairwise distance between sampled eigenvalues.
pub const EIGEN_GAP: f64 = 0.15;
/// Smallest modulus of a sampled generator coordinate.
pub const MIN_COORDINATE: f64 = 0.3;

/// Uniform in `[−1, 1] + i[−1, 1]`.
pub fn complex<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

pub fn signal<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> ComplexVector {
    ComplexVector::from_fn(dim, |_, _| complex(rng))
}

/// `n` eigenvalues in the annulus `0.5 ≤ |λ| ≤ 1.1`, pairwise at least `gap` apart.
pub fn separated_eigenvalues<R: Rng + ?Sized>(rng: &mut R, n: usize, gap: f64) -> ComplexVector {
    let mut out: Vec<Complex64> = Vec::with_capacity(n);
    while out.len() < n {
        let z = Complex64::from_polar(rng.gen_range(0.5..1.1), rng.gen_range(-PI..PI));
        if out.iter().all(|w| (z - w).norm() >= gap) {
            out.push(z);
        }
    }
    ComplexVector::from_vec(out)
}

/// `I + 0.3·G` with `G` uniform; resampled until the condition number is below 50.
pub fn well_conditioned_basis<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> ComplexMatrix {
    loop {
        let m = ComplexMatrix::identity(dim, dim)
            + ComplexMatrix::from_fn(dim, dim, |_, _| complex(rng) * 0.3);
        if matches!(linalg::condition_number(&m), Ok(c) if c < 50.0) {
            return m;
        }
    }
}

pub fn diagonalizable_spec<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> Result<JordanSpec, SpectralError> {
    let values = separated_eigenvalues(rng, dim, EIGEN_GAP);
    JordanSpec::diagonalizable(values, well_conditioned_basis(rng, dim))
}

/// Random composition of `dim` into block sizes.
pub fn partition<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut left = dim;
    while left > 0 {
        let m = rng.gen_range(1..=left);
        out.push(m);
        left -= m;
    }
    out
}

pub fn jordan_spec<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> Result<JordanSpec, SpectralError> {
    let sizes = partition(rng, dim);
    let values = separated_eigenvalues(rng, sizes.len(), EIGEN_GAP);
    JordanSpec::new(values, sizes, well_conditioned_basis(rng, dim))
}

/// Coordinates with modulus in `[MIN_COORDINATE, 1.5]` and uniform phase.
pub fn dense_coordinates<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> ComplexVector {
    ComplexVector::from_fn(dim, |_, _| {
        Complex64::from_polar(rng.gen_range(MIN_COORDINATE..1.5), rng.gen_range(-PI..PI))
    })
}

/// `φ = Sψ` with every coordinate of `ψ` bounded away from zero.
pub fn dense_generator<R: Rng + ?Sized>(rng: &mut R, spec: &JordanSpec) -> ComplexVector {
    spec.basis() * dense_coordinates(rng, spec.dim())
}

/// Operator and generator of a random diagonalizable frame whose generator
/// reaches every eigenvector.
pub fn diagonalizable_frame<R: Rng + ?Sized>(
    rng: &mut R,
    dim: usize,
    len: usize,
) -> Result<(JordanSpec, DynamicalFrame), FrameError> {
    let spec = diagonalizable_spec(rng, dim)?;
    let phi = dense_generator(rng, &spec);
    let frame = DynamicalFrame::build(spectral::assemble(&spec)?, phi, len)?;
    Ok((spec, frame))
}

/// Real rotation by `theta`.
pub fn rotation(theta: f64) -> ComplexMatrix {
    let (s, c) = theta.sin_cos();
    ComplexMatrix::from_row_slice(
        2,
        2,
        &[c, -s, s, c].map(|v| Complex64::new(v, 0.0)),
    )
}

/// Random `x` with `⟨x, Aˡφ⟩ = 0` exactly for every `ℓ` in `zeros`.
pub fn signal_vanishing_on<R: Rng + ?Sized>(
    rng: &mut R,
    frame: &DynamicalFrame,
    zeros: &[usize],
) -> Result<ComplexVector, LinalgError> {
    let x = signal(rng, frame.dim());
    if zeros.is_empty() {
        return Ok(x);
    }
    let cols: Vec<ComplexVector> = zeros.iter().map(|&l| frame.vectors()[l].clone()).collect();
    linalg::project_out(&ComplexMatrix::from_columns(&cols), &x)
}

/// Random signal whose frame coefficients all exceed `floor·‖x‖·max‖vₗ‖` in modulus.
pub fn signal_with_nonzero_coefficients<R: Rng + ?Sized>(
    rng: &mut R,
    frame: &DynamicalFrame,
    floor: f64,
) -> Result<ComplexVector, FrameError> {
    let scale = frame.vectors().iter().map(|v| v.norm()).fold(0.0, f64::max);
    loop {
        let x = signal(rng, frame.dim());
        let bound = floor * x.norm() * scale;
        if frame.coefficients(&x)?.iter().all(|c| c.norm() > bound) {
            return Ok(x);
        }
    }
}
