//! Dense complex linear algebra.
//!
//! Thin wrappers over nalgebra's factorizations with the conventions the rest
//! of the crate relies on: the inner product is conjugate-linear in its second
//! argument, singular values come back in descending order, and every
//! failure mode is a [`LinalgError`] rather than a panic.

use nalgebra::linalg::{Schur, SVD};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

pub type ComplexScalar = Complex64;
pub type ComplexVector = DVector<Complex64>;
pub type ComplexMatrix = DMatrix<Complex64>;

/// Default absolute tolerance.
pub const ABS_TOL: f64 = 1e-10;
/// Default relative tolerance.
pub const REL_TOL: f64 = 1e-8;
/// Condition numbers above this flag a basis as numerically singular.
pub const CONDITION_LIMIT: f64 = 1e12;
/// LU / QR pivots smaller than this fraction of the largest pivot are treated as zero.
pub const PIVOT_RATIO: f64 = 1e-14;

const SCHUR_MAX_ITER_PER_DIM: usize = 1000;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum LinalgError {
    #[error("dimension mismatch in {op}: {left:?} vs {right:?}")]
    DimensionMismatch {
        op: &'static str,
        left: (usize, usize),
        right: (usize, usize),
    },
    #[error("{op} requires a square matrix, got {rows}x{cols}")]
    NotSquare {
        op: &'static str,
        rows: usize,
        cols: usize,
    },
    #[error("non-finite entry passed to {0}")]
    NonFinite(&'static str),
    #[error("eigenvalue iteration did not converge")]
    NoConvergence,
    #[error("eigenvector basis is ill-conditioned (condition {condition:e}); input is defective or nearly so")]
    Defective { condition: f64 },
    #[error("matrix is singular or rank deficient (pivot ratio {ratio:e})")]
    Singular { ratio: f64 },
    #[error("least squares needs rows >= cols, got {rows}x{cols}")]
    Underdetermined { rows: usize, cols: usize },
}

pub type Result<T, E = LinalgError> = std::result::Result<T, E>;

fn check_finite_matrix(m: &ComplexMatrix, op: &'static str) -> Result<()> {
    if m.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        Ok(())
    } else {
        Err(LinalgError::NonFinite(op))
    }
}

fn check_finite_vector(v: &ComplexVector, op: &'static str) -> Result<()> {
    if v.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        Ok(())
    } else {
        Err(LinalgError::NonFinite(op))
    }
}

fn check_square(m: &ComplexMatrix, op: &'static str) -> Result<usize> {
    if m.is_square() {
        Ok(m.nrows())
    } else {
        Err(LinalgError::NotSquare {
            op,
            rows: m.nrows(),
            cols: m.ncols(),
        })
    }
}

pub fn matmul(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    if a.ncols() != b.nrows() {
        return Err(LinalgError::DimensionMismatch {
            op: "matmul",
            left: a.shape(),
            right: b.shape(),
        });
    }
    check_finite_matrix(a, "matmul")?;
    check_finite_matrix(b, "matmul")?;
    Ok(a * b)
}

pub fn matvec(a: &ComplexMatrix, x: &ComplexVector) -> Result<ComplexVector> {
    if a.ncols() != x.len() {
        return Err(LinalgError::DimensionMismatch {
            op: "matvec",
            left: a.shape(),
            right: (x.len(), 1),
        });
    }
    Ok(a * x)
}

/// `⟨x, y⟩ = Σ xₖ·conj(yₖ)`, so `⟨x, e^{iα}y⟩ = e^{−iα}⟨x, y⟩`.
pub fn inner_product(x: &ComplexVector, y: &ComplexVector) -> Result<ComplexScalar> {
    if x.len() != y.len() {
        return Err(LinalgError::DimensionMismatch {
            op: "inner_product",
            left: (x.len(), 1),
            right: (y.len(), 1),
        });
    }
    check_finite_vector(x, "inner_product")?;
    check_finite_vector(y, "inner_product")?;
    Ok(x.iter().zip(y.iter()).map(|(a, b)| a * b.conj()).sum())
}

/// Determinant via LU with partial pivoting.
pub fn determinant(m: &ComplexMatrix) -> Result<ComplexScalar> {
    check_square(m, "determinant")?;
    check_finite_matrix(m, "determinant")?;
    if m.nrows() == 0 {
        return Ok(Complex64::new(1.0, 0.0));
    }
    Ok(m.clone().lu().determinant())
}

fn lu_pivot_ratio(m: &ComplexMatrix) -> (nalgebra::linalg::LU<Complex64, nalgebra::Dyn, nalgebra::Dyn>, f64) {
    let lu = m.clone().lu();
    let u = lu.u();
    let pivots: Vec<f64> = u.diagonal().iter().map(|z| z.norm()).collect();
    let max = pivots.iter().cloned().fold(0.0, f64::max);
    let min = pivots.iter().cloned().fold(f64::INFINITY, f64::min);
    let ratio = if max > 0.0 { min / max } else { 0.0 };
    (lu, ratio)
}

/// Solves `m·x = b` for square `m`.
pub fn solve(m: &ComplexMatrix, b: &ComplexVector) -> Result<ComplexVector> {
    let n = check_square(m, "solve")?;
    if b.len() != n {
        return Err(LinalgError::DimensionMismatch {
            op: "solve",
            left: m.shape(),
            right: (b.len(), 1),
        });
    }
    check_finite_matrix(m, "solve")?;
    check_finite_vector(b, "solve")?;
    let (lu, ratio) = lu_pivot_ratio(m);
    if ratio <= PIVOT_RATIO {
        return Err(LinalgError::Singular { ratio });
    }
    lu.solve(b).ok_or(LinalgError::Singular { ratio })
}

/// Solves `m·X = b` column by column for square `m`.
pub fn solve_matrix(m: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    let n = check_square(m, "solve_matrix")?;
    if b.nrows() != n {
        return Err(LinalgError::DimensionMismatch {
            op: "solve_matrix",
            left: m.shape(),
            right: b.shape(),
        });
    }
    check_finite_matrix(m, "solve_matrix")?;
    check_finite_matrix(b, "solve_matrix")?;
    let (lu, ratio) = lu_pivot_ratio(m);
    if ratio <= PIVOT_RATIO {
        return Err(LinalgError::Singular { ratio });
    }
    lu.solve(b).ok_or(LinalgError::Singular { ratio })
}

pub fn inverse(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    let n = check_square(m, "inverse")?;
    solve_matrix(m, &ComplexMatrix::identity(n, n))
}

/// Singular values in descending order; `min(rows, cols)` of them.
pub fn singular_values(m: &ComplexMatrix) -> Result<Vec<f64>> {
    check_finite_matrix(m, "singular_values")?;
    if m.nrows() == 0 || m.ncols() == 0 {
        return Ok(Vec::new());
    }
    let svd = SVD::try_new(m.clone(), false, false, f64::EPSILON, 0)
        .ok_or(LinalgError::NoConvergence)?;
    let mut values: Vec<f64> = svd.singular_values.iter().map(|s| s.abs()).collect();
    values.sort_by(|a, b| b.total_cmp(a));
    Ok(values)
}

/// `σ_max / σ_min` of a square matrix; infinite when singular.
pub fn condition_number(m: &ComplexMatrix) -> Result<f64> {
    check_square(m, "condition_number")?;
    let sv = singular_values(m)?;
    match (sv.first(), sv.last()) {
        (Some(&max), Some(&min)) if min > 0.0 => Ok(max / min),
        (Some(_), Some(_)) => Ok(f64::INFINITY),
        _ => Ok(1.0),
    }
}

/// Numerical rank: singular values above `rel_tol·σ_max`.
pub fn rank(m: &ComplexMatrix, rel_tol: f64) -> Result<usize> {
    let sv = singular_values(m)?;
    let Some(&max) = sv.first() else {
        return Ok(0);
    };
    Ok(sv.iter().filter(|&&s| s > rel_tol * max).count())
}

/// Eigenpairs of a diagonalizable matrix; `a·vectors = vectors·diag(values)`.
#[derive(Debug, Clone)]
pub struct Eigendecomposition {
    pub values: ComplexVector,
    /// Unit-norm eigenvectors as columns.
    pub vectors: ComplexMatrix,
    /// Condition number of `vectors`.
    pub condition: f64,
}

/// Eigendecomposition through the complex Schur form.
///
/// Defective (or nearly defective) input is rejected through the condition
/// number of the eigenvector basis instead of attempting a Jordan form.
pub fn eigendecompose(m: &ComplexMatrix) -> Result<Eigendecomposition> {
    let n = check_square(m, "eigendecompose")?;
    check_finite_matrix(m, "eigendecompose")?;
    if n == 0 {
        return Ok(Eigendecomposition {
            values: ComplexVector::zeros(0),
            vectors: ComplexMatrix::zeros(0, 0),
            condition: 1.0,
        });
    }
    let schur = Schur::try_new(m.clone(), f64::EPSILON, SCHUR_MAX_ITER_PER_DIM * n)
        .ok_or(LinalgError::NoConvergence)?;
    let (q, t) = schur.unpack();
    let values = t.diagonal();

    // Eigenvectors of the triangular factor by back substitution; tiny
    // denominators are floored the way LAPACK's trevc does it.
    let smin = (f64::EPSILON * t.norm()).max(f64::MIN_POSITIVE);
    let mut v = ComplexMatrix::zeros(n, n);
    for k in 0..n {
        v[(k, k)] = Complex64::new(1.0, 0.0);
        for i in (0..k).rev() {
            let mut acc = Complex64::new(0.0, 0.0);
            for j in (i + 1)..=k {
                acc += t[(i, j)] * v[(j, k)];
            }
            let mut den = t[(i, i)] - t[(k, k)];
            if den.norm() < smin {
                den = Complex64::new(smin, 0.0);
            }
            v[(i, k)] = -acc / den;
        }
    }
    let mut vectors = q * v;
    for mut col in vectors.column_iter_mut() {
        let norm = col.norm();
        if norm > 0.0 {
            col.unscale_mut(norm);
        }
    }
    let condition = condition_number(&vectors)?;
    if !(condition <= CONDITION_LIMIT) {
        return Err(LinalgError::Defective { condition });
    }
    let residual = (m * &vectors - &vectors * ComplexMatrix::from_diagonal(&values)).norm();
    if residual > 1e-8 * m.norm().max(f64::MIN_POSITIVE) {
        return Err(LinalgError::NoConvergence);
    }
    Ok(Eigendecomposition {
        values,
        vectors,
        condition,
    })
}

/// Minimizer of `‖m·x − b‖₂` through Householder QR; `m` must have full column rank.
pub fn solve_least_squares(m: &ComplexMatrix, b: &ComplexVector) -> Result<ComplexVector> {
    let (rows, cols) = m.shape();
    if rows < cols {
        return Err(LinalgError::Underdetermined { rows, cols });
    }
    if b.len() != rows {
        return Err(LinalgError::DimensionMismatch {
            op: "solve_least_squares",
            left: m.shape(),
            right: (b.len(), 1),
        });
    }
    check_finite_matrix(m, "solve_least_squares")?;
    check_finite_vector(b, "solve_least_squares")?;
    if cols == 0 {
        return Ok(ComplexVector::zeros(0));
    }
    let qr = m.clone().qr();
    let r = qr.r();
    let diag: Vec<f64> = r.diagonal().iter().map(|z| z.norm()).collect();
    let max = diag.iter().cloned().fold(0.0, f64::max);
    let min = diag.iter().cloned().fold(f64::INFINITY, f64::min);
    let ratio = if max > 0.0 { min / max } else { 0.0 };
    if ratio <= PIVOT_RATIO {
        return Err(LinalgError::Singular { ratio });
    }
    let rhs = qr.q().adjoint() * b;
    r.solve_upper_triangular(&rhs)
        .ok_or(LinalgError::Singular { ratio })
}

/// Removes from `v` its component in the column span of `spanning`.
pub fn project_out(spanning: &ComplexMatrix, v: &ComplexVector) -> Result<ComplexVector> {
    if spanning.nrows() != v.len() {
        return Err(LinalgError::DimensionMismatch {
            op: "project_out",
            left: spanning.shape(),
            right: (v.len(), 1),
        });
    }
    if spanning.ncols() == 0 {
        return Ok(v.clone());
    }
    let q = spanning.clone().qr().q();
    // Two passes keep the result orthogonal to working precision.
    let once = v - &q * (q.adjoint() * v);
    Ok(&once - &q * (q.adjoint() * &once))
}

/// Hermitian adjoint `m*`.
pub fn adjoint(m: &ComplexMatrix) -> ComplexMatrix {
    m.adjoint()
}
