//! Dynamical frames `{Aˡφ}`: construction, frame bounds, spectral frame and
//! full-spark criteria, and the canonical dual `{Bˡφ̃}`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::linalg::{self, ComplexMatrix, ComplexVector, LinalgError};
use crate::spectral::{
    self, eigenvalues_distinct, JordanSpec, SpectralError, DEPENDENCE_TOL, DISTINCTNESS_TOL,
};
use crate::vandermonde::{
    self, SparkCertificate, SparkMethod, VandermondeError, SPARK_BUDGET, SPARK_TOL,
};

/// A family counts as a frame when `σ_min > FRAME_TOL·σ_max` for its synthesis matrix.
pub const FRAME_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum FrameError {
    #[error("operator must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("generator has dimension {got}, operator is {expected}x{expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("frame length must be at least {min}, got {got}")]
    TooShort { min: usize, got: usize },
    #[error("not a frame: σ_min/σ_max = {ratio:e}")]
    NotAFrame { ratio: f64 },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
    #[error(transparent)]
    Vandermonde(#[from] VandermondeError),
}

/// `(A, φ, L)` with the orbit `φ, Aφ, …, A^{L−1}φ` materialized.
#[derive(Debug, Clone, PartialEq)]
pub struct DynamicalFrame {
    operator: ComplexMatrix,
    generator: ComplexVector,
    vectors: Vec<ComplexVector>,
}

impl DynamicalFrame {
    /// Materializes the orbit by repeated matrix-vector products.
    pub fn build(
        operator: ComplexMatrix,
        generator: ComplexVector,
        len: usize,
    ) -> Result<Self, FrameError> {
        let (rows, cols) = operator.shape();
        if rows != cols {
            return Err(FrameError::NotSquare { rows, cols });
        }
        if generator.len() != rows {
            return Err(FrameError::DimensionMismatch {
                expected: rows,
                got: generator.len(),
            });
        }
        if len == 0 {
            return Err(FrameError::TooShort { min: 1, got: 0 });
        }
        let mut vectors = Vec::with_capacity(len);
        vectors.push(generator.clone());
        for l in 1..len {
            let next = linalg::matvec(&operator, &vectors[l - 1])?;
            vectors.push(next);
        }
        Ok(Self {
            operator,
            generator,
            vectors,
        })
    }

    pub fn operator(&self) -> &ComplexMatrix {
        &self.operator
    }

    pub fn generator(&self) -> &ComplexVector {
        &self.generator
    }

    pub fn dim(&self) -> usize {
        self.generator.len()
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn vectors(&self) -> &[ComplexVector] {
        &self.vectors
    }

    /// `[φ | Aφ | … | A^{L−1}φ]`, `d×L`.
    pub fn synthesis_matrix(&self) -> ComplexMatrix {
        ComplexMatrix::from_columns(&self.vectors)
    }

    /// Frame coefficients `cₗ = ⟨x, Aˡφ⟩`.
    pub fn coefficients(&self, x: &ComplexVector) -> Result<Vec<Complex64>, FrameError> {
        if x.len() != self.dim() {
            return Err(FrameError::DimensionMismatch {
                expected: self.dim(),
                got: x.len(),
            });
        }
        self.vectors
            .iter()
            .map(|v| linalg::inner_product(x, v).map_err(FrameError::from))
            .collect()
    }
}

/// Optimal frame bounds and the frame verdict.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrameAnalysis {
    pub is_frame: bool,
    /// `σ_min(Φ)²`, zero when `L < d`.
    pub lower_bound: f64,
    /// `σ_max(Φ)²`.
    pub upper_bound: f64,
    pub full_spark: Option<SparkCertificate>,
}

pub fn analyze(frame: &DynamicalFrame) -> Result<FrameAnalysis, FrameError> {
    let sv = linalg::singular_values(&frame.synthesis_matrix())?;
    let max = sv.first().copied().unwrap_or(0.0);
    let min = if frame.len() < frame.dim() {
        0.0
    } else {
        sv.last().copied().unwrap_or(0.0)
    };
    Ok(FrameAnalysis {
        is_frame: max > 0.0 && min > FRAME_TOL * max,
        lower_bound: min * min,
        upper_bound: max * max,
        full_spark: None,
    })
}

/// [`analyze`] plus an exhaustive spark certificate of the synthesis matrix.
pub fn analyze_with_spark(
    frame: &DynamicalFrame,
    spark_tol: f64,
    budget: u64,
) -> Result<FrameAnalysis, FrameError> {
    let mut out = analyze(frame)?;
    if frame.len() >= frame.dim() {
        out.full_spark = Some(vandermonde::full_spark(
            &frame.synthesis_matrix(),
            spark_tol,
            budget,
        )?);
    } else {
        out.full_spark = Some(SparkCertificate {
            full_spark: false,
            witness: Some((0..frame.len()).collect()),
            min_abs_det: Some(0.0),
            method: SparkMethod::Enumeration,
        });
    }
    Ok(out)
}

/// Thresholds for the spectral frame criteria.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CriterionTolerance {
    /// Relative pairwise eigenvalue gap.
    pub eigen_gap: f64,
    /// Generator coefficients must exceed this fraction of `‖ψ‖∞`.
    pub coefficient: f64,
}

impl Default for CriterionTolerance {
    fn default() -> Self {
        Self {
            eigen_gap: DISTINCTNESS_TOL,
            coefficient: DEPENDENCE_TOL,
        }
    }
}

fn coefficients_nonvanishing(psi: &[Complex64], rel_tol: f64) -> bool {
    let sup = psi.iter().map(|z| z.norm()).fold(0.0, f64::max);
    sup > 0.0 && psi.iter().all(|z| z.norm() > rel_tol * sup)
}

/// Diagonalizable case: distinct eigenvalues and no vanishing eigen-coordinate of `ψ = S⁻¹φ`.
pub fn frame_criterion_diagonalizable(
    eigenvalues: &ComplexVector,
    psi: &ComplexVector,
    tol: CriterionTolerance,
) -> bool {
    eigenvalues.len() == psi.len()
        && eigenvalues_distinct(eigenvalues.as_slice(), tol.eigen_gap)
        && coefficients_nonvanishing(psi.as_slice(), tol.coefficient)
}

/// Jordan case: distinct block eigenvalues and `φ` depends on every generator.
pub fn frame_criterion_jordan(
    spec: &JordanSpec,
    phi: &ComplexVector,
    tol: CriterionTolerance,
) -> Result<bool, FrameError> {
    Ok(
        eigenvalues_distinct(spec.eigenvalues().as_slice(), tol.eigen_gap)
            && spectral::depends_on_all_generators(spec, phi, tol.coefficient)?,
    )
}

/// Canonical dual frame `{T⁻¹Aˡφ} = {Bˡφ̃}`.
#[derive(Debug, Clone)]
pub struct DualFrame {
    /// `T = Σ (Aˡφ)(Aˡφ)*`.
    pub frame_operator: ComplexMatrix,
    /// `B = T⁻¹AT`.
    pub operator: ComplexMatrix,
    /// `φ̃ = T⁻¹φ`.
    pub generator: ComplexVector,
    synthesis: ComplexMatrix,
}

impl DualFrame {
    /// `Bˡφ̃` for `ℓ < len`.
    pub fn vectors(&self, len: usize) -> Vec<ComplexVector> {
        let mut out = Vec::with_capacity(len);
        let mut v = self.generator.clone();
        for _ in 0..len {
            let next = &self.operator * &v;
            out.push(std::mem::replace(&mut v, next));
        }
        out
    }

    /// `Σ cₗ T⁻¹Aˡφ`, computed as one solve with `T`.
    pub fn reconstruct(&self, coefficients: &[Complex64]) -> Result<ComplexVector, FrameError> {
        if coefficients.len() != self.synthesis.ncols() {
            return Err(FrameError::DimensionMismatch {
                expected: self.synthesis.ncols(),
                got: coefficients.len(),
            });
        }
        let c = ComplexVector::from_column_slice(coefficients);
        Ok(linalg::solve(&self.frame_operator, &(&self.synthesis * c))?)
    }

    /// `Σ cₗ Bˡφ̃`, summing the dual orbit term by term.
    pub fn reconstruct_from_orbit(&self, coefficients: &[Complex64]) -> ComplexVector {
        self.vectors(coefficients.len())
            .into_iter()
            .zip(coefficients)
            .fold(ComplexVector::zeros(self.generator.len()), |acc, (v, c)| {
                acc + v * *c
            })
    }
}

pub fn dual(frame: &DynamicalFrame) -> Result<DualFrame, FrameError> {
    let analysis = analyze(frame)?;
    if !analysis.is_frame {
        let ratio = if analysis.upper_bound > 0.0 {
            (analysis.lower_bound / analysis.upper_bound).sqrt()
        } else {
            0.0
        };
        return Err(FrameError::NotAFrame { ratio });
    }
    let synthesis = frame.synthesis_matrix();
    let t = &synthesis * synthesis.adjoint();
    let b = linalg::solve_matrix(&t, &(frame.operator() * &t))?;
    let phi_tilde = linalg::solve(&t, frame.generator())?;
    Ok(DualFrame {
        frame_operator: t,
        operator: b,
        generator: phi_tilde,
        synthesis,
    })
}

/// Circulant matrix with first column `a`: `C[i][j] = a[(i − j) mod d]`.
pub fn circulant(a: &ComplexVector) -> ComplexMatrix {
    let d = a.len();
    ComplexMatrix::from_fn(d, d, |i, j| a[(i + d - j) % d])
}

/// `v̂ⱼ = Σₖ vₖ e^{−2πijk/d}`, evaluated directly.
pub fn dft(v: &ComplexVector) -> ComplexVector {
    let d = v.len();
    ComplexVector::from_fn(d, |j, _| {
        (0..d)
            .map(|k| v[k] * Complex64::from_polar(1.0, -2.0 * PI * ((j * k) % d) as f64 / d as f64))
            .sum()
    })
}

/// Frame generated by repeated convolution with `a`, and the Fourier-side
/// criterion: `â` has distinct entries and `φ̂` has no vanishing entry.
pub fn circulant_frame(
    a: &ComplexVector,
    phi: &ComplexVector,
    len: usize,
) -> Result<(DynamicalFrame, bool), FrameError> {
    if a.len() != phi.len() {
        return Err(FrameError::DimensionMismatch {
            expected: a.len(),
            got: phi.len(),
        });
    }
    if len < a.len() {
        return Err(FrameError::TooShort {
            min: a.len(),
            got: len,
        });
    }
    let frame = DynamicalFrame::build(circulant(a), phi.clone(), len)?;
    let tol = CriterionTolerance::default();
    let criterion = eigenvalues_distinct(dft(a).as_slice(), tol.eigen_gap)
        && coefficients_nonvanishing(dft(phi).as_slice(), tol.coefficient);
    Ok((frame, criterion))
}

/// `e^{2πik/L}` for `k < d`.
pub fn harmonic_nodes(dim: usize, len: usize) -> ComplexVector {
    ComplexVector::from_fn(dim, |k, _| {
        Complex64::from_polar(1.0, 2.0 * PI * k as f64 / len as f64)
    })
}

/// `A = diag(λ⁰, …, λ^{d−1})` with `λ = e^{2πi/L}` and `φ = 1`.
pub fn harmonic_frame(dim: usize, len: usize) -> Result<DynamicalFrame, FrameError> {
    if dim == 0 || len < dim {
        return Err(FrameError::TooShort { min: dim.max(1), got: len });
    }
    let a = ComplexMatrix::from_diagonal(&harmonic_nodes(dim, len));
    DynamicalFrame::build(a, ComplexVector::from_element(dim, Complex64::new(1.0, 0.0)), len)
}

/// Spark options for [`full_spark_criterion`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SparkOptions {
    pub tol: f64,
    pub budget: u64,
    pub criterion: CriterionTolerance,
}

impl Default for SparkOptions {
    fn default() -> Self {
        Self {
            tol: SPARK_TOL,
            budget: SPARK_BUDGET,
            criterion: CriterionTolerance::default(),
        }
    }
}

fn geometric_ratio(nodes: &ComplexVector, rel_tol: f64) -> Option<Complex64> {
    if nodes.len() < 2 || (nodes[0] - Complex64::new(1.0, 0.0)).norm() > rel_tol {
        return None;
    }
    let ratio = nodes[1];
    let geometric = (2..nodes.len()).all(|k| {
        let want = ratio.powu(k as u32);
        (nodes[k] - want).norm() <= rel_tol * want.norm().max(1.0)
    });
    geometric.then_some(ratio)
}

/// Full-spark verdict for the diagonalizable frame with eigenvalues `λ` and
/// eigen-coordinates `ψ`: `ψ` must be nonvanishing and `V_λ ∈ ℂ^{d×L}` must
/// have full spark.
///
/// Two shortcuts skip enumeration: geometric nodes `λₖ = λ̂ᵏ` with `λ̂ⁿ ≠ 1`
/// for `0 < n < L`, and distinct strictly positive real nodes.
pub fn full_spark_criterion(
    eigenvalues: &ComplexVector,
    psi: &ComplexVector,
    len: usize,
    opts: SparkOptions,
) -> Result<SparkCertificate, FrameError> {
    let d = eigenvalues.len();
    if psi.len() != d {
        return Err(FrameError::DimensionMismatch { expected: d, got: psi.len() });
    }
    if len < d {
        return Err(FrameError::TooShort { min: d, got: len });
    }
    let failing = |method| SparkCertificate {
        full_spark: false,
        witness: Some((0..d).collect()),
        min_abs_det: None,
        method,
    };
    let passing = |method| SparkCertificate {
        full_spark: true,
        witness: None,
        min_abs_det: None,
        method,
    };
    if !coefficients_nonvanishing(psi.as_slice(), opts.criterion.coefficient) {
        return Ok(failing(SparkMethod::VanishingCoefficient));
    }
    if !eigenvalues_distinct(eigenvalues.as_slice(), opts.criterion.eigen_gap) {
        return Ok(failing(SparkMethod::CoincidentNodes));
    }
    if let Some(ratio) = geometric_ratio(eigenvalues, opts.criterion.eigen_gap) {
        let mut power = Complex64::new(1.0, 0.0);
        let separated = (1..len).all(|_| {
            power *= ratio;
            (power - 1.0).norm() > opts.criterion.eigen_gap
        });
        if separated {
            return Ok(passing(SparkMethod::GeometricNodes));
        }
    }
    let scale = eigenvalues.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let positive_real = eigenvalues
        .iter()
        .all(|z| z.im.abs() <= 1e-12 * scale && z.re > opts.criterion.eigen_gap * scale);
    if positive_real {
        return Ok(passing(SparkMethod::NonnegativeReal));
    }
    Ok(vandermonde::full_spark(
        &vandermonde::classical(eigenvalues, len),
        opts.tol,
        opts.budget,
    )?)
}
