//! Jordan-structured operators.
//!
//! A [`JordanSpec`] is the exact structural description `A = S·J·S⁻¹` of a
//! possibly defective matrix. Jordan forms are never computed numerically from
//! a raw matrix; callers supply them.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::combinatorics::binomial;
use crate::linalg::{self, ComplexMatrix, ComplexVector, LinalgError, CONDITION_LIMIT};

/// Relative threshold on the leading generator coefficients, scaled by `‖ψ‖∞`.
pub const DEPENDENCE_TOL: f64 = 1e-10;
/// Relative pairwise gap below which eigenvalues count as coincident.
pub const DISTINCTNESS_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SpectralError {
    #[error("a Jordan spec needs at least one block")]
    Empty,
    #[error("{eigenvalues} eigenvalues but {multiplicities} multiplicities")]
    LengthMismatch {
        eigenvalues: usize,
        multiplicities: usize,
    },
    #[error("block {block} has multiplicity zero")]
    ZeroMultiplicity { block: usize },
    #[error("basis must be {expected}x{expected}, got {rows}x{cols}")]
    BasisShape {
        expected: usize,
        rows: usize,
        cols: usize,
    },
    #[error("basis is singular (condition {condition:e})")]
    SingularBasis { condition: f64 },
    #[error("vector has dimension {got}, expected {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("binomial coefficient C({n}, {k}) overflows u64")]
    BinomialOverflow { n: u64, k: u64 },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// Eigenvalues, block sizes and similarity basis of `A = S·J·S⁻¹`.
///
/// Blocks appear in the order given; block `j` occupies columns
/// `offset(j)..offset(j)+mⱼ` of the basis, the last of which is the Jordan
/// generator.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "crate::io::JordanSpecWire", into = "crate::io::JordanSpecWire")]
pub struct JordanSpec {
    eigenvalues: ComplexVector,
    multiplicities: Vec<usize>,
    basis: ComplexMatrix,
}

impl JordanSpec {
    pub fn new(
        eigenvalues: ComplexVector,
        multiplicities: Vec<usize>,
        basis: ComplexMatrix,
    ) -> Result<Self, SpectralError> {
        if eigenvalues.is_empty() {
            return Err(SpectralError::Empty);
        }
        if eigenvalues.len() != multiplicities.len() {
            return Err(SpectralError::LengthMismatch {
                eigenvalues: eigenvalues.len(),
                multiplicities: multiplicities.len(),
            });
        }
        if let Some(block) = multiplicities.iter().position(|&m| m == 0) {
            return Err(SpectralError::ZeroMultiplicity { block });
        }
        let d: usize = multiplicities.iter().sum();
        if basis.shape() != (d, d) {
            return Err(SpectralError::BasisShape {
                expected: d,
                rows: basis.nrows(),
                cols: basis.ncols(),
            });
        }
        if eigenvalues.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(LinalgError::NonFinite("JordanSpec").into());
        }
        let condition = linalg::condition_number(&basis)?;
        if !(condition <= CONDITION_LIMIT) {
            return Err(SpectralError::SingularBasis { condition });
        }
        Ok(Self {
            eigenvalues,
            multiplicities,
            basis,
        })
    }

    /// Diagonalizable spec: one block of size one per eigenvalue.
    pub fn diagonalizable(
        eigenvalues: ComplexVector,
        basis: ComplexMatrix,
    ) -> Result<Self, SpectralError> {
        let m = vec![1; eigenvalues.len()];
        Self::new(eigenvalues, m, basis)
    }

    pub fn dim(&self) -> usize {
        self.basis.nrows()
    }

    pub fn eigenvalues(&self) -> &ComplexVector {
        &self.eigenvalues
    }

    pub fn multiplicities(&self) -> &[usize] {
        &self.multiplicities
    }

    pub fn basis(&self) -> &ComplexMatrix {
        &self.basis
    }

    pub fn is_diagonalizable(&self) -> bool {
        self.multiplicities.iter().all(|&m| m == 1)
    }

    /// Start column of each block.
    pub fn block_offsets(&self) -> Vec<usize> {
        self.multiplicities
            .iter()
            .scan(0, |acc, &m| {
                let start = *acc;
                *acc += m;
                Some(start)
            })
            .collect()
    }

    /// The Jordan matrix `J` itself.
    pub fn jordan_matrix(&self) -> ComplexMatrix {
        let d = self.dim();
        let mut j = ComplexMatrix::zeros(d, d);
        for (offset, (&lambda, &m)) in self
            .block_offsets()
            .into_iter()
            .zip(self.eigenvalues.iter().zip(&self.multiplicities))
        {
            for k in 0..m {
                j[(offset + k, offset + k)] = lambda;
                if k + 1 < m {
                    j[(offset + k, offset + k + 1)] = Complex64::new(1.0, 0.0);
                }
            }
        }
        j
    }
}

/// `A = S·J·S⁻¹`.
pub fn assemble(spec: &JordanSpec) -> Result<ComplexMatrix, SpectralError> {
    let s = spec.basis();
    let sj = s * spec.jordan_matrix();
    // A·S = S·J  ⇔  Sᴴ·Aᴴ = (S·J)ᴴ
    let a_adj = linalg::solve_matrix(&s.adjoint(), &sj.adjoint())?;
    Ok(a_adj.adjoint())
}

/// `Jᵖ` through the closed form `(Jⱼᵖ)_{k,n} = C(p, n−k)·λⱼ^{p−n+k}`.
pub fn jordan_power(spec: &JordanSpec, power: u32) -> Result<ComplexMatrix, SpectralError> {
    let d = spec.dim();
    let mut out = ComplexMatrix::zeros(d, d);
    let p = u64::from(power);
    for (offset, (&lambda, &m)) in spec
        .block_offsets()
        .into_iter()
        .zip(spec.eigenvalues().iter().zip(spec.multiplicities()))
    {
        for k in 0..m {
            for n in k..m {
                let shift = (n - k) as u64;
                let c = binomial(p, shift).ok_or(SpectralError::BinomialOverflow { n: p, k: shift })?;
                if c == 0 {
                    continue;
                }
                let exponent = (p - shift) as u32;
                out[(offset + k, offset + n)] = lambda.powu(exponent) * c as f64;
            }
        }
    }
    Ok(out)
}

/// Coordinates `ψ = S⁻¹φ` split by Jordan block.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorCoordinates {
    pub blocks: Vec<ComplexVector>,
}

impl GeneratorCoordinates {
    pub fn concatenated(&self) -> ComplexVector {
        let all: Vec<Complex64> = self.blocks.iter().flat_map(|b| b.iter().copied()).collect();
        ComplexVector::from_vec(all)
    }

    /// Coefficient on each block's generator (the block's last coordinate).
    pub fn leading(&self) -> Vec<Complex64> {
        self.blocks.iter().map(|b| b[b.len() - 1]).collect()
    }

    pub fn sup_norm(&self) -> f64 {
        self.blocks
            .iter()
            .flat_map(|b| b.iter())
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }
}

pub fn generator_coordinates(
    spec: &JordanSpec,
    phi: &ComplexVector,
) -> Result<GeneratorCoordinates, SpectralError> {
    if phi.len() != spec.dim() {
        return Err(SpectralError::DimensionMismatch {
            expected: spec.dim(),
            got: phi.len(),
        });
    }
    let psi = linalg::solve(spec.basis(), phi)?;
    let blocks = spec
        .block_offsets()
        .into_iter()
        .zip(spec.multiplicities())
        .map(|(offset, &m)| psi.rows(offset, m).into_owned())
        .collect();
    Ok(GeneratorCoordinates { blocks })
}

/// Whether every block's generator coefficient exceeds `rel_tol·‖ψ‖∞`.
pub fn depends_on_all_generators(
    spec: &JordanSpec,
    phi: &ComplexVector,
    rel_tol: f64,
) -> Result<bool, SpectralError> {
    let coords = generator_coordinates(spec, phi)?;
    let threshold = rel_tol * coords.sup_norm();
    Ok(coords.sup_norm() > 0.0 && coords.leading().iter().all(|z| z.norm() > threshold))
}

/// Upper-left Hankel matrix `H[k][n] = ψ_{k+n}` for `k + n < m`, else zero.
pub fn hankel_of(block: &ComplexVector) -> ComplexMatrix {
    let m = block.len();
    ComplexMatrix::from_fn(m, m, |k, n| {
        if k + n < m {
            block[k + n]
        } else {
            Complex64::new(0.0, 0.0)
        }
    })
}

/// Smallest pairwise distance between entries, `∞` for fewer than two.
pub fn min_pairwise_gap(values: &[Complex64]) -> f64 {
    let mut gap = f64::INFINITY;
    for (i, a) in values.iter().enumerate() {
        for b in &values[i + 1..] {
            gap = gap.min((a - b).norm());
        }
    }
    gap
}

/// Pairwise `|λᵢ − λⱼ| > rel_tol·max|λ|`.
pub fn eigenvalues_distinct(values: &[Complex64], rel_tol: f64) -> bool {
    let scale = values.iter().map(|z| z.norm()).fold(0.0, f64::max);
    values.len() < 2 || min_pairwise_gap(values) > rel_tol * scale
}
