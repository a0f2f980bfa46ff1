//! JSON wire formats.
//!
//! Complex numbers travel as `[re, im]` pairs, matrices as arrays of rows.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::frames::{self, DynamicalFrame, FrameError};
use crate::linalg::{ComplexMatrix, ComplexVector};
use crate::retrieval::{MeasurementConfig, RetrievalError};
use crate::spectral::{self, JordanSpec, SpectralError};

/// `[re, im]`.
pub type ComplexPair = [f64; 2];

pub fn pair_from(z: Complex64) -> ComplexPair {
    [z.re, z.im]
}

pub fn vector_to_wire(v: &ComplexVector) -> Vec<ComplexPair> {
    v.iter().map(|&z| pair_from(z)).collect()
}

pub fn vector_from_wire(v: &[ComplexPair]) -> ComplexVector {
    ComplexVector::from_iterator(v.len(), v.iter().map(|p| Complex64::new(p[0], p[1])))
}

pub fn matrix_to_wire(m: &ComplexMatrix) -> Vec<Vec<ComplexPair>> {
    m.row_iter()
        .map(|row| row.iter().map(|&z| pair_from(z)).collect())
        .collect()
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum WireError {
    #[error("matrix rows have unequal lengths (row {row} has {got}, expected {expected})")]
    RaggedMatrix { row: usize, got: usize, expected: usize },
    #[error("matrix has no rows")]
    EmptyMatrix,
}

pub fn matrix_from_wire(rows: &[Vec<ComplexPair>]) -> Result<ComplexMatrix, WireError> {
    let Some(first) = rows.first() else {
        return Err(WireError::EmptyMatrix);
    };
    let cols = first.len();
    if let Some((row, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != cols) {
        return Err(WireError::RaggedMatrix {
            row,
            got: r.len(),
            expected: cols,
        });
    }
    Ok(ComplexMatrix::from_fn(rows.len(), cols, |i, j| {
        Complex64::new(rows[i][j][0], rows[i][j][1])
    }))
}

/// Serde adapter for a [`ComplexVector`] field.
pub mod complex_vector {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &ComplexVector, s: S) -> Result<S::Ok, S::Error> {
        vector_to_wire(v).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<ComplexVector, D::Error> {
        let pairs = Vec::<ComplexPair>::deserialize(d)?;
        Ok(vector_from_wire(&pairs))
    }
}

/// Serde adapter for an optional [`ComplexVector`] field.
pub mod complex_vector_opt {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &Option<ComplexVector>, s: S) -> Result<S::Ok, S::Error> {
        v.as_ref().map(vector_to_wire).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<ComplexVector>, D::Error> {
        let pairs = Option::<Vec<ComplexPair>>::deserialize(d)?;
        Ok(pairs.as_deref().map(vector_from_wire))
    }
}

/// Serde adapter for a [`ComplexMatrix`] field.
pub mod complex_matrix {
    use super::*;
    use serde::{de::Error, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(m: &ComplexMatrix, s: S) -> Result<S::Ok, S::Error> {
        matrix_to_wire(m).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<ComplexMatrix, D::Error> {
        let rows = Vec::<Vec<ComplexPair>>::deserialize(d)?;
        matrix_from_wire(&rows).map_err(D::Error::custom)
    }
}

/// `{"eigenvalues": [[re,im],...], "multiplicities": [...], "basis": [[[re,im],...],...]}`
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct JordanSpecWire {
    pub eigenvalues: Vec<ComplexPair>,
    pub multiplicities: Vec<usize>,
    pub basis: Vec<Vec<ComplexPair>>,
}

impl TryFrom<JordanSpecWire> for JordanSpec {
    type Error = JordanWireError;

    fn try_from(w: JordanSpecWire) -> Result<Self, Self::Error> {
        let basis = matrix_from_wire(&w.basis)?;
        Ok(JordanSpec::new(vector_from_wire(&w.eigenvalues), w.multiplicities, basis)?)
    }
}

impl From<JordanSpec> for JordanSpecWire {
    fn from(s: JordanSpec) -> Self {
        JordanSpecWire {
            eigenvalues: vector_to_wire(s.eigenvalues()),
            multiplicities: s.multiplicities().to_vec(),
            basis: matrix_to_wire(s.basis()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum JordanWireError {
    #[error(transparent)]
    Wire(#[from] WireError),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
}

/// Frame description in an instance file. Exactly one of the four shapes:
///
/// * `{"A": matrix, "phi": vector, "L": n}`
/// * `{"jordan": JordanSpec, "phi": vector, "L": n}`
/// * `{"circulant": vector, "phi": vector, "L": n}`
/// * `{"harmonic": {"d": d, "L": n}}`
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "FrameSpecWire", into = "FrameSpecWire")]
pub enum FrameSpec {
    Matrix {
        operator: ComplexMatrix,
        generator: ComplexVector,
        len: usize,
    },
    Jordan {
        spec: JordanSpec,
        generator: ComplexVector,
        len: usize,
    },
    Circulant {
        first_column: ComplexVector,
        generator: ComplexVector,
        len: usize,
    },
    Harmonic {
        dim: usize,
        len: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HarmonicWire {
    pub d: usize,
    #[serde(rename = "L")]
    pub len: usize,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FrameSpecWire {
    #[serde(rename = "A", skip_serializing_if = "Option::is_none", default)]
    operator: Option<Vec<Vec<ComplexPair>>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    jordan: Option<JordanSpecWire>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    circulant: Option<Vec<ComplexPair>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    harmonic: Option<HarmonicWire>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    phi: Option<Vec<ComplexPair>>,
    #[serde(rename = "L", skip_serializing_if = "Option::is_none", default)]
    len: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum FrameSpecError {
    #[error("frame must have exactly one of \"A\", \"jordan\", \"circulant\", \"harmonic\" (found {0})")]
    Kind(usize),
    #[error("frame is missing \"{0}\"")]
    Missing(&'static str),
    #[error("harmonic frame takes no \"{0}\" next to \"harmonic\"")]
    Extra(&'static str),
    #[error(transparent)]
    Wire(#[from] WireError),
    #[error(transparent)]
    Jordan(#[from] JordanWireError),
}

impl TryFrom<FrameSpecWire> for FrameSpec {
    type Error = FrameSpecError;

    fn try_from(w: FrameSpecWire) -> Result<Self, Self::Error> {
        let kinds = [
            w.operator.is_some(),
            w.jordan.is_some(),
            w.circulant.is_some(),
            w.harmonic.is_some(),
        ];
        let count = kinds.iter().filter(|&&k| k).count();
        if count != 1 {
            return Err(FrameSpecError::Kind(count));
        }
        if let Some(h) = w.harmonic {
            if w.phi.is_some() {
                return Err(FrameSpecError::Extra("phi"));
            }
            if w.len.is_some() {
                return Err(FrameSpecError::Extra("L"));
            }
            return Ok(FrameSpec::Harmonic { dim: h.d, len: h.len });
        }
        let generator = vector_from_wire(&w.phi.ok_or(FrameSpecError::Missing("phi"))?);
        let len = w.len.ok_or(FrameSpecError::Missing("L"))?;
        Ok(if let Some(a) = w.operator {
            FrameSpec::Matrix {
                operator: matrix_from_wire(&a)?,
                generator,
                len,
            }
        } else if let Some(j) = w.jordan {
            FrameSpec::Jordan {
                spec: JordanSpec::try_from(j)?,
                generator,
                len,
            }
        } else {
            FrameSpec::Circulant {
                first_column: vector_from_wire(&w.circulant.unwrap_or_default()),
                generator,
                len,
            }
        })
    }
}

impl From<FrameSpec> for FrameSpecWire {
    fn from(f: FrameSpec) -> Self {
        match f {
            FrameSpec::Matrix {
                operator,
                generator,
                len,
            } => FrameSpecWire {
                operator: Some(matrix_to_wire(&operator)),
                phi: Some(vector_to_wire(&generator)),
                len: Some(len),
                ..Default::default()
            },
            FrameSpec::Jordan {
                spec,
                generator,
                len,
            } => FrameSpecWire {
                jordan: Some(spec.into()),
                phi: Some(vector_to_wire(&generator)),
                len: Some(len),
                ..Default::default()
            },
            FrameSpec::Circulant {
                first_column,
                generator,
                len,
            } => FrameSpecWire {
                circulant: Some(vector_to_wire(&first_column)),
                phi: Some(vector_to_wire(&generator)),
                len: Some(len),
                ..Default::default()
            },
            FrameSpec::Harmonic { dim, len } => FrameSpecWire {
                harmonic: Some(HarmonicWire { d: dim, len }),
                ..Default::default()
            },
        }
    }
}

impl FrameSpec {
    pub fn len(&self) -> usize {
        match self {
            FrameSpec::Matrix { len, .. }
            | FrameSpec::Jordan { len, .. }
            | FrameSpec::Circulant { len, .. }
            | FrameSpec::Harmonic { len, .. } => *len,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn dim(&self) -> usize {
        match self {
            FrameSpec::Matrix { operator, .. } => operator.nrows(),
            FrameSpec::Jordan { spec, .. } => spec.dim(),
            FrameSpec::Circulant { first_column, .. } => first_column.len(),
            FrameSpec::Harmonic { dim, .. } => *dim,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            FrameSpec::Matrix { .. } => "matrix",
            FrameSpec::Jordan { .. } => "jordan",
            FrameSpec::Circulant { .. } => "circulant",
            FrameSpec::Harmonic { .. } => "harmonic",
        }
    }

    /// Eigenvalues and generator coordinates when the operator is known to be
    /// diagonalizable in closed form.
    pub fn diagonal_data(&self) -> Result<Option<(ComplexVector, ComplexVector)>, FrameError> {
        Ok(match self {
            FrameSpec::Jordan { spec, generator, .. } if spec.is_diagonalizable() => {
                let psi = spectral::generator_coordinates(spec, generator)?;
                Some((spec.eigenvalues().clone(), psi.concatenated()))
            }
            FrameSpec::Circulant {
                first_column,
                generator,
                ..
            } => Some((frames::dft(first_column), frames::dft(generator))),
            FrameSpec::Harmonic { dim, len } => Some((
                frames::harmonic_nodes(*dim, *len),
                ComplexVector::from_element(*dim, Complex64::new(1.0, 0.0)),
            )),
            _ => None,
        })
    }

    pub fn build(&self) -> Result<DynamicalFrame, FrameError> {
        match self {
            FrameSpec::Matrix {
                operator,
                generator,
                len,
            } => DynamicalFrame::build(operator.clone(), generator.clone(), *len),
            FrameSpec::Jordan {
                spec,
                generator,
                len,
            } => DynamicalFrame::build(spectral::assemble(spec)?, generator.clone(), *len),
            FrameSpec::Circulant {
                first_column,
                generator,
                len,
            } => Ok(frames::circulant_frame(first_column, generator, *len)?.0),
            FrameSpec::Harmonic { dim, len } => frames::harmonic_frame(*dim, *len),
        }
    }
}

/// A frame, an optional ground-truth signal, and the measurement configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub frame: FrameSpec,
    #[serde(
        with = "complex_vector_opt",
        default,
        skip_serializing_if = "Option::is_none"
    )]
    pub x: Option<ComplexVector>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default)]
    pub config: MeasurementConfig,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum InstanceError {
    #[error("signal has dimension {got}, frame has dimension {expected}")]
    SignalDimension { expected: usize, got: usize },
    #[error("generator has dimension {got}, frame has dimension {expected}")]
    GeneratorDimension { expected: usize, got: usize },
    #[error(transparent)]
    Retrieval(#[from] RetrievalError),
}

impl InstanceFile {
    /// Cross-section consistency: dimensions of `x`, `φ` and the jump range.
    pub fn validate(&self) -> Result<(), InstanceError> {
        let d = self.frame.dim();
        let generator = match &self.frame {
            FrameSpec::Matrix { generator, .. }
            | FrameSpec::Jordan { generator, .. }
            | FrameSpec::Circulant { generator, .. } => Some(generator),
            FrameSpec::Harmonic { .. } => None,
        };
        if let Some(g) = generator {
            if g.len() != d {
                return Err(InstanceError::GeneratorDimension {
                    expected: d,
                    got: g.len(),
                });
            }
        }
        if let Some(x) = &self.x {
            if x.len() != d {
                return Err(InstanceError::SignalDimension {
                    expected: d,
                    got: x.len(),
                });
            }
        }
        self.config.check_dim(d)?;
        Ok(())
    }
}
