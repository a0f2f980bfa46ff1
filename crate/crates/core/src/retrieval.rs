//! Phaseless measurements of a signal against a dynamical frame and its
//! reconstruction up to a global phase.
//!
//! Measurements are `|cₗ|` and `|cₗ + e^{−iαₖ}c_{ℓ+j}|` where `cₗ = ⟨x, Aˡφ⟩`.
//! The sign flip on `αₖ` comes from the inner product being conjugate-linear
//! in its second argument, so polarization runs with `(−α₁, −α₂)`.

use std::collections::{BTreeMap, VecDeque};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::frames::{self, DynamicalFrame, FrameError};
use crate::linalg::{self, ComplexMatrix, ComplexVector, LinalgError};
use crate::polarization::{
    self, PolarizationAngles, PolarizationData, PolarizationError, Sign,
};

pub const DEFAULT_ZERO_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum RetrievalError {
    #[error("signal has dimension {got}, frame has dimension {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("frame has length {frame}, measurements have length {measurements}")]
    LengthMismatch { frame: usize, measurements: usize },
    #[error("measurement set and configuration disagree on {0}")]
    ConfigMismatch(&'static str),
    #[error("jump parameter J = {jumps} is out of range for dimension {dim} (need J <= d - 2)")]
    JumpOutOfRange { jumps: usize, dim: usize },
    #[error("coefficient {index} is numerically zero (|c| = {value:e}); use the zero-aware recovery")]
    ZeroCoefficient { index: usize, value: f64 },
    #[error("missing aligned measurement (l = {l}, j = {j}, k = {k})")]
    MissingAligned { l: usize, j: usize, k: u8 },
    #[error("unexpected aligned measurement (l = {l}, j = {j}, k = {k})")]
    UnexpectedAligned { l: usize, j: usize, k: u8 },
    #[error("measurement {0} is negative or not finite")]
    InvalidValue(f64),
    #[error("real mode needs the first angle in {{0, π}}, got {0}")]
    RealAngleRequired(f64),
    #[error("all measurements are empty")]
    Empty,
    #[error("polarization failed on edge ({l}, {}): {source}", l + j)]
    Polarization {
        l: usize,
        j: usize,
        source: PolarizationError,
    },
    #[error("selected subframe is singular (the frame is not full spark?)")]
    SingularSubframe,
    #[error(transparent)]
    Frame(#[from] FrameError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// Shape of the measurement set and the thresholds used to invert it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MeasurementConfig {
    pub angles: PolarizationAngles,
    /// Largest jump is `J + 1`.
    #[serde(rename = "J")]
    pub jumps: usize,
    pub zero_tol: f64,
    /// Measure with the first angle only (`0` or `π`) and recover up to sign.
    pub real_mode: bool,
}

impl Default for MeasurementConfig {
    fn default() -> Self {
        Self {
            angles: PolarizationAngles::default(),
            jumps: 0,
            zero_tol: DEFAULT_ZERO_TOL,
            real_mode: false,
        }
    }
}

impl MeasurementConfig {
    /// `J ≤ d − 2`, with `J = 0` always allowed.
    pub fn check_dim(&self, dim: usize) -> Result<(), RetrievalError> {
        if self.jumps > 0 && self.jumps + 2 > dim {
            return Err(RetrievalError::JumpOutOfRange {
                jumps: self.jumps,
                dim,
            });
        }
        Ok(())
    }

    fn real_sign(&self) -> Result<Sign, RetrievalError> {
        Sign::from_angle(self.angles.first())
            .ok_or(RetrievalError::RealAngleRequired(self.angles.first()))
    }

    fn angle_indices(&self) -> &'static [u8] {
        if self.real_mode {
            &[1]
        } else {
            &[1, 2]
        }
    }
}

/// Index `(ℓ, j, k)` of `|⟨x, Aˡ(φ + e^{iαₖ}Aʲφ)⟩|`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct AlignedKey {
    pub l: usize,
    pub j: usize,
    pub k: u8,
}

/// Base magnitudes `|cₗ|` and the aligned magnitudes over the full `(ℓ, j, k)` grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MeasurementSetWire", into = "MeasurementSetWire")]
pub struct MeasurementSet {
    jumps: usize,
    angles: PolarizationAngles,
    base: Vec<f64>,
    aligned: BTreeMap<AlignedKey, f64>,
}

fn grid(len: usize, jumps: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..len.saturating_sub(1))
        .flat_map(move |l| (1..=jumps + 1).filter(move |j| l + j < len).map(move |j| (l, j)))
}

impl MeasurementSet {
    /// Validates that every value is a finite nonnegative number and the grid is
    /// complete, either for `k ∈ {1, 2}` or for `k = 1` alone.
    pub fn new(
        jumps: usize,
        angles: PolarizationAngles,
        base: Vec<f64>,
        aligned: BTreeMap<AlignedKey, f64>,
    ) -> Result<Self, RetrievalError> {
        if base.is_empty() {
            return Err(RetrievalError::Empty);
        }
        for &v in base.iter().chain(aligned.values()) {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(RetrievalError::InvalidValue(v));
            }
        }
        let len = base.len();
        let two_angles = aligned.keys().any(|key| key.k == 2);
        let ks: &[u8] = if two_angles { &[1, 2] } else { &[1] };
        let mut expected = 0;
        for (l, j) in grid(len, jumps) {
            for &k in ks {
                if !aligned.contains_key(&AlignedKey { l, j, k }) {
                    return Err(RetrievalError::MissingAligned { l, j, k });
                }
                expected += 1;
            }
        }
        if aligned.len() != expected {
            let extra = aligned
                .keys()
                .find(|key| {
                    !ks.contains(&key.k) || key.j == 0 || key.j > jumps + 1 || key.l + key.j >= len
                })
                .copied()
                .unwrap_or(AlignedKey { l: 0, j: 0, k: 0 });
            return Err(RetrievalError::UnexpectedAligned {
                l: extra.l,
                j: extra.j,
                k: extra.k,
            });
        }
        Ok(Self {
            jumps,
            angles,
            base,
            aligned,
        })
    }

    pub fn len(&self) -> usize {
        self.base.len()
    }

    pub fn is_empty(&self) -> bool {
        self.base.is_empty()
    }

    pub fn jumps(&self) -> usize {
        self.jumps
    }

    pub fn angles(&self) -> PolarizationAngles {
        self.angles
    }

    pub fn base(&self) -> &[f64] {
        &self.base
    }

    pub fn aligned(&self) -> &BTreeMap<AlignedKey, f64> {
        &self.aligned
    }

    pub fn get(&self, l: usize, j: usize, k: u8) -> Option<f64> {
        self.aligned.get(&AlignedKey { l, j, k }).copied()
    }

    /// Whether the set carries measurements for the second angle.
    pub fn has_second_angle(&self) -> bool {
        self.aligned.keys().any(|key| key.k == 2)
    }

    /// All magnitudes, base first, then aligned in key order.
    pub fn values(&self) -> impl Iterator<Item = f64> + '_ {
        self.base.iter().chain(self.aligned.values()).copied()
    }

    /// Applies `f` to every magnitude and clamps the result at zero.
    pub fn map_values(&self, mut f: impl FnMut(f64) -> f64) -> Self {
        let mut out = self.clone();
        for v in out.base.iter_mut().chain(out.aligned.values_mut()) {
            *v = f(*v).max(0.0);
        }
        out
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct AlignedEntry {
    l: usize,
    j: usize,
    k: u8,
    value: f64,
}

/// `{"L", "J", "angles", "base", "aligned": [{"l", "j", "k", "value"}, ...]}`
#[derive(Debug, Clone, Serialize, Deserialize)]
struct MeasurementSetWire {
    #[serde(rename = "L")]
    len: usize,
    #[serde(rename = "J")]
    jumps: usize,
    angles: PolarizationAngles,
    base: Vec<f64>,
    aligned: Vec<AlignedEntry>,
}

impl TryFrom<MeasurementSetWire> for MeasurementSet {
    type Error = RetrievalError;

    fn try_from(w: MeasurementSetWire) -> Result<Self, Self::Error> {
        if w.len != w.base.len() {
            return Err(RetrievalError::LengthMismatch {
                frame: w.len,
                measurements: w.base.len(),
            });
        }
        let mut aligned = BTreeMap::new();
        for e in w.aligned {
            let key = AlignedKey { l: e.l, j: e.j, k: e.k };
            if aligned.insert(key, e.value).is_some() {
                return Err(RetrievalError::UnexpectedAligned { l: e.l, j: e.j, k: e.k });
            }
        }
        MeasurementSet::new(w.jumps, w.angles, w.base, aligned)
    }
}

impl From<MeasurementSet> for MeasurementSetWire {
    fn from(m: MeasurementSet) -> Self {
        MeasurementSetWire {
            len: m.base.len(),
            jumps: m.jumps,
            angles: m.angles,
            aligned: m
                .aligned
                .into_iter()
                .map(|(key, value)| AlignedEntry {
                    l: key.l,
                    j: key.j,
                    k: key.k,
                    value,
                })
                .collect(),
            base: m.base,
        }
    }
}

/// Simulates the measurement set of `x`.
pub fn measure(
    x: &ComplexVector,
    frame: &DynamicalFrame,
    cfg: &MeasurementConfig,
) -> Result<MeasurementSet, RetrievalError> {
    if x.len() != frame.dim() {
        return Err(RetrievalError::DimensionMismatch {
            expected: frame.dim(),
            got: x.len(),
        });
    }
    cfg.check_dim(frame.dim())?;
    if cfg.real_mode {
        cfg.real_sign()?;
    }
    let c = frame.coefficients(x)?;
    let base = c.iter().map(|z| z.norm()).collect();
    let mut aligned = BTreeMap::new();
    for (l, j) in grid(c.len(), cfg.jumps) {
        for &k in cfg.angle_indices() {
            let rot = Complex64::from_polar(1.0, -cfg.angles.get(k));
            aligned.insert(AlignedKey { l, j, k }, (c[l] + rot * c[l + j]).norm());
        }
    }
    MeasurementSet::new(cfg.jumps, cfg.angles, base, aligned)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RecoveryStatus {
    /// Every phase-assigned coefficient lies in one chain and the known
    /// coefficients determine the signal.
    Recovered,
    /// The longest chain plus the coefficients known to vanish determine the
    /// signal, but some nonzero coefficients were left without a phase.
    RecoveredPartialChain,
    Failed,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RecoveryResult {
    #[serde(with = "crate::io::complex_vector")]
    pub estimate: ComplexVector,
    pub status: RecoveryStatus,
    /// Indices whose coefficient received a phase.
    pub used_indices: Vec<usize>,
    /// Number of coefficients known up to the global phase: the phased chain
    /// together with the coefficients known to vanish.
    pub component_size: usize,
    /// ℓ₂ distance between the measurements of the estimate and the input measurements.
    pub residual: f64,
}

/// Converts aligned magnitudes into edge products `c̄ₐc_b`.
struct ProductSource<'a> {
    ms: &'a MeasurementSet,
    negated: PolarizationAngles,
    sign: Option<Sign>,
}

impl<'a> ProductSource<'a> {
    fn new(ms: &'a MeasurementSet, cfg: &MeasurementConfig) -> Result<Self, RetrievalError> {
        let sign = if cfg.real_mode {
            Some(cfg.real_sign()?)
        } else {
            None
        };
        Ok(Self {
            ms,
            negated: ms.angles.negated(),
            sign,
        })
    }

    fn lookup(&self, l: usize, j: usize, k: u8) -> Result<f64, RetrievalError> {
        self.ms.get(l, j, k).ok_or(RetrievalError::MissingAligned { l, j, k })
    }

    /// `c̄ₗ c_{ℓ+j}`.
    fn product(&self, l: usize, j: usize) -> Result<Complex64, RetrievalError> {
        let (m1, m2) = (self.ms.base[l], self.ms.base[l + j]);
        let wrap = |source| RetrievalError::Polarization { l, j, source };
        match self.sign {
            Some(sign) => {
                let sum = self.lookup(l, j, 1)?;
                let p = polarization::recover_product_real(m1, m2, sum, sign).map_err(wrap)?;
                Ok(Complex64::new(p, 0.0))
            }
            None => {
                let data = PolarizationData::new(m1, m2, self.lookup(l, j, 1)?, self.lookup(l, j, 2)?)
                    .map_err(wrap)?;
                polarization::recover_product(&data, self.negated).map_err(wrap)
            }
        }
    }
}

/// Nonzero indices under the relative threshold `zero_tol·max(base)`.
pub fn nonzero_pattern(base: &[f64], zero_tol: f64) -> Vec<bool> {
    let max = base.iter().cloned().fold(0.0, f64::max);
    base.iter().map(|&b| b > zero_tol * max && b > 0.0).collect()
}

/// Connected components of the nonzero indices under edges `(ℓ, ℓ+j)`,
/// `1 ≤ j ≤ J+1`, ordered by their smallest index.
pub fn chain_components(nonzero: &[bool], jumps: usize) -> Vec<Vec<usize>> {
    let len = nonzero.len();
    let mut seen = vec![false; len];
    let mut out = Vec::new();
    for start in 0..len {
        if !nonzero[start] || seen[start] {
            continue;
        }
        seen[start] = true;
        let mut comp = vec![start];
        let mut queue = VecDeque::from([start]);
        while let Some(a) = queue.pop_front() {
            for b in neighbours(a, len, jumps) {
                if nonzero[b] && !seen[b] {
                    seen[b] = true;
                    comp.push(b);
                    queue.push_back(b);
                }
            }
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}

fn neighbours(a: usize, len: usize, jumps: usize) -> impl Iterator<Item = usize> {
    let below = (1..=jumps + 1).filter_map(move |j| a.checked_sub(j));
    let above = (1..=jumps + 1).map(move |j| a + j).filter(move |&b| b < len);
    below.chain(above)
}

/// Largest component, ties going to the one with the smallest index.
fn best_component(components: Vec<Vec<usize>>) -> Vec<usize> {
    components
        .into_iter()
        .rev()
        .max_by_key(|c| c.len())
        .unwrap_or_default()
}

/// Whether a zero pattern leaves enough known coefficients to determine a
/// `dim`-dimensional signal over a full-spark frame.
pub fn pattern_recoverable(nonzero: &[bool], dim: usize, jumps: usize) -> bool {
    let zeros = nonzero.iter().filter(|&&n| !n).count();
    if zeros >= dim {
        return true;
    }
    best_component(chain_components(nonzero, jumps)).len() + zeros >= dim
}

/// Assigns phases along a breadth-first traversal of `component`, anchoring its
/// smallest index at phase 0. Returns `cₗ` estimates in the order of `component`.
fn propagate(
    source: &ProductSource,
    component: &[usize],
    jumps: usize,
) -> Result<Vec<Complex64>, RetrievalError> {
    let base = &source.ms.base;
    let len = base.len();
    let mut member = vec![false; len];
    for &l in component {
        member[l] = true;
    }
    let mut phase: Vec<Option<Complex64>> = vec![None; len];
    let anchor = component[0];
    phase[anchor] = Some(Complex64::new(1.0, 0.0));
    let mut queue = VecDeque::from([anchor]);
    while let Some(a) = queue.pop_front() {
        let ua = phase[a].expect("queued index has a phase");
        for b in neighbours(a, len, jumps) {
            if !member[b] || phase[b].is_some() {
                continue;
            }
            let p = if a < b {
                source.product(a, b - a)?
            } else {
                source.product(b, a - b)?.conj()
            };
            let r = p.norm();
            let ub = if r > 0.0 { ua * p / r } else { ua };
            phase[b] = Some(ub);
            queue.push_back(b);
        }
    }
    Ok(component
        .iter()
        .map(|&l| phase[l].expect("component is connected") * base[l])
        .collect())
}

fn check_inputs(
    ms: &MeasurementSet,
    frame: &DynamicalFrame,
    cfg: &MeasurementConfig,
) -> Result<(), RetrievalError> {
    if ms.len() != frame.len() {
        return Err(RetrievalError::LengthMismatch {
            frame: frame.len(),
            measurements: ms.len(),
        });
    }
    if ms.jumps != cfg.jumps {
        return Err(RetrievalError::ConfigMismatch("J"));
    }
    if ms.angles != cfg.angles {
        return Err(RetrievalError::ConfigMismatch("angles"));
    }
    if !cfg.real_mode && !ms.has_second_angle() && ms.len() > 1 {
        return Err(RetrievalError::ConfigMismatch("real_mode"));
    }
    cfg.check_dim(frame.dim())
}

fn residual(
    estimate: &ComplexVector,
    ms: &MeasurementSet,
    frame: &DynamicalFrame,
    cfg: &MeasurementConfig,
) -> Result<f64, RetrievalError> {
    let again = measure(estimate, frame, cfg)?;
    Ok(again
        .values()
        .zip(ms.values())
        .map(|(a, b)| (a - b) * (a - b))
        .sum::<f64>()
        .sqrt())
}

/// Chains consecutive relative phases and synthesizes with the canonical dual.
/// Every base magnitude must be nonzero.
pub fn recover_generic(
    ms: &MeasurementSet,
    frame: &DynamicalFrame,
    cfg: &MeasurementConfig,
) -> Result<RecoveryResult, RetrievalError> {
    check_inputs(ms, frame, cfg)?;
    let nonzero = nonzero_pattern(&ms.base, cfg.zero_tol);
    if let Some(index) = nonzero.iter().position(|&n| !n) {
        return Err(RetrievalError::ZeroCoefficient {
            index,
            value: ms.base[index],
        });
    }
    let source = ProductSource::new(ms, cfg)?;
    let indices: Vec<usize> = (0..ms.len()).collect();
    let coefficients = propagate(&source, &indices, 0)?;
    let estimate = frames::dual(frame)?.reconstruct(&coefficients)?;
    let residual = residual(&estimate, ms, frame, cfg)?;
    Ok(RecoveryResult {
        estimate,
        status: RecoveryStatus::Recovered,
        component_size: indices.len(),
        used_indices: indices,
        residual,
    })
}

/// Sign-ambiguous recovery for real signals and real frames.
pub fn recover_real(
    ms: &MeasurementSet,
    frame: &DynamicalFrame,
    cfg: &MeasurementConfig,
) -> Result<RecoveryResult, RetrievalError> {
    if !cfg.real_mode {
        return Err(RetrievalError::ConfigMismatch("real_mode"));
    }
    recover_generic(ms, frame, cfg)
}

/// Zero-aware recovery over a full-spark frame.
///
/// Phases propagate along the largest connected chain of nonzero coefficients
/// (jumps up to `J + 1`); together with the coefficients known to vanish they
/// give an overdetermined system `⟨x̂, Aˡφ⟩ = cₗ` solved by least squares.
pub fn recover_full_spark(
    ms: &MeasurementSet,
    frame: &DynamicalFrame,
    cfg: &MeasurementConfig,
) -> Result<RecoveryResult, RetrievalError> {
    check_inputs(ms, frame, cfg)?;
    let dim = frame.dim();
    let nonzero = nonzero_pattern(&ms.base, cfg.zero_tol);
    let zero_indices: Vec<usize> = (0..ms.len()).filter(|&l| !nonzero[l]).collect();
    if zero_indices.len() >= dim {
        let estimate = ComplexVector::zeros(dim);
        return Ok(RecoveryResult {
            residual: residual(&estimate, ms, frame, cfg)?,
            estimate,
            status: RecoveryStatus::Recovered,
            used_indices: Vec::new(),
            component_size: zero_indices.len(),
        });
    }
    let components = chain_components(&nonzero, cfg.jumps);
    let component_count = components.len();
    let component = best_component(components);
    let known = component.len() + zero_indices.len();
    if component.is_empty() || known < dim {
        let estimate = ComplexVector::zeros(dim);
        return Ok(RecoveryResult {
            residual: residual(&estimate, ms, frame, cfg)?,
            estimate,
            status: RecoveryStatus::Failed,
            used_indices: component,
            component_size: known,
        });
    }

    let source = ProductSource::new(ms, cfg)?;
    let coefficients = propagate(&source, &component, cfg.jumps)?;
    let rows: Vec<usize> = component.iter().chain(&zero_indices).copied().collect();
    let vectors = frame.vectors();
    let system = ComplexMatrix::from_fn(rows.len(), dim, |r, i| vectors[rows[r]][i].conj());
    let rhs = ComplexVector::from_iterator(
        rows.len(),
        coefficients
            .iter()
            .copied()
            .chain(std::iter::repeat(Complex64::new(0.0, 0.0)).take(zero_indices.len())),
    );
    let estimate = match linalg::solve_least_squares(&system, &rhs) {
        Ok(x) => x,
        Err(LinalgError::Singular { .. }) => return Err(RetrievalError::SingularSubframe),
        Err(e) => return Err(e.into()),
    };
    let status = if component.len() >= dim || component_count == 1 {
        RecoveryStatus::Recovered
    } else {
        RecoveryStatus::RecoveredPartialChain
    };
    Ok(RecoveryResult {
        residual: residual(&estimate, ms, frame, cfg)?,
        estimate,
        status,
        used_indices: component,
        component_size: known,
    })
}

/// Dispatches on the data: the dense path when no coefficient vanishes, the
/// zero-aware path otherwise.
pub fn recover(
    ms: &MeasurementSet,
    frame: &DynamicalFrame,
    cfg: &MeasurementConfig,
) -> Result<RecoveryResult, RetrievalError> {
    if nonzero_pattern(&ms.base, cfg.zero_tol).iter().all(|&n| n) {
        recover_generic(ms, frame, cfg)
    } else {
        recover_full_spark(ms, frame, cfg)
    }
}

/// Smallest `L` for which every zero pattern of a full-spark frame keeps
/// enough chained coefficients: `⌈d²/4 + d/2⌉` for `J = 0` and
/// `⌈(d+1)²/(4(J+1)) + d⌉` otherwise.
pub fn min_length(dim: usize, jumps: usize) -> Result<usize, RetrievalError> {
    if dim == 0 || (jumps > 0 && jumps + 2 > dim) {
        return Err(RetrievalError::JumpOutOfRange { jumps, dim });
    }
    Ok(if jumps == 0 {
        (dim * dim + 2 * dim).div_ceil(4)
    } else {
        let den = 4 * (jumps + 1);
        ((dim + 1) * (dim + 1) + dim * den).div_ceil(den)
    })
}

/// `min_θ ‖x − e^{iθ}y‖₂`.
pub fn global_phase_distance(x: &ComplexVector, y: &ComplexVector) -> Result<f64, RetrievalError> {
    if x.len() != y.len() {
        return Err(RetrievalError::DimensionMismatch {
            expected: x.len(),
            got: y.len(),
        });
    }
    let ip = linalg::inner_product(x, y)?;
    let r = ip.norm();
    if r == 0.0 {
        return Ok((x.norm_squared() + y.norm_squared()).sqrt());
    }
    Ok((x - y * (ip / r)).norm())
}
