//! Classical and generalized Vandermonde matrices, their determinant product
//! formulas, and exhaustive full-spark certification.

use itertools::Itertools;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::combinatorics::binomial;
use crate::linalg::{self, ComplexMatrix, ComplexVector, LinalgError};
use crate::spectral::{min_pairwise_gap, DISTINCTNESS_TOL};

/// Scaled-determinant threshold for spark certification.
pub const SPARK_TOL: f64 = 1e-10;
/// Default cap on the number of enumerated column subsets.
pub const SPARK_BUDGET: u64 = 2_000_000;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum VandermondeError {
    #[error("exponents must be strictly increasing")]
    UnsortedExponents,
    #[error("multiplicities must be positive (block {block})")]
    ZeroMultiplicity { block: usize },
    #[error("{nodes} nodes but {multiplicities} multiplicities")]
    LengthMismatch { nodes: usize, multiplicities: usize },
    #[error("square matrix needs {expected} columns, selection has {got}")]
    NotSquare { expected: usize, got: usize },
    #[error("nodes {i} and {j} coincide")]
    CoincidentNodes { i: usize, j: usize },
    #[error("binomial coefficient C({n}, {k}) overflows u64")]
    BinomialOverflow { n: u64, k: u64 },
    #[error("matrix has {rows} rows but only {cols} columns")]
    TooFewColumns { rows: usize, cols: usize },
    #[error("spark enumeration needs C({cols}, {rows}) subsets, budget is {budget}")]
    BudgetExceeded { rows: usize, cols: usize, budget: u64 },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// Strictly increasing column exponents `m₀ < m₁ < …`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExponentSelection(Vec<u32>);

impl ExponentSelection {
    pub fn new(exponents: Vec<u32>) -> Result<Self, VandermondeError> {
        if exponents.windows(2).any(|w| w[0] >= w[1]) {
            return Err(VandermondeError::UnsortedExponents);
        }
        Ok(Self(exponents))
    }

    /// `0, 1, …, n−1`.
    pub fn consecutive(n: usize) -> Self {
        Self((0..n as u32).collect())
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Block sizes of a confluent (second-kind) Vandermonde matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiplicityProfile(Vec<usize>);

impl MultiplicityProfile {
    pub fn new(multiplicities: Vec<usize>) -> Result<Self, VandermondeError> {
        if let Some(block) = multiplicities.iter().position(|&m| m == 0) {
            return Err(VandermondeError::ZeroMultiplicity { block });
        }
        Ok(Self(multiplicities))
    }

    pub fn ones(n: usize) -> Self {
        Self(vec![1; n])
    }

    pub fn multiplicities(&self) -> &[usize] {
        &self.0
    }

    pub fn total(&self) -> usize {
        self.0.iter().sum()
    }
}

/// Outcome of a spark check.
///
/// `witness` is present exactly when `full_spark` is false. `min_abs_det` is
/// the smallest column-norm-scaled determinant seen during enumeration; it is
/// `None` when the verdict came from a structural shortcut.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SparkCertificate {
    pub full_spark: bool,
    pub witness: Option<Vec<usize>>,
    pub min_abs_det: Option<f64>,
    pub method: SparkMethod,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SparkMethod {
    /// Every column subset was checked.
    Enumeration,
    /// Nodes are powers `λ̂ᵏ` with `λ̂ⁿ ≠ 1` for `0 < n < L`.
    GeometricNodes,
    /// Nodes are distinct nonnegative reals.
    NonnegativeReal,
    /// A generator coefficient vanishes, so no subset spans.
    VanishingCoefficient,
    /// Two nodes coincide, so no subset spans.
    CoincidentNodes,
}

/// `d×L` matrix with entries `λₖˡ`.
pub fn classical(nodes: &ComplexVector, len: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(nodes.len(), len, |k, l| nodes[k].powu(l as u32))
}

/// `∏_{k>j} (λₖ − λⱼ)`, which equals `det(classical(λ, d))`.
pub fn det_product_classical(nodes: &ComplexVector) -> Complex64 {
    let mut acc = Complex64::new(1.0, 0.0);
    for k in 0..nodes.len() {
        for j in 0..k {
            acc *= nodes[k] - nodes[j];
        }
    }
    acc
}

/// Columns of the classical matrix at the selected exponents: `λₖ^{m_ℓ}`.
pub fn first_kind(nodes: &ComplexVector, selection: &ExponentSelection) -> ComplexMatrix {
    let e = selection.exponents();
    ComplexMatrix::from_fn(nodes.len(), e.len(), |k, l| nodes[k].powu(e[l]))
}

/// Schur function value `det(first_kind) / ∏_{k>j}(λₖ − λⱼ)`.
pub fn schur_value(
    nodes: &ComplexVector,
    selection: &ExponentSelection,
) -> Result<Complex64, VandermondeError> {
    let d = nodes.len();
    if selection.len() != d {
        return Err(VandermondeError::NotSquare {
            expected: d,
            got: selection.len(),
        });
    }
    check_distinct(nodes.as_slice())?;
    let det = linalg::determinant(&first_kind(nodes, selection))?;
    Ok(det / det_product_classical(nodes))
}

fn check_distinct(nodes: &[Complex64]) -> Result<(), VandermondeError> {
    let scale = nodes.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let threshold = DISTINCTNESS_TOL * scale;
    for i in 0..nodes.len() {
        for j in (i + 1)..nodes.len() {
            if (nodes[i] - nodes[j]).norm() <= threshold {
                return Err(VandermondeError::CoincidentNodes { i, j });
            }
        }
    }
    Ok(())
}

/// Stacked blocks `Rⱼ = (C(ℓ, k)·λⱼ^{ℓ−k})`, `k < mⱼ`, `ℓ < L`; entries with
/// `k > ℓ` are zero.
pub fn second_kind(
    nodes: &ComplexVector,
    profile: &MultiplicityProfile,
    len: usize,
) -> Result<ComplexMatrix, VandermondeError> {
    let mult = profile.multiplicities();
    if nodes.len() != mult.len() {
        return Err(VandermondeError::LengthMismatch {
            nodes: nodes.len(),
            multiplicities: mult.len(),
        });
    }
    let mut out = ComplexMatrix::zeros(profile.total(), len);
    let mut row = 0;
    for (&lambda, &m) in nodes.iter().zip(mult) {
        for k in 0..m {
            for l in k..len {
                let (n, kk) = (l as u64, k as u64);
                let c = binomial(n, kk).ok_or(VandermondeError::BinomialOverflow { n, k: kk })?;
                out[(row, l)] = lambda.powu((l - k) as u32) * c as f64;
            }
            row += 1;
        }
    }
    Ok(out)
}

/// `∏_{k<j} (λⱼ − λₖ)^{mₖ·mⱼ}`.
pub fn det_product_second_kind(
    nodes: &ComplexVector,
    profile: &MultiplicityProfile,
) -> Result<Complex64, VandermondeError> {
    let mult = profile.multiplicities();
    if nodes.len() != mult.len() {
        return Err(VandermondeError::LengthMismatch {
            nodes: nodes.len(),
            multiplicities: mult.len(),
        });
    }
    let mut acc = Complex64::new(1.0, 0.0);
    for j in 0..nodes.len() {
        for k in 0..j {
            acc *= (nodes[j] - nodes[k]).powu((mult[k] * mult[j]) as u32);
        }
    }
    Ok(acc)
}

/// Number of `k`-subsets of an `n`-set, saturating.
pub fn subset_count(n: usize, k: usize) -> u64 {
    binomial(n as u64, k as u64).unwrap_or(u64::MAX)
}

/// `|det|` of the selected columns divided by the product of their norms
/// (a Hadamard-normalized determinant in `[0, 1]`).
pub fn scaled_subset_det(matrix: &ComplexMatrix, columns: &[usize]) -> Result<f64, LinalgError> {
    let sub = matrix.select_columns(columns);
    let scale: f64 = sub.column_iter().map(|c| c.norm()).product();
    if scale == 0.0 {
        return Ok(0.0);
    }
    Ok(linalg::determinant(&sub)?.norm() / scale)
}

/// Checks every `d`-subset of columns of a `d×L` matrix.
///
/// The witness is the lexicographically first subset whose scaled
/// determinant is `≤ tol`.
pub fn full_spark(
    matrix: &ComplexMatrix,
    tol: f64,
    budget: u64,
) -> Result<SparkCertificate, VandermondeError> {
    let (rows, cols) = matrix.shape();
    if rows > cols {
        return Err(VandermondeError::TooFewColumns { rows, cols });
    }
    if subset_count(cols, rows) > budget {
        return Err(VandermondeError::BudgetExceeded { rows, cols, budget });
    }
    let mut witness = None;
    let mut min_det = f64::INFINITY;
    for subset in (0..cols).combinations(rows) {
        let det = scaled_subset_det(matrix, &subset)?;
        if det <= tol && witness.is_none() {
            witness = Some(subset);
        }
        min_det = min_det.min(det);
    }
    Ok(SparkCertificate {
        full_spark: witness.is_none(),
        witness,
        min_abs_det: Some(min_det),
        method: SparkMethod::Enumeration,
    })
}

/// Smallest pairwise distance between nodes.
pub fn node_separation(nodes: &ComplexVector) -> f64 {
    min_pairwise_gap(nodes.as_slice())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::test_oracles::*;
    use rand::seq::SliceRandom;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn real_nodes(v: &[f64]) -> ComplexVector {
        ComplexVector::from_iterator(v.len(), v.iter().map(|&x| c(x, 0.)))
    }

    fn separated_nodes<R: Rng>(rng: &mut R, d: usize) -> ComplexVector {
        loop {
            let v = random_vector(rng, d) * c(1.5, 0.0);
            if node_separation(&v) > 0.2 {
                return v;
            }
        }
    }

    #[test]
    fn classical_examples() {
        let ones = classical(&real_nodes(&[1., 1., 1.]), 4);
        assert!(ones.iter().all(|&z| z == c(1., 0.)));
        assert_eq!(elimination_rank(&ones, 1e-12), 1);

        let m = classical(&real_nodes(&[0., 1.]), 3);
        assert_eq!(m, ComplexMatrix::from_row_slice(2, 3, &[c(1., 0.), c(0., 0.), c(0., 0.), c(1., 0.), c(1., 0.), c(1., 0.)]));

        let m = classical(&real_nodes(&[1., 2., 3.]), 3);
        assert!((cofactor_determinant(&m) - c(2., 0.)).norm() < 1e-12);
    }

    #[test]
    fn classical_product_examples() {
        assert_eq!(det_product_classical(&real_nodes(&[2., 5., 2.])), c(0., 0.));
        assert_eq!(det_product_classical(&real_nodes(&[7.])), c(1., 0.));
        let nodes = real_nodes(&[1., 2., 3.]);
        let p = det_product_classical(&nodes);
        assert_eq!(p, c(2., 0.));
        // the other index order, (1−2)(1−3)(2−3), differs only in sign
        assert_eq!(p.norm(), 2.0);
        assert!((p - cofactor_determinant(&classical(&nodes, 3))).norm() < 1e-12);
    }

    #[test]
    fn classical_product_matches_lu() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for d in 1..=6 {
            for _ in 0..10 {
                let nodes = random_vector(&mut rng, d) * c(1.3, 0.);
                let lu = linalg::determinant(&classical(&nodes, d)).unwrap();
                let p = det_product_classical(&nodes);
                assert!((lu.norm() - p.norm()).abs() <= 1e-9 * p.norm());
                assert!((lu - p).norm() <= 1e-9 * p.norm());
            }
        }
    }

    #[test]
    fn first_kind_examples() {
        let nodes = real_nodes(&[1., 2., 4.]);
        assert_eq!(first_kind(&nodes, &ExponentSelection::consecutive(3)), classical(&nodes, 3));
        let m = first_kind(&real_nodes(&[1., 2.]), &ExponentSelection::new(vec![0, 2]).unwrap());
        assert_eq!(m, ComplexMatrix::from_row_slice(2, 2, &[c(1., 0.), c(1., 0.), c(1., 0.), c(4., 0.)]));
        assert_eq!(ExponentSelection::new(vec![0, 2, 2]), Err(VandermondeError::UnsortedExponents));

        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..30 {
            let d = rng.gen_range(1..=5);
            let mut x: Vec<f64> = (0..d).map(|_| rng.gen_range(0.05..2.0)).collect();
            x.sort_by(f64::total_cmp);
            x.dedup_by(|a, b| (*a - *b).abs() < 0.05);
            let nodes = real_nodes(&x);
            let mut exps: Vec<u32> = (0..9).collect();
            exps.shuffle(&mut rng);
            let mut exps = exps[..x.len()].to_vec();
            exps.sort();
            let det = cofactor_determinant(&first_kind(&nodes, &ExponentSelection::new(exps).unwrap()));
            // positive sign agrees with ∏_{k>j}(λₖ − λⱼ) > 0 for ascending nodes
            assert!(det.re > 0.0 && det.im.abs() <= 1e-12 * det.re);
        }
    }

    #[test]
    fn schur_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let nodes = separated_nodes(&mut rng, 4);
        let s = schur_value(&nodes, &ExponentSelection::consecutive(4)).unwrap();
        assert!((s - c(1., 0.)).norm() < 1e-12);

        let (x, y) = (c(0.3, -1.1), c(2.0, 0.4));
        let s = schur_value(&ComplexVector::from_vec(vec![x, y]), &ExponentSelection::new(vec![0, 2]).unwrap()).unwrap();
        assert!((s - (x + y)).norm() < 1e-12);

        for _ in 0..20 {
            let d = rng.gen_range(2..=5);
            let mut x: Vec<f64> = (0..d).map(|k| k as f64 * 0.4 + rng.gen_range(0.05..0.3)).collect();
            x.shuffle(&mut rng);
            let mut exps: Vec<u32> = (0..8).collect();
            exps.shuffle(&mut rng);
            let mut exps = exps[..d].to_vec();
            exps.sort();
            let s = schur_value(&real_nodes(&x), &ExponentSelection::new(exps).unwrap()).unwrap();
            assert!(s.re > 0.0 && s.im.abs() <= 1e-9 * s.re);
        }

        assert!(matches!(
            schur_value(&real_nodes(&[1., 1.]), &ExponentSelection::consecutive(2)),
            Err(VandermondeError::CoincidentNodes { i: 0, j: 1 })
        ));
        assert!(matches!(
            schur_value(&real_nodes(&[1., 2.]), &ExponentSelection::consecutive(3)),
            Err(VandermondeError::NotSquare { .. })
        ));
    }

    #[test]
    fn schur_value_is_symmetric() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..40 {
            let d = rng.gen_range(2..=6);
            let nodes = separated_nodes(&mut rng, d);
            let mut exps: Vec<u32> = (0..10).collect();
            exps.shuffle(&mut rng);
            let mut exps = exps[..d].to_vec();
            exps.sort();
            let sel = ExponentSelection::new(exps).unwrap();
            let s = schur_value(&nodes, &sel).unwrap();
            let mut perm: Vec<usize> = (0..d).collect();
            perm.shuffle(&mut rng);
            let permuted = ComplexVector::from_iterator(d, perm.iter().map(|&i| nodes[i]));
            let t = schur_value(&permuted, &sel).unwrap();
            assert!((s - t).norm() <= 1e-8 * s.norm());
            // factorization reproduces the determinant
            let det = linalg::determinant(&first_kind(&nodes, &sel)).unwrap();
            assert!((det_product_classical(&nodes) * s - det).norm() <= 1e-12 * det.norm());
        }
    }

    #[test]
    fn second_kind_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let nodes = separated_nodes(&mut rng, 4);
        assert_eq!(
            second_kind(&nodes, &MultiplicityProfile::ones(4), 7).unwrap(),
            classical(&nodes, 7)
        );

        let lambdas = ComplexVector::from_vec(vec![c(0.7, 0.2), c(-1.1, 0.5), c(0.3, -0.9)]);
        let prof = MultiplicityProfile::new(vec![3, 1, 2]).unwrap();
        let v = second_kind(&lambdas, &prof, 6).unwrap();
        let l0 = lambdas[0];
        let row2 = [c(0., 0.), c(0., 0.), c(1., 0.), l0 * 3.0, l0.powu(2) * 6.0, l0.powu(3) * 10.0];
        for (got, want) in v.row(2).iter().zip(row2) {
            assert!((got - want).norm() < 1e-14);
        }
        let l2 = lambdas[2];
        let row5 = [c(0., 0.), c(1., 0.), l2 * 2.0, l2.powu(2) * 3.0, l2.powu(3) * 4.0, l2.powu(4) * 5.0];
        for (got, want) in v.row(5).iter().zip(row5) {
            assert!((got - want).norm() < 1e-14);
        }

        let v = second_kind(&ComplexVector::from_vec(vec![c(0., 0.)]), &MultiplicityProfile::new(vec![4]).unwrap(), 4).unwrap();
        assert_eq!(v, ComplexMatrix::identity(4, 4));
    }

    #[test]
    fn second_kind_products() {
        let prof = MultiplicityProfile::new(vec![2, 1, 2]).unwrap();
        let rep = ComplexVector::from_vec(vec![c(1., 0.), c(2., 0.), c(1., 0.)]);
        assert_eq!(det_product_second_kind(&rep, &prof).unwrap(), c(0., 0.));
        assert!(linalg::determinant(&second_kind(&rep, &prof, 5).unwrap()).unwrap().norm() < 1e-12);

        let (a, b) = (c(0.2, 1.), c(-3., 0.5));
        let p = det_product_second_kind(&ComplexVector::from_vec(vec![a, b]), &MultiplicityProfile::ones(2)).unwrap();
        assert_eq!(p, b - a);

        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let shapes: [&[usize]; 6] = [&[3, 1, 2], &[1, 1, 1, 1, 1, 1], &[2, 2], &[4, 1], &[1, 5], &[2, 1, 1, 2]];
        for shape in shapes {
            for _ in 0..5 {
                let prof = MultiplicityProfile::new(shape.to_vec()).unwrap();
                let nodes = separated_nodes(&mut rng, shape.len());
                let d = prof.total();
                let v = second_kind(&nodes, &prof, d).unwrap();
                let lu = linalg::determinant(&v).unwrap();
                let p = det_product_second_kind(&nodes, &prof).unwrap();
                assert!((lu - p).norm() <= 1e-9 * p.norm(), "shape {shape:?}");
                assert!((cofactor_determinant(&v) - p).norm() <= 1e-9 * p.norm());
            }
        }
    }

    #[test]
    fn spark_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let nodes = separated_nodes(&mut rng, 3);
        let cert = full_spark(&classical(&nodes, 3), SPARK_TOL, SPARK_BUDGET).unwrap();
        assert!(cert.full_spark && cert.witness.is_none());

        let mut m = random_matrix(&mut rng, 3, 5);
        m.column_mut(3).fill(c(0., 0.));
        let cert = full_spark(&m, SPARK_TOL, SPARK_BUDGET).unwrap();
        assert!(!cert.full_spark);
        let w = cert.witness.unwrap();
        assert_eq!(w, vec![0, 1, 3]);
        assert_eq!(cert.min_abs_det, Some(0.0));

        assert!(matches!(
            full_spark(&random_matrix(&mut rng, 3, 2), SPARK_TOL, SPARK_BUDGET),
            Err(VandermondeError::TooFewColumns { .. })
        ));
        assert!(matches!(
            full_spark(&random_matrix(&mut rng, 3, 30), SPARK_TOL, 1000),
            Err(VandermondeError::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn spark_matches_oracle_enumeration() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..20 {
            let mut m = random_matrix(&mut rng, 3, 6);
            // duplicate a column sometimes
            if rng.gen_bool(0.5) {
                let src = m.column(1).into_owned();
                m.set_column(4, &(src * c(0.0, 2.0)));
            }
            let cert = full_spark(&m, SPARK_TOL, SPARK_BUDGET).unwrap();
            let first_bad = subsets(6, 3)
                .into_iter()
                .find(|s| elimination_rank(&m.select_columns(s), 1e-9) < 3);
            assert_eq!(cert.witness, first_bad);
        }
    }

    #[test]
    fn geometric_nodes_have_full_spark() {
        let base = Complex64::from_polar(1.05, 0.9);
        let nodes = ComplexVector::from_iterator(3, (0..3).map(|k| base.powu(k)));
        let m = classical(&nodes, 6);
        let cert = full_spark(&m, SPARK_TOL, SPARK_BUDGET).unwrap();
        assert!(cert.full_spark);
        for s in subsets(6, 3) {
            assert_eq!(elimination_rank(&m.select_columns(&s), 1e-9), 3);
        }
    }
}
