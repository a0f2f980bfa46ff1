//! Relative phase from magnitudes: recover `z̄₁z₂` from `|z₁|`, `|z₂|` and
//! `|z₁ + e^{iαₖ}z₂|`.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Angle pairs need `|sin(α₁ − α₂)|` above this.
pub const ANGLE_TOL: f64 = 1e-6;
/// Overshoot of the extracted cosines beyond ±1 tolerated before rejecting the data.
pub const CONSISTENCY_TOL: f64 = 1e-6;
/// A magnitude is zero when `m ≤ ZERO_TOL·max(m₁, m₂, 1)`.
pub const ZERO_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum PolarizationError {
    #[error("angles {0} and {1} differ by a multiple of π")]
    DegenerateAngles(f64, f64),
    #[error("magnitude {0} is negative or not finite")]
    InvalidMagnitude(f64),
    #[error("zero magnitude: the relative phase is undefined")]
    ZeroMagnitude,
    #[error("inconsistent data: extracted cosine {0} lies outside [-1, 1]")]
    Inconsistent(f64),
    #[error("root-of-unity polarization needs K >= 3 and K magnitudes, got K = {k} with {given}")]
    BadRootCount { k: usize, given: usize },
}

/// `(α₁, α₂)` with `α₁ − α₂ ∉ πℤ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[f64; 2]", into = "[f64; 2]")]
pub struct PolarizationAngles {
    first: f64,
    second: f64,
}

impl PolarizationAngles {
    pub fn new(first: f64, second: f64) -> Result<Self, PolarizationError> {
        if !first.is_finite() || !second.is_finite() || (first - second).sin().abs() <= ANGLE_TOL {
            return Err(PolarizationError::DegenerateAngles(first, second));
        }
        Ok(Self { first, second })
    }

    pub fn first(&self) -> f64 {
        self.first
    }

    pub fn second(&self) -> f64 {
        self.second
    }

    pub fn get(&self, k: u8) -> f64 {
        if k == 1 {
            self.first
        } else {
            self.second
        }
    }

    /// `(−α₁, −α₂)`.
    pub fn negated(&self) -> Self {
        Self {
            first: -self.first,
            second: -self.second,
        }
    }
}

impl Default for PolarizationAngles {
    /// `(0, π/2)`, where `|sin(α₁ − α₂)| = 1`.
    fn default() -> Self {
        Self {
            first: 0.0,
            second: FRAC_PI_2,
        }
    }
}

impl TryFrom<[f64; 2]> for PolarizationAngles {
    type Error = PolarizationError;

    fn try_from(a: [f64; 2]) -> Result<Self, Self::Error> {
        Self::new(a[0], a[1])
    }
}

impl From<PolarizationAngles> for [f64; 2] {
    fn from(a: PolarizationAngles) -> Self {
        [a.first, a.second]
    }
}

/// `|z₁|, |z₂|, |z₁ + e^{iα₁}z₂|, |z₁ + e^{iα₂}z₂|`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolarizationData {
    pub m1: f64,
    pub m2: f64,
    pub sum1: f64,
    pub sum2: f64,
}

impl PolarizationData {
    pub fn new(m1: f64, m2: f64, sum1: f64, sum2: f64) -> Result<Self, PolarizationError> {
        for m in [m1, m2, sum1, sum2] {
            if !(m >= 0.0 && m.is_finite()) {
                return Err(PolarizationError::InvalidMagnitude(m));
            }
        }
        Ok(Self { m1, m2, sum1, sum2 })
    }

    /// The four magnitudes generated by `z₁, z₂`.
    pub fn forward(z1: Complex64, z2: Complex64, angles: PolarizationAngles) -> Self {
        Self {
            m1: z1.norm(),
            m2: z2.norm(),
            sum1: (z1 + Complex64::from_polar(1.0, angles.first) * z2).norm(),
            sum2: (z1 + Complex64::from_polar(1.0, angles.second) * z2).norm(),
        }
    }
}

fn nonzero(m1: f64, m2: f64) -> Result<(), PolarizationError> {
    let floor = ZERO_TOL * m1.max(m2).max(1.0);
    if m1 <= floor || m2 <= floor {
        Err(PolarizationError::ZeroMagnitude)
    } else {
        Ok(())
    }
}

fn clamp_cosine(r: f64) -> Result<f64, PolarizationError> {
    if r.abs() > 1.0 + CONSISTENCY_TOL || !r.is_finite() {
        Err(PolarizationError::Inconsistent(r))
    } else {
        Ok(r.clamp(-1.0, 1.0))
    }
}

/// `z̄₁z₂` from the four magnitudes.
///
/// With `δ = arg z₂ − arg z₁`, each sum gives `rₖ = cos(δ + αₖ)`; the 2×2
/// system in `(cos δ, sin δ)` has determinant `sin(α₁ − α₂)`.
pub fn recover_product(
    data: &PolarizationData,
    angles: PolarizationAngles,
) -> Result<Complex64, PolarizationError> {
    let PolarizationData { m1, m2, sum1, sum2 } = *data;
    nonzero(m1, m2)?;
    let denom = 2.0 * m1 * m2;
    let r1 = clamp_cosine((sum1 * sum1 - m1 * m1 - m2 * m2) / denom)?;
    let r2 = clamp_cosine((sum2 * sum2 - m1 * m1 - m2 * m2) / denom)?;
    let (s1, c1) = angles.first.sin_cos();
    let (s2, c2) = angles.second.sin_cos();
    let det = (angles.first - angles.second).sin();
    let cos = (-s2 * r1 + s1 * r2) / det;
    let sin = (-c2 * r1 + c1 * r2) / det;
    let radius = cos.hypot(sin);
    if radius == 0.0 {
        return Err(PolarizationError::Inconsistent(0.0));
    }
    Ok(Complex64::new(cos, sin) * (m1 * m2 / radius))
}

/// Sign `α ∈ {−1, 1}` for real polarization.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    /// `e^{iα}` for `α ∈ {0, π}`; `None` for other angles.
    pub fn from_angle(angle: f64) -> Option<Self> {
        let (s, c) = angle.sin_cos();
        if s.abs() > ANGLE_TOL {
            None
        } else if c > 0.0 {
            Some(Sign::Plus)
        } else {
            Some(Sign::Minus)
        }
    }

    pub fn angle(self) -> f64 {
        match self {
            Sign::Plus => 0.0,
            Sign::Minus => PI,
        }
    }
}

/// `z₁z₂` for real `z₁, z₂` from `|z₁|, |z₂|, |z₁ + αz₂|`.
pub fn recover_product_real(
    m1: f64,
    m2: f64,
    sum: f64,
    alpha: Sign,
) -> Result<f64, PolarizationError> {
    PolarizationData::new(m1, m2, sum, sum)?;
    nonzero(m1, m2)?;
    let product = (sum * sum - m1 * m1 - m2 * m2) / (2.0 * alpha.value());
    let bound = m1 * m2;
    if product.abs() > bound * (1.0 + CONSISTENCY_TOL) {
        return Err(PolarizationError::Inconsistent(product / bound));
    }
    Ok(product.clamp(-bound, bound))
}

/// `z̄₁z₂ = (1/K) Σₖ ζᵏ |z₁ + ζ^{−k}z₂|²` with `ζ = e^{2πi/K}`.
///
/// `magnitudes[k]` must be `|z₁ + ζ^{−k}z₂|`.
pub fn recover_product_roots_of_unity(magnitudes: &[f64]) -> Result<Complex64, PolarizationError> {
    let k = magnitudes.len();
    if k < 3 {
        return Err(PolarizationError::BadRootCount { k, given: k });
    }
    let sum: Complex64 = magnitudes
        .iter()
        .enumerate()
        .map(|(j, &m)| Complex64::from_polar(m * m, 2.0 * PI * j as f64 / k as f64))
        .sum();
    Ok(sum / k as f64)
}

/// Magnitudes `|z₁ + ζ^{−k}z₂|` for `k < K`.
pub fn roots_of_unity_magnitudes(z1: Complex64, z2: Complex64, k: usize) -> Vec<f64> {
    (0..k)
        .map(|j| (z1 + Complex64::from_polar(1.0, -2.0 * PI * j as f64 / k as f64) * z2).norm())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn random_nonzero<R: Rng>(rng: &mut R) -> Complex64 {
        Complex64::from_polar(rng.gen_range(0.1..3.0), rng.gen_range(-PI..PI))
    }

    #[test]
    fn angle_validation() {
        assert!(PolarizationAngles::new(0.3, 0.3 + PI).is_err());
        assert!(PolarizationAngles::new(1.0, 1.0).is_err());
        assert!(PolarizationAngles::new(0.0, 0.5).is_ok());
        let a: PolarizationAngles = serde_json::from_str("[0.0, 1.5]").unwrap();
        assert_eq!(a.second(), 1.5);
        assert!(serde_json::from_str::<PolarizationAngles>("[0.0, 0.0]").is_err());
    }

    #[test]
    fn recover_examples() {
        let angles = PolarizationAngles::default();
        let data = PolarizationData::forward(c(1., 0.), c(1., 0.), angles);
        assert!((data.sum1 - 2.0).abs() < 1e-15 && (data.sum2 - 2f64.sqrt()).abs() < 1e-15);
        assert!((recover_product(&data, angles).unwrap() - c(1., 0.)).norm() < 1e-14);

        let data = PolarizationData::forward(c(1., 0.), c(0., 1.), angles);
        assert!((data.sum1 - 2f64.sqrt()).abs() < 1e-15 && data.sum2.abs() < 1e-15);
        assert!((recover_product(&data, angles).unwrap() - c(0., 1.)).norm() < 1e-14);
    }

    #[test]
    fn recover_random_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let angles = PolarizationAngles::default();
        for _ in 0..1000 {
            let (z1, z2) = (random_nonzero(&mut rng), random_nonzero(&mut rng));
            let data = PolarizationData::forward(z1, z2, angles);
            let got = recover_product(&data, angles).unwrap();
            assert!((got - z1.conj() * z2).norm() <= 1e-9 * data.m1 * data.m2);
        }
        // other admissible angle pairs
        for _ in 0..200 {
            let a1 = rng.gen_range(-PI..PI);
            let a2 = a1 + rng.gen_range(0.3..PI - 0.3);
            let angles = PolarizationAngles::new(a1, a2).unwrap();
            let (z1, z2) = (random_nonzero(&mut rng), random_nonzero(&mut rng));
            let got = recover_product(&PolarizationData::forward(z1, z2, angles), angles).unwrap();
            assert!((got - z1.conj() * z2).norm() <= 1e-9 * (z1 * z2).norm());
        }
    }

    #[test]
    fn recover_errors() {
        let angles = PolarizationAngles::default();
        let data = PolarizationData::new(0.0, 1.0, 1.0, 1.0).unwrap();
        assert_eq!(recover_product(&data, angles), Err(PolarizationError::ZeroMagnitude));
        let data = PolarizationData::new(1.0, 1.0, 3.0, 1.0).unwrap();
        assert!(matches!(recover_product(&data, angles), Err(PolarizationError::Inconsistent(_))));
        assert!(PolarizationData::new(-1.0, 1.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn global_phase_equivariance() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let angles = PolarizationAngles::new(0.4, 2.0).unwrap();
        for _ in 0..100 {
            let (z1, z2) = (random_nonzero(&mut rng), random_nonzero(&mut rng));
            let rot = Complex64::from_polar(1.0, rng.gen_range(-PI..PI));
            let a = PolarizationData::forward(z1, z2, angles);
            let b = PolarizationData::forward(rot * z1, rot * z2, angles);
            for (x, y) in [(a.m1, b.m1), (a.m2, b.m2), (a.sum1, b.sum1), (a.sum2, b.sum2)] {
                assert!((x - y).abs() <= 1e-12 * x.max(1.0));
            }
            let pa = recover_product(&a, angles).unwrap();
            let pb = recover_product(&b, angles).unwrap();
            assert!((pa - pb).norm() <= 1e-12 * pa.norm().max(1.0));
        }
    }

    #[test]
    fn noise_amplification_grows_as_angles_close() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let noise: Vec<[f64; 2]> = (0..400).map(|_| [rng.gen_range(-1e-6..1e-6), rng.gen_range(-1e-6..1e-6)]).collect();
        let pairs: Vec<(Complex64, Complex64)> = (0..400).map(|_| (random_nonzero(&mut rng), random_nonzero(&mut rng))).collect();
        let mut errors = Vec::new();
        for div in [2.0, 4.0, 8.0, 16.0] {
            let angles = PolarizationAngles::new(0.0, PI / div).unwrap();
            let mut total = 0.0;
            for ((z1, z2), n) in pairs.iter().zip(&noise) {
                let mut data = PolarizationData::forward(*z1, *z2, angles);
                data.sum1 += n[0];
                data.sum2 += n[1];
                if let Ok(p) = recover_product(&data, angles) {
                    total += (p - z1.conj() * z2).norm() / (data.m1 * data.m2);
                }
            }
            errors.push(total);
        }
        assert!(errors.windows(2).all(|w| w[0] < w[1]), "{errors:?}");
    }

    #[test]
    fn real_examples() {
        assert_eq!(recover_product_real(1.0, 1.0, 2.0, Sign::Plus).unwrap(), 1.0);
        assert_eq!(recover_product_real(1.0, 1.0, 0.0, Sign::Plus).unwrap(), -1.0);
        assert_eq!(recover_product_real(0.0, 1.0, 1.0, Sign::Minus), Err(PolarizationError::ZeroMagnitude));
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..500 {
            let z1: f64 = rng.gen_range(0.1..3.0) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
            let z2: f64 = rng.gen_range(0.1..3.0) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
            for alpha in [Sign::Plus, Sign::Minus] {
                let sum = (z1 + alpha.value() * z2).abs();
                let got = recover_product_real(z1.abs(), z2.abs(), sum, alpha).unwrap();
                assert!((got - z1 * z2).abs() <= 1e-12 * (z1 * z2).abs().max(1.0));
            }
        }
        assert_eq!(Sign::from_angle(PI), Some(Sign::Minus));
        assert_eq!(Sign::from_angle(0.0), Some(Sign::Plus));
        assert_eq!(Sign::from_angle(1.0), None);
    }

    #[test]
    fn roots_of_unity_examples() {
        let z1 = c(0.7, -0.2);
        let m = roots_of_unity_magnitudes(z1, c(0., 0.), 5);
        assert!(m.iter().all(|&x| (x - z1.norm()).abs() < 1e-15));
        assert!(recover_product_roots_of_unity(&m).unwrap().norm() < 1e-14);

        // z₁ = z₂ = 1, K = 3: |1 + ζ^{−k}|² = 4, 1, 1
        let m = roots_of_unity_magnitudes(c(1., 0.), c(1., 0.), 3);
        assert!((m[0] - 2.0).abs() < 1e-15 && (m[1] - 1.0).abs() < 1e-14 && (m[2] - 1.0).abs() < 1e-14);
        assert!((recover_product_roots_of_unity(&m).unwrap() - c(1., 0.)).norm() < 1e-14);

        assert!(recover_product_roots_of_unity(&[1.0, 1.0]).is_err());

        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let angles = PolarizationAngles::new(0.0, -FRAC_PI_2).unwrap();
        for _ in 0..200 {
            let (z1, z2) = (random_nonzero(&mut rng), random_nonzero(&mut rng));
            let want = z1.conj() * z2;
            let m = roots_of_unity_magnitudes(z1, z2, 4);
            let got = recover_product_roots_of_unity(&m).unwrap();
            assert!((got - want).norm() <= 1e-10 * want.norm().max(1.0));
            let data = PolarizationData::new(z1.norm(), z2.norm(), m[0], m[1]).unwrap();
            let routed = recover_product(&data, angles).unwrap();
            assert!((routed - got).norm() <= 1e-9 * want.norm());
            for k in 3..8 {
                let got = recover_product_roots_of_unity(&roots_of_unity_magnitudes(z1, z2, k)).unwrap();
                assert!((got - want).norm() <= 1e-10 * want.norm().max(1.0));
            }
        }
    }
}
