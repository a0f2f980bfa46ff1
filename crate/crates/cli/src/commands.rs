use std::path::Path;
use std::time::Instant;

use dynphase::frames::{self, DynamicalFrame, FrameError, SparkOptions};
use dynphase::generate;
use dynphase::io::{self, FrameSpec, InstanceError, InstanceFile};
use dynphase::linalg::{self, ComplexMatrix, ComplexVector};
use dynphase::polarization::PolarizationAngles;
use dynphase::retrieval::{
    self, MeasurementConfig, MeasurementSet, RecoveryResult, RecoveryStatus, RetrievalError,
};
use dynphase::vandermonde::{self, SparkCertificate, VandermondeError, SPARK_BUDGET, SPARK_TOL};
use itertools::Itertools;
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::args::{BenchArgs, BenchFrame, Cli, Command, GenArgs, GenKind, GlobalArgs};
use crate::report::{render, InputDigest, Report};
use crate::{CliError, Output};

/// Default number of recoveries `bench` may run.
pub const BENCH_BUDGET: u64 = 100_000;
/// A recovery counts as successful within this relative global-phase distance.
pub const SUCCESS_TOL: f64 = 1e-6;

pub fn dispatch(cli: &Cli) -> Result<Output, CliError> {
    let g = &cli.global;
    match &cli.command {
        Command::Gen(args) => gen(args, g),
        Command::Analyze { instance } => analyze(instance, g),
        Command::Measure { instance } => measure(instance, g),
        Command::Recover {
            measurements,
            instance,
            estimate,
        } => recover(measurements, instance, estimate.as_deref(), g),
        Command::Bench(args) => bench(args, g),
        Command::Verify { instance } => verify(instance, g),
    }
}

fn invalid(e: impl std::fmt::Display) -> CliError {
    CliError::Invalid(e.to_string())
}

fn frame_error(e: FrameError) -> CliError {
    match e {
        FrameError::Vandermonde(e @ VandermondeError::BudgetExceeded { .. }) => {
            CliError::Budget(e.to_string())
        }
        FrameError::NotAFrame { .. } => CliError::Failed(e.to_string()),
        e => invalid(e),
    }
}

fn retrieval_error(e: RetrievalError) -> CliError {
    match e {
        RetrievalError::Frame(e) => frame_error(e),
        e @ (RetrievalError::ZeroCoefficient { .. }
        | RetrievalError::Polarization { .. }
        | RetrievalError::SingularSubframe
        | RetrievalError::Linalg(_)) => CliError::Failed(e.to_string()),
        e => invalid(e),
    }
}

fn instance_error(e: InstanceError) -> CliError {
    match e {
        InstanceError::Retrieval(e) => retrieval_error(e),
        e => invalid(e),
    }
}

fn read(path: &Path) -> Result<Vec<u8>, CliError> {
    std::fs::read(path).map_err(|e| invalid(format!("cannot read {}: {e}", path.display())))
}

fn parse<T: DeserializeOwned>(path: &Path, bytes: &[u8]) -> Result<T, CliError> {
    serde_json::from_slice(bytes).map_err(|e| invalid(format!("{}: {e}", path.display())))
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("value serializes");
    s.push('\n');
    s
}

fn overridden_config(mut cfg: MeasurementConfig, g: &GlobalArgs) -> Result<MeasurementConfig, CliError> {
    if let Some([a1, a2]) = g.angles {
        cfg.angles = PolarizationAngles::new(a1, a2).map_err(invalid)?;
    }
    if let Some(j) = g.jumps {
        cfg.jumps = j;
    }
    if let Some(t) = g.zero_tol {
        if !(t >= 0.0 && t.is_finite()) {
            return Err(invalid(format!("zero tolerance must be a nonnegative number, got {t}")));
        }
        cfg.zero_tol = t;
    }
    Ok(cfg)
}

/// Instance with command-line overrides applied, plus its raw bytes.
fn load_instance(path: &Path, g: &GlobalArgs) -> Result<(InstanceFile, Vec<u8>), CliError> {
    let bytes = read(path)?;
    let mut inst: InstanceFile = parse(path, &bytes)?;
    inst.config = overridden_config(inst.config, g)?;
    inst.validate().map_err(instance_error)?;
    Ok((inst, bytes))
}

fn seed(inst: Option<&InstanceFile>, g: &GlobalArgs) -> u64 {
    g.seed.or(inst.and_then(|i| i.seed)).unwrap_or(0)
}

fn spark_tol(g: &GlobalArgs) -> Result<f64, CliError> {
    match g.tol {
        Some(t) if !(t >= 0.0 && t.is_finite()) => Err(invalid(format!("tolerance must be nonnegative, got {t}"))),
        Some(t) => Ok(t),
        None => Ok(SPARK_TOL),
    }
}

fn finish(command: &'static str, digest: InputDigest, outcome: impl Serialize, start: Instant, g: &GlobalArgs) -> String {
    let report = Report {
        command,
        inputs_digest: digest.finish(),
        outcome: serde_json::to_value(outcome).expect("outcome serializes"),
        wall_time_ms: g.timing.then(|| start.elapsed().as_secs_f64() * 1e3),
    };
    render(&report, g.format)
}

fn random_real_signal<R: Rng>(rng: &mut R, dim: usize) -> ComplexVector {
    ComplexVector::from_fn(dim, |_, _| rng.gen_range(-1.0..1.0).into())
}

fn gen(args: &GenArgs, g: &GlobalArgs) -> Result<Output, CliError> {
    let (d, len) = (args.d, args.len);
    if d == 0 || len < d {
        return Err(invalid(format!("need d >= 1 and L >= d, got d = {d}, L = {len}")));
    }
    if args.real && args.kind != GenKind::Rotation {
        return Err(invalid("--real needs a real frame; only `rotation` generates one"));
    }
    let seed = g.seed.unwrap_or(0);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let frame = match args.kind {
        GenKind::RandomDiag => {
            let spec = generate::diagonalizable_spec(&mut rng, d).map_err(invalid)?;
            let generator = generate::dense_generator(&mut rng, &spec);
            FrameSpec::Jordan { spec, generator, len }
        }
        GenKind::Jordan => {
            let spec = generate::jordan_spec(&mut rng, d).map_err(invalid)?;
            let generator = generate::dense_generator(&mut rng, &spec);
            FrameSpec::Jordan { spec, generator, len }
        }
        GenKind::Circulant => FrameSpec::Circulant {
            first_column: generate::signal(&mut rng, d),
            generator: generate::signal(&mut rng, d),
            len,
        },
        GenKind::Harmonic => FrameSpec::Harmonic { dim: d, len },
        GenKind::Rotation => {
            if d != 2 {
                return Err(invalid(format!("rotation instances have d = 2, got {d}")));
            }
            FrameSpec::Matrix {
                operator: generate::rotation(args.theta),
                generator: ComplexVector::from_vec(vec![1.0.into(), 0.0.into()]),
                len,
            }
        }
    };
    let config = overridden_config(
        MeasurementConfig {
            real_mode: args.real,
            ..Default::default()
        },
        g,
    )?;
    let x = if args.no_signal {
        None
    } else {
        if let Some(&bad) = args.zeros.iter().find(|&&l| l >= len) {
            return Err(invalid(format!("zero index {bad} is outside 0..{len}")));
        }
        let built = frame.build().map_err(frame_error)?;
        let mut x = if args.real {
            random_real_signal(&mut rng, d)
        } else {
            generate::signal(&mut rng, d)
        };
        if !args.zeros.is_empty() {
            let cols: Vec<ComplexVector> = args.zeros.iter().map(|&l| built.vectors()[l].clone()).collect();
            x = linalg::project_out(&ComplexMatrix::from_columns(&cols), &x).map_err(invalid)?;
        }
        Some(x)
    };
    let inst = InstanceFile {
        frame,
        x,
        seed: Some(seed),
        config,
    };
    inst.validate().map_err(instance_error)?;
    Ok(Output::ok(to_json(&inst)))
}

#[derive(Debug, Clone, Serialize)]
pub struct AnalysisOutcome {
    pub kind: &'static str,
    pub d: usize,
    #[serde(rename = "L")]
    pub len: usize,
    pub is_frame: bool,
    /// Optimal lower frame bound `σ_min²`.
    pub alpha: f64,
    /// Optimal upper frame bound `σ_max²`.
    pub beta: f64,
    /// Spectral frame criterion, when the operator's structure is known.
    pub frame_criterion: Option<bool>,
    pub spark: SparkCertificate,
}

fn analysis(spec: &FrameSpec, frame: &DynamicalFrame, tol: f64, budget: u64) -> Result<AnalysisOutcome, CliError> {
    let bounds = frames::analyze(frame).map_err(frame_error)?;
    let (d, len) = (frame.dim(), frame.len());
    let diagonal = spec.diagonal_data().map_err(frame_error)?;
    let criterion_tol = Default::default();
    let frame_criterion = match (spec, &diagonal) {
        (FrameSpec::Jordan { spec, generator, .. }, _) => {
            Some(frames::frame_criterion_jordan(spec, generator, criterion_tol).map_err(frame_error)?)
        }
        (_, Some((values, psi))) => Some(frames::frame_criterion_diagonalizable(values, psi, criterion_tol)),
        _ => None,
    };
    let spark = match diagonal {
        _ if len < d => frames::analyze_with_spark(frame, tol, budget)
            .map_err(frame_error)?
            .full_spark
            .expect("spark requested"),
        Some((values, psi)) => {
            let opts = SparkOptions {
                tol,
                budget,
                ..Default::default()
            };
            frames::full_spark_criterion(&values, &psi, len, opts).map_err(frame_error)?
        }
        None => vandermonde::full_spark(&frame.synthesis_matrix(), tol, budget)
            .map_err(|e| frame_error(e.into()))?,
    };
    Ok(AnalysisOutcome {
        kind: spec.kind(),
        d,
        len,
        is_frame: bounds.is_frame,
        alpha: bounds.lower_bound,
        beta: bounds.upper_bound,
        frame_criterion,
        spark,
    })
}

fn analyze(path: &Path, g: &GlobalArgs) -> Result<Output, CliError> {
    let start = Instant::now();
    let (inst, bytes) = load_instance(path, g)?;
    let tol = spark_tol(g)?;
    let budget = g.budget.unwrap_or(SPARK_BUDGET);
    let frame = inst.frame.build().map_err(frame_error)?;
    let outcome = analysis(&inst.frame, &frame, tol, budget)?;
    let mut digest = InputDigest::new("analyze");
    digest.add(&bytes);
    digest.add_json(&(tol, budget));
    Ok(Output::ok(finish("analyze", digest, outcome, start, g)))
}

fn noisy(ms: MeasurementSet, g: &GlobalArgs, seed: u64) -> Result<MeasurementSet, CliError> {
    match g.noise {
        None => Ok(ms),
        Some(s) if !(s >= 0.0 && s.is_finite()) => Err(invalid(format!("noise must be nonnegative, got {s}"))),
        Some(s) => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x6e6f_6973_65);
            Ok(ms.map_values(|v| v + rng.gen_range(-s..=s)))
        }
    }
}

fn measure(path: &Path, g: &GlobalArgs) -> Result<Output, CliError> {
    let (inst, _) = load_instance(path, g)?;
    let x = inst
        .x
        .as_ref()
        .ok_or_else(|| invalid(format!("{}: instance has no signal \"x\"", path.display())))?;
    let frame = inst.frame.build().map_err(frame_error)?;
    let ms = retrieval::measure(x, &frame, &inst.config).map_err(retrieval_error)?;
    let ms = noisy(ms, g, seed(Some(&inst), g))?;
    Ok(Output::ok(to_json(&ms)))
}

#[derive(Debug, Clone, Serialize)]
pub struct RecoveryOutcome {
    /// `dense` when every coefficient is nonzero, `zero-aware` otherwise.
    pub path: &'static str,
    pub real_mode: bool,
    pub status: RecoveryStatus,
    pub used_indices: Vec<usize>,
    pub component_size: usize,
    pub residual: f64,
    pub estimate: Vec<io::ComplexPair>,
    /// Present when the instance carries the true signal.
    pub global_phase_distance: Option<f64>,
    pub relative_error: Option<f64>,
}

fn recovery(
    ms: &MeasurementSet,
    frame: &DynamicalFrame,
    cfg: &MeasurementConfig,
    truth: Option<&ComplexVector>,
) -> Result<(RecoveryResult, RecoveryOutcome), CliError> {
    let dense = retrieval::nonzero_pattern(ms.base(), cfg.zero_tol).iter().all(|&n| n);
    let result = retrieval::recover(ms, frame, cfg).map_err(retrieval_error)?;
    let distance = truth
        .map(|x| retrieval::global_phase_distance(&result.estimate, x))
        .transpose()
        .map_err(retrieval_error)?;
    let relative_error = distance.zip(truth).map(|(dist, x)| {
        let n = x.norm();
        if n > 0.0 {
            dist / n
        } else {
            dist
        }
    });
    let outcome = RecoveryOutcome {
        path: if dense { "dense" } else { "zero-aware" },
        real_mode: cfg.real_mode,
        status: result.status,
        used_indices: result.used_indices.clone(),
        component_size: result.component_size,
        residual: result.residual,
        estimate: io::vector_to_wire(&result.estimate),
        global_phase_distance: distance,
        relative_error,
    };
    Ok((result, outcome))
}

fn exit_for(status: RecoveryStatus) -> u8 {
    if status == RecoveryStatus::Failed {
        1
    } else {
        0
    }
}

fn recover(ms_path: &Path, inst_path: &Path, estimate: Option<&Path>, g: &GlobalArgs) -> Result<Output, CliError> {
    let start = Instant::now();
    let ms_bytes = read(ms_path)?;
    let ms: MeasurementSet = parse(ms_path, &ms_bytes)?;
    let (inst, inst_bytes) = load_instance(inst_path, g)?;
    if ms.len() != inst.frame.len() {
        return Err(invalid(format!(
            "measurements have L = {}, instance has L = {}",
            ms.len(),
            inst.frame.len()
        )));
    }
    if ms.jumps() != inst.config.jumps {
        return Err(invalid(format!(
            "measurements have J = {}, configuration has J = {}",
            ms.jumps(),
            inst.config.jumps
        )));
    }
    if ms.angles() != inst.config.angles {
        return Err(invalid("measurement angles differ from the configured angles"));
    }
    let frame = inst.frame.build().map_err(frame_error)?;
    let (result, outcome) = recovery(&ms, &frame, &inst.config, inst.x.as_ref())?;
    let mut digest = InputDigest::new("recover");
    digest.add(&ms_bytes);
    digest.add(&inst_bytes);
    digest.add_json(&inst.config);
    let mut out = Output::ok(finish("recover", digest, &outcome, start, g));
    if let Some(path) = estimate {
        out.files.push((path.to_path_buf(), to_json(&io::vector_to_wire(&result.estimate))));
    }
    out.exit_code = exit_for(result.status);
    Ok(out)
}

#[derive(Debug, Clone, Serialize)]
struct MeasurementSummary {
    count: usize,
    zero_indices: Vec<usize>,
    noise: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
struct VerifyOutcome {
    seed: u64,
    signal_from_instance: bool,
    analysis: AnalysisOutcome,
    measurements: MeasurementSummary,
    recovery: RecoveryOutcome,
}

fn verify(path: &Path, g: &GlobalArgs) -> Result<Output, CliError> {
    let start = Instant::now();
    let (inst, bytes) = load_instance(path, g)?;
    let seed = seed(Some(&inst), g);
    let tol = spark_tol(g)?;
    let budget = g.budget.unwrap_or(SPARK_BUDGET);
    let frame = inst.frame.build().map_err(frame_error)?;
    let analysis = analysis(&inst.frame, &frame, tol, budget)?;
    let x = match &inst.x {
        Some(x) => x.clone(),
        None => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            if inst.config.real_mode {
                random_real_signal(&mut rng, frame.dim())
            } else {
                generate::signal(&mut rng, frame.dim())
            }
        }
    };
    let ms = retrieval::measure(&x, &frame, &inst.config).map_err(retrieval_error)?;
    let ms = noisy(ms, g, seed)?;
    let nonzero = retrieval::nonzero_pattern(ms.base(), inst.config.zero_tol);
    let (result, recovery) = recovery(&ms, &frame, &inst.config, Some(&x))?;
    let outcome = VerifyOutcome {
        seed,
        signal_from_instance: inst.x.is_some(),
        analysis,
        measurements: MeasurementSummary {
            count: ms.values().count(),
            zero_indices: (0..nonzero.len()).filter(|&l| !nonzero[l]).collect(),
            noise: g.noise,
        },
        recovery,
    };
    let mut digest = InputDigest::new("verify");
    digest.add(&bytes);
    digest.add_json(&(seed, tol, budget, g.noise, inst.config));
    let mut out = Output::ok(finish("verify", digest, outcome, start, g));
    out.exit_code = exit_for(result.status);
    Ok(out)
}

#[derive(Debug, Clone, Serialize)]
pub struct BenchRow {
    pub d: usize,
    #[serde(rename = "L")]
    pub len: usize,
    #[serde(rename = "J")]
    pub jumps: usize,
    pub min_length: usize,
    pub at_or_above_bound: bool,
    pub patterns: usize,
    pub exhaustive: bool,
    /// Patterns whose constructed signal had extra vanishing coefficients.
    pub unrealizable: usize,
    /// Fraction of patterns whose chains cover enough coefficients.
    pub predicted_rate: f64,
    pub success_rate: f64,
    pub max_relative_error: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time_ms: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
struct BoundPoint {
    d: usize,
    #[serde(rename = "J")]
    jumps: usize,
    min_length: usize,
}

#[derive(Debug, Clone, Serialize)]
struct BenchOutcome {
    frame: &'static str,
    seed: u64,
    rows: Vec<BenchRow>,
    min_length: Vec<BoundPoint>,
    skipped: Vec<String>,
}

/// Zero sets with fewer than `dim` elements: all of them when there are at
/// most `limit`, else `limit` random ones.
fn zero_patterns<R: Rng>(rng: &mut R, dim: usize, len: usize, limit: usize) -> (Vec<Vec<usize>>, bool) {
    let total: u64 = (0..dim.min(len + 1))
        .map(|m| vandermonde::subset_count(len, m))
        .fold(0u64, u64::saturating_add);
    if total <= limit as u64 {
        let mut all = Vec::new();
        for m in 0..dim.min(len + 1) {
            all.extend((0..len).combinations(m));
        }
        return (all, true);
    }
    let picks = (0..limit)
        .map(|_| {
            let m = rng.gen_range(0..dim.min(len + 1));
            let mut z = sample(rng, len, m).into_vec();
            z.sort_unstable();
            z
        })
        .collect();
    (picks, false)
}

fn bench(args: &BenchArgs, g: &GlobalArgs) -> Result<Output, CliError> {
    let start = Instant::now();
    let seed = g.seed.unwrap_or(0);
    let budget = g.budget.unwrap_or(BENCH_BUDGET);
    let angles = match g.angles {
        Some([a1, a2]) => PolarizationAngles::new(a1, a2).map_err(invalid)?,
        None => PolarizationAngles::default(),
    };
    let zero_tol = g.zero_tol.unwrap_or(retrieval::DEFAULT_ZERO_TOL);
    if args.dims.iter().any(|&d| d == 0) {
        return Err(invalid("dimensions must be positive"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut skipped = Vec::new();
    let mut cells = Vec::new();
    let mut work = 0u64;
    for &d in &args.dims {
        let lengths = args.lengths.clone().map(|l| l.0).unwrap_or_else(|| (d..=2 * d).collect());
        for &len in &lengths {
            if len < d {
                skipped.push(format!("d = {d}, L = {len}: L < d"));
                continue;
            }
            let frame = match args.frame {
                BenchFrame::Harmonic => frames::harmonic_frame(d, len).map_err(frame_error)?,
                BenchFrame::RandomDiag => generate::diagonalizable_frame(&mut rng, d, len).map_err(frame_error)?.1,
            };
            let (patterns, exhaustive) = zero_patterns(&mut rng, d, len, args.trials);
            for &jumps in &args.jump_grid {
                let Ok(min_length) = retrieval::min_length(d, jumps) else {
                    skipped.push(format!("d = {d}, J = {jumps}: J > d - 2"));
                    continue;
                };
                work = work.saturating_add(patterns.len() as u64);
                cells.push((d, len, jumps, min_length, frame.clone(), patterns.clone(), exhaustive));
            }
        }
    }
    if work > budget {
        return Err(CliError::Budget(format!("bench needs {work} recoveries, budget is {budget}")));
    }
    let mut rows = Vec::with_capacity(cells.len());
    for (d, len, jumps, min_length, frame, patterns, exhaustive) in cells {
        let cell_start = Instant::now();
        let cfg = MeasurementConfig {
            angles,
            jumps,
            zero_tol,
            real_mode: false,
        };
        let (mut predicted, mut successes, mut unrealizable, mut max_err) = (0usize, 0usize, 0usize, 0.0f64);
        for zeros in &patterns {
            let nonzero: Vec<bool> = (0..len).map(|l| !zeros.contains(&l)).collect();
            let x = generate::signal_vanishing_on(&mut rng, &frame, zeros).map_err(invalid)?;
            let ms = retrieval::measure(&x, &frame, &cfg).map_err(retrieval_error)?;
            if retrieval::nonzero_pattern(ms.base(), zero_tol) != nonzero {
                unrealizable += 1;
                continue;
            }
            if retrieval::pattern_recoverable(&nonzero, d, jumps) {
                predicted += 1;
            }
            let Ok(result) = retrieval::recover_full_spark(&ms, &frame, &cfg) else {
                continue;
            };
            if result.status == RecoveryStatus::Failed {
                continue;
            }
            let err = retrieval::global_phase_distance(&result.estimate, &x).map_err(retrieval_error)? / x.norm();
            if err <= SUCCESS_TOL {
                successes += 1;
                max_err = max_err.max(err);
            }
        }
        let realized = (patterns.len() - unrealizable).max(1) as f64;
        rows.push(BenchRow {
            d,
            len,
            jumps,
            min_length,
            at_or_above_bound: len >= min_length,
            patterns: patterns.len(),
            exhaustive,
            unrealizable,
            predicted_rate: predicted as f64 / realized,
            success_rate: successes as f64 / realized,
            max_relative_error: max_err,
            wall_time_ms: g.timing.then(|| cell_start.elapsed().as_secs_f64() * 1e3),
        });
    }
    let mut curve = Vec::new();
    for &d in &args.dims {
        for &jumps in &args.jump_grid {
            if let Ok(min_length) = retrieval::min_length(d, jumps) {
                curve.push(BoundPoint { d, jumps, min_length });
            }
        }
    }
    let outcome = BenchOutcome {
        frame: match args.frame {
            BenchFrame::Harmonic => "harmonic",
            BenchFrame::RandomDiag => "random-diag",
        },
        seed,
        rows,
        min_length: curve,
        skipped,
    };
    let mut digest = InputDigest::new("bench");
    let lengths = args.lengths.as_ref().map(|l| l.0.clone());
    digest.add_json(&(
        &args.dims,
        lengths,
        &args.jump_grid,
        args.trials,
        outcome.frame,
        seed,
        budget,
        angles,
        zero_tol,
    ));
    Ok(Output::ok(finish("bench", digest, outcome, start, g)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_patterns_exhaustive_or_sampled() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let (all, exhaustive) = zero_patterns(&mut rng, 4, 6, 1000);
        assert!(exhaustive);
        assert_eq!(all.len(), 1 + 6 + 15 + 20);
        let (some, exhaustive) = zero_patterns(&mut rng, 4, 6, 10);
        assert!(!exhaustive);
        assert_eq!(some.len(), 10);
        assert!(some.iter().all(|z| z.len() < 4 && z.windows(2).all(|w| w[0] < w[1])));
    }

    #[test]
    fn error_classes() {
        assert_eq!(retrieval_error(RetrievalError::SingularSubframe).exit_code(), 1);
        assert_eq!(retrieval_error(RetrievalError::ConfigMismatch("J")).exit_code(), 2);
        let budget = FrameError::Vandermonde(VandermondeError::BudgetExceeded {
            rows: 3,
            cols: 40,
            budget: 5,
        });
        assert_eq!(frame_error(budget).exit_code(), 3);
    }
}
