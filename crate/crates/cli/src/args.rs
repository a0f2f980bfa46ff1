use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug, Clone)]
#[command(name = "dynphase", version, about = "Dynamical frames and phase retrieval experiments")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone, Default)]
pub struct GlobalArgs {
    /// Random seed for generation, noise and signals missing from the instance.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Spark tolerance on column-scaled subset determinants.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Relative threshold below which a coefficient counts as zero.
    #[arg(long = "zero-tol", global = true)]
    pub zero_tol: Option<f64>,
    /// Polarization angles `a1,a2` in radians.
    #[arg(long, global = true, value_parser = parse_angles, allow_hyphen_values = true)]
    pub angles: Option<[f64; 2]>,
    /// Largest jump minus one.
    #[arg(long, global = true)]
    pub jumps: Option<usize>,
    /// Work limit: subsets for spark enumeration, recoveries for bench.
    #[arg(long, global = true)]
    pub budget: Option<u64>,
    /// Write the primary output here instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Add wall-clock timings to reports (makes them nondeterministic).
    #[arg(long, global = true)]
    pub timing: bool,
    /// Uniform noise amplitude added to every magnitude before recovery.
    #[arg(long, global = true)]
    pub noise: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Text,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// Write a random instance file.
    Gen(GenArgs),
    /// Frame bounds and spark certificate of an instance.
    Analyze { instance: PathBuf },
    /// Simulate the phaseless measurements of the instance signal.
    Measure { instance: PathBuf },
    /// Recover the signal from a measurement file.
    Recover {
        measurements: PathBuf,
        instance: PathBuf,
        /// Also write the estimate as a JSON vector here.
        #[arg(long)]
        estimate: Option<PathBuf>,
    },
    /// Success rates over zero patterns across a (d, L, J) grid.
    Bench(BenchArgs),
    /// Analyze, measure, recover and score one instance.
    Verify { instance: PathBuf },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GenKind {
    RandomDiag,
    Jordan,
    Circulant,
    Harmonic,
    Rotation,
}

impl GenKind {
    pub fn name(self) -> &'static str {
        match self {
            GenKind::RandomDiag => "random-diag",
            GenKind::Jordan => "jordan",
            GenKind::Circulant => "circulant",
            GenKind::Harmonic => "harmonic",
            GenKind::Rotation => "rotation",
        }
    }
}

#[derive(Args, Debug, Clone)]
pub struct GenArgs {
    #[arg(value_enum)]
    pub kind: GenKind,
    /// Dimension d.
    pub d: usize,
    /// Frame length L.
    #[arg(name = "L")]
    pub len: usize,
    /// Rotation angle for `rotation`.
    #[arg(long, default_value_t = std::f64::consts::FRAC_PI_4)]
    pub theta: f64,
    /// Frame indices on which the generated signal must vanish.
    #[arg(long, value_delimiter = ',')]
    pub zeros: Vec<usize>,
    /// Real signal, single real polarization angle.
    #[arg(long)]
    pub real: bool,
    /// Leave the signal out of the instance.
    #[arg(long)]
    pub no_signal: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BenchFrame {
    Harmonic,
    RandomDiag,
}

#[derive(Args, Debug, Clone)]
pub struct BenchArgs {
    /// Dimensions, e.g. `4` or `2,3,4`.
    #[arg(long, value_delimiter = ',', default_value = "4")]
    pub dims: Vec<usize>,
    /// Frame lengths as a list `4,5,6` or an inclusive range `4..8`; defaults to `d..2d`.
    #[arg(long, value_parser = parse_lengths)]
    pub lengths: Option<Lengths>,
    /// Jump parameters to compare.
    #[arg(long = "jump-grid", value_delimiter = ',', default_value = "0")]
    pub jump_grid: Vec<usize>,
    /// Zero patterns per cell; all patterns are used when there are at most this many.
    #[arg(long, default_value_t = 200)]
    pub trials: usize,
    #[arg(long, value_enum, default_value_t = BenchFrame::Harmonic)]
    pub frame: BenchFrame,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lengths(pub Vec<usize>);

fn parse_lengths(s: &str) -> Result<Lengths, String> {
    if let Some((a, b)) = s.split_once("..") {
        let a: usize = a.trim().parse().map_err(|e| format!("bad range start: {e}"))?;
        let b: usize = b.trim().trim_start_matches('=').parse().map_err(|e| format!("bad range end: {e}"))?;
        if a > b {
            return Err(format!("empty range {a}..{b}"));
        }
        return Ok(Lengths((a..=b).collect()));
    }
    s.split(',')
        .map(|t| t.trim().parse().map_err(|e| format!("bad length {t:?}: {e}")))
        .collect::<Result<_, _>>()
        .map(Lengths)
}

fn parse_angles(s: &str) -> Result<[f64; 2], String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 2 {
        return Err("expected two comma-separated angles".into());
    }
    let mut out = [0.0; 2];
    for (o, p) in out.iter_mut().zip(parts) {
        *o = p.trim().parse().map_err(|e| format!("bad angle {p:?}: {e}"))?;
    }
    Ok(out)
}
