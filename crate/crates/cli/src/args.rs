use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use mrpoly::eval::Algorithm;

use crate::CliError;

/// Polygonal curve simplification: optimal and corridor DP, split/merge
/// baselines and nested multiresolution pyramids.
#[derive(Debug, Clone, PartialEq, Parser)]
#[command(name = "mrpoly", version)]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, PartialEq, Subcommand)]
pub enum Command {
    /// Simplify one curve to K segments.
    Simplify(SimplifyArgs),
    /// Score one algorithm against the full-search optimum.
    Fidelity(SimplifyArgs),
    /// Timing or fidelity sweep over synthetic coastlines.
    Bench(BenchArgs),
    /// Write a synthetic fractal coastline.
    Gen(GenArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Sweep {
    Timing,
    Fidelity,
}

#[derive(Debug, Clone, PartialEq, Args)]
pub struct CurveSource {
    /// Polyline file with one `x,y` pair per line.
    #[arg(long = "in", value_name = "PATH")]
    pub input: Option<PathBuf>,
    /// Generate a coastline with this many vertices instead of reading one.
    #[arg(long, conflicts_with = "input")]
    pub n: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Roughness of generated coastlines, in (0, 1).
    #[arg(long, default_value_t = 0.75)]
    pub h: f64,
}

#[derive(Debug, Clone, PartialEq, Args)]
pub struct SimplifyArgs {
    #[arg(long, value_parser = parse_algorithm)]
    pub algo: Algorithm,
    /// Target number of segments.
    #[arg(long)]
    pub k: usize,
    /// Decimation factor between pyramid levels (MR only).
    #[arg(long, default_value_t = 0.5)]
    pub rho: f64,
    /// Corridor half-width (RSDP and MR).
    #[arg(long, default_value_t = 4)]
    pub beta: usize,
    #[command(flatten)]
    pub source: CurveSource,
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Clone, PartialEq, Args)]
pub struct BenchArgs {
    /// Comma-separated algorithms.
    #[arg(long, value_delimiter = ',', value_parser = parse_algorithm,
          default_value = "fsdp,rsdp,split,merge,mr")]
    pub algos: Vec<Algorithm>,
    /// Segment counts: a value, a comma list or a range (see `--n`).
    #[arg(long, value_parser = parse_counts)]
    pub k: Counts,
    /// Vertex counts: `1025`, `1025,2049` or a range `start:stop:xF`
    /// (geometric) / `start:stop:+S` (arithmetic), both inclusive.
    #[arg(long, value_parser = parse_counts)]
    pub n: Counts,
    #[arg(long, default_value_t = 5)]
    pub reps: usize,
    #[arg(long, value_enum, default_value = "timing")]
    pub sweep: Sweep,
    /// Coastlines per size for the fidelity sweep.
    #[arg(long, default_value_t = 10)]
    pub curves: u64,
    #[arg(long, default_value_t = 0.5)]
    pub rho: f64,
    #[arg(long, default_value_t = 4)]
    pub beta: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 0.75)]
    pub h: f64,
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
}

#[derive(Debug, Clone, PartialEq, Args)]
pub struct GenArgs {
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Number of vertices.
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 0.75)]
    pub h: f64,
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
}

/// A parsed list of counts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Counts(pub Vec<usize>);

fn parse_algorithm(s: &str) -> Result<Algorithm, String> {
    s.parse()
        .map_err(|e: mrpoly::eval::UnknownAlgorithm| e.to_string())
}

fn parse_count(s: &str) -> Result<usize, String> {
    s.trim()
        .parse()
        .map_err(|_| format!("`{s}` is not a nonnegative integer"))
}

/// Expands `a`, `a,b,c`, `start:stop:xF` and `start:stop:+S`.
pub fn parse_counts(s: &str) -> Result<Counts, String> {
    let parts: Vec<&str> = s.split(':').collect();
    let values = match parts.as_slice() {
        [single] => single
            .split(',')
            .map(parse_count)
            .collect::<Result<Vec<_>, _>>()?,
        [start, stop, step] => {
            let (start, stop) = (parse_count(start)?, parse_count(stop)?);
            if start == 0 || start > stop {
                return Err(format!("range `{s}` must satisfy 0 < start <= stop"));
            }
            let mut out = Vec::new();
            if let Some(factor) = step.strip_prefix('x') {
                let factor = parse_count(factor)?;
                if factor < 2 {
                    return Err(format!("geometric factor in `{s}` must be at least 2"));
                }
                let mut v = start;
                while v <= stop {
                    out.push(v);
                    v = v.saturating_mul(factor);
                }
            } else {
                let step = parse_count(step.strip_prefix('+').unwrap_or(step))?;
                if step == 0 {
                    return Err(format!("step in `{s}` must be positive"));
                }
                out.extend((start..=stop).step_by(step));
            }
            out
        }
        _ => return Err(format!("cannot parse counts `{s}`")),
    };
    Ok(Counts(values))
}

fn check_rho(rho: f64) -> Result<(), CliError> {
    if rho > 0.0 && rho < 1.0 {
        Ok(())
    } else {
        Err(CliError::Usage(format!(
            "--rho must lie in (0, 1), got {rho}"
        )))
    }
}

fn check_beta(beta: usize) -> Result<(), CliError> {
    if beta >= 1 {
        Ok(())
    } else {
        Err(CliError::Usage("--beta must be at least 1".into()))
    }
}

fn check_h(h: f64) -> Result<(), CliError> {
    if h > 0.0 && h < 1.0 {
        Ok(())
    } else {
        Err(CliError::Usage(format!("--h must lie in (0, 1), got {h}")))
    }
}

impl RunConfig {
    fn validate(self) -> Result<Self, CliError> {
        match &self.command {
            Command::Simplify(a) | Command::Fidelity(a) => {
                check_rho(a.rho)?;
                check_beta(a.beta)?;
                check_h(a.source.h)?;
                if a.k == 0 {
                    return Err(CliError::Usage("--k must be at least 1".into()));
                }
                if a.source.input.is_none() && a.source.n.is_none() {
                    return Err(CliError::Usage("one of --in or --n is required".into()));
                }
            }
            Command::Bench(b) => {
                check_rho(b.rho)?;
                check_beta(b.beta)?;
                check_h(b.h)?;
                if b.k.0.is_empty() || b.k.0.contains(&0) {
                    return Err(CliError::Usage("--k values must be at least 1".into()));
                }
                if b.n.0.is_empty() {
                    return Err(CliError::Usage("--n needs at least one size".into()));
                }
                if b.sweep == Sweep::Timing && b.reps < 5 {
                    return Err(CliError::Usage("--reps must be at least 5".into()));
                }
                if b.algos.is_empty() || b.curves == 0 {
                    return Err(CliError::Usage("nothing to run".into()));
                }
            }
            Command::Gen(g) => {
                check_h(g.h)?;
                if g.n < 2 {
                    return Err(CliError::Usage("--n must be at least 2".into()));
                }
            }
        }
        Ok(self)
    }
}

/// Parses and validates a full argument vector, program name first.
///
/// Help and version requests come back as [`CliError::Info`].
pub fn parse_args<I, T>(argv: I) -> Result<RunConfig, CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match RunConfig::try_parse_from(argv) {
        Ok(cfg) => cfg.validate(),
        Err(e) if !e.use_stderr() => Err(CliError::Info(e.to_string())),
        Err(e) => Err(CliError::Usage(e.to_string())),
    }
}
