//! Evaluation harness: fidelity against the full-search optimum, synthetic
//! coastlines, timing sweeps and log-log complexity fits.

mod bench;
mod coastline;
mod fidelity;
mod slope;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dp::{fsdp_simplify_with_stats, rsdp_simplify_with_stats, DpStats};
use crate::error::SimplifyError;
use crate::geometry::{Approximation, GeometryError, Polyline};
use crate::heuristics::{merge_simplify, split_simplify};
use crate::multires::{mr_simplify, Pyramid};

pub use bench::{
    run_fidelity_sweep, run_timing_sweep, time_algorithm, write_csv, write_json, BenchRecord,
    FidelityParams, TimingParams,
};
pub use coastline::{generate_coastline, total_turning};
pub use fidelity::{fidelity, FidelityReport};
pub use slope::{fit_loglog_slope, loglog_slope};

#[derive(Debug, Error)]
pub enum EvalError {
    #[error("approximation errors must be nonnegative (E_min = {e_min}, E = {e})")]
    NegativeError { e_min: f64, e: f64 },
    #[error("candidate error is 0 but the optimum is {e_min}")]
    ZeroDenominator { e_min: f64 },
    #[error("roughness must lie strictly between 0 and 1, got {0}")]
    BadRoughness(f64),
    #[error("a coastline needs at least 2 vertices, got {0}")]
    TooFewVertices(usize),
    #[error("slope fit needs at least 4 distinct N values, got {0}")]
    TooFewPoints(usize),
    #[error("timing needs at least 5 repetitions, got {0}")]
    TooFewRepetitions(usize),
    #[error("empty corpus or empty K list")]
    EmptySweep,
    #[error(transparent)]
    Simplify(#[from] SimplifyError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Algorithm {
    Fsdp,
    Rsdp,
    Split,
    Merge,
    Mr,
}

impl Algorithm {
    pub const ALL: [Algorithm; 5] = [
        Algorithm::Fsdp,
        Algorithm::Rsdp,
        Algorithm::Split,
        Algorithm::Merge,
        Algorithm::Mr,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Fsdp => "FSDP",
            Algorithm::Rsdp => "RSDP",
            Algorithm::Split => "SPLIT",
            Algorithm::Merge => "MERGE",
            Algorithm::Mr => "MR",
        }
    }

    /// Whether the algorithm takes a corridor half-width.
    pub fn uses_beta(self) -> bool {
        matches!(self, Algorithm::Rsdp | Algorithm::Mr)
    }

    pub fn uses_rho(self) -> bool {
        self == Algorithm::Mr
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Error)]
#[error("unknown algorithm `{0}` (expected fsdp, rsdp, split, merge or mr)")]
pub struct UnknownAlgorithm(String);

impl FromStr for Algorithm {
    type Err = UnknownAlgorithm;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| UnknownAlgorithm(s.to_string()))
    }
}

/// Result of one engine invocation.
#[derive(Debug, Clone)]
pub struct RunOutcome {
    /// Breakpoints into the original curve, error measured on it.
    pub approximation: Approximation,
    /// DP work; zero for the heuristics.
    pub stats: DpStats,
    /// Present for [`Algorithm::Mr`].
    pub pyramid: Option<Pyramid>,
}

/// Runs `algorithm` on `curve`. `rho` and `beta` are ignored by engines that
/// do not use them.
pub fn run_algorithm(
    algorithm: Algorithm,
    curve: &Polyline,
    k: usize,
    rho: f64,
    beta: usize,
) -> Result<RunOutcome, SimplifyError> {
    let plain = |approximation| RunOutcome {
        approximation,
        stats: DpStats::default(),
        pyramid: None,
    };
    Ok(match algorithm {
        Algorithm::Fsdp => {
            let (approximation, stats) = fsdp_simplify_with_stats(curve, k)?;
            RunOutcome {
                approximation,
                stats,
                pyramid: None,
            }
        }
        Algorithm::Rsdp => {
            let (approximation, stats) = rsdp_simplify_with_stats(curve, k, beta)?;
            RunOutcome {
                approximation,
                stats,
                pyramid: None,
            }
        }
        Algorithm::Split => plain(split_simplify(curve, k)?),
        Algorithm::Merge => plain(merge_simplify(curve, k)?),
        Algorithm::Mr => {
            let pyramid = mr_simplify(curve, k, rho, beta)?;
            RunOutcome {
                approximation: pyramid.final_level(),
                stats: pyramid.stats(),
                pyramid: Some(pyramid),
            }
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn algorithm_names_round_trip() {
        for a in Algorithm::ALL {
            assert_eq!(a.name().parse::<Algorithm>().unwrap(), a);
            assert_eq!(a.name().to_lowercase().parse::<Algorithm>().unwrap(), a);
        }
        assert!("dp".parse::<Algorithm>().is_err());
        assert_eq!(serde_json::to_string(&Algorithm::Mr).unwrap(), "\"MR\"");
    }

    #[test]
    fn every_engine_runs_on_c5() {
        let c = Polyline::from_xy([(0., 0.), (1., 1.), (2., 0.), (3., 1.), (4., 0.)]).unwrap();
        for a in Algorithm::ALL {
            let out = run_algorithm(a, &c, 2, 0.5, 4).unwrap();
            assert_eq!(out.approximation.segments(), 2);
            assert_eq!(out.pyramid.is_some(), a == Algorithm::Mr);
        }
    }
}
