//! Min-ε polygonal curve simplification.
//!
//! A [`Polyline`] of `N` vertices is approximated by `K` segments whose
//! breakpoints are original vertices, scoring each vertex by its squared
//! distance to the line of its segment. Engines:
//!
//! - [`fsdp_simplify`]: exact dynamic program.
//! - [`rsdp_simplify`]: the same DP inside a corridor of half-width β.
//! - [`split_simplify`], [`merge_simplify`]: greedy top-down and bottom-up.
//! - [`mr_simplify`]: a nested pyramid of corridor DPs, linear in `N`.
//!
//! [`eval`] holds fidelity scoring, synthetic coastlines and timing sweeps;
//! [`io`] reads and writes plain-text polylines.
//!
//! ```
//! use mrpoly::{fsdp_simplify, split_simplify, Polyline};
//!
//! let c5 = Polyline::from_xy([(0.0, 0.0), (1.0, 1.0), (2.0, 0.0), (3.0, 1.0), (4.0, 0.0)])?;
//! let best = fsdp_simplify(&c5, 2)?;
//! assert_eq!(best.breakpoints(), &[0, 1, 4]);
//! assert!(split_simplify(&c5, 2)?.error() >= best.error());
//! # Ok::<(), Box<dyn std::error::Error>>(())
//! ```

pub mod dp;
pub mod error;
pub mod eval;
pub mod geometry;
pub mod heuristics;
pub mod io;
pub mod multires;

pub use dp::{
    brute_force_optimum, fsdp_profile, fsdp_simplify, rsdp_simplify, Corridor, DpStats, DpTable,
};
pub use error::SimplifyError;
pub use geometry::{curve_error, Approximation, GeometryError, MomentTable, Point, Polyline};
pub use heuristics::{merge_simplify, split_simplify};
pub use multires::{level_schedule, mr_simplify, LevelSchedule, Pyramid};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/error-metric.md")]
    mod error_metric {}
    #[doc = include_str!("../../../book/src/dynamic-programming.md")]
    mod dynamic_programming {}
    #[doc = include_str!("../../../book/src/heuristics.md")]
    mod heuristics {}
    #[doc = include_str!("../../../book/src/multiresolution.md")]
    mod multiresolution {}
    #[doc = include_str!("../../../book/src/evaluation.md")]
    mod evaluation {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
