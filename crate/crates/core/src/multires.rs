//! Nested multiresolution simplification.
//!
//! Starting from the original curve with `N` segments, each level keeps a
//! fraction `rho` of the previous level's segments, `K_j = round(rho^j·N)`,
//! until one more step would drop below the target `K`. A final step then
//! lands on exactly `K`. Every level is solved by the reduced-search DP run
//! on the previous level's vertices only, so level `j` is always a subset of
//! level `j − 1` and the total DP work is linear in `N` for fixed `rho` and
//! `beta`.

use num_bigint::BigUint;
use num_traits::float::FloatCore;
use serde::Serialize;

use crate::dp::{rsdp_points, DpStats};
use crate::error::{check_k, SimplifyError};
use crate::geometry::{breakpoint_error, Approximation, MomentTable, Point, Polyline};

/// Segment counts of the pyramid, from the original curve to the target.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LevelSchedule {
    #[serde(rename = "N")]
    segments: usize,
    #[serde(rename = "K")]
    target: usize,
    rho: f64,
    r: usize,
    levels: Vec<usize>,
}

impl LevelSchedule {
    /// Input segment count `N` (vertices − 1).
    pub fn segments(&self) -> usize {
        self.segments
    }

    pub fn target(&self) -> usize {
        self.target
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    /// The `r` with `N·rho^(r+1) < K <= N·rho^r`.
    pub fn r(&self) -> usize {
        self.r
    }

    /// `[K_0 = N, K_1, ..., K]`.
    pub fn levels(&self) -> &[usize] {
        &self.levels
    }
}

/// `rho` as an exact dyadic fraction `mantissa / 2^shift`.
fn dyadic(rho: f64) -> (u64, u32) {
    let (mantissa, exponent, _) = FloatCore::integer_decode(rho);
    debug_assert!(exponent < 0);
    let shift = (-exponent) as u32;
    let tz = mantissa.trailing_zeros().min(shift);
    (mantissa >> tz, shift - tz)
}

/// Builds the decimation schedule for `N` input segments down to `K`.
///
/// `K_j` is `rho^j·N` rounded half up; if rounding fails to decrease the
/// count it is lowered by one, and intermediate levels stop once they would
/// reach `K`. All comparisons against `rho^j·N` are made in exact integer
/// arithmetic.
pub fn level_schedule(n: usize, k: usize, rho: f64) -> Result<LevelSchedule, SimplifyError> {
    if !(rho > 0.0 && rho < 1.0) {
        return Err(SimplifyError::BadRho(rho));
    }
    if k == 0 || k >= n {
        return Err(SimplifyError::KOutOfRange {
            k,
            max: n.saturating_sub(1),
        });
    }
    let (mantissa, shift) = dyadic(rho);
    let mantissa = BigUint::from(mantissa);
    let target = BigUint::from(k);

    // rho^r·N = num / den.
    let mut num = BigUint::from(n);
    let mut den = BigUint::from(1u8);
    let mut r = 0;
    let mut levels = vec![n];
    loop {
        let next_num = &num * &mantissa;
        let next_den = &den << shift;
        if next_num < &target * &next_den {
            break;
        }
        num = next_num;
        den = next_den;
        r += 1;
        let last = *levels.last().unwrap();
        if last > k {
            let rounded: BigUint = ((&num << 1u8) + &den) / (&den << 1u8);
            let rounded = usize::try_from(rounded).expect("level bounded by N");
            let kj = rounded.min(last - 1);
            if kj > k {
                levels.push(kj);
            } else {
                levels.push(k);
            }
        }
    }
    if *levels.last().unwrap() != k {
        levels.push(k);
    }
    Ok(LevelSchedule {
        segments: n,
        target: k,
        rho,
        r,
        levels,
    })
}

/// A multiresolution pyramid of nested approximations.
#[derive(Debug, Clone)]
pub struct Pyramid {
    original: Polyline,
    schedule: LevelSchedule,
    levels: Vec<Approximation>,
    resolved: Vec<Vec<usize>>,
    errors: Vec<f64>,
    stats: DpStats,
}

impl Pyramid {
    pub fn original(&self) -> &Polyline {
        &self.original
    }

    pub fn schedule(&self) -> &LevelSchedule {
        &self.schedule
    }

    /// Number of levels above the original curve.
    pub fn depth(&self) -> usize {
        self.levels.len()
    }

    /// Level `j` (1-based) as solved, indexing into level `j − 1`'s
    /// vertices, with the error the DP saw on those vertices.
    pub fn local_level(&self, j: usize) -> Option<&Approximation> {
        j.checked_sub(1).and_then(|i| self.levels.get(i))
    }

    /// Breakpoints of every level above the original, as original indices.
    pub fn resolved(&self) -> &[Vec<usize>] {
        &self.resolved
    }

    /// Error of every level above the original, measured on the original.
    pub fn errors(&self) -> &[f64] {
        &self.errors
    }

    /// Total DP work over all levels.
    pub fn stats(&self) -> DpStats {
        self.stats
    }

    /// The coarsest level, with exactly `K` segments.
    pub fn final_level(&self) -> Approximation {
        self.extract_level(self.depth())
            .expect("pyramid has at least one level")
    }

    /// Level `j` resolved against the original curve; level 0 is the
    /// original itself.
    pub fn extract_level(&self, j: usize) -> Result<Approximation, SimplifyError> {
        if j == 0 {
            return Ok(Approximation::identity(self.original.len()));
        }
        match (self.resolved.get(j - 1), self.errors.get(j - 1)) {
            (Some(bps), Some(&err)) => {
                Ok(Approximation::new(self.original.len(), bps.clone(), err))
            }
            _ => Err(SimplifyError::LevelOutOfRange {
                level: j,
                max: self.depth(),
            }),
        }
    }

    /// Whether each level's vertices are a subset of the level below.
    pub fn is_nested(&self) -> bool {
        let all: Vec<usize> = (0..self.original.len()).collect();
        std::iter::once(&all)
            .chain(self.resolved.iter())
            .collect::<Vec<_>>()
            .windows(2)
            .all(|w| w[1].iter().all(|i| w[0].binary_search(i).is_ok()))
    }

    /// Plain serializable view: schedule, resolved indices and errors.
    pub fn report(&self) -> PyramidReport {
        PyramidReport {
            schedule: self.schedule.clone(),
            levels: self
                .resolved
                .iter()
                .zip(&self.errors)
                .enumerate()
                .map(|(i, (bps, &error))| LevelReport {
                    level: i + 1,
                    segments: bps.len() - 1,
                    indices: bps.clone(),
                    error,
                })
                .collect(),
            dp_states: self.stats.states,
            dp_transitions: self.stats.transitions,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PyramidReport {
    pub schedule: LevelSchedule,
    pub levels: Vec<LevelReport>,
    pub dp_states: u64,
    pub dp_transitions: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LevelReport {
    pub level: usize,
    pub segments: usize,
    pub indices: Vec<usize>,
    pub error: f64,
}

/// Builds the pyramid for `curve` down to `k` segments, running the
/// corridor DP with half-width `beta` between consecutive levels.
///
/// `k` may equal the curve's segment count, in which case the pyramid has a
/// single identity level.
pub fn mr_simplify(
    curve: &Polyline,
    k: usize,
    rho: f64,
    beta: usize,
) -> Result<Pyramid, SimplifyError> {
    check_k(k, curve.len())?;
    if beta == 0 {
        return Err(SimplifyError::BadBeta(beta));
    }
    let n = curve.segment_count();
    let schedule = if k == n {
        if !(rho > 0.0 && rho < 1.0) {
            return Err(SimplifyError::BadRho(rho));
        }
        LevelSchedule {
            segments: n,
            target: k,
            rho,
            r: 0,
            levels: vec![n, n],
        }
    } else {
        level_schedule(n, k, rho)?
    };

    let table = curve.moments();
    let mut stats = DpStats::default();
    let mut points: Vec<Point> = curve.points().to_vec();
    let mut index: Vec<usize> = (0..curve.len()).collect();
    let mut levels = Vec::with_capacity(schedule.levels.len() - 1);
    let mut resolved = Vec::with_capacity(schedule.levels.len() - 1);
    let mut errors = Vec::with_capacity(schedule.levels.len() - 1);

    for &kj in &schedule.levels[1..] {
        let local = rsdp_points(&points, kj, beta, &mut stats);
        index = local.breakpoints().iter().map(|&b| index[b]).collect();
        points = local.breakpoints().iter().map(|&b| points[b]).collect();
        errors.push(breakpoint_error(&table, curve.points(), &index));
        resolved.push(index.clone());
        levels.push(local);
    }

    Ok(Pyramid {
        original: curve.clone(),
        schedule,
        levels,
        resolved,
        errors,
        stats,
    })
}

/// A level's vertices as a polyline, e.g. to feed another engine.
pub fn level_polyline(pyramid: &Pyramid, j: usize) -> Result<Polyline, SimplifyError> {
    let approx = pyramid.extract_level(j)?;
    let pts = pyramid.original.points();
    Ok(Polyline::from_subsequence(
        approx.breakpoints().iter().map(|&i| pts[i]).collect(),
    ))
}

/// Error of a pyramid level recomputed from scratch on the original.
pub fn level_error(pyramid: &Pyramid, j: usize) -> Result<f64, SimplifyError> {
    let approx = pyramid.extract_level(j)?;
    let curve = &pyramid.original;
    Ok(breakpoint_error(
        &MomentTable::new(curve.points()),
        curve.points(),
        approx.breakpoints(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dp::fsdp_simplify;

    fn c5() -> Polyline {
        Polyline::from_xy([(0., 0.), (1., 1.), (2., 0.), (3., 1.), (4., 0.)]).unwrap()
    }

    fn wiggle(n: usize) -> Polyline {
        Polyline::from_xy((0..n).map(|i| {
            let t = i as f64;
            (t, (t * 0.37).sin() * 3.0 + (t * 1.91).cos())
        }))
        .unwrap()
    }

    #[test]
    fn schedule_examples() {
        let s = level_schedule(4096, 10, 0.5).unwrap();
        assert_eq!(
            s.levels(),
            &[4096, 2048, 1024, 512, 256, 128, 64, 32, 16, 10]
        );
        assert_eq!(s.r(), 8);
        let s = level_schedule(8, 3, 0.5).unwrap();
        assert_eq!(s.levels(), &[8, 4, 3]);
        assert_eq!(s.r(), 1);
        let s = level_schedule(8, 7, 0.5).unwrap();
        assert_eq!(s.levels(), &[8, 7]);
        assert_eq!(s.r(), 0);
    }

    #[test]
    fn schedule_skips_redundant_final_step() {
        let s = level_schedule(4096, 16, 0.5).unwrap();
        assert_eq!(s.levels().last(), Some(&16));
        assert_eq!(s.levels().len(), 9);
    }

    #[test]
    fn schedule_repairs_rounding_collisions() {
        // round(0.99^j · 10) stays at 10 for small j.
        let s = level_schedule(10, 9, 0.99).unwrap();
        assert_eq!(s.levels(), &[10, 9]);
        assert_eq!(s.r(), 10);
        let s = level_schedule(100, 3, 0.9).unwrap();
        assert!(s.levels().windows(2).all(|w| w[0] > w[1]));
    }

    #[test]
    fn schedule_errors() {
        assert_eq!(level_schedule(10, 3, 1.5), Err(SimplifyError::BadRho(1.5)));
        assert_eq!(level_schedule(10, 3, 0.0), Err(SimplifyError::BadRho(0.0)));
        assert!(matches!(
            level_schedule(10, 3, f64::NAN),
            Err(SimplifyError::BadRho(_))
        ));
        assert!(matches!(
            level_schedule(10, 10, 0.5),
            Err(SimplifyError::KOutOfRange { .. })
        ));
        assert!(matches!(
            level_schedule(10, 0, 0.5),
            Err(SimplifyError::KOutOfRange { .. })
        ));
    }

    #[test]
    fn dyadic_decomposition() {
        assert_eq!(dyadic(0.5), (1, 1));
        assert_eq!(dyadic(0.875), (7, 3));
        let (m, s) = dyadic(0.1);
        assert_eq!(m as f64 / 2f64.powi(s as i32), 0.1);
    }

    #[test]
    fn mr_identity_budget() {
        let c = wiggle(20);
        let p = mr_simplify(&c, 19, 0.5, 4).unwrap();
        assert_eq!(p.depth(), 1);
        assert_eq!(p.errors(), &[0.0]);
        assert_eq!(p.final_level().segments(), 19);
    }

    #[test]
    fn mr_c5() {
        let p = mr_simplify(&c5(), 2, 0.5, 4).unwrap();
        assert_eq!(p.schedule().levels(), &[4, 2]);
        let last = p.final_level();
        assert_eq!(last.breakpoints(), &[0, 1, 4]);
        assert_eq!(last.error(), 0.8);
        assert_eq!(p.extract_level(1).unwrap(), last);
        assert_eq!(p.extract_level(0).unwrap(), Approximation::identity(5));
        assert_eq!(
            p.extract_level(2),
            Err(SimplifyError::LevelOutOfRange { level: 2, max: 1 })
        );
    }

    #[test]
    fn mr_levels_are_nested_and_bounded_below_by_optimum() {
        let c = wiggle(1025);
        let p = mr_simplify(&c, 16, 0.5, 4).unwrap();
        assert!(p.is_nested());
        assert_eq!(p.final_level().segments(), 16);
        let opt = fsdp_simplify(&c, 16).unwrap();
        assert!(p.final_level().error() >= opt.error());
        for j in 1..=p.depth() {
            assert_eq!(level_error(&p, j).unwrap(), p.errors()[j - 1]);
            let lvl = level_polyline(&p, j).unwrap();
            assert_eq!(lvl.segment_count(), p.schedule().levels()[j]);
        }
    }

    #[test]
    fn local_levels_index_previous_level() {
        let c = wiggle(300);
        let p = mr_simplify(&c, 12, 0.25, 3).unwrap();
        for j in 1..=p.depth() {
            let local = p.local_level(j).unwrap();
            let below = p.extract_level(j - 1).unwrap();
            assert_eq!(local.source_len(), below.breakpoints().len());
            let mapped: Vec<usize> = local
                .breakpoints()
                .iter()
                .map(|&b| below.breakpoints()[b])
                .collect();
            assert_eq!(mapped, p.resolved()[j - 1]);
        }
    }

    #[test]
    fn report_serializes() {
        let p = mr_simplify(&c5(), 2, 0.5, 4).unwrap();
        let v = serde_json::to_value(p.report()).unwrap();
        assert_eq!(v["schedule"]["levels"], serde_json::json!([4, 2]));
        assert_eq!(v["levels"][0]["indices"], serde_json::json!([0, 1, 4]));
        assert_eq!(v["levels"][0]["error"], serde_json::json!(0.8));
    }
}
