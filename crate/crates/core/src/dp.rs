//! Dynamic-programming engines for the min-ε problem.
//!
//! All engines share one banded solver. Row `k` of the state grid holds the
//! best cost of covering vertices `0..=n` with exactly `k` segments, for the
//! columns `n` inside that row's window. Full search uses the widest feasible
//! windows; the reduced search intersects them with a [`Corridor`] around the
//! diagonal `k = n·K/(N−1)`.
//!
//! The solver sweeps columns left to right. For each column it evaluates the
//! chord errors `e(m, n)` once and reuses them for every row that contains
//! `n`, so full search costs `N²/2` error evaluations plus `K·N²/2` additions.

use std::ops::AddAssign;

use crate::error::{check_k, SimplifyError};
use crate::geometry::{Approximation, MomentTable, Point, Polyline};

const NO_PARENT: u32 = u32::MAX;

/// Work counters filled in by the DP engines.
#[derive(Debug, Default, Clone, Copy, PartialEq, Eq)]
pub struct DpStats {
    /// States `(k, n)` whose cost was computed.
    pub states: u64,
    /// Predecessor candidates examined.
    pub transitions: u64,
    /// Chord error evaluations.
    pub error_evals: u64,
}

impl AddAssign for DpStats {
    fn add_assign(&mut self, rhs: Self) {
        self.states += rhs.states;
        self.transitions += rhs.transitions;
        self.error_evals += rhs.error_evals;
    }
}

/// The admissible band of the reduced search.
///
/// State `(k, n)` is admissible iff `|k − n·K/(N−1)| ≤ beta`. Checked in
/// integer arithmetic as `|k·(N−1) − n·K| ≤ beta·(N−1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Corridor {
    beta: usize,
    vertices: usize,
    segments: usize,
}

impl Corridor {
    pub fn new(beta: usize, vertices: usize, segments: usize) -> Self {
        Corridor {
            beta,
            vertices,
            segments,
        }
    }

    pub fn beta(&self) -> usize {
        self.beta
    }

    pub fn admits(&self, k: usize, n: usize) -> bool {
        if (k, n) == (0, 0) || (k, n) == (self.segments, self.vertices - 1) {
            return true;
        }
        let span = (self.vertices - 1) as i128;
        let lhs = (k as i128 * span - n as i128 * self.segments as i128).abs();
        lhs <= self.beta as i128 * span
    }

    /// Columns of row `k` that are both admissible and able to reach
    /// `(K, N−1)` from `(0, 0)`.
    fn window(&self, k: usize) -> (usize, usize) {
        let (flo, fhi) = full_window(k, self.vertices, self.segments);
        let span = (self.vertices - 1) as u128;
        let segs = self.segments as u128;
        let lo = if k <= self.beta {
            0
        } else {
            ((k - self.beta) as u128 * span).div_ceil(segs) as usize
        };
        let hi = ((k + self.beta) as u128 * span / segs) as usize;
        (lo.max(flo), hi.min(fhi))
    }
}

fn full_window(k: usize, vertices: usize, segments: usize) -> (usize, usize) {
    if k == 0 {
        return (0, 0);
    }
    if k == segments {
        return (vertices - 1, vertices - 1);
    }
    (k, vertices - 1 - (segments - k))
}

/// Banded DP table: per row, a contiguous window of columns with the
/// accumulated cost and the predecessor vertex of each state.
#[derive(Debug, Clone)]
pub struct DpTable {
    rows: Vec<Row>,
}

#[derive(Debug, Clone)]
struct Row {
    lo: usize,
    cost: Vec<f64>,
    parent: Vec<u32>,
}

impl Row {
    fn hi(&self) -> usize {
        self.lo + self.cost.len() - 1
    }
}

impl DpTable {
    /// Number of rows, `K + 1`.
    pub fn rows(&self) -> usize {
        self.rows.len()
    }

    /// Column window `(lo, hi)` of row `k`.
    pub fn window(&self, k: usize) -> (usize, usize) {
        let r = &self.rows[k];
        (r.lo, r.hi())
    }

    /// Cost of state `(k, n)`, `None` outside the band or when unreachable.
    pub fn cost(&self, k: usize, n: usize) -> Option<f64> {
        let r = self.rows.get(k)?;
        if n < r.lo || n > r.hi() {
            return None;
        }
        let c = r.cost[n - r.lo];
        c.is_finite().then_some(c)
    }

    pub fn parent(&self, k: usize, n: usize) -> Option<usize> {
        let r = self.rows.get(k)?;
        if n < r.lo || n > r.hi() {
            return None;
        }
        let p = r.parent[n - r.lo];
        (p != NO_PARENT).then_some(p as usize)
    }

    /// Follows parent links from `(k, n)` back to `(0, 0)`.
    pub fn backtrack(&self, k: usize, n: usize) -> Option<Vec<usize>> {
        let mut path = vec![n];
        let mut cur = n;
        for row in (1..=k).rev() {
            cur = self.parent(row, cur)?;
            path.push(cur);
        }
        (cur == 0).then(|| {
            path.reverse();
            path
        })
    }
}

/// Runs the banded recurrence `cost(k, n) = min_m cost(k−1, m) + e(m, n)`.
///
/// `windows[k]` must be nondecreasing in both bounds, with `windows[0] =
/// (0, 0)`. Ties go to the smallest predecessor.
fn solve_banded(
    points: &[Point],
    table: &MomentTable,
    windows: &[(usize, usize)],
    stats: &mut DpStats,
) -> DpTable {
    debug_assert_eq!(windows[0], (0, 0));
    debug_assert!(windows
        .windows(2)
        .all(|w| w[0].0 <= w[1].0 && w[0].1 <= w[1].1));
    let kmax = windows.len() - 1;
    let mut rows: Vec<Row> = windows
        .iter()
        .map(|&(lo, hi)| Row {
            lo,
            cost: vec![f64::INFINITY; hi + 1 - lo],
            parent: vec![NO_PARENT; hi + 1 - lo],
        })
        .collect();
    rows[0].cost[0] = 0.0;

    let last = windows.iter().map(|w| w.1).max().unwrap_or(0);
    let mut errs: Vec<f64> = Vec::new();
    // Rows k_first..=k_last contain the current column.
    let mut k_first = 1;
    let mut k_last = 0;
    for n in 1..=last {
        while k_first <= kmax && windows[k_first].1 < n {
            k_first += 1;
        }
        while k_last < kmax && windows[k_last + 1].0 <= n {
            k_last += 1;
        }
        if k_first > k_last {
            continue;
        }
        let m_lo = windows[k_first - 1].0;
        let m_hi = windows[k_last - 1].1.min(n - 1);
        if m_lo > m_hi {
            continue;
        }
        errs.clear();
        errs.extend((m_lo..=m_hi).map(|m| table.segment_error_unchecked(points, m, n)));
        stats.error_evals += errs.len() as u64;

        for k in k_first..=k_last {
            let (before, after) = rows.split_at_mut(k);
            let prev = &before[k - 1];
            let row = &mut after[0];
            let hi = prev.hi().min(n - 1);
            let mut best = f64::INFINITY;
            let mut best_m = NO_PARENT;
            if prev.lo <= hi {
                let costs = &prev.cost[..=hi - prev.lo];
                let chord = &errs[prev.lo - m_lo..=hi - m_lo];
                for (off, (&c, &e)) in costs.iter().zip(chord).enumerate() {
                    let total = c + e;
                    if total < best {
                        best = total;
                        best_m = (prev.lo + off) as u32;
                    }
                }
                stats.transitions += (hi + 1 - prev.lo) as u64;
            }
            stats.states += 1;
            row.cost[n - row.lo] = best;
            row.parent[n - row.lo] = best_m;
        }
    }
    DpTable { rows }
}

fn extract(table: &DpTable, vertices: usize, k: usize) -> Approximation {
    let error = table
        .cost(k, vertices - 1)
        .expect("terminal state is always reachable");
    let bps = table
        .backtrack(k, vertices - 1)
        .expect("parent chain reaches the origin");
    Approximation::new(vertices, bps, error)
}

pub(crate) fn fsdp_points(points: &[Point], k: usize, stats: &mut DpStats) -> Approximation {
    let n = points.len();
    let windows: Vec<_> = (0..=k).map(|row| full_window(row, n, k)).collect();
    let table = MomentTable::new(points);
    let dp = solve_banded(points, &table, &windows, stats);
    extract(&dp, n, k)
}

pub(crate) fn rsdp_points(
    points: &[Point],
    k: usize,
    beta: usize,
    stats: &mut DpStats,
) -> Approximation {
    let n = points.len();
    let corridor = Corridor::new(beta, n, k);
    let windows: Vec<_> = (0..=k).map(|row| corridor.window(row)).collect();
    let table = MomentTable::new(points);
    let dp = solve_banded(points, &table, &windows, stats);
    extract(&dp, n, k)
}

/// Optimal min-ε approximation with exactly `k` segments (full search).
pub fn fsdp_simplify(curve: &Polyline, k: usize) -> Result<Approximation, SimplifyError> {
    fsdp_simplify_with_stats(curve, k).map(|(a, _)| a)
}

pub fn fsdp_simplify_with_stats(
    curve: &Polyline,
    k: usize,
) -> Result<(Approximation, DpStats), SimplifyError> {
    check_k(k, curve.len())?;
    let mut stats = DpStats::default();
    let approx = fsdp_points(curve.points(), k, &mut stats);
    Ok((approx, stats))
}

/// Optimal approximations for every segment count `1..=k_max` from a single
/// full-search pass.
///
/// Entry `k − 1` is identical, breakpoints and error, to
/// `fsdp_simplify(curve, k)`: the wider rows only add states that cannot
/// precede any state on an optimal path to the last vertex.
pub fn fsdp_profile(curve: &Polyline, k_max: usize) -> Result<Vec<Approximation>, SimplifyError> {
    check_k(k_max, curve.len())?;
    let n = curve.len();
    let points = curve.points();
    let windows: Vec<_> = (0..=k_max)
        .map(|row| if row == 0 { (0, 0) } else { (row, n - 1) })
        .collect();
    let table = curve.moments();
    let dp = solve_banded(points, &table, &windows, &mut DpStats::default());
    Ok((1..=k_max).map(|k| extract(&dp, n, k)).collect())
}

/// Reduced-search DP restricted to a corridor of half-width `beta` around the
/// diagonal of the state grid. Identical to [`fsdp_simplify`] when
/// `beta >= k`.
pub fn rsdp_simplify(
    curve: &Polyline,
    k: usize,
    beta: usize,
) -> Result<Approximation, SimplifyError> {
    rsdp_simplify_with_stats(curve, k, beta).map(|(a, _)| a)
}

pub fn rsdp_simplify_with_stats(
    curve: &Polyline,
    k: usize,
    beta: usize,
) -> Result<(Approximation, DpStats), SimplifyError> {
    check_k(k, curve.len())?;
    if beta == 0 {
        return Err(SimplifyError::BadBeta(beta));
    }
    let mut stats = DpStats::default();
    let approx = rsdp_points(curve.points(), k, beta, &mut stats);
    Ok((approx, stats))
}

/// Largest instance [`brute_force_optimum`] accepts.
pub const BRUTE_FORCE_MAX_N: usize = 24;
pub const BRUTE_FORCE_MAX_K: usize = 8;

/// Exhaustive search over every choice of `k − 1` interior breakpoints.
///
/// Returns the lexicographically smallest breakpoint sequence among those
/// with minimal error. Only meant as a test oracle.
pub fn brute_force_optimum(curve: &Polyline, k: usize) -> Result<Approximation, SimplifyError> {
    let n = curve.len();
    if n > BRUTE_FORCE_MAX_N || k > BRUTE_FORCE_MAX_K {
        return Err(SimplifyError::InstanceTooLarge { n, k });
    }
    check_k(k, n)?;
    let table = curve.moments();
    let points = curve.points();

    let mut current = Vec::with_capacity(k + 1);
    current.push(0);
    let mut best: Option<(f64, Vec<usize>)> = None;
    enumerate(&mut current, k - 1, n, &mut |bps| {
        let mut full = bps.to_vec();
        full.push(n - 1);
        let err: f64 = full
            .windows(2)
            .map(|w| table.segment_error(points, w[0], w[1]))
            .sum();
        if best.as_ref().is_none_or(|(b, _)| err < *b) {
            best = Some((err, full));
        }
    });
    let (error, bps) = best.expect("at least one breakpoint subset exists");
    Ok(Approximation::new(n, bps, error))
}

// Visits, in lexicographic order, every way of extending `prefix` by
// `remaining` increasing interior indices below `n - 1`.
fn enumerate(
    prefix: &mut Vec<usize>,
    remaining: usize,
    n: usize,
    visit: &mut impl FnMut(&[usize]),
) {
    if remaining == 0 {
        visit(prefix);
        return;
    }
    let start = prefix.last().unwrap() + 1;
    for idx in start..=(n - 1 - remaining) {
        prefix.push(idx);
        enumerate(prefix, remaining - 1, n, visit);
        prefix.pop();
    }
}
