//! Single-step baselines: top-down SPLIT (Douglas–Peucker run to a fixed
//! segment count) and bottom-up MERGE (cheapest-vertex elimination).
//!
//! Both engines return the L2 error of their breakpoints measured on the
//! original curve, so they are directly comparable with the DP engines.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{check_k, SimplifyError};
use crate::geometry::{breakpoint_error, line_distance_squared, Approximation, Point, Polyline};

/// A splittable segment `(start, end)` and its farthest interior vertex.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SplitQueueEntry {
    pub start: usize,
    pub end: usize,
    pub farthest: usize,
    /// Perpendicular distance of `farthest` to the chord's line.
    pub deviation: f64,
}

impl SplitQueueEntry {
    /// `None` when the segment has no interior vertex.
    fn scan(points: &[Point], start: usize, end: usize) -> Option<Self> {
        if end <= start + 1 {
            return None;
        }
        let (a, b) = (points[start], points[end]);
        let mut farthest = start + 1;
        let mut best = f64::NEG_INFINITY;
        for (idx, &p) in points.iter().enumerate().take(end).skip(start + 1) {
            let d = line_distance_squared(a, b, p);
            if d > best {
                best = d;
                farthest = idx;
            }
        }
        Some(SplitQueueEntry {
            start,
            end,
            farthest,
            deviation: best.sqrt(),
        })
    }
}

impl Eq for SplitQueueEntry {}

impl Ord for SplitQueueEntry {
    // Largest deviation first; equal deviations pop the leftmost segment.
    fn cmp(&self, other: &Self) -> Ordering {
        self.deviation
            .total_cmp(&other.deviation)
            .then_with(|| other.start.cmp(&self.start))
    }
}

impl PartialOrd for SplitQueueEntry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Douglas–Peucker driven to exactly `k` segments: the segment whose
/// farthest interior vertex deviates most is split first.
pub fn split_simplify(curve: &Polyline, k: usize) -> Result<Approximation, SimplifyError> {
    check_k(k, curve.len())?;
    let points = curve.points();
    let n = points.len();
    let mut keep = vec![false; n];
    keep[0] = true;
    keep[n - 1] = true;

    let mut queue = BinaryHeap::new();
    queue.extend(SplitQueueEntry::scan(points, 0, n - 1));
    for _ in 1..k {
        // k <= n - 1 guarantees a splittable segment remains.
        let seg = queue.pop().expect("splittable segment available");
        keep[seg.farthest] = true;
        queue.extend(SplitQueueEntry::scan(points, seg.start, seg.farthest));
        queue.extend(SplitQueueEntry::scan(points, seg.farthest, seg.end));
    }

    let bps: Vec<usize> = (0..n).filter(|&i| keep[i]).collect();
    let error = breakpoint_error(&curve.moments(), points, &bps);
    Ok(Approximation::new(n, bps, error))
}

/// Heap entry for a removable vertex of the current chain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MergeHeapEntry {
    pub vertex: usize,
    /// Squared distance of `vertex` to the line through its chain neighbours.
    pub cost: f64,
    /// Matches the vertex's current generation while the entry is live.
    pub generation: u32,
}

impl Eq for MergeHeapEntry {}

impl Ord for MergeHeapEntry {
    // Reversed so `BinaryHeap` pops the cheapest vertex, lowest index first.
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .cost
            .total_cmp(&self.cost)
            .then_with(|| other.vertex.cmp(&self.vertex))
    }
}

impl PartialOrd for MergeHeapEntry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Vertices in the order MERGE eliminates them until `k` segments remain.
pub(crate) fn merge_elimination_order(points: &[Point], k: usize) -> Vec<usize> {
    let n = points.len();
    let mut prev: Vec<usize> = (0..n).map(|i| i.saturating_sub(1)).collect();
    let mut next: Vec<usize> = (0..n).map(|i| (i + 1).min(n - 1)).collect();
    let mut generation = vec![0u32; n];
    let mut alive = vec![true; n];

    let cost = |v: usize, prev: &[usize], next: &[usize]| {
        line_distance_squared(points[prev[v]], points[next[v]], points[v])
    };

    let mut heap: BinaryHeap<MergeHeapEntry> = (1..n - 1)
        .map(|v| MergeHeapEntry {
            vertex: v,
            cost: cost(v, &prev, &next),
            generation: 0,
        })
        .collect();

    let removals = n - 1 - k;
    let mut order = Vec::with_capacity(removals);
    while order.len() < removals {
        let entry = heap.pop().expect("interior vertex available");
        let v = entry.vertex;
        if !alive[v] || entry.generation != generation[v] {
            continue;
        }
        alive[v] = false;
        order.push(v);
        let (p, q) = (prev[v], next[v]);
        next[p] = q;
        prev[q] = p;
        for u in [p, q] {
            if u != 0 && u != n - 1 {
                generation[u] += 1;
                heap.push(MergeHeapEntry {
                    vertex: u,
                    cost: cost(u, &prev, &next),
                    generation: generation[u],
                });
            }
        }
    }
    order
}

/// Iterative elimination of the interior vertex whose removal costs least,
/// until `k` segments remain.
///
/// The cost of removing a vertex is its squared distance to the line through
/// its two neighbours in the current chain. The returned error is measured
/// against the original curve.
pub fn merge_simplify(curve: &Polyline, k: usize) -> Result<Approximation, SimplifyError> {
    check_k(k, curve.len())?;
    let points = curve.points();
    let n = points.len();
    let mut keep = vec![true; n];
    for v in merge_elimination_order(points, k) {
        keep[v] = false;
    }
    let bps: Vec<usize> = (0..n).filter(|&i| keep[i]).collect();
    let error = breakpoint_error(&curve.moments(), points, &bps);
    Ok(Approximation::new(n, bps, error))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c5() -> Polyline {
        Polyline::from_xy([(0., 0.), (1., 1.), (2., 0.), (3., 1.), (4., 0.)]).unwrap()
    }

    fn line(n: usize) -> Polyline {
        Polyline::from_xy((0..n).map(|k| (k as f64, 3.0 - 0.25 * k as f64))).unwrap()
    }

    fn arb_curve() -> impl Strategy<Value = Polyline> {
        prop::collection::vec((-5.0..5.0f64, -5.0..5.0f64), 3..120)
            .prop_filter_map("degenerate", |v| Polyline::from_xy(v).ok())
            .prop_filter("too short", |c| c.len() >= 3)
    }

    #[test]
    fn split_c5() {
        let a = split_simplify(&c5(), 2).unwrap();
        assert_eq!(a.breakpoints(), &[0, 1, 4]);
        assert_eq!(a.error(), 0.8);
        let a = split_simplify(&c5(), 4).unwrap();
        assert_eq!(a.breakpoints(), &[0, 1, 2, 3, 4]);
        assert_eq!(a.error(), 0.0);
    }

    #[test]
    fn split_collinear() {
        for k in 1..10 {
            let a = split_simplify(&line(10), k).unwrap();
            assert_eq!(a.segments(), k);
            assert_eq!(a.error(), 0.0);
        }
    }

    #[test]
    fn merge_c5() {
        let a = merge_simplify(&c5(), 4).unwrap();
        assert_eq!(a.breakpoints(), &[0, 1, 2, 3, 4]);
        // First elimination: costs {1, 1, 1}, lowest index wins.
        assert_eq!(merge_elimination_order(c5().points(), 3), vec![1]);
        assert_eq!(
            merge_simplify(&c5(), 3).unwrap().breakpoints(),
            &[0, 2, 3, 4]
        );
    }

    #[test]
    fn merge_collinear_to_one_segment() {
        let a = merge_simplify(&line(12), 1).unwrap();
        assert_eq!(a.breakpoints(), &[0, 11]);
        assert_eq!(a.error(), 0.0);
    }

    #[test]
    fn heuristics_reject_bad_k() {
        assert!(matches!(
            split_simplify(&c5(), 0),
            Err(SimplifyError::KOutOfRange { .. })
        ));
        assert!(matches!(
            merge_simplify(&c5(), 5),
            Err(SimplifyError::KOutOfRange { .. })
        ));
    }

    // Quadratic reference: rescan every live vertex before each removal.
    fn naive_merge_order(points: &[Point], k: usize) -> Vec<usize> {
        let mut chain: Vec<usize> = (0..points.len()).collect();
        let mut order = Vec::new();
        while chain.len() - 1 > k {
            let mut best = (f64::INFINITY, usize::MAX, 0);
            for pos in 1..chain.len() - 1 {
                let c = line_distance_squared(
                    points[chain[pos - 1]],
                    points[chain[pos + 1]],
                    points[chain[pos]],
                );
                if c < best.0 {
                    best = (c, chain[pos], pos);
                }
            }
            order.push(best.1);
            chain.remove(best.2);
        }
        order
    }

    proptest! {
        #[test]
        fn exact_segment_counts(curve in arb_curve(), k in 1usize..200) {
            let k = 1 + k % (curve.len() - 1);
            for a in [split_simplify(&curve, k).unwrap(), merge_simplify(&curve, k).unwrap()] {
                prop_assert_eq!(a.segments(), k);
                prop_assert_eq!(a.breakpoints()[0], 0);
                prop_assert_eq!(*a.breakpoints().last().unwrap(), curve.len() - 1);
            }
        }

        #[test]
        fn split_and_merge_are_nested(curve in arb_curve(), k in 1usize..200) {
            let k = 1 + k % (curve.len() - 2).max(1);
            prop_assume!(k < curve.len() - 1);
            let contains = |big: &Approximation, small: &Approximation| {
                small.breakpoints().iter().all(|b| big.breakpoints().binary_search(b).is_ok())
            };
            let (s0, s1) = (split_simplify(&curve, k).unwrap(), split_simplify(&curve, k + 1).unwrap());
            prop_assert!(contains(&s1, &s0));
            let (m0, m1) = (merge_simplify(&curve, k).unwrap(), merge_simplify(&curve, k + 1).unwrap());
            prop_assert!(contains(&m1, &m0));
        }

        #[test]
        fn lazy_heap_matches_full_rescan(curve in arb_curve()) {
            prop_assume!(curve.len() <= 200);
            let lazy = merge_elimination_order(curve.points(), 1);
            let naive = naive_merge_order(curve.points(), 1);
            prop_assert_eq!(lazy, naive);
        }
    }
}
