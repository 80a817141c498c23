//! Points, polylines and the L2 error metric shared by every engine.
//!
//! The error of approximating the vertices strictly between `i` and `j` by
//! the chord `i -> j` is the sum of squared perpendicular distances to the
//! *infinite* line through the two endpoints. [`MomentTable`] keeps prefix
//! sums of the first and second coordinate moments so that this error can be
//! evaluated in constant time for any `(i, j)` pair.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeometryError {
    #[error("a polyline needs at least 2 distinct points, got {0}")]
    TooFewPoints(usize),
    #[error("point {index} has a non-finite coordinate")]
    NonFinite { index: usize },
    #[error("approximation vertex {index} ({x}, {y}) is not a vertex of the original curve")]
    VertexNotInOriginal { index: usize, x: f64, y: f64 },
    #[error("approximation endpoints do not coincide with the original curve endpoints")]
    EndpointMismatch,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    pub fn distance_squared(&self, other: &Point) -> f64 {
        let dx = self.x - other.x;
        let dy = self.y - other.y;
        dx * dx + dy * dy
    }
}

impl From<(f64, f64)> for Point {
    fn from((x, y): (f64, f64)) -> Self {
        Point { x, y }
    }
}

/// An open polyline of at least two points with no consecutive duplicates.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct Polyline {
    points: Vec<Point>,
}

impl Polyline {
    /// Validates and normalizes raw points.
    ///
    /// Consecutive duplicates are dropped; non-finite coordinates are
    /// rejected. Fails if fewer than two distinct points remain.
    pub fn new(points: Vec<Point>) -> Result<Self, GeometryError> {
        if let Some(index) = points.iter().position(|p| !p.is_finite()) {
            return Err(GeometryError::NonFinite { index });
        }
        let mut points = points;
        points.dedup();
        if points.len() < 2 {
            return Err(GeometryError::TooFewPoints(points.len()));
        }
        Ok(Polyline { points })
    }

    pub fn from_xy<I>(coords: I) -> Result<Self, GeometryError>
    where
        I: IntoIterator<Item = (f64, f64)>,
    {
        Self::new(coords.into_iter().map(Point::from).collect())
    }

    /// Builds a polyline from vertices already known to be finite, skipping
    /// the deduplication pass. Used for pyramid levels, whose vertices are a
    /// subsequence of a validated curve.
    pub(crate) fn from_subsequence(points: Vec<Point>) -> Self {
        debug_assert!(points.len() >= 2);
        Polyline { points }
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    /// Number of vertices.
    pub fn len(&self) -> usize {
        self.points.len()
    }

    /// Always false; kept for API symmetry with `len`.
    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn segment_count(&self) -> usize {
        self.points.len() - 1
    }

    pub fn moments(&self) -> MomentTable {
        MomentTable::new(&self.points)
    }
}

/// Prefix sums of `x`, `y`, `x²`, `y²` and `x·y`.
///
/// Entry `k` of every sequence holds the sum over points `0..k`, so entry 0
/// is zero and the table has `N + 1` entries. Coordinates are taken relative
/// to [`MomentTable::origin`] (the first point) to limit cancellation in the
/// second moments; the error metric is translation invariant so this does
/// not change any result.
#[derive(Debug, Clone)]
pub struct MomentTable {
    origin: Point,
    sx: Vec<f64>,
    sy: Vec<f64>,
    sxx: Vec<f64>,
    syy: Vec<f64>,
    sxy: Vec<f64>,
}

impl MomentTable {
    pub fn new(points: &[Point]) -> Self {
        let origin = points.first().copied().unwrap_or(Point::new(0.0, 0.0));
        let n = points.len();
        let mut table = MomentTable {
            origin,
            sx: Vec::with_capacity(n + 1),
            sy: Vec::with_capacity(n + 1),
            sxx: Vec::with_capacity(n + 1),
            syy: Vec::with_capacity(n + 1),
            sxy: Vec::with_capacity(n + 1),
        };
        let (mut sx, mut sy, mut sxx, mut syy, mut sxy) = (0.0, 0.0, 0.0, 0.0, 0.0);
        table.push(sx, sy, sxx, syy, sxy);
        for p in points {
            let x = p.x - origin.x;
            let y = p.y - origin.y;
            sx += x;
            sy += y;
            sxx += x * x;
            syy += y * y;
            sxy += x * y;
            table.push(sx, sy, sxx, syy, sxy);
        }
        table
    }

    fn push(&mut self, sx: f64, sy: f64, sxx: f64, syy: f64, sxy: f64) {
        self.sx.push(sx);
        self.sy.push(sy);
        self.sxx.push(sxx);
        self.syy.push(syy);
        self.sxy.push(sxy);
    }

    pub fn origin(&self) -> Point {
        self.origin
    }

    /// Number of prefix entries, `N + 1`.
    pub fn len(&self) -> usize {
        self.sx.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sx.is_empty()
    }

    pub fn x_prefix(&self) -> &[f64] {
        &self.sx
    }

    pub fn y_prefix(&self) -> &[f64] {
        &self.sy
    }

    pub fn xx_prefix(&self) -> &[f64] {
        &self.sxx
    }

    pub fn yy_prefix(&self) -> &[f64] {
        &self.syy
    }

    pub fn xy_prefix(&self) -> &[f64] {
        &self.sxy
    }

    /// L2 error of replacing the vertices strictly between `i` and `j` by the
    /// line through `points[i]` and `points[j]`.
    ///
    /// `points` must be the slice this table was built from. When the two
    /// endpoints coincide the squared distance to `points[i]` is used
    /// instead. Panics if `i >= j` or `j` is out of range.
    #[inline]
    pub fn segment_error(&self, points: &[Point], i: usize, j: usize) -> f64 {
        assert!(i < j && j < points.len(), "segment ({i}, {j}) out of range");
        self.segment_error_unchecked(points, i, j)
    }

    #[inline(always)]
    pub(crate) fn segment_error_unchecked(&self, points: &[Point], i: usize, j: usize) -> f64 {
        debug_assert!(i < j && j < points.len());
        if j == i + 1 {
            return 0.0;
        }
        let c = (j - i - 1) as f64;
        let a = i + 1;
        let sx = self.sx[j] - self.sx[a];
        let sy = self.sy[j] - self.sy[a];
        let sxx = self.sxx[j] - self.sxx[a];
        let syy = self.syy[j] - self.syy[a];
        let sxy = self.sxy[j] - self.sxy[a];

        let pi = points[i];
        let pj = points[j];
        let xi = pi.x - self.origin.x;
        let yi = pi.y - self.origin.y;

        // Second moments of the interior points relative to points[i].
        let suu = sxx - 2.0 * xi * sx + c * xi * xi;
        let svv = syy - 2.0 * yi * sy + c * yi * yi;
        let suv = sxy - xi * sy - yi * sx + c * xi * yi;

        let dx = pj.x - pi.x;
        let dy = pj.y - pi.y;
        let len2 = dx * dx + dy * dy;
        let err = if len2 == 0.0 {
            suu + svv
        } else {
            (dx * dx * svv - 2.0 * dx * dy * suv + dy * dy * suu) / len2
        };
        err.max(0.0)
    }
}

/// Squared distance from `p` to the infinite line through `a` and `b`, or to
/// `a` when the two coincide.
#[inline]
pub fn line_distance_squared(a: Point, b: Point, p: Point) -> f64 {
    let dx = b.x - a.x;
    let dy = b.y - a.y;
    let len2 = dx * dx + dy * dy;
    if len2 == 0.0 {
        return p.distance_squared(&a);
    }
    let cross = dx * (p.y - a.y) - dy * (p.x - a.x);
    cross * cross / len2
}

/// A min-ε solution: strictly increasing breakpoints from `0` to `N - 1`
/// into a source polyline of `N` vertices, plus the L2 error it achieves.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Approximation {
    source_len: usize,
    breakpoints: Vec<usize>,
    error: f64,
}

impl Approximation {
    /// Panics if the breakpoints violate the invariants; engines only build
    /// approximations from sequences they constructed.
    pub(crate) fn new(source_len: usize, breakpoints: Vec<usize>, error: f64) -> Self {
        assert!(source_len >= 2);
        assert!(breakpoints.len() >= 2);
        assert_eq!(breakpoints[0], 0);
        assert_eq!(*breakpoints.last().unwrap(), source_len - 1);
        assert!(breakpoints.windows(2).all(|w| w[0] < w[1]));
        assert!(error >= 0.0);
        Approximation {
            source_len,
            breakpoints,
            error,
        }
    }

    /// The approximation that keeps every vertex.
    pub fn identity(source_len: usize) -> Self {
        Self::new(source_len, (0..source_len).collect(), 0.0)
    }

    pub fn source_len(&self) -> usize {
        self.source_len
    }

    pub fn breakpoints(&self) -> &[usize] {
        &self.breakpoints
    }

    pub fn into_breakpoints(self) -> Vec<usize> {
        self.breakpoints
    }

    /// Number of segments `K`.
    pub fn segments(&self) -> usize {
        self.breakpoints.len() - 1
    }

    pub fn error(&self) -> f64 {
        self.error
    }

    pub fn points<'a>(&'a self, curve: &'a [Point]) -> impl Iterator<Item = Point> + 'a {
        self.breakpoints.iter().map(move |&i| curve[i])
    }
}

/// Sum of the per-segment errors of a breakpoint sequence.
pub fn breakpoint_error(table: &MomentTable, points: &[Point], breakpoints: &[usize]) -> f64 {
    breakpoints
        .windows(2)
        .map(|w| table.segment_error(points, w[0], w[1]))
        .sum()
}

/// Error of an approximation given by its vertices, measured on `original`.
///
/// Every approximation vertex must be a vertex of the original, in order,
/// and the endpoints must coincide. Vertices are matched greedily front to
/// back, so a curve that revisits a point resolves to the earliest visit
/// after the previous match.
pub fn curve_error(original: &Polyline, approx_points: &[Point]) -> Result<f64, GeometryError> {
    let indices = resolve_indices(original, approx_points)?;
    Ok(breakpoint_error(
        &original.moments(),
        original.points(),
        &indices,
    ))
}

/// Maps approximation vertices back to indices of `original`.
pub fn resolve_indices(
    original: &Polyline,
    approx_points: &[Point],
) -> Result<Vec<usize>, GeometryError> {
    let pts = original.points();
    let (Some(first), Some(last)) = (approx_points.first(), approx_points.last()) else {
        return Err(GeometryError::EndpointMismatch);
    };
    if approx_points.len() < 2 || *first != pts[0] || *last != pts[pts.len() - 1] {
        return Err(GeometryError::EndpointMismatch);
    }
    let mut indices = Vec::with_capacity(approx_points.len());
    indices.push(0);
    let mut cursor = 1;
    let inner = &approx_points[1..approx_points.len() - 1];
    for (k, p) in inner.iter().enumerate() {
        // Leave the final vertex for the closing endpoint.
        match pts[cursor..pts.len() - 1].iter().position(|q| q == p) {
            Some(off) => {
                indices.push(cursor + off);
                cursor += off + 1;
            }
            None => {
                return Err(GeometryError::VertexNotInOriginal {
                    index: k + 1,
                    x: p.x,
                    y: p.y,
                })
            }
        }
    }
    indices.push(pts.len() - 1);
    Ok(indices)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c5() -> Polyline {
        Polyline::from_xy([(0., 0.), (1., 1.), (2., 0.), (3., 1.), (4., 0.)]).unwrap()
    }

    // Independent reference: perpendicular distance by explicit projection.
    fn direct_error(points: &[Point], i: usize, j: usize) -> f64 {
        let (a, b) = (points[i], points[j]);
        let (dx, dy) = (b.x - a.x, b.y - a.y);
        let len = (dx * dx + dy * dy).sqrt();
        points[i + 1..j]
            .iter()
            .map(|p| {
                if len == 0.0 {
                    (p.x - a.x).powi(2) + (p.y - a.y).powi(2)
                } else {
                    let (nx, ny) = (-dy / len, dx / len);
                    let d = (p.x - a.x) * nx + (p.y - a.y) * ny;
                    d * d
                }
            })
            .sum()
    }

    #[test]
    fn two_point_prefixes() {
        let line = Polyline::from_xy([(0., 0.), (1., 1.)]).unwrap();
        let m = line.moments();
        assert_eq!(m.x_prefix(), &[0., 0., 1.]);
        assert_eq!(m.xx_prefix(), &[0., 0., 1.]);
    }

    #[test]
    fn constant_x_prefix_is_linear() {
        // The first point sits at the table origin, the rest at x = c.
        let c = 2.5;
        let mut pts = vec![Point::new(0.0, -1.0)];
        pts.extend((0..6).map(|k| Point::new(c, k as f64)));
        let m = MomentTable::new(&pts);
        for k in 1..m.len() {
            assert_eq!(m.x_prefix()[k], (k - 1) as f64 * c);
        }
    }

    #[test]
    fn c5_xy_prefix() {
        let m = c5().moments();
        assert_eq!(m.xy_prefix(), &[0., 0., 1., 1., 4., 4.]);
    }

    #[test]
    fn prefix_recurrence_and_monotone_squares() {
        let c = c5();
        let m = c.moments();
        for k in 1..m.len() {
            let p = c.points()[k - 1];
            assert_eq!(m.x_prefix()[k], m.x_prefix()[k - 1] + p.x);
            assert!(m.xx_prefix()[k] >= m.xx_prefix()[k - 1]);
            assert!(m.yy_prefix()[k] >= m.yy_prefix()[k - 1]);
        }
    }

    #[test]
    fn single_interior_point() {
        let c = Polyline::from_xy([(0., 0.), (1., 1.), (2., 0.)]).unwrap();
        assert_eq!(c.moments().segment_error(c.points(), 0, 2), 1.0);
    }

    #[test]
    fn adjacent_vertices_have_zero_error() {
        let c = c5();
        let m = c.moments();
        for i in 0..4 {
            assert_eq!(m.segment_error(c.points(), i, i + 1), 0.0);
        }
    }

    #[test]
    fn c5_segment_one_to_four() {
        let c = c5();
        assert!((direct_error(c.points(), 1, 4) - 0.8).abs() < 1e-12);
        assert_eq!(c.moments().segment_error(c.points(), 1, 4), 0.8);
    }

    #[test]
    fn coincident_endpoints_fall_back_to_point_distance() {
        let pts = [
            Point::new(0., 0.),
            Point::new(1., 0.),
            Point::new(1., 1.),
            Point::new(0., 0.),
        ];
        let m = MomentTable::new(&pts);
        assert_eq!(m.segment_error(&pts, 0, 3), 1.0 + 2.0);
    }

    #[test]
    #[should_panic]
    fn reversed_segment_panics() {
        let c = c5();
        c.moments().segment_error(c.points(), 3, 1);
    }

    #[test]
    fn ingestion_drops_consecutive_duplicates() {
        let c = Polyline::from_xy([(0., 0.), (0., 0.), (1., 0.), (1., 0.), (0., 0.)]).unwrap();
        assert_eq!(c.len(), 3);
        assert_eq!(
            Polyline::from_xy([(1., 1.), (1., 1.)]),
            Err(GeometryError::TooFewPoints(1))
        );
        assert_eq!(
            Polyline::from_xy([(0., 0.), (f64::NAN, 1.)]),
            Err(GeometryError::NonFinite { index: 1 })
        );
    }

    #[test]
    fn curve_error_examples() {
        let c = c5();
        assert_eq!(curve_error(&c, c.points()).unwrap(), 0.0);
        let p = c.points();
        assert_eq!(curve_error(&c, &[p[0], p[2], p[4]]).unwrap(), 2.0);
        assert_eq!(curve_error(&c, &[p[0], p[1], p[4]]).unwrap(), 0.8);
    }

    #[test]
    fn curve_error_rejects_foreign_vertices() {
        let c = c5();
        let p = c.points();
        let err = curve_error(&c, &[p[0], Point::new(2.0, 0.5), p[4]]).unwrap_err();
        assert!(matches!(
            err,
            GeometryError::VertexNotInOriginal { index: 1, .. }
        ));
        // Out of order is also not a subsequence.
        let err = curve_error(&c, &[p[0], p[3], p[1], p[4]]).unwrap_err();
        assert!(matches!(
            err,
            GeometryError::VertexNotInOriginal { index: 2, .. }
        ));
        assert_eq!(
            curve_error(&c, &[p[1], p[4]]),
            Err(GeometryError::EndpointMismatch)
        );
    }

    #[test]
    fn collinear_points_have_zero_error() {
        let c = Polyline::from_xy((0..12).map(|k| (k as f64, 2.0 * k as f64 - 3.0))).unwrap();
        let m = c.moments();
        for i in 0..c.len() {
            for j in i + 1..c.len() {
                assert_eq!(m.segment_error(c.points(), i, j), 0.0);
            }
        }
    }

    fn arb_points(max: usize) -> impl Strategy<Value = Vec<Point>> {
        prop::collection::vec((-10.0..10.0f64, -10.0..10.0f64), 2..max)
            .prop_map(|v| v.into_iter().map(Point::from).collect())
    }

    proptest! {
        #[test]
        fn moments_match_direct_sum(pts in arb_points(60), a in 0usize..60, b in 0usize..60) {
            let n = pts.len();
            let (i, j) = (a % n, b % n);
            prop_assume!(i < j);
            let m = MomentTable::new(&pts);
            let fast = m.segment_error(&pts, i, j);
            let slow = direct_error(&pts, i, j);
            prop_assert!(fast >= 0.0);
            prop_assert!((fast - slow).abs() <= 1e-9 * slow.max(1.0), "{fast} vs {slow}");
        }

        #[test]
        fn rigid_motion_invariance(
            pts in arb_points(40),
            angle in 0.0..std::f64::consts::TAU,
            tx in -100.0..100.0f64,
            ty in -100.0..100.0f64,
        ) {
            let (s, c) = angle.sin_cos();
            let moved: Vec<Point> = pts
                .iter()
                .map(|p| Point::new(c * p.x - s * p.y + tx, s * p.x + c * p.y + ty))
                .collect();
            let m0 = MomentTable::new(&pts);
            let m1 = MomentTable::new(&moved);
            let n = pts.len();
            for j in 1..n {
                let e0 = m0.segment_error(&pts, 0, j);
                let e1 = m1.segment_error(&moved, 0, j);
                prop_assert!((e0 - e1).abs() <= 1e-6 * e0.max(1.0));
            }
        }

        #[test]
        fn curve_error_is_sum_of_segment_errors(pts in arb_points(30), mask in prop::collection::vec(any::<bool>(), 30)) {
            let curve = match Polyline::new(pts) { Ok(c) => c, Err(_) => return Ok(()) };
            let n = curve.len();
            let mut bps = vec![0];
            bps.extend((1..n - 1).filter(|&k| mask[k]));
            bps.push(n - 1);
            let approx: Vec<Point> = bps.iter().map(|&k| curve.points()[k]).collect();
            let m = curve.moments();
            let expected: f64 = bps.windows(2).map(|w| m.segment_error(curve.points(), w[0], w[1])).sum();
            // Repeated coordinates can legitimately resolve to an earlier vertex.
            if let Ok(idx) = resolve_indices(&curve, &approx) {
                if idx == bps {
                    prop_assert_eq!(curve_error(&curve, &approx).unwrap(), expected);
                }
            }
        }
    }
}
