use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::EvalError;
use crate::geometry::{Point, Polyline};

/// Amplitude of the first midpoint displacement.
const BASE_AMPLITUDE: f64 = 0.5;

/// Deterministic fractal coastline of `n` vertices.
///
/// Midpoint displacement on a dyadic grid of `2^d + 1` samples over
/// `x ∈ [0, 1]`, anchored at `(0, 0)` and `(1, 0)`. Displacements at depth
/// `ℓ` are uniform in `±0.5·2^(−h·ℓ)`, so small `h` gives rough curves and
/// large `h` smooth ones. When `n − 1` is not a power of two the grid is
/// subsampled evenly down to `n` vertices.
pub fn generate_coastline(seed: u64, n: usize, h: f64) -> Result<Polyline, EvalError> {
    if !(h > 0.0 && h < 1.0) {
        return Err(EvalError::BadRoughness(h));
    }
    if n < 2 {
        return Err(EvalError::TooFewVertices(n));
    }
    let depth = (n - 1).next_power_of_two().trailing_zeros();
    let span = 1usize << depth;
    let mut y = vec![0.0f64; span + 1];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for level in 1..=depth {
        let half = span >> level;
        let scale = BASE_AMPLITUDE * 2f64.powf(-h * level as f64);
        let mut mid = half;
        while mid < span {
            let disp: f64 = rng.gen_range(-1.0..=1.0);
            y[mid] = 0.5 * (y[mid - half] + y[mid + half]) + scale * disp;
            mid += 2 * half;
        }
    }

    let points: Vec<Point> = (0..n)
        .map(|i| {
            let g = (i * span + (n - 1) / 2) / (n - 1);
            Point::new(g as f64 / span as f64, y[g])
        })
        .collect();
    Ok(Polyline::new(points)?)
}

/// Sum of absolute turning angles at the interior vertices, in radians.
pub fn total_turning(curve: &Polyline) -> f64 {
    curve
        .points()
        .windows(3)
        .map(|w| {
            let a = (w[1].y - w[0].y).atan2(w[1].x - w[0].x);
            let b = (w[2].y - w[1].y).atan2(w[2].x - w[1].x);
            let mut d = b - a;
            if d > std::f64::consts::PI {
                d -= std::f64::consts::TAU;
            } else if d < -std::f64::consts::PI {
                d += std::f64::consts::TAU;
            }
            d.abs()
        })
        .sum()
}
