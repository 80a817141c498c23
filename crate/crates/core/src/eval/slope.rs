use super::{BenchRecord, EvalError};

/// Least-squares slope of `ln y` against `ln x`.
///
/// Requires at least four distinct `x` values; all values must be positive.
pub fn loglog_slope(samples: &[(f64, f64)]) -> Result<f64, EvalError> {
    let mut xs: Vec<f64> = samples.iter().map(|s| s.0).collect();
    xs.sort_by(f64::total_cmp);
    xs.dedup();
    if xs.len() < 4 {
        return Err(EvalError::TooFewPoints(xs.len()));
    }
    let logs: Vec<(f64, f64)> = samples.iter().map(|&(x, y)| (x.ln(), y.ln())).collect();
    let m = logs.len() as f64;
    let mx = logs.iter().map(|p| p.0).sum::<f64>() / m;
    let my = logs.iter().map(|p| p.1).sum::<f64>() / m;
    let sxy: f64 = logs.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = logs.iter().map(|p| (p.0 - mx).powi(2)).sum();
    Ok(sxy / sxx)
}

/// Slope of `ln(runtime_us)` against `ln(N)` for one algorithm's records.
pub fn fit_loglog_slope(records: &[BenchRecord]) -> Result<f64, EvalError> {
    let samples: Vec<(f64, f64)> = records.iter().map(|r| (r.n as f64, r.runtime_us)).collect();
    loglog_slope(&samples)
}
