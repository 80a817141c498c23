use std::io::Write;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::{fidelity, generate_coastline, run_algorithm, Algorithm, EvalError, RunOutcome};
use crate::dp::fsdp_profile;
use crate::geometry::Polyline;

/// One measurement. `rho` and `beta` are absent for engines that ignore
/// them; `fidelity` is absent when no optimum was computed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRecord {
    pub algorithm: Algorithm,
    /// Vertex count of the input curve.
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(rename = "K")]
    pub k: usize,
    pub rho: Option<f64>,
    pub beta: Option<usize>,
    /// Median wall time in microseconds.
    pub runtime_us: f64,
    pub error: f64,
    pub fidelity: Option<f64>,
    pub repetitions: usize,
}

#[derive(Serialize)]
struct CsvRow<'a> {
    algorithm: &'a str,
    #[serde(rename = "N")]
    n: usize,
    #[serde(rename = "K")]
    k: usize,
    rho: Option<f64>,
    beta: Option<usize>,
    runtime_us: f64,
    error: f64,
    fidelity: Option<f64>,
}

/// Writes records as CSV with the header
/// `algorithm,N,K,rho,beta,runtime_us,error,fidelity`; absent values are
/// empty fields.
pub fn write_csv<W: Write>(records: &[BenchRecord], out: W) -> Result<(), EvalError> {
    let mut w = csv::Writer::from_writer(out);
    for r in records {
        w.serialize(CsvRow {
            algorithm: r.algorithm.name(),
            n: r.n,
            k: r.k,
            rho: r.rho,
            beta: r.beta,
            runtime_us: r.runtime_us,
            error: r.error,
            fidelity: r.fidelity,
        })?;
    }
    if records.is_empty() {
        w.write_record([
            "algorithm",
            "N",
            "K",
            "rho",
            "beta",
            "runtime_us",
            "error",
            "fidelity",
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Writes records as a pretty-printed JSON array.
pub fn write_json<W: Write>(records: &[BenchRecord], mut out: W) -> Result<(), EvalError> {
    serde_json::to_writer_pretty(&mut out, records)?;
    writeln!(out)?;
    Ok(())
}

fn record(algorithm: Algorithm, curve: &Polyline, k: usize, rho: f64, beta: usize) -> BenchRecord {
    BenchRecord {
        algorithm,
        n: curve.len(),
        k,
        rho: algorithm.uses_rho().then_some(rho),
        beta: algorithm.uses_beta().then_some(beta),
        runtime_us: 0.0,
        error: 0.0,
        fidelity: None,
        repetitions: 0,
    }
}

fn median(mut xs: Vec<f64>) -> f64 {
    xs.sort_by(f64::total_cmp);
    let m = xs.len() / 2;
    if xs.len() % 2 == 1 {
        xs[m]
    } else {
        0.5 * (xs[m - 1] + xs[m])
    }
}

fn elapsed_us(start: Instant) -> f64 {
    // Keep the record strictly positive even for sub-nanosecond noise.
    (start.elapsed().as_secs_f64() * 1e6).max(1e-3)
}

/// Times `repetitions` runs of one engine on one curve and reports the
/// median. Moment precomputation is part of every run.
pub fn time_algorithm(
    algorithm: Algorithm,
    curve: &Polyline,
    k: usize,
    rho: f64,
    beta: usize,
    repetitions: usize,
) -> Result<(BenchRecord, RunOutcome), EvalError> {
    if repetitions == 0 {
        return Err(EvalError::TooFewRepetitions(0));
    }
    let mut times = Vec::with_capacity(repetitions);
    let mut last = None;
    for _ in 0..repetitions {
        let start = Instant::now();
        let out = run_algorithm(algorithm, curve, k, rho, beta)?;
        times.push(elapsed_us(start));
        last = Some(out);
    }
    let out = last.expect("at least one repetition");
    let rec = BenchRecord {
        runtime_us: median(times),
        error: out.approximation.error(),
        repetitions,
        ..record(algorithm, curve, k, rho, beta)
    };
    Ok((rec, out))
}

#[derive(Debug, Clone, PartialEq)]
pub struct TimingParams {
    pub algorithms: Vec<Algorithm>,
    pub rho: f64,
    pub beta: usize,
    pub seed: u64,
    pub roughness: f64,
}

impl Default for TimingParams {
    fn default() -> Self {
        TimingParams {
            algorithms: Algorithm::ALL.to_vec(),
            rho: 0.5,
            beta: 4,
            seed: 0,
            roughness: 0.5,
        }
    }
}

/// Times every algorithm on one synthetic coastline per size in `ns`
/// (vertex counts). Records are sorted by `(algorithm, N)`.
pub fn run_timing_sweep(
    ns: &[usize],
    k: usize,
    params: &TimingParams,
    repetitions: usize,
) -> Result<Vec<BenchRecord>, EvalError> {
    if repetitions < 5 {
        return Err(EvalError::TooFewRepetitions(repetitions));
    }
    let mut records = Vec::new();
    for &n in ns {
        let curve = generate_coastline(params.seed, n, params.roughness)?;
        for &algo in &params.algorithms {
            let (rec, _) = time_algorithm(algo, &curve, k, params.rho, params.beta, repetitions)?;
            records.push(rec);
        }
    }
    records.sort_by_key(|r| (r.algorithm, r.n));
    Ok(records)
}

#[derive(Debug, Clone, PartialEq)]
pub struct FidelityParams {
    pub algorithms: Vec<Algorithm>,
    pub rho: f64,
    pub beta: usize,
}

impl Default for FidelityParams {
    fn default() -> Self {
        FidelityParams {
            algorithms: Algorithm::ALL.to_vec(),
            rho: 0.5,
            beta: 4,
        }
    }
}

/// Scores every algorithm against the full-search optimum for each curve
/// and each `K`.
///
/// The optimum for all `K` of a curve comes from one full-search pass up to
/// the largest `K`; FSDP records report that pass's runtime and carry
/// fidelity 100. Every other record times a single run. Records are ordered
/// by curve, then `K`, then algorithm.
pub fn run_fidelity_sweep(
    corpus: &[Polyline],
    ks: &[usize],
    params: &FidelityParams,
) -> Result<Vec<BenchRecord>, EvalError> {
    let Some(&k_max) = ks.iter().max() else {
        return Err(EvalError::EmptySweep);
    };
    if corpus.is_empty() {
        return Err(EvalError::EmptySweep);
    }
    let mut records = Vec::new();
    for curve in corpus {
        let start = Instant::now();
        let optimum = fsdp_profile(curve, k_max)?;
        let profile_us = elapsed_us(start);
        for &k in ks {
            let e_min = optimum[k - 1].error();
            for &algo in &params.algorithms {
                let mut rec = if algo == Algorithm::Fsdp {
                    BenchRecord {
                        runtime_us: profile_us,
                        error: e_min,
                        repetitions: 1,
                        ..record(algo, curve, k, params.rho, params.beta)
                    }
                } else {
                    time_algorithm(algo, curve, k, params.rho, params.beta, 1)?.0
                };
                rec.fidelity = Some(fidelity(e_min, rec.error)?);
                records.push(rec);
            }
        }
    }
    Ok(records)
}
