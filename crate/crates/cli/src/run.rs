use std::io::Write;
use std::path::{Path, PathBuf};

use mrpoly::dp::fsdp_simplify;
use mrpoly::eval::{
    fit_loglog_slope, generate_coastline, run_fidelity_sweep, run_timing_sweep, time_algorithm,
    write_csv, write_json, Algorithm, BenchRecord, EvalError, FidelityParams, FidelityReport,
    RunOutcome, TimingParams,
};
use mrpoly::io::{read_polyline, write_polyline, PolylineFileError};
use mrpoly::multires::PyramidReport;
use mrpoly::{Polyline, SimplifyError};
use serde::Serialize;
use tempfile::NamedTempFile;

use crate::args::{
    BenchArgs, Command, CurveSource, Format, GenArgs, RunConfig, SimplifyArgs, Sweep,
};
use crate::CliError;

impl From<PolylineFileError> for CliError {
    fn from(e: PolylineFileError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<SimplifyError> for CliError {
    fn from(e: SimplifyError) -> Self {
        CliError::Algorithm(e.to_string())
    }
}

impl From<EvalError> for CliError {
    fn from(e: EvalError) -> Self {
        match e {
            EvalError::Io(_) | EvalError::Csv(_) | EvalError::Json(_) => {
                CliError::Input(e.to_string())
            }
            EvalError::Simplify(s) => s.into(),
            other => CliError::Algorithm(other.to_string()),
        }
    }
}

pub fn run(cfg: &RunConfig) -> Result<(), CliError> {
    match &cfg.command {
        Command::Simplify(a) => simplify(a),
        Command::Fidelity(a) => fidelity(a),
        Command::Bench(b) => bench(b),
        Command::Gen(g) => gen(g),
    }
}

/// Replaces `path` in one rename so readers never see a partial file.
fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    let io_err = |e: std::io::Error| CliError::Input(format!("{}: {e}", path.display()));
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = NamedTempFile::new_in(dir).map_err(io_err)?;
    tmp.write_all(bytes).map_err(io_err)?;
    tmp.persist(path).map_err(|e| io_err(e.error))?;
    Ok(())
}

fn emit(out: Option<&Path>, bytes: &[u8]) -> Result<(), CliError> {
    match out {
        Some(path) => write_atomic(path, bytes),
        None => std::io::stdout()
            .lock()
            .write_all(bytes)
            .map_err(|e| CliError::Input(format!("stdout: {e}"))),
    }
}

fn to_json<T: Serialize>(value: &T) -> Vec<u8> {
    let mut bytes = serde_json::to_vec_pretty(value).expect("plain data serializes");
    bytes.push(b'\n');
    bytes
}

fn load(source: &CurveSource) -> Result<Polyline, CliError> {
    match (&source.input, source.n) {
        (Some(path), _) => {
            read_polyline(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
        }
        (None, Some(n)) => Ok(generate_coastline(source.seed, n, source.h)?),
        (None, None) => Err(CliError::Usage("one of --in or --n is required".into())),
    }
}

#[derive(Serialize)]
struct RunSummary<'a> {
    algorithm: Algorithm,
    #[serde(rename = "N")]
    n: usize,
    #[serde(rename = "K")]
    k: usize,
    rho: Option<f64>,
    beta: Option<usize>,
    indices: &'a [usize],
    error: f64,
    runtime_us: f64,
    dp_states: u64,
    dp_transitions: u64,
}

impl<'a> RunSummary<'a> {
    fn new(a: &SimplifyArgs, curve: &Polyline, rec: &BenchRecord, out: &'a RunOutcome) -> Self {
        RunSummary {
            algorithm: a.algo,
            n: curve.len(),
            k: a.k,
            rho: a.algo.uses_rho().then_some(a.rho),
            beta: a.algo.uses_beta().then_some(a.beta),
            indices: out.approximation.breakpoints(),
            error: out.approximation.error(),
            runtime_us: rec.runtime_us,
            dp_states: out.stats.states,
            dp_transitions: out.stats.transitions,
        }
    }
}

#[derive(Serialize)]
struct SimplifyDoc<'a> {
    #[serde(flatten)]
    run: RunSummary<'a>,
    pyramid: Option<PyramidReport>,
}

fn sidecar_path(out: &Path) -> PathBuf {
    if out.extension().is_some_and(|e| e == "json") {
        out.with_extension("meta.json")
    } else {
        out.with_extension("json")
    }
}

fn simplify(a: &SimplifyArgs) -> Result<(), CliError> {
    let curve = load(&a.source)?;
    let (rec, outcome) = time_algorithm(a.algo, &curve, a.k, a.rho, a.beta, 1)?;
    let doc = SimplifyDoc {
        run: RunSummary::new(a, &curve, &rec, &outcome),
        pyramid: outcome.pyramid.as_ref().map(|p| p.report()),
    };
    match a.format.unwrap_or(Format::Csv) {
        Format::Json => emit(a.out.as_deref(), &to_json(&doc)),
        Format::Csv => {
            let mut csv = String::from("index,x,y\n");
            for &i in outcome.approximation.breakpoints() {
                let p = curve.points()[i];
                csv.push_str(&format!("{i},{},{}\n", p.x, p.y));
            }
            emit(a.out.as_deref(), csv.as_bytes())?;
            if let Some(out) = &a.out {
                write_atomic(&sidecar_path(out), &to_json(&doc))?;
            }
            Ok(())
        }
    }
}

#[derive(Serialize)]
struct FidelityDoc<'a> {
    #[serde(flatten)]
    run: RunSummary<'a>,
    #[serde(flatten)]
    report: FidelityReport,
}

fn fidelity(a: &SimplifyArgs) -> Result<(), CliError> {
    let curve = load(&a.source)?;
    let e_min = fsdp_simplify(&curve, a.k)?.error();
    let (mut rec, outcome) = time_algorithm(a.algo, &curve, a.k, a.rho, a.beta, 1)?;
    let report = FidelityReport::new(e_min, outcome.approximation.error())?;
    rec.fidelity = Some(report.f);
    match a.format.unwrap_or(Format::Json) {
        Format::Json => {
            let doc = FidelityDoc {
                run: RunSummary::new(a, &curve, &rec, &outcome),
                report,
            };
            emit(a.out.as_deref(), &to_json(&doc))
        }
        Format::Csv => {
            let mut buf = Vec::new();
            write_csv(&[rec], &mut buf)?;
            emit(a.out.as_deref(), &buf)
        }
    }
}

fn bench(b: &BenchArgs) -> Result<(), CliError> {
    let mut records = Vec::new();
    match b.sweep {
        Sweep::Timing => {
            let params = TimingParams {
                algorithms: b.algos.clone(),
                rho: b.rho,
                beta: b.beta,
                seed: b.seed,
                roughness: b.h,
            };
            for &k in &b.k.0 {
                records.extend(run_timing_sweep(&b.n.0, k, &params, b.reps)?);
            }
            report_slopes(&records);
        }
        Sweep::Fidelity => {
            let params = FidelityParams {
                algorithms: b.algos.clone(),
                rho: b.rho,
                beta: b.beta,
            };
            for &n in &b.n.0 {
                let corpus = (0..b.curves)
                    .map(|i| generate_coastline(b.seed + i, n, b.h))
                    .collect::<Result<Vec<_>, _>>()?;
                records.extend(run_fidelity_sweep(&corpus, &b.k.0, &params)?);
            }
        }
    }
    let mut buf = Vec::new();
    match b.format {
        Format::Csv => write_csv(&records, &mut buf)?,
        Format::Json => write_json(&records, &mut buf)?,
    }
    emit(b.out.as_deref(), &buf)
}

/// Prints the fitted runtime exponent per algorithm and K to stderr.
fn report_slopes(records: &[BenchRecord]) {
    let mut keys: Vec<(Algorithm, usize)> = records.iter().map(|r| (r.algorithm, r.k)).collect();
    keys.dedup();
    keys.sort();
    keys.dedup();
    for (algo, k) in keys {
        let group: Vec<BenchRecord> = records
            .iter()
            .filter(|r| r.algorithm == algo && r.k == k)
            .cloned()
            .collect();
        if let Ok(slope) = fit_loglog_slope(&group) {
            eprintln!("{algo} K={k}: runtime ~ N^{slope:.3}");
        }
    }
}

fn gen(g: &GenArgs) -> Result<(), CliError> {
    let curve = generate_coastline(g.seed, g.n, g.h)?;
    let bytes = match g.format {
        Format::Csv => {
            let mut buf = Vec::new();
            write_polyline(&curve, &mut buf).expect("writing to memory");
            buf
        }
        Format::Json => to_json(&curve),
    };
    emit(g.out.as_deref(), &bytes)
}
