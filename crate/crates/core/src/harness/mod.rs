//! Scenario runner behind the `matwalk` binary.
//!
//! A scenario is a TOML file (see [`config`]) naming an experiment kind, a
//! measure and run sizes. Running it writes `report.csv`, `summary.txt` and,
//! for distributional experiments, `histogram.svg` into
//! `<out>/<scenario name>/`. Every byte depends only on the scenario and the
//! master seed, never on the thread count.

mod bundled;
pub mod cli;
pub mod config;
mod svg;

use std::fs;
use std::path::{Path, PathBuf};

use rand_distr::{Distribution, StandardNormal};

pub use bundled::{bundled, bundled_scenarios, BUNDLED};
pub use config::{parse_config, ConfigError, ExperimentKind, ScenarioConfig};
pub use svg::histogram_svg;

use crate::error::Error;
use crate::export::{csv_writer, fmt_real};
use crate::group::GeneratorMeasure;
use crate::limit::{
    clt_experiment, large_deviation_curve, lil_diagnostic, lyapunov_pair, lyapunov_top, multidim_clt_cartan,
    plug_in_lambda1, variance_estimate, Observable,
};
use crate::linalg::{DualProjectivePoint, ProjectivePoint};
use crate::martingale::{
    azuma_check, baum_katz_sums, brown_triangular_check, default_schedule, DifferenceStream, StreamKind,
    TriangularArray,
};
use crate::rng::{derive_seed, stream_rng, DEFAULT_SEED};
use crate::stationary::{
    cohomological_residual, estimate_dual_stationary, estimate_stationary, log_regularity_estimate, PsiFunction,
    DEFAULT_BURN_IN, DEFAULT_PARTICLES,
};
use crate::stats::{gaussian_cdf, ks_critical_05, Reference};
use config::{MartingaleCheck, RowLaw, StreamName};

pub const SEED_ENV: &str = "MATWALK_SEED";
pub const DEFAULT_OUT_DIR: &str = "matwalk-out";

#[derive(Clone, Debug, Default)]
pub struct RunOptions {
    /// Highest-priority seed (the `--seed` flag).
    pub seed: Option<u64>,
    /// Lowest-priority seed, normally read from `MATWALK_SEED`.
    pub env_seed: Option<String>,
    pub out_dir: Option<PathBuf>,
    pub threads: Option<usize>,
}

impl RunOptions {
    pub fn from_env() -> Self {
        Self { env_seed: std::env::var(SEED_ENV).ok(), ..Self::default() }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum HarnessError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("scenario `{scenario}` (seed {seed}): {source}")]
    Runtime {
        scenario: String,
        seed: u64,
        #[source]
        source: Error,
    },
    #[error("scenario `{scenario}`: cannot write artifacts: {source}")]
    Io {
        scenario: String,
        #[source]
        source: std::io::Error,
    },
}

impl HarnessError {
    /// 2 for configuration problems, 3 for failures while running.
    pub fn exit_code(&self) -> i32 {
        match self {
            HarnessError::Config(_) => 2,
            HarnessError::Runtime { .. } | HarnessError::Io { .. } => 3,
        }
    }
}

#[derive(Clone, Debug)]
pub struct RunOutcome {
    pub dir: PathBuf,
    pub seed: u64,
    pub files: Vec<PathBuf>,
}

/// `--seed`, then the scenario's `master_seed`, then `MATWALK_SEED`, then
/// [`DEFAULT_SEED`].
pub fn resolve_seed(config: &ScenarioConfig, opts: &RunOptions) -> Result<u64, ConfigError> {
    if let Some(s) = opts.seed.or(config.master_seed) {
        return Ok(s);
    }
    match &opts.env_seed {
        Some(text) => config::parse_seed_text(text)
            .map_err(|e| ConfigError { problems: vec![format!("{SEED_ENV}: {e}")] }),
        None => Ok(DEFAULT_SEED),
    }
}

pub fn load_config(path: &Path) -> Result<ScenarioConfig, ConfigError> {
    let text = fs::read_to_string(path)
        .map_err(|e| ConfigError { problems: vec![format!("cannot read {}: {e}", path.display())] })?;
    parse_config(&text)
}

/// Collected output of one experiment before it is written out.
struct Artifacts {
    report: Vec<u8>,
    summary: Vec<(String, String)>,
    svg: Option<String>,
    extra: Vec<(&'static str, Vec<u8>)>,
}

impl Artifacts {
    fn new(statement: &str) -> Self {
        Self { report: Vec::new(), summary: vec![("statement".into(), statement.into())], svg: None, extra: Vec::new() }
    }

    fn note(&mut self, key: &str, value: impl ToString) {
        self.summary.push((key.to_string(), value.to_string()));
    }
}

type Rows = Vec<Vec<String>>;

fn to_csv(header: &[String], rows: Rows) -> Result<Vec<u8>, Error> {
    let io = |e: csv::Error| Error::InvalidParameter(format!("csv: {e}"));
    let mut w = csv_writer(Vec::new());
    w.write_record(header).map_err(io)?;
    for r in rows {
        w.write_record(&r).map_err(io)?;
    }
    w.into_inner().map_err(|e| Error::InvalidParameter(format!("csv: {e}")))
}

fn header(names: &[&str]) -> Vec<String> {
    names.iter().map(|s| s.to_string()).collect()
}

fn opt_real(x: Option<f64>) -> String {
    x.map(fmt_real).unwrap_or_default()
}

fn estimate_text(e: &crate::stats::Estimate) -> String {
    format!("{} +- {}", fmt_real(e.value), fmt_real(e.ci_halfwidth))
}

/// Run a validated scenario and write its artifacts.
pub fn run_scenario(config: &ScenarioConfig, opts: &RunOptions) -> Result<RunOutcome, HarnessError> {
    let seed = resolve_seed(config, opts)?;
    let runtime = |source: Error| HarnessError::Runtime { scenario: config.name.clone(), seed, source };
    let artifacts = match opts.threads {
        Some(k) => rayon::ThreadPoolBuilder::new()
            .num_threads(k)
            .build()
            .map_err(|e| runtime(Error::InvalidParameter(format!("thread pool: {e}"))))?
            .install(|| run_kind(config, seed)),
        None => run_kind(config, seed),
    }
    .map_err(runtime)?;

    let base = opts
        .out_dir
        .clone()
        .or_else(|| config.output_dir.as_ref().map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from(DEFAULT_OUT_DIR));
    let dir = base.join(&config.name);
    write_artifacts(config, seed, &dir, artifacts)
        .map_err(|source| HarnessError::Io { scenario: config.name.clone(), source })
        .map(|files| RunOutcome { dir, seed, files })
}

fn write_artifacts(config: &ScenarioConfig, seed: u64, dir: &Path, a: Artifacts) -> std::io::Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let mut files = Vec::new();
    let mut put = |name: &str, bytes: &[u8]| -> std::io::Result<()> {
        let path = dir.join(name);
        fs::write(&path, bytes)?;
        files.push(path);
        Ok(())
    };
    put("report.csv", &a.report)?;
    let mut summary = format!("scenario: {}\nkind: {}\nseed: {seed}\n", config.name, config.kind.as_str());
    if !config.description.is_empty() {
        summary.push_str(&format!("description: {}\n", config.description));
    }
    let asserted = &config.assertions;
    summary.push_str(&format!(
        "assertions: strong_irreducible={} (asserted), proximal={}, unimodular={}\n",
        asserted.strong_irreducible, asserted.proximal, asserted.unimodular
    ));
    for (k, v) in &a.summary {
        summary.push_str(&format!("{k}: {v}\n"));
    }
    put("summary.txt", summary.as_bytes())?;
    if let Some(svg) = &a.svg {
        put("histogram.svg", svg.as_bytes())?;
    }
    for (name, bytes) in &a.extra {
        put(name, bytes)?;
    }
    Ok(files)
}

fn measure(config: &ScenarioConfig) -> Result<&GeneratorMeasure, Error> {
    config.measure.as_ref().ok_or_else(|| Error::InvalidMeasure("scenario has no measure".into()))
}

fn start_point(config: &ScenarioConfig, d: usize) -> Result<ProjectivePoint, Error> {
    match &config.start {
        Some(x) => ProjectivePoint::new(x),
        None => Ok(ProjectivePoint::basis(d, 0)),
    }
}

/// Gaussian directions from a dedicated stream.
pub fn random_unit_vectors(d: usize, count: usize, seed: u64, label: &str) -> Vec<Vec<f64>> {
    let mut rng = stream_rng(derive_seed(seed, label), 0);
    (0..count)
        .map(|_| loop {
            let v: Vec<f64> = (0..d).map(|_| StandardNormal.sample(&mut rng)).collect();
            let n = v.iter().map(|c| c * c).sum::<f64>().sqrt();
            if n > 1e-8 {
                break v.iter().map(|c| c / n).collect();
            }
        })
        .collect()
}

/// Supplied `lambda1`, or a plug-in estimate from an independent run.
fn centering(config: &ScenarioConfig, mu: &GeneratorMeasure, seed: u64, a: &mut Artifacts) -> Result<f64, Error> {
    if let Some(l) = config.lambda1 {
        a.note("lambda1", format!("{} (supplied)", fmt_real(l)));
        return Ok(l);
    }
    let n = config.n.unwrap_or(1000).max(1000);
    let e = plug_in_lambda1(mu, n, config.replicas.unwrap_or(200), seed)?;
    a.note("lambda1", format!("{} (plug-in estimate, independent streams)", estimate_text(&e)));
    Ok(e.value)
}

fn run_kind(config: &ScenarioConfig, seed: u64) -> Result<Artifacts, Error> {
    match config.kind {
        ExperimentKind::Lyapunov => run_lyapunov(config, seed),
        ExperimentKind::Clt => run_clt(config, seed),
        ExperimentKind::CltCartan => run_cartan(config, seed),
        ExperimentKind::Stationary => run_stationary(config, seed),
        ExperimentKind::Cohomological => run_cohomological(config, seed),
        ExperimentKind::LargeDeviation => run_large_deviation(config, seed),
        ExperimentKind::Lil => run_lil(config, seed),
        ExperimentKind::MartingaleLab => run_martingale(config, seed),
    }
}

fn run_lyapunov(config: &ScenarioConfig, seed: u64) -> Result<Artifacts, Error> {
    let mu = measure(config)?;
    let mut a = Artifacts::new("lambda1 = lim (1/n) log |b_n ... b_1| almost surely; lambda2 via the exterior square");
    let n = config.n.unwrap_or(1000);
    let replicas = config.replicas.unwrap_or(100);
    let e = if mu.dim() >= 2 { lyapunov_pair(mu, n, replicas, seed)? } else { lyapunov_top(mu, n, replicas, seed)? };
    let row = vec![
        n.to_string(),
        replicas.to_string(),
        fmt_real(e.lambda1),
        fmt_real(e.ci_halfwidth),
        opt_real(e.lambda2),
        opt_real(e.lambda2_ci),
        opt_real(e.gap.map(|g| g.value)),
        opt_real(e.gap.map(|g| g.ci_halfwidth)),
    ];
    a.report = to_csv(
        &header(&["n", "replicas", "lambda1", "lambda1_ci", "lambda2", "lambda2_ci", "gap", "gap_ci"]),
        vec![row],
    )?;
    a.note("lambda1", estimate_text(&e.top()));
    if let (Some(l2), Some(gap), Some(sum)) = (e.lambda2, e.gap, e.top_two_sum) {
        a.note("lambda2", format!("{} +- {}", fmt_real(l2), opt_real(e.lambda2_ci)));
        a.note("lambda1 + lambda2 (exterior square)", estimate_text(&sum));
        a.note("gap lambda1 - lambda2", estimate_text(&gap));
        a.note("simple top exponent", gap.value > 3.0 * gap.ci_halfwidth);
    }
    Ok(a)
}

fn run_clt(config: &ScenarioConfig, seed: u64) -> Result<Artifacts, Error> {
    let mu = measure(config)?;
    let mut a = Artifacts::new(
        "(log |b_n ... b_1| - n lambda1) / sqrt(n) converges in law to a centered Gaussian (or the stated reference)",
    );
    let n = config.n.unwrap_or(1000);
    let samples = config.samples.unwrap_or(10_000);
    let lambda1 = centering(config, mu, seed, &mut a)?;
    let observable = match &config.start {
        Some(_) => Observable::Cocycle(start_point(config, mu.dim())?),
        None => Observable::Norm,
    };
    let r = clt_experiment(mu, &observable, n, samples, lambda1, seed, config.reference.as_ref())?;
    let rows = r
        .raw
        .iter()
        .zip(&r.samples)
        .enumerate()
        .map(|(i, (raw, z))| vec![i.to_string(), fmt_real(*raw), fmt_real(*z)])
        .collect();
    a.report = to_csv(&header(&["index", "raw", "normalized"]), rows)?;
    a.note("observable", if matches!(observable, Observable::Norm) { "log norm" } else { "norm cocycle at start" });
    a.note("n", n);
    a.note("samples", samples);
    a.note("fitted mean", fmt_real(r.fitted_mean));
    a.note("fitted variance", estimate_text(&variance_estimate(&r)));
    a.note("ks vs fitted gaussian", fmt_real(r.ks_vs_fitted_gaussian));
    if let Some(ks) = r.ks_vs_reference {
        a.note("ks vs reference", fmt_real(ks));
    }
    a.note("ks critical value (5%)", fmt_real(ks_critical_05(samples)));
    a.note("degenerate limit", r.degenerate);
    let (mean, var) = (r.fitted_mean, if r.degenerate { 0.0 } else { r.fitted_var });
    let reference = config.reference;
    let cdf = move |t: f64| match reference {
        Some(reference) => reference.cdf(t),
        None => gaussian_cdf(t, mean, var).unwrap_or(f64::NAN),
    };
    a.svg = Some(histogram_svg(&r.samples, &cdf, &format!("{}: normalized samples, n = {n}", config.name)));
    Ok(a)
}

fn run_cartan(config: &ScenarioConfig, seed: u64) -> Result<Artifacts, Error> {
    let mu = measure(config)?;
    let mut a = Artifacts::new(
        "(kappa(b_n ... b_1) - n lambda) / sqrt(n) converges to a nondegenerate Gaussian law on the sum-zero hyperplane",
    );
    let n = config.n.unwrap_or(1000);
    let samples = config.samples.unwrap_or(10_000);
    let r = multidim_clt_cartan(mu, n, samples, seed)?;
    let d = mu.dim();
    let mut names: Vec<String> = vec!["index".into()];
    names.extend((0..d).map(|i| format!("kappa{i}")));
    names.extend((0..d).map(|i| format!("z{i}")));
    let rows = r
        .raw
        .iter()
        .zip(&r.samples)
        .enumerate()
        .map(|(i, (k, z))| {
            let mut row = vec![i.to_string()];
            row.extend(k.iter().map(|v| fmt_real(*v)));
            row.extend(z.iter().map(|v| fmt_real(*v)));
            row
        })
        .collect();
    a.report = to_csv(&names, rows)?;
    for (i, l) in r.lambda.iter().enumerate() {
        a.note(&format!("lambda{i}"), estimate_text(l));
    }
    for (i, g) in r.gaps.iter().enumerate() {
        a.note(&format!("gap{i}"), estimate_text(g));
    }
    let regular = r.gaps.iter().all(|g| g.value > 3.0 * g.ci_halfwidth);
    a.note("lambda in the open Weyl chamber", regular);
    for (i, e) in r.restricted_eigenvalues.iter().enumerate() {
        a.note(&format!("restricted covariance eigenvalue {i}"), estimate_text(e));
    }
    let nondegenerate = r.restricted_eigenvalues.iter().all(|e| e.value > 3.0 * e.ci_halfwidth);
    a.note("nondegenerate", nondegenerate);
    a.note("max coordinate sum", fmt_real(r.max_coordinate_sum));
    let first: Vec<f64> = r.samples.iter().map(|s| s[0]).collect();
    let var = r.covariance.covariance[0][0];
    a.svg = Some(histogram_svg(
        &first,
        &|t| gaussian_cdf(t, 0.0, var).unwrap_or(f64::NAN),
        &format!("{}: first Cartan coordinate, n = {n}", config.name),
    ));
    Ok(a)
}

fn run_stationary(config: &ScenarioConfig, seed: u64) -> Result<Artifacts, Error> {
    let mu = measure(config)?;
    let mut a = Artifacts::new(
        "particle approximation of the stationary measure; int |log delta(x, y)|^{p-1} dnu(x) is finite and stable in y",
    );
    let burn_in = config.burn_in.unwrap_or(DEFAULT_BURN_IN);
    let particles = config.particles.unwrap_or(DEFAULT_PARTICLES);
    let cloud = estimate_stationary(mu, burn_in, particles, seed)?;
    let mut report = Vec::new();
    cloud.write_csv(&mut report).map_err(|e| Error::InvalidParameter(format!("csv: {e}")))?;
    a.report = report;
    a.note("particles", particles);
    a.note("burn_in", burn_in);
    if let Some(p) = config.p {
        let alt = estimate_stationary(mu, burn_in, particles, derive_seed(seed, "independent-cloud"))?;
        let d = mu.dim();
        let ys = random_unit_vectors(d, config.test_points.unwrap_or(20), seed, "test-points");
        let mut names: Vec<String> = (0..d).map(|i| format!("y{i}")).collect();
        names.extend(header(&["value", "ci_halfwidth", "value_alt", "ci_halfwidth_alt", "finite", "agree"]));
        let mut rows = Vec::new();
        let (mut all_finite, mut all_agree) = (true, true);
        for y in &ys {
            let y = DualProjectivePoint::new(y)?;
            let e1 = log_regularity_estimate(&cloud, &y, p)?;
            let e2 = log_regularity_estimate(&alt, &y, p)?;
            let finite = e1.is_some() && e2.is_some();
            let agree = matches!((e1, e2), (Some(x), Some(z)) if x.agrees_with(&z, 3.0));
            all_finite &= finite;
            all_agree &= agree;
            let mut row: Vec<String> = y.rep().iter().map(|c| fmt_real(*c)).collect();
            for e in [e1, e2] {
                row.push(opt_real(e.map(|e| e.value)));
                row.push(opt_real(e.map(|e| e.ci_halfwidth)));
            }
            row.push(finite.to_string());
            row.push(agree.to_string());
            rows.push(row);
        }
        a.extra.push(("log_regularity.csv", to_csv(&names, rows)?));
        a.note("log-regularity exponent p", fmt_real(p));
        a.note("finite at every test point", all_finite);
        a.note("independent clouds agree within 3 combined half-widths (stability check)", all_agree);
    }
    Ok(a)
}

fn run_cohomological(config: &ScenarioConfig, seed: u64) -> Result<Artifacts, Error> {
    let mu = measure(config)?;
    let mut a = Artifacts::new(
        "the norm cocycle is centerable: drift(x) - psi(x) + (P psi)(x) = lambda1 with psi(x) = int log delta(x, y) dnu*(y)",
    );
    let lambda1 = centering(config, mu, seed, &mut a)?;
    let burn_in = config.burn_in.unwrap_or(DEFAULT_BURN_IN);
    let particles = config.particles.unwrap_or(DEFAULT_PARTICLES);
    let psi = PsiFunction::new(estimate_dual_stationary(mu, burn_in, particles, seed)?);
    let d = mu.dim();
    let xs = random_unit_vectors(d, config.test_points.unwrap_or(100), seed, "test-points")
        .iter()
        .map(|v| ProjectivePoint::new(v))
        .collect::<Result<Vec<_>, _>>()?;
    let r = cohomological_residual(mu, &psi, lambda1, &xs)?;
    let mut names: Vec<String> = (0..d).map(|i| format!("x{i}")).collect();
    names.push("residual".into());
    let rows = xs
        .iter()
        .zip(&r.residuals)
        .map(|(x, res)| {
            let mut row: Vec<String> = x.rep().iter().map(|c| fmt_real(*c)).collect();
            row.push(fmt_real(*res));
            row
        })
        .collect();
    a.report = to_csv(&names, rows)?;
    a.note("dual particles", particles);
    a.note("mean |residual|", fmt_real(r.mean_abs));
    a.note("max |residual|", fmt_real(r.max_abs));
    Ok(a)
}

fn run_large_deviation(config: &ScenarioConfig, seed: u64) -> Result<Artifacts, Error> {
    let mu = measure(config)?;
    let mut a = Artifacts::new("P(|log |b_n ... b_1| - n lambda1| >= eps n) decays exponentially in n");
    let lambda1 = centering(config, mu, seed, &mut a)?;
    let eps = config.eps.unwrap_or(0.2);
    let schedule = config.schedule.clone().unwrap_or_else(|| (4..=10).map(|k| 1usize << k).collect());
    let c = large_deviation_curve(mu, lambda1, eps, &schedule, config.replicas.unwrap_or(10_000), seed)?;
    let rows = c.schedule.iter().zip(&c.frequencies).map(|(n, f)| vec![n.to_string(), fmt_real(*f)]).collect();
    a.report = to_csv(&header(&["n", "frequency"]), rows)?;
    a.note("eps", fmt_real(eps));
    a.note("frequencies nonincreasing", c.is_nonincreasing());
    a.note("fitted decay rate", c.decay_rate.map(fmt_real).unwrap_or_else(|| "indeterminate".into()));
    Ok(a)
}

fn run_lil(config: &ScenarioConfig, seed: u64) -> Result<Artifacts, Error> {
    let mu = measure(config)?;
    let mut a = Artifacts::new(
        "the cluster set of (S_n - n lambda1) / sqrt(2 Phi n log log n) is [-1, 1] (qualitative diagnostic)",
    );
    let lambda1 = centering(config, mu, seed, &mut a)?;
    let x = start_point(config, mu.dim())?;
    let phi = match config.phi {
        Some(phi) => {
            a.note("phi", format!("{} (supplied)", fmt_real(phi)));
            phi
        }
        None => {
            let r = clt_experiment(mu, &Observable::Cocycle(x.clone()), 1000, 2000, lambda1, derive_seed(seed, "phi"), None)?;
            a.note("phi", format!("{} (estimated)", estimate_text(&variance_estimate(&r))));
            r.fitted_var
        }
    };
    let n_max = config.n.unwrap_or(1_000_000);
    let r = lil_diagnostic(mu, &x, lambda1, phi, n_max, seed)?;
    let rows = r.record.iter().map(|(k, v)| vec![k.to_string(), fmt_real(*v)]).collect();
    a.report = to_csv(&header(&["k", "normalized"]), rows)?;
    a.note("window", format!("[{}, {}]", r.window_start, r.n_max));
    a.note("window max", fmt_real(r.window_max));
    a.note("window min", fmt_real(r.window_min));
    a.note("consistent with the iterated logarithm (slack 0.3)", r.consistent);
    Ok(a)
}

fn difference_stream(config: &ScenarioConfig, seed: u64) -> Result<DifferenceStream, Error> {
    let scale = config.scale.unwrap_or(1.0);
    let kind = match config.stream.unwrap_or(StreamName::IidBounded) {
        StreamName::Zero => StreamKind::Zero,
        StreamName::IidBounded => StreamKind::IidBounded { bound: scale },
        StreamName::IidSquareIntegrable => StreamKind::IidSquareIntegrable { sd: scale },
        StreamName::Counterexample3i => StreamKind::Counterexample3i { p: config.p.unwrap_or(2.0) },
        StreamName::WalkInduced => {
            let mu = measure(config)?.clone();
            let start = start_point(config, mu.dim())?;
            StreamKind::WalkInduced { measure: mu, start }
        }
    };
    DifferenceStream::new(kind, seed)
}

fn run_martingale(config: &ScenarioConfig, seed: u64) -> Result<Artifacts, Error> {
    let check = config.check.ok_or_else(|| Error::InvalidParameter("martingale_lab needs `check`".into()))?;
    let schedule = config.schedule.clone().unwrap_or_else(default_schedule);
    match check {
        MartingaleCheck::Azuma => {
            let mut a = Artifacts::new("P(S_n >= n eps) <= exp(-n eps^2 / (2 a^2)) for differences bounded by a");
            let stream = difference_stream(config, seed)?;
            let eps = config.eps.unwrap_or(0.25);
            let r = azuma_check(&stream, eps, &schedule, config.replicas.unwrap_or(100_000))?;
            let rows = r
                .rows
                .iter()
                .map(|row| {
                    vec![
                        row.n.to_string(),
                        fmt_real(row.frequency),
                        fmt_real(row.bound),
                        fmt_real(row.ci_halfwidth),
                        row.holds.to_string(),
                    ]
                })
                .collect();
            a.report = to_csv(&header(&["n", "frequency", "bound", "ci_halfwidth", "holds"]), rows)?;
            a.note("eps", fmt_real(eps));
            a.note("bound a", fmt_real(r.a));
            a.note("trials", r.trials);
            a.note("bound holds at every n (3 half-widths)", r.all_hold());
            Ok(a)
        }
        MartingaleCheck::BaumKatz => {
            let mut a = Artifacts::new(
                "sum n^{p-2} P(|S_n| > n eps) converges under the domination hypothesis; the counterexample stream escapes it",
            );
            let stream = difference_stream(config, seed)?;
            let (p, eps) = (config.p.unwrap_or(2.0), config.eps.unwrap_or(0.25));
            let r = baum_katz_sums(&stream, p, eps, &schedule, config.replicas.unwrap_or(10_000))?;
            let rows = r
                .schedule
                .iter()
                .zip(&r.empirical_probs)
                .zip(r.increments.iter().zip(&r.weighted_partial_sums))
                .map(|((n, f), (inc, s))| vec![n.to_string(), fmt_real(*f), fmt_real(*inc), fmt_real(*s)])
                .collect();
            a.report = to_csv(&header(&["n", "frequency", "increment", "partial_sum"]), rows)?;
            a.note("p", fmt_real(p));
            a.note("eps", fmt_real(eps));
            a.note("verdict (heuristic, last increment < 1e-3)", format!("{:?}", r.verdict));
            a.note("increments decay", r.increments_decay());
            a.note("partial sums keep growing", r.keeps_growing());
            Ok(a)
        }
        MartingaleCheck::Brown => {
            let mut a = Artifacts::new(
                "row sums of a centered triangular array converge to N(0, Phi) when W_n -> Phi and the Lindeberg terms vanish",
            );
            let len = config.n.unwrap_or(1000);
            let row = match config.row_law.unwrap_or(RowLaw::Gaussian) {
                RowLaw::Gaussian => TriangularArray::iid_gaussian(len, config.scale.unwrap_or(1.0)),
                RowLaw::Zero => TriangularArray::zero(len),
                RowLaw::SingleSpike => TriangularArray::single_spike(len),
            };
            let eps = config.eps.unwrap_or(0.25);
            let r = brown_triangular_check(&row, eps, config.samples.unwrap_or(10_000), seed)?;
            let rows = r.row_sums.iter().enumerate().map(|(i, s)| vec![i.to_string(), fmt_real(*s)]).collect();
            a.report = to_csv(&header(&["index", "row_sum"]), rows)?;
            a.note("W_n", fmt_real(r.w_n));
            a.note("W_eps_n", fmt_real(r.w_eps_n));
            a.note("Lindeberg violated", r.lindeberg_violated);
            a.note("ks vs N(0, W_n)", fmt_real(r.ks_vs_gaussian));
            a.note("degenerate limit", r.degenerate);
            let reference = Reference::Gaussian { mean: 0.0, var: r.w_n };
            a.svg = Some(histogram_svg(&r.row_sums, &|t| reference.cdf(t), &format!("{}: row sums", config.name)));
            Ok(a)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seed_priority() {
        let mut c = bundled("lyapunov_diag").unwrap();
        let mut opts = RunOptions { env_seed: Some("7".into()), ..RunOptions::default() };
        assert_eq!(resolve_seed(&c, &opts).unwrap(), 7);
        c.master_seed = Some(5);
        assert_eq!(resolve_seed(&c, &opts).unwrap(), 5);
        opts.seed = Some(3);
        assert_eq!(resolve_seed(&c, &opts).unwrap(), 3);
        c.master_seed = None;
        opts.seed = None;
        opts.env_seed = None;
        assert_eq!(resolve_seed(&c, &opts).unwrap(), DEFAULT_SEED);
        opts.env_seed = Some("nope".into());
        assert!(resolve_seed(&c, &opts).is_err());
    }

    #[test]
    fn random_unit_vectors_are_unit_and_reproducible() {
        let a = random_unit_vectors(3, 10, 1, "t");
        assert_eq!(a, random_unit_vectors(3, 10, 1, "t"));
        assert!(a.iter().all(|v| (v.iter().map(|c| c * c).sum::<f64>() - 1.0).abs() < 1e-14));
    }
}
