//! Scenario files: TOML with a fixed schema.
//!
//! ```toml
//! name = "free_semigroup_sl2_clt"
//! kind = "clt"
//! dimension = 2
//! n = 2000
//! samples = 10000
//!
//! [measure]
//! atoms = [[1, 1, 0, 1], [1, 0, 1, 1]]   # row-major
//! weights = [0.5, 0.5]
//!
//! [assertions]
//! proximal = true
//! ```

use std::collections::BTreeSet;
use std::fmt;

use serde::Deserialize;

use crate::cocycle::DET_TOL;
use crate::group::{proximality_certificate, GeneratorMeasure};
use crate::linalg::SquareMatrix;
use crate::stats::Reference;

const TOP_KEYS: &[&str] = &[
    "name",
    "description",
    "kind",
    "dimension",
    "field",
    "master_seed",
    "output_dir",
    "n",
    "samples",
    "burn_in",
    "particles",
    "replicas",
    "eps",
    "p",
    "schedule",
    "lambda1",
    "phi",
    "reference",
    "reference_var",
    "start",
    "test_points",
    "check",
    "stream",
    "scale",
    "row_law",
    "measure",
    "assertions",
];
const MEASURE_KEYS: &[&str] = &["atoms", "weights"];
const ASSERTION_KEYS: &[&str] = &["strong_irreducible", "proximal", "unimodular"];

/// Weights must sum to 1 within this before they are renormalized.
pub const WEIGHT_SUM_TOL: f64 = 1e-9;
/// Word length searched when a scenario asserts proximality.
pub const PROXIMALITY_SEARCH_LEN: usize = 6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentKind {
    Lyapunov,
    Clt,
    CltCartan,
    Stationary,
    Cohomological,
    LargeDeviation,
    Lil,
    MartingaleLab,
}

impl ExperimentKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            ExperimentKind::Lyapunov => "lyapunov",
            ExperimentKind::Clt => "clt",
            ExperimentKind::CltCartan => "clt_cartan",
            ExperimentKind::Stationary => "stationary",
            ExperimentKind::Cohomological => "cohomological",
            ExperimentKind::LargeDeviation => "large_deviation",
            ExperimentKind::Lil => "lil",
            ExperimentKind::MartingaleLab => "martingale_lab",
        }
    }

    fn needs_measure(&self) -> bool {
        !matches!(self, ExperimentKind::MartingaleLab)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MartingaleCheck {
    Azuma,
    BaumKatz,
    Brown,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StreamName {
    Zero,
    IidBounded,
    IidSquareIntegrable,
    #[serde(rename = "counterexample_3i")]
    Counterexample3i,
    WalkInduced,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RowLaw {
    Gaussian,
    Zero,
    SingleSpike,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReferenceName {
    Gaussian,
    FoldedNormal,
}

#[derive(Clone, Debug, Default, PartialEq, Deserialize)]
pub struct MeasureSpec {
    pub atoms: Vec<Vec<f64>>,
    pub weights: Option<Vec<f64>>,
}

/// Standing hypotheses the scenario relies on. `unimodular` and `proximal`
/// are checked; `strong_irreducible` is recorded as asserted.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Deserialize)]
pub struct Assertions {
    #[serde(default)]
    pub strong_irreducible: bool,
    #[serde(default)]
    pub proximal: bool,
    #[serde(default)]
    pub unimodular: bool,
}

/// Seeds may be given as TOML integers or as strings (decimal or `0x` hex),
/// the latter for values above `i64::MAX`.
#[derive(Clone, Debug, PartialEq, Eq, Deserialize)]
#[serde(untagged)]
enum SeedValue {
    Int(i64),
    Text(String),
}

#[derive(Debug, Deserialize)]
struct RawConfig {
    name: String,
    description: Option<String>,
    kind: ExperimentKind,
    dimension: Option<usize>,
    field: Option<String>,
    master_seed: Option<SeedValue>,
    output_dir: Option<String>,
    n: Option<usize>,
    samples: Option<usize>,
    burn_in: Option<usize>,
    particles: Option<usize>,
    replicas: Option<usize>,
    eps: Option<f64>,
    p: Option<f64>,
    schedule: Option<Vec<usize>>,
    lambda1: Option<f64>,
    phi: Option<f64>,
    reference: Option<ReferenceName>,
    reference_var: Option<f64>,
    start: Option<Vec<f64>>,
    test_points: Option<usize>,
    check: Option<MartingaleCheck>,
    stream: Option<StreamName>,
    scale: Option<f64>,
    row_law: Option<RowLaw>,
    measure: Option<MeasureSpec>,
    #[serde(default)]
    assertions: Assertions,
}

/// A validated scenario.
#[derive(Clone, Debug, PartialEq)]
pub struct ScenarioConfig {
    pub name: String,
    pub description: String,
    pub kind: ExperimentKind,
    pub measure: Option<GeneratorMeasure>,
    pub master_seed: Option<u64>,
    pub output_dir: Option<String>,
    pub n: Option<usize>,
    pub samples: Option<usize>,
    pub burn_in: Option<usize>,
    pub particles: Option<usize>,
    pub replicas: Option<usize>,
    pub eps: Option<f64>,
    pub p: Option<f64>,
    pub schedule: Option<Vec<usize>>,
    pub lambda1: Option<f64>,
    pub phi: Option<f64>,
    pub reference: Option<Reference>,
    pub start: Option<Vec<f64>>,
    pub test_points: Option<usize>,
    pub check: Option<MartingaleCheck>,
    pub stream: Option<StreamName>,
    pub scale: Option<f64>,
    pub row_law: Option<RowLaw>,
    pub assertions: Assertions,
}

impl ScenarioConfig {
    pub fn dimension(&self) -> Option<usize> {
        self.measure.as_ref().map(GeneratorMeasure::dim)
    }
}

/// Every problem found in a scenario file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConfigError {
    pub problems: Vec<String>,
}

impl ConfigError {
    fn one(msg: impl Into<String>) -> Self {
        Self { problems: vec![msg.into()] }
    }
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "invalid scenario: {}", self.problems.join("; "))
    }
}

impl std::error::Error for ConfigError {}

fn unknown_keys(table: &toml::Table, allowed: &[&str], prefix: &str, out: &mut Vec<String>) {
    let allowed: BTreeSet<&str> = allowed.iter().copied().collect();
    for key in table.keys() {
        if !allowed.contains(key.as_str()) {
            out.push(format!("unknown key `{prefix}{key}`"));
        }
    }
}

fn parse_seed(v: &SeedValue) -> Result<u64, String> {
    match v {
        SeedValue::Int(i) => u64::try_from(*i).map_err(|_| format!("master_seed {i} must be nonnegative")),
        SeedValue::Text(s) => parse_seed_text(s),
    }
}

/// Decimal or `0x`-prefixed hexadecimal `u64`.
pub fn parse_seed_text(s: &str) -> Result<u64, String> {
    let t = s.trim();
    let parsed = match t.strip_prefix("0x").or_else(|| t.strip_prefix("0X")) {
        Some(hex) => u64::from_str_radix(&hex.replace('_', ""), 16),
        None => t.replace('_', "").parse(),
    };
    parsed.map_err(|_| format!("`{s}` is not a valid u64 seed"))
}

/// Parse and validate a scenario file's text.
pub fn parse_config(text: &str) -> Result<ScenarioConfig, ConfigError> {
    let table: toml::Table = text.parse().map_err(|e: toml::de::Error| ConfigError::one(e.to_string()))?;
    let mut problems = Vec::new();
    unknown_keys(&table, TOP_KEYS, "", &mut problems);
    for (section, keys) in [("measure", MEASURE_KEYS), ("assertions", ASSERTION_KEYS)] {
        match table.get(section) {
            Some(toml::Value::Table(t)) => unknown_keys(t, keys, &format!("{section}."), &mut problems),
            Some(_) => problems.push(format!("`{section}` must be a table")),
            None => {}
        }
    }
    if !problems.is_empty() {
        return Err(ConfigError { problems });
    }
    let raw: RawConfig = toml::Value::Table(table).try_into().map_err(|e: toml::de::Error| ConfigError::one(e.to_string()))?;
    validate(raw)
}

fn build_measure(d: usize, spec: &MeasureSpec, problems: &mut Vec<String>) -> Option<GeneratorMeasure> {
    if spec.atoms.is_empty() {
        problems.push("measure.atoms must not be empty".into());
        return None;
    }
    let mut atoms = Vec::with_capacity(spec.atoms.len());
    for (i, a) in spec.atoms.iter().enumerate() {
        if a.len() != d * d {
            problems.push(format!("measure.atoms[{i}] has {} entries, expected {} for dimension {d}", a.len(), d * d));
            continue;
        }
        match SquareMatrix::group_element(d, a.clone()) {
            Ok(g) => atoms.push(g),
            Err(e) => problems.push(format!("measure.atoms[{i}]: {e}")),
        }
    }
    let k = spec.atoms.len();
    let weights = spec.weights.clone().unwrap_or_else(|| vec![1.0 / k as f64; k]);
    if weights.len() != k {
        problems.push(format!("measure.weights has {} entries for {k} atoms", weights.len()));
        return None;
    }
    if let Some(w) = weights.iter().find(|w| !(**w > 0.0 && w.is_finite())) {
        problems.push(format!("measure.weights must be positive, found {w}"));
        return None;
    }
    let total: f64 = weights.iter().sum();
    if (total - 1.0).abs() > WEIGHT_SUM_TOL {
        problems.push(format!("measure.weights sum to {total}, not 1"));
        return None;
    }
    if atoms.len() != k {
        return None;
    }
    let weights = weights.iter().map(|w| w / total).collect();
    match GeneratorMeasure::new(atoms, weights) {
        Ok(m) => Some(m),
        Err(e) => {
            problems.push(e.to_string());
            None
        }
    }
}

fn validate(raw: RawConfig) -> Result<ScenarioConfig, ConfigError> {
    let mut problems = Vec::new();
    if raw.name.trim().is_empty() || raw.name.contains(['/', '\\']) {
        problems.push(format!("name `{}` must be nonempty and contain no path separators", raw.name));
    }
    if let Some(field) = &raw.field {
        if field != "real" {
            problems.push(format!("field `{field}` is not supported (only \"real\")"));
        }
    }
    let master_seed = match raw.master_seed.as_ref().map(parse_seed).transpose() {
        Ok(s) => s,
        Err(e) => {
            problems.push(e);
            None
        }
    };
    let measure = match (&raw.measure, raw.dimension) {
        (Some(spec), Some(d)) if d >= 1 => build_measure(d, spec, &mut problems),
        (Some(_), Some(_)) => {
            problems.push("dimension must be >= 1".into());
            None
        }
        (Some(_), None) => {
            problems.push("a measure needs `dimension`".into());
            None
        }
        (None, _) => None,
    };
    let needs_measure = raw.kind.needs_measure() || raw.stream == Some(StreamName::WalkInduced);
    if needs_measure && raw.measure.is_none() {
        problems.push(format!("kind `{}` needs a [measure] table", raw.kind.as_str()));
    }
    if let Some(mu) = &measure {
        if raw.assertions.unimodular {
            for (i, g) in mu.atoms().iter().enumerate() {
                let det = g.det();
                if (det - 1.0).abs() > DET_TOL {
                    problems.push(format!("assertion unimodular fails: det of atom {i} is {det}"));
                }
            }
        }
        if raw.assertions.proximal && proximality_certificate(mu, PROXIMALITY_SEARCH_LEN).is_none() {
            problems.push(format!("assertion proximal fails: no proximal word up to length {PROXIMALITY_SEARCH_LEN}"));
        }
        if let Some(x) = &raw.start {
            if x.len() != mu.dim() {
                problems.push(format!("start has {} coordinates, dimension is {}", x.len(), mu.dim()));
            }
        }
    }
    if raw.kind == ExperimentKind::CltCartan && !raw.assertions.unimodular {
        problems.push("kind `clt_cartan` requires assertions.unimodular = true".into());
    }
    if raw.kind == ExperimentKind::MartingaleLab && raw.check.is_none() {
        problems.push("kind `martingale_lab` needs `check` (azuma, baum_katz or brown)".into());
    }
    for (key, v) in [("eps", raw.eps), ("phi", raw.phi), ("reference_var", raw.reference_var)] {
        if let Some(v) = v {
            if !(v > 0.0 && v.is_finite()) {
                problems.push(format!("{key} must be finite and > 0, found {v}"));
            }
        }
    }
    if let Some(p) = raw.p {
        if !(p > 1.0 && p.is_finite()) {
            problems.push(format!("p must be finite and > 1, found {p}"));
        }
    }
    if let Some(s) = &raw.schedule {
        if s.is_empty() || s[0] == 0 || s.windows(2).any(|w| w[0] >= w[1]) {
            problems.push("schedule must be nonempty, positive and increasing".into());
        }
    }
    for (key, v) in [
        ("n", raw.n),
        ("samples", raw.samples),
        ("burn_in", raw.burn_in),
        ("particles", raw.particles),
        ("replicas", raw.replicas),
        ("test_points", raw.test_points),
    ] {
        if v == Some(0) {
            problems.push(format!("{key} must be >= 1"));
        }
    }
    let reference = raw.reference.map(|r| {
        let var = raw.reference_var.unwrap_or(1.0);
        match r {
            ReferenceName::Gaussian => Reference::Gaussian { mean: 0.0, var },
            ReferenceName::FoldedNormal => Reference::FoldedGaussian { var },
        }
    });
    if !problems.is_empty() {
        return Err(ConfigError { problems });
    }
    Ok(ScenarioConfig {
        description: raw.description.unwrap_or_default(),
        name: raw.name,
        kind: raw.kind,
        measure,
        master_seed,
        output_dir: raw.output_dir,
        n: raw.n,
        samples: raw.samples,
        burn_in: raw.burn_in,
        particles: raw.particles,
        replicas: raw.replicas,
        eps: raw.eps,
        p: raw.p,
        schedule: raw.schedule,
        lambda1: raw.lambda1,
        phi: raw.phi,
        reference,
        start: raw.start,
        test_points: raw.test_points,
        check: raw.check,
        stream: raw.stream,
        scale: raw.scale,
        row_law: raw.row_law,
        assertions: raw.assertions,
    })
}
