//! Particle approximations of the stationary measures on `P(V)` and `P(V*)`,
//! the corrector `psi(x) = int log delta(x, y) dnu*(y)`, the Markov operator,
//! the cohomological residual and the log-regularity integral.

use std::io::Write;

use nalgebra::DMatrix;
use rayon::prelude::*;

use crate::cocycle::drift;
use crate::error::{Error, Result};
use crate::export::{csv_writer, fmt_real};
use crate::group::{check_mu, GeneratorMeasure, WalkSampler};
use crate::linalg::{
    check_dim, dot, mul_vec_into, norm, wedge_norm, DualProjectivePoint, Line, ProjectivePoint, SquareMatrix,
};
use crate::rng::derive_seed;
use crate::stats::{Estimate, Z95};

/// `delta` at or below this is treated as an exact zero.
pub const DELTA_FLOOR: f64 = 1e-300;
pub const DEFAULT_BURN_IN: usize = 500;
pub const DEFAULT_PARTICLES: usize = 100_000;

const WEIGHT_SUM_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Provenance {
    pub seed: u64,
    pub burn_in: usize,
    pub particle_count: usize,
}

/// Weighted particle cloud on projective space (or its dual).
#[derive(Clone, Debug, PartialEq)]
pub struct EmpiricalMeasure<P: Line> {
    particles: Vec<P>,
    weights: Vec<f64>,
    provenance: Option<Provenance>,
}

impl<P: Line> EmpiricalMeasure<P> {
    pub fn new(particles: Vec<P>, weights: Vec<f64>) -> Result<Self> {
        if particles.is_empty() {
            return Err(Error::EmptySample);
        }
        if particles.len() != weights.len() {
            return Err(Error::DimensionMismatch { expected: particles.len(), found: weights.len() });
        }
        let d = particles[0].dim();
        if let Some(p) = particles.iter().find(|p| p.dim() != d) {
            return Err(Error::DimensionMismatch { expected: d, found: p.dim() });
        }
        if weights.iter().any(|w| !(w.is_finite() && *w > 0.0)) {
            return Err(Error::InvalidParameter("cloud weights must be positive".into()));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > WEIGHT_SUM_TOL {
            return Err(Error::InvalidParameter(format!("cloud weights sum to {total}")));
        }
        Ok(Self { particles, weights, provenance: None })
    }

    pub fn uniform(particles: Vec<P>) -> Result<Self> {
        let n = particles.len().max(1);
        Self::new(particles, vec![1.0 / n as f64; n])
    }

    pub fn dirac(point: P) -> Self {
        Self { particles: vec![point], weights: vec![1.0], provenance: None }
    }

    pub fn with_provenance(mut self, provenance: Provenance) -> Self {
        self.provenance = Some(provenance);
        self
    }

    pub fn particles(&self) -> &[P] {
        &self.particles
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn provenance(&self) -> Option<Provenance> {
        self.provenance
    }

    pub fn len(&self) -> usize {
        self.particles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.particles.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.particles[0].dim()
    }

    /// One row per particle: coordinates then weight.
    pub fn write_csv<W: Write>(&self, out: W) -> std::io::Result<()> {
        let mut w = csv_writer(out);
        let mut header: Vec<String> = (0..self.dim()).map(|i| format!("x{i}")).collect();
        header.push("weight".into());
        w.write_record(&header)?;
        for (p, wt) in self.particles.iter().zip(&self.weights) {
            let mut row: Vec<String> = p.rep().iter().map(|c| fmt_real(*c)).collect();
            row.push(fmt_real(*wt));
            w.write_record(&row)?;
        }
        w.flush()
    }
}

/// Deterministic spread of `n` directions: equispaced half-angles for `d = 2`,
/// a normalized Kronecker lattice otherwise.
pub fn start_cloud(d: usize, n: usize) -> Vec<Vec<f64>> {
    match d {
        0 => Vec::new(),
        1 => vec![vec![1.0]; n],
        2 => (0..n)
            .map(|k| {
                let t = std::f64::consts::PI * (k as f64 + 0.5) / n as f64;
                vec![t.cos(), t.sin()]
            })
            .collect(),
        _ => {
            // generalized golden ratio: positive root of x^{d+1} = x + 1
            let mut phi = 2.0f64;
            for _ in 0..64 {
                phi = (1.0 + phi).powf(1.0 / (d as f64 + 1.0));
            }
            let alpha: Vec<f64> = (1..=d).map(|i| (1.0 / phi.powi(i as i32)).fract()).collect();
            let mut out = Vec::with_capacity(n);
            let mut k = 0u64;
            while out.len() < n {
                k += 1;
                let v: Vec<f64> = alpha.iter().map(|a| 2.0 * (0.5 + k as f64 * a).fract() - 1.0).collect();
                let r = norm(&v);
                if r > 1e-3 {
                    out.push(v.iter().map(|c| c / r).collect());
                }
            }
            out
        }
    }
}

/// Run `v <- g v` for `steps` draws of `action` from stream `stream` of
/// `seed`, returning the normalized endpoint.
pub fn trajectory_endpoint(action: &GeneratorMeasure, start: &[f64], steps: usize, seed: u64, stream: u64) -> Vec<f64> {
    let d = start.len();
    let mut walk = WalkSampler::new(action, seed, stream).stream();
    let mut v = start.to_vec();
    let mut tmp = vec![0.0; d];
    for _ in 0..steps {
        let g = walk.next_atom();
        mul_vec_into(g.as_slice(), d, &v, &mut tmp);
        let n = norm(&tmp);
        for (a, b) in v.iter_mut().zip(&tmp) {
            *a = b / n;
        }
    }
    v
}

fn run_cloud<P: Line>(
    action: &GeneratorMeasure,
    burn_in: usize,
    particles: usize,
    seed: u64,
    label: &str,
) -> Result<EmpiricalMeasure<P>> {
    if burn_in == 0 || particles == 0 {
        return Err(Error::InvalidParameter("burn_in and particle count must be >= 1".into()));
    }
    let stream_seed = derive_seed(seed, label);
    let starts = start_cloud(action.dim(), particles);
    let points = starts
        .par_iter()
        .enumerate()
        .map(|(k, s)| P::from_vector(&trajectory_endpoint(action, s, burn_in, stream_seed, k as u64)))
        .collect::<Result<Vec<P>>>()?;
    Ok(EmpiricalMeasure::uniform(points)?.with_provenance(Provenance { seed, burn_in, particle_count: particles }))
}

/// Particle approximation of the `mu`-stationary measure on `P(V)`.
pub fn estimate_stationary(
    mu: &GeneratorMeasure,
    burn_in: usize,
    particles: usize,
    seed: u64,
) -> Result<EmpiricalMeasure<ProjectivePoint>> {
    run_cloud(mu, burn_in, particles, seed, "stationary")
}

/// The atoms through which `check_mu(mu)` acts on covectors, `f -> f o g^{-1}`,
/// i.e. the inverse transposes of the inverted atoms.
pub fn dual_action(mu: &GeneratorMeasure) -> Result<GeneratorMeasure> {
    check_mu(mu).map_atoms(|g| Ok(g.inverse()?.transpose()))
}

/// Particle approximation of the `check_mu`-stationary measure on `P(V*)`.
pub fn estimate_dual_stationary(
    mu: &GeneratorMeasure,
    burn_in: usize,
    particles: usize,
    seed: u64,
) -> Result<EmpiricalMeasure<DualProjectivePoint>> {
    run_cloud(&dual_action(mu)?, burn_in, particles, seed, "dual-stationary")
}

/// Push every particle through one more independent `mu`-step.
pub fn push_forward(
    cloud: &EmpiricalMeasure<ProjectivePoint>,
    mu: &GeneratorMeasure,
    seed: u64,
) -> Result<EmpiricalMeasure<ProjectivePoint>> {
    let stream_seed = derive_seed(seed, "push-forward");
    let particles = cloud
        .particles
        .par_iter()
        .enumerate()
        .map(|(k, p)| ProjectivePoint::new(&trajectory_endpoint(mu, p.rep(), 1, stream_seed, k as u64)))
        .collect::<Result<Vec<_>>>()?;
    EmpiricalMeasure::new(particles, cloud.weights.clone())
}

/// `psi(x) = sum_j w_j log delta(x, y_j)` over a dual cloud.
#[derive(Clone, Debug)]
pub struct PsiFunction {
    dual_cloud: EmpiricalMeasure<DualProjectivePoint>,
    flat: Vec<f64>,
}

impl PsiFunction {
    pub fn new(dual_cloud: EmpiricalMeasure<DualProjectivePoint>) -> Self {
        let flat = dual_cloud.particles.iter().flat_map(|p| p.rep().iter().copied()).collect();
        Self { dual_cloud, flat }
    }

    pub fn dual_cloud(&self) -> &EmpiricalMeasure<DualProjectivePoint> {
        &self.dual_cloud
    }

    pub fn dim(&self) -> usize {
        self.dual_cloud.dim()
    }

    /// Evaluate at a unit vector.
    pub fn eval_vec(&self, v: &[f64]) -> Result<f64> {
        let d = self.dim();
        check_dim(d, v.len())?;
        let mut acc = 0.0;
        for (j, (y, w)) in self.flat.chunks_exact(d).zip(&self.dual_cloud.weights).enumerate() {
            let delta = dot(v, y).abs().min(1.0);
            if delta <= DELTA_FLOOR {
                return Err(Error::SingularEvaluation { atom: j, delta });
            }
            acc += w * delta.ln();
        }
        Ok(acc)
    }
}

pub fn psi_eval(psi: &PsiFunction, x: &ProjectivePoint) -> Result<f64> {
    psi.eval_vec(x.rep())
}

/// `(P_mu f)(x) = sum_i w_i f(g_i x)`.
pub fn markov_apply<F>(mu: &GeneratorMeasure, f: F, x: &ProjectivePoint) -> Result<f64>
where
    F: Fn(&ProjectivePoint) -> Result<f64>,
{
    let mut acc = 0.0;
    for (g, w) in mu.atoms().iter().zip(mu.weights()) {
        acc += w * f(&x.apply(g)?)?;
    }
    Ok(acc)
}

#[derive(Clone, Debug, PartialEq)]
pub struct ResidualReport {
    pub residuals: Vec<f64>,
    pub mean_abs: f64,
    pub max_abs: f64,
}

/// `r(x) = drift(x) - psi(x) + (P_mu psi)(x) - lambda1` at each test point.
pub fn cohomological_residual(
    mu: &GeneratorMeasure,
    psi: &PsiFunction,
    lambda1: f64,
    xs: &[ProjectivePoint],
) -> Result<ResidualReport> {
    if xs.is_empty() {
        return Err(Error::EmptySample);
    }
    let residuals = xs
        .par_iter()
        .map(|x| {
            let p = markov_apply(mu, |gx| psi_eval(psi, gx), x)?;
            Ok(drift(mu, x) - psi_eval(psi, x)? + p - lambda1)
        })
        .collect::<Result<Vec<f64>>>()?;
    let mean_abs = residuals.iter().map(|r| r.abs()).sum::<f64>() / residuals.len() as f64;
    let max_abs = residuals.iter().map(|r| r.abs()).fold(0.0, f64::max);
    Ok(ResidualReport { residuals, mean_abs, max_abs })
}

/// Pointwise gap in `sigma(g,x) = log delta(x, g^{-1}y) - log delta(gx, y) + sigma(g^{-1}, y)`,
/// the identity behind the corrector.
pub fn corrector_identity_gap(g: &SquareMatrix, x: &ProjectivePoint, y: &DualProjectivePoint) -> Result<f64> {
    let lhs = crate::cocycle::norm_cocycle(g, x)?;
    let d1 = crate::linalg::delta(x, &y.pull_back(g)?)?;
    let d2 = crate::linalg::delta(&x.apply(g)?, y)?;
    let dual = norm(&g.tr_mul_vec(y.rep())).ln();
    Ok((lhs - (d1.ln() - d2.ln() + dual)).abs())
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum LogIntegral {
    Finite(f64),
    Infinite,
}

impl LogIntegral {
    pub fn is_finite(&self) -> bool {
        matches!(self, LogIntegral::Finite(_))
    }

    pub fn value(&self) -> f64 {
        match self {
            LogIntegral::Finite(v) => *v,
            LogIntegral::Infinite => f64::INFINITY,
        }
    }
}

fn log_terms(cloud: &EmpiricalMeasure<ProjectivePoint>, y: &DualProjectivePoint, p: f64) -> Result<Option<Vec<f64>>> {
    if !(p > 1.0) {
        return Err(Error::InvalidParameter(format!("log-regularity exponent p = {p} must be > 1")));
    }
    check_dim(cloud.dim(), y.dim())?;
    let mut terms = Vec::with_capacity(cloud.len());
    for x in &cloud.particles {
        let delta = dot(x.rep(), y.rep()).abs().min(1.0);
        if delta <= DELTA_FLOOR {
            return Ok(None);
        }
        terms.push(delta.ln().abs().powf(p - 1.0));
    }
    Ok(Some(terms))
}

/// `sum_i w_i |log delta(x_i, y)|^{p-1}`.
pub fn log_regularity_integral(
    cloud: &EmpiricalMeasure<ProjectivePoint>,
    y: &DualProjectivePoint,
    p: f64,
) -> Result<LogIntegral> {
    Ok(match log_terms(cloud, y, p)? {
        Some(terms) => LogIntegral::Finite(terms.iter().zip(&cloud.weights).map(|(t, w)| t * w).sum()),
        None => LogIntegral::Infinite,
    })
}

/// The log-regularity integral with a Monte Carlo half-width (equal-weight
/// clouds of independent particles). `None` when some atom is orthogonal to `y`.
pub fn log_regularity_estimate(
    cloud: &EmpiricalMeasure<ProjectivePoint>,
    y: &DualProjectivePoint,
    p: f64,
) -> Result<Option<Estimate>> {
    match log_terms(cloud, y, p)? {
        Some(terms) if terms.len() >= 2 => Estimate::of_mean(&terms).map(Some),
        Some(terms) => Ok(Some(Estimate { value: terms[0], ci_halfwidth: 0.0 })),
        None => Ok(None),
    }
}

/// Weighted principal direction of a cloud (top eigenvector of `sum w v v^T`).
pub fn barycenter_direction(cloud: &EmpiricalMeasure<ProjectivePoint>) -> Result<ProjectivePoint> {
    let d = cloud.dim();
    let mut m = DMatrix::<f64>::zeros(d, d);
    for (p, w) in cloud.particles.iter().zip(&cloud.weights) {
        let v = p.rep();
        for i in 0..d {
            for j in 0..d {
                m[(i, j)] += w * v[i] * v[j];
            }
        }
    }
    let eig = m.symmetric_eigen();
    let top = (0..d).max_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b])).unwrap_or(0);
    ProjectivePoint::new(eig.eigenvectors.column(top).as_slice())
}

/// Push the whole cloud through one sampled word `b_n ... b_1` and return the
/// fraction of mass within `radius` of the pushed cloud's barycenter direction.
pub fn contraction_fraction(
    mu: &GeneratorMeasure,
    cloud: &EmpiricalMeasure<ProjectivePoint>,
    n: usize,
    seed: u64,
    radius: f64,
) -> Result<f64> {
    let word: Vec<usize> = {
        let mut s = WalkSampler::new(mu, derive_seed(seed, "contraction"), 0).stream();
        (0..n).map(|_| s.next_index()).collect()
    };
    let d = cloud.dim();
    let pushed = cloud
        .particles
        .par_iter()
        .map(|p| {
            let mut v = p.rep().to_vec();
            let mut tmp = vec![0.0; d];
            for &i in &word {
                let g = &mu.atoms()[i];
                mul_vec_into(g.as_slice(), d, &v, &mut tmp);
                let r = norm(&tmp);
                for (a, b) in v.iter_mut().zip(&tmp) {
                    *a = b / r;
                }
            }
            ProjectivePoint::new(&v)
        })
        .collect::<Result<Vec<_>>>()?;
    let pushed = EmpiricalMeasure::new(pushed, cloud.weights.clone())?;
    let center = barycenter_direction(&pushed)?;
    Ok(pushed
        .particles
        .iter()
        .zip(&pushed.weights)
        .filter(|(p, _)| wedge_norm(p.rep(), center.rep()) <= radius)
        .map(|(_, w)| w)
        .sum())
}

/// Standard error based half-width of a weighted integral over an
/// equal-weight cloud.
pub fn cloud_mean_estimate<F>(cloud: &EmpiricalMeasure<ProjectivePoint>, f: F) -> Result<Estimate>
where
    F: Fn(&ProjectivePoint) -> Result<f64> + Sync,
{
    let values = cloud.particles.par_iter().map(&f).collect::<Result<Vec<f64>>>()?;
    let w = &cloud.weights;
    let mean: f64 = values.iter().zip(w).map(|(v, w)| v * w).sum();
    let var: f64 = values.iter().zip(w).map(|(v, w)| w * (v - mean).powi(2)).sum();
    let n = values.len() as f64;
    Ok(Estimate { value: mean, ci_halfwidth: Z95 * (var / n).sqrt() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{LN_2, PI};

    fn uniform_dual_cloud(n: usize) -> EmpiricalMeasure<DualProjectivePoint> {
        let pts = start_cloud(2, n).iter().map(|v| DualProjectivePoint::new(v).unwrap()).collect();
        EmpiricalMeasure::uniform(pts).unwrap()
    }

    #[test]
    fn cloud_validation() {
        let e1 = ProjectivePoint::basis(2, 0);
        assert!(EmpiricalMeasure::new(vec![e1.clone()], vec![0.5]).is_err());
        assert!(EmpiricalMeasure::<ProjectivePoint>::new(vec![], vec![]).is_err());
        assert!(EmpiricalMeasure::new(vec![e1.clone(), ProjectivePoint::basis(3, 0)], vec![0.5, 0.5]).is_err());
        assert_eq!(EmpiricalMeasure::dirac(e1).len(), 1);
    }

    #[test]
    fn start_cloud_shapes() {
        let c2 = start_cloud(2, 8);
        assert_eq!(c2.len(), 8);
        let c4 = start_cloud(4, 50);
        assert_eq!(c4.len(), 50);
        for v in c2.iter().chain(&c4) {
            assert!((norm(v) - 1.0).abs() < 1e-12);
        }
        assert_eq!(start_cloud(4, 50), c4);
    }

    #[test]
    fn proximal_dirac_concentrates() {
        let mu = GeneratorMeasure::dirac(SquareMatrix::diag(&[2.0, 0.5])).unwrap();
        let cloud = estimate_stationary(&mu, 200, 2000, 1).unwrap();
        let e1 = ProjectivePoint::basis(2, 0);
        let close = cloud.particles().iter().filter(|p| wedge_norm(p.rep(), e1.rep()) <= 1e-3).count();
        assert!(close as f64 >= 0.99 * 2000.0);
        assert_eq!(cloud.provenance().unwrap().burn_in, 200);

        let dual = estimate_dual_stationary(&mu, 200, 2000, 1).unwrap();
        let f1 = DualProjectivePoint::basis(2, 0);
        let close = dual.particles().iter().filter(|p| wedge_norm(p.rep(), f1.rep()) <= 1e-3).count();
        assert!(close as f64 >= 0.99 * 2000.0);
    }

    #[test]
    fn identity_keeps_start_cloud() {
        let mu = GeneratorMeasure::dirac(SquareMatrix::identity(3)).unwrap();
        let cloud = estimate_stationary(&mu, 10, 30, 5).unwrap();
        let dual = estimate_dual_stationary(&mu, 10, 30, 5).unwrap();
        for ((p, q), s) in cloud.particles().iter().zip(dual.particles()).zip(start_cloud(3, 30)) {
            let s = ProjectivePoint::new(&s).unwrap();
            assert!(wedge_norm(p.rep(), s.rep()) < 1e-15);
            assert!(wedge_norm(q.rep(), s.rep()) < 1e-15);
        }
    }

    #[test]
    fn psi_examples() {
        let psi = PsiFunction::new(EmpiricalMeasure::dirac(DualProjectivePoint::basis(2, 0)));
        assert_eq!(psi_eval(&psi, &ProjectivePoint::basis(2, 0)).unwrap(), 0.0);

        let psi2 = PsiFunction::new(EmpiricalMeasure::dirac(DualProjectivePoint::basis(2, 1)));
        assert!(matches!(
            psi_eval(&psi2, &ProjectivePoint::basis(2, 0)),
            Err(Error::SingularEvaluation { atom: 0, .. })
        ));
    }

    #[test]
    fn psi_uniform_cloud_is_minus_log_two() {
        // (1/pi) int_0^pi log|cos t| dt = -log 2
        let psi = PsiFunction::new(uniform_dual_cloud(100_000));
        for t in [0.1f64, 0.77, 1.3, 2.9] {
            let x = ProjectivePoint::new(&[t.cos(), t.sin()]).unwrap();
            let v = psi_eval(&psi, &x).unwrap();
            assert!((v + LN_2).abs() < 1e-3, "{t}: {v}");
        }
    }

    #[test]
    fn markov_examples() {
        let mu = GeneratorMeasure::uniform(vec![SquareMatrix::rotation(0.3), SquareMatrix::diag(&[2.0, 0.5])]).unwrap();
        let x = ProjectivePoint::new(&[0.6, 0.8]).unwrap();
        assert!((markov_apply(&mu, |_| Ok(3.5), &x).unwrap() - 3.5).abs() < 1e-15);

        let g = SquareMatrix::from_rows(&[&[2.0, 1.0], &[1.0, 1.0]]).unwrap();
        let dg = GeneratorMeasure::dirac(g.clone()).unwrap();
        let f = |p: &ProjectivePoint| Ok(p.rep()[0] * 3.0 - p.rep()[1]);
        assert!((markov_apply(&dg, f, &x).unwrap() - f(&x.apply(&g).unwrap()).unwrap()).abs() < 1e-15);

        let h = |p: &ProjectivePoint| Ok(p.rep()[1].powi(2));
        let lin = markov_apply(&mu, |p| Ok(2.0 * f(p)? - 0.5 * h(p)?), &x).unwrap();
        let sep = 2.0 * markov_apply(&mu, f, &x).unwrap() - 0.5 * markov_apply(&mu, h, &x).unwrap();
        assert!((lin - sep).abs() < 1e-12);
    }

    #[test]
    fn residual_vanishes_for_identity() {
        let mu = GeneratorMeasure::dirac(SquareMatrix::identity(2)).unwrap();
        let psi = PsiFunction::new(uniform_dual_cloud(101));
        let xs: Vec<_> = (0..10).map(|k| ProjectivePoint::new(&[1.0, 0.37 * k as f64]).unwrap()).collect();
        let r = cohomological_residual(&mu, &psi, 0.0, &xs).unwrap();
        assert!(r.max_abs < 1e-12);
    }

    #[test]
    fn log_regularity_examples() {
        let x = ProjectivePoint::basis(2, 0);
        let y = DualProjectivePoint::basis(2, 0);
        assert_eq!(log_regularity_integral(&EmpiricalMeasure::dirac(x.clone()), &y, 2.0).unwrap(), LogIntegral::Finite(0.0));

        let pts = start_cloud(2, 100_000).iter().map(|v| ProjectivePoint::new(v).unwrap()).collect();
        let uniform = EmpiricalMeasure::uniform(pts).unwrap();
        for t in [0.0f64, 0.4, 2.0] {
            let y = DualProjectivePoint::new(&[t.cos(), t.sin()]).unwrap();
            let v = log_regularity_integral(&uniform, &y, 2.0).unwrap().value();
            assert!((v - LN_2).abs() < 1e-3, "{t}: {v}");
        }

        let orth = EmpiricalMeasure::uniform(vec![ProjectivePoint::basis(2, 1), x]).unwrap();
        assert_eq!(log_regularity_integral(&orth, &y, 2.0).unwrap(), LogIntegral::Infinite);
        assert!(log_regularity_estimate(&orth, &y, 2.0).unwrap().is_none());
        assert!(log_regularity_integral(&orth, &y, 1.0).is_err());
    }

    #[test]
    fn corrector_identity_on_examples() {
        let g = SquareMatrix::from_rows(&[&[2.0, 1.0], &[-0.5, 0.7]]).unwrap();
        for k in 0..10 {
            let t = 0.3 + k as f64 * PI / 10.0;
            let x = ProjectivePoint::new(&[t.cos(), t.sin()]).unwrap();
            let y = DualProjectivePoint::new(&[(2.0 * t).sin(), 1.0]).unwrap();
            assert!(corrector_identity_gap(&g, &x, &y).unwrap() < 1e-12);
        }
    }

    #[test]
    fn csv_export_has_header_and_rows() {
        let cloud = EmpiricalMeasure::uniform(vec![ProjectivePoint::basis(2, 0), ProjectivePoint::basis(2, 1)]).unwrap();
        let mut buf = Vec::new();
        cloud.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "x0,x1,weight");
        assert_eq!(lines[1], "1.0000000000000000e0,0.0000000000000000e0,5.0000000000000000e-1");
        assert_eq!(lines.len(), 3);
    }
}
