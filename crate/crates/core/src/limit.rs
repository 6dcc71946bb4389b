//! Limit theorems for random matrix products: Lyapunov exponents, central
//! limit experiments for the norm cocycle and the Cartan projection, variance
//! estimation, a law-of-the-iterated-logarithm diagnostic and large-deviation
//! curves.

use rayon::prelude::*;

use crate::cocycle::{norm_cocycle, to_unimodular, FrameWalk, VectorWalk};
use crate::error::{Error, Result};
use crate::group::{GeneratorMeasure, WalkSampler};
use crate::linalg::{exterior_square, ProjectivePoint, SquareMatrix};
use crate::rng::derive_seed;
use crate::stationary::{psi_eval, EmpiricalMeasure, PsiFunction};
use crate::stats::{
    covariance_fit, gaussian_cdf, ks_statistic, mean_var, variance_halfwidth, CovarianceFit, Ecdf, Estimate,
    Reference, Z95,
};

/// Sample variance below which a CLT limit is reported as degenerate.
pub const DEGENERATE_VAR: f64 = 1e-12;
pub const LIL_SLACK: f64 = 0.3;
pub const LIL_SLACK_LOW: f64 = 0.3;
/// Absolute floor for agreement checks between quantities that are both
/// exactly zero in exact arithmetic.
pub const ROUNDOFF_FLOOR: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq)]
pub struct LyapunovEstimate {
    pub lambda1: f64,
    pub ci_halfwidth: f64,
    pub lambda2: Option<f64>,
    pub lambda2_ci: Option<f64>,
    /// `lambda1 + lambda2` from the exterior-square norm, with its half-width.
    pub top_two_sum: Option<Estimate>,
    /// `lambda1 - lambda2` with its half-width.
    pub gap: Option<Estimate>,
    pub n: usize,
    pub replicas: usize,
    pub seed: u64,
}

impl LyapunovEstimate {
    pub fn top(&self) -> Estimate {
        Estimate { value: self.lambda1, ci_halfwidth: self.ci_halfwidth }
    }
}

fn estimate(values: &[f64]) -> Result<Estimate> {
    match values.len() {
        0 => Err(Error::EmptySample),
        1 => Ok(Estimate { value: values[0], ci_halfwidth: 0.0 }),
        _ => Estimate::of_mean(values),
    }
}

fn check_run(n: usize, replicas: usize) -> Result<()> {
    if n == 0 || replicas == 0 {
        return Err(Error::InvalidParameter("need n >= 1 and at least one replica".into()));
    }
    Ok(())
}

/// Mean over replicas of `log |b_n ... b_1| / n`.
pub fn lyapunov_top(mu: &GeneratorMeasure, n: usize, replicas: usize, seed: u64) -> Result<LyapunovEstimate> {
    check_run(n, replicas)?;
    let stream_seed = derive_seed(seed, "lyapunov");
    let rates: Vec<f64> = (0..replicas as u64)
        .into_par_iter()
        .map(|r| {
            let mut stream = WalkSampler::new(mu, stream_seed, r).stream();
            let mut walk = FrameWalk::new(mu.dim());
            for _ in 0..n {
                walk.step(stream.next_atom());
            }
            walk.log_norm() / n as f64
        })
        .collect();
    let e = estimate(&rates)?;
    Ok(LyapunovEstimate {
        lambda1: e.value,
        ci_halfwidth: e.ci_halfwidth,
        lambda2: None,
        lambda2_ci: None,
        top_two_sum: None,
        gap: None,
        n,
        replicas,
        seed,
    })
}

/// The image of `mu` under `g -> wedge^2 g`.
pub fn exterior_square_measure(mu: &GeneratorMeasure) -> Result<GeneratorMeasure> {
    mu.map_atoms(exterior_square)
}

/// `lambda1` and `lambda2`, the latter as `lim log(|wedge^2 M| / |M|) / n`,
/// both read off one pair of walks per replica driven by the same word.
pub fn lyapunov_pair(mu: &GeneratorMeasure, n: usize, replicas: usize, seed: u64) -> Result<LyapunovEstimate> {
    check_run(n, replicas)?;
    if mu.dim() < 2 {
        return Err(Error::Dimension("lambda2 needs dimension >= 2".into()));
    }
    let wedge = exterior_square_measure(mu)?;
    let stream_seed = derive_seed(seed, "lyapunov");
    let per_replica: Vec<(f64, f64)> = (0..replicas as u64)
        .into_par_iter()
        .map(|r| {
            let mut stream = WalkSampler::new(mu, stream_seed, r).stream();
            let mut walk = FrameWalk::new(mu.dim());
            let mut wedge_walk = FrameWalk::new(wedge.dim());
            for _ in 0..n {
                let i = stream.next_index();
                walk.step(&mu.atoms()[i]);
                wedge_walk.step(&wedge.atoms()[i]);
            }
            (walk.log_norm() / n as f64, wedge_walk.log_norm() / n as f64)
        })
        .collect();
    let top: Vec<f64> = per_replica.iter().map(|p| p.0).collect();
    let sum: Vec<f64> = per_replica.iter().map(|p| p.1).collect();
    let second: Vec<f64> = per_replica.iter().map(|p| p.1 - p.0).collect();
    let gap: Vec<f64> = per_replica.iter().map(|p| 2.0 * p.0 - p.1).collect();
    let (top, second) = (estimate(&top)?, estimate(&second)?);
    Ok(LyapunovEstimate {
        lambda1: top.value,
        ci_halfwidth: top.ci_halfwidth,
        lambda2: Some(second.value),
        lambda2_ci: Some(second.ci_halfwidth),
        top_two_sum: Some(estimate(&sum)?),
        gap: Some(estimate(&gap)?),
        n,
        replicas,
        seed,
    })
}

/// `lambda1` from a run independent of every CLT sample stream, for use as the
/// centering constant.
pub fn plug_in_lambda1(mu: &GeneratorMeasure, n: usize, replicas: usize, seed: u64) -> Result<Estimate> {
    lyapunov_top(mu, n, replicas, derive_seed(seed, "plug-in")).map(|e| e.top())
}

/// What is summed along the walk.
#[derive(Clone, Debug, PartialEq)]
pub enum Observable {
    /// `log |b_n ... b_1|`.
    Norm,
    /// `sigma(b_n ... b_1, x)`.
    Cocycle(ProjectivePoint),
}

#[derive(Clone, Debug, PartialEq)]
pub struct CltReport {
    pub n: usize,
    pub seed: u64,
    pub lambda1: f64,
    /// Unnormalized values `log |b_n ... b_1|` or `sigma(b_n ... b_1, x)`.
    pub raw: Vec<f64>,
    /// `(raw - n lambda1) / sqrt(n)`.
    pub samples: Vec<f64>,
    pub fitted_mean: f64,
    pub fitted_var: f64,
    pub ks_vs_fitted_gaussian: f64,
    pub ks_vs_reference: Option<f64>,
    pub degenerate: bool,
}

fn sample_observable(mu: &GeneratorMeasure, observable: &Observable, n: usize, stream_seed: u64, i: u64) -> f64 {
    let mut stream = WalkSampler::new(mu, stream_seed, i).stream();
    match observable {
        Observable::Norm => {
            let mut walk = FrameWalk::new(mu.dim());
            for _ in 0..n {
                walk.step(stream.next_atom());
            }
            walk.log_norm()
        }
        Observable::Cocycle(x) => {
            let mut walk = VectorWalk::new(x.rep());
            for _ in 0..n {
                walk.step(stream.next_atom());
            }
            walk.log_norm()
        }
    }
}

/// `samples` independent draws of `(value - n lambda1) / sqrt(n)` with a
/// Gaussian fit and KS distances.
pub fn clt_experiment(
    mu: &GeneratorMeasure,
    observable: &Observable,
    n: usize,
    samples: usize,
    lambda1: f64,
    seed: u64,
    reference: Option<&Reference>,
) -> Result<CltReport> {
    check_run(n, samples)?;
    if samples < 2 {
        return Err(Error::InvalidParameter("a Gaussian fit needs at least 2 samples".into()));
    }
    if let Observable::Cocycle(x) = observable {
        crate::linalg::check_dim(mu.dim(), x.dim())?;
    }
    if let Some(r) = reference {
        r.validate()?;
    }
    let stream_seed = derive_seed(seed, "clt");
    let raw: Vec<f64> = (0..samples as u64)
        .into_par_iter()
        .map(|i| sample_observable(mu, observable, n, stream_seed, i))
        .collect();
    let root = (n as f64).sqrt();
    let normalized: Vec<f64> = raw.iter().map(|v| (v - n as f64 * lambda1) / root).collect();
    let (fitted_mean, fitted_var) = mean_var(&normalized)?;
    let degenerate = fitted_var < DEGENERATE_VAR;
    let ecdf = Ecdf::new(&normalized)?;
    let fit_var = if degenerate { 0.0 } else { fitted_var };
    let ks_vs_fitted_gaussian = ks_statistic(&ecdf, |t| gaussian_cdf(t, fitted_mean, fit_var).unwrap_or(f64::NAN));
    let ks_vs_reference = reference.map(|r| ks_statistic(&ecdf, |t| r.cdf(t)));
    Ok(CltReport {
        n,
        seed,
        lambda1,
        raw,
        samples: normalized,
        fitted_mean,
        fitted_var,
        ks_vs_fitted_gaussian,
        ks_vs_reference,
        degenerate,
    })
}

/// Sample variance of the normalized sums.
pub fn variance_estimate(report: &CltReport) -> Estimate {
    let n = report.samples.len();
    Estimate { value: report.fitted_var, ci_halfwidth: variance_halfwidth(report.fitted_var, n) }
}

/// `int sum_i w_i (sigma(g_i, x) - psi(x) + psi(g_i x) - lambda1)^2 dnu(x)`
/// over an equal-weight stationary cloud, with a half-width from the spread
/// across particles.
pub fn variance_via_corrector(
    mu: &GeneratorMeasure,
    psi: &PsiFunction,
    lambda1: f64,
    cloud: &EmpiricalMeasure<ProjectivePoint>,
) -> Result<Estimate> {
    let values = cloud
        .particles()
        .par_iter()
        .map(|x| {
            let psi_x = psi_eval(psi, x)?;
            let mut acc = 0.0;
            for (g, w) in mu.atoms().iter().zip(mu.weights()) {
                let centered = norm_cocycle(g, x)? - psi_x + psi_eval(psi, &x.apply(g)?)? - lambda1;
                acc += w * centered * centered;
            }
            Ok(acc)
        })
        .collect::<Result<Vec<f64>>>()?;
    let w = cloud.weights();
    let mean: f64 = values.iter().zip(w).map(|(v, w)| v * w).sum();
    let spread: f64 = values.iter().zip(w).map(|(v, w)| w * (v - mean).powi(2)).sum();
    Ok(Estimate { value: mean, ci_halfwidth: Z95 * (spread / values.len() as f64).sqrt() })
}

#[derive(Clone, Debug, PartialEq)]
pub struct LilReport {
    pub n_max: usize,
    pub phi: f64,
    pub lambda1: f64,
    /// `(k, (S_k - k lambda1) / sqrt(2 phi k log log k))` at log-spaced `k`.
    pub record: Vec<(usize, f64)>,
    pub window_start: usize,
    pub window_max: f64,
    pub window_min: f64,
    /// Extrema inside `[-1 - LIL_SLACK, 1 + LIL_SLACK]` and
    /// `max |value| >= 1 - LIL_SLACK_LOW` over the window. Qualitative only.
    pub consistent: bool,
}

/// Index from which `log log k` is at least 1/2, keeping the normalization
/// away from its singularity.
const LIL_FIRST_INDEX: usize = 6;
const LIL_RECORD_POINTS: usize = 400;

/// One trajectory of `sigma(b_k ... b_1, x) - k lambda1`, normalized by the
/// iterated-logarithm envelope.
pub fn lil_diagnostic(
    mu: &GeneratorMeasure,
    x: &ProjectivePoint,
    lambda1: f64,
    phi: f64,
    n_max: usize,
    seed: u64,
) -> Result<LilReport> {
    if !(phi > 0.0) {
        return Err(Error::InvalidParameter(format!("variance {phi} must be > 0")));
    }
    if n_max < 1000 {
        return Err(Error::InvalidParameter("n_max must be at least 1000".into()));
    }
    crate::linalg::check_dim(mu.dim(), x.dim())?;
    let mut stream = WalkSampler::new(mu, derive_seed(seed, "lil"), 0).stream();
    let mut walk = VectorWalk::new(x.rep());
    let window_start = n_max / 10;
    let ratio = (n_max as f64 / LIL_FIRST_INDEX as f64).powf(1.0 / LIL_RECORD_POINTS as f64);
    let mut next_record = LIL_FIRST_INDEX as f64;
    let mut record = Vec::new();
    let (mut window_max, mut window_min) = (f64::NEG_INFINITY, f64::INFINITY);
    for k in 1..=n_max {
        walk.step(stream.next_atom());
        if k < LIL_FIRST_INDEX {
            continue;
        }
        let kf = k as f64;
        let value = (walk.log_norm() - kf * lambda1) / (2.0 * phi * kf * kf.ln().ln()).sqrt();
        if kf >= next_record || k == n_max {
            record.push((k, value));
            while next_record <= kf {
                next_record *= ratio;
            }
        }
        if k >= window_start {
            window_max = window_max.max(value);
            window_min = window_min.min(value);
        }
    }
    let consistent = window_max <= 1.0 + LIL_SLACK
        && window_min >= -1.0 - LIL_SLACK
        && window_max.max(-window_min) >= 1.0 - LIL_SLACK_LOW;
    Ok(LilReport { n_max, phi, lambda1, record, window_start, window_max, window_min, consistent })
}

#[derive(Clone, Debug, PartialEq)]
pub struct DeviationCurve {
    pub eps: f64,
    pub lambda1: f64,
    pub replicas: usize,
    pub schedule: Vec<usize>,
    pub frequencies: Vec<f64>,
    /// Least-squares decay rate of the nonzero log-frequencies; `None` when
    /// fewer than three are nonzero.
    pub decay_rate: Option<f64>,
}

impl DeviationCurve {
    pub fn is_nonincreasing(&self) -> bool {
        self.frequencies.windows(2).all(|w| w[1] <= w[0])
    }
}

/// Frequencies of `|log |b_n ... b_1| - n lambda1| >= eps n` along each
/// replica, read at every scheduled `n`.
pub fn large_deviation_curve(
    mu: &GeneratorMeasure,
    lambda1: f64,
    eps: f64,
    schedule: &[usize],
    replicas: usize,
    seed: u64,
) -> Result<DeviationCurve> {
    if !(eps > 0.0) || replicas == 0 {
        return Err(Error::InvalidParameter("need eps > 0 and replicas >= 1".into()));
    }
    if schedule.is_empty() || schedule[0] == 0 || schedule.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidParameter("schedule must be nonempty, positive and increasing".into()));
    }
    let stream_seed = derive_seed(seed, "large-deviation");
    let hits: Vec<Vec<bool>> = (0..replicas as u64)
        .into_par_iter()
        .map(|r| {
            let mut stream = WalkSampler::new(mu, stream_seed, r).stream();
            let mut walk = FrameWalk::new(mu.dim());
            schedule
                .iter()
                .map(|&n| {
                    while walk.steps() < n {
                        walk.step(stream.next_atom());
                    }
                    (walk.log_norm() - n as f64 * lambda1).abs() >= eps * n as f64
                })
                .collect()
        })
        .collect();
    let frequencies: Vec<f64> = (0..schedule.len())
        .map(|k| hits.iter().filter(|h| h[k]).count() as f64 / replicas as f64)
        .collect();
    let points: Vec<(f64, f64)> = schedule
        .iter()
        .zip(&frequencies)
        .filter(|(_, f)| **f > 0.0)
        .map(|(&n, f)| (n as f64, f.ln()))
        .collect();
    let decay_rate = (points.len() >= 3).then(|| {
        let m = points.len() as f64;
        let mx = points.iter().map(|p| p.0).sum::<f64>() / m;
        let my = points.iter().map(|p| p.1).sum::<f64>() / m;
        let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
        let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
        -sxy / sxx
    });
    Ok(DeviationCurve { eps, lambda1, replicas, schedule: schedule.to_vec(), frequencies, decay_rate })
}

#[derive(Clone, Debug, PartialEq)]
pub struct CartanCltReport {
    pub n: usize,
    pub seed: u64,
    /// Cartan projection `kappa(b_n ... b_1)` of each sample.
    pub raw: Vec<Vec<f64>>,
    /// `(kappa - n lambda) / sqrt(n)`.
    pub samples: Vec<Vec<f64>>,
    /// Empirical mean of `kappa / n`, per coordinate.
    pub lambda: Vec<Estimate>,
    /// `lambda_i - lambda_{i+1}`.
    pub gaps: Vec<Estimate>,
    pub max_coordinate_sum: f64,
    pub covariance: CovarianceFit,
    /// Eigenvalues of the covariance restricted to the sum-zero hyperplane,
    /// nonincreasing.
    pub restricted_eigenvalues: Vec<Estimate>,
}

/// Orthonormal basis of `{v : sum v_i = 0}` in `R^d` (Helmert contrasts).
pub fn sum_zero_basis(d: usize) -> Vec<Vec<f64>> {
    (1..d)
        .map(|k| {
            let scale = 1.0 / ((k * (k + 1)) as f64).sqrt();
            (0..d)
                .map(|i| match i.cmp(&k) {
                    std::cmp::Ordering::Less => scale,
                    std::cmp::Ordering::Equal => -(k as f64) * scale,
                    std::cmp::Ordering::Greater => 0.0,
                })
                .collect()
        })
        .collect()
}

/// Vector CLT for the Cartan projection of a walk on `SL(d, R)`.
pub fn multidim_clt_cartan(mu: &GeneratorMeasure, n: usize, samples: usize, seed: u64) -> Result<CartanCltReport> {
    check_run(n, samples)?;
    if samples < 2 || mu.dim() < 2 {
        return Err(Error::InvalidParameter("need d >= 2 and at least 2 samples".into()));
    }
    let mu = mu.map_atoms(to_unimodular)?;
    let d = mu.dim();
    let stream_seed = derive_seed(seed, "clt");
    let raw: Vec<Vec<f64>> = (0..samples as u64)
        .into_par_iter()
        .map(|i| {
            let mut stream = WalkSampler::new(&mu, stream_seed, i).stream();
            let mut walk = FrameWalk::new(d);
            for _ in 0..n {
                walk.step(stream.next_atom());
            }
            walk.log_singular_values()
        })
        .collect();
    let nf = n as f64;
    let lambda = (0..d)
        .map(|c| estimate(&raw.iter().map(|k| k[c] / nf).collect::<Vec<_>>()))
        .collect::<Result<Vec<_>>>()?;
    let gaps = (0..d - 1)
        .map(|c| estimate(&raw.iter().map(|k| (k[c] - k[c + 1]) / nf).collect::<Vec<_>>()))
        .collect::<Result<Vec<_>>>()?;
    let root = nf.sqrt();
    let normalized: Vec<Vec<f64>> = raw
        .iter()
        .map(|k| k.iter().zip(&lambda).map(|(v, l)| (v - nf * l.value) / root).collect())
        .collect();
    let max_coordinate_sum = normalized.iter().map(|s| s.iter().sum::<f64>().abs()).fold(0.0, f64::max);
    let covariance = covariance_fit(&normalized)?;
    let basis = sum_zero_basis(d);
    let projected: Vec<Vec<f64>> = normalized
        .iter()
        .map(|s| basis.iter().map(|b| b.iter().zip(s).map(|(x, y)| x * y).sum()).collect())
        .collect();
    let restricted_eigenvalues = covariance_fit(&projected)?
        .eigenvalues
        .iter()
        .map(|&ev| Estimate { value: ev, ci_halfwidth: variance_halfwidth(ev.max(0.0), samples) })
        .collect();
    Ok(CartanCltReport {
        n,
        seed,
        raw,
        samples: normalized,
        lambda,
        gaps,
        max_coordinate_sum,
        covariance,
        restricted_eigenvalues,
    })
}

/// `sigma^eps diag(e^x, e^{-x})` for `x = +-jump`, `eps in {0, 1}` and
/// `sigma` the quarter turn, all four equally likely. The walk preserves the
/// pair of coordinate axes, so it is irreducible but not strongly irreducible:
/// `b_n ... b_1 = sigma^{eta_n} diag(e^{S_n}, e^{-S_n})` for a simple random
/// walk `S_n` with steps `+-jump`, and `log |b_n ... b_1| = |S_n|` has a folded
/// Gaussian limit.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AxisSwapExample {
    pub jump: f64,
}

impl AxisSwapExample {
    pub fn new(jump: f64) -> Result<Self> {
        if !(jump > 0.0 && jump.is_finite()) {
            return Err(Error::InvalidParameter(format!("jump {jump} must be finite and > 0")));
        }
        Ok(Self { jump })
    }

    /// Atom `2 * swap + (0 for +jump, 1 for -jump)`.
    pub fn measure(&self) -> GeneratorMeasure {
        let quarter = SquareMatrix::from_rows(&[&[0.0, -1.0], &[1.0, 0.0]]).expect("finite");
        let mut atoms = Vec::with_capacity(4);
        for swap in [false, true] {
            for x in [self.jump, -self.jump] {
                let d = SquareMatrix::diag(&[x.exp(), (-x).exp()]);
                atoms.push(if swap { quarter.mul(&d) } else { d });
            }
        }
        GeneratorMeasure::new(atoms, vec![0.25; 4]).expect("four equal weights")
    }

    /// `|S_n|` for the word `indices` (as drawn from [`Self::measure`]).
    pub fn scalar_path(&self, indices: &[usize]) -> f64 {
        let mut s = 0.0;
        let mut flipped = false;
        for &i in indices {
            let x = if i % 2 == 0 { self.jump } else { -self.jump };
            s += if flipped { -x } else { x };
            flipped ^= i >= 2;
        }
        s.abs()
    }

    /// Law of `|S_n| / sqrt(n)` in the limit.
    pub fn reference(&self) -> Reference {
        Reference::FoldedGaussian { var: self.jump * self.jump }
    }
}

/// `1/2 delta_{[[1,1],[0,1]]} + 1/2 delta_{[[1,0],[1,1]]}`, generating a free
/// semigroup of `SL(2, Z)`.
pub fn free_semigroup_pair() -> GeneratorMeasure {
    GeneratorMeasure::uniform(vec![
        SquareMatrix::from_rows(&[&[1.0, 1.0], &[0.0, 1.0]]).expect("finite"),
        SquareMatrix::from_rows(&[&[1.0, 0.0], &[1.0, 1.0]]).expect("finite"),
    ])
    .expect("two atoms")
}

/// Two nonnegative matrices of `SL(3, Z)`, equally weighted.
pub fn positive_sl3_pair() -> GeneratorMeasure {
    GeneratorMeasure::uniform(vec![
        SquareMatrix::from_rows(&[&[1.0, 1.0, 0.0], &[0.0, 1.0, 1.0], &[1.0, 1.0, 1.0]]).expect("finite"),
        SquareMatrix::from_rows(&[&[1.0, 0.0, 1.0], &[1.0, 1.0, 0.0], &[1.0, 1.0, 1.0]]).expect("finite"),
    ])
    .expect("two atoms")
}

/// The scalar walk with atoms `e^{jump}` and `e^{-jump}`.
pub fn scalar_coin(jump: f64) -> GeneratorMeasure {
    GeneratorMeasure::uniform(vec![SquareMatrix::diag(&[jump.exp()]), SquareMatrix::diag(&[(-jump).exp()])])
        .expect("two atoms")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::eigenvalue_moduli;
    use std::f64::consts::LN_2;

    #[test]
    fn isometries_have_zero_exponent() {
        let mu = GeneratorMeasure::dirac(SquareMatrix::rotation(0.7)).unwrap();
        let e = lyapunov_top(&mu, 500, 4, 1).unwrap();
        assert!(e.lambda1.abs() < 1e-9);
    }

    #[test]
    fn gelfand_formula() {
        let g = SquareMatrix::from_rows(&[&[1.0, 2.0, 0.0], &[0.0, 1.5, -1.0], &[0.3, 0.0, 0.5]]).unwrap();
        let rho = eigenvalue_moduli(&g)[0];
        let e = lyapunov_top(&GeneratorMeasure::dirac(g).unwrap(), 2000, 1, 1).unwrap();
        assert!((e.lambda1 - rho.ln()).abs() < 1e-3, "{} vs {}", e.lambda1, rho.ln());
    }

    #[test]
    fn diagonal_pair() {
        let mu = GeneratorMeasure::dirac(SquareMatrix::diag(&[2.0, 0.5])).unwrap();
        let e = lyapunov_pair(&mu, 100, 2, 1).unwrap();
        assert!((e.lambda1 - LN_2).abs() < 1e-12);
        assert!((e.lambda2.unwrap() + LN_2).abs() < 1e-12);
    }

    #[test]
    fn free_pair_is_simple_with_zero_trace() {
        let e = lyapunov_pair(&free_semigroup_pair(), 500, 200, 7).unwrap();
        let sum = e.top_two_sum.unwrap();
        assert!(sum.value.abs() <= 3.0 * sum.ci_halfwidth + ROUNDOFF_FLOOR);
        let gap = e.gap.unwrap();
        assert!(gap.value > 3.0 * gap.ci_halfwidth && gap.value > 0.0);
    }

    #[test]
    fn deterministic_walk_is_degenerate() {
        let mu = GeneratorMeasure::dirac(SquareMatrix::diag(&[2.0, 0.5])).unwrap();
        let r = clt_experiment(&mu, &Observable::Norm, 50, 20, LN_2, 1, None).unwrap();
        assert!(r.degenerate);
        assert!(variance_estimate(&r).value < 1e-12);
    }

    #[test]
    fn axis_swap_matrix_and_scalar_paths_agree() {
        let ex = AxisSwapExample::new(1.0).unwrap();
        let mu = ex.measure();
        for s in 0..20 {
            let word = WalkSampler::new(&mu, 5, s).sample_word(300);
            let mut walk = FrameWalk::new(2);
            for &i in &word.indices {
                walk.step(&mu.atoms()[i]);
            }
            assert!((walk.log_norm() - ex.scalar_path(&word.indices)).abs() < 1e-10);
        }
    }

    #[test]
    fn sum_zero_basis_is_orthonormal() {
        for d in 2..6 {
            let b = sum_zero_basis(d);
            for (i, u) in b.iter().enumerate() {
                assert!(u.iter().sum::<f64>().abs() < 1e-14);
                for (j, v) in b.iter().enumerate() {
                    let ip: f64 = u.iter().zip(v).map(|(a, b)| a * b).sum();
                    assert!((ip - f64::from(u8::from(i == j))).abs() < 1e-14);
                }
            }
        }
    }

    #[test]
    fn cartan_clt_sums_vanish_and_first_coordinate_is_the_norm() {
        let mu = positive_sl3_pair();
        let r = multidim_clt_cartan(&mu, 200, 50, 3).unwrap();
        assert!(r.max_coordinate_sum < 1e-8);
        let scalar = clt_experiment(&mu, &Observable::Norm, 200, 50, 0.0, 3, None).unwrap();
        for (k, s) in r.raw.iter().zip(&scalar.raw) {
            assert!((k[0] - s).abs() < 1e-9);
        }
        let bad = GeneratorMeasure::dirac(SquareMatrix::diag(&[2.0, 1.0, 1.0])).unwrap();
        assert!(matches!(multidim_clt_cartan(&bad, 10, 5, 1), Err(Error::NotUnimodular { .. })));
    }

    #[test]
    fn lil_mirror_symmetry() {
        let mu = scalar_coin(1.0);
        let swapped = GeneratorMeasure::uniform(mu.atoms().iter().rev().cloned().collect()).unwrap();
        let x = ProjectivePoint::basis(1, 0);
        let a = lil_diagnostic(&mu, &x, 0.0, 1.0, 5000, 11).unwrap();
        let b = lil_diagnostic(&swapped, &x, 0.0, 1.0, 5000, 11).unwrap();
        for ((k1, v1), (k2, v2)) in a.record.iter().zip(&b.record) {
            assert_eq!(k1, k2);
            assert!((v1 + v2).abs() < 1e-12);
        }
        assert!(lil_diagnostic(&mu, &x, 0.0, 0.0, 5000, 1).is_err());
        let still = GeneratorMeasure::dirac(SquareMatrix::rotation(0.3)).unwrap();
        let z = lil_diagnostic(&still, &ProjectivePoint::basis(2, 0), 0.0, 1.0, 1000, 1).unwrap();
        assert!(z.record.iter().all(|(_, v)| v.abs() < 1e-12));
    }

    #[test]
    fn large_deviations_vanish_beyond_the_support() {
        let mu = free_semigroup_pair();
        // log N of each atom is log golden ratio < 0.49
        let c = large_deviation_curve(&mu, 0.0, 1.0, &[16, 32, 64], 200, 1).unwrap();
        assert!(c.frequencies.iter().all(|f| *f == 0.0));
        assert_eq!(c.decay_rate, None);
    }
}
