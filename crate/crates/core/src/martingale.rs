//! Martingale-difference streams and the empirical checks built on them:
//! Azuma's tail bound, Baum-Katz type weighted tail sums, and Brown's
//! triangular-array central limit theorem.

use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::group::GeneratorMeasure;
use crate::linalg::{mul_vec_into, norm, ProjectivePoint};
use crate::rng::{derive_seed, stream_rng, StreamRng};
use crate::stats::{binomial_halfwidth, gaussian_cdf, ks_statistic, Ecdf};

pub const DEFAULT_REPLICAS: usize = 10_000;
/// Summability heuristic: the last block increment must fall below this.
pub const INCREMENT_TOL: f64 = 1e-3;
pub const LINDEBERG_TOL: f64 = 1e-3;

/// `{2^4, 2^5, ..., 2^12}`.
pub fn default_schedule() -> Vec<usize> {
    (4..=12).map(|k| 1usize << k).collect()
}

/// How the differences `phi_n` are generated. Every kind satisfies
/// `E(phi_n | past) = 0` by construction.
#[derive(Clone, Debug, PartialEq)]
pub enum StreamKind {
    Zero,
    /// Fair `+-bound` coin flips.
    IidBounded { bound: f64 },
    /// `N(0, sd^2)` draws.
    IidSquareIntegrable { sd: f64 },
    /// Independent symmetric `phi_n` in `{-3^i, 0, 3^i}` for `3^{i-1} < n <= 3^i`,
    /// with `P(|phi_n| = 3^i) = 3^{-p i}`.
    Counterexample3i { p: f64 },
    /// `phi_n = sigma(b_n, x_{n-1}) - drift(x_{n-1})` along a matrix walk from
    /// `start`.
    WalkInduced { measure: GeneratorMeasure, start: ProjectivePoint },
}

#[derive(Clone, Debug, PartialEq)]
pub struct DifferenceStream {
    pub kind: StreamKind,
    pub seed: u64,
}

impl DifferenceStream {
    pub fn new(kind: StreamKind, seed: u64) -> Result<Self> {
        match &kind {
            StreamKind::IidBounded { bound } if !(*bound >= 0.0 && bound.is_finite()) => {
                Err(Error::InvalidParameter(format!("bound {bound} must be finite and >= 0")))
            }
            StreamKind::IidSquareIntegrable { sd } if !(*sd >= 0.0 && sd.is_finite()) => {
                Err(Error::InvalidParameter(format!("sd {sd} must be finite and >= 0")))
            }
            StreamKind::Counterexample3i { p } if !(*p > 1.0) => {
                Err(Error::InvalidParameter(format!("p = {p} must be > 1")))
            }
            StreamKind::WalkInduced { measure, start } if measure.dim() != start.dim() => {
                Err(Error::DimensionMismatch { expected: measure.dim(), found: start.dim() })
            }
            _ => Ok(Self { kind, seed }),
        }
    }

    /// A uniform bound `|phi_n| <= a`, when the kind has one.
    pub fn bound(&self) -> Option<f64> {
        match &self.kind {
            StreamKind::Zero => Some(0.0),
            StreamKind::IidBounded { bound } => Some(*bound),
            StreamKind::IidSquareIntegrable { sd } if *sd == 0.0 => Some(0.0),
            StreamKind::IidSquareIntegrable { .. } | StreamKind::Counterexample3i { .. } => None,
            StreamKind::WalkInduced { measure, .. } => {
                let m = measure
                    .atoms()
                    .iter()
                    .map(|g| crate::cocycle::sup_norm(g).unwrap_or(f64::INFINITY))
                    .fold(0.0, f64::max);
                Some(2.0 * m)
            }
        }
    }

    /// The path of replica `r`.
    pub fn replica(&self, r: u64) -> StreamPath<'_> {
        let v = match &self.kind {
            StreamKind::WalkInduced { start, .. } => start.rep().to_vec(),
            _ => Vec::new(),
        };
        StreamPath {
            kind: &self.kind,
            rng: stream_rng(derive_seed(self.seed, "martingale"), r),
            n: 0,
            block: 1,
            block_prob: 1.0,
            tmp: vec![0.0; v.len()],
            v,
        }
    }

    /// `S_n` of replica `r` at each (increasing) scheduled `n`.
    pub fn partial_sums_at(&self, r: u64, schedule: &[usize]) -> Vec<f64> {
        let mut path = self.replica(r);
        let mut s = 0.0;
        let mut done = 0;
        schedule
            .iter()
            .map(|&n| {
                while done < n {
                    s += path.next_value();
                    done += 1;
                }
                s
            })
            .collect()
    }
}

pub struct StreamPath<'a> {
    kind: &'a StreamKind,
    rng: StreamRng,
    n: u64,
    /// `3^i` for the current block `3^{i-1} < n <= 3^i`, and `3^{-p i}`.
    block: u64,
    block_prob: f64,
    v: Vec<f64>,
    tmp: Vec<f64>,
}

impl StreamPath<'_> {
    pub fn next_value(&mut self) -> f64 {
        self.n += 1;
        match self.kind {
            StreamKind::Zero => 0.0,
            StreamKind::IidBounded { bound } => {
                if self.rng.random::<bool>() {
                    *bound
                } else {
                    -*bound
                }
            }
            StreamKind::IidSquareIntegrable { sd } => {
                let z: f64 = self.rng.sample(StandardNormal);
                sd * z
            }
            StreamKind::Counterexample3i { p } => {
                if self.n > self.block {
                    self.block *= 3;
                    self.block_prob *= 3f64.powf(-p);
                }
                let prob = self.block_prob;
                let u: f64 = self.rng.random();
                if u < prob / 2.0 {
                    self.block as f64
                } else if u < prob {
                    -(self.block as f64)
                } else {
                    0.0
                }
            }
            StreamKind::WalkInduced { measure, .. } => {
                let d = self.v.len();
                let mut drift = 0.0;
                for (g, w) in measure.atoms().iter().zip(measure.weights()) {
                    mul_vec_into(g.as_slice(), d, &self.v, &mut self.tmp);
                    drift += w * norm(&self.tmp).ln();
                }
                let u: f64 = self.rng.random();
                let g = &measure.atoms()[measure.index_for(u)];
                mul_vec_into(g.as_slice(), d, &self.v, &mut self.tmp);
                let r = norm(&self.tmp);
                for (a, b) in self.v.iter_mut().zip(&self.tmp) {
                    *a = b / r;
                }
                r.ln() - drift
            }
        }
    }
}

/// `exp(-n eps^2 / (2 a^2))`.
pub fn azuma_bound(n: usize, eps: f64, a: f64) -> Result<f64> {
    if !(a > 0.0) {
        return Err(Error::InvalidParameter(format!("bound a = {a} must be > 0")));
    }
    if !(eps >= 0.0) || n == 0 {
        return Err(Error::InvalidParameter("need n >= 1 and eps >= 0".into()));
    }
    Ok((-(n as f64) * eps * eps / (2.0 * a * a)).exp())
}

#[derive(Clone, Debug, PartialEq)]
pub struct AzumaRow {
    pub n: usize,
    pub frequency: f64,
    pub bound: f64,
    pub ci_halfwidth: f64,
    /// `frequency <= bound + 3 * ci_halfwidth`.
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct AzumaReport {
    pub eps: f64,
    pub a: f64,
    pub trials: usize,
    pub rows: Vec<AzumaRow>,
}

impl AzumaReport {
    pub fn all_hold(&self) -> bool {
        self.rows.iter().all(|r| r.holds)
    }
}

fn check_schedule(schedule: &[usize]) -> Result<()> {
    if schedule.is_empty() || schedule[0] == 0 || schedule.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidParameter("schedule must be nonempty, positive and increasing".into()));
    }
    Ok(())
}

/// Tail frequencies of `S_n >= n eps` against Azuma's bound, one trajectory
/// per trial read at every scheduled `n`.
pub fn azuma_check(stream: &DifferenceStream, eps: f64, schedule: &[usize], trials: usize) -> Result<AzumaReport> {
    check_schedule(schedule)?;
    let a = stream
        .bound()
        .filter(|a| *a > 0.0)
        .ok_or_else(|| Error::InvalidParameter("Azuma's bound needs a stream with a positive uniform bound".into()))?;
    let hits = tail_hits(stream, schedule, trials, |s, n| s >= n as f64 * eps);
    let rows = schedule
        .iter()
        .zip(hits)
        .map(|(&n, h)| {
            let frequency = h as f64 / trials as f64;
            let bound = azuma_bound(n, eps, a)?;
            let ci_halfwidth = binomial_halfwidth(frequency, trials);
            Ok(AzumaRow { n, frequency, bound, ci_halfwidth, holds: frequency <= bound + 3.0 * ci_halfwidth })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(AzumaReport { eps, a, trials, rows })
}

fn tail_hits<F>(stream: &DifferenceStream, schedule: &[usize], trials: usize, event: F) -> Vec<usize>
where
    F: Fn(f64, usize) -> bool + Sync,
{
    let per_trial: Vec<Vec<bool>> = (0..trials as u64)
        .into_par_iter()
        .map(|r| {
            stream.partial_sums_at(r, schedule).iter().zip(schedule).map(|(&s, &n)| event(s, n)).collect()
        })
        .collect();
    (0..schedule.len()).map(|k| per_trial.iter().filter(|t| t[k]).count()).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Summability {
    /// The last block increment is below `INCREMENT_TOL`. A heuristic: a
    /// finite simulation cannot prove a series converges.
    Consistent,
    NotConsistent,
}

#[derive(Clone, Debug, PartialEq)]
pub struct WeightedSumReport {
    pub p: f64,
    pub epsilon: f64,
    pub replicas: usize,
    pub schedule: Vec<usize>,
    pub empirical_probs: Vec<f64>,
    /// `(n_k - n_{k-1}) n_k^{p-2} freq(n_k)`: the block of the series
    /// `sum n^{p-2} P(|S_n| > n eps)` ending at `n_k`, with `n_0 = 0`.
    pub increments: Vec<f64>,
    pub weighted_partial_sums: Vec<f64>,
    pub verdict: Summability,
}

impl WeightedSumReport {
    /// Increments are nonincreasing from their peak on.
    pub fn increments_decay(&self) -> bool {
        let peak = self
            .increments
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))
            .map(|(i, _)| i)
            .unwrap_or(0);
        self.increments[peak..].windows(2).all(|w| w[1] <= w[0])
    }

    /// The partial sums strictly increase over the second half of the
    /// schedule and the last increment is above the summability tolerance.
    pub fn keeps_growing(&self) -> bool {
        let half = self.increments.len() / 2;
        self.verdict == Summability::NotConsistent && self.increments[half..].iter().all(|&i| i > INCREMENT_TOL)
    }
}

/// Weighted tail sums `sum n^{p-2} P(|S_n| > n eps)` estimated over
/// `replicas` trajectories.
pub fn baum_katz_sums(
    stream: &DifferenceStream,
    p: f64,
    eps: f64,
    schedule: &[usize],
    replicas: usize,
) -> Result<WeightedSumReport> {
    if !(p > 1.0) || !(eps > 0.0) || replicas == 0 {
        return Err(Error::InvalidParameter("need p > 1, eps > 0 and replicas >= 1".into()));
    }
    check_schedule(schedule)?;
    let hits = tail_hits(stream, schedule, replicas, |s, n| s.abs() > n as f64 * eps);
    let empirical_probs: Vec<f64> = hits.iter().map(|&h| h as f64 / replicas as f64).collect();
    let mut prev = 0usize;
    let increments: Vec<f64> = schedule
        .iter()
        .zip(&empirical_probs)
        .map(|(&n, &f)| {
            let block = (n - prev) as f64;
            prev = n;
            block * (n as f64).powf(p - 2.0) * f
        })
        .collect();
    let weighted_partial_sums: Vec<f64> = increments
        .iter()
        .scan(0.0, |acc, i| {
            *acc += i;
            Some(*acc)
        })
        .collect();
    let verdict = if *increments.last().unwrap_or(&0.0) < INCREMENT_TOL {
        Summability::Consistent
    } else {
        Summability::NotConsistent
    };
    Ok(WeightedSumReport {
        p,
        epsilon: eps,
        replicas,
        schedule: schedule.to_vec(),
        empirical_probs,
        increments,
        weighted_partial_sums,
        verdict,
    })
}

/// Law of a single entry `phi_{n,k}` of a triangular array row, with known
/// conditional moments.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum EntryLaw {
    Zero,
    Gaussian { mean: f64, var: f64 },
    /// `+-scale` with probability 1/2 each.
    Rademacher { scale: f64 },
}

impl EntryLaw {
    pub fn mean(&self) -> f64 {
        match self {
            EntryLaw::Gaussian { mean, .. } => *mean,
            _ => 0.0,
        }
    }

    pub fn second_moment(&self) -> f64 {
        match self {
            EntryLaw::Zero => 0.0,
            EntryLaw::Gaussian { mean, var } => var + mean * mean,
            EntryLaw::Rademacher { scale } => scale * scale,
        }
    }

    /// `E(phi^2 1{|phi| >= eps})` for a centered entry.
    pub fn lindeberg_term(&self, eps: f64) -> f64 {
        match *self {
            EntryLaw::Zero => 0.0,
            EntryLaw::Rademacher { scale } => {
                if scale.abs() >= eps {
                    scale * scale
                } else {
                    0.0
                }
            }
            EntryLaw::Gaussian { var, .. } => {
                if var == 0.0 {
                    return 0.0;
                }
                let a = eps / var.sqrt();
                let tail = 1.0 - gaussian_cdf(a, 0.0, 1.0).unwrap_or(1.0);
                let density = (-0.5 * a * a).exp() / (2.0 * std::f64::consts::PI).sqrt();
                var * (2.0 * tail + 2.0 * a * density)
            }
        }
    }

    fn sample(&self, rng: &mut StreamRng) -> f64 {
        match *self {
            EntryLaw::Zero => 0.0,
            EntryLaw::Gaussian { mean, var } => {
                let z: f64 = rng.sample(StandardNormal);
                mean + var.sqrt() * z
            }
            EntryLaw::Rademacher { scale } => {
                if rng.random::<bool>() {
                    scale
                } else {
                    -scale
                }
            }
        }
    }
}

/// Row `n` of a triangular array, entries `phi_{n,1..p_n}` independent.
#[derive(Clone, Debug, PartialEq)]
pub struct TriangularArray {
    pub entries: Vec<EntryLaw>,
}

impl TriangularArray {
    pub fn iid_gaussian(row_len: usize, total_var: f64) -> Self {
        Self { entries: vec![EntryLaw::Gaussian { mean: 0.0, var: total_var / row_len as f64 }; row_len] }
    }

    pub fn zero(row_len: usize) -> Self {
        Self { entries: vec![EntryLaw::Zero; row_len] }
    }

    /// One `+-1` entry followed by zeros.
    pub fn single_spike(row_len: usize) -> Self {
        let mut entries = vec![EntryLaw::Zero; row_len];
        entries[0] = EntryLaw::Rademacher { scale: 1.0 };
        Self { entries }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BrownReport {
    /// Sum of conditional variances, exact from the entry laws.
    pub w_n: f64,
    pub w_eps_n: f64,
    pub eps: f64,
    pub lindeberg_violated: bool,
    pub ks_vs_gaussian: f64,
    pub degenerate: bool,
    pub row_sums: Vec<f64>,
}

/// Neumaier summation, so that `n` copies of `1/n` add up to 1.
fn compensated_sum(xs: impl Iterator<Item = f64>) -> f64 {
    let (mut sum, mut carry) = (0.0f64, 0.0f64);
    for x in xs {
        let t = sum + x;
        carry += if sum.abs() >= x.abs() { (sum - t) + x } else { (x - t) + sum };
        sum = t;
    }
    sum + carry
}

/// Conditional second moments, Lindeberg terms and the KS distance of the row
/// sums to `N(0, W_n)`.
pub fn brown_triangular_check(row: &TriangularArray, eps: f64, replicas: usize, seed: u64) -> Result<BrownReport> {
    if row.entries.is_empty() || replicas == 0 || !(eps > 0.0) {
        return Err(Error::InvalidParameter("need a nonempty row, replicas >= 1 and eps > 0".into()));
    }
    if let Some((entry, law)) = row.entries.iter().enumerate().find(|(_, l)| l.mean() != 0.0) {
        return Err(Error::NonCentered { entry, mean: law.mean() });
    }
    let w_n = compensated_sum(row.entries.iter().map(EntryLaw::second_moment));
    let w_eps_n = compensated_sum(row.entries.iter().map(|l| l.lindeberg_term(eps)));
    let stream_seed = derive_seed(seed, "brown");
    let row_sums: Vec<f64> = (0..replicas as u64)
        .into_par_iter()
        .map(|r| {
            let mut rng = stream_rng(stream_seed, r);
            row.entries.iter().map(|l| l.sample(&mut rng)).sum()
        })
        .collect();
    let ecdf = Ecdf::new(&row_sums)?;
    let ks_vs_gaussian = ks_statistic(&ecdf, |t| gaussian_cdf(t, 0.0, w_n).unwrap_or(f64::NAN));
    Ok(BrownReport {
        w_n,
        w_eps_n,
        eps,
        lindeberg_violated: w_eps_n > LINDEBERG_TOL,
        ks_vs_gaussian,
        degenerate: w_n == 0.0,
        row_sums,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::SquareMatrix;

    #[test]
    fn azuma_formula() {
        assert_eq!(azuma_bound(10, 0.0, 1.0).unwrap(), 1.0);
        let b = azuma_bound(200, 0.3, 1.0).unwrap();
        assert!((b - (-9f64).exp()).abs() < 1e-18);
        assert!((b - 1.2341e-4).abs() < 1e-8);
        assert!(azuma_bound(10, 0.1, 0.0).is_err());
        assert!(azuma_bound(10, 0.1, 2.0).unwrap() > azuma_bound(10, 0.1, 1.0).unwrap());
        assert!(azuma_bound(20, 0.1, 1.0).unwrap() < azuma_bound(10, 0.1, 1.0).unwrap());
    }

    #[test]
    fn coin_flips_respect_azuma() {
        let s = DifferenceStream::new(StreamKind::IidBounded { bound: 1.0 }, 3).unwrap();
        let report = azuma_check(&s, 0.25, &[16, 64, 256], 20_000).unwrap();
        assert!(report.all_hold());
        assert!(report.rows.iter().all(|r| r.frequency <= r.bound));
    }

    #[test]
    fn zero_stream_never_exceeds() {
        let s = DifferenceStream::new(StreamKind::Zero, 1).unwrap();
        let r = baum_katz_sums(&s, 2.0, 0.1, &[16, 32, 64], 200).unwrap();
        assert!(r.empirical_probs.iter().all(|f| *f == 0.0));
        assert_eq!(r.verdict, Summability::Consistent);
    }

    #[test]
    fn counterexample_marginals() {
        // n = 2, 3 sit in the block 3^0 < n <= 3^1: values +-3 with total prob 3^{-2}
        let s = DifferenceStream::new(StreamKind::Counterexample3i { p: 2.0 }, 9).unwrap();
        let mut hits = 0;
        let trials = 90_000;
        for r in 0..trials {
            let mut path = s.replica(r);
            assert_eq!(path.next_value().abs(), 1.0);
            let v = path.next_value();
            assert!(v == 0.0 || v.abs() == 3.0);
            hits += usize::from(v != 0.0);
        }
        let f = hits as f64 / trials as f64;
        assert!((f - 1.0 / 9.0).abs() < 4.0 * binomial_halfwidth(1.0 / 9.0, trials as usize));
    }

    #[test]
    fn walk_induced_differences_are_centered() {
        let mu = GeneratorMeasure::uniform(vec![
            SquareMatrix::from_rows(&[&[1.0, 1.0], &[0.0, 1.0]]).unwrap(),
            SquareMatrix::from_rows(&[&[1.0, 0.0], &[1.0, 1.0]]).unwrap(),
        ])
        .unwrap();
        let start = ProjectivePoint::new(&[1.0, 0.3]).unwrap();
        let s = DifferenceStream::new(StreamKind::WalkInduced { measure: mu, start }, 4).unwrap();
        let a = s.bound().unwrap();
        let sums: Vec<f64> = (0..4000).map(|r| s.partial_sums_at(r, &[50])[0]).collect();
        let est = crate::stats::Estimate::of_mean(&sums).unwrap();
        assert!(est.value.abs() < 3.0 * est.ci_halfwidth.max(1e-3), "{est:?}");
        let mut path = s.replica(0);
        assert!((0..500).all(|_| path.next_value().abs() <= a));
    }

    #[test]
    fn brown_examples() {
        let z = brown_triangular_check(&TriangularArray::zero(20), 0.1, 100, 1).unwrap();
        assert!(z.degenerate && z.row_sums.iter().all(|s| *s == 0.0));
        assert_eq!(z.ks_vs_gaussian, 0.0);

        let rows = brown_triangular_check(&TriangularArray::iid_gaussian(1000, 1.0), 0.25, 10, 1).unwrap();
        assert_eq!(rows.w_n, 1.0);

        let spike = brown_triangular_check(&TriangularArray::single_spike(50), 0.5, 100, 1).unwrap();
        assert!(spike.lindeberg_violated);
        assert_eq!(spike.w_n, 1.0);

        let bad = TriangularArray { entries: vec![EntryLaw::Gaussian { mean: 0.2, var: 1.0 }] };
        assert!(matches!(brown_triangular_check(&bad, 0.1, 10, 1), Err(Error::NonCentered { entry: 0, .. })));
    }

    #[test]
    fn gaussian_lindeberg_term_matches_quadrature() {
        let law = EntryLaw::Gaussian { mean: 0.0, var: 0.04 };
        let eps = 0.3;
        // midpoint rule on 2 * int_eps^inf x^2 phi_sigma(x) dx
        let sigma = 0.2f64;
        let h = 1e-5;
        let mut q = 0.0;
        let mut x = eps + h / 2.0;
        while x < 3.0 {
            q += x * x * (-(x * x) / (2.0 * sigma * sigma)).exp() / (sigma * (2.0 * std::f64::consts::PI).sqrt()) * h;
            x += h;
        }
        assert!((law.lindeberg_term(eps) - 2.0 * q).abs() < 1e-9);
    }

    #[test]
    fn schedule_validation() {
        let s = DifferenceStream::new(StreamKind::Zero, 1).unwrap();
        assert!(baum_katz_sums(&s, 2.0, 0.1, &[32, 16], 10).is_err());
        assert!(baum_katz_sums(&s, 1.0, 0.1, &[16], 10).is_err());
        assert!(DifferenceStream::new(StreamKind::Counterexample3i { p: 0.5 }, 1).is_err());
        assert_eq!(default_schedule().first(), Some(&16));
        assert_eq!(default_schedule().last(), Some(&4096));
    }
}
