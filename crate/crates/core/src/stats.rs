//! ECDF, Kolmogorov-Smirnov distances, Gaussian and folded-Gaussian CDFs,
//! covariance fits and confidence half-widths.

use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// Two-sided 95% normal quantile. Every "CI half-width" in the crate is this
/// times a standard error.
pub const Z95: f64 = 1.959_963_984_540_054;

/// Asymptotic one-sample KS critical value at level 0.05.
pub fn ks_critical_05(n: usize) -> f64 {
    1.36 / (n as f64).sqrt()
}

/// Sorted sample.
#[derive(Clone, Debug, PartialEq)]
pub struct Ecdf {
    sorted: Vec<f64>,
}

impl Ecdf {
    pub fn new(sample: &[f64]) -> Result<Self> {
        if sample.is_empty() {
            return Err(Error::EmptySample);
        }
        if sample.iter().any(|v| v.is_nan()) {
            return Err(Error::InvalidParameter("sample contains NaN".into()));
        }
        let mut sorted = sample.to_vec();
        sorted.sort_by(f64::total_cmp);
        Ok(Self { sorted })
    }

    pub fn len(&self) -> usize {
        self.sorted.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sorted.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.sorted
    }

    /// `F_hat(t) = #{x_i <= t} / N`.
    pub fn eval(&self, t: f64) -> f64 {
        self.sorted.partition_point(|&x| x <= t) as f64 / self.len() as f64
    }
}

/// `sup_t |F_hat(t) - F(t)|`, checking both `F_hat(t)` and `F_hat(t-)` at
/// every distinct sample point. Left limits of the reference are taken at the
/// next float below `t`, which only matters for discontinuous references.
pub fn ks_statistic<F: Fn(f64) -> f64>(sample: &Ecdf, cdf: F) -> f64 {
    let xs = &sample.sorted;
    let n = xs.len() as f64;
    let mut worst: f64 = 0.0;
    let mut i = 0;
    while i < xs.len() {
        let mut j = i;
        while j + 1 < xs.len() && xs[j + 1] == xs[i] {
            j += 1;
        }
        let f = cdf(xs[i]);
        let f_left = cdf(xs[i].next_down());
        let below = i as f64 / n;
        let at = (j + 1) as f64 / n;
        worst = worst.max((at - f).abs()).max((below - f_left).abs());
        i = j + 1;
    }
    worst
}

/// Two-sample KS distance `sup_t |F_a(t) - F_b(t)|`.
pub fn ks_two_sample(a: &Ecdf, b: &Ecdf) -> f64 {
    let (xa, xb) = (&a.sorted, &b.sorted);
    let (na, nb) = (xa.len() as f64, xb.len() as f64);
    let (mut i, mut j) = (0, 0);
    let mut worst: f64 = 0.0;
    while i < xa.len() && j < xb.len() {
        let t = xa[i].min(xb[j]);
        while i < xa.len() && xa[i] <= t {
            i += 1;
        }
        while j < xb.len() && xb[j] <= t {
            j += 1;
        }
        worst = worst.max((i as f64 / na - j as f64 / nb).abs());
    }
    worst
}

/// Normal CDF. `var == 0` gives the step at `mean`.
pub fn gaussian_cdf(t: f64, mean: f64, var: f64) -> Result<f64> {
    if var < 0.0 || var.is_nan() {
        return Err(Error::InvalidParameter(format!("variance {var} is negative")));
    }
    if var == 0.0 {
        return Ok(if t >= mean { 1.0 } else { 0.0 });
    }
    Ok(0.5 * libm::erfc(-(t - mean) / (2.0 * var).sqrt()))
}

/// CDF of `|Z|` for `Z ~ N(0, var)`.
pub fn folded_gaussian_cdf(t: f64, var: f64) -> Result<f64> {
    if t < 0.0 {
        return gaussian_cdf(0.0, 0.0, var).map(|_| 0.0);
    }
    Ok((2.0 * gaussian_cdf(t, 0.0, var)? - 1.0).max(0.0))
}

/// Reference laws used by the CLT harnesses.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Reference {
    Gaussian { mean: f64, var: f64 },
    FoldedGaussian { var: f64 },
}

impl Reference {
    pub fn cdf(&self, t: f64) -> f64 {
        match *self {
            Reference::Gaussian { mean, var } => gaussian_cdf(t, mean, var).unwrap_or(f64::NAN),
            Reference::FoldedGaussian { var } => folded_gaussian_cdf(t, var).unwrap_or(f64::NAN),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            Reference::Gaussian { var, .. } | Reference::FoldedGaussian { var } if var >= 0.0 => Ok(()),
            _ => Err(Error::InvalidParameter("reference variance must be nonnegative".into())),
        }
    }
}

/// Sample mean, unbiased sample variance.
pub fn mean_var(xs: &[f64]) -> Result<(f64, f64)> {
    if xs.len() < 2 {
        return Err(Error::InvalidParameter("need at least 2 samples".into()));
    }
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    Ok((mean, var))
}

/// Mean with a 95% half-width.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub ci_halfwidth: f64,
}

impl Estimate {
    pub fn of_mean(xs: &[f64]) -> Result<Self> {
        let (mean, var) = mean_var(xs)?;
        Ok(Self { value: mean, ci_halfwidth: Z95 * (var / xs.len() as f64).sqrt() })
    }

    /// `|a - b| <= k * (h_a + h_b)`.
    pub fn agrees_with(&self, other: &Estimate, k: f64) -> bool {
        (self.value - other.value).abs() <= k * (self.ci_halfwidth + other.ci_halfwidth)
    }
}

/// Normal-approximation 95% half-width of a binomial frequency.
pub fn binomial_halfwidth(freq: f64, trials: usize) -> f64 {
    Z95 * (freq * (1.0 - freq) / trials as f64).sqrt()
}

/// Half-width for the sample variance of approximately Gaussian data.
pub fn variance_halfwidth(var: f64, n: usize) -> f64 {
    Z95 * var * (2.0 / (n as f64 - 1.0)).sqrt()
}

#[derive(Clone, Debug, PartialEq)]
pub struct CovarianceFit {
    pub mean: Vec<f64>,
    /// Row-major `m x m`.
    pub covariance: Vec<Vec<f64>>,
    /// Nonincreasing.
    pub eigenvalues: Vec<f64>,
}

/// Unbiased sample covariance of `m`-vectors.
pub fn covariance_fit(samples: &[Vec<f64>]) -> Result<CovarianceFit> {
    if samples.len() < 2 {
        return Err(Error::InvalidParameter("covariance needs at least 2 samples".into()));
    }
    let m = samples[0].len();
    if let Some(bad) = samples.iter().find(|s| s.len() != m) {
        return Err(Error::DimensionMismatch { expected: m, found: bad.len() });
    }
    let n = samples.len() as f64;
    let mut mean = vec![0.0; m];
    for s in samples {
        for (acc, v) in mean.iter_mut().zip(s) {
            *acc += v;
        }
    }
    mean.iter_mut().for_each(|v| *v /= n);
    let mut cov = vec![vec![0.0; m]; m];
    for s in samples {
        for a in 0..m {
            let da = s[a] - mean[a];
            for b in a..m {
                cov[a][b] += da * (s[b] - mean[b]);
            }
        }
    }
    for a in 0..m {
        for b in a..m {
            cov[a][b] /= n - 1.0;
            cov[b][a] = cov[a][b];
        }
    }
    let eigenvalues = symmetric_eigenvalues(&cov);
    Ok(CovarianceFit { mean, covariance: cov, eigenvalues })
}

/// Eigenvalues of a symmetric matrix, nonincreasing.
pub fn symmetric_eigenvalues(a: &[Vec<f64>]) -> Vec<f64> {
    let m = a.len();
    if m == 0 {
        return Vec::new();
    }
    let mat = DMatrix::from_fn(m, m, |i, j| a[i][j]);
    let mut ev: Vec<f64> = mat.symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(|x, y| y.total_cmp(x));
    ev
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ks_examples() {
        let s = Ecdf::new(&[0.5]).unwrap();
        assert_eq!(ks_statistic(&s, |t| t.clamp(0.0, 1.0)), 0.5);
        let z = Ecdf::new(&[0.0]).unwrap();
        let ks = ks_statistic(&z, |t| gaussian_cdf(t, 0.0, 1.0).unwrap());
        assert!((ks - 0.5).abs() < 1e-15);

        let n = 40;
        let q: Vec<f64> = (0..n).map(|i| (i as f64 + 0.5) / n as f64).collect();
        let ks = ks_statistic(&Ecdf::new(&q).unwrap(), |t| t.clamp(0.0, 1.0));
        assert!((ks - 0.5 / n as f64).abs() < 1e-15);
        assert_eq!(Ecdf::new(&[]), Err(Error::EmptySample));
    }

    #[test]
    fn ks_handles_ties() {
        // two atoms at 0: F_hat jumps 0 -> 1 at t = 0 against a CDF of 0.5 there
        let s = Ecdf::new(&[0.0, 0.0]).unwrap();
        assert_eq!(ks_statistic(&s, |t| gaussian_cdf(t, 0.0, 1.0).unwrap()), 0.5);
    }

    #[test]
    fn ks_against_own_ecdf_is_zero() {
        let data = [3.0, -1.0, 2.0, 2.0, 7.5, 0.0];
        let e = Ecdf::new(&data).unwrap();
        assert_eq!(ks_statistic(&e, |t| e.eval(t)), 0.0);
        assert_eq!(ks_two_sample(&e, &e), 0.0);
    }

    #[test]
    fn two_sample_disjoint() {
        let a = Ecdf::new(&[0.0, 1.0]).unwrap();
        let b = Ecdf::new(&[2.0, 3.0, 4.0]).unwrap();
        assert_eq!(ks_two_sample(&a, &b), 1.0);
        let c = Ecdf::new(&[0.5]).unwrap();
        assert_eq!(ks_two_sample(&a, &c), 0.5);
    }

    #[test]
    fn gaussian_reference_values() {
        // reference values of the standard normal CDF (mpmath, 20 digits)
        let table = [
            (-3.0, 0.0013498980316300946),
            (-2.0, 0.022750131948179207),
            (-1.5, 0.066807201268858057),
            (-1.0, 0.15865525393145705),
            (-0.5, 0.30853753872598688),
            (0.0, 0.5),
            (0.5, 0.69146246127401312),
            (1.0, 0.84134474606854293),
            (2.0, 0.97724986805182079),
            (3.0, 0.99865010196837),
        ];
        for (t, p) in table {
            let got = gaussian_cdf(t, 0.0, 1.0).unwrap();
            assert!((got - p).abs() < 1e-12, "{t}: {got} vs {p}");
        }
        assert!((gaussian_cdf(1.0, 0.0, 1.0).unwrap() - 0.8413447461).abs() < 1e-9);
        assert!((gaussian_cdf(3.0, 1.0, 4.0).unwrap() - 0.84134474606854293).abs() < 1e-12);
    }

    #[test]
    fn gaussian_edge_cases() {
        assert_eq!(gaussian_cdf(0.0, 0.0, 1.0).unwrap(), 0.5);
        assert_eq!(gaussian_cdf(-0.1, 0.0, 0.0).unwrap(), 0.0);
        assert_eq!(gaussian_cdf(0.0, 0.0, 0.0).unwrap(), 1.0);
        assert!(gaussian_cdf(0.0, 0.0, -1.0).is_err());
        assert_eq!(folded_gaussian_cdf(0.0, 1.0).unwrap(), 0.0);
        assert_eq!(folded_gaussian_cdf(-2.0, 1.0).unwrap(), 0.0);
        assert!(folded_gaussian_cdf(1.0, -1.0).is_err());
        assert!((folded_gaussian_cdf(40.0, 1.0).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn covariance_examples() {
        let same = vec![vec![1.0, 2.0]; 5];
        let fit = covariance_fit(&same).unwrap();
        assert!(fit.covariance.iter().flatten().all(|c| *c == 0.0));

        let fit = covariance_fit(&[vec![1.0, 0.0], vec![-1.0, 0.0]]).unwrap();
        assert_eq!(fit.covariance, vec![vec![2.0, 0.0], vec![0.0, 0.0]]);
        assert_eq!(fit.eigenvalues, vec![2.0, 0.0]);
        assert!(covariance_fit(&[vec![1.0]]).is_err());
    }

    #[test]
    fn estimate_agreement() {
        let a = Estimate { value: 1.0, ci_halfwidth: 0.1 };
        let b = Estimate { value: 1.5, ci_halfwidth: 0.1 };
        assert!(a.agrees_with(&b, 3.0));
        assert!(!a.agrees_with(&b, 2.0));
    }
}
