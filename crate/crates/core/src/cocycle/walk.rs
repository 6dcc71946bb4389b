//! Renormalized evaluation of long products.
//!
//! A [`VectorWalk`] follows `v <- g v / |g v|` and accumulates the norm
//! cocycle. A [`FrameWalk`] keeps `M O` for the running product `M` and some
//! orthogonal `O`, stored as orthonormal directions with separate log scales;
//! the log scales are then the log singular values of `M`. Neither ever forms
//! the product, so nothing overflows.

use crate::linalg::{dot, mul_vec_into, norm, SquareMatrix};

const ORTHO_TOL: f64 = 1e-15;
const MAX_SWEEPS: usize = 40;

/// Running `sigma(b_n ... b_1, x)` along a walk.
#[derive(Clone, Debug)]
pub struct VectorWalk {
    v: Vec<f64>,
    tmp: Vec<f64>,
    log_norm: f64,
}

impl VectorWalk {
    /// Start from a unit vector.
    pub fn new(start: &[f64]) -> Self {
        let n = norm(start);
        Self { v: start.iter().map(|c| c / n).collect(), tmp: vec![0.0; start.len()], log_norm: 0.0 }
    }

    /// Apply `g`, returning the increment `sigma(g, current)`.
    #[inline]
    pub fn step(&mut self, g: &SquareMatrix) -> f64 {
        mul_vec_into(g.as_slice(), g.dim(), &self.v, &mut self.tmp);
        let n = norm(&self.tmp);
        for (v, t) in self.v.iter_mut().zip(&self.tmp) {
            *v = t / n;
        }
        let inc = n.ln();
        self.log_norm += inc;
        inc
    }

    pub fn log_norm(&self) -> f64 {
        self.log_norm
    }

    /// Current unit direction (not sign-canonicalized).
    pub fn direction(&self) -> &[f64] {
        &self.v
    }
}

/// Log singular values of a running product `b_n ... b_1`.
#[derive(Clone, Debug)]
pub struct FrameWalk {
    d: usize,
    /// Column `k` lives at `cols[k*d..(k+1)*d]`.
    cols: Vec<f64>,
    logs: Vec<f64>,
    tmp: Vec<f64>,
    steps: usize,
}

impl FrameWalk {
    pub fn new(d: usize) -> Self {
        let mut cols = vec![0.0; d * d];
        for k in 0..d {
            cols[k * d + k] = 1.0;
        }
        Self { d, cols, logs: vec![0.0; d], tmp: vec![0.0; d], steps: 0 }
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    /// Left-multiply the running product by `g`.
    pub fn step(&mut self, g: &SquareMatrix) {
        let d = self.d;
        debug_assert_eq!(g.dim(), d);
        for k in 0..d {
            let col = &mut self.cols[k * d..(k + 1) * d];
            mul_vec_into(g.as_slice(), d, col, &mut self.tmp);
            let n = norm(&self.tmp);
            for (c, t) in col.iter_mut().zip(&self.tmp) {
                *c = t / n;
            }
            self.logs[k] += n.ln();
        }
        self.orthogonalize();
        self.steps += 1;
    }

    /// One-sided Jacobi sweeps in log-scaled form until the columns are
    /// orthogonal.
    fn orthogonalize(&mut self) {
        let d = self.d;
        for _ in 0..MAX_SWEEPS {
            let mut rotated = false;
            for i in 0..d {
                for j in i + 1..d {
                    let (hi, lo) = if self.logs[i] >= self.logs[j] { (i, j) } else { (j, i) };
                    let p = dot(&self.cols[hi * d..(hi + 1) * d], &self.cols[lo * d..(lo + 1) * d]);
                    if p.abs() <= ORTHO_TOL {
                        continue;
                    }
                    rotated = true;
                    self.rotate(hi, lo, p);
                }
            }
            if !rotated {
                break;
            }
        }
    }

    /// Rotate columns `A = e^{h} a`, `B = e^{l} b` (with `h >= l`) into an
    /// orthogonal pair. `r = e^{l-h}` may underflow to zero, in which case the
    /// rotation degenerates to a Gram-Schmidt projection of `b` against `a`.
    fn rotate(&mut self, hi: usize, lo: usize, p: f64) {
        let d = self.d;
        let r = (self.logs[lo] - self.logs[hi]).exp();
        let q = (r * r - 1.0) / (2.0 * p);
        let sign = if q >= 0.0 { 1.0 } else { -1.0 };
        let t_over_r = 1.0 / (q + sign * (r * r + q * q).sqrt());
        let t = r * t_over_r;
        let c = 1.0 / (1.0 + t * t).sqrt();
        let s = c * t;
        let s_over_r = c * t_over_r;

        let mut na = 0.0;
        let mut nb = 0.0;
        for m in 0..d {
            let a = self.cols[hi * d + m];
            let b = self.cols[lo * d + m];
            let a2 = c * a - s * r * b;
            let b2 = s_over_r * a + c * b;
            self.cols[hi * d + m] = a2;
            self.cols[lo * d + m] = b2;
            na += a2 * a2;
            nb += b2 * b2;
        }
        let (na, nb) = (na.sqrt(), nb.sqrt());
        for m in 0..d {
            self.cols[hi * d + m] /= na;
            self.cols[lo * d + m] /= nb;
        }
        self.logs[hi] += na.ln();
        self.logs[lo] += nb.ln();
    }

    /// Log singular values of the running product, nonincreasing.
    pub fn log_singular_values(&self) -> Vec<f64> {
        let mut s = self.logs.clone();
        s.sort_by(|a, b| b.total_cmp(a));
        s
    }

    /// `log |b_n ... b_1|`.
    pub fn log_norm(&self) -> f64 {
        self.logs.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }
}
