use crate::error::{Error, Result};
use crate::linalg::matrix::{dot, norm, SquareMatrix};

/// Coordinates below this magnitude are skipped when fixing the sign.
pub const SIGN_ZERO_TOL: f64 = 1e-12;

/// Unit representative with the first non-negligible coordinate positive.
fn canonical(v: &[f64]) -> Result<Vec<f64>> {
    let n = norm(v);
    if !(n.is_finite() && n > 0.0) {
        return Err(Error::ZeroVector);
    }
    let mut rep: Vec<f64> = v.iter().map(|x| x / n).collect();
    if let Some(first) = rep.iter().copied().find(|c| c.abs() > SIGN_ZERO_TOL) {
        if first < 0.0 {
            rep.iter_mut().for_each(|c| *c = -*c);
        }
    }
    Ok(rep)
}

/// Anything carried by a unit representative: lines in `V` or in `V*`.
pub trait Line: Clone + Send + Sync {
    fn rep(&self) -> &[f64];
    fn from_vector(v: &[f64]) -> Result<Self>;

    fn dim(&self) -> usize {
        self.rep().len()
    }
}

/// A line `x = Rv` in projective space.
#[derive(Clone, Debug, PartialEq)]
pub struct ProjectivePoint {
    rep: Vec<f64>,
}

/// A line `y = Rf` in the dual projective space.
#[derive(Clone, Debug, PartialEq)]
pub struct DualProjectivePoint {
    rep: Vec<f64>,
}

macro_rules! line_impl {
    ($ty:ident) => {
        impl $ty {
            pub fn new(v: &[f64]) -> Result<Self> {
                Ok(Self { rep: canonical(v)? })
            }

            /// The `i`-th coordinate line.
            pub fn basis(dim: usize, i: usize) -> Self {
                let mut rep = vec![0.0; dim];
                rep[i] = 1.0;
                Self { rep }
            }

            pub fn rep(&self) -> &[f64] {
                &self.rep
            }

            pub fn dim(&self) -> usize {
                self.rep.len()
            }
        }

        impl Line for $ty {
            fn rep(&self) -> &[f64] {
                &self.rep
            }

            fn from_vector(v: &[f64]) -> Result<Self> {
                Self::new(v)
            }
        }
    };
}

line_impl!(ProjectivePoint);
line_impl!(DualProjectivePoint);

impl ProjectivePoint {
    /// The line `g x`.
    pub fn apply(&self, g: &SquareMatrix) -> Result<Self> {
        check_dim(g.dim(), self.dim())?;
        Self::new(&g.mul_vec(&self.rep))
    }
}

impl DualProjectivePoint {
    /// The line of `f o g`, i.e. the action of `g^{-1}` on the dual space.
    pub fn pull_back(&self, g: &SquareMatrix) -> Result<Self> {
        check_dim(g.dim(), self.dim())?;
        Self::new(&g.tr_mul_vec(&self.rep))
    }

    /// The line of `f o g^{-1}`, i.e. the action of `g` on the dual space.
    pub fn push_forward(&self, g: &SquareMatrix) -> Result<Self> {
        self.pull_back(&g.inverse()?)
    }
}

pub(crate) fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}

/// `|v ^ w|` for unit vectors, the sine of the angle between the lines.
pub(crate) fn wedge_norm(v: &[f64], w: &[f64]) -> f64 {
    let d = v.len();
    let mut s = 0.0;
    for i in 0..d {
        for j in i + 1..d {
            let m = v[i] * w[j] - v[j] * w[i];
            s += m * m;
        }
    }
    s.sqrt().min(1.0)
}

/// Projective distance `d(x, x') = |v ^ v'|` on unit representatives.
pub fn proj_distance(x: &ProjectivePoint, x2: &ProjectivePoint) -> Result<f64> {
    check_dim(x.dim(), x2.dim())?;
    Ok(wedge_norm(&x.rep, &x2.rep))
}

/// `delta(x, y) = |f(v)|` on unit representatives: the distance from `x` to
/// the hyperplane `ker f`.
pub fn delta(x: &ProjectivePoint, y: &DualProjectivePoint) -> Result<f64> {
    check_dim(x.dim(), y.dim())?;
    Ok(dot(&x.rep, &y.rep).abs().min(1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    #[test]
    fn canonical_sign_and_norm() {
        let x = ProjectivePoint::new(&[0.0, -3.0, 4.0]).unwrap();
        assert_eq!(x.rep(), &[0.0, 0.6, -0.8]);
        assert_eq!(ProjectivePoint::new(&[0.0, 0.0]), Err(Error::ZeroVector));
        let y = ProjectivePoint::new(&[1e-14, -1.0]).unwrap();
        assert!(y.rep()[1] > 0.0);
    }

    #[test]
    fn distance_examples() {
        let e1 = ProjectivePoint::basis(2, 0);
        let e2 = ProjectivePoint::basis(2, 1);
        let diag = ProjectivePoint::new(&[1.0, 1.0]).unwrap();
        assert_eq!(proj_distance(&e1, &e1).unwrap(), 0.0);
        assert_eq!(proj_distance(&e1, &e2).unwrap(), 1.0);
        // wedge of (1,0) and (1,1)/sqrt2 has the single component 1/sqrt2
        assert!((proj_distance(&e1, &diag).unwrap() - FRAC_1_SQRT_2).abs() < 1e-15);
        assert!(proj_distance(&e1, &ProjectivePoint::basis(3, 0)).is_err());
    }

    #[test]
    fn delta_examples() {
        let e1 = ProjectivePoint::basis(2, 0);
        let diag = ProjectivePoint::new(&[1.0, 1.0]).unwrap();
        let f1 = DualProjectivePoint::basis(2, 0);
        let f2 = DualProjectivePoint::basis(2, 1);
        assert_eq!(delta(&e1, &f1).unwrap(), 1.0);
        assert_eq!(delta(&e1, &f2).unwrap(), 0.0);
        assert!((delta(&diag, &f1).unwrap() - FRAC_1_SQRT_2).abs() < 1e-15);
    }

    #[test]
    fn delta_is_distance_to_kernel() {
        // y = R(1,2): its kernel is spanned by (-2,1)
        let y = DualProjectivePoint::new(&[1.0, 2.0]).unwrap();
        let ker = ProjectivePoint::new(&[-2.0, 1.0]).unwrap();
        for k in 0..20 {
            let t = 0.3 * k as f64;
            let x = ProjectivePoint::new(&[t.cos(), t.sin()]).unwrap();
            let a = delta(&x, &y).unwrap();
            let b = proj_distance(&x, &ker).unwrap();
            assert!((a - b).abs() < 1e-14);
        }
    }
}
