//! Cocycles over the action of `GL(d, R)` on projective space: the norm
//! cocycle and its relatives, and the Cartan/Iwasawa/Jordan maps for
//! `SL(d, R)`.

mod sl;
mod walk;

pub use sl::{
    cartan_projection, iwasawa_action, iwasawa_cocycle, jordan_projection, to_unimodular, FlagPoint,
    DET_TOL,
};
pub use walk::{FrameWalk, VectorWalk};

use crate::error::{Error, Result};
use crate::group::{big_n, GeneratorMeasure};
use crate::linalg::{check_dim, norm, DualProjectivePoint, ProjectivePoint, SquareMatrix};

/// A vector-valued cocycle value.
#[derive(Clone, Debug, PartialEq)]
pub struct CocycleValue(pub Vec<f64>);

impl CocycleValue {
    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn sum(&self) -> f64 {
        self.0.iter().sum()
    }

    /// Running sums `c_1, c_1 + c_2, ...`. For the Cartan projection these are
    /// `log |^i g|`.
    pub fn partial_sums(&self) -> Vec<f64> {
        self.0
            .iter()
            .scan(0.0, |acc, c| {
                *acc += c;
                Some(*acc)
            })
            .collect()
    }
}

/// `sigma(g, x) = log |g v|` for the unit representative `v` of `x`.
pub fn norm_cocycle(g: &SquareMatrix, x: &ProjectivePoint) -> Result<f64> {
    check_dim(g.dim(), x.dim())?;
    g.require_invertible()?;
    Ok(norm(&g.mul_vec(x.rep())).ln())
}

/// The norm cocycle on the dual space, `log |f o g^{-1}|`.
pub fn dual_norm_cocycle(g: &SquareMatrix, y: &DualProjectivePoint) -> Result<f64> {
    check_dim(g.dim(), y.dim())?;
    let inv = g.inverse()?;
    Ok(norm(&inv.tr_mul_vec(y.rep())).ln())
}

/// `sup_x |sigma(g, x)| = log N(g)`.
pub fn sup_norm(g: &SquareMatrix) -> Result<f64> {
    Ok(big_n(g)?.ln())
}

/// Expected increment `sum_i w_i sigma(g_i, x)`.
pub fn drift(mu: &GeneratorMeasure, x: &ProjectivePoint) -> f64 {
    mu.atoms()
        .iter()
        .zip(mu.weights())
        .map(|(g, w)| w * norm(&g.mul_vec(x.rep())).ln())
        .sum()
}

/// Coordinatewise norm cocycle on a product of projective spaces.
pub fn multinorm_cocycle(gs: &[SquareMatrix], xs: &[ProjectivePoint]) -> Result<CocycleValue> {
    if gs.len() != xs.len() {
        return Err(Error::DimensionMismatch { expected: gs.len(), found: xs.len() });
    }
    gs.iter().zip(xs).map(|(g, x)| norm_cocycle(g, x)).collect::<Result<Vec<_>>>().map(CocycleValue)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{E, FRAC_PI_2, LN_2};

    #[test]
    fn norm_cocycle_examples() {
        let g = SquareMatrix::diag(&[2.0, 0.5]);
        let e1 = ProjectivePoint::basis(2, 0);
        assert!((norm_cocycle(&g, &e1).unwrap() - LN_2).abs() < 1e-15);
        let x = ProjectivePoint::new(&[0.3, -0.8]).unwrap();
        assert!(norm_cocycle(&SquareMatrix::identity(2), &x).unwrap().abs() < 1e-15);
        let sing = SquareMatrix::diag(&[1.0, 0.0]);
        assert!(norm_cocycle(&sing, &e1).is_err());
    }

    #[test]
    fn sup_norm_examples() {
        assert_eq!(sup_norm(&SquareMatrix::identity(3)).unwrap(), 0.0);
        assert!(sup_norm(&SquareMatrix::rotation(1.2)).unwrap().abs() < 1e-14);
        let g = SquareMatrix::diag(&[E * E, 1.0 / (E * E)]);
        assert!((sup_norm(&g).unwrap() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn sup_norm_matches_grid_search() {
        let g = SquareMatrix::from_rows(&[&[E * E, 0.7], &[0.0, 1.0 / (E * E)]]).unwrap();
        let grid = (0..200_000).map(|k| {
            let t = std::f64::consts::PI * k as f64 / 200_000.0;
            norm_cocycle(&g, &ProjectivePoint::new(&[t.cos(), t.sin()]).unwrap()).unwrap().abs()
        });
        let best = grid.fold(0.0, f64::max);
        assert!((best - sup_norm(&g).unwrap()).abs() < 1e-6);
    }

    #[test]
    fn drift_examples() {
        let x = ProjectivePoint::new(&[0.6, 0.8]).unwrap();
        let id = GeneratorMeasure::dirac(SquareMatrix::identity(2)).unwrap();
        assert!(drift(&id, &x).abs() < 1e-15);
        let g = SquareMatrix::from_rows(&[&[2.0, 1.0], &[1.0, 1.0]]).unwrap();
        let dg = GeneratorMeasure::dirac(g.clone()).unwrap();
        assert!((drift(&dg, &x) - norm_cocycle(&g, &x).unwrap()).abs() < 1e-15);

        let a = SquareMatrix::diag(&[E, 1.0 / E]);
        let b = SquareMatrix::rotation(FRAC_PI_2).mul(&a);
        let mu = GeneratorMeasure::uniform(vec![a, b]).unwrap();
        assert!((drift(&mu, &ProjectivePoint::basis(2, 0)) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn multinorm_examples() {
        let g = SquareMatrix::from_rows(&[&[2.0, 1.0], &[1.0, 1.0]]).unwrap();
        let x = ProjectivePoint::new(&[1.0, 3.0]).unwrap();
        let single = multinorm_cocycle(&[g.clone()], &[x.clone()]).unwrap();
        assert_eq!(single.0, vec![norm_cocycle(&g, &x).unwrap()]);
        let ids = vec![SquareMatrix::identity(2), SquareMatrix::identity(3)];
        let xs = vec![x.clone(), ProjectivePoint::basis(3, 2)];
        assert!(multinorm_cocycle(&ids, &xs).unwrap().0.iter().all(|c| c.abs() < 1e-15));
        assert!(multinorm_cocycle(&ids, &xs[..1]).is_err());
    }

    #[test]
    fn partial_sums() {
        assert_eq!(CocycleValue(vec![1.0, 2.0, -3.0]).partial_sums(), vec![1.0, 3.0, 0.0]);
    }
}
