use crate::cocycle::CocycleValue;
use crate::error::{Error, Result};
use crate::linalg::{check_dim, eigenvalue_moduli, householder_qr, SquareMatrix};

/// Tolerance on `|det g - 1|` for membership in `SL(d, R)`.
pub const DET_TOL: f64 = 1e-8;

/// Rescale `g` to determinant exactly 1 when it is within `DET_TOL`.
pub fn to_unimodular(g: &SquareMatrix) -> Result<SquareMatrix> {
    let det = g.det();
    if (det - 1.0).abs() > DET_TOL {
        return Err(Error::NotUnimodular { det });
    }
    if det == 1.0 {
        return Ok(g.clone());
    }
    Ok(g.scale(det.powf(-1.0 / g.dim() as f64)))
}

/// A full flag `x = kP`, carried by an orthogonal matrix whose leading
/// columns span the flag's subspaces.
#[derive(Clone, Debug, PartialEq)]
pub struct FlagPoint {
    basis: SquareMatrix,
}

impl FlagPoint {
    pub fn new(basis: SquareMatrix) -> Result<Self> {
        let d = basis.dim();
        let gram = basis.transpose().mul(&basis);
        if gram.max_abs_diff(&SquareMatrix::identity(d)) > 1e-10 {
            return Err(Error::InvalidParameter("flag basis is not orthogonal".into()));
        }
        Ok(Self { basis })
    }

    /// The flag spanned by `e_1`, `e_1, e_2`, ...
    pub fn standard(dim: usize) -> Self {
        Self { basis: SquareMatrix::identity(dim) }
    }

    pub fn basis(&self) -> &SquareMatrix {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.dim()
    }
}

/// Sorted log singular values of `g` in `SL(d, R)`.
pub fn cartan_projection(g: &SquareMatrix) -> Result<CocycleValue> {
    let g = to_unimodular(g)?;
    Ok(CocycleValue(g.singular_values().iter().map(|s| s.ln()).collect()))
}

/// Iwasawa cocycle together with the image flag: `g k = k' e^{sigma} n`.
pub fn iwasawa_action(g: &SquareMatrix, x: &FlagPoint) -> Result<(CocycleValue, FlagPoint)> {
    check_dim(g.dim(), x.dim())?;
    let g = to_unimodular(g)?;
    let (q, r) = householder_qr(&g.mul(&x.basis));
    let value = (0..g.dim()).map(|i| r.get(i, i).ln()).collect();
    Ok((CocycleValue(value), FlagPoint { basis: q }))
}

/// `sigma(g, x)`: log diagonal of the triangular factor of `g k`.
pub fn iwasawa_cocycle(g: &SquareMatrix, x: &FlagPoint) -> Result<CocycleValue> {
    iwasawa_action(g, x).map(|(v, _)| v)
}

/// Sorted log moduli of the eigenvalues of `g` in `SL(d, R)`.
pub fn jordan_projection(g: &SquareMatrix) -> Result<CocycleValue> {
    let g = to_unimodular(g)?;
    Ok(CocycleValue(eigenvalue_moduli(&g).iter().map(|m| m.ln()).collect()))
}
