//! Dense linear algebra over the reals: matrices as group elements, lines in
//! projective space and its dual, and the Cartan decomposition.

mod decomp;
mod matrix;
mod points;

pub use decomp::{
    cartan, density_points, eigenvalue_moduli, exterior_power, exterior_square, first_gap,
    householder_qr, operator_norm, CartanTriple, GAP_TOL,
};
pub use matrix::{SquareMatrix, SINGULAR_TOL};
pub use points::{delta, proj_distance, DualProjectivePoint, Line, ProjectivePoint, SIGN_ZERO_TOL};

pub(crate) use matrix::{dot, mul_vec_into, norm};
pub(crate) use points::{check_dim, wedge_norm};
