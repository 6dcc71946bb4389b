//! Top Lyapunov exponent, the second exponent via the exterior square, and a
//! Gelfand check on a single matrix.

use matwalk::group::GeneratorMeasure;
use matwalk::limit::{free_semigroup_pair, lyapunov_pair, lyapunov_top};
use matwalk::linalg::eigenvalue_moduli;
use matwalk::rng::DEFAULT_SEED;
use matwalk::SquareMatrix;

fn main() -> matwalk::Result<()> {
    let mu = free_semigroup_pair();
    let e = lyapunov_pair(&mu, 1000, 400, DEFAULT_SEED)?;
    println!("lambda1 = {:.5} +- {:.5}", e.lambda1, e.ci_halfwidth);
    if let (Some(l2), Some(gap)) = (e.lambda2, e.gap) {
        println!("lambda2 = {l2:.5}, gap = {:.5} +- {:.5}", gap.value, gap.ci_halfwidth);
    }

    let g = SquareMatrix::from_rows(&[&[2.0, 1.0, 0.0], &[0.5, 1.0, 1.0], &[0.0, 1.0, 3.0]])?;
    let rho = eigenvalue_moduli(&g)[0];
    let dirac = lyapunov_top(&GeneratorMeasure::dirac(g)?, 2000, 1, DEFAULT_SEED)?;
    println!("single matrix: walk {:.6}, log spectral radius {:.6}", dirac.lambda1, rho.ln());
    Ok(())
}
