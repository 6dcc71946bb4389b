//! An irreducible but not strongly irreducible walk whose normalized log-norm
//! converges to a folded Gaussian rather than a Gaussian.

use matwalk::limit::{clt_experiment, AxisSwapExample, Observable};
use matwalk::rng::DEFAULT_SEED;

fn main() -> matwalk::Result<()> {
    let ex = AxisSwapExample::new(1.0)?;
    let r = clt_experiment(&ex.measure(), &Observable::Norm, 2000, 5000, 0.0, DEFAULT_SEED, Some(&ex.reference()))?;
    println!("KS vs folded normal   {:.4}", r.ks_vs_reference.unwrap_or(f64::NAN));
    println!("KS vs fitted Gaussian {:.4}", r.ks_vs_fitted_gaussian);
    Ok(())
}
