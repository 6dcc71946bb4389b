//! Stationary measures, the corrector solving the cohomological equation and
//! the variance it predicts.

use matwalk::limit::{free_semigroup_pair, plug_in_lambda1, variance_via_corrector};
use matwalk::rng::DEFAULT_SEED;
use matwalk::stationary::{cohomological_residual, estimate_dual_stationary, estimate_stationary, PsiFunction};
use matwalk::ProjectivePoint;

fn main() -> matwalk::Result<()> {
    let mu = free_semigroup_pair();
    let lambda1 = plug_in_lambda1(&mu, 2000, 500, DEFAULT_SEED)?.value;
    let cloud = estimate_stationary(&mu, 500, 10_000, DEFAULT_SEED)?;
    let psi = PsiFunction::new(estimate_dual_stationary(&mu, 500, 20_000, DEFAULT_SEED)?);

    let xs = (0..12)
        .map(|k| {
            let t = k as f64 * std::f64::consts::PI / 12.0;
            ProjectivePoint::new(&[t.cos(), t.sin()])
        })
        .collect::<matwalk::Result<Vec<_>>>()?;
    let r = cohomological_residual(&mu, &psi, lambda1, &xs)?;
    println!("residual: mean {:.2e}, max {:.2e}", r.mean_abs, r.max_abs);

    let var = variance_via_corrector(&mu, &psi, lambda1, &cloud)?;
    println!("variance from the corrector {:.5} +- {:.5}", var.value, var.ci_halfwidth);
    Ok(())
}
