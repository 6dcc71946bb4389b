//! Central limit theorem for the norm cocycle of the free-semigroup pair.

use matwalk::limit::{clt_experiment, free_semigroup_pair, plug_in_lambda1, variance_estimate, Observable};
use matwalk::rng::DEFAULT_SEED;
use matwalk::stats::ks_critical_05;

fn main() -> matwalk::Result<()> {
    let mu = free_semigroup_pair();
    let lambda1 = plug_in_lambda1(&mu, 2000, 500, DEFAULT_SEED)?;
    println!("plug-in lambda1 = {:.5} +- {:.5}", lambda1.value, lambda1.ci_halfwidth);
    let report = clt_experiment(&mu, &Observable::Norm, 1000, 5000, lambda1.value, DEFAULT_SEED, None)?;
    let var = variance_estimate(&report);
    println!("variance {:.5} +- {:.5}", var.value, var.ci_halfwidth);
    println!(
        "KS vs fitted Gaussian {:.4} (5% critical value {:.4})",
        report.ks_vs_fitted_gaussian,
        ks_critical_05(report.samples.len())
    );
    Ok(())
}
