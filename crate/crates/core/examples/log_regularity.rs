//! Log-regularity of the stationary measure: the integral of
//! `|log delta(x, y)|^p` at a few hyperplanes, from two independent clouds.

use matwalk::limit::free_semigroup_pair;
use matwalk::rng::{derive_seed, DEFAULT_SEED};
use matwalk::stationary::{estimate_stationary, log_regularity_estimate};
use matwalk::DualProjectivePoint;

fn main() -> matwalk::Result<()> {
    let mu = free_semigroup_pair();
    let a = estimate_stationary(&mu, 500, 20_000, DEFAULT_SEED)?;
    let b = estimate_stationary(&mu, 500, 20_000, derive_seed(DEFAULT_SEED, "second"))?;
    for y in [[1.0, 0.0], [0.0, 1.0], [1.0, -1.0], [1.0, 1.0]] {
        let y = DualProjectivePoint::new(&y)?;
        match (log_regularity_estimate(&a, &y, 2.0)?, log_regularity_estimate(&b, &y, 2.0)?) {
            (Some(ea), Some(eb)) => println!(
                "y = {:?}: {:.4} +- {:.4} vs {:.4} +- {:.4}",
                y.rep(),
                ea.value,
                ea.ci_halfwidth,
                eb.value,
                eb.ci_halfwidth
            ),
            _ => println!("y = {:?}: a particle sits on the hyperplane", y.rep()),
        }
    }
    Ok(())
}
