//! Frequencies of `|log |S_n| - n lambda1| >= n eps` and their exponential
//! decay rate.

use matwalk::limit::{free_semigroup_pair, large_deviation_curve, plug_in_lambda1};
use matwalk::martingale::default_schedule;
use matwalk::rng::DEFAULT_SEED;

fn main() -> matwalk::Result<()> {
    let mu = free_semigroup_pair();
    let lambda1 = plug_in_lambda1(&mu, 2000, 500, DEFAULT_SEED)?.value;
    let curve = large_deviation_curve(&mu, lambda1, 0.05, &default_schedule(), 5000, DEFAULT_SEED)?;
    for (n, f) in curve.schedule.iter().zip(&curve.frequencies) {
        println!("n = {n:>5}  {f:.5}");
    }
    match curve.decay_rate {
        Some(a) => println!("decay rate {a:.4}"),
        None => println!("decay rate indeterminate"),
    }
    Ok(())
}
