//! Martingale CLT for triangular arrays: a Gaussian row and a row where the
//! Lindeberg condition fails.

use matwalk::martingale::{brown_triangular_check, TriangularArray};
use matwalk::rng::DEFAULT_SEED;

fn main() -> matwalk::Result<()> {
    for (label, row) in [("gaussian", TriangularArray::iid_gaussian(1000, 1.0)), ("spike", TriangularArray::single_spike(1000))] {
        let r = brown_triangular_check(&row, 0.25, 5000, DEFAULT_SEED)?;
        println!(
            "{label:>8}: W_n = {}, Lindeberg sum {:.3}, violated {}, KS {:.4}",
            r.w_n, r.w_eps_n, r.lindeberg_violated, r.ks_vs_gaussian
        );
    }
    Ok(())
}
