//! One long trajectory against the iterated-logarithm envelope.

use matwalk::limit::{lil_diagnostic, scalar_coin};
use matwalk::rng::DEFAULT_SEED;
use matwalk::ProjectivePoint;

fn main() -> matwalk::Result<()> {
    let r = lil_diagnostic(&scalar_coin(1.0), &ProjectivePoint::basis(1, 0), 0.0, 1.0, 1_000_000, DEFAULT_SEED)?;
    println!("window from k = {}: max {:.3}, min {:.3}", r.window_start, r.window_max, r.window_min);
    println!("consistent with the envelope: {}", r.consistent);
    Ok(())
}
