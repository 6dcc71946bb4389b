//! Tail frequencies of a bounded martingale against Azuma's inequality.

use matwalk::martingale::{azuma_check, default_schedule, DifferenceStream, StreamKind};
use matwalk::rng::DEFAULT_SEED;

fn main() -> matwalk::Result<()> {
    let stream = DifferenceStream::new(StreamKind::IidBounded { bound: 1.0 }, DEFAULT_SEED)?;
    let r = azuma_check(&stream, 0.25, &default_schedule(), 20_000)?;
    for row in &r.rows {
        println!("n = {:>5}  freq {:.5}  bound {:.3e}  {}", row.n, row.frequency, row.bound, if row.holds { "ok" } else { "VIOLATED" });
    }
    Ok(())
}
