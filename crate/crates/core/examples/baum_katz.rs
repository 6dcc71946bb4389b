//! Weighted tail sums for a bounded stream and for a stream with only
//! `p`-th moments of the wrong kind.

use matwalk::martingale::{baum_katz_sums, default_schedule, DifferenceStream, StreamKind};
use matwalk::rng::DEFAULT_SEED;

fn main() -> matwalk::Result<()> {
    let schedule = default_schedule();
    for (label, kind, replicas) in [
        ("bounded", StreamKind::IidBounded { bound: 1.0 }, 10_000),
        ("counterexample", StreamKind::Counterexample3i { p: 2.0 }, 100_000),
    ] {
        let stream = DifferenceStream::new(kind, DEFAULT_SEED)?;
        let r = baum_katz_sums(&stream, 2.0, 0.25, &schedule, replicas)?;
        let inc: Vec<String> = r.increments.iter().map(|x| format!("{x:.3}")).collect();
        println!("{label:>14}: {:?}, increments {}", r.verdict, inc.join(" "));
    }
    Ok(())
}
