//! Vector CLT for the Cartan projection on SL(3).

use matwalk::limit::{multidim_clt_cartan, positive_sl3_pair};
use matwalk::rng::DEFAULT_SEED;

fn main() -> matwalk::Result<()> {
    let r = multidim_clt_cartan(&positive_sl3_pair(), 1000, 4000, DEFAULT_SEED)?;
    let lambda: Vec<String> = r.lambda.iter().map(|e| format!("{:.4}", e.value)).collect();
    println!("Lyapunov vector ({})", lambda.join(", "));
    for (i, g) in r.gaps.iter().enumerate() {
        println!("gap {}: {:.5} +- {:.5}", i + 1, g.value, g.ci_halfwidth);
    }
    for e in &r.restricted_eigenvalues {
        println!("covariance eigenvalue on the sum-zero plane {:.3e} +- {:.1e}", e.value, e.ci_halfwidth);
    }
    println!("largest |coordinate sum| {:.1e}", r.max_coordinate_sum);
    Ok(())
}
