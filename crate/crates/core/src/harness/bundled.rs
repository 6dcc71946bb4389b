//! Scenarios shipped with the crate, one per experiment the lab is built around.

use super::config::{parse_config, ScenarioConfig};

/// `(name, TOML text)` of every bundled scenario.
pub const BUNDLED: &[(&str, &str)] = &[
    ("free_semigroup_sl2_clt", include_str!("../../scenarios/free_semigroup_sl2_clt.toml")),
    ("example_nongaussian", include_str!("../../scenarios/example_nongaussian.toml")),
    ("cartan_sl3_clt", include_str!("../../scenarios/cartan_sl3_clt.toml")),
    ("cohomological_residual_sl2", include_str!("../../scenarios/cohomological_residual_sl2.toml")),
    ("log_regularity_sl2", include_str!("../../scenarios/log_regularity_sl2.toml")),
    ("azuma_coinflip", include_str!("../../scenarios/azuma_coinflip.toml")),
    ("baum_katz_counterexample", include_str!("../../scenarios/baum_katz_counterexample.toml")),
    ("baum_katz_bounded", include_str!("../../scenarios/baum_katz_bounded.toml")),
    ("large_deviation_sl2", include_str!("../../scenarios/large_deviation_sl2.toml")),
    ("lil_scalar", include_str!("../../scenarios/lil_scalar.toml")),
    ("brown_gaussian_rows", include_str!("../../scenarios/brown_gaussian_rows.toml")),
    ("scalar_clt", include_str!("../../scenarios/scalar_clt.toml")),
    ("lyapunov_diag", include_str!("../../scenarios/lyapunov_diag.toml")),
];

/// Every bundled scenario, parsed and validated.
pub fn bundled_scenarios() -> Vec<ScenarioConfig> {
    BUNDLED
        .iter()
        .map(|(name, text)| parse_config(text).unwrap_or_else(|e| panic!("bundled scenario {name}: {e}")))
        .collect()
}

pub fn bundled(name: &str) -> Option<ScenarioConfig> {
    BUNDLED.iter().find(|(n, _)| *n == name).and_then(|(_, text)| parse_config(text).ok())
}
