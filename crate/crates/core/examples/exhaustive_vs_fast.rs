//! Exhaustive search against the fast pipeline on a 9x9 array with two RF
//! chains per side, and what happens when enumeration is too large.

use reconfig_mimo::channel::realize_channels;
use reconfig_mimo::fastsel::fast_select;
use reconfig_mimo::rate::{best_state_exhaustive, binomial};
use reconfig_mimo::{Error, SystemConfig};

fn main() -> reconfig_mimo::Result<()> {
    let cfg = SystemConfig {
        psi: 4,
        ..SystemConfig::desk()
    };
    let (mut sum_best, mut sum_fast) = (0.0, 0.0);
    let trials = 200;
    for trial in 0..trials {
        let channels = realize_channels(&cfg, trial);
        let best = best_state_exhaustive(&channels, &cfg)?;
        let fast = fast_select(&channels, &cfg)?;
        assert!(best.rate_bits >= fast.rate_bits - 1e-12);
        sum_best += best.rate_bits;
        sum_fast += fast.rate_bits;
    }
    println!(
        "{trials} trials, Psi = {}: exhaustive {:.3}, fast {:.3}, loss ratio {:.2}%",
        cfg.psi,
        sum_best / trials as f64,
        sum_fast / trials as f64,
        100.0 * (sum_best - sum_fast) / sum_best
    );

    let full = SystemConfig::default();
    println!(
        "17x17 with 5 RF chains: {} sub-matrices per state",
        binomial(17, 5) * binomial(17, 5)
    );
    match best_state_exhaustive(&realize_channels(&full, 0), &full) {
        Err(e @ Error::Capacity { .. }) => println!("refused: {e}"),
        other => println!("unexpected: {other:?}"),
    }
    Ok(())
}
