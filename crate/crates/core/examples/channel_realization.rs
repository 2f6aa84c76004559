//! Draw the Ψ channel matrices of one trial and print their sizes and
//! Frobenius norms, then the first state as JSON.
//!
//! cargo run --example channel_realization -- [trial]

use reconfig_mimo::channel::{realize_channels, ChannelDump};
use reconfig_mimo::SystemConfig;

fn main() -> reconfig_mimo::Result<()> {
    let trial: u64 = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(0);
    let cfg = SystemConfig {
        n_r: 4,
        n_t: 4,
        l_r: 2,
        l_t: 2,
        psi: 3,
        ..SystemConfig::default()
    };
    cfg.validate()?;
    let set = realize_channels(&cfg, trial);
    for (state, h) in set.matrices.iter().enumerate() {
        println!(
            "state {state}: {}x{}, |H|_F^2 = {:.3} (mean {})",
            h.rows(),
            h.cols(),
            h.frobenius_sq(),
            cfg.n_r * cfg.n_t
        );
    }
    let first = ChannelDump::new(&cfg, trial, &set.prefix(1));
    println!("{}", serde_json::to_string_pretty(&first.states[0])?);
    Ok(())
}
