//! Mean-rate loss of the fast pipeline against exhaustive search over an
//! SNR sweep on the 9x9, two-chain array.

use reconfig_mimo::simlab::loss_ratio;
use reconfig_mimo::SystemConfig;

fn main() -> reconfig_mimo::Result<()> {
    for rho_db in [-10.0, 0.0, 10.0, 20.0] {
        let cfg = SystemConfig {
            rho_db,
            trials: 500,
            ..SystemConfig::desk()
        };
        let rows = loss_ratio(&cfg, &[2, 4, 8])?;
        let cells: Vec<String> = rows
            .iter()
            .map(|r| {
                format!(
                    "psi {}: {:5.2}% (+-{:.2})",
                    r.psi,
                    100.0 * r.ratio,
                    100.0 * r.std_error
                )
            })
            .collect();
        println!("rho {rho_db:>5} dB  {}", cells.join("  "));
    }
    Ok(())
}
