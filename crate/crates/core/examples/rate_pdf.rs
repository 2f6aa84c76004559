//! Simulated single-state rate histogram with its Gaussian fit, as CSV on
//! stdout, at 0 dB and 10 dB.

use reconfig_mimo::simlab::{excess_kurtosis, pdf_export, simulate, skewness, Selector};
use reconfig_mimo::SystemConfig;

fn main() -> reconfig_mimo::Result<()> {
    for rho_db in [0.0, 10.0] {
        let cfg = SystemConfig {
            rho_db,
            trials: 2000,
            ..SystemConfig::default()
        };
        let rates = simulate(&cfg, 1, false)?.samples(Selector::Fast, 1)?.single;
        let pdf = pdf_export(&rates, 30)?;
        eprintln!(
            "rho {rho_db} dB: mu {:.3}, var {:.3}, skew {:+.3}, excess kurtosis {:+.3}, L1 gap {:.3}",
            pdf.model.mu,
            pdf.model.var,
            skewness(&rates),
            excess_kurtosis(&rates),
            pdf.l1_distance()
        );
        pdf.write_csv(std::io::stdout().lock())?;
    }
    Ok(())
}
