//! Outage-gain formula for several outage levels.

use reconfig_mimo::analysis::{outage_gain, outage_gain_asymptotic};
use reconfig_mimo::GaussianRateModel;

fn main() -> reconfig_mimo::Result<()> {
    let model = GaussianRateModel::new(10.0, 4.0)?;
    for eps in [0.01, 0.05, 0.1] {
        let row: Vec<String> = (1..=8)
            .map(|psi| outage_gain(&model, psi, eps).map(|g| format!("{g:.4}")))
            .collect::<reconfig_mimo::Result<_>>()?;
        println!("eps {eps:<5} psi 1..8: {}", row.join(" "));
    }
    let big = 1_000_000;
    println!(
        "psi = 1e6, eps = 0.05: exact {:.4}, sqrt(ln psi) law {:.4}",
        outage_gain(&model, big, 0.05)?,
        outage_gain_asymptotic(&model, big, 0.05)?
    );
    // A model whose outage rate is not positive has no outage gain.
    match outage_gain(&GaussianRateModel::new(1.0, 4.0)?, 3, 0.05) {
        Err(e) => println!("N(1, 4): {e}"),
        Ok(g) => println!("N(1, 4): {g}"),
    }
    Ok(())
}
