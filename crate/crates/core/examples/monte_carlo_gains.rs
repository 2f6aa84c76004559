//! Empirical average and outage gains from one simulated table, next to the
//! Gaussian-model predictions.

use reconfig_mimo::analysis::{avg_gain_integral, outage_gain};
use reconfig_mimo::simlab::{avg_gain_of, fit_rate_model, outage_gain_of, simulate, Selector};
use reconfig_mimo::SystemConfig;

fn main() -> reconfig_mimo::Result<()> {
    let cfg = SystemConfig {
        trials: 2000,
        ..SystemConfig::default()
    };
    let table = simulate(&cfg, 8, false)?;
    let model = fit_rate_model(&table.samples(Selector::Fast, 1)?)?;
    println!("fit: mu {:.3}, var {:.3}", model.mu, model.var);
    println!("psi  avg (sim)  avg (model)  outage 5% (sim)  outage 5% (model)");
    for psi in 1..=8 {
        let s = table.samples(Selector::Fast, psi)?;
        let (avg, se) = avg_gain_of(&s);
        let (out, _, _) = outage_gain_of(&s, 0.05)?;
        println!(
            "{psi:>3}  {avg:.4}+-{se:.4}  {:.4}       {out:.4}           {:.4}",
            avg_gain_integral(&model, psi, 1e-9)?,
            outage_gain(&model, psi, 0.05)?
        );
    }
    Ok(())
}
