//! Average-gain formulas for a Gaussian rate model N(mu, var).
//!
//! cargo run --example gain_formulas -- [mu] [var]

use reconfig_mimo::analysis::{
    avg_gain_asymptotic, avg_gain_integral, avg_gain_large, avg_gain_small,
};
use reconfig_mimo::GaussianRateModel;

fn main() -> reconfig_mimo::Result<()> {
    let mut args = std::env::args()
        .skip(1)
        .map(|s| s.parse::<f64>().expect("number"));
    let mu = args.next().unwrap_or(10.0);
    let var = args.next().unwrap_or(4.0);
    let model = GaussianRateModel::new(mu, var)?;
    println!("psi  integral   small-psi  large-psi  sqrt(ln psi) law");
    for psi in [1, 2, 3, 4, 5, 8, 16, 64, 256, 1024] {
        let small = avg_gain_small(&model, psi)
            .map(|v| format!("{v:.6}"))
            .unwrap_or_default();
        let large = avg_gain_large(&model, psi)
            .map(|v| format!("{v:.6}"))
            .unwrap_or_default();
        let asym = avg_gain_asymptotic(&model, psi)
            .map(|v| format!("{v:.6}"))
            .unwrap_or_default();
        println!(
            "{psi:>4} {:.6}   {small:>9}  {large:>9}  {asym:>9}",
            avg_gain_integral(&model, psi, 1e-10)?
        );
    }
    Ok(())
}
