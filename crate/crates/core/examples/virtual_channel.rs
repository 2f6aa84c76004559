//! Beamspace view of a clustered channel: how much power the strongest
//! 5x5 beam block holds out of 17x17.

use reconfig_mimo::beamspace::{captured_power_fraction, magnitude_mask};
use reconfig_mimo::channel::realize_channels;
use reconfig_mimo::numerics::logdet2_capacity;
use reconfig_mimo::{Beamspace, SystemConfig};

fn main() -> reconfig_mimo::Result<()> {
    let cfg = SystemConfig::default();
    let bs = Beamspace::for_config(&cfg)?;
    for trial in 0..5 {
        let h = &realize_channels(&cfg, trial).matrices[0];
        let hv = bs.to_virtual(h)?;
        let mask = magnitude_mask(&hv, cfg.l_r, cfg.l_t)?;
        println!(
            "trial {trial}: rx {:?} tx {:?} hold {:5.1}% of the power; \
             rate full H {:.4} = full H_V {:.4}",
            mask.rx_beams,
            mask.tx_beams,
            100.0 * captured_power_fraction(&hv, &mask)?,
            logdet2_capacity(h, cfg.rate_scale())?,
            logdet2_capacity(&hv, cfg.rate_scale())?,
        );
    }
    Ok(())
}
