//! Pick a reconfiguration state and beams with the low-complexity pipeline.

use reconfig_mimo::channel::realize_channels;
use reconfig_mimo::fastsel::fast_select;
use reconfig_mimo::SystemConfig;

fn main() -> reconfig_mimo::Result<()> {
    let cfg = SystemConfig::default();
    for trial in 0..5 {
        let channels = realize_channels(&cfg, trial);
        let out = fast_select(&channels, &cfg)?;
        println!(
            "trial {trial}: state {} of {}, rx beams {:?}, tx beams {:?}, {:.3} bits/s/Hz",
            out.state, cfg.psi, out.mask.rx_beams, out.mask.tx_beams, out.rate_bits
        );
    }
    Ok(())
}
