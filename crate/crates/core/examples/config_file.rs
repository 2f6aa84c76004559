//! Scenario configuration from JSON: defaults fill missing keys, unknown
//! keys and bad values are rejected with the field name.

use reconfig_mimo::SystemConfig;

fn main() {
    let documents = [
        r#"{"n_r": 9, "n_t": 9, "l_r": 2, "l_t": 2, "rho_db": 10}"#,
        r#"{"cluster_power": {"kind": "exponential", "decay_db": 3}, "issa_scale": "consistent"}"#,
        r#"{"n_rr": 9}"#,
        r#"{"l_r": 20}"#,
    ];
    for doc in documents {
        match serde_json::from_str::<SystemConfig>(doc) {
            Err(e) => println!("{doc}\n  parse error: {e}"),
            Ok(cfg) => match cfg.validate() {
                Ok(()) => println!(
                    "{doc}\n  ok: {}x{} array, {}x{} chains, rho {} dB, receive scale {:.4}",
                    cfg.n_r,
                    cfg.n_t,
                    cfg.l_r,
                    cfg.l_t,
                    cfg.rho_db,
                    cfg.issa_receive_scale()
                ),
                Err(e) => println!("{doc}\n  rejected: {e}"),
            },
        }
    }
}
