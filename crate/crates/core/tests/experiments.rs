//! Properties of the Monte Carlo experiments at small and full scale.

use num_complex::Complex64;
use reconfig_mimo::analysis::avg_gain_integral;
use reconfig_mimo::beamspace::{dft_basis, from_virtual};
use reconfig_mimo::fastsel::fast_select;
use reconfig_mimo::numerics::{CMatrix, RandomStream};
use reconfig_mimo::rate::best_state_exhaustive;
use reconfig_mimo::simlab::{
    avg_gain_of, empirical_avg_gain, empirical_outage_gains, fit_rate_model, loss_ratios,
    pdf_export, simulate, Selector,
};
use reconfig_mimo::{ChannelSet, SystemConfig};

#[test]
fn synthetic_normal_histogram_matches_its_fit() {
    let mut rng = RandomStream::new(8, 0);
    let values: Vec<f64> = (0..1_000_000).map(|_| rng.standard_normal()).collect();
    let pdf = pdf_export(&values, 50).unwrap();
    assert!(pdf.l1_distance() < 0.05, "{}", pdf.l1_distance());
    assert!(pdf.model.mu.abs() < 0.01 && (pdf.model.var - 1.0).abs() < 0.01);
}

#[test]
fn gaussian_model_closes_on_the_simulated_gain() {
    let cfg = SystemConfig::default();
    let table = simulate(&cfg, 8, false).unwrap();
    let model = fit_rate_model(&table.samples(Selector::Fast, 1).unwrap()).unwrap();
    for psi in 1..=8 {
        let (g, _) = avg_gain_of(&table.samples(Selector::Fast, psi).unwrap());
        let analytic = avg_gain_integral(&model, psi, 1e-9).unwrap();
        assert!((g - analytic).abs() <= 0.02, "psi={psi}: {g} vs {analytic}");
    }
    let out = empirical_outage_gains(&table, Selector::Fast, &[1, 2, 4, 8], 0.05).unwrap();
    assert_eq!(out[0], 1.0);
    assert!(out.windows(2).all(|w| w[1] > w[0]), "{out:?}");
}

#[test]
fn desk_loss_ratio_trend_and_dominance() {
    let cfg = SystemConfig {
        trials: 1000,
        ..SystemConfig::desk()
    };
    let table = simulate(&cfg, 8, true).unwrap();
    let rows = loss_ratios(&table, &[1, 2, 4, 8]).unwrap();
    for r in &rows {
        assert!(r.min_trial_gap >= -1e-9 && r.ratio >= 0.0);
    }
    assert!(rows[3].ratio >= rows[1].ratio - 2.0 * rows[3].std_error.hypot(rows[1].std_error));
    let exhaustive_gain = empirical_avg_gain(
        &SystemConfig { trials: 100, ..cfg },
        Selector::Exhaustive,
        &[1, 4],
    )
    .unwrap();
    assert_eq!(exhaustive_gain[0], 1.0);
    assert!(exhaustive_gain[1] > 1.0);
}

/// Antenna-domain channel whose virtual representation is `hv`.
fn from_beams(hv: &CMatrix) -> CMatrix {
    let a_r = dft_basis(hv.rows(), 0.5).unwrap();
    let a_t = dft_basis(hv.cols(), 0.5).unwrap();
    from_virtual(hv, &a_r, &a_t).unwrap()
}

#[test]
fn fast_equals_exhaustive_on_diagonal_beams() {
    let cfg = SystemConfig {
        n_r: 6,
        n_t: 6,
        l_r: 2,
        l_t: 2,
        psi: 1,
        ..SystemConfig::default()
    };
    let d = [0.3, 2.0, 0.7, 1.5, 0.1, 0.9];
    let hv = CMatrix::diag(&d);
    let set = ChannelSet {
        matrices: vec![from_beams(&hv)],
    };
    let fast = fast_select(&set, &cfg).unwrap();
    let best = best_state_exhaustive(&set, &cfg).unwrap();
    assert!((fast.rate_bits - best.rate_bits).abs() < 1e-12);
    let mut rx = fast.mask.rx_beams.clone();
    rx.sort();
    assert_eq!(rx, vec![1, 3]);
}

#[test]
fn fast_state_choice_is_exact_for_block_sparse_channels() {
    let cfg = SystemConfig {
        n_r: 7,
        n_t: 7,
        l_r: 2,
        l_t: 2,
        psi: 4,
        ..SystemConfig::default()
    };
    let mut rng = RandomStream::new(17, 0);
    for _ in 0..20 {
        let matrices = (0..4)
            .map(|_| {
                let (r0, c0) = (
                    (rng.uniform(0.0, 6.0)) as usize,
                    (rng.uniform(0.0, 6.0)) as usize,
                );
                let mut hv = CMatrix::zeros(7, 7);
                for (i, j) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
                    hv[(r0 + i, c0 + j)] = rng.complex_normal(1.0) * Complex64::new(3.0, 0.0);
                }
                from_beams(&hv)
            })
            .collect();
        let set = ChannelSet { matrices };
        let fast = fast_select(&set, &cfg).unwrap();
        let best = best_state_exhaustive(&set, &cfg).unwrap();
        assert_eq!(fast.state, best.state);
        assert!((fast.rate_bits - best.rate_bits).abs() < 1e-9);
    }
}

#[test]
fn parallel_and_serial_tables_agree() {
    let cfg = SystemConfig {
        trials: 64,
        ..SystemConfig::desk()
    };
    let parallel = simulate(&cfg, 3, true).unwrap();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .unwrap();
    let serial = pool.install(|| simulate(&cfg, 3, true).unwrap());
    assert_eq!(parallel, serial);
}
