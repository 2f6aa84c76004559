//! Fast selection: the state with the largest full-channel log-determinant,
//! then greedy incremental (ISSA) receive-beam and transmit-beam selection
//! on that state's virtual channel.

use num_complex::Complex64;

use crate::beamspace::{extract, BeamMask, Beamspace};
use crate::channel::{ChannelSet, SystemConfig};
use crate::error::{Error, Result};
use crate::numerics::{logdet2_capacity, CMatrix, Cholesky};
use crate::rate::{rate_of, SelectionOutcome};

/// `argmax_ψ log₂|I + (ρ/l_t)·H_ψ·H_ψᴴ|` over full channel matrices; ties to
/// the lowest state.
pub fn select_state_fast(channels: &ChannelSet, rho: f64, l_t: usize) -> Result<usize> {
    if channels.is_empty() {
        return Err(Error::contract("channel set is empty"));
    }
    let scale = rho / l_t as f64;
    let mut best = (0, f64::NEG_INFINITY);
    for (state, h) in channels.matrices.iter().enumerate() {
        let v = logdet2_capacity(h, scale)?;
        if v > best.1 {
            best = (state, v);
        }
    }
    Ok(best.0)
}

/// Index of the largest gain among unselected candidates, lowest index on ties.
fn argmax_unselected(gains: &[f64], selected: &[usize]) -> usize {
    let mut best: Option<(usize, f64)> = None;
    for (j, &g) in gains.iter().enumerate() {
        if selected.contains(&j) {
            continue;
        }
        if best.is_none_or(|(_, bg)| g > bg) {
            best = Some((j, g));
        }
    }
    best.expect("an unselected candidate remains").0
}

/// Receive-beam increments `g_j = h_j·(I + c·ĤᴴĤ)⁻¹·h_jᴴ` for every row `j` of
/// `hv`, where `Ĥ` stacks the already selected rows. With nothing selected
/// this is the row power.
pub fn receive_gains(hv: &CMatrix, selected: &[usize], scale: f64) -> Result<Vec<f64>> {
    let n_t = hv.cols();
    if selected.is_empty() {
        return Ok((0..hv.rows())
            .map(|j| hv.row(j).iter().map(|z| z.norm_sqr()).sum())
            .collect());
    }
    let chosen = hv.select(selected, &(0..n_t).collect::<Vec<_>>())?;
    let mut m = chosen.gram_cols().scale(scale);
    for i in 0..n_t {
        m[(i, i)] += 1.0;
    }
    let chol = Cholesky::new(&m)?;
    Ok((0..hv.rows())
        .map(|j| {
            let h: Vec<Complex64> = hv.row(j).iter().map(|z| z.conj()).collect();
            chol.quad_form_inv(&h)
        })
        .collect())
}

/// Transmit-beam increments
/// `g_j = h_jᴴ·(I − c·Ĥ·(I + c·ĤᴴĤ)⁻¹·Ĥᴴ)·h_j` for every column `j` of
/// `hsub`, where `Ĥ` holds the already selected columns.
pub fn transmit_gains(hsub: &CMatrix, selected: &[usize], scale: f64) -> Result<Vec<f64>> {
    let l_r = hsub.rows();
    let columns: Vec<Vec<Complex64>> = (0..hsub.cols()).map(|j| hsub.col(j)).collect();
    let power = |h: &[Complex64]| h.iter().map(|z| z.norm_sqr()).sum::<f64>();
    if selected.is_empty() {
        return Ok(columns.iter().map(|h| power(h)).collect());
    }
    let chosen = hsub.select(&(0..l_r).collect::<Vec<_>>(), selected)?;
    let mut k = chosen.gram_cols().scale(scale);
    for i in 0..selected.len() {
        k[(i, i)] += 1.0;
    }
    let chol = Cholesky::new(&k)?;
    Ok(columns
        .iter()
        .map(|h| {
            // u = Ĥᴴ h
            let u: Vec<Complex64> = (0..selected.len())
                .map(|a| (0..l_r).map(|r| chosen[(r, a)].conj() * h[r]).sum())
                .collect();
            (power(h) - scale * chol.quad_form_inv(&u)).max(0.0)
        })
        .collect())
}

/// Greedy receive-beam selection; rows in the order they were picked.
pub fn issa_receive(hv: &CMatrix, l_r: usize, scale: f64) -> Result<Vec<usize>> {
    if l_r > hv.rows() {
        return Err(Error::contract(format!(
            "cannot select {l_r} receive beams from {}",
            hv.rows()
        )));
    }
    let mut selected = Vec::with_capacity(l_r);
    while selected.len() < l_r {
        let gains = receive_gains(hv, &selected, scale)?;
        selected.push(argmax_unselected(&gains, &selected));
    }
    Ok(selected)
}

/// Greedy transmit-beam selection on the `l_r × n_t` matrix of selected
/// receive rows, using `ρ/l_t`.
pub fn issa_transmit(hsub: &CMatrix, l_t: usize, rho: f64) -> Result<Vec<usize>> {
    if l_t == 0 || l_t > hsub.cols() {
        return Err(Error::contract(format!(
            "cannot select {l_t} transmit beams from {}",
            hsub.cols()
        )));
    }
    let scale = rho / l_t as f64;
    let mut selected = Vec::with_capacity(l_t);
    while selected.len() < l_t {
        let gains = transmit_gains(hsub, &selected, scale)?;
        selected.push(argmax_unselected(&gains, &selected));
    }
    Ok(selected)
}

/// Receive then transmit ISSA on one virtual channel.
pub fn select_beams(hv: &CMatrix, cfg: &SystemConfig) -> Result<SelectionOutcome> {
    hv.ensure_finite("virtual channel")?;
    let rx = issa_receive(hv, cfg.l_r, cfg.issa_receive_scale())?;
    let rows = hv.select(&rx, &(0..hv.cols()).collect::<Vec<_>>())?;
    let tx = issa_transmit(&rows, cfg.l_t, cfg.rho())?;
    let mask = BeamMask::new(rx, tx)?;
    let sub_channel = extract(hv, &mask)?;
    let rate_bits = rate_of(&sub_channel, cfg.rho(), cfg.l_t)?;
    Ok(SelectionOutcome {
        state: 0,
        mask,
        sub_channel,
        rate_bits,
    })
}

/// Full fast selection pipeline.
pub fn fast_select(channels: &ChannelSet, cfg: &SystemConfig) -> Result<SelectionOutcome> {
    let beamspace = Beamspace::for_config(cfg)?;
    fast_select_in(channels, cfg, &beamspace)
}

/// As [`fast_select`] with precomputed bases.
pub fn fast_select_in(
    channels: &ChannelSet,
    cfg: &SystemConfig,
    beamspace: &Beamspace,
) -> Result<SelectionOutcome> {
    let state = select_state_fast(channels, cfg.rho(), cfg.l_t)?;
    let hv = beamspace.to_virtual(&channels.matrices[state])?;
    let mut outcome = select_beams(&hv, cfg)?;
    outcome.state = state;
    Ok(outcome)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn single_state_is_zero() {
        let set = ChannelSet {
            matrices: vec![CMatrix::identity(3)],
        };
        assert_eq!(select_state_fast(&set, 1.0, 1).unwrap(), 0);
    }

    #[test]
    fn scaled_state_dominates() {
        let h = CMatrix::from_fn(3, 3, |i, j| c((i + 2 * j) as f64 * 0.1, 0.2));
        let set = ChannelSet {
            matrices: vec![h.clone(), h.scale(2.0)],
        };
        assert_eq!(select_state_fast(&set, 1.0, 2).unwrap(), 1);
    }

    #[test]
    fn orthogonal_rows_sort_by_norm() {
        let hv = CMatrix::diag(&[1.0, 3.0, 2.0, 0.5]);
        assert_eq!(issa_receive(&hv, 2, 0.25).unwrap(), vec![1, 2]);
        assert_eq!(issa_transmit(&hv, 3, 1.0).unwrap(), vec![1, 2, 0]);
    }

    #[test]
    fn duplicate_row_is_suppressed() {
        // rows 0 and 1 identical and strong, row 2 orthogonal and weaker
        let hv = CMatrix::from_vec(
            3,
            2,
            vec![
                c(3.0, 0.0),
                c(0.0, 0.0),
                c(3.0, 0.0),
                c(0.0, 0.0),
                c(0.0, 0.0),
                c(1.0, 0.0),
            ],
        )
        .unwrap();
        assert_eq!(issa_receive(&hv, 2, 1.0).unwrap(), vec![0, 2]);
    }

    #[test]
    fn duplicate_column_is_suppressed() {
        let hsub = CMatrix::from_vec(
            2,
            3,
            vec![
                c(2.0, 0.0),
                c(2.0, 0.0),
                c(0.0, 0.0),
                c(0.0, 0.0),
                c(0.0, 0.0),
                c(0.7, 0.0),
            ],
        )
        .unwrap();
        assert_eq!(issa_transmit(&hsub, 2, 20.0).unwrap(), vec![0, 2]);
    }

    #[test]
    fn zero_channel_falls_back_to_lowest_indices() {
        let hv = CMatrix::zeros(5, 5);
        assert_eq!(issa_receive(&hv, 3, 1.0).unwrap(), vec![0, 1, 2]);
        let cfg = SystemConfig {
            n_r: 5,
            n_t: 5,
            l_r: 2,
            l_t: 2,
            ..SystemConfig::default()
        };
        let out = select_beams(&hv, &cfg).unwrap();
        assert_eq!(out.mask.rx_beams, vec![0, 1]);
        assert_eq!(out.mask.tx_beams, vec![0, 1]);
        assert_eq!(out.rate_bits, 0.0);
    }

    #[test]
    fn too_many_beams() {
        let hv = CMatrix::identity(3);
        assert!(issa_receive(&hv, 4, 1.0).is_err());
        assert!(issa_transmit(&hv, 4, 1.0).is_err());
    }
}
