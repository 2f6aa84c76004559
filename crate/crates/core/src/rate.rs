//! Throughput of a low-dimensional sub-channel and exhaustive selection.

use std::f64::consts::LN_2;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::beamspace::{extract, BeamMask, Beamspace};
use crate::channel::{ChannelSet, SystemConfig};
use crate::error::{Error, Result};
use crate::numerics::{logdet2_capacity, CMatrix, Cholesky};

/// Chosen state, beams and the resulting sub-channel and rate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelectionOutcome {
    /// 0-based reconfiguration state; 0 when the search covered one matrix.
    pub state: usize,
    pub mask: BeamMask,
    pub sub_channel: CMatrix,
    /// Throughput in bits/s/Hz.
    pub rate_bits: f64,
}

/// `log₂|I + (ρ/l_t)·Ĥ·Ĥᴴ|` with equal power over the `l_t` streams.
pub fn rate_of(sub: &CMatrix, rho: f64, l_t: usize) -> Result<f64> {
    if l_t == 0 {
        return Err(Error::contract("l_t must be at least 1"));
    }
    logdet2_capacity(sub, rho / l_t as f64)
}

pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// Lexicographic k-subsets of `0..n`.
pub(crate) struct Combinations {
    n: usize,
    current: Vec<usize>,
    done: bool,
}

impl Combinations {
    pub(crate) fn new(n: usize, k: usize) -> Self {
        Self {
            n,
            current: (0..k).collect(),
            done: k > n,
        }
    }
}

impl Iterator for Combinations {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        if self.done {
            return None;
        }
        let out = self.current.clone();
        let k = self.current.len();
        let mut i = k;
        loop {
            if i == 0 {
                self.done = true;
                break;
            }
            i -= 1;
            if self.current[i] < self.n - k + i {
                self.current[i] += 1;
                for j in i + 1..k {
                    self.current[j] = self.current[j - 1] + 1;
                }
                break;
            }
        }
        Some(out)
    }
}

/// Best `l_r × l_t` sub-matrix of `hv` by exhaustive enumeration.
///
/// Row sets are enumerated lexicographically in the outer loop and column
/// sets in the inner loop. For each row set the Gram matrix `H_Rᴴ H_R` is
/// formed once; every column set then only needs an `l_t × l_t` Cholesky of
/// `I + s·G[C, C]`. Ties keep the lexicographically first mask.
pub fn best_submatrix_exhaustive(
    hv: &CMatrix,
    l_r: usize,
    l_t: usize,
    rho: f64,
    enum_cap: u64,
) -> Result<SelectionOutcome> {
    let (n_r, n_t) = hv.shape();
    if l_r == 0 || l_t == 0 || l_r > n_r || l_t > n_t {
        return Err(Error::contract(format!(
            "cannot select {l_r}x{l_t} from a {n_r}x{n_t} channel"
        )));
    }
    hv.ensure_finite("virtual channel")?;
    let candidates = binomial(n_r, l_r) * binomial(n_t, l_t);
    if candidates > enum_cap as u128 {
        return Err(Error::Capacity {
            candidates,
            cap: enum_cap,
        });
    }
    let scale = rho / l_t as f64;
    if !(scale > 0.0) || !scale.is_finite() {
        return Err(Error::domain(format!("rho must be positive, got {rho}")));
    }

    let mut best_ln = f64::NEG_INFINITY;
    let mut best: Option<(Vec<usize>, Vec<usize>)> = None;
    let mut block = CMatrix::zeros(l_t, l_t);
    for rows in Combinations::new(n_r, l_r) {
        let gram = hv.select(&rows, &(0..n_t).collect::<Vec<_>>())?.gram_cols();
        for cols in Combinations::new(n_t, l_t) {
            for (a, &ca) in cols.iter().enumerate() {
                for (b, &cb) in cols.iter().enumerate() {
                    let mut v = gram[(ca, cb)] * scale;
                    if a == b {
                        v += Complex64::new(1.0, 0.0);
                    }
                    block[(a, b)] = v;
                }
            }
            let ln_det = Cholesky::new(&block)?.ln_det();
            if ln_det > best_ln {
                best_ln = ln_det;
                best = Some((rows.clone(), cols));
            }
        }
    }
    let (rows, cols) = best.expect("at least one candidate");
    let mask = BeamMask::new(rows, cols)?;
    let sub_channel = extract(hv, &mask)?;
    let rate_bits = rate_of(&sub_channel, rho, l_t)?;
    debug_assert!((rate_bits - (best_ln / LN_2).max(0.0)).abs() < 1e-9);
    Ok(SelectionOutcome {
        state: 0,
        mask,
        sub_channel,
        rate_bits,
    })
}

/// Exhaustive search over every state and every sub-matrix; ties keep the
/// lowest state index.
pub fn best_state_exhaustive(
    channels: &ChannelSet,
    cfg: &SystemConfig,
) -> Result<SelectionOutcome> {
    let beamspace = Beamspace::for_config(cfg)?;
    best_state_exhaustive_in(channels, cfg, &beamspace)
}

/// As [`best_state_exhaustive`] with precomputed bases.
pub fn best_state_exhaustive_in(
    channels: &ChannelSet,
    cfg: &SystemConfig,
    beamspace: &Beamspace,
) -> Result<SelectionOutcome> {
    if channels.is_empty() {
        return Err(Error::contract("channel set is empty"));
    }
    let mut best: Option<SelectionOutcome> = None;
    for (state, h) in channels.matrices.iter().enumerate() {
        let hv = beamspace.to_virtual(h)?;
        let mut outcome =
            best_submatrix_exhaustive(&hv, cfg.l_r, cfg.l_t, cfg.rho(), cfg.enum_cap)?;
        outcome.state = state;
        if best
            .as_ref()
            .is_none_or(|b| outcome.rate_bits > b.rate_bits)
        {
            best = Some(outcome);
        }
    }
    Ok(best.expect("non-empty"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn combinations_enumerate_lexicographically() {
        let all: Vec<_> = Combinations::new(4, 2).collect();
        assert_eq!(
            all,
            vec![
                vec![0, 1],
                vec![0, 2],
                vec![0, 3],
                vec![1, 2],
                vec![1, 3],
                vec![2, 3]
            ]
        );
        assert_eq!(Combinations::new(3, 3).count(), 1);
        assert_eq!(Combinations::new(2, 3).count(), 0);
        assert_eq!(Combinations::new(17, 5).count() as u128, binomial(17, 5));
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(17, 5), 6188);
        assert_eq!(binomial(9, 2), 36);
        assert_eq!(binomial(5, 0), 1);
        assert_eq!(binomial(3, 4), 0);
    }

    #[test]
    fn rate_of_trivial_cases() {
        assert_eq!(rate_of(&CMatrix::zeros(5, 5), 3.0, 5).unwrap(), 0.0);
        let r = rate_of(&CMatrix::identity(5), 5.0, 5).unwrap();
        assert!((r - 5.0).abs() < 1e-13);
    }

    #[test]
    fn cap_is_enforced() {
        let hv = CMatrix::identity(17);
        let err = best_submatrix_exhaustive(&hv, 5, 5, 1.0, 10_000_000).unwrap_err();
        match err {
            Error::Capacity { candidates, cap } => {
                assert_eq!(candidates, 6188 * 6188);
                assert_eq!(cap, 10_000_000);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn scalar_selection_picks_largest_entry() {
        let hv = CMatrix::from_fn(4, 3, |i, j| {
            Complex64::new(
                ((i * 7 + j * 3) % 5) as f64,
                if i == 2 && j == 1 { 9.0 } else { 0.0 },
            )
        });
        let out = best_submatrix_exhaustive(&hv, 1, 1, 1.0, 1000).unwrap();
        assert_eq!(out.mask.rx_beams, vec![2]);
        assert_eq!(out.mask.tx_beams, vec![1]);
    }

    #[test]
    fn full_selection_equals_full_rate() {
        let hv = CMatrix::from_fn(3, 4, |i, j| Complex64::new(i as f64 - 1.0, j as f64 * 0.3));
        let out = best_submatrix_exhaustive(&hv, 3, 4, 2.0, 10).unwrap();
        let full = rate_of(&hv, 2.0, 4).unwrap();
        assert!((out.rate_bits - full).abs() < 1e-12);
    }
}
