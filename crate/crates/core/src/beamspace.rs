//! Virtual (beamspace) channel representation.
//!
//! Columns of the basis matrices are normalized ULA responses steered to a
//! uniform grid of spatial angles `ϑ̈ᵢ = (i − (n−1)/2)/n`, so that
//! `H = A_R·H_V·A_Tᴴ` expands the channel over fixed receive/transmit beam
//! pairs and `H_V = A_Rᴴ·H·A_T`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::CMatrix;

/// Selected receive and transmit beam indices (0-based), in selection order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BeamMask {
    pub rx_beams: Vec<usize>,
    pub tx_beams: Vec<usize>,
}

impl BeamMask {
    pub fn new(rx_beams: Vec<usize>, tx_beams: Vec<usize>) -> Result<Self> {
        for (side, beams) in [("receive", &rx_beams), ("transmit", &tx_beams)] {
            let mut sorted = beams.clone();
            sorted.sort_unstable();
            if sorted.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::contract(format!(
                    "duplicate {side} beam in {beams:?}"
                )));
            }
        }
        Ok(Self { rx_beams, tx_beams })
    }

    /// Mask keeping every beam of an `rows × cols` virtual channel.
    pub fn full(rows: usize, cols: usize) -> Self {
        Self {
            rx_beams: (0..rows).collect(),
            tx_beams: (0..cols).collect(),
        }
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rx_beams.len(), self.tx_beams.len())
    }
}

/// Spatial-angle grid `ϑ̈ᵢ` of an `n`-beam basis.
pub fn virtual_grid(n: usize) -> Vec<f64> {
    let center = (n as f64 - 1.0) / 2.0;
    (0..n).map(|i| (i as f64 - center) / n as f64).collect()
}

/// Unitary DFT beam basis; column `i` is `a(θ̈ᵢ)/√n` with
/// `θ̈ᵢ = arcsin(ϑ̈ᵢ·λ/d)`.
pub fn dft_basis(n: usize, spacing_ratio: f64) -> Result<CMatrix> {
    if n == 0 {
        return Err(Error::contract("basis size must be at least 1"));
    }
    if !(spacing_ratio > 0.0) {
        return Err(Error::domain(format!(
            "spacing ratio {spacing_ratio} must be positive"
        )));
    }
    let norm = 1.0 / (n as f64).sqrt();
    let mut basis = CMatrix::zeros(n, n);
    for (i, g) in virtual_grid(n).into_iter().enumerate() {
        let s = g / spacing_ratio;
        if s.abs() > 1.0 {
            return Err(Error::domain(format!(
                "virtual angle {i} needs sin θ = {s:.4}; spacing ratio {spacing_ratio} is too small"
            )));
        }
        let angle = s.asin();
        let a = crate::channel::steering_vector(angle, n, spacing_ratio);
        for k in 0..n {
            basis[(k, i)] = a[(k, 0)] * norm;
        }
    }
    Ok(basis)
}

/// `A_Rᴴ·H·A_T`.
pub fn to_virtual(h: &CMatrix, basis_rx: &CMatrix, basis_tx: &CMatrix) -> Result<CMatrix> {
    if basis_rx.rows() != h.rows() || basis_tx.rows() != h.cols() {
        return Err(Error::contract(format!(
            "bases {:?}/{:?} do not match channel {:?}",
            basis_rx.shape(),
            basis_tx.shape(),
            h.shape()
        )));
    }
    basis_rx.adjoint().matmul(&h.matmul(basis_tx)?)
}

/// `A_R·H_V·A_Tᴴ`, the inverse of [`to_virtual`].
pub fn from_virtual(hv: &CMatrix, basis_rx: &CMatrix, basis_tx: &CMatrix) -> Result<CMatrix> {
    if basis_rx.cols() != hv.rows() || basis_tx.cols() != hv.cols() {
        return Err(Error::contract("bases do not match virtual channel"));
    }
    basis_rx.matmul(&hv.matmul(&basis_tx.adjoint())?)
}

/// Precomputed receive/transmit bases for one array geometry. Read-only,
/// so one instance can be shared by every worker.
#[derive(Debug, Clone)]
pub struct Beamspace {
    basis_rx: CMatrix,
    basis_tx: CMatrix,
    basis_rx_adj: CMatrix,
}

/// Virtual channel together with its bases.
#[derive(Debug, Clone)]
pub struct VirtualChannel {
    pub full: CMatrix,
    pub basis_rx: CMatrix,
    pub basis_tx: CMatrix,
}

impl Beamspace {
    pub fn new(n_r: usize, n_t: usize, spacing_ratio: f64) -> Result<Self> {
        let basis_rx = dft_basis(n_r, spacing_ratio)?;
        let basis_tx = dft_basis(n_t, spacing_ratio)?;
        let basis_rx_adj = basis_rx.adjoint();
        Ok(Self {
            basis_rx,
            basis_tx,
            basis_rx_adj,
        })
    }

    pub fn for_config(cfg: &crate::SystemConfig) -> Result<Self> {
        Self::new(cfg.n_r, cfg.n_t, cfg.spacing_ratio)
    }

    pub fn basis_rx(&self) -> &CMatrix {
        &self.basis_rx
    }

    pub fn basis_tx(&self) -> &CMatrix {
        &self.basis_tx
    }

    pub fn to_virtual(&self, h: &CMatrix) -> Result<CMatrix> {
        if self.basis_rx.rows() != h.rows() || self.basis_tx.rows() != h.cols() {
            return Err(Error::contract(format!(
                "channel {:?} does not match beamspace {}x{}",
                h.shape(),
                self.basis_rx.rows(),
                self.basis_tx.rows()
            )));
        }
        self.basis_rx_adj.matmul(&h.matmul(&self.basis_tx)?)
    }

    pub fn virtual_channel(&self, h: &CMatrix) -> Result<VirtualChannel> {
        Ok(VirtualChannel {
            full: self.to_virtual(h)?,
            basis_rx: self.basis_rx.clone(),
            basis_tx: self.basis_tx.clone(),
        })
    }
}

/// Indices of the `k` largest values, ties to the lower index, in
/// descending value order.
fn top_k(values: &[f64], k: usize) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..values.len()).collect();
    idx.sort_by(|&a, &b| values[b].total_cmp(&values[a]).then(a.cmp(&b)));
    idx.truncate(k);
    idx
}

/// Magnitude-based mask: the `l_r` rows with the largest power, then the
/// `l_t` columns with the largest power inside those rows.
pub fn magnitude_mask(hv: &CMatrix, l_r: usize, l_t: usize) -> Result<BeamMask> {
    if l_r > hv.rows() || l_t > hv.cols() {
        return Err(Error::contract(format!(
            "mask {l_r}x{l_t} larger than virtual channel {:?}",
            hv.shape()
        )));
    }
    let row_power: Vec<f64> = (0..hv.rows())
        .map(|i| hv.row(i).iter().map(|z| z.norm_sqr()).sum())
        .collect();
    let rx = top_k(&row_power, l_r);
    let col_power: Vec<f64> = (0..hv.cols())
        .map(|j| rx.iter().map(|&i| hv[(i, j)].norm_sqr()).sum())
        .collect();
    let tx = top_k(&col_power, l_t);
    BeamMask::new(rx, tx)
}

/// Low-dimensional virtual channel `[H_V(i, j)]` for `i ∈ rx`, `j ∈ tx`.
pub fn extract(hv: &CMatrix, mask: &BeamMask) -> Result<CMatrix> {
    hv.select(&mask.rx_beams, &mask.tx_beams)
}

/// Share of `‖H_V‖²_F` inside the mask.
pub fn captured_power_fraction(hv: &CMatrix, mask: &BeamMask) -> Result<f64> {
    let total = hv.frobenius_sq();
    if total == 0.0 {
        return Ok(0.0);
    }
    Ok(extract(hv, mask)?.frobenius_sq() / total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn scalar_basis() {
        let b = dft_basis(1, 0.5).unwrap();
        assert!((b[(0, 0)] - c(1.0)).norm() < 1e-15);
    }

    #[test]
    fn center_beam_is_broadside() {
        assert_eq!(virtual_grid(3), vec![-1.0 / 3.0, 0.0, 1.0 / 3.0]);
        let b = dft_basis(3, 0.5).unwrap();
        let s = 1.0 / 3f64.sqrt();
        for k in 0..3 {
            assert!((b[(k, 1)] - c(s)).norm() < 1e-15);
        }
    }

    #[test]
    fn spacing_too_small_is_rejected() {
        let err = dft_basis(17, 0.3).unwrap_err();
        assert!(
            matches!(err, Error::Domain(ref m) if m.contains("virtual angle 0")),
            "{err}"
        );
        assert!(dft_basis(17, 0.5).is_ok());
        assert!(dft_basis(17, 1.0).is_ok());
    }

    #[test]
    fn ordered_diagonal_mask() {
        let hv = CMatrix::diag(&[5.0, 4.0, 3.0, 2.0, 1.0]);
        let m = magnitude_mask(&hv, 3, 3).unwrap();
        assert_eq!(m.rx_beams, vec![0, 1, 2]);
        assert_eq!(m.tx_beams, vec![0, 1, 2]);
    }

    #[test]
    fn single_entry_mask() {
        let mut hv = CMatrix::zeros(9, 9);
        hv[(4, 7)] = c(2.0);
        let m = magnitude_mask(&hv, 1, 1).unwrap();
        assert_eq!(m, BeamMask::new(vec![4], vec![7]).unwrap());
    }

    #[test]
    fn ties_break_to_lower_index() {
        let hv = CMatrix::from_fn(4, 4, |_, _| c(1.0));
        let m = magnitude_mask(&hv, 2, 2).unwrap();
        assert_eq!(m.rx_beams, vec![0, 1]);
        assert_eq!(m.tx_beams, vec![0, 1]);
    }

    #[test]
    fn extract_cases() {
        let hv = CMatrix::from_fn(3, 3, |i, j| c((3 * i + j) as f64));
        assert_eq!(extract(&hv, &BeamMask::full(3, 3)).unwrap(), hv);
        let one = extract(&hv, &BeamMask::new(vec![1], vec![2]).unwrap()).unwrap();
        assert_eq!(one.shape(), (1, 1));
        assert_eq!(one[(0, 0)], hv[(1, 2)]);
        let bad = BeamMask::new(vec![3], vec![0]).unwrap();
        assert!(matches!(extract(&hv, &bad), Err(Error::Contract(_))));
    }

    #[test]
    fn duplicate_beams_rejected() {
        assert!(BeamMask::new(vec![1, 1], vec![0]).is_err());
        assert!(BeamMask::new(vec![1], vec![2, 0, 2]).is_err());
    }

    #[test]
    fn mismatched_bases() {
        let b3 = dft_basis(3, 0.5).unwrap();
        let b5 = dft_basis(5, 0.5).unwrap();
        assert!(matches!(
            to_virtual(&CMatrix::zeros(3, 3), &b3, &b5),
            Err(Error::Contract(_))
        ));
    }
}
