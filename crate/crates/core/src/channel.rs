//! Clustered multipath channels, one independent matrix per reconfiguration
//! state.
//!
//! Each state gets its own geometry: `n_cl` clusters with means uniform on
//! `[-π/2, π/2]`, `n_ray` rays per cluster spread uniformly around the mean
//! with the configured standard deviation, and complex Gaussian ray gains
//! whose powers sum so that `E‖H‖²_F = n_r·n_t`.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{stream_id, CMatrix, RandomStream};

/// How cluster powers split the per-state power budget.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum ClusterPowerProfile {
    /// Every cluster receives the same share.
    #[default]
    Equal,
    /// Cluster `i` (0-based) receives a share proportional to
    /// `10^(−i·decay_db/10)`.
    Exponential { decay_db: f64 },
}

/// Scale used inside the receive-beam ISSA criterion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum IssaScale {
    /// `ρ/N_t`, as written in the published fast-selection algorithm.
    #[default]
    Verbatim,
    /// `ρ/L_t`, the scale used by the rate itself; each greedy step then
    /// adds exactly `log₂(1 + (ρ/L_t)·g)` bits.
    Consistent,
}

/// Scenario parameters. Field names double as keys in JSON config files.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SystemConfig {
    pub n_r: usize,
    pub n_t: usize,
    pub l_r: usize,
    pub l_t: usize,
    /// Number of reconfiguration states Ψ.
    pub psi: usize,
    /// Transmit-power-to-noise ratio ρ in dB.
    pub rho_db: f64,
    pub n_cl: usize,
    pub n_ray: usize,
    pub sigma_aoa_deg: f64,
    pub sigma_aod_deg: f64,
    /// Antenna spacing over wavelength, d/λ.
    pub spacing_ratio: f64,
    pub trials: usize,
    pub seed: u64,
    pub cluster_power: ClusterPowerProfile,
    pub issa_scale: IssaScale,
    /// Upper bound on sub-matrices examined by exhaustive search per state.
    pub enum_cap: u64,
}

impl Default for SystemConfig {
    fn default() -> Self {
        Self {
            n_r: 17,
            n_t: 17,
            l_r: 5,
            l_t: 5,
            psi: 8,
            rho_db: 0.0,
            n_cl: 10,
            n_ray: 8,
            sigma_aoa_deg: 3.0,
            sigma_aod_deg: 3.0,
            spacing_ratio: 0.5,
            trials: 5000,
            seed: 1,
            cluster_power: ClusterPowerProfile::Equal,
            issa_scale: IssaScale::Verbatim,
            enum_cap: 10_000_000,
        }
    }
}

impl SystemConfig {
    /// Desk-scale configuration where exhaustive search is affordable.
    pub fn desk() -> Self {
        Self {
            n_r: 9,
            n_t: 9,
            l_r: 2,
            l_t: 2,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("n_r", self.n_r),
            ("n_t", self.n_t),
            ("l_r", self.l_r),
            ("l_t", self.l_t),
            ("psi", self.psi),
            ("n_cl", self.n_cl),
            ("n_ray", self.n_ray),
            ("trials", self.trials),
        ];
        for (field, v) in positive {
            if v == 0 {
                return Err(Error::config(field, "must be at least 1"));
            }
        }
        if self.l_t > self.l_r {
            return Err(Error::config("l_t", "must not exceed l_r"));
        }
        if self.l_r > self.n_r {
            return Err(Error::config("l_r", "must not exceed n_r"));
        }
        if self.l_t > self.n_t {
            return Err(Error::config("l_t", "must not exceed n_t"));
        }
        if self.psi >= 1 << 24 {
            return Err(Error::config("psi", "must be below 2^24"));
        }
        if !(self.spacing_ratio > 0.0) || !self.spacing_ratio.is_finite() {
            return Err(Error::config("spacing_ratio", "must be positive"));
        }
        if !self.rho_db.is_finite() {
            return Err(Error::config("rho_db", "must be finite"));
        }
        for (field, v) in [
            ("sigma_aoa_deg", self.sigma_aoa_deg),
            ("sigma_aod_deg", self.sigma_aod_deg),
        ] {
            if !(v >= 0.0) || !v.is_finite() {
                return Err(Error::config(field, "must be a finite nonnegative angle"));
            }
        }
        if let ClusterPowerProfile::Exponential { decay_db } = self.cluster_power {
            if !decay_db.is_finite() {
                return Err(Error::config("cluster_power", "decay_db must be finite"));
            }
        }
        if self.n_r.is_multiple_of(2) || self.n_t.is_multiple_of(2) {
            log::warn!(
                "even array size ({}x{}): the virtual angle grid is centred for odd sizes",
                self.n_r,
                self.n_t
            );
        }
        Ok(())
    }

    /// ρ as a linear power ratio.
    pub fn rho(&self) -> f64 {
        10f64.powf(self.rho_db / 10.0)
    }

    /// Per-stream SNR `ρ/L_t` used by the throughput formula.
    pub fn rate_scale(&self) -> f64 {
        self.rho() / self.l_t as f64
    }

    /// Scale for the receive-beam ISSA stage.
    pub fn issa_receive_scale(&self) -> f64 {
        match self.issa_scale {
            IssaScale::Verbatim => self.rho() / self.n_t as f64,
            IssaScale::Consistent => self.rate_scale(),
        }
    }

    /// Per-cluster powers `σ²_{α,i}`; they sum to `γ = 1/n_ray`.
    pub fn cluster_powers(&self) -> Vec<f64> {
        let gamma = 1.0 / self.n_ray as f64;
        let weights: Vec<f64> = match self.cluster_power {
            ClusterPowerProfile::Equal => vec![1.0; self.n_cl],
            ClusterPowerProfile::Exponential { decay_db } => (0..self.n_cl)
                .map(|i| 10f64.powf(-(i as f64) * decay_db / 10.0))
                .collect(),
        };
        let total: f64 = weights.iter().sum();
        weights.into_iter().map(|w| gamma * w / total).collect()
    }
}

/// One propagation path.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Ray {
    pub aoa: f64,
    pub aod: f64,
    pub gain: Complex64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Cluster {
    pub aoa_mean: f64,
    pub aod_mean: f64,
    /// Average power of each ray gain in this cluster.
    pub power: f64,
    pub rays: Vec<Ray>,
}

/// Multipath geometry of one reconfiguration state.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusterGeometry {
    pub clusters: Vec<Cluster>,
}

/// The Ψ channel matrices of one realization.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelSet {
    pub matrices: Vec<CMatrix>,
}

impl ChannelSet {
    pub fn len(&self) -> usize {
        self.matrices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.matrices.is_empty()
    }

    /// First `psi` states, for prefix (common random numbers) sweeps.
    pub fn prefix(&self, psi: usize) -> ChannelSet {
        ChannelSet {
            matrices: self.matrices[..psi.min(self.len())].to_vec(),
        }
    }
}

/// ULA response `[1, e^{−j2πϑ}, …, e^{−j2πϑ(n−1)}]ᵀ` with `ϑ = (d/λ)·sin θ`.
pub fn steering_vector(angle: f64, n: usize, spacing_ratio: f64) -> CMatrix {
    let v = steering(angle, n, spacing_ratio);
    CMatrix::from_vec(n, 1, v).expect("length matches")
}

fn steering(angle: f64, n: usize, spacing_ratio: f64) -> Vec<Complex64> {
    let spatial = spacing_ratio * angle.sin();
    (0..n)
        .map(|k| Complex64::from_polar(1.0, -2.0 * PI * spatial * k as f64))
        .collect()
}

/// Draws the multipath geometry of one state.
pub fn draw_geometry(cfg: &SystemConfig, stream: &mut RandomStream) -> ClusterGeometry {
    // uniform with standard deviation σ has half-width √3·σ
    let half_r = 3f64.sqrt() * cfg.sigma_aoa_deg.to_radians();
    let half_t = 3f64.sqrt() * cfg.sigma_aod_deg.to_radians();
    let powers = cfg.cluster_powers();
    let clusters = powers
        .into_iter()
        .map(|power| {
            let aoa_mean = stream.uniform(-FRAC_PI_2, FRAC_PI_2);
            let aod_mean = stream.uniform(-FRAC_PI_2, FRAC_PI_2);
            let rays = (0..cfg.n_ray)
                .map(|_| {
                    let aoa = aoa_mean + stream.uniform(-half_r, half_r);
                    let aod = aod_mean + stream.uniform(-half_t, half_t);
                    Ray {
                        aoa: aoa.clamp(-FRAC_PI_2, FRAC_PI_2),
                        aod: aod.clamp(-FRAC_PI_2, FRAC_PI_2),
                        gain: stream.complex_normal(power),
                    }
                })
                .collect();
            Cluster {
                aoa_mean,
                aod_mean,
                power,
                rays,
            }
        })
        .collect();
    ClusterGeometry { clusters }
}

/// `H = Σ α·a_R(θʳ)·a_T(θᵗ)ᴴ` over all rays.
pub fn channel_from_geometry(
    geometry: &ClusterGeometry,
    n_r: usize,
    n_t: usize,
    spacing_ratio: f64,
) -> CMatrix {
    let mut h = CMatrix::zeros(n_r, n_t);
    for ray in geometry.clusters.iter().flat_map(|c| &c.rays) {
        let ar = steering(ray.aoa, n_r, spacing_ratio);
        let at = steering(ray.aod, n_t, spacing_ratio);
        for (i, a) in ar.iter().enumerate() {
            let ga = ray.gain * a;
            for (j, t) in at.iter().enumerate() {
                h[(i, j)] += ga * t.conj();
            }
        }
    }
    h
}

/// Channel matrices for all `cfg.psi` states of trial `trial_index`.
///
/// State `ψ` of trial `t` always draws from stream `(cfg.seed, (t, ψ))`, so
/// the result does not depend on which other trials or states are evaluated.
pub fn realize_channels(cfg: &SystemConfig, trial_index: u64) -> ChannelSet {
    let matrices = (0..cfg.psi)
        .map(|state| {
            let mut stream = RandomStream::new(cfg.seed, stream_id(trial_index, state as u64));
            let geometry = draw_geometry(cfg, &mut stream);
            channel_from_geometry(&geometry, cfg.n_r, cfg.n_t, cfg.spacing_ratio)
        })
        .collect();
    ChannelSet { matrices }
}

/// JSON layout of a channel dump.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ChannelDump {
    pub schema: u32,
    pub config: SystemConfig,
    pub trial_index: u64,
    pub states: Vec<StateMatrix>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StateMatrix {
    pub state: usize,
    pub rows: usize,
    pub cols: usize,
    /// Row-major `[re, im]` pairs.
    pub entries: Vec<[f64; 2]>,
}

impl ChannelDump {
    pub fn new(cfg: &SystemConfig, trial_index: u64, channels: &ChannelSet) -> Self {
        let states = channels
            .matrices
            .iter()
            .enumerate()
            .map(|(state, m)| StateMatrix {
                state,
                rows: m.rows(),
                cols: m.cols(),
                entries: m.as_slice().iter().map(|z| [z.re, z.im]).collect(),
            })
            .collect();
        Self {
            schema: 1,
            config: cfg.clone(),
            trial_index,
            states,
        }
    }

    pub fn to_channel_set(&self) -> Result<ChannelSet> {
        let matrices = self
            .states
            .iter()
            .map(|s| {
                let data = s
                    .entries
                    .iter()
                    .map(|&[re, im]| Complex64::new(re, im))
                    .collect();
                CMatrix::from_vec(s.rows, s.cols, data)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(ChannelSet { matrices })
    }
}
