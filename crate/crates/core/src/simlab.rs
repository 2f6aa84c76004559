//! Monte Carlo experiments: per-state rate tables, Gaussian fits, empirical
//! average/outage gains and the fast-selection loss ratio.
//!
//! Every experiment draws one table at the largest Ψ of interest. Smaller Ψ
//! reuse its first columns, so gain curves are paired across Ψ and across
//! selectors.

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analysis::GaussianRateModel;
use crate::beamspace::Beamspace;
use crate::channel::{realize_channels, SystemConfig};
use crate::error::{Error, Result};
use crate::fastsel::select_beams;
use crate::numerics::{logdet2_capacity, RandomStream};
use crate::rate::best_submatrix_exhaustive;

/// Beam-selection algorithm applied inside each state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Selector {
    Exhaustive,
    Fast,
}

impl fmt::Display for Selector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Selector::Exhaustive => "exhaustive",
            Selector::Fast => "fast",
        })
    }
}

impl FromStr for Selector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exhaustive" => Ok(Selector::Exhaustive),
            "fast" => Ok(Selector::Fast),
            other => Err(Error::config(
                "selector",
                format!("unknown selector {other:?}; expected \"fast\" or \"exhaustive\""),
            )),
        }
    }
}

/// Rates for every (trial, state) pair, stored trial-major.
#[derive(Debug, Clone, PartialEq)]
pub struct RateTable {
    trials: usize,
    states: usize,
    fast: Vec<f64>,
    exhaustive: Option<Vec<f64>>,
    full: Vec<f64>,
}

impl RateTable {
    /// Builds a table from explicit values; `full` is the full-channel
    /// log-determinant used to pick the state in the fast pipeline.
    pub fn from_parts(
        trials: usize,
        states: usize,
        fast: Vec<f64>,
        exhaustive: Option<Vec<f64>>,
        full: Vec<f64>,
    ) -> Result<Self> {
        let n = trials * states;
        if fast.len() != n || full.len() != n || exhaustive.as_ref().is_some_and(|e| e.len() != n) {
            return Err(Error::contract(format!(
                "rate table needs {trials}×{states} = {n} entries per column"
            )));
        }
        Ok(Self {
            trials,
            states,
            fast,
            exhaustive,
            full,
        })
    }

    pub fn trials(&self) -> usize {
        self.trials
    }

    pub fn states(&self) -> usize {
        self.states
    }

    pub fn has_exhaustive(&self) -> bool {
        self.exhaustive.is_some()
    }

    fn column(&self, selector: Selector) -> Result<&[f64]> {
        match selector {
            Selector::Fast => Ok(&self.fast),
            Selector::Exhaustive => self.exhaustive.as_deref().ok_or_else(|| {
                Error::contract("rate table was simulated without exhaustive search")
            }),
        }
    }

    /// Rate of `state` in `trial` under `selector`.
    pub fn rate(&self, selector: Selector, trial: usize, state: usize) -> Result<f64> {
        Ok(self.column(selector)?[trial * self.states + state])
    }

    fn check_psi(&self, psi: usize) -> Result<()> {
        if psi == 0 || psi > self.states {
            Err(Error::contract(format!(
                "Ψ = {psi} outside 1..={} simulated states",
                self.states
            )))
        } else {
            Ok(())
        }
    }

    /// Single-state (state 0) and best-of-first-Ψ rates per trial.
    pub fn samples(&self, selector: Selector, psi: usize) -> Result<RateSamples> {
        self.check_psi(psi)?;
        let col = self.column(selector)?;
        let mut single = Vec::with_capacity(self.trials);
        let mut best = Vec::with_capacity(self.trials);
        for row in col.chunks(self.states) {
            single.push(row[0]);
            best.push(row[..psi].iter().copied().fold(f64::NEG_INFINITY, f64::max));
        }
        Ok(RateSamples {
            single,
            best,
            psi,
            selector,
        })
    }

    /// Per-trial rate of the complete fast pipeline over the first Ψ states:
    /// the state maximizing the full-channel log-determinant, then greedy
    /// beams on that state.
    pub fn pipeline_rates(&self, psi: usize) -> Result<Vec<f64>> {
        self.check_psi(psi)?;
        Ok((0..self.trials)
            .map(|t| {
                let row = t * self.states;
                let mut chosen = 0;
                for s in 1..psi {
                    if self.full[row + s] > self.full[row + chosen] {
                        chosen = s;
                    }
                }
                self.fast[row + chosen]
            })
            .collect())
    }

    /// Per-trial best exhaustive rate over the first Ψ states.
    pub fn exhaustive_best(&self, psi: usize) -> Result<Vec<f64>> {
        Ok(self.samples(Selector::Exhaustive, psi)?.best)
    }

    /// CSV with header `trial,state,rate_bits`.
    pub fn write_csv<W: Write>(&self, selector: Selector, mut out: W) -> Result<()> {
        let col = self.column(selector)?;
        writeln!(out, "trial,state,rate_bits")?;
        for (i, v) in col.iter().enumerate() {
            writeln!(out, "{},{},{}", i / self.states, i % self.states, v)?;
        }
        Ok(())
    }
}

/// Simulates `cfg.trials` trials of `states` states each. Trials run in
/// parallel; results are merged in trial order, so the table does not depend
/// on the thread count.
pub fn simulate(cfg: &SystemConfig, states: usize, with_exhaustive: bool) -> Result<RateTable> {
    cfg.validate()?;
    if states == 0 {
        return Err(Error::contract("at least one state must be simulated"));
    }
    let sim_cfg = SystemConfig {
        psi: states,
        ..cfg.clone()
    };
    let beamspace = Beamspace::for_config(&sim_cfg)?;
    let rho = sim_cfg.rho();
    let scale = sim_cfg.rate_scale();
    log::debug!(
        "simulating {} trials × {states} states (exhaustive: {with_exhaustive})",
        sim_cfg.trials
    );
    let per_trial: Vec<Vec<[f64; 3]>> = (0..sim_cfg.trials as u64)
        .into_par_iter()
        .map(|trial| {
            let channels = realize_channels(&sim_cfg, trial);
            channels
                .matrices
                .iter()
                .map(|h| {
                    let full = logdet2_capacity(h, scale)?;
                    let hv = beamspace.to_virtual(h)?;
                    let fast = select_beams(&hv, &sim_cfg)?.rate_bits;
                    let exhaustive = if with_exhaustive {
                        best_submatrix_exhaustive(
                            &hv,
                            sim_cfg.l_r,
                            sim_cfg.l_t,
                            rho,
                            sim_cfg.enum_cap,
                        )?
                        .rate_bits
                    } else {
                        f64::NAN
                    };
                    Ok([fast, exhaustive, full])
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let n = sim_cfg.trials * states;
    let mut fast = Vec::with_capacity(n);
    let mut exhaustive = Vec::with_capacity(if with_exhaustive { n } else { 0 });
    let mut full = Vec::with_capacity(n);
    for [f, e, l] in per_trial.into_iter().flatten() {
        fast.push(f);
        if with_exhaustive {
            exhaustive.push(e);
        }
        full.push(l);
    }
    RateTable::from_parts(
        sim_cfg.trials,
        states,
        fast,
        with_exhaustive.then_some(exhaustive),
        full,
    )
}

/// Paired single-state and best-state rates for one Ψ.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RateSamples {
    /// Rate of the designated state (state 0) per trial.
    pub single: Vec<f64>,
    /// Best rate over the first Ψ states per trial; never below `single`.
    pub best: Vec<f64>,
    pub psi: usize,
    pub selector: Selector,
}

impl RateSamples {
    pub fn trials(&self) -> usize {
        self.single.len()
    }
}

pub fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

/// Unbiased sample variance.
pub fn sample_variance(values: &[f64]) -> f64 {
    let m = mean(values);
    values.iter().map(|v| (v - m).powi(2)).sum::<f64>() / (values.len() as f64 - 1.0)
}

/// Gaussian fit of the single-state rates.
pub fn fit_rate_model(samples: &RateSamples) -> Result<GaussianRateModel> {
    fit_values(&samples.single)
}

/// Sample mean and unbiased variance as a Gaussian model.
pub fn fit_values(values: &[f64]) -> Result<GaussianRateModel> {
    if values.len() < 2 {
        return Err(Error::contract(format!(
            "a Gaussian fit needs at least 2 samples, got {}",
            values.len()
        )));
    }
    GaussianRateModel::new(mean(values), sample_variance(values))
}

fn central_moments(values: &[f64]) -> (f64, f64, f64) {
    let m = mean(values);
    let n = values.len() as f64;
    let (mut m2, mut m3, mut m4) = (0.0, 0.0, 0.0);
    for v in values {
        let d = v - m;
        let d2 = d * d;
        m2 += d2;
        m3 += d2 * d;
        m4 += d2 * d2;
    }
    (m2 / n, m3 / n, m4 / n)
}

/// Moment skewness `m₃ / m₂^{3/2}`.
pub fn skewness(values: &[f64]) -> f64 {
    let (m2, m3, _) = central_moments(values);
    m3 / m2.powf(1.5)
}

/// Moment excess kurtosis `m₄ / m₂² − 3`.
pub fn excess_kurtosis(values: &[f64]) -> f64 {
    let (m2, _, m4) = central_moments(values);
    m4 / (m2 * m2) - 3.0
}

/// Ratio of means with its delta-method standard error.
fn ratio_of_means(num: &[f64], den: &[f64]) -> (f64, f64) {
    let n = num.len() as f64;
    let md = mean(den);
    let g = mean(num) / md;
    let resid: Vec<f64> = num.iter().zip(den).map(|(a, b)| a - g * b).collect();
    let se = if num.len() > 1 {
        (sample_variance(&resid) / n).sqrt() / md.abs()
    } else {
        0.0
    };
    (g, se)
}

/// Mean best-state rate over mean single-state rate, with standard error.
pub fn avg_gain_of(samples: &RateSamples) -> (f64, f64) {
    ratio_of_means(&samples.best, &samples.single)
}

/// Empirical average gains for each Ψ in `psi_list` from one table.
pub fn empirical_avg_gains(
    table: &RateTable,
    selector: Selector,
    psi_list: &[usize],
) -> Result<Vec<f64>> {
    psi_list
        .iter()
        .map(|&psi| Ok(avg_gain_of(&table.samples(selector, psi)?).0))
        .collect()
}

/// Simulates at the largest Ψ in `psi_list` and returns the average gain per Ψ.
pub fn empirical_avg_gain(
    cfg: &SystemConfig,
    selector: Selector,
    psi_list: &[usize],
) -> Result<Vec<f64>> {
    let states = max_psi(psi_list)?;
    let table = simulate(cfg, states, selector == Selector::Exhaustive)?;
    empirical_avg_gains(&table, selector, psi_list)
}

fn max_psi(psi_list: &[usize]) -> Result<usize> {
    psi_list
        .iter()
        .copied()
        .max()
        .ok_or_else(|| Error::contract("Ψ list is empty"))
}

fn check_quantile_level(n: usize, eps: f64) -> Result<usize> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::domain(format!("outage level {eps} outside (0, 1)")));
    }
    let k = (eps * n as f64).floor() as usize;
    if (n as f64) * eps < 20.0 {
        return Err(Error::contract(format!(
            "{n} trials at ε = {eps} leave {k} outage samples; at least 20 are needed"
        )));
    }
    Ok(k)
}

/// `k`-th smallest value (1-based) with `k = ⌊εn⌋`, so at most a fraction ε
/// of the samples lies strictly below it.
pub fn lower_quantile(values: &[f64], eps: f64) -> Result<f64> {
    let k = check_quantile_level(values.len(), eps)?;
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    Ok(sorted[k - 1])
}

/// Best-state and single-state ε-quantiles and their ratio.
pub fn outage_gain_of(samples: &RateSamples, eps: f64) -> Result<(f64, f64, f64)> {
    let best = lower_quantile(&samples.best, eps)?;
    let single = lower_quantile(&samples.single, eps)?;
    Ok((best / single, best, single))
}

/// Empirical outage gains for each Ψ in `psi_list` from one table.
pub fn empirical_outage_gains(
    table: &RateTable,
    selector: Selector,
    psi_list: &[usize],
    eps: f64,
) -> Result<Vec<f64>> {
    check_quantile_level(table.trials(), eps)?;
    psi_list
        .iter()
        .map(|&psi| Ok(outage_gain_of(&table.samples(selector, psi)?, eps)?.0))
        .collect()
}

/// Simulates at the largest Ψ in `psi_list` and returns the outage gain per Ψ.
pub fn empirical_outage_gain(
    cfg: &SystemConfig,
    selector: Selector,
    psi_list: &[usize],
    eps: f64,
) -> Result<Vec<f64>> {
    check_quantile_level(cfg.trials, eps)?;
    let states = max_psi(psi_list)?;
    let table = simulate(cfg, states, selector == Selector::Exhaustive)?;
    empirical_outage_gains(&table, selector, psi_list, eps)
}

/// Standard error of `statistic` over bootstrap resamples of trial indices.
/// Resampling is seeded, so the estimate is reproducible.
pub fn bootstrap_std_error<F>(trials: usize, reps: usize, seed: u64, statistic: F) -> Result<f64>
where
    F: Fn(&[usize]) -> Result<f64> + Sync,
{
    if trials == 0 || reps < 2 {
        return Err(Error::contract(
            "bootstrap needs trials and at least 2 replicates",
        ));
    }
    let values = (0..reps as u64)
        .into_par_iter()
        .map(|r| {
            let mut stream = RandomStream::new(seed, r);
            let idx: Vec<usize> = (0..trials)
                .map(|_| stream.rng_mut().random_range(0..trials))
                .collect();
            statistic(&idx)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(sample_variance(&values).sqrt())
}

/// Loss of the fast pipeline against exhaustive search at one Ψ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LossRatio {
    pub psi: usize,
    /// `(mean exhaustive − mean fast) / mean exhaustive`.
    pub ratio: f64,
    pub std_error: f64,
    pub mean_exhaustive: f64,
    pub mean_fast: f64,
    /// Smallest per-trial `exhaustive − fast`; nonnegative.
    pub min_trial_gap: f64,
}

/// Loss ratio per Ψ from a table simulated with exhaustive search.
pub fn loss_ratios(table: &RateTable, psi_list: &[usize]) -> Result<Vec<LossRatio>> {
    psi_list
        .iter()
        .map(|&psi| {
            let exhaustive = table.exhaustive_best(psi)?;
            let fast = table.pipeline_rates(psi)?;
            let gaps: Vec<f64> = exhaustive.iter().zip(&fast).map(|(e, f)| e - f).collect();
            let (lost, se) = ratio_of_means(&gaps, &exhaustive);
            Ok(LossRatio {
                psi,
                ratio: lost,
                std_error: se,
                mean_exhaustive: mean(&exhaustive),
                mean_fast: mean(&fast),
                min_trial_gap: gaps.iter().copied().fold(f64::INFINITY, f64::min),
            })
        })
        .collect()
}

/// Simulates with both selectors at the largest Ψ and returns loss ratios.
pub fn loss_ratio(cfg: &SystemConfig, psi_list: &[usize]) -> Result<Vec<LossRatio>> {
    let table = simulate(cfg, max_psi(psi_list)?, true)?;
    loss_ratios(&table, psi_list)
}

/// Density histogram with the fitted Gaussian density at the bin centres.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PdfExport {
    pub bin_width: f64,
    pub bin_centers: Vec<f64>,
    pub density: Vec<f64>,
    pub fit_density: Vec<f64>,
    pub model: GaussianRateModel,
}

impl PdfExport {
    /// CSV with header `bin_center,density,fit_density`.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "bin_center,density,fit_density")?;
        for i in 0..self.bin_centers.len() {
            writeln!(
                out,
                "{},{},{}",
                self.bin_centers[i], self.density[i], self.fit_density[i]
            )?;
        }
        Ok(())
    }

    /// `Σ |density − fit_density|·width`.
    pub fn l1_distance(&self) -> f64 {
        self.density
            .iter()
            .zip(&self.fit_density)
            .map(|(a, b)| (a - b).abs() * self.bin_width)
            .sum()
    }
}

/// Histogram of `values` over their range, normalized to unit area.
pub fn pdf_export(values: &[f64], bins: usize) -> Result<PdfExport> {
    if bins < 5 {
        return Err(Error::contract(format!(
            "at least 5 bins are required, got {bins}"
        )));
    }
    let model = fit_values(values)?;
    let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let n = values.len() as f64;
    // A constant sample gets a unit-width window centred on the single bin.
    let (lo, width) = if hi > lo {
        (lo, (hi - lo) / bins as f64)
    } else {
        let width = 1.0 / bins as f64;
        (lo - width * (bins / 2) as f64 - 0.5 * width, width)
    };
    let mut counts = vec![0usize; bins];
    for v in values {
        let b = (((v - lo) / width) as usize).min(bins - 1);
        counts[b] += 1;
    }
    let bin_centers: Vec<f64> = (0..bins).map(|b| lo + (b as f64 + 0.5) * width).collect();
    let density: Vec<f64> = counts.iter().map(|&c| c as f64 / (n * width)).collect();
    let fit_density = if model.var > 0.0 {
        let sd = model.sd();
        bin_centers
            .iter()
            .map(|x| {
                let z = (x - model.mu) / sd;
                (-0.5 * z * z).exp() / (sd * (2.0 * std::f64::consts::PI).sqrt())
            })
            .collect()
    } else {
        density.clone()
    };
    Ok(PdfExport {
        bin_width: width,
        bin_centers,
        density,
        fit_density,
        model,
    })
}

/// One Ψ row of an average-gain experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AvgGainRow {
    pub psi: usize,
    pub empirical: f64,
    pub std_error: f64,
    pub integral: Option<f64>,
    pub small_psi: Option<f64>,
    pub large_psi: Option<f64>,
    pub asymptotic: Option<f64>,
}

/// One (Ψ, ε) row of an outage-gain experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutageGainRow {
    pub psi: usize,
    pub eps: f64,
    pub empirical: f64,
    pub quantile_best: f64,
    pub quantile_single: f64,
    pub analytic: Option<f64>,
    pub asymptotic: Option<f64>,
}

/// Loss ratio tagged with the SNR it was simulated at.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LossRatioRow {
    pub rho_db: f64,
    #[serde(flatten)]
    pub loss: LossRatio,
}

/// JSON summary of one experiment. The configuration echo reproduces the run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub schema: u32,
    pub experiment: String,
    pub config: SystemConfig,
    pub selector: Option<Selector>,
    pub seed: u64,
    pub trials: usize,
    pub model: Option<GaussianRateModel>,
    pub skewness: Option<f64>,
    pub excess_kurtosis: Option<f64>,
    pub avg_gains: Vec<AvgGainRow>,
    pub outage_gains: Vec<OutageGainRow>,
    pub loss_ratios: Vec<LossRatioRow>,
    pub notes: Vec<String>,
    /// Wall-clock seconds; left out unless timing was requested, because it
    /// would make otherwise identical reports differ.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub runtime_secs: Option<f64>,
}

impl ExperimentReport {
    pub fn new(experiment: &str, cfg: &SystemConfig, selector: Option<Selector>) -> Self {
        Self {
            schema: 1,
            experiment: experiment.to_string(),
            config: cfg.clone(),
            selector,
            seed: cfg.seed,
            trials: cfg.trials,
            model: None,
            skewness: None,
            excess_kurtosis: None,
            avg_gains: Vec::new(),
            outage_gains: Vec::new(),
            loss_ratios: Vec::new(),
            notes: Vec::new(),
            runtime_secs: None,
        }
    }

    /// Rejects reports carrying non-finite numbers.
    pub fn ensure_finite(&self) -> Result<()> {
        // serde_json writes NaN and ±∞ as null; catch them before that.
        let mut numbers = Vec::new();
        if let Some(m) = self.model {
            numbers.extend([m.mu, m.var]);
        }
        numbers.extend(self.skewness);
        numbers.extend(self.excess_kurtosis);
        for r in &self.avg_gains {
            numbers.extend([r.empirical, r.std_error]);
            numbers.extend(
                [r.integral, r.small_psi, r.large_psi, r.asymptotic]
                    .into_iter()
                    .flatten(),
            );
        }
        for r in &self.outage_gains {
            numbers.extend([r.eps, r.empirical, r.quantile_best, r.quantile_single]);
            numbers.extend([r.analytic, r.asymptotic].into_iter().flatten());
        }
        for r in &self.loss_ratios {
            let l = &r.loss;
            numbers.extend([
                r.rho_db,
                l.ratio,
                l.std_error,
                l.mean_exhaustive,
                l.mean_fast,
                l.min_trial_gap,
            ]);
        }
        if let Some(bad) = numbers.iter().find(|v| !v.is_finite()) {
            return Err(Error::domain(format!(
                "report contains the non-finite value {bad}"
            )));
        }
        Ok(())
    }

    pub fn to_json_pretty(&self) -> Result<String> {
        self.ensure_finite()?;
        Ok(serde_json::to_string_pretty(self)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table(trials: usize, states: usize, f: impl Fn(usize, usize) -> f64) -> RateTable {
        let v: Vec<f64> = (0..trials * states)
            .map(|i| f(i / states, i % states))
            .collect();
        RateTable::from_parts(trials, states, v.clone(), Some(v.clone()), v).unwrap()
    }

    #[test]
    fn fit_small_samples() {
        let m = fit_values(&[1.0, 3.0]).unwrap();
        assert_eq!((m.mu, m.var), (2.0, 2.0));
        assert_eq!(fit_values(&[4.0; 10]).unwrap().var, 0.0);
        assert!(matches!(fit_values(&[1.0]), Err(Error::Contract(_))));
    }

    #[test]
    fn single_state_gain_is_one() {
        let t = table(50, 4, |t, s| 1.0 + (t * 7 + s * 3) as f64 % 5.0);
        assert_eq!(
            empirical_avg_gains(&t, Selector::Fast, &[1]).unwrap(),
            vec![1.0]
        );
        assert_eq!(
            empirical_outage_gains(&t, Selector::Fast, &[1], 0.5).unwrap(),
            vec![1.0]
        );
    }

    #[test]
    fn gains_are_monotone_in_psi() {
        let t = table(200, 8, |t, s| ((t * 31 + s * 17) % 23) as f64 + 1.0);
        let g = empirical_avg_gains(&t, Selector::Fast, &[1, 2, 3, 4, 5, 6, 7, 8]).unwrap();
        assert!(g.windows(2).all(|w| w[1] >= w[0]), "{g:?}");
        for psi in 1..=8 {
            let s = t.samples(Selector::Fast, psi).unwrap();
            assert!(s.best.iter().zip(&s.single).all(|(b, a)| b >= a));
        }
    }

    #[test]
    fn lower_quantile_is_conservative() {
        let values: Vec<f64> = (1..=100).map(f64::from).collect();
        assert_eq!(lower_quantile(&values, 0.2).unwrap(), 20.0);
        assert_eq!(lower_quantile(&values, 0.205).unwrap(), 20.0);
        assert!(matches!(
            lower_quantile(&values, 0.1),
            Err(Error::Contract(_))
        ));
        assert!(lower_quantile(&values, 0.0).is_err());
    }

    #[test]
    fn pipeline_follows_full_log_det() {
        let t = RateTable::from_parts(
            1,
            3,
            vec![5.0, 1.0, 2.0],
            Some(vec![6.0, 3.0, 4.0]),
            vec![0.1, 0.9, 0.5],
        )
        .unwrap();
        assert_eq!(t.pipeline_rates(1).unwrap(), vec![5.0]);
        assert_eq!(t.pipeline_rates(3).unwrap(), vec![1.0]);
        let lr = loss_ratios(&t, &[1, 3]).unwrap();
        assert!((lr[0].ratio - 1.0 / 6.0).abs() < 1e-15);
        assert!((lr[1].ratio - 5.0 / 6.0).abs() < 1e-15);
    }

    #[test]
    fn identical_selectors_lose_nothing() {
        let t = table(30, 3, |t, s| if s == t % 3 { 10.0 } else { 1.0 });
        for lr in loss_ratios(&t, &[1, 2, 3]).unwrap() {
            assert_eq!(lr.ratio, 0.0);
            assert_eq!(lr.min_trial_gap, 0.0);
        }
    }

    #[test]
    fn exhaustive_column_must_exist() {
        let t = RateTable::from_parts(2, 1, vec![1.0, 2.0], None, vec![1.0, 2.0]).unwrap();
        assert!(t.samples(Selector::Exhaustive, 1).is_err());
        assert!(t.samples(Selector::Fast, 2).is_err());
    }

    #[test]
    fn constant_sample_fills_one_bin() {
        let pdf = pdf_export(&[3.5; 40], 7).unwrap();
        let occupied: Vec<_> = pdf.density.iter().filter(|d| **d > 0.0).collect();
        assert_eq!(occupied.len(), 1);
        assert!((pdf.density.iter().sum::<f64>() * pdf.bin_width - 1.0).abs() < 1e-12);
        assert!(pdf_export(&[1.0, 2.0], 4).is_err());
    }

    #[test]
    fn histogram_integrates_to_one() {
        let values: Vec<f64> = (0..1000).map(|i| ((i * 37) % 101) as f64).collect();
        let pdf = pdf_export(&values, 20).unwrap();
        assert!((pdf.density.iter().sum::<f64>() * pdf.bin_width - 1.0).abs() < 1e-12);
        let mut csv = Vec::new();
        pdf.write_csv(&mut csv).unwrap();
        let text = String::from_utf8(csv).unwrap();
        assert!(text.starts_with("bin_center,density,fit_density\n"));
        assert_eq!(text.lines().count(), 21);
    }

    #[test]
    fn moments_of_symmetric_sample() {
        let values = [-2.0, -1.0, 0.0, 1.0, 2.0];
        assert_eq!(skewness(&values), 0.0);
        // m₂ = 2, m₄ = 6.8
        assert!((excess_kurtosis(&values) - (6.8 / 4.0 - 3.0)).abs() < 1e-15);
    }

    #[test]
    fn selector_parsing() {
        assert_eq!("fast".parse::<Selector>().unwrap(), Selector::Fast);
        assert_eq!(
            "exhaustive".parse::<Selector>().unwrap(),
            Selector::Exhaustive
        );
        assert!(matches!(
            "greedy".parse::<Selector>(),
            Err(Error::Config { .. })
        ));
    }

    #[test]
    fn report_rejects_nan() {
        let mut r = ExperimentReport::new("test", &SystemConfig::desk(), None);
        assert!(r.to_json_pretty().is_ok());
        r.skewness = Some(f64::NAN);
        assert!(r.to_json_pretty().is_err());
    }

    #[test]
    fn simulation_is_reproducible_and_paired() {
        let cfg = SystemConfig {
            trials: 12,
            ..SystemConfig::desk()
        };
        let a = simulate(&cfg, 3, true).unwrap();
        let b = simulate(&cfg, 3, true).unwrap();
        assert_eq!(a, b);
        let short = simulate(&cfg, 2, false).unwrap();
        for t in 0..12 {
            for s in 0..2 {
                assert_eq!(
                    short.rate(Selector::Fast, t, s).unwrap(),
                    a.rate(Selector::Fast, t, s).unwrap()
                );
            }
            for s in 0..3 {
                assert!(
                    a.rate(Selector::Exhaustive, t, s).unwrap()
                        >= a.rate(Selector::Fast, t, s).unwrap() - 1e-12
                );
            }
        }
        let csv = {
            let mut v = Vec::new();
            a.write_csv(Selector::Fast, &mut v).unwrap();
            String::from_utf8(v).unwrap()
        };
        assert!(csv.starts_with("trial,state,rate_bits\n0,0,"));
        assert_eq!(csv.lines().count(), 1 + 36);
    }
}
