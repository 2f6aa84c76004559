//! Command-line front end behind the `rmimo` binary.
//!
//! Every subcommand writes CSV (or JSON for `dump-channels`) to `--out`, or
//! to stdout when `--out` is absent, and optionally a JSON report to
//! `--report`. Outputs depend only on the configuration and seed.
//!
//! Exit codes: 0 success, 2 invalid configuration or arguments, 3
//! enumeration cap exceeded, 4 numerical failure, 1 I/O failure.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use crate::analysis::{
    avg_gain_asymptotic, avg_gain_integral, avg_gain_large, avg_gain_small, outage_gain,
    outage_gain_asymptotic, GaussianRateModel,
};
use crate::channel::{realize_channels, ChannelDump, SystemConfig};
use crate::error::{Error, Result};
use crate::simlab::{
    avg_gain_of, excess_kurtosis, fit_rate_model, loss_ratios, outage_gain_of, pdf_export,
    simulate, skewness, AvgGainRow, ExperimentReport, LossRatioRow, OutageGainRow, Selector,
};

const INTEGRAL_TOL: f64 = 1e-9;

#[derive(Debug, Parser)]
#[command(
    name = "rmimo",
    version,
    about = "Reconfigurable-antenna beamspace MIMO experiments"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Histogram of the single-state rate with its Gaussian fit.
    Pdf {
        #[command(flatten)]
        common: Common,
        /// Histogram bins (at least 5).
        #[arg(long, default_value_t = 50)]
        bins: usize,
        /// Also write the raw per-trial rates (trial,state,rate_bits).
        #[arg(long)]
        samples: Option<PathBuf>,
    },
    /// Empirical average gain per Ψ next to the Gaussian-model formulas.
    GainAvg {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        sel: SelectorArg,
    },
    /// Empirical outage gain per Ψ and ε next to the Gaussian-model formula.
    GainOutage {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        sel: SelectorArg,
        /// Outage levels, comma separated.
        #[arg(long, default_value = "0.01,0.05,0.1")]
        eps: String,
    },
    /// Mean-rate loss of fast selection against exhaustive search.
    /// Without --config the 9×9 array with 2 RF chains per side is used.
    LossRatio {
        #[command(flatten)]
        common: Common,
    },
    /// Evaluate the gain formulas for a given Gaussian rate model.
    Analytic {
        #[arg(long, allow_hyphen_values = true)]
        mu: f64,
        #[arg(long, allow_hyphen_values = true)]
        var: f64,
        /// Ψ values: a single value, a list "1,2,4" or a range "1..8".
        #[arg(long, default_value = "1..8")]
        psi: String,
        #[arg(long, default_value_t = 0.05)]
        eps: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write the channel matrices of one trial as JSON.
    DumpChannels {
        #[command(flatten)]
        common: Common,
        /// Trial index whose random streams are used.
        #[arg(long, default_value_t = 0)]
        trial: u64,
    },
}

#[derive(Debug, Args)]
struct Common {
    /// JSON file with SystemConfig fields; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    trials: Option<usize>,
    /// Ψ values: a single value, a list "1,2,4" or a range "1..8".
    #[arg(long)]
    psi: Option<String>,
    /// SNR in dB; loss-ratio accepts a comma-separated sweep.
    #[arg(long, allow_hyphen_values = true)]
    rho_db: Option<String>,
    /// Data output path (stdout when absent).
    #[arg(long)]
    out: Option<PathBuf>,
    /// JSON report path.
    #[arg(long)]
    report: Option<PathBuf>,
    /// Record wall-clock time in the report.
    #[arg(long)]
    timing: bool,
}

#[derive(Debug, Args)]
struct SelectorArg {
    /// Beam selector: fast or exhaustive.
    #[arg(long, default_value = "fast")]
    selector: String,
}

/// Parses `argv` (including the program name), runs the subcommand and
/// returns the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

/// Exit code for an error.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Config { .. } | Error::Contract(_) | Error::Json(_) => 2,
        Error::Capacity { .. } => 3,
        Error::Domain(_) | Error::Convergence { .. } => 4,
        Error::Io(_) => 1,
    }
}

/// Parses "3", "1,2,4" or "1..8" (inclusive) into a sorted, deduplicated list.
pub fn parse_psi_list(text: &str) -> Result<Vec<usize>> {
    let bad = |why: String| Error::config("psi", why);
    let parse = |s: &str| {
        s.trim()
            .parse::<usize>()
            .map_err(|_| bad(format!("{s:?} is not a positive integer")))
    };
    let mut values = if let Some((a, b)) = text.split_once("..") {
        let (a, b) = (parse(a)?, parse(b)?);
        if a > b {
            return Err(bad(format!("empty range {text:?}")));
        }
        (a..=b).collect::<Vec<_>>()
    } else {
        text.split(',').map(parse).collect::<Result<Vec<_>>>()?
    };
    values.sort_unstable();
    values.dedup();
    if values.first() == Some(&0) {
        return Err(bad("Ψ must be at least 1".into()));
    }
    Ok(values)
}

fn parse_f64_list(field: &str, text: &str) -> Result<Vec<f64>> {
    text.split(',')
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| Error::config(field, format!("{s:?} is not a finite number")))
        })
        .collect()
}

impl Common {
    fn load(&self, base: SystemConfig) -> Result<SystemConfig> {
        let mut cfg = match &self.config {
            Some(path) => {
                let text = fs::read_to_string(path)?;
                serde_json::from_str(&text)
                    .map_err(|e| Error::config("config", format!("{}: {e}", path.display())))?
            }
            None => base,
        };
        if let Some(seed) = self.seed {
            cfg.seed = seed;
        }
        if let Some(trials) = self.trials {
            cfg.trials = trials;
        }
        if let Some(psi) = &self.psi {
            cfg.psi = *parse_psi_list(psi)?.last().expect("nonempty list");
        }
        if let Some(rho) = &self.rho_db {
            let values = parse_f64_list("rho_db", rho)?;
            cfg.rho_db = values[0];
        }
        cfg.validate()?;
        Ok(cfg)
    }

    /// The `--psi` list, or `1..=cfg.psi` when absent.
    fn psi_list(&self, cfg: &SystemConfig) -> Result<Vec<usize>> {
        match &self.psi {
            Some(text) => parse_psi_list(text),
            None => Ok((1..=cfg.psi).collect()),
        }
    }

    fn single_rho(&self) -> Result<()> {
        match &self.rho_db {
            Some(r) if parse_f64_list("rho_db", r)?.len() != 1 => Err(Error::config(
                "rho_db",
                "this subcommand takes one SNR value",
            )),
            _ => Ok(()),
        }
    }

    fn finish(&self, mut report: ExperimentReport, started: Instant, data: &str) -> Result<()> {
        emit(self.out.as_deref(), data)?;
        if let Some(path) = &self.report {
            if self.timing {
                report.runtime_secs = Some(started.elapsed().as_secs_f64());
            }
            fs::write(path, report.to_json_pretty()? + "\n")?;
        }
        Ok(())
    }
}

fn emit(path: Option<&Path>, data: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, data)?,
        None => print!("{data}"),
    }
    Ok(())
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn analytic_avg_row(
    model: &GaussianRateModel,
    psi: usize,
    empirical: f64,
    std_error: f64,
) -> Result<AvgGainRow> {
    Ok(AvgGainRow {
        psi,
        empirical,
        std_error,
        integral: Some(avg_gain_integral(model, psi, INTEGRAL_TOL)?),
        small_psi: if psi <= 5 {
            Some(avg_gain_small(model, psi)?)
        } else {
            None
        },
        large_psi: if psi >= 2 {
            Some(avg_gain_large(model, psi)?)
        } else {
            None
        },
        asymptotic: if psi >= 2 {
            Some(avg_gain_asymptotic(model, psi)?)
        } else {
            None
        },
    })
}

fn execute(command: Command) -> Result<()> {
    let started = Instant::now();
    match command {
        Command::Pdf {
            common,
            bins,
            samples,
        } => {
            common.single_rho()?;
            let cfg = common.load(SystemConfig::default())?;
            let table = simulate(&cfg, 1, false)?;
            let rates = table.samples(Selector::Fast, 1)?;
            let pdf = pdf_export(&rates.single, bins)?;
            let mut data = Vec::new();
            pdf.write_csv(&mut data)?;
            if let Some(path) = samples {
                let mut raw = Vec::new();
                table.write_csv(Selector::Fast, &mut raw)?;
                fs::write(path, raw)?;
            }
            let mut report = ExperimentReport::new("pdf", &cfg, Some(Selector::Fast));
            report.model = Some(pdf.model);
            report.skewness = Some(skewness(&rates.single));
            report.excess_kurtosis = Some(excess_kurtosis(&rates.single));
            common.finish(
                report,
                started,
                &String::from_utf8(data).expect("ascii csv"),
            )
        }
        Command::GainAvg { common, sel } => {
            common.single_rho()?;
            let selector: Selector = sel.selector.parse()?;
            let cfg = common.load(SystemConfig::default())?;
            let psi_list = common.psi_list(&cfg)?;
            let table = simulate(
                &cfg,
                *psi_list.last().unwrap(),
                selector == Selector::Exhaustive,
            )?;
            let model = fit_rate_model(&table.samples(selector, 1)?)?;
            let mut report = ExperimentReport::new("gain-avg", &cfg, Some(selector));
            report.model = Some(model);
            selector_note(&mut report, selector);
            let mut csv =
                String::from("psi,empirical,std_error,integral,small_psi,large_psi,asymptotic\n");
            for &psi in &psi_list {
                let (g, se) = avg_gain_of(&table.samples(selector, psi)?);
                let row = analytic_avg_row(&model, psi, g, se)?;
                writeln!(
                    csv,
                    "{},{},{},{},{},{},{}",
                    psi,
                    g,
                    se,
                    opt(row.integral),
                    opt(row.small_psi),
                    opt(row.large_psi),
                    opt(row.asymptotic)
                )
                .expect("string write");
                report.avg_gains.push(row);
            }
            common.finish(report, started, &csv)
        }
        Command::GainOutage { common, sel, eps } => {
            common.single_rho()?;
            let selector: Selector = sel.selector.parse()?;
            let eps_list = parse_f64_list("eps", &eps)?;
            let cfg = common.load(SystemConfig::default())?;
            let psi_list = common.psi_list(&cfg)?;
            let table = simulate(
                &cfg,
                *psi_list.last().unwrap(),
                selector == Selector::Exhaustive,
            )?;
            let model = fit_rate_model(&table.samples(selector, 1)?)?;
            let mut report = ExperimentReport::new("gain-outage", &cfg, Some(selector));
            report.model = Some(model);
            selector_note(&mut report, selector);
            let mut csv = String::from(
                "eps,psi,empirical,quantile_best,quantile_single,analytic,asymptotic\n",
            );
            for &e in &eps_list {
                for &psi in &psi_list {
                    let (g, qb, qs) = outage_gain_of(&table.samples(selector, psi)?, e)?;
                    let analytic = outage_gain(&model, psi, e).ok();
                    let asymptotic = if psi >= 2 {
                        outage_gain_asymptotic(&model, psi, e).ok()
                    } else {
                        None
                    };
                    writeln!(
                        csv,
                        "{e},{psi},{g},{qb},{qs},{},{}",
                        opt(analytic),
                        opt(asymptotic)
                    )
                    .expect("string write");
                    report.outage_gains.push(OutageGainRow {
                        psi,
                        eps: e,
                        empirical: g,
                        quantile_best: qb,
                        quantile_single: qs,
                        analytic,
                        asymptotic,
                    });
                }
            }
            common.finish(report, started, &csv)
        }
        Command::LossRatio { common } => {
            let cfg = common.load(SystemConfig::desk())?;
            let psi_list = common.psi_list(&cfg)?;
            let rho_list = match &common.rho_db {
                Some(r) => parse_f64_list("rho_db", r)?,
                None => vec![cfg.rho_db],
            };
            let mut report = ExperimentReport::new("loss-ratio", &cfg, None);
            let mut csv = String::from(
                "rho_db,psi,loss_ratio,std_error,mean_exhaustive,mean_fast,min_trial_gap\n",
            );
            for &rho_db in &rho_list {
                let point = SystemConfig {
                    rho_db,
                    ..cfg.clone()
                };
                let table = simulate(&point, *psi_list.last().unwrap(), true)?;
                for loss in loss_ratios(&table, &psi_list)? {
                    writeln!(
                        csv,
                        "{rho_db},{},{},{},{},{},{}",
                        loss.psi,
                        loss.ratio,
                        loss.std_error,
                        loss.mean_exhaustive,
                        loss.mean_fast,
                        loss.min_trial_gap
                    )
                    .expect("string write");
                    report.loss_ratios.push(LossRatioRow { rho_db, loss });
                }
            }
            common.finish(report, started, &csv)
        }
        Command::Analytic {
            mu,
            var,
            psi,
            eps,
            out,
        } => {
            let model = GaussianRateModel::new(mu, var)?;
            let mut csv = String::from(
                "psi,avg_integral,avg_small_psi,avg_large_psi,avg_asymptotic,outage,outage_asymptotic\n",
            );
            for psi in parse_psi_list(&psi)? {
                let row = analytic_avg_row(&model, psi, f64::NAN, f64::NAN)?;
                let outage = outage_gain(&model, psi, eps)?;
                let outage_asym = if psi >= 2 {
                    Some(outage_gain_asymptotic(&model, psi, eps)?)
                } else {
                    None
                };
                writeln!(
                    csv,
                    "{psi},{},{},{},{},{outage},{}",
                    opt(row.integral),
                    opt(row.small_psi),
                    opt(row.large_psi),
                    opt(row.asymptotic),
                    opt(outage_asym)
                )
                .expect("string write");
            }
            emit(out.as_deref(), &csv)
        }
        Command::DumpChannels { common, trial } => {
            common.single_rho()?;
            let cfg = common.load(SystemConfig::default())?;
            let channels = realize_channels(&cfg, trial);
            let dump = ChannelDump::new(&cfg, trial, &channels);
            let json = serde_json::to_string_pretty(&dump)? + "\n";
            emit(common.out.as_deref(), &json)
        }
    }
}

fn selector_note(report: &mut ExperimentReport, selector: Selector) {
    if selector == Selector::Fast {
        report.notes.push(
            "numerator and denominator both use greedy beam selection in every state; \
             the loss-ratio experiment bounds the resulting bias"
                .into(),
        );
    }
}
