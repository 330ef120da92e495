use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::run::{noisy_record, run_prepared, RunResult};
use super::{simulate_beam, CampaignConfig, SimulatedBeam};
use crate::beam_fem::SupportCondition;
use crate::dsp::psd;
use crate::noise_model::nl_to_snr_db;
use crate::oma_freq::{anpsd, Method};
use crate::{OmaError, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MacStatistics {
    pub beam: SupportCondition,
    pub method: Method,
    pub noise_level: f64,
    /// 1-based reference mode number.
    pub mode: usize,
    pub runs: usize,
    /// Runs in which the mode passed the pairing threshold.
    pub identified: usize,
    pub min: f64,
    pub mean: f64,
    /// Sample standard deviation (0 for a single run).
    pub std: f64,
    pub max: f64,
}

/// The run whose smallest PP MAC over the reference modes is lowest.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WorstCase {
    pub beam: SupportCondition,
    pub noise_level: f64,
    pub run: usize,
    pub min_mac: f64,
    /// Method the selection was based on (PP when it was run).
    pub method: Method,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FailureCount {
    pub beam: SupportCondition,
    pub method: Method,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchmarkReport {
    /// Fully resolved configuration the report was produced from.
    pub config: CampaignConfig,
    /// Ordered by beam, noise level and run as listed in the configuration.
    pub runs: Vec<RunResult>,
    pub mac_statistics: Vec<MacStatistics>,
    pub worst_cases: Vec<WorstCase>,
    pub failures: Vec<FailureCount>,
    /// FE reference frequencies per beam.
    pub reference_frequencies: BTreeMap<SupportCondition, Vec<f64>>,
}

fn statistics(values: &[f64]) -> (f64, f64, f64, f64) {
    let n = values.len() as f64;
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mean = values.iter().sum::<f64>() / n;
    let std = if values.len() > 1 {
        (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
    } else {
        0.0
    };
    (min, mean, std, max)
}

impl BenchmarkReport {
    /// Assemble statistics, worst cases and failure counts from run results.
    pub fn from_runs(
        config: CampaignConfig,
        runs: Vec<RunResult>,
        reference_frequencies: BTreeMap<SupportCondition, Vec<f64>>,
    ) -> Result<Self> {
        if runs.is_empty() {
            return Err(OmaError::InvalidInput("a report needs at least one run".into()));
        }
        let mut mac_statistics = Vec::new();
        let mut worst_cases = Vec::new();
        let mut failures = Vec::new();
        let selector = if config.methods.contains(&Method::Pp) { Method::Pp } else { config.methods[0] };
        for beam in &config.beams {
            let support = beam.support;
            let n_modes = reference_frequencies.get(&support).map_or(0, Vec::len);
            for &method in &config.methods {
                let count = runs
                    .iter()
                    .filter(|r| r.beam == support)
                    .filter(|r| r.outcome(method).is_some_and(|o| o.error.is_some()))
                    .count();
                if count > 0 {
                    failures.push(FailureCount { beam: support, method, count });
                }
            }
            for &nl in &config.noise_levels {
                let cell: Vec<&RunResult> = runs.iter().filter(|r| r.beam == support && r.noise_level == nl).collect();
                if cell.is_empty() {
                    continue;
                }
                for &method in &config.methods {
                    for mode in 0..n_modes {
                        let outcomes: Vec<_> = cell.iter().filter_map(|r| r.outcome(method)).collect();
                        let macs: Vec<f64> = outcomes.iter().map(|o| o.mac(mode)).collect();
                        let (min, mean, std, max) = statistics(&macs);
                        mac_statistics.push(MacStatistics {
                            beam: support,
                            method,
                            noise_level: nl,
                            mode: mode + 1,
                            runs: macs.len(),
                            identified: outcomes.iter().filter(|o| o.identified_frequency(mode).is_some()).count(),
                            min,
                            mean,
                            std,
                            max,
                        });
                    }
                }
                let worst = cell
                    .iter()
                    .map(|r| (r.run, r.outcome(selector).map_or(0.0, |o| o.min_mac())))
                    .min_by(|a, b| a.1.total_cmp(&b.1).then(a.0.cmp(&b.0)))
                    .unwrap();
                worst_cases.push(WorstCase {
                    beam: support,
                    noise_level: nl,
                    run: worst.0,
                    min_mac: worst.1,
                    method: selector,
                });
            }
        }
        Ok(BenchmarkReport {
            config,
            runs,
            mac_statistics,
            worst_cases,
            failures,
            reference_frequencies,
        })
    }

    pub fn run(&self, beam: SupportCondition, noise_level: f64, run: usize) -> Option<&RunResult> {
        self.runs
            .iter()
            .find(|r| r.beam == beam && r.noise_level == noise_level && r.run == run)
    }

    pub fn worst_case(&self, beam: SupportCondition, noise_level: f64) -> Option<&WorstCase> {
        self.worst_cases
            .iter()
            .find(|w| w.beam == beam && w.noise_level == noise_level)
    }

    pub fn mac_statistics_for(
        &self,
        beam: SupportCondition,
        method: Method,
        noise_level: f64,
        mode: usize,
    ) -> Option<&MacStatistics> {
        self.mac_statistics
            .iter()
            .find(|s| s.beam == beam && s.method == method && s.noise_level == noise_level && s.mode == mode)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Ok(serde_json::from_str(&std::fs::read_to_string(path)?)?)
    }
}

fn thread_pool(jobs: Option<usize>) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.unwrap_or(0))
        .build()
        .map_err(|e| OmaError::InvalidParameter(format!("cannot start worker pool: {e}")))
}

/// Simulate every beam of the campaign once.
pub fn prepare_beams(config: &CampaignConfig) -> Result<Vec<SimulatedBeam>> {
    config
        .beams
        .par_iter()
        .map(|spec| simulate_beam(spec, config.master_seed))
        .collect()
}

/// Execute every (beam, noise level, run) combination with at most `jobs`
/// worker threads (`None` uses every core).
pub fn run_campaign(config: &CampaignConfig, jobs: Option<usize>) -> Result<BenchmarkReport> {
    config.validate()?;
    let pool = thread_pool(jobs)?;
    pool.install(|| {
        let beams = prepare_beams(config)?;
        let tasks: Vec<(usize, f64, usize)> = (0..beams.len())
            .flat_map(|b| {
                config
                    .noise_levels
                    .iter()
                    .flat_map(move |&nl| (0..config.runs).map(move |r| (b, nl, r)))
            })
            .collect();
        let runs = tasks
            .par_iter()
            .map(|&(b, nl, r)| run_prepared(config, &beams[b], nl, r))
            .collect::<Result<Vec<_>>>()?;
        let references = beams
            .iter()
            .map(|b| (b.spec.support, b.reference.frequencies.clone()))
            .collect();
        BenchmarkReport::from_runs(config.clone(), runs, references)
    })
}

fn cell(value: Option<f64>) -> String {
    value.map_or_else(|| "-".to_string(), |v| v.to_string())
}

fn snr_label(noise_level: f64) -> String {
    nl_to_snr_db(noise_level).map_or_else(|_| "inf".to_string(), |db| db.to_string())
}

fn write_file(dir: &Path, name: &str, text: &str, written: &mut Vec<PathBuf>) -> Result<()> {
    let path = dir.join(name);
    std::fs::write(&path, text)?;
    written.push(path);
    Ok(())
}

/// Emit the frequency, MAC and error tables plus ANPSD and mode-shape curves
/// of the worst-case runs. Returns the written paths.
pub fn summarize_and_tables(report: &BenchmarkReport, out_dir: impl AsRef<Path>) -> Result<Vec<PathBuf>> {
    let dir = out_dir.as_ref();
    std::fs::create_dir_all(dir)?;
    let config = &report.config;
    let mut written = Vec::new();
    let mut errors: BTreeMap<(SupportCondition, Method, usize), Vec<f64>> = BTreeMap::new();

    for spec in &config.beams {
        let support = spec.support;
        let Some(reference) = report.reference_frequencies.get(&support) else {
            continue;
        };
        let n_modes = reference.len();
        let beam = simulate_beam(spec, config.master_seed)?;

        // identified frequencies of the worst-case run
        let mut freq = String::from("noise_level,snr_db,method,run");
        (1..=n_modes).for_each(|m| write!(freq, ",mode_{m}").unwrap());
        freq.push('\n');
        write!(freq, "reference,,FE,").unwrap();
        reference.iter().for_each(|f| write!(freq, ",{f}").unwrap());
        freq.push('\n');

        let mut macs = String::from("noise_level,snr_db,method,mode,runs,identified,min,mean,std,max,worst_case_mac\n");

        for &nl in &config.noise_levels {
            let Some(worst) = report.worst_case(support, nl) else {
                continue;
            };
            let Some(run) = report.run(support, nl, worst.run) else {
                continue;
            };
            for &method in &config.methods {
                let Some(outcome) = run.outcome(method) else {
                    continue;
                };
                write!(freq, "{nl},{},{method},{}", snr_label(nl), worst.run).unwrap();
                for mode in 0..n_modes {
                    let f = outcome.identified_frequency(mode);
                    write!(freq, ",{}", cell(f)).unwrap();
                    if let Some(f) = f {
                        errors
                            .entry((support, method, mode + 1))
                            .or_default()
                            .push(100.0 * (f - reference[mode]).abs() / reference[mode]);
                    }
                }
                freq.push('\n');
                for mode in 1..=n_modes {
                    if let Some(s) = report.mac_statistics_for(support, method, nl, mode) {
                        writeln!(
                            macs,
                            "{nl},{},{method},{mode},{},{},{},{},{},{},{}",
                            snr_label(nl),
                            s.runs,
                            s.identified,
                            s.min,
                            s.mean,
                            s.std,
                            s.max,
                            outcome.mac(mode - 1)
                        )
                        .unwrap();
                    }
                }
            }

            // ANPSD of the worst-case record
            let (record, _) = noisy_record(config, &beam, nl, worst.run)?;
            let curve = anpsd(&psd(&record, &config.identifiers.pp.estimator)?)?.curve;
            let mut text = Vec::new();
            curve.write_csv(&mut text)?;
            write_file(dir, &format!("anpsd_{support}_{nl}.csv"), &String::from_utf8(text).unwrap(), &mut written)?;

            // paired shapes, sign-aligned to the reference
            for mode in 0..n_modes {
                let reference_shape = {
                    let mut s = beam.reference.channel_shape(mode);
                    let peak = s.iter().fold(0.0f64, |m, x| if x.abs() > m.abs() { *x } else { m });
                    s.iter_mut().for_each(|x| *x /= peak);
                    s
                };
                let mut text = String::from("channel,reference");
                config.methods.iter().for_each(|m| write!(text, ",{}", m.as_str().to_lowercase()).unwrap());
                text.push('\n');
                let shapes: Vec<Option<Vec<f64>>> = config
                    .methods
                    .iter()
                    .map(|&m| {
                        run.outcome(m).and_then(|o| o.paired_shapes[mode].clone()).map(|s| {
                            let dot: f64 = s.iter().zip(&reference_shape).map(|(a, b)| a * b).sum();
                            let sign = if dot < 0.0 { -1.0 } else { 1.0 };
                            s.into_iter().map(|x| sign * x).collect()
                        })
                    })
                    .collect();
                for (c, label) in beam.system.channel_labels().iter().enumerate() {
                    write!(text, "{label},{}", reference_shape[c]).unwrap();
                    for s in &shapes {
                        write!(text, ",{}", cell(s.as_ref().map(|s| s[c]))).unwrap();
                    }
                    text.push('\n');
                }
                write_file(dir, &format!("modeshape_{support}_{}_{nl}.csv", mode + 1), &text, &mut written)?;
            }
        }
        write_file(dir, &format!("table_freq_{support}.csv"), &freq, &mut written)?;
        write_file(dir, &format!("table_mac_{support}.csv"), &macs, &mut written)?;
    }

    let mut err = String::from("beam,method,mode,mean_error_pct,levels_identified\n");
    for spec in &config.beams {
        let n_modes = report.reference_frequencies.get(&spec.support).map_or(0, Vec::len);
        for &method in &config.methods {
            for mode in 1..=n_modes {
                let values = errors.get(&(spec.support, method, mode));
                let mean = values.map(|v| v.iter().sum::<f64>() / v.len() as f64);
                writeln!(
                    err,
                    "{},{method},{mode},{},{}",
                    spec.support,
                    cell(mean),
                    values.map_or(0, Vec::len)
                )
                .unwrap();
            }
        }
    }
    write_file(dir, "table_err.csv", &err, &mut written)?;
    Ok(written)
}

/// `report.json`, the resolved configuration and every table.
pub fn write_outputs(report: &BenchmarkReport, out_dir: impl AsRef<Path>) -> Result<Vec<PathBuf>> {
    let dir = out_dir.as_ref();
    std::fs::create_dir_all(dir)?;
    let mut written = Vec::new();
    write_file(dir, "report.json", &report.to_json()?, &mut written)?;
    write_file(dir, "campaign.resolved.json", &report.config.to_json()?, &mut written)?;
    written.extend(summarize_and_tables(report, dir)?);
    Ok(written)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sample_statistics() {
        let (min, mean, std, max) = statistics(&[1.0, 0.5, 0.0]);
        assert_eq!((min, mean, max), (0.0, 0.5, 1.0));
        assert!((std - 0.5).abs() < 1e-15);
        assert_eq!(statistics(&[0.7]).2, 0.0);
    }
}
