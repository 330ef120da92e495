//! Command-line front end: `simulate`, `corrupt`, `identify`, `bench` and
//! `report`.
//!
//! Exit codes: 0 on success, 1 on usage or input errors, 2 when a numerical
//! kernel fails. Every random stream is derived from `--seed`, which
//! defaults to [`DEFAULT_SEED`].

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use crate::beam_fem::SupportCondition;
use crate::bench::{
    run_campaign, simulate_beam, summarize_and_tables, write_outputs, BeamSpec, BenchmarkReport, CampaignConfig,
    IdentifierOptions, DEFAULT_SEED, FULL_RUNS,
};
use crate::dsp::{csd_matrix, psd, MultiChannelRecord, SpectralEstimatorOptions, WindowKind};
use crate::modal_metrics::pair_to_reference;
use crate::noise_model::{corrupt, NoiseSpec};
use crate::oma_freq::{anpsd, fdd_from_spectra, first_singular_values, pp_from_spectra, IdentifiedModeSet, Method};
use crate::oma_ssi::stabilization;
use crate::{OmaError, Result};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_NUMERICAL: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "oma-bench", version, about = "Beam simulation and output-only modal identification benchmark")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Simulate a noise-free acceleration record of a beam.
    Simulate {
        /// Support condition: CF, SS, CS or CC.
        #[arg(long)]
        beam: SupportCondition,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Record length in seconds.
        #[arg(long, default_value_t = 5.0)]
        duration: f64,
        /// Sampling interval in seconds.
        #[arg(long, default_value_t = 1e-4)]
        dt: f64,
    },
    /// Add RMS-scaled Gaussian noise to every channel of a record.
    Corrupt {
        #[arg(long = "in")]
        input: PathBuf,
        /// Noise level: noise RMS over signal RMS per channel.
        #[arg(long)]
        nl: f64,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Identify modes with one method; with --beam, pair them with the FE reference.
    Identify {
        #[arg(long = "in")]
        input: PathBuf,
        /// pp, fdd or ssi.
        #[arg(long)]
        method: Method,
        #[arg(long)]
        beam: Option<SupportCondition>,
        #[arg(long)]
        out: PathBuf,
        /// Also write the ANPSD (pp), first singular value (fdd) or
        /// stabilization diagram (ssi).
        #[arg(long)]
        spectrum: Option<PathBuf>,
        /// Reference channel index for pp.
        #[arg(long)]
        reference_channel: Option<usize>,
        /// Averaged Hann segments for pp/fdd (1 = single rectangular segment).
        #[arg(long, default_value_t = 1)]
        segments: usize,
        #[arg(long, default_value_t = 1.0)]
        band_lo: f64,
        #[arg(long, default_value_t = 1500.0)]
        band_hi: f64,
        /// Seed used to simulate the reference beam (only its FE model matters).
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
    /// Run the Monte Carlo campaign described by a JSON configuration.
    Bench {
        #[arg(long)]
        config: PathBuf,
        /// Output directory (overrides the configuration).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Worker threads; defaults to every core.
        #[arg(long, env = "OMA_BENCH_JOBS")]
        jobs: Option<usize>,
        /// Use the full number of runs per noise level.
        #[arg(long)]
        full: bool,
        /// Override the master seed of the configuration.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Re-emit the tables of an existing report.
    Report {
        #[arg(long = "in")]
        input: PathBuf,
        /// Defaults to the directory holding the report.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Parse `args` (program name first) and execute, writing human-readable
/// output to `out` and diagnostics to `err`. Returns the exit code.
pub fn run_cli_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    match execute(cli.command, out) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

/// [`run_cli_with`] on the process streams.
pub fn run_cli<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    run_cli_with(args, &mut std::io::stdout().lock(), &mut std::io::stderr().lock())
}

pub fn exit_code(error: &OmaError) -> i32 {
    match error {
        OmaError::Numerical(_) | OmaError::Domain(_) => EXIT_NUMERICAL,
        _ => EXIT_USAGE,
    }
}

fn execute(command: Command, out: &mut dyn Write) -> Result<()> {
    match command {
        Command::Simulate {
            beam,
            out: path,
            seed,
            duration,
            dt,
        } => {
            let spec = BeamSpec {
                duration,
                dt,
                ..BeamSpec::new(beam)
            };
            let sim = simulate_beam(&spec, seed)?;
            sim.record.write_csv_file(&path)?;
            writeln!(
                out,
                "wrote {} channels x {} samples to {}",
                sim.record.n_channels(),
                sim.record.n_samples(),
                path.display()
            )?;
        }
        Command::Corrupt {
            input,
            nl,
            seed,
            out: path,
        } => {
            let record = MultiChannelRecord::read_csv_file(&input)?;
            let (noisy, report) = corrupt(&record, &NoiseSpec::new(nl, seed)?)?;
            noisy.write_csv_file(&path)?;
            match report.nominal_snr_db {
                Some(db) => writeln!(out, "nominal SNR {db} dB")?,
                None => writeln!(out, "nominal SNR inf dB")?,
            }
            for (label, c) in record.labels().iter().zip(&report.channels) {
                match c.snr_db {
                    Some(db) => writeln!(out, "{label}: realized SNR {db} dB")?,
                    None => writeln!(out, "{label}: realized SNR inf dB")?,
                }
            }
        }
        Command::Identify {
            input,
            method,
            beam,
            out: path,
            spectrum,
            reference_channel,
            segments,
            band_lo,
            band_hi,
            seed,
        } => {
            let record = MultiChannelRecord::read_csv_file(&input)?;
            let mut ids = IdentifierOptions::default();
            let band = Some((band_lo, band_hi));
            let estimator = if segments > 1 {
                SpectralEstimatorOptions::averaged(WindowKind::Hann, segments, 0.5)
            } else {
                SpectralEstimatorOptions::default()
            };
            ids.pp.peaks.band = band;
            ids.pp.estimator = estimator;
            ids.pp.reference_channel = reference_channel;
            ids.fdd.peaks.band = band;
            ids.fdd.estimator = estimator;
            let set = identify(&record, method, &ids, spectrum.as_deref())?;
            for d in &set.diagnostics {
                writeln!(out, "note: {d}")?;
            }
            match beam {
                Some(support) => write_pairing(&record, &set, support, seed, &ids, &path)?,
                None => write_modes(&set, record.labels(), &path)?,
            }
            writeln!(out, "{} identified {} modes; wrote {}", method, set.len(), path.display())?;
        }
        Command::Bench {
            config,
            out: out_dir,
            jobs,
            full,
            seed,
        } => {
            let mut campaign = CampaignConfig::load(&config)?;
            if full {
                campaign.runs = FULL_RUNS;
            }
            if let Some(seed) = seed {
                campaign.master_seed = seed;
            }
            let dir = out_dir
                .or_else(|| campaign.output_dir.as_ref().map(PathBuf::from))
                .unwrap_or_else(|| PathBuf::from("bench_out"));
            campaign.output_dir = Some(dir.display().to_string());
            if jobs == Some(0) {
                return Err(OmaError::InvalidParameter("--jobs must be at least 1".into()));
            }
            let report = run_campaign(&campaign, jobs)?;
            let written = write_outputs(&report, &dir)?;
            let failures: usize = report.failures.iter().map(|f| f.count).sum();
            writeln!(
                out,
                "{} runs, {} identifier failures; wrote {} files to {}",
                report.runs.len(),
                failures,
                written.len(),
                dir.display()
            )?;
        }
        Command::Report { input, out: out_dir } => {
            let report = BenchmarkReport::load(&input)?;
            let dir = out_dir.unwrap_or_else(|| input.parent().map(Path::to_path_buf).unwrap_or_default());
            let written = summarize_and_tables(&report, &dir)?;
            writeln!(out, "wrote {} files to {}", written.len(), dir.display())?;
        }
    }
    Ok(())
}

fn identify(
    record: &MultiChannelRecord,
    method: Method,
    ids: &IdentifierOptions,
    spectrum: Option<&Path>,
) -> Result<IdentifiedModeSet> {
    match method {
        Method::Pp => {
            if let Some(p) = spectrum {
                anpsd(&psd(record, &ids.pp.estimator)?)?.curve.write_csv_file(p)?;
            }
            pp_from_spectra(&csd_matrix(record, &ids.pp.estimator)?, &ids.pp)
        }
        Method::Fdd => {
            let spectra = csd_matrix(record, &ids.fdd.estimator)?;
            if let Some(p) = spectrum {
                first_singular_values(&spectra).0.write_csv_file(p)?;
            }
            fdd_from_spectra(&spectra, &ids.fdd)
        }
        Method::Ssi => {
            let result = stabilization(record, &ids.ssi)?;
            if let Some(p) = spectrum {
                result.diagram.write_csv_file(p)?;
            }
            let mut set = IdentifiedModeSet::new(Method::Ssi, result.modes);
            set.diagnostics = result.diagram.diagnostics;
            Ok(set)
        }
    }
}

fn dash(v: Option<f64>) -> String {
    v.map_or_else(|| "-".into(), |x| x.to_string())
}

fn write_pairing(
    record: &MultiChannelRecord,
    set: &IdentifiedModeSet,
    support: SupportCondition,
    seed: u64,
    ids: &IdentifierOptions,
    path: &Path,
) -> Result<()> {
    // only the FE model is needed; a short record keeps this cheap
    let spec = BeamSpec {
        duration: 0.01,
        ..BeamSpec::new(support)
    };
    let reference = simulate_beam(&spec, seed)?.reference;
    if reference.n_channels() != record.n_channels() {
        return Err(OmaError::InvalidInput(format!(
            "beam {support} has {} channels, the record has {}",
            reference.n_channels(),
            record.n_channels()
        )));
    }
    let pairing = pair_to_reference(set, &reference, &ids.pairing)?;
    let mut text = String::from("mode,reference_hz,frequency_hz,relative_error_pct,mac,damping\n");
    for e in &pairing.entries {
        let damping = e.identified_index.and_then(|i| set.modes[i].damping);
        text.push_str(&format!(
            "{},{},{},{},{},{}\n",
            e.reference_index + 1,
            e.reference_frequency,
            dash(e.frequency),
            dash(e.relative_error_pct),
            e.mac,
            dash(damping)
        ));
    }
    std::fs::write(path, text)?;
    Ok(())
}

fn write_modes(set: &IdentifiedModeSet, labels: &[String], path: &Path) -> Result<()> {
    let mut text = String::from("mode,frequency_hz,damping");
    for l in labels {
        text.push(',');
        text.push_str(l);
    }
    text.push('\n');
    for (i, m) in set.modes.iter().enumerate() {
        text.push_str(&format!("{},{},{}", i + 1, m.frequency, dash(m.damping)));
        for x in &m.shape {
            text.push_str(&format!(",{x}"));
        }
        text.push('\n');
    }
    std::fs::write(path, text)?;
    Ok(())
}
