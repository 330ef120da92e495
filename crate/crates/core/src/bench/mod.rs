//! Monte Carlo benchmark: beams x noise levels x runs x methods, with
//! the tables and curves derived from it.

mod config;
mod report;
mod run;
mod scenario;

pub use config::{CampaignConfig, IdentifierOptions, DEFAULT_RUNS, DEFAULT_SEED, FULL_RUNS, SCHEMA_VERSION};
pub use report::{
    prepare_beams, run_campaign, summarize_and_tables, write_outputs, BenchmarkReport, FailureCount, MacStatistics,
    WorstCase,
};
pub use run::{noise_seed, noisy_record, run_prepared, run_single, MethodOutcome, RunResult};
pub use scenario::{force_seed, simulate_beam, BeamSpec, SimulatedBeam};
