use std::path::Path;

use oma_core::beam_fem::SupportCondition;
use oma_core::bench::{run_campaign, write_outputs, BeamSpec, BenchmarkReport, CampaignConfig};
use oma_core::oma_freq::Method;

fn tiny(support: SupportCondition, noise_levels: Vec<f64>, runs: usize, methods: Vec<Method>) -> CampaignConfig {
    CampaignConfig {
        beams: vec![BeamSpec {
            duration: 2.0,
            ..BeamSpec::new(support)
        }],
        noise_levels,
        runs,
        methods,
        ..CampaignConfig::default()
    }
}

fn read(dir: &Path, name: &str) -> String {
    std::fs::read_to_string(dir.join(name)).unwrap()
}

#[test]
fn single_run_report() {
    let config = tiny(SupportCondition::SS, vec![0.5], 1, Method::ALL.to_vec());
    let report = run_campaign(&config, Some(1)).unwrap();
    assert_eq!(report.runs.len(), 1);
    let run = &report.runs[0];
    assert_eq!(run.methods.len(), 3);
    assert!(run.realized_snr_db.iter().all(|s| (s.unwrap() - 6.02).abs() < 0.5));
    assert_eq!(report.mac_statistics.len(), 3 * 5);
    assert!(report.mac_statistics.iter().all(|s| s.runs == 1 && s.std == 0.0));
    assert_eq!(report.worst_cases.len(), 1);

    let dir = tempfile::tempdir().unwrap();
    write_outputs(&report, dir.path()).unwrap();
    let freq = read(dir.path(), "table_freq_SS.csv");
    let mut lines = freq.lines();
    assert_eq!(lines.next().unwrap(), "noise_level,snr_db,method,run,mode_1,mode_2,mode_3,mode_4,mode_5");
    assert!(lines.next().unwrap().starts_with("reference,,FE,"));
    assert_eq!(lines.count(), 3);
    assert!(read(dir.path(), "table_mac_SS.csv").starts_with("noise_level,snr_db,method,mode,runs,identified"));
    assert!(read(dir.path(), "table_err.csv").starts_with("beam,method,mode,mean_error_pct"));
    assert!(read(dir.path(), "anpsd_SS_0.5.csv").starts_with("frequency_hz,value"));
    assert!(read(dir.path(), "modeshape_SS_3_0.5.csv").starts_with("channel,reference,pp,fdd,ssi"));

    let reloaded = BenchmarkReport::load(dir.path().join("report.json")).unwrap();
    assert_eq!(reloaded.runs, report.runs);
    let resolved = CampaignConfig::load(dir.path().join("campaign.resolved.json")).unwrap();
    assert_eq!(resolved, config);
}

#[test]
fn reruns_are_byte_identical_across_thread_counts() {
    let config = tiny(SupportCondition::CS, vec![0.1, 1.0], 3, vec![Method::Pp, Method::Fdd]);
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let mut wa = write_outputs(&run_campaign(&config, Some(1)).unwrap(), a.path()).unwrap();
    let mut wb = write_outputs(&run_campaign(&config, Some(3)).unwrap(), b.path()).unwrap();
    wa.sort();
    wb.sort();
    assert_eq!(wa.len(), wb.len());
    for (x, y) in wa.iter().zip(&wb) {
        assert_eq!(x.file_name(), y.file_name());
        assert!(std::fs::read(x).unwrap() == std::fs::read(y).unwrap(), "{} differs", x.display());
    }
}

#[test]
fn noise_free_rows_have_no_gaps() {
    let config = CampaignConfig {
        beams: vec![BeamSpec::new(SupportCondition::CF)],
        noise_levels: vec![0.0],
        runs: 1,
        methods: vec![Method::Pp, Method::Fdd],
        ..CampaignConfig::default()
    };
    let report = run_campaign(&config, None).unwrap();
    let dir = tempfile::tempdir().unwrap();
    write_outputs(&report, dir.path()).unwrap();
    let freq = read(dir.path(), "table_freq_CF.csv");
    for row in freq.lines().skip(2) {
        assert!(row.starts_with("0,inf,"), "{row}");
        assert!(!row.split(',').any(|c| c == "-"), "{row}");
    }
}

#[test]
fn invalid_configs_rejected() {
    assert!(CampaignConfig::from_json(r#"{"runs": 0}"#).is_err());
    assert!(CampaignConfig::from_json(r#"{"noise_levels": [-0.1]}"#).is_err());
    assert!(CampaignConfig::from_json(r#"{"schema_version": 9}"#).is_err());
    assert!(CampaignConfig::from_json(r#"{"methods": ["modal"]}"#).is_err());
    assert!(CampaignConfig::from_json("[").is_err());
}
