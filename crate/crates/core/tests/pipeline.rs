use oma_core::beam_fem::SupportCondition;
use oma_core::bench::{simulate_beam, BeamSpec, CampaignConfig, IdentifierOptions, DEFAULT_SEED};
use oma_core::modal_metrics::{pair_to_reference, PairingOptions};
use oma_core::noise_model::{corrupt, NoiseSpec};
use oma_core::oma_freq::{fdd_identify, pp_identify};
use oma_core::oma_ssi::ssi_identify;

#[test]
fn shipped_config_is_the_default() {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/configs/campaign.default.json");
    let shipped = CampaignConfig::load(path).unwrap();
    assert_eq!(shipped, CampaignConfig::default());
}

#[test]
fn clean_cantilever_through_every_identifier() {
    let beam = simulate_beam(&BeamSpec::new(SupportCondition::CF), DEFAULT_SEED).unwrap();
    let ids = IdentifierOptions::default();
    let pairing = PairingOptions::default();

    let pp = pp_identify(&beam.record, &ids.pp).unwrap();
    let fdd = fdd_identify(&beam.record, &ids.fdd).unwrap();
    for set in [&pp, &fdd] {
        let p = pair_to_reference(set, &beam.reference, &pairing).unwrap();
        assert_eq!(p.identified_count(), 5, "{:?}", set.frequencies());
        assert!(p.min_mac() >= 0.99);
    }

    // mode 1 carries too little energy in 5 s for the subspace fit
    let ssi = ssi_identify(&beam.record, &ids.ssi).unwrap();
    let p = pair_to_reference(&ssi, &beam.reference, &pairing).unwrap();
    for e in &p.entries[1..] {
        let f = e.frequency.expect("SSI mode missing");
        assert!(e.relative_error_pct.unwrap() < 1.0, "{f} vs {}", e.reference_frequency);
        assert!(e.mac >= 0.99);
    }
    assert!(ssi.modes.iter().all(|m| m.damping.is_some_and(|z| z > 0.0 && z < 0.2)));
}

#[test]
fn moderate_noise_keeps_pp_modes() {
    let beam = simulate_beam(&BeamSpec::new(SupportCondition::CC), DEFAULT_SEED).unwrap();
    let (noisy, report) = corrupt(&beam.record, &NoiseSpec::new(0.2, 9).unwrap()).unwrap();
    assert!(report.realized_snr_db().iter().all(|s| (s.unwrap() - 13.98).abs() < 0.3));
    let set = pp_identify(&noisy, &IdentifierOptions::default().pp).unwrap();
    let p = pair_to_reference(&set, &beam.reference, &PairingOptions::default()).unwrap();
    assert_eq!(p.identified_count(), 5);
}
