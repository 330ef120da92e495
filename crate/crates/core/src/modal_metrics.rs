//! Modal assurance criterion, pairing of identified modes with the
//! reference solution, and frequency errors.

use serde::{Deserialize, Serialize};

use crate::beam_fem::ModalSolution;
use crate::oma_freq::IdentifiedModeSet;
use crate::{OmaError, Result};

/// MAC threshold above which an identified shape counts as the reference mode.
pub const MAC_THRESHOLD: f64 = 0.95;

/// `|phi . psi|^2 / ((phi . phi)(psi . psi))`, clamped to `[0, 1]`.
pub fn mac(phi: &[f64], psi: &[f64]) -> Result<f64> {
    if phi.len() != psi.len() {
        return Err(OmaError::Domain(format!(
            "MAC of vectors with lengths {} and {}",
            phi.len(),
            psi.len()
        )));
    }
    let (pp, ss) = (dot(phi, phi), dot(psi, psi));
    if pp == 0.0 || ss == 0.0 || !pp.is_finite() || !ss.is_finite() {
        return Err(OmaError::Domain("MAC of a zero vector".into()));
    }
    let ps = dot(phi, psi);
    Ok(((ps * ps) / (pp * ss)).clamp(0.0, 1.0))
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// `100 |f_id - f_ref| / f_ref`.
pub fn relative_error(f_identified: f64, f_reference: f64) -> Result<f64> {
    if !(f_reference > 0.0) {
        return Err(OmaError::Domain(format!("reference frequency must be positive, got {f_reference}")));
    }
    Ok(100.0 * (f_identified - f_reference).abs() / f_reference)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct PairingOptions {
    /// Half-width of the search window as a fraction of the reference frequency.
    pub frequency_window: f64,
    pub mac_threshold: f64,
}

impl Default for PairingOptions {
    fn default() -> Self {
        PairingOptions {
            frequency_window: 0.05,
            mac_threshold: MAC_THRESHOLD,
        }
    }
}

/// Outcome for one reference mode.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairEntry {
    pub reference_index: usize,
    pub reference_frequency: f64,
    /// Index into the identified set; `None` means "not identified".
    pub identified_index: Option<usize>,
    pub frequency: Option<f64>,
    /// Best MAC among candidates inside the frequency window, accepted or
    /// not; 0 when the window is empty.
    pub mac: f64,
    pub relative_error_pct: Option<f64>,
}

impl PairEntry {
    pub fn is_identified(&self) -> bool {
        self.identified_index.is_some()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModePairing {
    pub entries: Vec<PairEntry>,
}

impl ModePairing {
    pub fn identified_count(&self) -> usize {
        self.entries.iter().filter(|e| e.is_identified()).count()
    }

    pub fn min_mac(&self) -> f64 {
        self.entries.iter().map(|e| e.mac).fold(f64::INFINITY, f64::min)
    }
}

/// Pair each reference mode with the identified mode inside the frequency
/// window that maximizes MAC; accepted only at or above the MAC threshold.
///
/// Assignment is greedy over all admissible (reference, candidate) pairs in
/// order of decreasing MAC, ties toward the smaller frequency error, so no
/// identified mode is used twice.
pub fn pair_to_reference(
    identified: &IdentifiedModeSet,
    reference: &ModalSolution,
    options: &PairingOptions,
) -> Result<ModePairing> {
    if reference.n_modes() == 0 {
        return Err(OmaError::InvalidInput("reference solution has no modes".into()));
    }
    let ref_shapes: Vec<Vec<f64>> = (0..reference.n_modes()).map(|m| reference.channel_shape(m)).collect();

    let mut best_mac = vec![0.0f64; reference.n_modes()];
    // (mac, frequency error, reference, candidate)
    let mut admissible: Vec<(f64, f64, usize, usize)> = Vec::new();
    for (r, f_ref) in reference.frequencies.iter().enumerate() {
        for (c, mode) in identified.modes.iter().enumerate() {
            let err = (mode.frequency - f_ref).abs() / f_ref;
            if err > options.frequency_window {
                continue;
            }
            let value = mac(&mode.shape, &ref_shapes[r])?;
            best_mac[r] = best_mac[r].max(value);
            if value >= options.mac_threshold {
                admissible.push((value, err, r, c));
            }
        }
    }
    admissible.sort_by(|a, b| {
        b.0.total_cmp(&a.0)
            .then(a.1.total_cmp(&b.1))
            .then(a.2.cmp(&b.2))
            .then(a.3.cmp(&b.3))
    });

    let mut entries: Vec<PairEntry> = reference
        .frequencies
        .iter()
        .enumerate()
        .map(|(r, &f)| PairEntry {
            reference_index: r,
            reference_frequency: f,
            identified_index: None,
            frequency: None,
            mac: best_mac[r],
            relative_error_pct: None,
        })
        .collect();
    let mut used = vec![false; identified.modes.len()];
    for (_, _, r, c) in admissible {
        if used[c] || entries[r].identified_index.is_some() {
            continue;
        }
        used[c] = true;
        let f = identified.modes[c].frequency;
        entries[r].identified_index = Some(c);
        entries[r].frequency = Some(f);
        entries[r].relative_error_pct = Some(relative_error(f, entries[r].reference_frequency)?);
    }
    Ok(ModePairing { entries })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::beam_fem::{assemble_model, modal_analysis, BeamModel, SupportCondition};
    use crate::oma_freq::{IdentifiedMode, Method};
    use proptest::prelude::*;
    use std::f64::consts::PI;

    #[test]
    fn mac_identity_orthogonality_scaling() {
        let phi = [0.3, -1.2, 0.8, 2.0];
        assert!((mac(&phi, &phi).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(mac(&[1.0, 0.0], &[0.0, 1.0]).unwrap(), 0.0);
        let scaled: Vec<f64> = phi.iter().map(|x| -2.5 * x).collect();
        assert!((mac(&phi, &scaled).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn mac_domain_errors() {
        assert!(mac(&[0.0, 0.0], &[1.0, 2.0]).is_err());
        assert!(mac(&[1.0], &[1.0, 2.0]).is_err());
    }

    #[test]
    fn sampled_pinned_sines_are_orthogonal() {
        let sine = |k: usize| -> Vec<f64> { (1..=9).map(|j| (k as f64 * PI * j as f64 / 10.0).sin()).collect() };
        for i in 1..=5 {
            for j in 1..=5 {
                if i != j {
                    assert!(mac(&sine(i), &sine(j)).unwrap() < 1e-10);
                }
            }
        }
    }

    #[test]
    fn relative_errors() {
        assert!((relative_error(8.0, 8.2).unwrap() - 2.439).abs() < 1e-3);
        assert_eq!(relative_error(5.0, 5.0).unwrap(), 0.0);
        assert!((relative_error(52.0, 52.2).unwrap() - 0.383).abs() < 1e-3);
        assert!(relative_error(1.0, 0.0).is_err());
    }

    fn reference() -> ModalSolution {
        let sys = assemble_model(&BeamModel::reference(SupportCondition::CF)).unwrap();
        modal_analysis(&sys, 5).unwrap()
    }

    fn as_identified(reference: &ModalSolution) -> IdentifiedModeSet {
        IdentifiedModeSet::new(
            Method::Fdd,
            (0..reference.n_modes())
                .map(|m| IdentifiedMode::new(reference.frequencies[m], reference.channel_shape(m)))
                .collect(),
        )
    }

    #[test]
    fn self_pairing() {
        let r = reference();
        let p = pair_to_reference(&as_identified(&r), &r, &PairingOptions::default()).unwrap();
        assert_eq!(p.identified_count(), 5);
        for e in &p.entries {
            assert!((e.mac - 1.0).abs() < 1e-12);
            assert_eq!(e.relative_error_pct, Some(0.0));
        }
    }

    #[test]
    fn empty_identified_set() {
        let r = reference();
        let p = pair_to_reference(&IdentifiedModeSet::new(Method::Pp, vec![]), &r, &PairingOptions::default()).unwrap();
        assert_eq!(p.identified_count(), 0);
        assert!(p.entries.iter().all(|e| e.mac == 0.0 && e.frequency.is_none()));
    }

    #[test]
    fn low_mac_candidate_is_a_dash() {
        let r = reference();
        let mut set = as_identified(&r);
        // mode 1 frequency kept, shape replaced by mode 2's
        set.modes[0].shape = r.channel_shape(1);
        let p = pair_to_reference(&set, &r, &PairingOptions::default()).unwrap();
        assert!(!p.entries[0].is_identified());
        assert!(p.entries[0].mac < MAC_THRESHOLD);
        assert_eq!(p.identified_count(), 4);
    }

    #[test]
    fn candidates_outside_window_ignored() {
        let r = reference();
        let mut set = as_identified(&r);
        set.modes[2].frequency *= 1.06;
        let p = pair_to_reference(&set, &r, &PairingOptions::default()).unwrap();
        assert!(!p.entries[2].is_identified());
        assert_eq!(p.entries[2].mac, 0.0);
    }

    #[test]
    fn each_candidate_used_once_ties_toward_smaller_error() {
        let r = reference();
        let shape = r.channel_shape(0);
        let f = r.frequencies[0];
        let set = IdentifiedModeSet::new(
            Method::Pp,
            vec![
                IdentifiedMode::new(f * 0.98, shape.clone()),
                IdentifiedMode::new(f * 1.01, shape.clone()),
            ],
        );
        let p = pair_to_reference(&set, &r, &PairingOptions::default()).unwrap();
        assert_eq!(p.entries[0].identified_index, Some(1));
    }

    proptest! {
        #[test]
        fn mac_symmetric_bounded_scale_invariant(
            a in prop::collection::vec(-10.0f64..10.0, 8),
            b in prop::collection::vec(-10.0f64..10.0, 8),
            s in prop_oneof![-100.0f64..-0.01, 0.01f64..100.0],
        ) {
            prop_assume!(a.iter().any(|x| x.abs() > 1e-3) && b.iter().any(|x| x.abs() > 1e-3));
            let m = mac(&a, &b).unwrap();
            prop_assert_eq!(m, mac(&b, &a).unwrap());
            prop_assert!((0.0..=1.0).contains(&m));
            let scaled: Vec<f64> = a.iter().map(|x| x * s).collect();
            prop_assert!((mac(&scaled, &b).unwrap() - m).abs() < 1e-12);
        }
    }
}
