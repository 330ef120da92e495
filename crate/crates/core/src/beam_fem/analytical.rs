use std::f64::consts::PI;

use super::{BeamModel, SupportCondition};
use crate::{OmaError, Result};

const ROOT_TOLERANCE: f64 = 1e-12;

// Characteristic functions divided by cosh to stay finite for large roots.
fn characteristic(support: SupportCondition, x: f64) -> f64 {
    match support {
        // cos x cosh x = -1
        SupportCondition::CF => x.cos() + 1.0 / x.cosh(),
        // sin x = 0
        SupportCondition::SS => x.sin(),
        // tan x = tanh x
        SupportCondition::CS => x.sin() - x.cos() * x.tanh(),
        // cos x cosh x = 1
        SupportCondition::CC => x.cos() - 1.0 / x.cosh(),
    }
}

fn root_guess(support: SupportCondition, k: usize) -> f64 {
    let k = k as f64;
    match support {
        SupportCondition::CF => (2.0 * k - 1.0) * PI / 2.0,
        SupportCondition::SS => k * PI,
        SupportCondition::CS => (4.0 * k + 1.0) * PI / 4.0,
        SupportCondition::CC => (2.0 * k + 1.0) * PI / 2.0,
    }
}

fn bisect(support: SupportCondition, mut lo: f64, mut hi: f64) -> f64 {
    let mut f_lo = characteristic(support, lo);
    while hi - lo > ROOT_TOLERANCE {
        let mid = 0.5 * (lo + hi);
        let f_mid = characteristic(support, mid);
        if f_mid == 0.0 {
            return mid;
        }
        if (f_mid < 0.0) == (f_lo < 0.0) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// First `n` dimensionless eigenvalues `lambda_k` (= beta_k L) of a uniform
/// beam with the given supports.
pub fn characteristic_roots(support: SupportCondition, n: usize) -> Result<Vec<f64>> {
    if n == 0 {
        return Err(OmaError::InvalidParameter("at least one root is required".into()));
    }
    (1..=n)
        .map(|k| {
            if support == SupportCondition::SS {
                return Ok(k as f64 * PI);
            }
            let guess = root_guess(support, k);
            let mut half = 0.4;
            while half <= PI / 2.0 {
                let (lo, hi) = ((guess - half).max(1e-6), guess + half);
                let (f_lo, f_hi) = (characteristic(support, lo), characteristic(support, hi));
                if f_lo == 0.0 {
                    return Ok(lo);
                }
                if f_hi == 0.0 {
                    return Ok(hi);
                }
                if (f_lo < 0.0) != (f_hi < 0.0) {
                    return Ok(bisect(support, lo, hi));
                }
                half *= 1.5;
            }
            Err(OmaError::Numerical(format!(
                "could not bracket root {k} of the {support} characteristic equation"
            )))
        })
        .collect()
}

/// Natural frequencies (Hz) of the continuous Euler-Bernoulli beam:
/// `f_k = lambda_k^2 sqrt(EI / rho A) / (2 pi L^2)`.
pub fn analytical_frequencies(model: &BeamModel, n: usize) -> Result<Vec<f64>> {
    model.validate()?;
    let scale = (model.flexural_rigidity() / model.mass_per_length()).sqrt()
        / (2.0 * PI * model.span_length.powi(2));
    Ok(characteristic_roots(model.support, n)?
        .into_iter()
        .map(|lambda| lambda * lambda * scale)
        .collect())
}

/// Record length needed to resolve a mode, `1 / (f zeta)` with `f` in Hz.
pub fn recording_duration(frequency_hz: f64, zeta: f64) -> f64 {
    debug_assert!(frequency_hz > 0.0 && zeta > 0.0);
    1.0 / (frequency_hz * zeta)
}

#[cfg(test)]
mod tests {
    use super::*;

    // Roots printed in standard vibration handbooks.
    #[test]
    fn known_roots() {
        let cf = characteristic_roots(SupportCondition::CF, 3).unwrap();
        assert!((cf[0] - 1.875_104_068_7).abs() < 1e-9);
        assert!((cf[1] - 4.694_091_132_9).abs() < 1e-9);
        assert!((cf[2] - 7.854_757_438_2).abs() < 1e-9);
        let cc = characteristic_roots(SupportCondition::CC, 2).unwrap();
        assert!((cc[0] - 4.730_040_744_9).abs() < 1e-9);
        assert!((cc[1] - 7.853_204_624_1).abs() < 1e-9);
        let cs = characteristic_roots(SupportCondition::CS, 2).unwrap();
        assert!((cs[0] - 3.926_602_312_0).abs() < 1e-9);
        assert!((cs[1] - 7.068_582_745_6).abs() < 1e-9);
    }

    #[test]
    fn roots_satisfy_unscaled_equations() {
        for (support, n) in [
            (SupportCondition::CF, 8),
            (SupportCondition::CC, 8),
            (SupportCondition::CS, 8),
        ] {
            for x in characteristic_roots(support, n).unwrap() {
                let residual = match support {
                    SupportCondition::CF => (x.cos() * x.cosh() + 1.0) / x.cosh(),
                    SupportCondition::CC => (x.cos() * x.cosh() - 1.0) / x.cosh(),
                    _ => x.tan() - x.tanh(),
                };
                assert!(residual.abs() < 1e-9, "{support} root {x}: {residual}");
            }
        }
    }

    #[test]
    fn roots_are_strictly_increasing() {
        for support in SupportCondition::ALL {
            let r = characteristic_roots(support, 12).unwrap();
            assert!(r.windows(2).all(|w| w[1] > w[0] + 2.0));
        }
    }

    #[test]
    fn pinned_ratio_is_four() {
        let f = analytical_frequencies(&BeamModel::reference(SupportCondition::SS), 2).unwrap();
        assert!((f[1] / f[0] - 4.0).abs() < 1e-12);
    }

    #[test]
    fn clamped_clamped_first_mode() {
        let f = analytical_frequencies(&BeamModel::reference(SupportCondition::CC), 1).unwrap();
        assert!((f[0] - 51.9).abs() < 0.05, "{}", f[0]);
    }

    #[test]
    fn cantilever_matches_table_one_within_two_percent() {
        let f = analytical_frequencies(&BeamModel::reference(SupportCondition::CF), 5).unwrap();
        for (got, want) in f.iter().zip([8.2, 51.2, 144.8, 280.8, 463.7]) {
            assert!((got - want).abs() / want < 0.02, "{got} vs {want}");
        }
    }

    #[test]
    fn durations() {
        assert!((recording_duration(8.2, 0.025) - 4.878).abs() < 1e-3);
        assert_eq!(recording_duration(1.0, 1.0), 1.0);
        assert!((recording_duration(23.2, 0.025) - 1.724).abs() < 1e-3);
    }

    #[test]
    fn zero_roots_rejected() {
        assert!(characteristic_roots(SupportCondition::CF, 0).is_err());
    }
}
