use crate::{OmaError, Result};

/// Mean square and root mean square of `samples`.
pub fn power_and_rms(samples: &[f64]) -> Result<(f64, f64)> {
    let p = power(samples)?;
    Ok((p, p.sqrt()))
}

/// Mean square `sum(x_i^2) / n`.
pub fn power(samples: &[f64]) -> Result<f64> {
    if samples.is_empty() {
        return Err(OmaError::InvalidInput("power of an empty sequence".into()));
    }
    Ok(samples.iter().map(|x| x * x).sum::<f64>() / samples.len() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn constant_signal() {
        let (p, r) = power_and_rms(&[-3.0; 17]).unwrap();
        assert_eq!(p, 9.0);
        assert_eq!(r, 3.0);
    }

    #[test]
    fn two_samples() {
        let (p, r) = power_and_rms(&[3.0, 4.0]).unwrap();
        assert_eq!(p, 12.5);
        assert!((r - 3.535_533_905_932_737_5).abs() < 1e-12);
    }

    #[test]
    fn sine_over_whole_periods() {
        let amp = 2.5;
        let x: Vec<f64> = (0..1000).map(|i| amp * (2.0 * PI * 7.0 * i as f64 / 1000.0).sin()).collect();
        let (p, _) = power_and_rms(&x).unwrap();
        assert!((p - amp * amp / 2.0).abs() < 1e-9);
    }

    #[test]
    fn empty_is_an_error() {
        assert!(power_and_rms(&[]).is_err());
    }
}
