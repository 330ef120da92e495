use num_complex::Complex64;
use rustfft::FftPlanner;

use super::MultiChannelRecord;
use crate::{OmaError, Result};

/// Keep every `factor`-th sample after an ideal (FFT brick-wall) low-pass
/// at the new Nyquist frequency.
pub fn decimate(record: &MultiChannelRecord, factor: usize) -> Result<MultiChannelRecord> {
    if factor == 0 {
        return Err(OmaError::InvalidParameter("decimation factor must be positive".into()));
    }
    if factor == 1 {
        return Ok(record.clone());
    }
    let n = record.n_samples();
    let kept = n.div_ceil(factor);
    if kept < 2 {
        return Err(OmaError::InvalidInput(format!("{n} samples cannot be decimated by {factor}")));
    }
    let mut planner = FftPlanner::<f64>::new();
    let forward = planner.plan_fft_forward(n);
    let inverse = planner.plan_fft_inverse(n);
    // highest line strictly below the new Nyquist frequency
    let cutoff = (n - 1) / (2 * factor);
    let data = record
        .channels()
        .iter()
        .map(|channel| {
            let mut buf: Vec<Complex64> = channel.iter().map(|x| Complex64::new(*x, 0.0)).collect();
            forward.process(&mut buf);
            for (k, b) in buf.iter_mut().enumerate() {
                if k > cutoff && k < n - cutoff {
                    *b = Complex64::new(0.0, 0.0);
                }
            }
            inverse.process(&mut buf);
            buf.iter().step_by(factor).map(|z| z.re / n as f64).collect()
        })
        .collect();
    MultiChannelRecord::new(record.sample_rate() / factor as f64, record.labels().to_vec(), data)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn in_band_tone_kept_out_of_band_removed() {
        let fs = 1000.0;
        let n = 4000;
        let low: Vec<f64> = (0..n).map(|k| (2.0 * PI * 50.0 * k as f64 / fs).sin()).collect();
        let mixed: Vec<f64> = (0..n).map(|k| low[k] + (2.0 * PI * 300.0 * k as f64 / fs).sin()).collect();
        let rec = MultiChannelRecord::unlabeled(fs, vec![mixed]).unwrap();
        let d = decimate(&rec, 4).unwrap();
        assert_eq!(d.sample_rate(), 250.0);
        assert_eq!(d.n_samples(), 1000);
        for (k, x) in d.channel(0).iter().enumerate() {
            assert!((x - low[4 * k]).abs() < 1e-9);
        }
    }

    #[test]
    fn factor_one_is_identity() {
        let rec = MultiChannelRecord::unlabeled(10.0, vec![vec![1.0, 2.0, 3.0]]).unwrap();
        assert_eq!(decimate(&rec, 1).unwrap(), rec);
        assert!(decimate(&rec, 0).is_err());
        assert!(decimate(&rec, 5).is_err());
    }
}
