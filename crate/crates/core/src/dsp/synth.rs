use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rustfft::FftPlanner;

use crate::{OmaError, Result};

/// Stable 64-bit child seed from a master seed, a purpose tag and an index
/// path. FNV-1a over the bytes followed by a SplitMix64 finalizer, so the
/// value never depends on the platform or the standard library version.
pub fn derive_seed(master: u64, tag: &str, indices: &[u64]) -> u64 {
    const OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
    const PRIME: u64 = 0x0000_0100_0000_01b3;
    let mut h = OFFSET;
    let mut eat = |bytes: &[u8]| {
        for b in bytes {
            h ^= u64::from(*b);
            h = h.wrapping_mul(PRIME);
        }
    };
    eat(&master.to_le_bytes());
    eat(tag.as_bytes());
    eat(&[0xff]);
    for i in indices {
        eat(&i.to_le_bytes());
    }
    let mut z = h.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// `n` i.i.d. standard normal samples. The realized mean and variance are
/// left as drawn.
pub fn gaussian_white(n: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| rng.sample::<f64, _>(StandardNormal)).collect()
}

/// Band-limited random force of `round(duration * rate) + 1` samples.
///
/// Built in the frequency domain: every line inside `[f_lo, f_hi]` gets unit
/// magnitude and a uniform random phase, every other line is zero. The
/// inverse transform is scaled so its RMS equals `rms_target` exactly.
pub fn band_limited_force(duration: f64, rate: f64, band: (f64, f64), rms_target: f64, seed: u64) -> Result<Vec<f64>> {
    let (f_lo, f_hi) = band;
    if !(duration > 0.0 && rate > 0.0) {
        return Err(OmaError::InvalidParameter(format!(
            "duration and rate must be positive (got {duration}, {rate})"
        )));
    }
    if !(0.0 <= f_lo && f_lo < f_hi && f_hi <= rate / 2.0) {
        return Err(OmaError::InvalidParameter(format!(
            "band [{f_lo}, {f_hi}] Hz must satisfy 0 <= lo < hi <= Nyquist ({} Hz)",
            rate / 2.0
        )));
    }
    if !(rms_target >= 0.0 && rms_target.is_finite()) {
        return Err(OmaError::InvalidParameter(format!("RMS target must be non-negative, got {rms_target}")));
    }

    let n = (duration * rate).round() as usize + 1;
    let df = rate / n as f64;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut spectrum = vec![Complex64::new(0.0, 0.0); n];
    let mut lines = 0usize;
    for k in 0..=n / 2 {
        let theta = 2.0 * PI * rng.random::<f64>();
        let f = k as f64 * df;
        if f < f_lo || f > f_hi {
            continue;
        }
        lines += 1;
        let self_conjugate = k == 0 || 2 * k == n;
        if self_conjugate {
            spectrum[k] = Complex64::new(if theta < PI { 1.0 } else { -1.0 }, 0.0);
        } else {
            let x = Complex64::from_polar(1.0, theta);
            spectrum[k] = x;
            spectrum[n - k] = x.conj();
        }
    }
    if lines == 0 {
        return Err(OmaError::InvalidParameter(format!(
            "band [{f_lo}, {f_hi}] Hz contains no frequency line at resolution {df} Hz"
        )));
    }

    FftPlanner::<f64>::new().plan_fft_inverse(n).process(&mut spectrum);
    let mut signal: Vec<f64> = spectrum.iter().map(|c| c.re).collect();
    let rms = (signal.iter().map(|x| x * x).sum::<f64>() / n as f64).sqrt();
    let scale = if rms > 0.0 { rms_target / rms } else { 0.0 };
    signal.iter_mut().for_each(|x| *x *= scale);
    Ok(signal)
}
