//! C interface to `oma-core`.
//!
//! Objects cross the boundary as opaque handles created by `oma_*_new`-style
//! constructors and released with the matching `*_free`. Every fallible call
//! returns an [`OmaStatus`]; on failure [`oma_last_error`] gives a message for
//! the calling thread. Panics are caught and reported as
//! [`OmaStatus::Panic`], they never unwind into C.
//!
//! Support conditions and methods are passed as plain integers with the
//! values of [`OmaSupport`] and [`OmaMethod`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use oma_core::beam_fem::SupportCondition;
use oma_core::bench::{
    run_campaign, simulate_beam, write_outputs, BeamSpec, BenchmarkReport, CampaignConfig, IdentifierOptions,
};
use oma_core::dsp::MultiChannelRecord;
use oma_core::modal_metrics;
use oma_core::noise_model::{self, NoiseSpec};
use oma_core::oma_freq::{fdd_identify, pp_identify, IdentifiedModeSet, Method};
use oma_core::oma_ssi::ssi_identify;
use oma_core::OmaError;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OmaStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    InvalidInput = 3,
    Domain = 4,
    Numerical = 5,
    Io = 6,
    Format = 7,
    Panic = 8,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OmaSupport {
    Cf = 0,
    Ss = 1,
    Cs = 2,
    Cc = 3,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OmaMethod {
    Pp = 0,
    Fdd = 1,
    Ssi = 2,
}

/// Multi-channel acceleration record.
pub struct OmaRecord {
    inner: MultiChannelRecord,
}

/// Modes returned by one identifier.
pub struct OmaModeSet {
    inner: IdentifiedModeSet,
}

/// Result of a benchmark campaign.
pub struct OmaReport {
    inner: BenchmarkReport,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

struct Failure {
    status: OmaStatus,
    message: String,
}

impl From<OmaError> for Failure {
    fn from(e: OmaError) -> Self {
        let status = match &e {
            OmaError::InvalidParameter(_) => OmaStatus::InvalidArgument,
            OmaError::InvalidInput(_) | OmaError::NoChannels => OmaStatus::InvalidInput,
            OmaError::Domain(_) => OmaStatus::Domain,
            OmaError::Numerical(_) => OmaStatus::Numerical,
            OmaError::Io(_) => OmaStatus::Io,
            OmaError::Format(_) | OmaError::Json(_) => OmaStatus::Format,
        };
        Failure {
            status,
            message: e.to_string(),
        }
    }
}

fn fail(status: OmaStatus, message: impl Into<String>) -> Failure {
    Failure {
        status,
        message: message.into(),
    }
}

fn set_last_error(message: String) {
    let c = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(c));
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> OmaStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => OmaStatus::Ok,
        Ok(Err(failure)) => {
            set_last_error(failure.message);
            failure.status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_last_error(format!("panic: {msg}"));
            OmaStatus::Panic
        }
    }
}

unsafe fn deref<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref()
        .ok_or_else(|| fail(OmaStatus::NullPointer, format!("{what} is null")))
}

unsafe fn out_ptr<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, Failure> {
    p.as_mut()
        .ok_or_else(|| fail(OmaStatus::NullPointer, format!("{what} is null")))
}

unsafe fn slice<'a>(p: *const f64, len: usize, what: &str) -> Result<&'a [f64], Failure> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(fail(OmaStatus::NullPointer, format!("{what} is null")));
    }
    Ok(std::slice::from_raw_parts(p, len))
}

unsafe fn c_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(fail(OmaStatus::NullPointer, format!("{what} is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| fail(OmaStatus::InvalidArgument, format!("{what} is not valid UTF-8")))
}

fn support_from(code: i32) -> Result<SupportCondition, Failure> {
    match code {
        0 => Ok(SupportCondition::CF),
        1 => Ok(SupportCondition::SS),
        2 => Ok(SupportCondition::CS),
        3 => Ok(SupportCondition::CC),
        _ => Err(fail(OmaStatus::InvalidArgument, format!("unknown support code {code}"))),
    }
}

fn method_from(code: i32) -> Result<Method, Failure> {
    match code {
        0 => Ok(Method::Pp),
        1 => Ok(Method::Fdd),
        2 => Ok(Method::Ssi),
        _ => Err(fail(OmaStatus::InvalidArgument, format!("unknown method code {code}"))),
    }
}

fn into_handle<T>(value: T) -> *mut T {
    Box::into_raw(Box::new(value))
}

/// Message of the last failed call on this thread, or null if none. The
/// pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn oma_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

#[no_mangle]
pub extern "C" fn oma_clear_error() {
    LAST_ERROR.with(|slot| *slot.borrow_mut() = None);
}

/// Build a record from `n_channels * n_samples` values stored channel after
/// channel.
///
/// # Safety
/// `data` must point to `n_channels * n_samples` doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn oma_record_from_data(
    sample_rate: f64,
    n_channels: usize,
    n_samples: usize,
    data: *const f64,
    out: *mut *mut OmaRecord,
) -> OmaStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        let total = n_channels
            .checked_mul(n_samples)
            .ok_or_else(|| fail(OmaStatus::InvalidArgument, "record size overflows"))?;
        let values = slice(data, total, "data")?;
        let channels = if n_samples == 0 {
            vec![Vec::new(); n_channels]
        } else {
            values.chunks(n_samples).map(<[f64]>::to_vec).collect()
        };
        let inner = MultiChannelRecord::unlabeled(sample_rate, channels)?;
        *out = into_handle(OmaRecord { inner });
        Ok(())
    })
}

/// Simulate the noise-free response of the reference beam with the given
/// support. `duration <= 0` or `dt <= 0` selects the defaults (5 s, 1e-4 s).
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn oma_simulate(
    support: i32,
    seed: u64,
    duration: f64,
    dt: f64,
    out: *mut *mut OmaRecord,
) -> OmaStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        let mut spec = BeamSpec::new(support_from(support)?);
        if duration > 0.0 {
            spec.duration = duration;
        }
        if dt > 0.0 {
            spec.dt = dt;
        }
        let sim = simulate_beam(&spec, seed)?;
        *out = into_handle(OmaRecord { inner: sim.record });
        Ok(())
    })
}

/// Reference natural frequencies (Hz) of the beam model. Writes at most
/// `capacity` values and stores the count written in `written`.
///
/// # Safety
/// `buffer` must hold `capacity` doubles; `written` must be writable.
#[no_mangle]
pub unsafe extern "C" fn oma_reference_frequencies(
    support: i32,
    buffer: *mut f64,
    capacity: usize,
    written: *mut usize,
) -> OmaStatus {
    guard(|| {
        let written = out_ptr(written, "written")?;
        if capacity > 0 && buffer.is_null() {
            return Err(fail(OmaStatus::NullPointer, "buffer is null"));
        }
        let spec = BeamSpec {
            duration: 0.01,
            ..BeamSpec::new(support_from(support)?)
        };
        let reference = simulate_beam(&spec, 0)?.reference;
        let n = reference.frequencies.len().min(capacity);
        for (i, f) in reference.frequencies.iter().take(n).enumerate() {
            *buffer.add(i) = *f;
        }
        *written = n;
        Ok(())
    })
}

/// # Safety
/// `record` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn oma_record_free(record: *mut OmaRecord) {
    if !record.is_null() {
        drop(Box::from_raw(record));
    }
}

/// # Safety
/// `record` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn oma_record_n_channels(record: *const OmaRecord, out: *mut usize) -> OmaStatus {
    guard(|| {
        *out_ptr(out, "out")? = deref(record, "record")?.inner.n_channels();
        Ok(())
    })
}

/// # Safety
/// `record` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn oma_record_n_samples(record: *const OmaRecord, out: *mut usize) -> OmaStatus {
    guard(|| {
        *out_ptr(out, "out")? = deref(record, "record")?.inner.n_samples();
        Ok(())
    })
}

/// # Safety
/// `record` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn oma_record_sample_rate(record: *const OmaRecord, out: *mut f64) -> OmaStatus {
    guard(|| {
        *out_ptr(out, "out")? = deref(record, "record")?.inner.sample_rate();
        Ok(())
    })
}

/// Copy channel `channel` into `buffer`, which must hold `capacity >= n_samples` doubles.
///
/// # Safety
/// `record` must be a live handle; `buffer` must hold `capacity` doubles.
#[no_mangle]
pub unsafe extern "C" fn oma_record_copy_channel(
    record: *const OmaRecord,
    channel: usize,
    buffer: *mut f64,
    capacity: usize,
) -> OmaStatus {
    guard(|| {
        let rec = &deref(record, "record")?.inner;
        if channel >= rec.n_channels() {
            return Err(fail(
                OmaStatus::InvalidArgument,
                format!("channel {channel} out of range (record has {})", rec.n_channels()),
            ));
        }
        let data = rec.channel(channel);
        if capacity < data.len() {
            return Err(fail(
                OmaStatus::InvalidArgument,
                format!("buffer holds {capacity} values, channel has {}", data.len()),
            ));
        }
        if !data.is_empty() {
            if buffer.is_null() {
                return Err(fail(OmaStatus::NullPointer, "buffer is null"));
            }
            ptr::copy_nonoverlapping(data.as_ptr(), buffer, data.len());
        }
        Ok(())
    })
}

/// Add Gaussian noise of level `noise_level` to every channel. When
/// `snr_db` is not null it receives the nominal SNR (infinity for level 0).
///
/// # Safety
/// `record` must be a live handle; `out` must be writable; `snr_db` may be null.
#[no_mangle]
pub unsafe extern "C" fn oma_corrupt(
    record: *const OmaRecord,
    noise_level: f64,
    seed: u64,
    out: *mut *mut OmaRecord,
    snr_db: *mut f64,
) -> OmaStatus {
    guard(|| {
        let rec = &deref(record, "record")?.inner;
        let out = out_ptr(out, "out")?;
        let (noisy, report) = noise_model::corrupt(rec, &NoiseSpec::new(noise_level, seed)?)?;
        if let Some(s) = snr_db.as_mut() {
            *s = report.nominal_snr_db.unwrap_or(f64::INFINITY);
        }
        *out = into_handle(OmaRecord { inner: noisy });
        Ok(())
    })
}

/// `20 log10(1 / noise_level)`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn oma_nl_to_snr_db(noise_level: f64, out: *mut f64) -> OmaStatus {
    guard(|| {
        *out_ptr(out, "out")? = noise_model::nl_to_snr_db(noise_level)?;
        Ok(())
    })
}

/// Modal assurance criterion of two real vectors of length `len`.
///
/// # Safety
/// `a` and `b` must hold `len` doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn oma_mac(a: *const f64, b: *const f64, len: usize, out: *mut f64) -> OmaStatus {
    guard(|| {
        let a = slice(a, len, "a")?;
        let b = slice(b, len, "b")?;
        *out_ptr(out, "out")? = modal_metrics::mac(a, b)?;
        Ok(())
    })
}

/// Identify modes with the default options of `method` (an [`OmaMethod`] value).
///
/// # Safety
/// `record` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn oma_identify(record: *const OmaRecord, method: i32, out: *mut *mut OmaModeSet) -> OmaStatus {
    guard(|| {
        let rec = &deref(record, "record")?.inner;
        let out = out_ptr(out, "out")?;
        let opts = IdentifierOptions::default();
        let inner = match method_from(method)? {
            Method::Pp => pp_identify(rec, &opts.pp)?,
            Method::Fdd => fdd_identify(rec, &opts.fdd)?,
            Method::Ssi => ssi_identify(rec, &opts.ssi)?,
        };
        *out = into_handle(OmaModeSet { inner });
        Ok(())
    })
}

/// # Safety
/// `modes` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn oma_modeset_free(modes: *mut OmaModeSet) {
    if !modes.is_null() {
        drop(Box::from_raw(modes));
    }
}

/// # Safety
/// `modes` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn oma_modeset_len(modes: *const OmaModeSet, out: *mut usize) -> OmaStatus {
    guard(|| {
        *out_ptr(out, "out")? = deref(modes, "modes")?.inner.len();
        Ok(())
    })
}

unsafe fn mode<'a>(
    modes: *const OmaModeSet,
    index: usize,
) -> Result<&'a oma_core::oma_freq::IdentifiedMode, Failure> {
    let set = &deref(modes, "modes")?.inner;
    set.modes.get(index).ok_or_else(|| {
        fail(
            OmaStatus::InvalidArgument,
            format!("mode {index} out of range (set has {})", set.len()),
        )
    })
}

/// Frequency in Hz of mode `index` (ascending order).
///
/// # Safety
/// `modes` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn oma_modeset_frequency(modes: *const OmaModeSet, index: usize, out: *mut f64) -> OmaStatus {
    guard(|| {
        *out_ptr(out, "out")? = mode(modes, index)?.frequency;
        Ok(())
    })
}

/// Damping ratio of mode `index`, NaN when the method does not estimate it.
///
/// # Safety
/// `modes` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn oma_modeset_damping(modes: *const OmaModeSet, index: usize, out: *mut f64) -> OmaStatus {
    guard(|| {
        *out_ptr(out, "out")? = mode(modes, index)?.damping.unwrap_or(f64::NAN);
        Ok(())
    })
}

/// Copy the real shape of mode `index` (one entry per channel).
///
/// # Safety
/// `modes` must be a live handle; `buffer` must hold `capacity` doubles.
#[no_mangle]
pub unsafe extern "C" fn oma_modeset_shape(
    modes: *const OmaModeSet,
    index: usize,
    buffer: *mut f64,
    capacity: usize,
) -> OmaStatus {
    guard(|| {
        let shape = &mode(modes, index)?.shape;
        if capacity < shape.len() {
            return Err(fail(
                OmaStatus::InvalidArgument,
                format!("buffer holds {capacity} values, shape has {}", shape.len()),
            ));
        }
        if !shape.is_empty() {
            if buffer.is_null() {
                return Err(fail(OmaStatus::NullPointer, "buffer is null"));
            }
            ptr::copy_nonoverlapping(shape.as_ptr(), buffer, shape.len());
        }
        Ok(())
    })
}

/// Run a campaign from a JSON configuration (null selects the defaults).
/// `jobs == 0` uses every core.
///
/// # Safety
/// `config_json` must be null or a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn oma_bench_run(config_json: *const c_char, jobs: usize, out: *mut *mut OmaReport) -> OmaStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        let config = if config_json.is_null() {
            CampaignConfig::default()
        } else {
            CampaignConfig::from_json(c_str(config_json, "config_json")?)?
        };
        let inner = run_campaign(&config, (jobs > 0).then_some(jobs))?;
        *out = into_handle(OmaReport { inner });
        Ok(())
    })
}

/// Write report.json and the CSV tables into `directory`.
///
/// # Safety
/// `report` must be a live handle; `directory` a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn oma_report_write(report: *const OmaReport, directory: *const c_char) -> OmaStatus {
    guard(|| {
        let report = &deref(report, "report")?.inner;
        write_outputs(report, c_str(directory, "directory")?)?;
        Ok(())
    })
}

/// Number of single runs in the report.
///
/// # Safety
/// `report` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn oma_report_n_runs(report: *const OmaReport, out: *mut usize) -> OmaStatus {
    guard(|| {
        *out_ptr(out, "out")? = deref(report, "report")?.inner.runs.len();
        Ok(())
    })
}

/// Report as a JSON string; release it with [`oma_string_free`].
///
/// # Safety
/// `report` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn oma_report_to_json(report: *const OmaReport, out: *mut *mut c_char) -> OmaStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        let json = deref(report, "report")?.inner.to_json()?;
        let c = CString::new(json).map_err(|_| fail(OmaStatus::Format, "JSON contains NUL"))?;
        *out = c.into_raw();
        Ok(())
    })
}

/// # Safety
/// `report` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn oma_report_free(report: *mut OmaReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}

/// # Safety
/// `s` must come from this library or be null.
#[no_mangle]
pub unsafe extern "C" fn oma_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn null_out_pointer_is_reported() {
        let status = unsafe { oma_nl_to_snr_db(0.5, ptr::null_mut()) };
        assert_eq!(status, OmaStatus::NullPointer);
        let msg = unsafe { CStr::from_ptr(oma_last_error()) }.to_str().unwrap();
        assert!(msg.contains("out"));
    }

    #[test]
    fn panics_are_caught() {
        let status = guard(|| panic!("boom"));
        assert_eq!(status, OmaStatus::Panic);
        let msg = unsafe { CStr::from_ptr(oma_last_error()) }.to_str().unwrap();
        assert!(msg.contains("boom"));
        oma_clear_error();
        assert!(oma_last_error().is_null());
    }

    #[test]
    fn error_mapping() {
        let f: Failure = OmaError::Numerical("x".into()).into();
        assert_eq!(f.status, OmaStatus::Numerical);
        let f: Failure = OmaError::Domain("x".into()).into();
        assert_eq!(f.status, OmaStatus::Domain);
        assert!(support_from(4).is_err());
        assert!(method_from(-1).is_err());
    }
}
