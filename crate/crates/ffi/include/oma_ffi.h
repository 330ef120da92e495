#ifndef OMA_FFI_H
#define OMA_FFI_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum {
  OMA_STATUS_OK = 0,
  OMA_STATUS_NULL_POINTER = 1,
  OMA_STATUS_INVALID_ARGUMENT = 2,
  OMA_STATUS_INVALID_INPUT = 3,
  OMA_STATUS_DOMAIN = 4,
  OMA_STATUS_NUMERICAL = 5,
  OMA_STATUS_IO = 6,
  OMA_STATUS_FORMAT = 7,
  OMA_STATUS_PANIC = 8,
} OmaStatus;

typedef enum {
  OMA_SUPPORT_CF = 0,
  OMA_SUPPORT_SS = 1,
  OMA_SUPPORT_CS = 2,
  OMA_SUPPORT_CC = 3,
} OmaSupport;

typedef enum {
  OMA_METHOD_PP = 0,
  OMA_METHOD_FDD = 1,
  OMA_METHOD_SSI = 2,
} OmaMethod;

/**
 * Modes returned by one identifier.
 */
typedef struct OmaModeSet OmaModeSet;

/**
 * Multi-channel acceleration record.
 */
typedef struct OmaRecord OmaRecord;

/**
 * Result of a benchmark campaign.
 */
typedef struct OmaReport OmaReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null if none. The
 * pointer stays valid until the next failing call on the same thread.
 */
const char *oma_last_error(void);

void oma_clear_error(void);

/**
 * Build a record from `n_channels * n_samples` values stored channel after
 * channel.
 *
 * # Safety
 * `data` must point to `n_channels * n_samples` doubles; `out` must be writable.
 */
OmaStatus oma_record_from_data(double sample_rate,
                               size_t n_channels,
                               size_t n_samples,
                               const double *data,
                               OmaRecord **out);

/**
 * Simulate the noise-free response of the reference beam with the given
 * support. `duration <= 0` or `dt <= 0` selects the defaults (5 s, 1e-4 s).
 *
 * # Safety
 * `out` must be writable.
 */
OmaStatus oma_simulate(int32_t support, uint64_t seed, double duration, double dt, OmaRecord **out);

/**
 * Reference natural frequencies (Hz) of the beam model. Writes at most
 * `capacity` values and stores the count written in `written`.
 *
 * # Safety
 * `buffer` must hold `capacity` doubles; `written` must be writable.
 */
OmaStatus oma_reference_frequencies(int32_t support,
                                    double *buffer,
                                    size_t capacity,
                                    size_t *written);

/**
 * # Safety
 * `record` must be a live handle or null.
 */
void oma_record_free(OmaRecord *record);

/**
 * # Safety
 * `record` must be a live handle; `out` must be writable.
 */
OmaStatus oma_record_n_channels(const OmaRecord *record, size_t *out);

/**
 * # Safety
 * `record` must be a live handle; `out` must be writable.
 */
OmaStatus oma_record_n_samples(const OmaRecord *record, size_t *out);

/**
 * # Safety
 * `record` must be a live handle; `out` must be writable.
 */
OmaStatus oma_record_sample_rate(const OmaRecord *record, double *out);

/**
 * Copy channel `channel` into `buffer`, which must hold `capacity >= n_samples` doubles.
 *
 * # Safety
 * `record` must be a live handle; `buffer` must hold `capacity` doubles.
 */
OmaStatus oma_record_copy_channel(const OmaRecord *record,
                                  size_t channel,
                                  double *buffer,
                                  size_t capacity);

/**
 * Add Gaussian noise of level `noise_level` to every channel. When
 * `snr_db` is not null it receives the nominal SNR (infinity for level 0).
 *
 * # Safety
 * `record` must be a live handle; `out` must be writable; `snr_db` may be null.
 */
OmaStatus oma_corrupt(const OmaRecord *record,
                      double noise_level,
                      uint64_t seed,
                      OmaRecord **out,
                      double *snr_db);

/**
 * `20 log10(1 / noise_level)`.
 *
 * # Safety
 * `out` must be writable.
 */
OmaStatus oma_nl_to_snr_db(double noise_level, double *out);

/**
 * Modal assurance criterion of two real vectors of length `len`.
 *
 * # Safety
 * `a` and `b` must hold `len` doubles; `out` must be writable.
 */
OmaStatus oma_mac(const double *a, const double *b, size_t len, double *out);

/**
 * Identify modes with the default options of `method` (an [`OmaMethod`] value).
 *
 * # Safety
 * `record` must be a live handle; `out` must be writable.
 */
OmaStatus oma_identify(const OmaRecord *record, int32_t method, OmaModeSet **out);

/**
 * # Safety
 * `modes` must be a live handle or null.
 */
void oma_modeset_free(OmaModeSet *modes);

/**
 * # Safety
 * `modes` must be a live handle; `out` must be writable.
 */
OmaStatus oma_modeset_len(const OmaModeSet *modes, size_t *out);

/**
 * Frequency in Hz of mode `index` (ascending order).
 *
 * # Safety
 * `modes` must be a live handle; `out` must be writable.
 */
OmaStatus oma_modeset_frequency(const OmaModeSet *modes, size_t index, double *out);

/**
 * Damping ratio of mode `index`, NaN when the method does not estimate it.
 *
 * # Safety
 * `modes` must be a live handle; `out` must be writable.
 */
OmaStatus oma_modeset_damping(const OmaModeSet *modes, size_t index, double *out);

/**
 * Copy the real shape of mode `index` (one entry per channel).
 *
 * # Safety
 * `modes` must be a live handle; `buffer` must hold `capacity` doubles.
 */
OmaStatus oma_modeset_shape(const OmaModeSet *modes, size_t index, double *buffer, size_t capacity);

/**
 * Run a campaign from a JSON configuration (null selects the defaults).
 * `jobs == 0` uses every core.
 *
 * # Safety
 * `config_json` must be null or a NUL-terminated string; `out` must be writable.
 */
OmaStatus oma_bench_run(const char *config_json, size_t jobs, OmaReport **out);

/**
 * Write report.json and the CSV tables into `directory`.
 *
 * # Safety
 * `report` must be a live handle; `directory` a NUL-terminated string.
 */
OmaStatus oma_report_write(const OmaReport *report, const char *directory);

/**
 * Number of single runs in the report.
 *
 * # Safety
 * `report` must be a live handle; `out` must be writable.
 */
OmaStatus oma_report_n_runs(const OmaReport *report, size_t *out);

/**
 * Report as a JSON string; release it with [`oma_string_free`].
 *
 * # Safety
 * `report` must be a live handle; `out` must be writable.
 */
OmaStatus oma_report_to_json(const OmaReport *report, char **out);

/**
 * # Safety
 * `report` must be a live handle or null.
 */
void oma_report_free(OmaReport *report);

/**
 * # Safety
 * `s` must come from this library or be null.
 */
void oma_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* OMA_FFI_H */
