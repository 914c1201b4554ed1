#ifndef LOCALPHOTON_H
#define LOCALPHOTON_H

#include <stddef.h>
#include <stdint.h>

// Result of every call.
typedef enum LpStatus {
  LP_STATUS_OK = 0,
  // A required pointer argument was null.
  LP_STATUS_NULL_POINTER = 1,
  // Arguments outside the accepted range.
  LP_STATUS_INVALID_ARGUMENT = 2,
  // A computed quantity failed one of its checks.
  LP_STATUS_INVARIANT = 3,
  // A caller buffer has the wrong length.
  LP_STATUS_BUFFER_SIZE = 4,
  // An internal panic was caught at the boundary.
  LP_STATUS_PANIC = 5,
} LpStatus;

// State whose energy density is requested.
typedef enum LpRepresentation {
  LP_REPRESENTATION_LOCALIZED = 0,
  LP_REPRESENTATION_SINGLE_PHOTON = 1,
  LP_REPRESENTATION_TRUNCATED = 2,
} LpRepresentation;

// A localized pulse together with a filter and its delta train.
typedef struct LpFilteredPulse LpFilteredPulse;

// A localized pulse on its own grid.
typedef struct LpPulse LpPulse;

// `1 - F` of the localized state, from the truncated Fock model.
typedef struct LpFidelity {
  double eta;
  double one_minus_f;
  double one_minus_f_first_order;
  double truncation_loss;
} LpFidelity;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failed call on this thread, or null. Valid until the
// next call into this library from the same thread.
const char *lp_last_error(void);

// Library version as a static NUL-terminated string.
const char *lp_version(void);

// Builds the localized pulse for a seed given as `omega0 sigma` and `tau / sigma`
// on a grid of `2^log2_n` samples.
//
// # Safety
// `out` must be valid for one pointer write.
enum LpStatus lp_pulse_new(double omega0_sigma,
                           double tau_ratio,
                           uint32_t log2_n,
                           struct LpPulse **out);

// # Safety
// `pulse` must come from `lp_pulse_new` and not be used afterwards. Null is ignored.
void lp_pulse_free(struct LpPulse *pulse);

// Number of grid samples.
//
// # Safety
// `pulse` must be a live handle and `len` valid for one write.
enum LpStatus lp_pulse_len(const struct LpPulse *pulse, size_t *len);

// Negative-frequency fraction of the modified seed.
//
// # Safety
// `pulse` must be a live handle and `eta` valid for one write.
enum LpStatus lp_pulse_eta(const struct LpPulse *pulse, double *eta);

// Energy density over the grid; `rep` is an `LpRepresentation` value.
//
// # Safety
// `pulse` must be a live handle; `values` and, if non-null, `times` must hold `len` doubles.
enum LpStatus lp_pulse_energy_density(const struct LpPulse *pulse,
                                      uint32_t rep,
                                      double *times,
                                      double *values,
                                      size_t len);

// Seed behind a Fabry-Perot cavity of mirror reflectance `reflectance` whose
// round-trip phase at the carrier is `phase`.
//
// # Safety
// `out` must be valid for one pointer write.
enum LpStatus lp_filtered_new_fabry_perot(double omega0_sigma,
                                          double tau_ratio,
                                          double reflectance,
                                          double phase,
                                          uint32_t log2_n,
                                          struct LpFilteredPulse **out);

// Seed behind a quarter-wave stack of `layers` alternating layers with indices `n1`, `n2`.
//
// # Safety
// `out` must be valid for one pointer write.
enum LpStatus lp_filtered_new_bandgap(double omega0_sigma,
                                      double tau_ratio,
                                      double n1,
                                      double n2,
                                      uint32_t layers,
                                      uint32_t log2_n,
                                      struct LpFilteredPulse **out);

// # Safety
// `filtered` must come from an `lp_filtered_new_*` call and not be used afterwards. Null is ignored.
void lp_filtered_free(struct LpFilteredPulse *filtered);

// Number of grid samples.
//
// # Safety
// `filtered` must be a live handle and `len` valid for one write.
enum LpStatus lp_filtered_len(const struct LpFilteredPulse *filtered, size_t *len);

// Number of terms in the filter's delta train.
//
// # Safety
// `filtered` must be a live handle and `terms` valid for one write.
enum LpStatus lp_filtered_train_terms(const struct LpFilteredPulse *filtered, size_t *terms);

// Input energy density; `rep` is an `LpRepresentation` value.
//
// # Safety
// `filtered` must be a live handle; `values` and, if non-null, `times` must hold `len` doubles.
enum LpStatus lp_filtered_input(const struct LpFilteredPulse *filtered,
                                uint32_t rep,
                                double *times,
                                double *values,
                                size_t len);

// Output energy density behind the filter; `rep` is an `LpRepresentation` value.
//
// # Safety
// `filtered` must be a live handle; `values` and, if non-null, `times` must hold `len` doubles.
enum LpStatus lp_filtered_output(const struct LpFilteredPulse *filtered,
                                 uint32_t rep,
                                 double *times,
                                 double *values,
                                 size_t len);

// `1 - F` for one seed, using `n_max` Fock levels per mode.
//
// # Safety
// `out` must be valid for one write.
enum LpStatus lp_fidelity(double omega0_sigma,
                          double tau_ratio,
                          uint32_t log2_n,
                          size_t n_max,
                          struct LpFidelity *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* LOCALPHOTON_H */
