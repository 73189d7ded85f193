#ifndef BANDEDGE_H
#define BANDEDGE_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum {
  BANDEDGE_STATUS_OK = 0,
  BANDEDGE_STATUS_INVALID_INPUT = 1,
  BANDEDGE_STATUS_NULL_POINTER = 2,
  BANDEDGE_STATUS_BUFFER_TOO_SMALL = 3,
  BANDEDGE_STATUS_SOLVER_FAILURE = 4,
  BANDEDGE_STATUS_PANIC = 5,
} BandedgeStatus;

typedef enum {
  BANDEDGE_EXTREMUM_MINIMUM = 0,
  BANDEDGE_EXTREMUM_MAXIMUM = 1,
} BandedgeExtremum;

typedef enum {
  BANDEDGE_FAMILY_DILATATIONAL = 0,
  BANDEDGE_FAMILY_FLEXURAL = 1,
} BandedgeFamily;

/**
 * Traced plasmon branches.
 */
typedef struct BandedgeDispersion BandedgeDispersion;

/**
 * Traced slab branches of one family.
 */
typedef struct BandedgePhonon BandedgePhonon;

/**
 * Drude wire in a dielectric. `tau <= 0` or NaN means a lossless metal.
 */
typedef struct {
  double eps_inf;
  double omega_p_ev;
  double tau;
  double eps_o;
  /**
   * Radius in c/ω_p.
   */
  double radius;
} BandedgeWire;

typedef struct {
  double k_min;
  double k_max;
  size_t points;
} BandedgeSweep;

typedef struct {
  double k;
  double re_omega;
  double im_omega;
  uint8_t bound;
} BandedgeModeSample;

typedef struct {
  uint32_t branch;
  double k_c;
  double omega_c;
  double curvature;
  BandedgeExtremum kind;
} BandedgeEdge;

/**
 * Quadratic band-edge reservoir in β units.
 */
typedef struct {
  double delta;
  double curvature;
  double coupling;
  double gamma;
  BandedgeExtremum kind;
} BandedgeReservoir;

typedef struct {
  double gamma_l;
  double gamma_r;
} BandedgeRates;

/**
 * Two dots on a wire; `gamma_0` is the amplitude decay constant.
 */
typedef struct {
  double gamma_0;
  double r;
  double v;
  double theta;
} BandedgeTwoDot;

typedef struct {
  double w;
  double c_l;
  double c_t;
} BandedgeSlab;

typedef struct {
  double q_parallel;
  double omega;
} BandedgePhononSample;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static nul-terminated string.
 */
const char *bandedge_version(void);

/**
 * Message of the last failed call on this thread, or null after a success.
 * The pointer stays valid until the next call into this library on the
 * same thread.
 */
const char *bandedge_last_error(void);

/**
 * Traces the plasmon branches of the listed angular orders.
 *
 * # Safety
 * `wire`, `sweep` and `out` must be valid pointers; `modes` must hold
 * `mode_count` entries. On success `*out` receives a handle to release with
 * [`bandedge_dispersion_free`].
 */
BandedgeStatus bandedge_dispersion_trace(const BandedgeWire *wire,
                                         const uint32_t *modes,
                                         size_t mode_count,
                                         const BandedgeSweep *sweep,
                                         BandedgeDispersion **out);

/**
 * # Safety
 * `handle` must be null or a live handle from [`bandedge_dispersion_trace`].
 */
size_t bandedge_dispersion_branch_count(const BandedgeDispersion *handle);

/**
 * Copies the samples of one branch, ordered by increasing k.
 *
 * # Safety
 * `handle` must be live, `written` valid, and `buf` null or writable for
 * `capacity` entries.
 */
BandedgeStatus bandedge_dispersion_samples(const BandedgeDispersion *handle,
                                           size_t branch,
                                           BandedgeModeSample *buf,
                                           size_t capacity,
                                           size_t *written);

/**
 * Band edges of one branch.
 *
 * # Safety
 * As for [`bandedge_dispersion_samples`].
 */
BandedgeStatus bandedge_dispersion_band_edges(const BandedgeDispersion *handle,
                                              size_t branch,
                                              BandedgeEdge *buf,
                                              size_t capacity,
                                              size_t *written);

/**
 * # Safety
 * `handle` must be null or a live handle; it is invalid afterwards.
 */
void bandedge_dispersion_free(BandedgeDispersion *handle);

/**
 * Exciton amplitude `b_e(t)` on `t = 0, dt, ..., (count - 1) dt`, with the
 * sup-norm gap between the two independent solvers in `cross_check`.
 *
 * # Safety
 * `reservoir` must be valid; each output buffer must hold `count` entries;
 * `cross_check` may be null.
 */
BandedgeStatus bandedge_decay(const BandedgeReservoir *reservoir,
                              double dt,
                              size_t count,
                              double *re_b,
                              double *im_b,
                              double *population,
                              double *cross_check);

/**
 * Fano factor `S/2eI` at each frequency with the dissipative kernel.
 *
 * # Safety
 * `rates` and `reservoir` must be valid; `omega` and `fano` must hold
 * `count` entries.
 */
BandedgeStatus bandedge_noise_spectrum(const BandedgeRates *rates,
                                       const BandedgeReservoir *reservoir,
                                       const double *omega,
                                       size_t count,
                                       double *fano);

/**
 * Fano factor with a second dot coupled through a delayed plasmon.
 *
 * # Safety
 * As for [`bandedge_noise_spectrum`].
 */
BandedgeStatus bandedge_retarded_noise_spectrum(const BandedgeTwoDot *dots,
                                                const BandedgeRates *rates,
                                                const double *omega,
                                                size_t count,
                                                double *fano);

/**
 * Traces the lowest `branch_count` branches of one family on
 * `points` in-plane wavevectors spanning `[0, q_max]`.
 *
 * # Safety
 * `slab` and `out` must be valid. On success `*out` receives a handle to
 * release with [`bandedge_phonon_free`].
 */
BandedgeStatus bandedge_phonon_trace(const BandedgeSlab *slab,
                                     BandedgeFamily family,
                                     size_t branch_count,
                                     double q_max,
                                     size_t points,
                                     BandedgePhonon **out);

/**
 * # Safety
 * `handle` must be null or a live handle from [`bandedge_phonon_trace`].
 */
size_t bandedge_phonon_branch_count(const BandedgePhonon *handle);

/**
 * # Safety
 * As for [`bandedge_dispersion_samples`].
 */
BandedgeStatus bandedge_phonon_samples(const BandedgePhonon *handle,
                                       size_t branch,
                                       BandedgePhononSample *buf,
                                       size_t capacity,
                                       size_t *written);

/**
 * # Safety
 * As for [`bandedge_dispersion_samples`].
 */
BandedgeStatus bandedge_phonon_band_edges(const BandedgePhonon *handle,
                                          size_t branch,
                                          BandedgeEdge *buf,
                                          size_t capacity,
                                          size_t *written);

/**
 * # Safety
 * `handle` must be null or a live handle; it is invalid afterwards.
 */
void bandedge_phonon_free(BandedgePhonon *handle);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* BANDEDGE_H */
