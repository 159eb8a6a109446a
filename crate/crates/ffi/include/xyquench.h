#ifndef XYQUENCH_H
#define XYQUENCH_H

/* Generated with cbindgen:0.27.0 */

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum XyqDetection {
  XYQ_DETECTION_UNDETECTED = 0,
  XYQ_DETECTION_BY_MU1 = 1,
  XYQ_DETECTION_BY_MU2 = 2,
} XyqDetection;

typedef enum XyqEnsembleKind {
  XYQ_ENSEMBLE_KIND_GROUND = 0,
  XYQ_ENSEMBLE_KIND_THERMAL = 1,
  XYQ_ENSEMBLE_KIND_GGE = 2,
} XyqEnsembleKind;

typedef enum XyqStatus {
  XYQ_STATUS_OK = 0,
  XYQ_STATUS_NULL_POINTER = 1,
  XYQ_STATUS_INVALID_ARGUMENT = 2,
  XYQ_STATUS_DEGENERATE = 3,
  XYQ_STATUS_QUADRATURE_FAILED = 4,
  XYQ_STATUS_UNPHYSICAL = 5,
  XYQ_STATUS_NO_CONVERGENCE = 6,
  XYQ_STATUS_IO = 7,
  XYQ_STATUS_PANIC = 8,
} XyqStatus;

/**
 * Completed scan.
 */
typedef struct XyqScan XyqScan;

/**
 * `temperature` is read for `Thermal`, `gamma0` and `h0` for `Gge`.
 */
typedef struct XyqEnsemble {
  enum XyqEnsembleKind kind;
  double temperature;
  double gamma0;
  double h0;
} XyqEnsemble;

typedef struct XyqCorrelators {
  double g_c;
  double g_s;
  double g_0;
  double sxsx;
  double sysy;
  double szsz;
  double sz;
} XyqCorrelators;

typedef struct XyqWitness {
  double mu1;
  double mu2;
  double negativity;
  enum XyqDetection detection;
} XyqWitness;

/**
 * `t_th` is `0` for a trivial quench and `+inf` when the GGE carries no
 * mode energy.
 */
typedef struct XyqThermalization {
  double t_th;
  double lhs;
  double ground;
  double residual;
} XyqThermalization;

/**
 * A negative `gamma0` means "same as `gamma`"; `threads == 0` uses all
 * available cores.
 */
typedef struct XyqScanConfig {
  double gamma;
  double gamma0;
  double h0_lo;
  double h0_hi;
  size_t h0_n;
  double h_lo;
  double h_hi;
  size_t h_n;
  double detection_threshold;
  size_t threads;
} XyqScanConfig;

/**
 * One scan cell; the witnesses and `t_th` are meaningful only when
 * `status == Ok`.
 */
typedef struct XyqCell {
  double h0;
  double h;
  double t_th;
  struct XyqWitness prethermal;
  struct XyqWitness thermal;
  enum XyqStatus status;
} XyqCell;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Nearest-neighbor correlators of the state `ensemble` of the chain
 * `(gamma, h)`.
 *
 * # Safety
 * `ensemble` and `out` must be null or valid for reads/writes.
 */
enum XyqStatus xyq_correlators(double gamma,
                               double h,
                               const struct XyqEnsemble *ensemble,
                               struct XyqCorrelators *out);

/**
 * Witness report of a correlator set. Only `sxsx`, `sysy`, `szsz` and `sz`
 * are read.
 *
 * # Safety
 * `correlators` and `out` must be null or valid for reads/writes.
 */
enum XyqStatus xyq_analyze(const struct XyqCorrelators *correlators,
                           double threshold,
                           struct XyqWitness *out);

/**
 * Thermalization temperature of the quench `(gamma0, h0) -> (gamma, h)`.
 *
 * # Safety
 * `out` must be null or valid for writes.
 */
enum XyqStatus xyq_thermalization_temperature(double gamma0,
                                              double h0,
                                              double gamma,
                                              double h,
                                              struct XyqThermalization *out);

/**
 * Runs a scan and stores a new handle in `*out`. Individual cell failures do
 * not fail the call.
 *
 * # Safety
 * `config` must be null or valid for reads, `out` null or valid for writes.
 */
enum XyqStatus xyq_scan_run(const struct XyqScanConfig *config, struct XyqScan **out);

/**
 * # Safety
 * `scan` must be null or a live handle; `rows`, `cols` null or valid for
 * writes.
 */
enum XyqStatus xyq_scan_dims(const struct XyqScan *scan, size_t *rows, size_t *cols);

/**
 * Cell `(i, j)`: `i` indexes `h0`, `j` indexes `h`.
 *
 * # Safety
 * `scan` must be null or a live handle; `out` null or valid for writes.
 */
enum XyqStatus xyq_scan_cell(const struct XyqScan *scan, size_t i, size_t j, struct XyqCell *out);

/**
 * Writes the scan CSV to `path` (UTF-8).
 *
 * # Safety
 * `scan` must be null or a live handle; `path` null or a NUL-terminated
 * string.
 */
enum XyqStatus xyq_scan_write_csv(const struct XyqScan *scan, const char *path);

/**
 * Releases a handle from [`xyq_scan_run`]. Null is ignored.
 *
 * # Safety
 * `scan` must be null or a live handle, not used afterwards.
 */
void xyq_scan_free(struct XyqScan *scan);

/**
 * Message of the last failed call on this thread; empty if none. Valid
 * until the next failing call on the same thread.
 */
const char *xyq_last_error_message(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *xyq_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* XYQUENCH_H */
