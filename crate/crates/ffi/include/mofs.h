#ifndef MOFS_H
#define MOFS_H

/* Generated by cbindgen from crates/ffi/src. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum MofsStatus {
  MOFS_STATUS_OK = 0,
  MOFS_STATUS_NULL_POINTER = 1,
  MOFS_STATUS_INVALID_ARGUMENT = 2,
  MOFS_STATUS_INVALID_CONFIG = 3,
  MOFS_STATUS_MISSING = 4,
  MOFS_STATUS_SCHEMA = 5,
  MOFS_STATUS_IO = 6,
  MOFS_STATUS_COMPUTATION = 7,
  MOFS_STATUS_BUFFER_TOO_SMALL = 8,
  MOFS_STATUS_PANIC = 9,
} MofsStatus;

typedef enum MofsEvaluation {
  MOFS_EVALUATION_SILHOUETTE = 0,
  MOFS_EVALUATION_ACCURACY = 1,
  MOFS_EVALUATION_PCA_LOSS = 2,
} MofsEvaluation;

typedef enum MofsSizeDirection {
  MOFS_SIZE_DIRECTION_MINIMISE = 0,
  MOFS_SIZE_DIRECTION_MAXIMISE = 1,
} MofsSizeDirection;

typedef enum MofsInitKind {
  MOFS_INIT_KIND_RANDOM = 0,
  MOFS_INIT_KIND_SEGMENTED = 1,
  MOFS_INIT_KIND_FIXED = 2,
} MofsInitKind;

/**
 * A dataset with its train/test split.
 */
typedef struct MofsDataset MofsDataset;

/**
 * A finished run.
 */
typedef struct MofsRun MofsRun;

/**
 * Settings of one optimisation run. Fill with [`mofs_run_options_default`].
 */
typedef struct MofsRunOptions {
  enum MofsEvaluation evaluation;
  enum MofsSizeDirection size_direction;
  enum MofsInitKind init;
  /**
   * Bit probability for random init.
   */
  double init_p;
  /**
   * Cardinality for fixed init.
   */
  size_t init_k;
  size_t population_size;
  size_t generations;
  uint64_t seed;
  /**
   * Survive against the objectives' worst values instead of the dynamic
   * reference point.
   */
  bool fixed_reference;
} MofsRunOptions;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null. The pointer stays
 * valid until the next call into this library on the same thread.
 */
const char *mofs_last_error_message(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *mofs_version(void);

/**
 * Generates the default synthetic dataset with `n_samples` rows and splits
 * it 70/30, both from `seed`.
 *
 * # Safety
 * `out` must be a valid pointer to writable storage for a handle.
 */
enum MofsStatus mofs_dataset_generate(uint64_t seed, size_t n_samples, struct MofsDataset **out);

/**
 * Loads a dataset directory written by `mofs generate` or
 * [`mofs_dataset_save`].
 *
 * # Safety
 * `dir` must be a NUL-terminated string; `out` must be writable.
 */
enum MofsStatus mofs_dataset_load(const char *dir, struct MofsDataset **out);

/**
 * # Safety
 * `ds` must be a live handle; `dir` a NUL-terminated string.
 */
enum MofsStatus mofs_dataset_save(const struct MofsDataset *ds, const char *dir);

/**
 * # Safety
 * `ds` must be a live handle; the outputs must be writable.
 */
enum MofsStatus mofs_dataset_shape(const struct MofsDataset *ds,
                                   size_t *n_samples,
                                   size_t *n_features);

/**
 * Writes the 64-character content hash plus NUL into `buf` (at least 65
 * bytes).
 *
 * # Safety
 * `ds` must be a live handle; `buf` must hold `len` writable bytes.
 */
enum MofsStatus mofs_dataset_fingerprint(const struct MofsDataset *ds, char *buf, size_t len);

/**
 * # Safety
 * `ds` must be null or a handle not yet freed.
 */
void mofs_dataset_free(struct MofsDataset *ds);

/**
 * Defaults: accuracy, minimise size, random init with p = 0.5, population
 * 50, 50 generations, seed 0, dynamic reference point.
 *
 * # Safety
 * `out` must be writable.
 */
enum MofsStatus mofs_run_options_default(struct MofsRunOptions *out);

/**
 * Runs one formulation on the training rows of `ds`.
 *
 * # Safety
 * `ds` must be a live handle, `options` readable and `out` writable.
 */
enum MofsStatus mofs_run(const struct MofsDataset *ds,
                         const struct MofsRunOptions *options,
                         struct MofsRun **out);

/**
 * Fresh (uncached) objective evaluations the run performed.
 *
 * # Safety
 * `run` must be a live handle and `out` writable.
 */
enum MofsStatus mofs_run_evaluations(const struct MofsRun *run, size_t *out);

/**
 * Number of distinct non-dominated solutions in the final population.
 *
 * # Safety
 * `run` must be a live handle and `out` writable.
 */
enum MofsStatus mofs_run_front_len(const struct MofsRun *run, size_t *out);

/**
 * Objectives and subset size of front member `index` (ordered by f2).
 *
 * # Safety
 * `run` must be a live handle; outputs must be writable.
 */
enum MofsStatus mofs_run_front_get(const struct MofsRun *run,
                                   size_t index,
                                   double *f1,
                                   double *f2,
                                   size_t *subset_size);

/**
 * Copies the hypervolume trace into `buf`. `len` receives the trace length
 * even when `cap` is too small.
 *
 * # Safety
 * `run` must be a live handle, `buf` must hold `cap` doubles (or be null
 * with `cap == 0`), `len` must be writable.
 */
enum MofsStatus mofs_run_hv_trace(const struct MofsRun *run, double *buf, size_t cap, size_t *len);

/**
 * Writes `history.csv`, `hv_trace.csv` and `manifest.json` into `dir`.
 *
 * # Safety
 * `run` must be a live handle; `dir` a NUL-terminated string.
 */
enum MofsStatus mofs_run_save(const struct MofsRun *run, const char *dir);

/**
 * # Safety
 * `run` must be null or a handle not yet freed.
 */
void mofs_run_free(struct MofsRun *run);

/**
 * Exact hypervolume of `n` points `(f1[i], f2[i])` against `(ref1, ref2)`.
 *
 * # Safety
 * `f1` and `f2` must hold `n` doubles each; `out` must be writable.
 */
enum MofsStatus mofs_hypervolume_2d(const double *f1,
                                    const double *f2,
                                    size_t n,
                                    double ref1,
                                    double ref2,
                                    double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* MOFS_H */
