/* Generated by cbindgen; do not edit. */

#ifndef EPIPOLAR_H
#define EPIPOLAR_H

#include <stddef.h>
#include <stdint.h>

/**
 * Result code of every call. Values are stable.
 */
typedef enum EpiStatus {
  EPI_STATUS_OK = 0,
  EPI_STATUS_NULL_POINTER = 1,
  EPI_STATUS_INVALID_ARGUMENT = 2,
  EPI_STATUS_PANIC = 3,
  EPI_STATUS_ZERO_TRANSLATION = 10,
  EPI_STATUS_SINGULAR_INTRINSICS = 11,
  EPI_STATUS_INVALID_ROTATION = 12,
  EPI_STATUS_DEGENERATE_LINE = 13,
  EPI_STATUS_ZERO_MATRIX = 14,
  EPI_STATUS_NOT_RANK_TWO = 15,
  EPI_STATUS_DEPENDENT_COLUMNS = 16,
  EPI_STATUS_TOO_FEW_POINTS = 17,
  EPI_STATUS_DEGENERATE_CONFIGURATION = 18,
  EPI_STATUS_INSUFFICIENT_WEIGHT_MASS = 19,
  EPI_STATUS_LENGTH_MISMATCH = 20,
  EPI_STATUS_INVALID_WEIGHT = 21,
  EPI_STATUS_NO_VALID_SAMPLE = 22,
  EPI_STATUS_DIVERGED_TO_DEGENERATE = 23,
  EPI_STATUS_INSUFFICIENT_VISIBLE_POINTS = 24,
  EPI_STATUS_MISSING_FLAGS = 25,
  EPI_STATUS_NO_INLIERS = 26,
  EPI_STATUS_EMPTY_SET = 27,
  EPI_STATUS_ALL_ANGLE_OUTLIERS = 28,
  EPI_STATUS_NON_CANONICAL_INPUT = 29,
  EPI_STATUS_INVALID_CONFIG = 30,
} EpiStatus;

typedef enum EpiMethod {
  EPI_METHOD_EIGHT_POINT = 0,
  EPI_METHOD_WEIGHTED_EIGHT_POINT = 1,
  EPI_METHOD_RANSAC = 2,
  EPI_METHOD_IRLS = 3,
} EpiMethod;

/**
 * Opaque correspondence set.
 */
typedef struct EpiCorrespondenceSet EpiCorrespondenceSet;

/**
 * Opaque estimation result.
 */
typedef struct EpiEstimate EpiEstimate;

typedef struct EpiIntrinsics {
  double fx;
  double fy;
  double cx;
  double cy;
  double skew;
} EpiIntrinsics;

/**
 * Two-camera rig; `rotation` is row-major and maps camera-1 to camera-2
 * coordinates together with `translation`.
 */
typedef struct EpiRig {
  struct EpiIntrinsics k1;
  struct EpiIntrinsics k2;
  double rotation[9];
  double translation[3];
} EpiRig;

typedef struct EpiSceneParams {
  uint64_t seed;
  size_t num_points;
  double image_width;
  double image_height;
  double depth_near;
  double depth_far;
  double noise_sigma;
  double outlier_fraction;
  struct EpiRig rig;
} EpiSceneParams;

typedef struct EpiEstimatorParams {
  /**
   * Non-zero enables similarity preconditioning.
   */
  int32_t hartley_normalization;
  size_t ransac_iterations;
  double ransac_inlier_threshold;
  uint64_t ransac_seed;
  size_t irls_max_iters;
  double irls_tolerance;
  double min_weight_mass;
} EpiEstimatorParams;

typedef struct EpiMetricsParams {
  double inlier_threshold;
  size_t sample_size;
  double angle_point_tolerance;
  uint64_t seed;
} EpiMetricsParams;

typedef struct EpiMetrics {
  double m_ec;
  double m_ed;
  /**
   * 90 when every pair was an angle outlier.
   */
  double m_ea_degrees;
  size_t n_used;
  size_t n_angle_inliers;
  size_t n_angle_outliers;
} EpiMetrics;

typedef struct EpiLoss {
  double l1_term;
  double l2_term;
  double le_term;
  double total;
} EpiLoss;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null if none.
 * The pointer stays valid until the next failing call on the same thread.
 */
const char *epi_last_error_message(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *epi_version(void);

/**
 * Ground-truth canonical F of a rig.
 *
 * # Safety
 * `rig` must point to a valid `EpiRig`; `f_out` to 9 writable doubles.
 */
enum EpiStatus epi_fundamental_from_rig(const struct EpiRig *rig, double *f_out);

/**
 * Canonical form of a rank-2 matrix.
 *
 * # Safety
 * `f_in` must point to 9 readable doubles and `f_out` to 9 writable ones.
 */
enum EpiStatus epi_normalize_f(const double *f_in, double *f_out);

/**
 * Nearest rank-2 matrix in Frobenius norm, canonicalized.
 *
 * # Safety
 * As for [`epi_normalize_f`].
 */
enum EpiStatus epi_enforce_rank2(const double *f_in, double *f_out);

/**
 * Symmetric epipolar distance of one pair.
 *
 * # Safety
 * `f` points to 9 doubles, `m` and `m_prime` to 2 each, `out` to one.
 */
enum EpiStatus epi_symmetric_epipolar_distance(const double *f,
                                               const double *m,
                                               const double *m_prime,
                                               double *out_distance);

/**
 * Builds a set from `n` rows of `x y x' y'` in `xy` (4n doubles).
 * `flags` may be null; otherwise it holds `n` values: 1 inlier, 0 outlier,
 * anything else unknown.
 *
 * # Safety
 * `xy` must hold `4 * n` doubles, `flags` (if non-null) `n` bytes, and
 * `out_set` must be writable. Free the result with [`epi_set_free`].
 */
enum EpiStatus epi_set_new(const double *xy,
                           const int8_t *flags,
                           size_t n,
                           struct EpiCorrespondenceSet **out_set);

/**
 * Releases a set; null is ignored.
 *
 * # Safety
 * `set` must come from this library and not be used afterwards.
 */
void epi_set_free(struct EpiCorrespondenceSet *set);

/**
 * Number of pairs, or 0 for null.
 *
 * # Safety
 * `set` must be null or a live handle.
 */
size_t epi_set_len(const struct EpiCorrespondenceSet *set);

/**
 * Copies the pairs as `x y x' y'` rows into `xy` (capacity `4 * len`).
 *
 * # Safety
 * `set` must be a live handle and `xy` must hold `4 * len` doubles.
 */
enum EpiStatus epi_set_copy_points(const struct EpiCorrespondenceSet *set, double *xy, size_t len);

/**
 * Oracle weights (1 on flagged inliers, 0 elsewhere) into `weights`.
 *
 * # Safety
 * `set` must be a live handle and `weights` must hold `len` doubles.
 */
enum EpiStatus epi_oracle_weights(const struct EpiCorrespondenceSet *set,
                                  double *weights,
                                  size_t len);

/**
 * Fills `params` with the library defaults.
 *
 * # Safety
 * `params` must be writable.
 */
enum EpiStatus epi_scene_params_default(struct EpiSceneParams *params);

/**
 * Generates a synthetic scene; writes its set handle and canonical F_GT.
 *
 * # Safety
 * `params` must be valid, `out_set` writable and `f_gt_out` must hold 9
 * doubles. Free the set with [`epi_set_free`].
 */
enum EpiStatus epi_generate_scene(const struct EpiSceneParams *params,
                                  struct EpiCorrespondenceSet **out_set,
                                  double *f_gt_out);

/**
 * Fills `params` with the library defaults.
 *
 * # Safety
 * `params` must be writable.
 */
enum EpiStatus epi_estimator_params_default(struct EpiEstimatorParams *params);

/**
 * Estimates F. `weights` (length `n_weights`) is only read by the weighted
 * method; null there means oracle weights from the set's flags. IRLS starts
 * from the 8-point estimate. `params` may be null for defaults.
 *
 * # Safety
 * `set` must be a live handle, `weights` valid for `n_weights` doubles when
 * non-null, `params` null or valid, and `out_estimate` writable. Free the
 * result with [`epi_estimate_free`].
 */
enum EpiStatus epi_estimate(const struct EpiCorrespondenceSet *set,
                            enum EpiMethod method,
                            const double *weights,
                            size_t n_weights,
                            const struct EpiEstimatorParams *params,
                            struct EpiEstimate **out_estimate);

/**
 * Releases an estimate; null is ignored.
 *
 * # Safety
 * `estimate` must come from this library and not be used afterwards.
 */
void epi_estimate_free(struct EpiEstimate *estimate);

/**
 * Canonical F of an estimate.
 *
 * # Safety
 * `estimate` must be a live handle and `f_out` must hold 9 doubles.
 */
enum EpiStatus epi_estimate_f(const struct EpiEstimate *estimate, double *f_out);

/**
 * Score, inlier count and iterations of an estimate. Any output may be null.
 *
 * # Safety
 * `estimate` must be a live handle; non-null outputs must be writable.
 */
enum EpiStatus epi_estimate_summary(const struct EpiEstimate *estimate,
                                    double *score,
                                    size_t *inlier_count,
                                    size_t *iterations_used);

/**
 * Inlier mask as 0/1 bytes; `len` must equal the set size.
 *
 * # Safety
 * `estimate` must be a live handle and `mask` must hold `len` bytes.
 */
enum EpiStatus epi_estimate_inlier_mask(const struct EpiEstimate *estimate,
                                        uint8_t *mask,
                                        size_t len);

/**
 * Fills `params` with the library defaults.
 *
 * # Safety
 * `params` must be writable.
 */
enum EpiStatus epi_metrics_params_default(struct EpiMetricsParams *params);

/**
 * Filters the set with `f_gt` and scores `f_est` on the kept pairs.
 *
 * # Safety
 * `f_est`/`f_gt` must hold 9 doubles, `set` be a live handle, `params`
 * null (defaults) or valid, and `report` writable.
 */
enum EpiStatus epi_evaluate(const double *f_est,
                            const double *f_gt,
                            const struct EpiCorrespondenceSet *set,
                            const struct EpiMetricsParams *params,
                            struct EpiMetrics *report);

/**
 * Composite loss with default coefficients. Both matrices must be canonical.
 *
 * # Safety
 * `f_hat`/`f_gt` must hold 9 doubles, `set` be a live handle and `loss`
 * writable.
 */
enum EpiStatus epi_loss_total(const double *f_hat,
                              const double *f_gt,
                              const struct EpiCorrespondenceSet *set,
                              struct EpiLoss *loss);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* EPIPOLAR_H */
