/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#ifndef FRADECO_H
#define FRADECO_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/*
 Result codes. Values are stable.
 */
typedef enum FradecoStatus {
  FRADECO_STATUS_OK = 0,
  FRADECO_STATUS_INVALID_ARGUMENT = 1,
  FRADECO_STATUS_SHAPE_MISMATCH = 2,
  FRADECO_STATUS_PARSE = 3,
  FRADECO_STATUS_IO = 4,
  /*
   No determinantal template drops rank: not fradeco at that rank.
   */
  FRADECO_STATUS_NOT_RANK_DEFICIENT = 5,
  FRADECO_STATUS_SINGULAR_POINT = 6,
  FRADECO_STATUS_REPEATED_ROOTS = 7,
  FRADECO_STATUS_COMPLEX_ROOTS = 8,
  /*
   The numerical rank could not be decided.
   */
  FRADECO_STATUS_INDETERMINATE = 9,
  /*
   An iteration, sampler or search gave up.
   */
  FRADECO_STATUS_NO_CONVERGENCE = 10,
  FRADECO_STATUS_BUDGET_EXCEEDED = 11,
  FRADECO_STATUS_UNKNOWN_EQUATION = 12,
  /*
   Catalecticant rank outside the supported range, or an empty conic.
   */
  FRADECO_STATUS_RANK_OUT_OF_RANGE = 13,
  FRADECO_STATUS_NULL_POINTER = 14,
  FRADECO_STATUS_BUFFER_TOO_SMALL = 15,
  FRADECO_STATUS_PANIC = 16,
} FradecoStatus;

/*
 A frame with weights.
 */
typedef struct FradecoDecomposition FradecoDecomposition;

/*
 Clusters returned by the power method.
 */
typedef struct FradecoEigenList FradecoEigenList;

/*
 An `n x r` frame.
 */
typedef struct FradecoFrame FradecoFrame;

/*
 Symmetric tensor in t-coordinates.
 */
typedef struct FradecoTensor FradecoTensor;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Message of the last failure on this thread, empty after a success. The
 pointer stays valid until the next call into the library on this thread.
 */
const char *fradeco_last_error_message(void);

/*
 Static, NUL-terminated version string.
 */
const char *fradeco_version(void);

/*
 `coords` holds `len` coordinates in lexicographic exponent order.

 # Safety
 `coords` must point to `len` readable doubles; `out` must be writable.
 */
enum FradecoStatus fradeco_tensor_new(size_t n,
                                      size_t d,
                                      const double *coords,
                                      size_t len,
                                      struct FradecoTensor **out);

/*
 Binary form from `t_0 .. t_d`.

 # Safety
 `coords` must point to `len` readable doubles; `out` must be writable.
 */
enum FradecoStatus fradeco_tensor_from_binary(const double *coords,
                                              size_t len,
                                              struct FradecoTensor **out);

/*
 Parses the `symtensor v1` text format.

 # Safety
 `text` must be a NUL-terminated string; `out` must be writable.
 */
enum FradecoStatus fradeco_tensor_parse(const char *text, struct FradecoTensor **out);

/*
 Reads a `symtensor v1` file.

 # Safety
 `path` must be a NUL-terminated string; `out` must be writable.
 */
enum FradecoStatus fradeco_tensor_read(const char *path, struct FradecoTensor **out);

/*
 Writes the `symtensor v1` text of `t` into `buf` (NUL-terminated) and its
 length including the NUL into `needed`. With a too-small buffer only
 `needed` is set and `BufferTooSmall` returned.

 # Safety
 `t` must be a live handle; `buf` must hold `cap` bytes; `needed` writable.
 */
enum FradecoStatus fradeco_tensor_format(const struct FradecoTensor *t,
                                         char *buf,
                                         size_t cap,
                                         size_t *needed);

/*
 Number of variables, or 0 for a null handle.

 # Safety
 `t` must be null or a live handle.
 */
size_t fradeco_tensor_n(const struct FradecoTensor *t);

/*
 Order, or 0 for a null handle.

 # Safety
 `t` must be null or a live handle.
 */
size_t fradeco_tensor_d(const struct FradecoTensor *t);

/*
 Number of coordinates, or 0 for a null handle.

 # Safety
 `t` must be null or a live handle.
 */
size_t fradeco_tensor_len(const struct FradecoTensor *t);

/*
 Copies the coordinates into `out`.

 # Safety
 `t` must be a live handle; `out` must hold `cap` doubles.
 */
enum FradecoStatus fradeco_tensor_coords(const struct FradecoTensor *t, double *out, size_t cap);

/*
 Value of the form at `x`.

 # Safety
 `t` must be a live handle; `x` must hold `n` doubles; `out` writable.
 */
enum FradecoStatus fradeco_tensor_evaluate(const struct FradecoTensor *t,
                                           const double *x,
                                           size_t n,
                                           double *out);

/*
 # Safety
 `t` must be null or a handle not yet freed.
 */
void fradeco_tensor_free(struct FradecoTensor *t);

/*
 Frame from `n * r` column-major entries.

 # Safety
 `data` must hold `n * r` doubles; `out` must be writable.
 */
enum FradecoStatus fradeco_frame_new(size_t n,
                                     size_t r,
                                     const double *data,
                                     struct FradecoFrame **out);

/*
 Random funtf of `r` vectors in dimension `n`.

 # Safety
 `out` must be writable.
 */
enum FradecoStatus fradeco_frame_sample(size_t r,
                                        size_t n,
                                        uint64_t seed,
                                        struct FradecoFrame **out);

/*
 # Safety
 `f` must be null or a live handle.
 */
size_t fradeco_frame_n(const struct FradecoFrame *f);

/*
 # Safety
 `f` must be null or a live handle.
 */
size_t fradeco_frame_r(const struct FradecoFrame *f);

/*
 Max violation of the unit-norm tight frame equations.

 # Safety
 `f` must be a live handle; `out` writable.
 */
enum FradecoStatus fradeco_frame_residual(const struct FradecoFrame *f, double *out);

/*
 Copies the entries column-major into `out`.

 # Safety
 `f` must be a live handle; `out` must hold `cap` doubles.
 */
enum FradecoStatus fradeco_frame_data(const struct FradecoFrame *f, double *out, size_t cap);

/*
 # Safety
 `f` must be null or a handle not yet freed.
 */
void fradeco_frame_free(struct FradecoFrame *f);

/*
 `sum_j weights_j v_j^{⊗d}`.

 # Safety
 `f` must be a live handle; `weights` must hold `r` doubles; `out` writable.
 */
enum FradecoStatus fradeco_synthesize(const struct FradecoFrame *f,
                                      const double *weights,
                                      size_t r,
                                      size_t d,
                                      struct FradecoTensor **out);

/*
 Smallest `r` whose determinantal template drops rank, for a binary form.

 # Safety
 `t` must be a live handle; `out_r` writable.
 */
enum FradecoStatus fradeco_binary_rank(const struct FradecoTensor *t,
                                       double rel_tol,
                                       size_t *out_r);

/*
 Decomposes a binary form over a funtf of `r` vectors.

 # Safety
 `t` must be a live handle; `out` writable.
 */
enum FradecoStatus fradeco_decompose_binary(const struct FradecoTensor *t,
                                            size_t r,
                                            double rel_tol,
                                            struct FradecoDecomposition **out);

/*
 # Safety
 `dec` must be null or a live handle.
 */
size_t fradeco_decomposition_r(const struct FradecoDecomposition *dec);

/*
 # Safety
 `dec` must be a live handle; `out` must hold `cap` doubles.
 */
enum FradecoStatus fradeco_decomposition_weights(const struct FradecoDecomposition *dec,
                                                 double *out,
                                                 size_t cap);

/*
 New frame handle holding a copy of the decomposition's frame.

 # Safety
 `dec` must be a live handle; `out` writable.
 */
enum FradecoStatus fradeco_decomposition_frame(const struct FradecoDecomposition *dec,
                                               struct FradecoFrame **out);

/*
 Max-norm coordinate residual of the fit.

 # Safety
 `dec` must be a live handle; `out` writable.
 */
enum FradecoStatus fradeco_decomposition_residual(const struct FradecoDecomposition *dec,
                                                  double *out);

/*
 Passes when both the coordinate residual and the frame residual are at
 most `tol`.

 # Safety
 Handles must be live; `out_pass` and `out_residual` writable.
 */
enum FradecoStatus fradeco_verify(const struct FradecoTensor *t,
                                  const struct FradecoDecomposition *dec,
                                  double tol,
                                  bool *out_pass,
                                  double *out_residual);

/*
 # Safety
 `dec` must be null or a handle not yet freed.
 */
void fradeco_decomposition_free(struct FradecoDecomposition *dec);

/*
 Power-method limits from `trials` random starts (0 means `100 n`).

 # Safety
 `t` must be a live handle; `out` writable.
 */
enum FradecoStatus fradeco_eigen_compute(const struct FradecoTensor *t,
                                         size_t trials,
                                         uint64_t seed,
                                         struct FradecoEigenList **out);

/*
 # Safety
 `list` must be null or a live handle.
 */
size_t fradeco_eigen_len(const struct FradecoEigenList *list);

/*
 Cluster `i`: its unit vector, basin count and whether it is attracting.

 # Safety
 `list` must be a live handle; `x` must hold `cap` doubles; the other
 outputs writable.
 */
enum FradecoStatus fradeco_eigen_get(const struct FradecoEigenList *list,
                                     size_t i,
                                     double *x,
                                     size_t cap,
                                     size_t *basin_count,
                                     bool *attracting);

/*
 # Safety
 `list` must be null or a handle not yet freed.
 */
void fradeco_eigen_free(struct FradecoEigenList *list);

/*
 Expected projective dimension of the fradeco variety.

 # Safety
 `out` writable.
 */
enum FradecoStatus fradeco_expected_dim(size_t r, size_t n, size_t d, size_t *out);

/*
 Numerical dimension from tangent spaces at `samples` random points.

 # Safety
 `out` writable.
 */
enum FradecoStatus fradeco_tangent_dim(size_t r,
                                       size_t n,
                                       size_t d,
                                       uint64_t seed,
                                       size_t samples,
                                       size_t *out);

/*
 Dimension of the degree-`e` part of the ideal (0 samples means default).

 # Safety
 `out` writable.
 */
enum FradecoStatus fradeco_hilbert_value(size_t r,
                                         size_t n,
                                         size_t d,
                                         size_t e,
                                         uint64_t seed,
                                         size_t samples,
                                         size_t *out);

/*
 Named equation at `t`, divided by `max|t|^degree`.

 # Safety
 `name` must be NUL-terminated; `t` a live handle; `out` writable.
 */
enum FradecoStatus fradeco_check_equation(const char *name,
                                          const struct FradecoTensor *t,
                                          double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* FRADECO_H */
