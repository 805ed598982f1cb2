#ifndef WSPACE_H
#define WSPACE_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum WsStatus {
  WS_STATUS_OK = 0,
  WS_STATUS_NULL_POINTER = 1,
  WS_STATUS_INVALID_ARGUMENT = 2,
  WS_STATUS_CONFIG_ERROR = 3,
  WS_STATUS_DATA_ERROR = 4,
  WS_STATUS_NUMERIC_ERROR = 5,
  WS_STATUS_PANIC = 6,
} WsStatus;

/**
 * Autoencoder trained on a single signal.
 */
typedef struct WsAutoencoder WsAutoencoder;

/**
 * Loaded or generated trial set.
 */
typedef struct WsDataset WsDataset;

/**
 * One-against-all SVM over four classes.
 */
typedef struct WsSvm WsSvm;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null. The pointer stays
 * valid until the next failing call on the same thread.
 */
const char *ws_last_error_message(void);

/**
 * Static, NUL-terminated library version.
 */
const char *ws_version(void);

enum WsStatus ws_dataset_load(const char *manifest_path, struct WsDataset **out);

/**
 * Generates the default synthetic four-class set with the given overrides.
 */
enum WsStatus ws_dataset_synthetic(size_t trials_per_class,
                                   size_t channels,
                                   double noise_level,
                                   uint64_t seed,
                                   struct WsDataset **out);

void ws_dataset_free(struct WsDataset *ds);

/**
 * Number of trials, channels per trial and samples per channel.
 */
enum WsStatus ws_dataset_shape(const struct WsDataset *ds,
                               size_t *trials,
                               size_t *channels,
                               size_t *samples);

enum WsStatus ws_dataset_sample_rate(const struct WsDataset *ds, double *rate_hz);

/**
 * Class label (1 to 4) of trial `trial`.
 */
enum WsStatus ws_dataset_label(const struct WsDataset *ds, size_t trial, uint8_t *label);

/**
 * Copies one channel of one trial into `buf`, which must hold exactly the
 * number of samples per channel.
 */
enum WsStatus ws_dataset_copy_channel(const struct WsDataset *ds,
                                      size_t trial,
                                      size_t channel,
                                      double *buf,
                                      size_t len);

/**
 * Trains an autoencoder on `signal`. A `max_epochs` of 0 keeps the default.
 */
enum WsStatus ws_autoencoder_train(const double *signal,
                                   size_t len,
                                   size_t hidden,
                                   size_t max_epochs,
                                   uint64_t seed,
                                   struct WsAutoencoder **out);

void ws_autoencoder_free(struct WsAutoencoder *ae);

/**
 * Length of the flattened encoder weight vector (input size times hidden size).
 */
enum WsStatus ws_autoencoder_weight_len(const struct WsAutoencoder *ae, size_t *len);

/**
 * Copies the row-major encoder weights into `buf` of exactly `len` entries.
 */
enum WsStatus ws_autoencoder_copy_weights(const struct WsAutoencoder *ae, double *buf, size_t len);

/**
 * Final training cost, epochs run and whether training converged.
 */
enum WsStatus ws_autoencoder_summary(const struct WsAutoencoder *ae,
                                     double *final_cost,
                                     size_t *epochs,
                                     bool *converged);

/**
 * Hidden activations for a raw signal of the training length.
 */
enum WsStatus ws_autoencoder_encode(const struct WsAutoencoder *ae,
                                    const double *signal,
                                    size_t len,
                                    double *out,
                                    size_t out_len);

/**
 * Number of feature values `ws_window_features` produces for a vector of
 * `len` entries split into windows of `window`.
 */
size_t ws_feature_len(size_t len, size_t window);

/**
 * Windowed AR, packet-entropy and multifractal features with default
 * settings. `out` must hold `ws_feature_len(len, window)` values.
 */
enum WsStatus ws_window_features(const double *v,
                                 size_t len,
                                 size_t window,
                                 double *out,
                                 size_t out_len);

/**
 * Trains a one-against-all RBF SVM with default parameters on `rows` row-major
 * feature vectors of `cols` values and labels in 1 to 4.
 */
enum WsStatus ws_svm_train(const double *x,
                           size_t rows,
                           size_t cols,
                           const uint8_t *labels,
                           struct WsSvm **out);

void ws_svm_free(struct WsSvm *m);

/**
 * Predicts the class of one feature vector. `decision` may be null; otherwise
 * it receives the four per-class decision values.
 */
enum WsStatus ws_svm_predict(const struct WsSvm *m,
                             const double *x,
                             size_t cols,
                             uint8_t *class_out,
                             double *decision);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* WSPACE_H */
