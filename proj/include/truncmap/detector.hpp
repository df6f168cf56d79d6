#ifndef TRUNCMAP_DETECTOR_HPP
#define TRUNCMAP_DETECTOR_HPP

#include <cstddef>
#include <span>
#include <vector>

#include "truncmap/flow.hpp"

namespace truncmap {

/// Scalar state-space model of normal traffic around a fixed level:
///
///   state_t       = a * state_{t-1} + w_t,   w_t ~ N(0, q)
///   observation_t = level + state_t + v_t,   v_t ~ N(0, r)
///
/// `initial_state` is in observation units (level included).
struct KalmanParams {
  double ar_coefficient = 0.0;     // a
  double process_noise = 0.0;      // q >= 0
  double measurement_noise = 0.0;  // r >= 0
  double initial_state = 0.0;
  double initial_variance = 1.0;   // > 0
  double level = 0.0;

  /// Throws ConfigError on negative variances or a non-positive initial variance.
  void validate() const;
};

struct DetectorConfig {
  double train_fraction = 0.3;      // leading share of bins eligible for training
  double process_noise_ratio = 0.1;  // q = ratio * r
  std::size_t warmup_bins = 20;
};

/// Fits the model on the bins where `training_mask` is true.
///
/// The level is the training mean; `a` is the least-squares AR(1)
/// coefficient over consecutive training pairs of mean-removed values, `r`
/// the sample variance of the resulting one-step prediction errors, and
/// q = process_noise_ratio * r.
///
/// Throws InsufficientDataError for fewer than 10 training bins (or fewer
/// than two consecutive training pairs) and DegenerateSeriesError when the
/// training values have zero variance.
KalmanParams fit_kalman(std::span<const double> series, const std::vector<bool>& training_mask,
                        double process_noise_ratio = 0.1);

struct Innovation {
  double residual = 0.0;  // observation minus one-step prediction
  double variance = 0.0;  // predicted variance of the residual, P + r
  double normalized() const;
};

class KalmanFilter {
 public:
  explicit KalmanFilter(const KalmanParams& params);

  /// Consumes one observation. The first call predicts `initial_state` with
  /// `initial_variance`; later calls run predict then update.
  Innovation step(double observation);

  double state() const { return state_ + params_.level; }
  /// Posterior state variance after the last step.
  double variance() const { return variance_; }

 private:
  KalmanParams params_;
  double state_;
  double variance_;
  bool started_ = false;
};

struct ResidualSeries {
  std::vector<double> values;  // values[i] belongs to bin warmup_bins + i
  std::size_t warmup_bins = 0;
};

/// |residual_t| / sqrt(P_t + r) for every bin after the warm-up.
ResidualSeries kalman_residuals(std::span<const double> series, const KalmanParams& params,
                                std::size_t warmup_bins = 20);

/// Signed normalized innovations for all bins (no warm-up trimming).
std::vector<double> kalman_innovations(std::span<const double> series, const KalmanParams& params);

/// flag_t = residual_t > threshold. Throws ConfigError for a negative or NaN threshold.
std::vector<bool> detect(const ResidualSeries& residuals, double threshold);

/// Bins in the leading `train_fraction` of the trace that are labeled normal.
std::vector<bool> training_mask(std::span<const Label> labels, double train_fraction);

}  // namespace truncmap

#endif  // TRUNCMAP_DETECTOR_HPP
