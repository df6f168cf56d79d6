#include "truncmap/detector.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "truncmap/error.hpp"

namespace truncmap {

namespace {
constexpr std::size_t kMinTrainingBins = 10;
}

void KalmanParams::validate() const {
  if (!(process_noise >= 0.0) || !(measurement_noise >= 0.0)) {
    throw ConfigError("kalman: noise variances must be non-negative");
  }
  if (!(initial_variance > 0.0)) throw ConfigError("kalman: initial variance must be positive");
  if (!std::isfinite(ar_coefficient) || !std::isfinite(initial_state) || !std::isfinite(level)) {
    throw ConfigError("kalman: parameters must be finite");
  }
}

KalmanParams fit_kalman(std::span<const double> series, const std::vector<bool>& training_mask,
                        double process_noise_ratio) {
  if (training_mask.size() != series.size()) {
    throw ConfigError("kalman: training mask length differs from series length");
  }
  if (!(process_noise_ratio >= 0.0)) throw ConfigError("kalman: process noise ratio must be non-negative");

  std::size_t count = 0;
  double sum = 0.0;
  std::size_t first = series.size();
  for (std::size_t t = 0; t < series.size(); ++t) {
    if (!training_mask[t]) continue;
    if (first == series.size()) first = t;
    sum += series[t];
    ++count;
  }
  if (count < kMinTrainingBins) {
    throw InsufficientDataError("kalman: " + std::to_string(count) + " training bins, need at least " +
                                std::to_string(kMinTrainingBins));
  }
  const double mean = sum / static_cast<double>(count);
  double ss = 0.0;
  for (std::size_t t = 0; t < series.size(); ++t) {
    if (training_mask[t]) ss += (series[t] - mean) * (series[t] - mean);
  }
  const double variance = ss / static_cast<double>(count - 1);
  if (!(variance > 0.0)) throw DegenerateSeriesError("kalman: training series has zero variance");

  double cross = 0.0;
  double lagged = 0.0;
  std::size_t pairs = 0;
  for (std::size_t t = 1; t < series.size(); ++t) {
    if (!training_mask[t] || !training_mask[t - 1]) continue;
    const double prev = series[t - 1] - mean;
    cross += (series[t] - mean) * prev;
    lagged += prev * prev;
    ++pairs;
  }
  if (pairs < 2) throw InsufficientDataError("kalman: fewer than two consecutive training bins");
  const double a = lagged > 0.0 ? cross / lagged : 0.0;

  double e_sum = 0.0;
  double e_ss = 0.0;
  for (std::size_t t = 1; t < series.size(); ++t) {
    if (!training_mask[t] || !training_mask[t - 1]) continue;
    const double e = (series[t] - mean) - a * (series[t - 1] - mean);
    e_sum += e;
    e_ss += e * e;
  }
  const double e_mean = e_sum / static_cast<double>(pairs);
  const double r = std::max(0.0, (e_ss - static_cast<double>(pairs) * e_mean * e_mean) / static_cast<double>(pairs - 1));

  KalmanParams params;
  params.ar_coefficient = a;
  params.measurement_noise = r;
  params.process_noise = process_noise_ratio * r;
  params.initial_state = series[first];
  params.initial_variance = variance;
  params.level = mean;
  return params;
}

double Innovation::normalized() const {
  if (variance > 0.0) return residual / std::sqrt(variance);
  if (residual == 0.0) return 0.0;
  return residual > 0.0 ? std::numeric_limits<double>::infinity() : -std::numeric_limits<double>::infinity();
}

KalmanFilter::KalmanFilter(const KalmanParams& params)
    : params_(params), state_(params.initial_state - params.level), variance_(params.initial_variance) {
  params_.validate();
}

Innovation KalmanFilter::step(double observation) {
  const double a = params_.ar_coefficient;
  double predicted = state_;
  double predicted_variance = variance_;
  if (started_) {
    predicted = a * state_;
    predicted_variance = a * a * variance_ + params_.process_noise;
  }
  started_ = true;

  Innovation out;
  out.residual = (observation - params_.level) - predicted;
  out.variance = predicted_variance + params_.measurement_noise;
  const double gain = out.variance > 0.0 ? predicted_variance / out.variance : 0.0;
  state_ = predicted + gain * out.residual;
  variance_ = (1.0 - gain) * predicted_variance;
  return out;
}

ResidualSeries kalman_residuals(std::span<const double> series, const KalmanParams& params,
                                std::size_t warmup_bins) {
  KalmanFilter filter(params);
  ResidualSeries out;
  out.warmup_bins = warmup_bins;
  if (series.size() > warmup_bins) out.values.reserve(series.size() - warmup_bins);
  for (std::size_t t = 0; t < series.size(); ++t) {
    const auto innovation = filter.step(series[t]);
    if (t >= warmup_bins) out.values.push_back(std::abs(innovation.normalized()));
  }
  return out;
}

std::vector<double> kalman_innovations(std::span<const double> series, const KalmanParams& params) {
  KalmanFilter filter(params);
  std::vector<double> out;
  out.reserve(series.size());
  for (double y : series) out.push_back(filter.step(y).normalized());
  return out;
}

std::vector<bool> detect(const ResidualSeries& residuals, double threshold) {
  if (!(threshold >= 0.0)) throw ConfigError("detect: threshold must be non-negative");
  std::vector<bool> flags;
  flags.reserve(residuals.values.size());
  for (double r : residuals.values) flags.push_back(r > threshold);
  return flags;
}

std::vector<bool> training_mask(std::span<const Label> labels, double train_fraction) {
  if (!(train_fraction > 0.0 && train_fraction <= 1.0)) {
    throw ConfigError("train fraction must be in (0, 1]");
  }
  const auto cutoff = static_cast<std::size_t>(std::floor(train_fraction * static_cast<double>(labels.size())));
  std::vector<bool> mask(labels.size(), false);
  for (std::size_t t = 0; t < cutoff; ++t) mask[t] = labels[t] == Label::normal;
  return mask;
}

}  // namespace truncmap
