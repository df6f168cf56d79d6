#include "truncmap/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "truncmap/error.hpp"

namespace truncmap {

RocCurve roc_curve(std::span<const double> scores, std::span<const Label> labels) {
  if (scores.size() != labels.size()) {
    throw EvaluationError("roc: " + std::to_string(scores.size()) + " scores for " + std::to_string(labels.size()) +
                          " labels");
  }
  std::vector<std::pair<double, bool>> samples;  // (score, is_attack)
  std::size_t normals = 0;
  std::size_t attacks = 0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (labels[i] == Label::excluded) continue;
    if (std::isnan(scores[i])) throw EvaluationError("roc: NaN score at position " + std::to_string(i));
    const bool attack = labels[i] == Label::attack;
    samples.emplace_back(scores[i], attack);
    ++(attack ? attacks : normals);
  }
  if (normals == 0) throw EvaluationError("roc: no normal bins to evaluate");
  if (attacks == 0) throw EvaluationError("roc: no attack bins to evaluate");

  std::sort(samples.begin(), samples.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
  RocCurve curve;
  curve.points.push_back({0.0, 0.0});
  std::size_t fp = 0;
  std::size_t tp = 0;
  for (std::size_t i = 0; i < samples.size();) {
    const double threshold = samples[i].first;
    while (i < samples.size() && samples[i].first == threshold) {
      ++(samples[i].second ? tp : fp);
      ++i;
    }
    curve.points.push_back({static_cast<double>(fp) / static_cast<double>(normals),
                            static_cast<double>(tp) / static_cast<double>(attacks)});
  }
  return curve;
}

double auc(const RocCurve& curve) {
  double area = 0.0;
  for (std::size_t i = 1; i < curve.points.size(); ++i) {
    const auto& p = curve.points[i - 1];
    const auto& q = curve.points[i];
    area += (q.fpr - p.fpr) * (q.tpr + p.tpr) / 2.0;
  }
  return area;
}

double tpr_at_fpr(const RocCurve& curve, double fpr) {
  double best = 0.0;
  for (std::size_t i = 0; i < curve.points.size(); ++i) {
    const auto& q = curve.points[i];
    if (q.fpr <= fpr) {
      best = std::max(best, q.tpr);
    } else if (i > 0 && curve.points[i - 1].fpr <= fpr) {
      const auto& p = curve.points[i - 1];
      const double t = (fpr - p.fpr) / (q.fpr - p.fpr);
      best = std::max(best, p.tpr + t * (q.tpr - p.tpr));
    }
  }
  return best;
}

const UtilityCell* UtilityTable::find(Metric metric, AddressView view, TruncationDepth depth) const {
  for (const auto& cell : cells) {
    if (cell.metric == metric && cell.view == view && cell.depth == depth) return &cell;
  }
  return nullptr;
}

std::optional<double> UtilityTable::auc(Metric metric, AddressView view, TruncationDepth depth) const {
  const auto* cell = find(metric, view, depth);
  return cell != nullptr ? cell->auc : std::nullopt;
}

namespace {

std::vector<Label> dense_labels(std::span<const Label> labels, std::size_t bins) {
  std::vector<Label> out(bins, Label::excluded);
  std::copy_n(labels.begin(), std::min(bins, labels.size()), out.begin());
  return out;
}

}  // namespace

UtilityCell evaluate_series(const MetricSeries& series, std::span<const Label> labels, const DetectorConfig& config) {
  UtilityCell cell{series.metric, series.view, series.depth, std::nullopt, {}, {}};
  const auto dense = dense_labels(labels, series.values.size());
  const auto mask = training_mask(dense, config.train_fraction);
  const std::size_t warmup = std::min(config.warmup_bins, series.values.size());
  const std::span<const Label> scored(dense.begin() + static_cast<std::ptrdiff_t>(warmup), dense.end());
  try {
    std::vector<double> scores;
    try {
      const auto params = fit_kalman(series.values, mask, config.process_noise_ratio);
      scores = kalman_residuals(series.values, params, config.warmup_bins).values;
    } catch (const DegenerateSeriesError& e) {
      scores.assign(scored.size(), 0.0);
      cell.note = "constant training series; detector output is flat";
    }
    cell.roc = roc_curve(scores, scored);
    cell.auc = truncmap::auc(cell.roc);
  } catch (const EvaluationError& e) {
    cell.auc.reset();
    cell.roc = {};
    cell.note = e.what();
  }
  return cell;
}

UtilityTable utility_table(const BinnedTrace& trace, std::span<const Label> labels,
                           std::span<const TruncationDepth> depths, std::span<const Metric> metrics,
                           std::span<const AddressView> views, const DetectorConfig& config) {
  const auto dense = dense_labels(labels, trace.bin_count());
  const std::size_t warmup = std::min(config.warmup_bins, dense.size());
  const bool has_normal = std::any_of(dense.begin() + static_cast<std::ptrdiff_t>(warmup), dense.end(),
                                      [](Label l) { return l == Label::normal; });
  const bool has_attack = std::any_of(dense.begin() + static_cast<std::ptrdiff_t>(warmup), dense.end(),
                                      [](Label l) { return l == Label::attack; });
  if (!has_normal) throw EvaluationError("utility: labels contain no normal bins after warm-up");
  if (!has_attack) throw EvaluationError("utility: labels contain no attack bins after warm-up");
  const auto mask = training_mask(dense, config.train_fraction);
  if (std::none_of(mask.begin(), mask.end(), [](bool b) { return b; })) {
    throw EvaluationError("utility: training split contains no normal bins");
  }

  UtilityTable table;
  for (const auto metric : metrics) {
    for (const auto& view : views) {
      for (const auto depth : depths) {
        table.cells.push_back(evaluate_series(compute_metric_series(trace, metric, view, depth), dense, config));
      }
    }
  }
  return table;
}

}  // namespace truncmap
