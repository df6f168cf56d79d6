#ifndef TRUNCMAP_EVALUATION_HPP
#define TRUNCMAP_EVALUATION_HPP

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "truncmap/anonymizer.hpp"
#include "truncmap/detector.hpp"
#include "truncmap/flow.hpp"
#include "truncmap/metrics.hpp"

namespace truncmap {

struct RocPoint {
  double fpr = 0.0;
  double tpr = 0.0;

  friend bool operator==(const RocPoint&, const RocPoint&) = default;
};

/// Starts at (0,0), ends at (1,1), non-decreasing in both coordinates.
struct RocCurve {
  std::vector<RocPoint> points;
};

/// Exact ROC: one point per distinct score (bins with score >= threshold are
/// flagged), plus the +inf start. Excluded bins are dropped.
///
/// Throws EvaluationError when no normal or no attack bin remains, or when
/// a score is NaN or the lengths differ.
RocCurve roc_curve(std::span<const double> scores, std::span<const Label> labels);

/// Trapezoidal area under the curve.
double auc(const RocCurve& curve);

/// Highest TPR reachable at a false-positive rate of at most `fpr`,
/// interpolating linearly along the segment that crosses `fpr`.
double tpr_at_fpr(const RocCurve& curve, double fpr);

struct UtilityCell {
  Metric metric = Metric::unique_count;
  AddressView view;
  TruncationDepth depth{0};
  std::optional<double> auc;
  RocCurve roc;
  std::string note;  // failure reason when auc is absent, remarks otherwise
};

struct UtilityTable {
  std::vector<UtilityCell> cells;  // metric-major, then view, then depth, in request order

  const UtilityCell* find(Metric metric, AddressView view, TruncationDepth depth) const;
  std::optional<double> auc(Metric metric, AddressView view, TruncationDepth depth) const;
};

/// Scores one metric series: fit on the training bins, filter, and compare
/// residuals against the labels of the post-warm-up bins.
///
/// A series that is constant over the training bins carries no signal; it
/// yields all-zero scores (AUC 0.5) with a note instead of an error.
UtilityCell evaluate_series(const MetricSeries& series, std::span<const Label> labels, const DetectorConfig& config);

/// Runs every (metric, view, depth) combination. Labels are per bin; bins
/// past the end of `labels` count as excluded.
///
/// Throws EvaluationError up front if the scored bins lack either class or
/// the training split has no normal bin; failures inside one cell are
/// recorded in that cell.
UtilityTable utility_table(const BinnedTrace& trace, std::span<const Label> labels,
                           std::span<const TruncationDepth> depths, std::span<const Metric> metrics,
                           std::span<const AddressView> views, const DetectorConfig& config);

}  // namespace truncmap

#endif  // TRUNCMAP_EVALUATION_HPP
