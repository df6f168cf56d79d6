#ifndef TRUNCMAP_RUMAP_HPP
#define TRUNCMAP_RUMAP_HPP

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "truncmap/evaluation.hpp"
#include "truncmap/risk.hpp"

namespace truncmap {

struct RUPoint {
  Metric metric = Metric::unique_count;
  AddressView view;
  TruncationDepth depth{0};
  double utility = 0.0;  // AUC
  double risk = 1.0;     // pcg
};

struct AbsentPoint {
  Metric metric = Metric::unique_count;
  AddressView view;
  TruncationDepth depth{0};
  std::string reason;
};

struct RiskModels {
  ActivityModel internal;
  ActivityModel external;
  /// When set, risk comes from empirical_pcg on these sets instead of the
  /// analytic model.
  std::optional<AddressSet> internal_addresses;
  std::optional<AddressSet> external_addresses;
};

struct RUMap {
  std::vector<RUPoint> points;
  std::vector<AbsentPoint> absent;
};

/// One point per (metric, view, depth) present in `utility`; the risk model
/// is chosen by the view's domain. Cells without an AUC are reported as absent.
RUMap ru_points(const UtilityTable& utility, const RiskModels& models, std::span<const TruncationDepth> depths);

/// Points with utility >= utility_min and risk <= risk_max, by descending
/// utility, then ascending risk, then metric, view and depth.
std::vector<RUPoint> best_tradeoff(std::span<const RUPoint> points, double utility_min, double risk_max);

/// Depth grid used when none is given: 0..16 in steps of 4.
std::vector<TruncationDepth> default_ru_depths();

}  // namespace truncmap

#endif  // TRUNCMAP_RUMAP_HPP
