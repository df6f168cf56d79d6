#include "truncmap/rumap.hpp"

#include <algorithm>
#include <tuple>

#include "truncmap/error.hpp"

namespace truncmap {

RUMap ru_points(const UtilityTable& utility, const RiskModels& models, std::span<const TruncationDepth> depths) {
  RUMap map;
  for (const auto& cell : utility.cells) {
    if (std::find(depths.begin(), depths.end(), cell.depth) == depths.end()) continue;
    if (!cell.auc) {
      map.absent.push_back({cell.metric, cell.view, cell.depth, cell.note.empty() ? "no utility value" : cell.note});
      continue;
    }
    const bool internal = cell.view.domain == Domain::internal;
    const auto& empirical = internal ? models.internal_addresses : models.external_addresses;
    const double risk = empirical ? empirical_pcg(*empirical, cell.depth)
                                  : analytic_pcg(cell.depth, internal ? models.internal : models.external);
    map.points.push_back({cell.metric, cell.view, cell.depth, *cell.auc, risk});
  }
  return map;
}

std::vector<RUPoint> best_tradeoff(std::span<const RUPoint> points, double utility_min, double risk_max) {
  for (double t : {utility_min, risk_max}) {
    if (!(t >= 0.0 && t <= 1.0)) throw ConfigError("best_tradeoff: thresholds must be in [0, 1]");
  }
  std::vector<RUPoint> out;
  std::copy_if(points.begin(), points.end(), std::back_inserter(out),
               [&](const RUPoint& p) { return p.utility >= utility_min && p.risk <= risk_max; });
  std::sort(out.begin(), out.end(), [](const RUPoint& a, const RUPoint& b) {
    return std::make_tuple(-a.utility, a.risk, to_string(a.metric), to_string(a.view), a.depth.bits()) <
           std::make_tuple(-b.utility, b.risk, to_string(b.metric), to_string(b.view), b.depth.bits());
  });
  return out;
}

std::vector<TruncationDepth> default_ru_depths() {
  return {TruncationDepth{0}, TruncationDepth{4}, TruncationDepth{8}, TruncationDepth{12}, TruncationDepth{16}};
}

}  // namespace truncmap
