#ifndef TRUNCMAP_EXPORT_HPP
#define TRUNCMAP_EXPORT_HPP

#include <optional>
#include <ostream>
#include <span>
#include <string>

#include <json.hpp>

#include "truncmap/detector.hpp"
#include "truncmap/evaluation.hpp"
#include "truncmap/metrics.hpp"
#include "truncmap/risk.hpp"
#include "truncmap/rumap.hpp"

namespace truncmap {

/// Shortest round-trip-stable rendering used by every CSV writer ("%.12g").
std::string format_double(double value);

void write_series_csv(std::ostream& out, const MetricSeries& series);
void write_prefix_structure_csv(std::ostream& out, std::span<const PrefixStructureRow> rows);
void write_residuals_csv(std::ostream& out, const ResidualSeries& residuals);
void write_alarms_csv(std::ostream& out, const ResidualSeries& residuals, const std::vector<bool>& alarms);
void write_roc_csv(std::ostream& out, const RocCurve& curve);
/// Cells without an AUC are skipped; they appear in the JSON form with a reason.
void write_utility_csv(std::ostream& out, const UtilityTable& table);
nlohmann::ordered_json utility_json(const UtilityTable& table);

struct RiskRow {
  TruncationDepth depth{0};
  std::optional<double> pcg_empirical;
  std::optional<double> pcg_analytic;
};

void write_risk_csv(std::ostream& out, std::span<const RiskRow> rows);
void write_risk_detail_csv(std::ostream& out, std::span<const RiskProfile> profiles);

void write_rumap_csv(std::ostream& out, std::span<const RUPoint> points);
/// Parametric curves per (metric, view), the absent cells, the risk models
/// and the best-tradeoff rows.
nlohmann::ordered_json rumap_json(const RUMap& map, const RiskModels& models, std::span<const RUPoint> best);

}  // namespace truncmap

#endif  // TRUNCMAP_EXPORT_HPP
