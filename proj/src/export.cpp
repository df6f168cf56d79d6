#include "truncmap/export.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>

namespace truncmap {

std::string format_double(double value) {
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", value);
  return buf;
}

void write_series_csv(std::ostream& out, const MetricSeries& series) {
  out << "bin,value\n";
  for (std::size_t b = 0; b < series.values.size(); ++b) out << b << ',' << format_double(series.values[b]) << '\n';
}

void write_prefix_structure_csv(std::ostream& out, std::span<const PrefixStructureRow> rows) {
  out << "view,x,count\n";
  for (const auto& row : rows) out << to_string(row.view) << ',' << row.depth.bits() << ',' << row.count << '\n';
}

void write_residuals_csv(std::ostream& out, const ResidualSeries& residuals) {
  out << "bin,residual\n";
  for (std::size_t i = 0; i < residuals.values.size(); ++i) {
    out << residuals.warmup_bins + i << ',' << format_double(residuals.values[i]) << '\n';
  }
}

void write_alarms_csv(std::ostream& out, const ResidualSeries& residuals, const std::vector<bool>& alarms) {
  out << "bin,alarm\n";
  for (std::size_t i = 0; i < alarms.size(); ++i) out << residuals.warmup_bins + i << ',' << (alarms[i] ? 1 : 0) << '\n';
}

void write_roc_csv(std::ostream& out, const RocCurve& curve) {
  out << "fpr,tpr\n";
  for (const auto& p : curve.points) out << format_double(p.fpr) << ',' << format_double(p.tpr) << '\n';
}

void write_utility_csv(std::ostream& out, const UtilityTable& table) {
  out << "metric,view,x,auc\n";
  for (const auto& cell : table.cells) {
    if (!cell.auc) continue;
    out << to_string(cell.metric) << ',' << to_string(cell.view) << ',' << cell.depth.bits() << ','
        << format_double(*cell.auc) << '\n';
  }
}

nlohmann::ordered_json utility_json(const UtilityTable& table) {
  auto cells = nlohmann::ordered_json::array();
  for (const auto& cell : table.cells) {
    nlohmann::ordered_json j;
    j["metric"] = to_string(cell.metric);
    j["view"] = to_string(cell.view);
    j["x"] = cell.depth.bits();
    j["auc"] = cell.auc ? nlohmann::ordered_json(*cell.auc) : nlohmann::ordered_json(nullptr);
    if (!cell.note.empty()) j["note"] = cell.note;
    auto roc = nlohmann::ordered_json::array();
    for (const auto& p : cell.roc.points) roc.push_back({p.fpr, p.tpr});
    j["roc"] = std::move(roc);
    cells.push_back(std::move(j));
  }
  return nlohmann::ordered_json{{"cells", std::move(cells)}};
}

void write_risk_csv(std::ostream& out, std::span<const RiskRow> rows) {
  out << "x,pcg_empirical,pcg_analytic\n";
  for (const auto& row : rows) {
    out << row.depth.bits() << ',' << (row.pcg_empirical ? format_double(*row.pcg_empirical) : "") << ','
        << (row.pcg_analytic ? format_double(*row.pcg_analytic) : "") << '\n';
  }
}

void write_risk_detail_csv(std::ostream& out, std::span<const RiskProfile> profiles) {
  out << "x,prefix,group_size,conditional_entropy\n";
  for (const auto& profile : profiles) {
    for (const auto& g : profile.per_prefix) {
      out << profile.depth.bits() << ',' << format_ipv4(g.prefix) << ',' << g.group_size << ','
          << format_double(g.conditional_entropy) << '\n';
    }
  }
}

void write_rumap_csv(std::ostream& out, std::span<const RUPoint> points) {
  out << "metric,view,x,utility,risk\n";
  for (const auto& p : points) {
    out << to_string(p.metric) << ',' << to_string(p.view) << ',' << p.depth.bits() << ',' << format_double(p.utility)
        << ',' << format_double(p.risk) << '\n';
  }
}

namespace {

nlohmann::ordered_json point_json(const RUPoint& p) {
  return {{"metric", to_string(p.metric)}, {"view", to_string(p.view)}, {"x", p.depth.bits()},
          {"utility", p.utility},          {"risk", p.risk}};
}

nlohmann::ordered_json model_json(const ActivityModel& m, const std::optional<AddressSet>& set) {
  nlohmann::ordered_json j{{"activity", m.activity}, {"assigned_size", m.assigned_size}};
  j["risk_source"] = set ? "empirical" : "analytic";
  if (set) j["address_count"] = set->size();
  return j;
}

}  // namespace

nlohmann::ordered_json rumap_json(const RUMap& map, const RiskModels& models, std::span<const RUPoint> best) {
  // Curves keep first-seen order of (metric, view).
  std::vector<std::pair<std::string, nlohmann::ordered_json>> curves;
  for (const auto& p : map.points) {
    const std::string key = std::string(to_string(p.metric)) + "/" + to_string(p.view);
    auto it = std::find_if(curves.begin(), curves.end(), [&](const auto& c) { return c.first == key; });
    if (it == curves.end()) {
      curves.emplace_back(key, nlohmann::ordered_json{{"metric", to_string(p.metric)},
                                                      {"view", to_string(p.view)},
                                                      {"points", nlohmann::ordered_json::array()}});
      it = std::prev(curves.end());
    }
    it->second["points"].push_back({{"x", p.depth.bits()}, {"utility", p.utility}, {"risk", p.risk}});
  }
  nlohmann::ordered_json j;
  j["risk_models"] = {{"internal", model_json(models.internal, models.internal_addresses)},
                      {"external", model_json(models.external, models.external_addresses)}};
  auto curve_array = nlohmann::ordered_json::array();
  for (auto& c : curves) curve_array.push_back(std::move(c.second));
  j["curves"] = std::move(curve_array);
  auto absent = nlohmann::ordered_json::array();
  for (const auto& a : map.absent) {
    absent.push_back({{"metric", to_string(a.metric)}, {"view", to_string(a.view)}, {"x", a.depth.bits()},
                      {"reason", a.reason}});
  }
  j["absent"] = std::move(absent);
  auto best_array = nlohmann::ordered_json::array();
  for (const auto& p : best) best_array.push_back(point_json(p));
  j["best_tradeoff"] = std::move(best_array);
  return j;
}

}  // namespace truncmap
