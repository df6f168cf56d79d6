#include "truncmap/risk.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "truncmap/error.hpp"

namespace truncmap {

AddressSet::AddressSet(std::vector<Ipv4> members) : members_(std::move(members)) {
  std::sort(members_.begin(), members_.end());
  members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
}

std::vector<PrefixGroup> empirical_conditional_entropy(const AddressSet& originals, TruncationDepth depth) {
  if (originals.empty()) throw ConfigError("risk: address set is empty");
  std::vector<PrefixGroup> groups;
  for (Ipv4 s : originals.members()) {
    const Ipv4 r = truncate_address(s, depth);
    if (!groups.empty() && groups.back().prefix == r) {
      ++groups.back().group_size;
    } else {
      groups.push_back({r, 1, 0.0});
    }
  }
  for (auto& g : groups) g.conditional_entropy = std::log2(static_cast<double>(g.group_size));
  return groups;
}

namespace {

double pcg_from_groups(const std::vector<PrefixGroup>& groups, std::size_t hosts, PcgWeighting weighting) {
  if (weighting == PcgWeighting::per_host) {
    return static_cast<double>(groups.size()) / static_cast<double>(hosts);
  }
  double sum = 0.0;
  for (const auto& g : groups) sum += 1.0 / static_cast<double>(g.group_size);
  return sum / static_cast<double>(groups.size());
}

}  // namespace

double empirical_pcg(const AddressSet& originals, TruncationDepth depth, PcgWeighting weighting) {
  return pcg_from_groups(empirical_conditional_entropy(originals, depth), originals.size(), weighting);
}

RiskProfile risk_profile(const AddressSet& originals, TruncationDepth depth, PcgWeighting weighting) {
  RiskProfile profile{depth, empirical_conditional_entropy(originals, depth), 1.0};
  profile.pcg = pcg_from_groups(profile.per_prefix, originals.size(), weighting);
  return profile;
}

ActivityModel ActivityModel::from_fraction(double activity, std::uint64_t assigned_size) {
  if (!(activity > 0.0 && activity <= 1.0)) {
    throw ConfigError("activity fraction must be in (0, 1], got " + std::to_string(activity));
  }
  return ActivityModel{activity, assigned_size};
}

ActivityModel ActivityModel::from_counts(std::uint64_t active, std::uint64_t assigned) {
  if (active == 0 || active > assigned) {
    throw ConfigError("activity: need 0 < active (" + std::to_string(active) + ") <= assigned (" +
                      std::to_string(assigned) + ")");
  }
  return ActivityModel{static_cast<double>(active) / static_cast<double>(assigned), assigned};
}

double analytic_pcg(TruncationDepth depth, const ActivityModel& model) {
  if (!(model.activity > 0.0 && model.activity <= 1.0)) throw ConfigError("activity fraction must be in (0, 1]");
  const double candidates = std::ldexp(model.activity, depth.bits());
  return candidates >= 1.0 ? 1.0 / candidates : 1.0;
}

double analytic_conditional_entropy(TruncationDepth depth, const ActivityModel& model) {
  return std::max(0.0, static_cast<double>(depth.bits()) + std::log2(model.activity));
}

ActivityModel activity_fraction(const AddressSet& active, const PrefixTable& table) {
  std::vector<Ipv4> outside;
  for (Ipv4 a : active.members()) {
    if (!table.contains(a)) outside.push_back(a);
  }
  if (!outside.empty()) {
    std::string list;
    for (std::size_t i = 0; i < outside.size() && i < 10; ++i) list += (i ? ", " : "") + format_ipv4(outside[i]);
    if (outside.size() > 10) list += ", ... (" + std::to_string(outside.size()) + " total)";
    throw DataError("activity: addresses outside the internal prefix table: " + list);
  }
  return ActivityModel::from_counts(active.size(), table.assigned_size());
}

ActivityModel external_activity_fraction(std::uint64_t visible_count) {
  return ActivityModel::from_counts(visible_count, std::uint64_t{1} << 32);
}

double equal_risk_gap(double internal_activity, double external_activity) {
  for (double a : {internal_activity, external_activity}) {
    if (!(a > 0.0 && a <= 1.0)) throw ConfigError("equal_risk_gap: activity fractions must be in (0, 1]");
  }
  return std::log2(internal_activity / external_activity);
}

std::vector<RiskCurvePoint> risk_curve(const ActivityModel& model, std::span<const TruncationDepth> depths) {
  std::vector<RiskCurvePoint> curve;
  curve.reserve(depths.size());
  for (const auto depth : depths) curve.push_back({depth, analytic_pcg(depth, model)});
  return curve;
}

}  // namespace truncmap
