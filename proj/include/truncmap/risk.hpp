#ifndef TRUNCMAP_RISK_HPP
#define TRUNCMAP_RISK_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "truncmap/anonymizer.hpp"
#include "truncmap/ipv4.hpp"
#include "truncmap/prefix_table.hpp"

namespace truncmap {

/// The attacker's list of original addresses. Sorted, duplicates removed.
class AddressSet {
 public:
  AddressSet() = default;
  explicit AddressSet(std::vector<Ipv4> members);

  std::span<const Ipv4> members() const { return members_; }
  std::size_t size() const { return members_.size(); }
  bool empty() const { return members_.empty(); }

 private:
  std::vector<Ipv4> members_;
};

/// Originals sharing one truncated address r. With a uniform P(s|r) over the
/// group, H(S|r) = log2(group_size).
struct PrefixGroup {
  Ipv4 prefix = 0;
  std::uint64_t group_size = 0;
  double conditional_entropy = 0.0;
};

/// How the global guessing probability averages over groups.
enum class PcgWeighting {
  per_prefix,  // mean over distinct truncated addresses r of 2^-H(S|r)
  per_host,    // mean over original hosts; equals |R| / |S|
};

struct RiskProfile {
  TruncationDepth depth{0};
  std::vector<PrefixGroup> per_prefix;  // ascending by prefix
  double pcg = 1.0;
};

/// Throws ConfigError for an empty set.
std::vector<PrefixGroup> empirical_conditional_entropy(const AddressSet& originals, TruncationDepth depth);
double empirical_pcg(const AddressSet& originals, TruncationDepth depth,
                     PcgWeighting weighting = PcgWeighting::per_prefix);
RiskProfile risk_profile(const AddressSet& originals, TruncationDepth depth,
                         PcgWeighting weighting = PcgWeighting::per_prefix);

/// Fraction A of active addresses in an assigned space of `assigned_size`.
struct ActivityModel {
  double activity = 1.0;
  std::uint64_t assigned_size = 0;

  /// Throws ConfigError unless 0 < activity <= 1.
  static ActivityModel from_fraction(double activity, std::uint64_t assigned_size = 0);
  /// Throws ConfigError unless 0 < active <= assigned.
  static ActivityModel from_counts(std::uint64_t active, std::uint64_t assigned);
};

/// Guessing probability under the density model: 1 / (2^x A), or 1 when
/// fewer than one candidate remains per truncated address (2^x A < 1).
double analytic_pcg(TruncationDepth depth, const ActivityModel& model);

/// H_x(S|r) = x + log2(A), floored at 0 where the model clamps.
double analytic_conditional_entropy(TruncationDepth depth, const ActivityModel& model);

/// Internal activity: every member must lie inside `table`, otherwise a
/// DataError lists the offending addresses.
ActivityModel activity_fraction(const AddressSet& active, const PrefixTable& table);

/// External activity against the full 2^32 space.
ActivityModel external_activity_fraction(std::uint64_t visible_count);

/// Extra truncated bits on the sparse side needed for equal risk:
/// log2(A_in / A_out).
double equal_risk_gap(double internal_activity, double external_activity);

struct RiskCurvePoint {
  TruncationDepth depth{0};
  double pcg = 1.0;
};

std::vector<RiskCurvePoint> risk_curve(const ActivityModel& model, std::span<const TruncationDepth> depths);

}  // namespace truncmap

#endif  // TRUNCMAP_RISK_HPP
