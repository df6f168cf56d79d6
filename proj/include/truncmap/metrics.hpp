#ifndef TRUNCMAP_METRICS_HPP
#define TRUNCMAP_METRICS_HPP

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "truncmap/anonymizer.hpp"
#include "truncmap/flow.hpp"
#include "truncmap/prefix_table.hpp"

namespace truncmap {

enum class Metric { unique_count, entropy };

/// "count" / "entropy".
std::string_view to_string(Metric metric);
Metric parse_metric(std::string_view text);

inline constexpr std::array<Metric, 2> kAllMetrics = {Metric::unique_count, Metric::entropy};

/// Flow counts per (possibly truncated) address, stored sorted by address.
/// Each flow contributes one unit to its address.
class AddressMultiset {
 public:
  using Entry = std::pair<Ipv4, std::uint64_t>;

  AddressMultiset() = default;
  static AddressMultiset from_addresses(std::span<const Ipv4> addresses);
  /// Duplicate keys are merged; a zero count is a ConfigError.
  static AddressMultiset from_counts(std::vector<Entry> counts);
  static AddressMultiset from_map(const std::unordered_map<Ipv4, std::uint64_t>& counts);

  std::span<const Entry> entries() const { return entries_; }
  std::uint64_t total_flows() const { return total_; }
  bool empty() const { return entries_.empty(); }

  /// Same flows keyed by their /(32-x) prefix.
  AddressMultiset truncated(TruncationDepth depth) const;

 private:
  std::vector<Entry> entries_;
  std::uint64_t total_ = 0;
};

std::uint64_t unique_count(const AddressMultiset& ms);

/// Shannon entropy in bits of the flows-per-address distribution; 0 for an
/// empty multiset.
double shannon_entropy(const AddressMultiset& ms);

double evaluate_metric(Metric metric, const AddressMultiset& ms);

/// Per-bin, per-view address multisets of a trace. Views are assigned from
/// the original addresses; truncation is applied later, per depth.
class BinnedTrace {
 public:
  std::size_t bin_count() const { return bins_.size(); }
  std::int64_t epoch_start() const { return epoch_start_; }
  std::int64_t bin_seconds() const { return bin_seconds_; }
  std::uint64_t flow_count() const { return flow_count_; }

  const AddressMultiset& multiset(std::size_t bin, AddressView view) const { return bins_[bin][view.index()]; }

  /// Distinct original addresses seen in `view` over all bins, ascending.
  std::vector<Ipv4> distinct_addresses(AddressView view) const;

 private:
  friend class BinnedTraceBuilder;
  std::int64_t epoch_start_ = 0;
  std::int64_t bin_seconds_ = 900;
  std::uint64_t flow_count_ = 0;
  std::vector<std::array<AddressMultiset, 4>> bins_;
};

/// Streaming accumulator for BinnedTrace; memory is bounded by the distinct
/// addresses per bin, not by the number of flows.
class BinnedTraceBuilder {
 public:
  /// Without `epoch_start`, the first flow's timestamp rounded down to a bin
  /// boundary is used.
  BinnedTraceBuilder(const PrefixTable& table, std::int64_t bin_seconds,
                     std::optional<std::int64_t> epoch_start = std::nullopt);

  void add(const FlowRecord& flow);
  /// Pads with empty bins so the trace has at least `count` bins.
  void ensure_bins(std::size_t count);
  BinnedTrace build();

 private:
  using Counts = std::unordered_map<Ipv4, std::uint64_t>;
  const PrefixTable* table_;
  std::int64_t bin_seconds_;
  std::optional<std::int64_t> epoch_start_;
  std::uint64_t flow_count_ = 0;
  std::vector<std::array<Counts, 4>> bins_;
};

struct BinParams {
  std::int64_t bin_seconds = 900;
  std::optional<std::int64_t> epoch_start;
  std::optional<std::size_t> bin_count;
};

BinnedTrace bin_trace(std::span<const FlowRecord> flows, const PrefixTable& table, const BinParams& params);

struct MetricSeries {
  Metric metric = Metric::unique_count;
  AddressView view;
  TruncationDepth depth{0};
  std::vector<double> values;
};

MetricSeries compute_metric_series(const BinnedTrace& trace, Metric metric, AddressView view, TruncationDepth depth);
MetricSeries compute_metric_series(std::span<const FlowRecord> flows, const BinParams& params,
                                   const PrefixTable& table, Metric metric, AddressView view, TruncationDepth depth);

struct PrefixStructureRow {
  AddressView view;
  TruncationDepth depth{0};
  std::uint64_t count = 0;
};

/// Distinct truncated addresses per view and depth over the whole window.
std::vector<PrefixStructureRow> prefix_structure(const BinnedTrace& trace, std::span<const TruncationDepth> depths);
std::vector<PrefixStructureRow> prefix_structure(std::span<const FlowRecord> flows, const PrefixTable& table,
                                                 std::span<const TruncationDepth> depths);

}  // namespace truncmap

#endif  // TRUNCMAP_METRICS_HPP
