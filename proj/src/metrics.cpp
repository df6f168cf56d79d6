#include "truncmap/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "truncmap/error.hpp"

namespace truncmap {

std::string_view to_string(Metric metric) { return metric == Metric::unique_count ? "count" : "entropy"; }

Metric parse_metric(std::string_view text) {
  if (text == "count" || text == "unique_count") return Metric::unique_count;
  if (text == "entropy") return Metric::entropy;
  throw ConfigError("unknown metric '" + std::string(text) + "' (expected count or entropy)");
}

AddressMultiset AddressMultiset::from_addresses(std::span<const Ipv4> addresses) {
  std::vector<Entry> counts;
  counts.reserve(addresses.size());
  for (Ipv4 a : addresses) counts.emplace_back(a, 1);
  return from_counts(std::move(counts));
}

AddressMultiset AddressMultiset::from_counts(std::vector<Entry> counts) {
  std::sort(counts.begin(), counts.end());
  AddressMultiset ms;
  ms.entries_.reserve(counts.size());
  for (const auto& [addr, n] : counts) {
    if (n == 0) throw ConfigError("address multiset counts must be >= 1");
    if (!ms.entries_.empty() && ms.entries_.back().first == addr) {
      ms.entries_.back().second += n;
    } else {
      ms.entries_.emplace_back(addr, n);
    }
    ms.total_ += n;
  }
  return ms;
}

AddressMultiset AddressMultiset::from_map(const std::unordered_map<Ipv4, std::uint64_t>& counts) {
  return from_counts(std::vector<Entry>(counts.begin(), counts.end()));
}

AddressMultiset AddressMultiset::truncated(TruncationDepth depth) const {
  // Truncation is monotone in the address, so equal prefixes stay adjacent.
  AddressMultiset out;
  out.total_ = total_;
  out.entries_.reserve(entries_.size());
  for (const auto& [addr, n] : entries_) {
    const Ipv4 key = truncate_address(addr, depth);
    if (!out.entries_.empty() && out.entries_.back().first == key) {
      out.entries_.back().second += n;
    } else {
      out.entries_.emplace_back(key, n);
    }
  }
  return out;
}

std::uint64_t unique_count(const AddressMultiset& ms) { return ms.entries().size(); }

double shannon_entropy(const AddressMultiset& ms) {
  if (ms.total_flows() == 0) return 0.0;
  const double total = static_cast<double>(ms.total_flows());
  double h = 0.0;
  for (const auto& [addr, n] : ms.entries()) {
    const double p = static_cast<double>(n) / total;
    h -= p * std::log2(p);
  }
  return h < 0.0 ? 0.0 : h;
}

double evaluate_metric(Metric metric, const AddressMultiset& ms) {
  return metric == Metric::unique_count ? static_cast<double>(unique_count(ms)) : shannon_entropy(ms);
}

std::vector<Ipv4> BinnedTrace::distinct_addresses(AddressView view) const {
  std::vector<Ipv4> all;
  for (const auto& bin : bins_) {
    for (const auto& [addr, n] : bin[view.index()].entries()) all.push_back(addr);
  }
  std::sort(all.begin(), all.end());
  all.erase(std::unique(all.begin(), all.end()), all.end());
  return all;
}

BinnedTraceBuilder::BinnedTraceBuilder(const PrefixTable& table, std::int64_t bin_seconds,
                                       std::optional<std::int64_t> epoch_start)
    : table_(&table), bin_seconds_(bin_seconds), epoch_start_(epoch_start) {
  if (bin_seconds <= 0) throw ConfigError("bin_seconds must be positive");
}

void BinnedTraceBuilder::add(const FlowRecord& flow) {
  if (!epoch_start_) epoch_start_ = align_to_bin(flow.start_time, bin_seconds_);
  const auto bin = static_cast<std::size_t>(bin_index(flow.start_time, bin_seconds_, *epoch_start_));
  ensure_bins(bin + 1);
  auto& slot = bins_[bin];
  const AddressView src{Direction::source, table_->classify(flow.src_addr)};
  const AddressView dst{Direction::destination, table_->classify(flow.dst_addr)};
  ++slot[src.index()][flow.src_addr];
  ++slot[dst.index()][flow.dst_addr];
  ++flow_count_;
}

void BinnedTraceBuilder::ensure_bins(std::size_t count) {
  if (bins_.size() < count) bins_.resize(count);
}

BinnedTrace BinnedTraceBuilder::build() {
  BinnedTrace trace;
  trace.epoch_start_ = epoch_start_.value_or(0);
  trace.bin_seconds_ = bin_seconds_;
  trace.flow_count_ = flow_count_;
  trace.bins_.resize(bins_.size());
  for (std::size_t b = 0; b < bins_.size(); ++b) {
    for (std::size_t v = 0; v < 4; ++v) {
      trace.bins_[b][v] = AddressMultiset::from_map(bins_[b][v]);
      Counts{}.swap(bins_[b][v]);
    }
  }
  bins_.clear();
  return trace;
}

BinnedTrace bin_trace(std::span<const FlowRecord> flows, const PrefixTable& table, const BinParams& params) {
  std::optional<std::int64_t> epoch = params.epoch_start;
  if (!epoch && !flows.empty()) {
    const auto earliest = std::min_element(flows.begin(), flows.end(), [](const auto& a, const auto& b) {
      return a.start_time < b.start_time;
    });
    epoch = align_to_bin(earliest->start_time, params.bin_seconds);
  }
  BinnedTraceBuilder builder(table, params.bin_seconds, epoch);
  for (const auto& flow : flows) builder.add(flow);
  if (params.bin_count) builder.ensure_bins(*params.bin_count);
  return builder.build();
}

MetricSeries compute_metric_series(const BinnedTrace& trace, Metric metric, AddressView view, TruncationDepth depth) {
  MetricSeries series{metric, view, depth, {}};
  series.values.reserve(trace.bin_count());
  for (std::size_t b = 0; b < trace.bin_count(); ++b) {
    const auto& ms = trace.multiset(b, view);
    series.values.push_back(depth.bits() == 0 ? evaluate_metric(metric, ms)
                                              : evaluate_metric(metric, ms.truncated(depth)));
  }
  return series;
}

MetricSeries compute_metric_series(std::span<const FlowRecord> flows, const BinParams& params,
                                   const PrefixTable& table, Metric metric, AddressView view, TruncationDepth depth) {
  return compute_metric_series(bin_trace(flows, table, params), metric, view, depth);
}

std::vector<PrefixStructureRow> prefix_structure(const BinnedTrace& trace, std::span<const TruncationDepth> depths) {
  std::vector<PrefixStructureRow> rows;
  for (const auto& view : kAllViews) {
    const auto addresses = trace.distinct_addresses(view);
    for (const auto depth : depths) {
      std::uint64_t count = 0;
      bool have_prev = false;
      Ipv4 prev = 0;
      for (Ipv4 a : addresses) {
        const Ipv4 key = truncate_address(a, depth);
        if (!have_prev || key != prev) ++count;
        prev = key;
        have_prev = true;
      }
      rows.push_back({view, depth, count});
    }
  }
  return rows;
}

std::vector<PrefixStructureRow> prefix_structure(std::span<const FlowRecord> flows, const PrefixTable& table,
                                                 std::span<const TruncationDepth> depths) {
  return prefix_structure(bin_trace(flows, table, BinParams{}), depths);
}

}  // namespace truncmap
