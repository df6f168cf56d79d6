#ifndef TRUNCMAP_GENERATOR_HPP
#define TRUNCMAP_GENERATOR_HPP

#include <cstdint>
#include <functional>
#include <span>
#include <string_view>
#include <vector>

#include "truncmap/flow.hpp"
#include "truncmap/prefix_table.hpp"

namespace truncmap {

enum class AnomalyKind { ddos, ddos_spoofed, scan, distributed_scan };

std::string_view to_string(AnomalyKind kind);
AnomalyKind parse_anomaly_kind(std::string_view text);

/// One injected event, active for bins [start_bin, end_bin].
///
/// - scan: one external source sweeps `target` sequentially.
/// - distributed_scan: `source_count` external sources share the sweep.
/// - ddos: `source_count` fixed external bots flood the single address `target`.
/// - ddos_spoofed: every flood flow carries a fresh random external source.
struct AnomalySpec {
  AnomalyKind kind = AnomalyKind::scan;
  std::int64_t start_bin = 0;
  std::int64_t end_bin = 0;
  std::uint64_t intensity = 0;  // flows per bin
  Prefix target;                // internal subnet (scans) or a /32 (ddos)
  std::uint32_t source_count = 1;
};

struct GeneratorConfig {
  std::int64_t duration_bins = 0;
  std::int64_t bin_seconds = 900;
  std::int64_t start_time = 1187481600;
  PrefixTable internal_table;
  double internal_activity = 0.105;  // active fraction of the assigned space
  std::uint64_t external_active_count = 100000;
  std::uint64_t baseline_flows_per_bin = 1000;
  double zipf_exponent = 1.2;
  double diurnal_amplitude = 0.3;
  std::int64_t diurnal_period_bins = 96;  // one day of 15-minute bins
  double inbound_fraction = 0.5;
  std::vector<AnomalySpec> anomalies;
  std::uint64_t seed = 1;

  /// Throws ConfigError describing the first violated constraint.
  void validate() const;
};

/// Per-bin labels: any bin covered by an anomaly is `attack`, all others `normal`.
std::vector<BinLabel> generator_labels(const GeneratorConfig& config);

/// Emits the trace bin by bin, flows within a bin in timestamp order.
/// Identical configs (including seed) give identical output.
void generate_trace(const GeneratorConfig& config, const std::function<void(const FlowRecord&)>& sink);

struct GeneratedTrace {
  std::vector<FlowRecord> flows;
  std::vector<BinLabel> labels;
};

GeneratedTrace generate_trace(const GeneratorConfig& config);

/// A ready-made scenario: scans, distributed scans and (spoofed) DDoS
/// events spread over the trace after a quiet lead-in, using the given
/// internal table. Placement and sizes are derived from `seed`.
GeneratorConfig default_scenario(const PrefixTable& internal_table, std::int64_t duration_bins, std::uint64_t seed);

}  // namespace truncmap

#endif  // TRUNCMAP_GENERATOR_HPP
