#include "truncmap/generator.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <unordered_set>

#include "truncmap/error.hpp"

namespace truncmap {

std::string_view to_string(AnomalyKind kind) {
  switch (kind) {
    case AnomalyKind::ddos: return "ddos";
    case AnomalyKind::ddos_spoofed: return "ddos_spoofed";
    case AnomalyKind::scan: return "scan";
    case AnomalyKind::distributed_scan: return "distributed_scan";
  }
  return "scan";
}

AnomalyKind parse_anomaly_kind(std::string_view text) {
  for (auto kind : {AnomalyKind::ddos, AnomalyKind::ddos_spoofed, AnomalyKind::scan, AnomalyKind::distributed_scan}) {
    if (text == to_string(kind)) return kind;
  }
  throw ConfigError("unknown anomaly kind '" + std::string(text) + "'");
}

namespace {

using Rng = std::mt19937_64;

const Prefix* containing_prefix(const PrefixTable& table, Ipv4 addr) {
  for (const auto& p : table.prefixes()) {
    if (p.contains(addr)) return &p;
  }
  return nullptr;
}

std::uint64_t active_pool_size(const GeneratorConfig& config) {
  return static_cast<std::uint64_t>(
      std::llround(config.internal_activity * static_cast<double>(config.internal_table.assigned_size())));
}

/// Rank-frequency sampler: P(rank k) proportional to k^-s.
class ZipfSampler {
 public:
  ZipfSampler(std::size_t n, double exponent) : cdf_(n) {
    double acc = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      acc += std::pow(static_cast<double>(k + 1), -exponent);
      cdf_[k] = acc;
    }
  }

  std::size_t operator()(Rng& rng) const {
    const double u = std::uniform_real_distribution<double>(0.0, cdf_.back())(rng);
    const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
    return std::min(static_cast<std::size_t>(it - cdf_.begin()), cdf_.size() - 1);
  }

 private:
  std::vector<double> cdf_;
};

std::vector<Ipv4> sample_internal_pool(const PrefixTable& table, std::uint64_t count, Rng& rng) {
  const std::uint64_t n = table.assigned_size();
  std::vector<Ipv4> pool;
  pool.reserve(count);
  if (count * 2 > n) {
    // Selection sampling: one pass over the space, exact count.
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uint64_t needed = count;
    for (std::uint64_t i = 0; i < n && needed > 0; ++i) {
      if (unit(rng) * static_cast<double>(n - i) < static_cast<double>(needed)) {
        pool.push_back(table.address_at(i));
        --needed;
      }
    }
  } else {
    std::unordered_set<std::uint64_t> taken;
    taken.reserve(count * 2);
    std::uniform_int_distribution<std::uint64_t> pick(0, n - 1);
    while (pool.size() < count) {
      const auto i = pick(rng);
      if (taken.insert(i).second) pool.push_back(table.address_at(i));
    }
  }
  std::shuffle(pool.begin(), pool.end(), rng);
  return pool;
}

Ipv4 random_external(const PrefixTable& table, Rng& rng) {
  std::uniform_int_distribution<std::uint32_t> any;
  while (true) {
    const Ipv4 a = any(rng);
    if (!table.contains(a)) return a;
  }
}

std::vector<Ipv4> sample_external_pool(const PrefixTable& table, std::uint64_t count, Rng& rng) {
  std::vector<Ipv4> pool;
  pool.reserve(count);
  std::unordered_set<Ipv4> taken;
  taken.reserve(count * 2);
  while (pool.size() < count) {
    const Ipv4 a = random_external(table, rng);
    if (taken.insert(a).second) pool.push_back(a);
  }
  return pool;
}

struct AnomalyState {
  const AnomalySpec* spec;
  std::vector<Ipv4> sources;
  std::uint64_t cursor = 0;
};

}  // namespace

void GeneratorConfig::validate() const {
  if (duration_bins <= 0) throw ConfigError("generator: duration_bins must be positive");
  if (bin_seconds <= 0) throw ConfigError("generator: bin_seconds must be positive");
  if (start_time < 0) throw ConfigError("generator: start_time must be non-negative");
  if (internal_table.empty()) throw ConfigError("generator: internal prefix table is empty");
  if (!(internal_activity > 0.0 && internal_activity <= 1.0)) {
    throw ConfigError("generator: internal_activity must be in (0, 1]");
  }
  if (active_pool_size(*this) < 1) {
    throw ConfigError("generator: internal_activity x assigned_size must be at least 1");
  }
  const std::uint64_t external_space = (std::uint64_t{1} << 32) - internal_table.assigned_size();
  if (external_active_count < 1 || external_active_count > external_space / 2) {
    throw ConfigError("generator: external_active_count must be in [1, half the external space]");
  }
  if (!(zipf_exponent > 0.0)) throw ConfigError("generator: zipf_exponent must be positive");
  if (!(diurnal_amplitude >= 0.0 && diurnal_amplitude < 1.0)) {
    throw ConfigError("generator: diurnal_amplitude must be in [0, 1)");
  }
  if (diurnal_period_bins <= 0) throw ConfigError("generator: diurnal_period_bins must be positive");
  if (!(inbound_fraction >= 0.0 && inbound_fraction <= 1.0)) {
    throw ConfigError("generator: inbound_fraction must be in [0, 1]");
  }
  for (std::size_t i = 0; i < anomalies.size(); ++i) {
    const auto& a = anomalies[i];
    const std::string tag = "generator: anomaly " + std::to_string(i) + ": ";
    if (a.start_bin < 0 || a.start_bin > a.end_bin || a.end_bin >= duration_bins) {
      throw ConfigError(tag + "requires 0 <= start_bin <= end_bin < duration_bins");
    }
    if (a.intensity < 1) throw ConfigError(tag + "intensity must be at least 1 flow per bin");
    if (a.source_count < 1) throw ConfigError(tag + "source_count must be at least 1");
    if (a.target.length < 0 || a.target.length > 32 || (a.target.base & ~prefix_mask(a.target.length)) != 0) {
      throw ConfigError(tag + "malformed target prefix");
    }
    const Prefix* home = containing_prefix(internal_table, a.target.base);
    if (home == nullptr || !home->contains(a.target.last())) {
      throw ConfigError(tag + "target " + format_prefix(a.target) + " is not inside the internal table");
    }
    if ((a.kind == AnomalyKind::ddos || a.kind == AnomalyKind::ddos_spoofed) && a.target.length != 32) {
      throw ConfigError(tag + "ddos target must be a single address (/32)");
    }
  }
}

std::vector<BinLabel> generator_labels(const GeneratorConfig& config) {
  std::vector<BinLabel> labels;
  labels.reserve(static_cast<std::size_t>(std::max<std::int64_t>(config.duration_bins, 0)));
  for (std::int64_t b = 0; b < config.duration_bins; ++b) labels.push_back({b, Label::normal});
  for (const auto& a : config.anomalies) {
    for (std::int64_t b = std::max<std::int64_t>(a.start_bin, 0); b <= a.end_bin && b < config.duration_bins; ++b) {
      labels[static_cast<std::size_t>(b)].label = Label::attack;
    }
  }
  return labels;
}

void generate_trace(const GeneratorConfig& config, const std::function<void(const FlowRecord&)>& sink) {
  config.validate();
  Rng rng(config.seed);
  const auto& table = config.internal_table;

  const auto internal = sample_internal_pool(table, active_pool_size(config), rng);
  const auto external = sample_external_pool(table, config.external_active_count, rng);
  const ZipfSampler pick_internal(internal.size(), config.zipf_exponent);
  const ZipfSampler pick_external(external.size(), config.zipf_exponent);

  // Every active internal host shows up at least once: one outbound flow in a
  // random bin. The heavy-tailed rank traffic comes on top.
  const auto bins = static_cast<std::size_t>(config.duration_bins);
  std::vector<std::vector<std::uint32_t>> presence(bins);
  {
    std::uniform_int_distribution<std::size_t> pick_bin(0, bins - 1);
    for (std::uint32_t h = 0; h < internal.size(); ++h) presence[pick_bin(rng)].push_back(h);
  }

  std::vector<AnomalyState> anomalies;
  for (const auto& spec : config.anomalies) {
    AnomalyState state{&spec, {}, 0};
    switch (spec.kind) {
      case AnomalyKind::scan:
        state.sources.push_back(random_external(table, rng));
        break;
      case AnomalyKind::distributed_scan:
      case AnomalyKind::ddos:
        for (std::uint32_t i = 0; i < spec.source_count; ++i) state.sources.push_back(random_external(table, rng));
        break;
      case AnomalyKind::ddos_spoofed:
        break;
    }
    state.cursor = std::uniform_int_distribution<std::uint64_t>(0, spec.target.size() - 1)(rng);
    anomalies.push_back(std::move(state));
  }

  std::uniform_int_distribution<std::int64_t> offset(0, config.bin_seconds - 1);
  std::bernoulli_distribution inbound(config.inbound_fraction);
  std::geometric_distribution<std::uint64_t> extra_packets(0.3);
  std::uniform_int_distribution<std::uint64_t> packet_size(40, 1500);

  auto volume = [&](FlowRecord& f) {
    f.packets = 1 + extra_packets(rng);
    f.bytes = f.packets * packet_size(rng);
  };

  std::vector<FlowRecord> bin_flows;
  for (std::size_t b = 0; b < bins; ++b) {
    bin_flows.clear();
    const std::int64_t bin_start = config.start_time + static_cast<std::int64_t>(b) * config.bin_seconds;
    const double phase = 2.0 * std::numbers::pi * static_cast<double>(b) / static_cast<double>(config.diurnal_period_bins);
    const double level =
        static_cast<double>(config.baseline_flows_per_bin) * (1.0 + config.diurnal_amplitude * std::sin(phase));
    const std::uint64_t n = level > 0.0 ? std::poisson_distribution<std::uint64_t>(level)(rng) : 0;

    for (std::uint64_t i = 0; i < n; ++i) {
      FlowRecord f;
      f.start_time = bin_start + offset(rng);
      const Ipv4 in = internal[pick_internal(rng)];
      const Ipv4 ex = external[pick_external(rng)];
      if (inbound(rng)) {
        f.src_addr = ex;
        f.dst_addr = in;
      } else {
        f.src_addr = in;
        f.dst_addr = ex;
      }
      volume(f);
      bin_flows.push_back(f);
    }
    for (std::uint32_t h : presence[b]) {
      FlowRecord f;
      f.start_time = bin_start + offset(rng);
      f.src_addr = internal[h];
      f.dst_addr = external[pick_external(rng)];
      volume(f);
      bin_flows.push_back(f);
    }

    for (auto& state : anomalies) {
      const auto& spec = *state.spec;
      const auto bi = static_cast<std::int64_t>(b);
      if (bi < spec.start_bin || bi > spec.end_bin) continue;
      const bool is_scan = spec.kind == AnomalyKind::scan || spec.kind == AnomalyKind::distributed_scan;
      for (std::uint64_t i = 0; i < spec.intensity; ++i) {
        FlowRecord f;
        f.start_time = bin_start + offset(rng);
        if (is_scan) {
          f.src_addr = state.sources[i % state.sources.size()];
          f.dst_addr = spec.target.base + static_cast<Ipv4>(state.cursor);
          state.cursor = (state.cursor + 1) % spec.target.size();
          f.packets = 1;
          f.bytes = 40;
        } else {
          f.src_addr = spec.kind == AnomalyKind::ddos ? state.sources[i % state.sources.size()]
                                                      : random_external(table, rng);
          f.dst_addr = spec.target.base;
          f.packets = 1 + i % 3;
          f.bytes = f.packets * 40;
        }
        bin_flows.push_back(f);
      }
    }

    std::stable_sort(bin_flows.begin(), bin_flows.end(),
                     [](const FlowRecord& a, const FlowRecord& b) { return a.start_time < b.start_time; });
    for (const auto& f : bin_flows) sink(f);
  }
}

GeneratedTrace generate_trace(const GeneratorConfig& config) {
  GeneratedTrace trace;
  generate_trace(config, [&](const FlowRecord& f) { trace.flows.push_back(f); });
  trace.labels = generator_labels(config);
  return trace;
}

GeneratorConfig default_scenario(const PrefixTable& internal_table, std::int64_t duration_bins, std::uint64_t seed) {
  GeneratorConfig config;
  config.internal_table = internal_table;
  config.duration_bins = duration_bins;
  config.seed = seed;
  if (internal_table.empty() || duration_bins <= 0) return config;

  Rng rng(seed ^ 0x5DEECE66DULL);
  auto uniform = [&](std::int64_t lo, std::int64_t hi) { return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng); };
  auto random_internal = [&] {
    return internal_table.address_at(
        std::uniform_int_distribution<std::uint64_t>(0, internal_table.assigned_size() - 1)(rng));
  };

  static constexpr AnomalyKind kCycle[] = {AnomalyKind::scan, AnomalyKind::distributed_scan, AnomalyKind::scan,
                                           AnomalyKind::scan, AnomalyKind::ddos,             AnomalyKind::scan,
                                           AnomalyKind::distributed_scan, AnomalyKind::scan};
  std::size_t event = 0;
  bool spoofed_next = false;
  for (std::int64_t start = std::min<std::int64_t>(48, duration_bins); ;) {
    AnomalySpec spec;
    spec.kind = kCycle[event % std::size(kCycle)];
    // Floods are short bursts; scans linger for up to 90 minutes.
    const std::int64_t length = spec.kind == AnomalyKind::ddos ? uniform(1, 3) : uniform(1, 6);
    if (start + length >= duration_bins) break;
    spec.start_bin = start;
    spec.end_bin = start + length - 1;
    const Ipv4 anchor = random_internal();
    if (spec.kind == AnomalyKind::ddos) {
      if (spoofed_next) spec.kind = AnomalyKind::ddos_spoofed;
      spoofed_next = !spoofed_next;
      spec.intensity = static_cast<std::uint64_t>(uniform(1500, 4000));
      spec.source_count = static_cast<std::uint32_t>(uniform(50, 500));
      spec.target = Prefix{anchor, 32};
    } else {
      const Prefix* home = containing_prefix(internal_table, anchor);
      const int length_bits = std::max(16, home->length);
      spec.target = Prefix{anchor & prefix_mask(length_bits), length_bits};
      spec.intensity = static_cast<std::uint64_t>(uniform(150, 400));
      spec.source_count = spec.kind == AnomalyKind::distributed_scan ? static_cast<std::uint32_t>(uniform(20, 200)) : 1;
    }
    config.anomalies.push_back(spec);
    ++event;
    start = spec.end_bin + 1 + uniform(40, 80);
  }
  return config;
}

}  // namespace truncmap
