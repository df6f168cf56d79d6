#include "cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "manifest.hpp"
#include "output_set.hpp"
#include "truncmap/anonymizer.hpp"
#include "truncmap/detector.hpp"
#include "truncmap/error.hpp"
#include "truncmap/evaluation.hpp"
#include "truncmap/export.hpp"
#include "truncmap/flow.hpp"
#include "truncmap/generator.hpp"
#include "truncmap/metrics.hpp"
#include "truncmap/prefix_table.hpp"
#include "truncmap/risk.hpp"
#include "truncmap/rumap.hpp"

namespace truncmap::cli {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

// ---------------------------------------------------------------------------
// Option holders

struct BinningOptions {
  std::int64_t bin_seconds = 900;
  std::optional<std::int64_t> epoch_start;
};

struct DetectorOptions {
  double train_frac = 0.3;
  double q_ratio = 0.1;
  std::size_t warmup = 20;

  DetectorConfig config() const { return DetectorConfig{train_frac, q_ratio, warmup}; }
};

struct Options {
  std::string input;
  std::string output;
  std::string prefix_table;
  std::string labels;
  std::string manifest;
  std::string bits;
  std::string metric;
  std::string view;
  std::uint64_t seed = 1;
  BinningOptions binning;
  DetectorOptions detector;

  // generate
  std::string config_path;
  std::int64_t bins = 2000;
  double activity = 0.105;
  std::uint64_t external_hosts = 100000;
  std::uint64_t flows_per_bin = 1000;
  double zipf = 1.2;
  bool no_anomalies = false;

  // metrics
  std::string structure;

  // detect
  std::optional<double> threshold;
  std::string alarms;

  // evaluate
  std::string json_path;
  std::string roc_dir;

  // risk
  std::optional<double> activity_override;  // --A
  bool analytic = false;
  bool empirical = false;
  std::string weighting = "prefix";
  std::string detail;

  // rumap
  std::optional<double> a_int;
  std::optional<double> a_ext;
  double utility_min = 0.85;
  double risk_max = 0.05;
};

// ---------------------------------------------------------------------------
// Helpers

void require_input(const std::string& path, const char* flag) {
  if (path.empty()) throw ConfigError(std::string(flag) + " is required");
  if (!fs::is_regular_file(path)) throw ConfigError(std::string(flag) + ": no such file '" + path + "'");
}

void require_output(const std::string& path, const char* flag) {
  if (path.empty()) throw ConfigError(std::string(flag) + " is required");
  const auto parent = fs::path(path).parent_path();
  if (!parent.empty() && !fs::is_directory(parent)) {
    throw ConfigError(std::string(flag) + ": directory '" + parent.string() + "' does not exist");
  }
}

template <typename T, typename Parse>
std::vector<T> parse_list(const std::string& text, Parse parse) {
  std::vector<T> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto comma = text.find(',', start);
    const auto item = text.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    if (!item.empty()) out.push_back(parse(item));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

std::vector<Metric> metrics_or_all(const std::string& text) {
  if (text.empty()) return {kAllMetrics.begin(), kAllMetrics.end()};
  return parse_list<Metric>(text, [](const std::string& s) { return parse_metric(s); });
}

std::vector<AddressView> views_or_all(const std::string& text) {
  if (text.empty()) return {kAllViews.begin(), kAllViews.end()};
  return parse_list<AddressView>(text, [](const std::string& s) { return parse_view(s); });
}

std::vector<TruncationDepth> depths_or(const std::string& text, std::vector<TruncationDepth> fallback) {
  return text.empty() ? fallback : parse_depths(text);
}

TruncationDepth single_depth(const std::string& text) {
  const auto depths = depths_or(text, {TruncationDepth{0}});
  if (depths.size() != 1) throw ConfigError("--bits: expected a single value");
  return depths.front();
}

json depths_json(std::span<const TruncationDepth> depths) {
  auto arr = json::array();
  for (auto d : depths) arr.push_back(d.bits());
  return arr;
}

json detector_json(const DetectorOptions& d) {
  return {{"train_frac", d.train_frac}, {"q_ratio", d.q_ratio}, {"warmup_bins", d.warmup}};
}

BinnedTrace load_binned(const std::string& path, const PrefixTable& table, const BinningOptions& binning,
                        std::size_t min_bins = 0) {
  BinnedTraceBuilder builder(table, binning.bin_seconds, binning.epoch_start);
  for_each_flow(path, [&](const FlowRecord& f) { builder.add(f); });
  builder.ensure_bins(min_bins);
  return builder.build();
}

std::size_t label_extent(std::span<const BinLabel> labels) {
  std::int64_t max_bin = -1;
  for (const auto& l : labels) max_bin = std::max(max_bin, l.bin_index);
  return static_cast<std::size_t>(max_bin + 1);
}

/// Finalizes a run: moves staged outputs into place and writes the manifest.
void finish(OutputSet& outputs, Manifest manifest, const std::string& manifest_path, std::ostream& out) {
  outputs.commit();
  manifest.outputs = outputs.paths();
  std::ofstream m(manifest_path, std::ios::binary | std::ios::trunc);
  if (!m) throw ConfigError("cannot write manifest '" + manifest_path + "'");
  m << manifest.to_json().dump(2) << '\n';
  for (const auto& p : manifest.outputs) out << "wrote " << p.generic_string() << '\n';
}

std::string default_manifest(const std::string& output, bool is_dir) {
  return is_dir ? (fs::path(output) / "manifest.json").string() : output + ".manifest.json";
}

// ---------------------------------------------------------------------------
// generate

AnomalySpec anomaly_from_json(const json& j) {
  AnomalySpec a;
  a.kind = parse_anomaly_kind(j.at("kind").get<std::string>());
  a.start_bin = j.at("start_bin").get<std::int64_t>();
  a.end_bin = j.at("end_bin").get<std::int64_t>();
  a.intensity = j.at("intensity").get<std::uint64_t>();
  a.target = parse_prefix(j.at("target").get<std::string>());
  a.source_count = j.value("source_count", 1u);
  return a;
}

GeneratorConfig generator_config(const Options& o, const PrefixTable& table) {
  GeneratorConfig config = default_scenario(table, o.bins, o.seed);
  config.bin_seconds = o.binning.bin_seconds;
  config.internal_activity = o.activity;
  config.external_active_count = o.external_hosts;
  config.baseline_flows_per_bin = o.flows_per_bin;
  config.zipf_exponent = o.zipf;
  if (o.no_anomalies) config.anomalies.clear();
  if (o.config_path.empty()) return config;

  std::ifstream in(o.config_path);
  json j;
  try {
    j = json::parse(in);
    config.duration_bins = j.value("duration_bins", config.duration_bins);
    config.bin_seconds = j.value("bin_seconds", config.bin_seconds);
    config.start_time = j.value("start_time", config.start_time);
    config.internal_activity = j.value("internal_activity", config.internal_activity);
    config.external_active_count = j.value("external_active_count", config.external_active_count);
    config.baseline_flows_per_bin = j.value("baseline_flows_per_bin", config.baseline_flows_per_bin);
    config.zipf_exponent = j.value("zipf_exponent", config.zipf_exponent);
    config.diurnal_amplitude = j.value("diurnal_amplitude", config.diurnal_amplitude);
    config.diurnal_period_bins = j.value("diurnal_period_bins", config.diurnal_period_bins);
    config.inbound_fraction = j.value("inbound_fraction", config.inbound_fraction);
    config.seed = j.value("seed", config.seed);
    if (j.contains("anomalies")) {
      config.anomalies.clear();
      for (const auto& a : j.at("anomalies")) config.anomalies.push_back(anomaly_from_json(a));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("generator config '" + o.config_path + "': " + e.what());
  } catch (const DataError& e) {
    throw ConfigError("generator config '" + o.config_path + "': " + e.what());
  }
  return config;
}

int cmd_generate(const Options& o, std::ostream& out) {
  require_input(o.prefix_table, "--prefix-table");
  if (!o.config_path.empty()) require_input(o.config_path, "--config");
  require_output(o.output, "--output");
  if (!o.labels.empty()) require_output(o.labels, "--labels");
  const auto table = PrefixTable::load(o.prefix_table);
  const auto config = generator_config(o, table);
  config.validate();

  OutputSet outputs;
  auto& trace = outputs.open(o.output);
  generate_trace(config, [&](const FlowRecord& f) { trace << format_flow_csv(f) << '\n'; });
  if (!o.labels.empty()) {
    const auto labels = generator_labels(config);
    write_labels(outputs.open(o.labels), labels);
  }

  Manifest manifest;
  manifest.subcommand = "generate";
  manifest.inputs = {o.prefix_table};
  if (!o.config_path.empty()) manifest.inputs.push_back(o.config_path);
  auto anomalies = json::array();
  for (const auto& a : config.anomalies) {
    anomalies.push_back({{"kind", to_string(a.kind)},
                         {"start_bin", a.start_bin},
                         {"end_bin", a.end_bin},
                         {"intensity", a.intensity},
                         {"target", format_prefix(a.target)},
                         {"source_count", a.source_count}});
  }
  manifest.parameters = {{"seed", config.seed},
                         {"duration_bins", config.duration_bins},
                         {"bin_seconds", config.bin_seconds},
                         {"start_time", config.start_time},
                         {"internal_activity", config.internal_activity},
                         {"external_active_count", config.external_active_count},
                         {"baseline_flows_per_bin", config.baseline_flows_per_bin},
                         {"zipf_exponent", config.zipf_exponent},
                         {"diurnal_amplitude", config.diurnal_amplitude},
                         {"diurnal_period_bins", config.diurnal_period_bins},
                         {"inbound_fraction", config.inbound_fraction},
                         {"anomalies", std::move(anomalies)}};
  finish(outputs, std::move(manifest), o.manifest.empty() ? default_manifest(o.output, false) : o.manifest, out);
  return kSuccess;
}

// ---------------------------------------------------------------------------
// anonymize

int cmd_anonymize(const Options& o, std::ostream& out) {
  require_input(o.input, "--input");
  require_output(o.output, "--output");
  const auto depth = single_depth(o.bits);

  OutputSet outputs;
  auto& dst = outputs.open(o.output);
  for_each_flow(o.input, [&](const FlowRecord& f) { dst << format_flow_csv(anonymize_flow(f, depth)) << '\n'; });

  Manifest manifest;
  manifest.subcommand = "anonymize";
  manifest.inputs = {o.input};
  manifest.parameters = {{"bits", depth.bits()}};
  finish(outputs, std::move(manifest), o.manifest.empty() ? default_manifest(o.output, false) : o.manifest, out);
  return kSuccess;
}

// ---------------------------------------------------------------------------
// metrics

int cmd_metrics(const Options& o, std::ostream& out) {
  require_input(o.input, "--input");
  require_input(o.prefix_table, "--prefix-table");
  require_output(o.output, "--output");
  if (!o.structure.empty()) require_output(o.structure, "--structure");
  const auto depths = depths_or(o.bits, {TruncationDepth{0}});
  const auto metrics = metrics_or_all(o.metric);
  const auto views = views_or_all(o.view);
  const auto table = PrefixTable::load(o.prefix_table);
  const auto trace = load_binned(o.input, table, o.binning);

  OutputSet outputs;
  outputs.ensure_directory(o.output);
  for (auto metric : metrics) {
    for (const auto& view : views) {
      for (auto depth : depths) {
        const auto name = std::string(to_string(metric)) + "_" + to_string(view) + "_x" +
                          std::to_string(depth.bits()) + ".csv";
        write_series_csv(outputs.open(fs::path(o.output) / name), compute_metric_series(trace, metric, view, depth));
      }
    }
  }
  if (!o.structure.empty()) write_prefix_structure_csv(outputs.open(o.structure), prefix_structure(trace, depths));

  Manifest manifest;
  manifest.subcommand = "metrics";
  manifest.inputs = {o.input, o.prefix_table};
  manifest.parameters = {{"bits", depths_json(depths)},
                         {"metric", o.metric.empty() ? "count,entropy" : o.metric},
                         {"view", o.view.empty() ? "all" : o.view},
                         {"bin_seconds", o.binning.bin_seconds},
                         {"epoch_start", trace.epoch_start()},
                         {"bins", trace.bin_count()}};
  finish(outputs, std::move(manifest), o.manifest.empty() ? default_manifest(o.output, true) : o.manifest, out);
  return kSuccess;
}

// ---------------------------------------------------------------------------
// detect

int cmd_detect(const Options& o, std::ostream& out) {
  require_input(o.input, "--input");
  require_input(o.prefix_table, "--prefix-table");
  if (!o.labels.empty()) require_input(o.labels, "--labels");
  require_output(o.output, "--output");
  if (!o.alarms.empty()) require_output(o.alarms, "--alarms");
  if (!o.alarms.empty() && !o.threshold) throw ConfigError("--alarms requires --threshold");
  const auto depth = single_depth(o.bits);
  const auto metric = parse_metric(o.metric.empty() ? "entropy" : o.metric);
  const auto view = parse_view(o.view.empty() ? "dst_int" : o.view);
  const auto table = PrefixTable::load(o.prefix_table);
  const auto bin_labels = o.labels.empty() ? std::vector<BinLabel>{} : read_labels(o.labels);
  const auto trace = load_binned(o.input, table, o.binning, label_extent(bin_labels));

  // Without labels every bin is eligible for training.
  std::vector<Label> labels(trace.bin_count(), Label::normal);
  if (!bin_labels.empty()) labels = label_vector(bin_labels, trace.bin_count());

  const auto series = compute_metric_series(trace, metric, view, depth);
  const auto params = fit_kalman(series.values, training_mask(labels, o.detector.train_frac), o.detector.q_ratio);
  const auto residuals = kalman_residuals(series.values, params, o.detector.warmup);

  OutputSet outputs;
  write_residuals_csv(outputs.open(o.output), residuals);
  std::size_t alarm_count = 0;
  if (o.threshold) {
    const auto flags = detect(residuals, *o.threshold);
    alarm_count = static_cast<std::size_t>(std::count(flags.begin(), flags.end(), true));
    if (!o.alarms.empty()) write_alarms_csv(outputs.open(o.alarms), residuals, flags);
  }

  Manifest manifest;
  manifest.subcommand = "detect";
  manifest.inputs = {o.input, o.prefix_table};
  if (!o.labels.empty()) manifest.inputs.push_back(o.labels);
  manifest.parameters = {{"metric", to_string(metric)},
                         {"view", to_string(view)},
                         {"bits", depth.bits()},
                         {"bin_seconds", o.binning.bin_seconds},
                         {"detector", detector_json(o.detector)},
                         {"fitted",
                          {{"ar_coefficient", params.ar_coefficient},
                           {"process_noise", params.process_noise},
                           {"measurement_noise", params.measurement_noise},
                           {"initial_state", params.initial_state},
                           {"initial_variance", params.initial_variance},
                           {"level", params.level}}}};
  if (o.threshold) manifest.parameters["threshold"] = *o.threshold;
  finish(outputs, std::move(manifest), o.manifest.empty() ? default_manifest(o.output, false) : o.manifest, out);
  if (o.threshold) out << alarm_count << " alarms above threshold " << format_double(*o.threshold) << '\n';
  return kSuccess;
}

// ---------------------------------------------------------------------------
// evaluate

int cmd_evaluate(const Options& o, std::ostream& out) {
  require_input(o.input, "--input");
  require_input(o.prefix_table, "--prefix-table");
  require_input(o.labels, "--labels");
  require_output(o.output, "--output");
  if (!o.json_path.empty()) require_output(o.json_path, "--json");
  const auto depths = depths_or(o.bits, parse_depths("0,4,8,12,16,20"));
  const auto metrics = metrics_or_all(o.metric);
  const auto views = views_or_all(o.view);
  const auto table = PrefixTable::load(o.prefix_table);
  const auto bin_labels = read_labels(o.labels);
  const auto trace = load_binned(o.input, table, o.binning, label_extent(bin_labels));
  const auto labels = label_vector(bin_labels, trace.bin_count());

  const auto utility = utility_table(trace, labels, depths, metrics, views, o.detector.config());

  OutputSet outputs;
  write_utility_csv(outputs.open(o.output), utility);
  if (!o.json_path.empty()) outputs.open(o.json_path) << utility_json(utility).dump(2) << '\n';
  if (!o.roc_dir.empty()) {
    outputs.ensure_directory(o.roc_dir);
    for (const auto& cell : utility.cells) {
      if (!cell.auc) continue;
      const auto name = "roc_" + std::string(to_string(cell.metric)) + "_" + to_string(cell.view) + "_x" +
                        std::to_string(cell.depth.bits()) + ".csv";
      write_roc_csv(outputs.open(fs::path(o.roc_dir) / name), cell.roc);
    }
  }
  for (const auto& cell : utility.cells) {
    if (!cell.auc) {
      out << "absent: " << to_string(cell.metric) << ' ' << to_string(cell.view) << " x=" << cell.depth.bits()
          << ": " << cell.note << '\n';
    }
  }

  Manifest manifest;
  manifest.subcommand = "evaluate";
  manifest.inputs = {o.input, o.prefix_table, o.labels};
  manifest.parameters = {{"bits", depths_json(depths)},
                         {"metric", o.metric.empty() ? "count,entropy" : o.metric},
                         {"view", o.view.empty() ? "all" : o.view},
                         {"bin_seconds", o.binning.bin_seconds},
                         {"detector", detector_json(o.detector)}};
  finish(outputs, std::move(manifest), o.manifest.empty() ? default_manifest(o.output, false) : o.manifest, out);
  return kSuccess;
}

// ---------------------------------------------------------------------------
// risk

PcgWeighting parse_weighting(const std::string& text) {
  if (text == "prefix") return PcgWeighting::per_prefix;
  if (text == "host") return PcgWeighting::per_host;
  throw ConfigError("--weighting must be 'prefix' or 'host'");
}

/// Activity model for a view's address set: internal sets are measured
/// against the prefix table, external ones against the full IPv4 space.
ActivityModel model_for(const AddressSet& set, Domain domain, const PrefixTable& table) {
  if (set.empty()) throw DataError("no addresses observed for the requested view");
  return domain == Domain::internal ? activity_fraction(set, table) : external_activity_fraction(set.size());
}

int cmd_risk(const Options& o, std::ostream& out) {
  const bool have_trace = !o.input.empty();
  const bool want_empirical = o.empirical || (!o.analytic && have_trace);
  const bool want_analytic = o.analytic || !o.empirical;
  if (want_empirical && !have_trace) throw ConfigError("--empirical requires --input and --prefix-table");
  if (have_trace) {
    require_input(o.input, "--input");
    require_input(o.prefix_table, "--prefix-table");
  }
  if (want_analytic && !o.activity_override && !have_trace) {
    throw ConfigError("--analytic needs --A or a trace (--input, --prefix-table) to measure A from");
  }
  require_output(o.output, "--output");
  if (!o.detail.empty()) {
    require_output(o.detail, "--detail");
    if (!want_empirical) throw ConfigError("--detail requires the empirical risk (--empirical with --input)");
  }
  const auto depths = depths_or(o.bits, parse_depths("0..32"));
  const auto view = parse_view(o.view.empty() ? "src_int" : o.view);
  const auto weighting = parse_weighting(o.weighting);

  std::optional<AddressSet> originals;
  std::optional<ActivityModel> model;
  if (o.activity_override) model = ActivityModel::from_fraction(*o.activity_override);
  if (have_trace) {
    const auto table = PrefixTable::load(o.prefix_table);
    const auto trace = load_binned(o.input, table, o.binning);
    originals = AddressSet(trace.distinct_addresses(view));
    if (!model) model = model_for(*originals, view.domain, table);
  }

  std::vector<RiskRow> rows;
  std::vector<RiskProfile> profiles;
  for (auto depth : depths) {
    RiskRow row{depth, std::nullopt, std::nullopt};
    if (want_empirical) {
      auto profile = risk_profile(*originals, depth, weighting);
      row.pcg_empirical = profile.pcg;
      if (!o.detail.empty()) profiles.push_back(std::move(profile));
    }
    if (want_analytic) row.pcg_analytic = analytic_pcg(depth, *model);
    rows.push_back(row);
  }

  OutputSet outputs;
  write_risk_csv(outputs.open(o.output), rows);
  if (!o.detail.empty()) write_risk_detail_csv(outputs.open(o.detail), profiles);

  Manifest manifest;
  manifest.subcommand = "risk";
  if (have_trace) manifest.inputs = {o.input, o.prefix_table};
  manifest.parameters = {{"bits", depths_json(depths)},
                         {"analytic", want_analytic},
                         {"empirical", want_empirical},
                         {"view", to_string(view)},
                         {"weighting", o.weighting}};
  if (model) manifest.parameters["A"] = model->activity;
  if (originals) manifest.parameters["address_count"] = originals->size();
  finish(outputs, std::move(manifest), o.manifest.empty() ? default_manifest(o.output, false) : o.manifest, out);
  return kSuccess;
}

// ---------------------------------------------------------------------------
// rumap

int cmd_rumap(const Options& o, std::ostream& out) {
  require_input(o.input, "--input");
  require_input(o.prefix_table, "--prefix-table");
  require_input(o.labels, "--labels");
  require_output(o.output, "--output");
  const auto depths = depths_or(o.bits, default_ru_depths());
  const auto metrics = metrics_or_all(o.metric);
  const auto views = views_or_all(o.view);
  const auto table = PrefixTable::load(o.prefix_table);
  const auto bin_labels = read_labels(o.labels);
  const auto trace = load_binned(o.input, table, o.binning, label_extent(bin_labels));
  const auto labels = label_vector(bin_labels, trace.bin_count());

  const auto utility = utility_table(trace, labels, depths, metrics, views, o.detector.config());

  // Internal risk is measured on the active hosts (internal sources); the
  // external population is every external address seen in either direction.
  AddressSet internal_hosts(trace.distinct_addresses({Direction::source, Domain::internal}));
  std::vector<Ipv4> ext = trace.distinct_addresses({Direction::source, Domain::external});
  const auto ext_dst = trace.distinct_addresses({Direction::destination, Domain::external});
  ext.insert(ext.end(), ext_dst.begin(), ext_dst.end());
  AddressSet external_hosts(std::move(ext));

  RiskModels models;
  models.internal = o.a_int ? ActivityModel::from_fraction(*o.a_int, table.assigned_size())
                            : model_for(internal_hosts, Domain::internal, table);
  models.external = o.a_ext ? ActivityModel::from_fraction(*o.a_ext, std::uint64_t{1} << 32)
                            : model_for(external_hosts, Domain::external, table);
  if (o.empirical) {
    models.internal_addresses = std::move(internal_hosts);
    models.external_addresses = std::move(external_hosts);
  }

  const auto map = ru_points(utility, models, depths);
  const auto best = best_tradeoff(map.points, o.utility_min, o.risk_max);

  OutputSet outputs;
  outputs.ensure_directory(o.output);
  const fs::path dir(o.output);
  write_rumap_csv(outputs.open(dir / "rumap.csv"), map.points);
  auto doc = rumap_json(map, models, best);
  doc["thresholds"] = {{"utility_min", o.utility_min}, {"risk_max", o.risk_max}};
  outputs.open(dir / "rumap.json") << doc.dump(2) << '\n';
  write_utility_csv(outputs.open(dir / "utility.csv"), utility);
  outputs.open(dir / "utility.json") << utility_json(utility).dump(2) << '\n';

  for (const auto& p : best) {
    out << "best: " << to_string(p.metric) << ' ' << to_string(p.view) << " x=" << p.depth.bits()
        << " utility=" << format_double(p.utility) << " risk=" << format_double(p.risk) << '\n';
  }

  Manifest manifest;
  manifest.subcommand = "rumap";
  manifest.inputs = {o.input, o.prefix_table, o.labels};
  manifest.parameters = {{"bits", depths_json(depths)},
                         {"metric", o.metric.empty() ? "count,entropy" : o.metric},
                         {"view", o.view.empty() ? "all" : o.view},
                         {"bin_seconds", o.binning.bin_seconds},
                         {"seed", o.seed},
                         {"detector", detector_json(o.detector)},
                         {"A_internal", models.internal.activity},
                         {"A_external", models.external.activity},
                         {"risk_source", o.empirical ? "empirical" : "analytic"},
                         {"utility_min", o.utility_min},
                         {"risk_max", o.risk_max}};
  finish(outputs, std::move(manifest), o.manifest.empty() ? default_manifest(o.output, true) : o.manifest, out);
  return kSuccess;
}

// ---------------------------------------------------------------------------
// Parser wiring

void add_binning(CLI::App* cmd, Options& o) {
  cmd->add_option("--bin-seconds", o.binning.bin_seconds, "Bin width in seconds")->check(CLI::PositiveNumber);
  cmd->add_option("--epoch-start", o.binning.epoch_start,
                  "Start of bin 0 (default: first flow rounded down to a bin boundary)");
}

void add_detector(CLI::App* cmd, Options& o) {
  cmd->add_option("--train-frac", o.detector.train_frac, "Leading fraction of bins used for training");
  cmd->add_option("--q-ratio", o.detector.q_ratio, "Process noise as a multiple of measurement noise");
  cmd->add_option("--warmup", o.detector.warmup, "Bins dropped before scoring residuals");
}

void add_manifest(CLI::App* cmd, Options& o) {
  cmd->add_option("--manifest", o.manifest, "Manifest path (default next to the output)");
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"IP truncation risk-utility toolkit"};
  app.require_subcommand(1);
  Options o;

  auto* gen = app.add_subcommand("generate", "Write a synthetic labeled flow trace");
  gen->add_option("--output", o.output, "Flow CSV to write");
  gen->add_option("--labels", o.labels, "Label CSV to write");
  gen->add_option("--prefix-table", o.prefix_table, "Internal prefix table");
  gen->add_option("--config", o.config_path, "JSON generator config (overrides flags)");
  gen->add_option("--bins", o.bins, "Number of bins");
  gen->add_option("--seed", o.seed, "Random seed");
  gen->add_option("--activity", o.activity, "Active fraction of the internal space");
  gen->add_option("--external-hosts", o.external_hosts, "Size of the external host pool");
  gen->add_option("--flows-per-bin", o.flows_per_bin, "Mean baseline flows per bin");
  gen->add_option("--zipf", o.zipf, "Zipf exponent of the flows-per-host distribution");
  gen->add_flag("--no-anomalies", o.no_anomalies, "Generate baseline traffic only");
  gen->add_option("--bin-seconds", o.binning.bin_seconds, "Bin width in seconds")->check(CLI::PositiveNumber);
  add_manifest(gen, o);

  auto* anon = app.add_subcommand("anonymize", "Truncate every address in a flow trace");
  anon->add_option("--input", o.input, "Flow CSV to read");
  anon->add_option("--output", o.output, "Flow CSV to write");
  anon->add_option("--bits", o.bits, "Truncated bits (0..32)")->required();
  add_manifest(anon, o);

  auto* met = app.add_subcommand("metrics", "Per-bin count/entropy series and prefix structure");
  met->add_option("--input", o.input, "Flow CSV");
  met->add_option("--prefix-table", o.prefix_table, "Internal prefix table");
  met->add_option("--output", o.output, "Directory for series CSVs");
  met->add_option("--bits", o.bits, "Depths: value, list or a..b range");
  met->add_option("--metric", o.metric, "count and/or entropy");
  met->add_option("--view", o.view, "src_int, src_ext, dst_int, dst_ext (comma list)");
  met->add_option("--structure", o.structure, "Also write the prefix structure CSV here");
  add_binning(met, o);
  add_manifest(met, o);

  auto* det = app.add_subcommand("detect", "Kalman residuals for one metric series");
  det->add_option("--input", o.input, "Flow CSV");
  det->add_option("--prefix-table", o.prefix_table, "Internal prefix table");
  det->add_option("--labels", o.labels, "Label CSV (restricts training to normal bins)");
  det->add_option("--output", o.output, "Residual CSV to write");
  det->add_option("--bits", o.bits, "Truncated bits");
  det->add_option("--metric", o.metric, "count or entropy");
  det->add_option("--view", o.view, "Address view");
  det->add_option("--threshold", o.threshold, "Alarm threshold on normalized residuals");
  det->add_option("--alarms", o.alarms, "Alarm CSV to write (needs --threshold)");
  add_binning(det, o);
  add_detector(det, o);
  add_manifest(det, o);

  auto* eva = app.add_subcommand("evaluate", "ROC/AUC utility table");
  eva->add_option("--input", o.input, "Flow CSV");
  eva->add_option("--prefix-table", o.prefix_table, "Internal prefix table");
  eva->add_option("--labels", o.labels, "Label CSV");
  eva->add_option("--output", o.output, "Utility CSV to write");
  eva->add_option("--json", o.json_path, "Utility JSON (with ROC points) to write");
  eva->add_option("--roc-dir", o.roc_dir, "Directory for per-cell ROC CSVs");
  eva->add_option("--bits", o.bits, "Depths (default 0,4,8,12,16,20)");
  eva->add_option("--metric", o.metric, "count and/or entropy");
  eva->add_option("--view", o.view, "Address views");
  add_binning(eva, o);
  add_detector(eva, o);
  add_manifest(eva, o);

  auto* rsk = app.add_subcommand("risk", "Host identification risk per truncation depth");
  rsk->add_option("--input", o.input, "Flow CSV (source of the address set)");
  rsk->add_option("--prefix-table", o.prefix_table, "Internal prefix table");
  rsk->add_option("--output", o.output, "Risk CSV to write");
  rsk->add_option("--detail", o.detail, "Per-prefix conditional entropy CSV");
  rsk->add_option("--bits", o.bits, "Depths (default 0..32)");
  rsk->add_option("--view", o.view, "Address view of the set (default src_int)");
  rsk->add_option("--A", o.activity_override, "Activity fraction for the analytic model");
  rsk->add_flag("--analytic", o.analytic, "Report the analytic model");
  rsk->add_flag("--empirical", o.empirical, "Report the empirical estimate");
  rsk->add_option("--weighting", o.weighting, "Empirical averaging: prefix or host");
  add_binning(rsk, o);
  add_manifest(rsk, o);

  auto* ru = app.add_subcommand("rumap", "Full pipeline: utility, risk and the R-U map");
  ru->add_option("--input", o.input, "Flow CSV");
  ru->add_option("--prefix-table", o.prefix_table, "Internal prefix table");
  ru->add_option("--labels", o.labels, "Label CSV");
  ru->add_option("--output", o.output, "Output directory");
  ru->add_option("--bits", o.bits, "Depths (default 0,4,8,12,16)");
  ru->add_option("--metric", o.metric, "count and/or entropy");
  ru->add_option("--view", o.view, "Address views");
  ru->add_option("--A-int", o.a_int, "Internal activity fraction (default: measured)");
  ru->add_option("--A-ext", o.a_ext, "External activity fraction (default: measured)");
  ru->add_flag("--empirical", o.empirical, "Use empirical risk on the observed address sets");
  ru->add_option("--utility-min", o.utility_min, "Best-tradeoff utility floor");
  ru->add_option("--risk-max", o.risk_max, "Best-tradeoff risk ceiling");
  ru->add_option("--seed", o.seed, "Recorded in the manifest");
  add_binning(ru, o);
  add_detector(ru, o);
  add_manifest(ru, o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kSuccess;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kConfigError;
  }

  try {
    if (gen->parsed()) return cmd_generate(o, out);
    if (anon->parsed()) return cmd_anonymize(o, out);
    if (met->parsed()) return cmd_metrics(o, out);
    if (det->parsed()) return cmd_detect(o, out);
    if (eva->parsed()) return cmd_evaluate(o, out);
    if (rsk->parsed()) return cmd_risk(o, out);
    if (ru->parsed()) return cmd_rumap(o, out);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const DataError& e) {
    err << "data error: " << e.what() << '\n';
    return kDataError;
  } catch (const EvaluationError& e) {
    err << "evaluation error: " << e.what() << '\n';
    return kEvaluationError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kUsageOrUnexpected;
  }
  return kUsageOrUnexpected;
}

}  // namespace truncmap::cli
