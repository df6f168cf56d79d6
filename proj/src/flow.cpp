#include "truncmap/flow.hpp"

#include <algorithm>
#include <charconv>
#include <map>

#include "truncmap/error.hpp"

namespace truncmap {

namespace {

constexpr std::array<std::string_view, 5> kFieldNames = {"start_time", "src_addr", "dst_addr", "packets",
                                                          "bytes"};

std::string where(std::size_t line_number) {
  return line_number > 0 ? "line " + std::to_string(line_number) + ": " : std::string{};
}

template <typename T>
T parse_integer(std::string_view text, std::string_view field, std::size_t line_number) {
  T value{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size()) {
    throw DataError(where(line_number) + "field '" + std::string(field) + "': not a valid integer '" +
                    std::string(text) + "'");
  }
  return value;
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(sep, start);
    parts.push_back(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

std::string_view chomp(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  return line;
}

}  // namespace

FlowRecord parse_flow_csv(std::string_view line, std::size_t line_number) {
  const auto fields = split(chomp(line), ',');
  if (fields.size() != kFieldNames.size()) {
    throw DataError(where(line_number) + "field count: expected 5 fields, got " + std::to_string(fields.size()));
  }
  FlowRecord flow;
  flow.start_time = parse_integer<std::int64_t>(fields[0], kFieldNames[0], line_number);
  if (flow.start_time < 0) {
    throw DataError(where(line_number) + "field 'start_time': negative timestamp");
  }
  for (int i : {1, 2}) {
    const auto addr = parse_ipv4(fields[i]);
    if (!addr) {
      throw DataError(where(line_number) + "field '" + std::string(kFieldNames[i]) + "': invalid IPv4 address '" +
                      std::string(fields[i]) + "'");
    }
    (i == 1 ? flow.src_addr : flow.dst_addr) = *addr;
  }
  flow.packets = parse_integer<std::uint64_t>(fields[3], kFieldNames[3], line_number);
  flow.bytes = parse_integer<std::uint64_t>(fields[4], kFieldNames[4], line_number);
  return flow;
}

std::string format_flow_csv(const FlowRecord& flow) {
  std::string out = std::to_string(flow.start_time);
  out += ',';
  out += format_ipv4(flow.src_addr);
  out += ',';
  out += format_ipv4(flow.dst_addr);
  out += ',';
  out += std::to_string(flow.packets);
  out += ',';
  out += std::to_string(flow.bytes);
  return out;
}

std::optional<FlowRecord> FlowCsvReader::next() {
  while (std::getline(*in_, line_)) {
    ++line_number_;
    if (chomp(line_).empty()) continue;
    return parse_flow_csv(line_, line_number_);
  }
  return std::nullopt;
}

std::vector<FlowRecord> read_flows(std::istream& in) {
  std::vector<FlowRecord> flows;
  FlowCsvReader reader(in);
  while (auto flow = reader.next()) flows.push_back(*flow);
  return flows;
}

std::vector<FlowRecord> read_flows(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open flow trace '" + path + "'");
  return read_flows(in);
}

void for_each_flow(const std::string& path, const std::function<void(const FlowRecord&)>& sink) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open flow trace '" + path + "'");
  FlowCsvReader reader(in);
  while (auto flow = reader.next()) sink(*flow);
}

void write_flows(std::ostream& out, std::span<const FlowRecord> flows) {
  for (const auto& flow : flows) out << format_flow_csv(flow) << '\n';
}

std::string to_string(AddressView view) {
  std::string out = view.direction == Direction::source ? "src" : "dst";
  out += view.domain == Domain::internal ? "_int" : "_ext";
  return out;
}

AddressView parse_view(std::string_view text) {
  if (text.size() == 7 && (text[3] == '_' || text[3] == '-' || text[3] == 'x')) {
    const auto dir = text.substr(0, 3);
    const auto dom = text.substr(4);
    if ((dir == "src" || dir == "dst") && (dom == "int" || dom == "ext")) {
      return AddressView{dir == "src" ? Direction::source : Direction::destination,
                         dom == "int" ? Domain::internal : Domain::external};
    }
  }
  throw ConfigError("unknown address view '" + std::string(text) + "' (expected src_int, src_ext, dst_int, dst_ext)");
}

std::int64_t bin_index(std::int64_t timestamp, std::int64_t bin_seconds, std::int64_t epoch_start) {
  if (bin_seconds <= 0) throw ConfigError("bin_seconds must be positive");
  if (timestamp < epoch_start) {
    throw DataError("timestamp " + std::to_string(timestamp) + " precedes epoch start " + std::to_string(epoch_start));
  }
  return (timestamp - epoch_start) / bin_seconds;
}

std::int64_t align_to_bin(std::int64_t timestamp, std::int64_t bin_seconds) {
  if (bin_seconds <= 0) throw ConfigError("bin_seconds must be positive");
  const auto rem = timestamp % bin_seconds;
  return timestamp - (rem < 0 ? rem + bin_seconds : rem);
}

std::string_view to_string(Label label) {
  switch (label) {
    case Label::normal: return "normal";
    case Label::attack: return "attack";
    case Label::excluded: return "excluded";
  }
  return "excluded";
}

Label parse_label(std::string_view text) {
  if (text == "normal") return Label::normal;
  if (text == "attack") return Label::attack;
  if (text == "excluded") return Label::excluded;
  throw DataError("unknown label '" + std::string(text) + "'");
}

std::vector<BinLabel> read_labels(std::istream& in) {
  std::vector<BinLabel> labels;
  std::map<std::int64_t, std::size_t> seen;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    const auto text = chomp(line);
    if (text.empty()) continue;
    const auto fields = split(text, ',');
    if (fields.size() != 2) {
      throw DataError(where(line_number) + "label file: expected 'bin_index,label'");
    }
    BinLabel entry;
    entry.bin_index = parse_integer<std::int64_t>(fields[0], "bin_index", line_number);
    if (entry.bin_index < 0) throw DataError(where(line_number) + "field 'bin_index': negative bin");
    try {
      entry.label = parse_label(fields[1]);
    } catch (const DataError& e) {
      throw DataError(where(line_number) + e.what());
    }
    if (!seen.emplace(entry.bin_index, line_number).second) {
      throw DataError(where(line_number) + "duplicate label for bin " + std::to_string(entry.bin_index));
    }
    labels.push_back(entry);
  }
  return labels;
}

std::vector<BinLabel> read_labels(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open label file '" + path + "'");
  return read_labels(in);
}

void write_labels(std::ostream& out, std::span<const BinLabel> labels) {
  for (const auto& l : labels) out << l.bin_index << ',' << to_string(l.label) << '\n';
}

std::vector<Label> label_vector(std::span<const BinLabel> labels, std::size_t bin_count) {
  std::vector<Label> dense(bin_count, Label::excluded);
  for (const auto& l : labels) {
    if (l.bin_index >= 0 && static_cast<std::size_t>(l.bin_index) < bin_count) {
      dense[static_cast<std::size_t>(l.bin_index)] = l.label;
    }
  }
  return dense;
}

}  // namespace truncmap
