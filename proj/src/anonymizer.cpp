#include "truncmap/anonymizer.hpp"

#include <charconv>

#include "truncmap/error.hpp"

namespace truncmap {

TruncationDepth::TruncationDepth(int bits) : bits_(bits) {
  if (bits < 0 || bits > 32) {
    throw ConfigError("truncation depth " + std::to_string(bits) + " outside 0..32");
  }
}

namespace {

int parse_bits(std::string_view text) {
  int value = -1;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size()) {
    throw ConfigError("invalid bit count '" + std::string(text) + "'");
  }
  return value;
}

}  // namespace

std::vector<TruncationDepth> parse_depths(std::string_view text) {
  std::vector<TruncationDepth> depths;
  if (const auto dots = text.find(".."); dots != std::string_view::npos) {
    auto rest = text.substr(dots + 2);
    int step = 1;
    if (const auto colon = rest.find(':'); colon != std::string_view::npos) {
      step = parse_bits(rest.substr(colon + 1));
      rest = rest.substr(0, colon);
    }
    const int lo = parse_bits(text.substr(0, dots));
    const int hi = parse_bits(rest);
    if (step <= 0 || lo > hi) throw ConfigError("invalid depth range '" + std::string(text) + "'");
    for (int x = lo; x <= hi; x += step) depths.emplace_back(x);
    return depths;
  }
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto comma = text.find(',', start);
    depths.emplace_back(parse_bits(text.substr(start, comma == std::string_view::npos ? std::string_view::npos
                                                                                       : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return depths;
}

FlowRecord anonymize_flow(const FlowRecord& flow, TruncationDepth depth) {
  FlowRecord out = flow;
  out.src_addr = truncate_address(flow.src_addr, depth);
  out.dst_addr = truncate_address(flow.dst_addr, depth);
  return out;
}

std::vector<FlowRecord> anonymize_trace(std::span<const FlowRecord> flows, TruncationDepth depth) {
  std::vector<FlowRecord> out;
  out.reserve(flows.size());
  for (const auto& flow : flows) out.push_back(anonymize_flow(flow, depth));
  return out;
}

}  // namespace truncmap
