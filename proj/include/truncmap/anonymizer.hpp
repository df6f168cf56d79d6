#ifndef TRUNCMAP_ANONYMIZER_HPP
#define TRUNCMAP_ANONYMIZER_HPP

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "truncmap/flow.hpp"
#include "truncmap/ipv4.hpp"

namespace truncmap {

/// Number of low-order address bits removed by truncation, 0..32.
class TruncationDepth {
 public:
  /// Throws ConfigError outside 0..32.
  explicit TruncationDepth(int bits);

  int bits() const { return bits_; }
  int prefix_length() const { return 32 - bits_; }

  friend auto operator<=>(const TruncationDepth&, const TruncationDepth&) = default;

 private:
  int bits_;
};

/// Parses a depth list: "8", "0,4,8" or "0..16" (inclusive range; an
/// optional ":step" suffix selects a stride, e.g. "0..16:4").
std::vector<TruncationDepth> parse_depths(std::string_view text);

/// Zeroes the low `depth.bits()` bits, i.e. maps `addr` to its /(32-x) prefix.
constexpr Ipv4 truncate_address(Ipv4 addr, int bits) { return addr & prefix_mask(32 - bits); }
inline Ipv4 truncate_address(Ipv4 addr, TruncationDepth depth) { return truncate_address(addr, depth.bits()); }

FlowRecord anonymize_flow(const FlowRecord& flow, TruncationDepth depth);
std::vector<FlowRecord> anonymize_trace(std::span<const FlowRecord> flows, TruncationDepth depth);

}  // namespace truncmap

#endif  // TRUNCMAP_ANONYMIZER_HPP
