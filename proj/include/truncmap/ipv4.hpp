#ifndef TRUNCMAP_IPV4_HPP
#define TRUNCMAP_IPV4_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace truncmap {

/// IPv4 addresses are carried as host-order 32-bit integers throughout.
using Ipv4 = std::uint32_t;

/// Strict dotted-quad parse: exactly four decimal octets in 0..255, no
/// whitespace, no sign, no empty octet. Returns nullopt on any violation.
std::optional<Ipv4> parse_ipv4(std::string_view text);

std::string format_ipv4(Ipv4 addr);

/// Mask keeping the top `prefix_length` bits (0..32).
constexpr Ipv4 prefix_mask(int prefix_length) {
  return prefix_length <= 0 ? 0u : ~Ipv4{0} << (32 - prefix_length);
}

}  // namespace truncmap

#endif  // TRUNCMAP_IPV4_HPP
