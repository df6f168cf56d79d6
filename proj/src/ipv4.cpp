#include "truncmap/ipv4.hpp"

#include <charconv>

namespace truncmap {

std::optional<Ipv4> parse_ipv4(std::string_view text) {
  Ipv4 addr = 0;
  std::size_t pos = 0;
  for (int octet = 0; octet < 4; ++octet) {
    if (octet > 0) {
      if (pos >= text.size() || text[pos] != '.') return std::nullopt;
      ++pos;
    }
    std::size_t end = pos;
    while (end < text.size() && text[end] >= '0' && text[end] <= '9') ++end;
    if (end == pos || end - pos > 3) return std::nullopt;
    // "010" reads as octal in some parsers; refuse rather than guess.
    if (end - pos > 1 && text[pos] == '0') return std::nullopt;
    unsigned value = 0;
    std::from_chars(text.data() + pos, text.data() + end, value);
    if (value > 255) return std::nullopt;
    addr = (addr << 8) | value;
    pos = end;
  }
  if (pos != text.size()) return std::nullopt;
  return addr;
}

std::string format_ipv4(Ipv4 addr) {
  std::string out;
  out.reserve(15);
  for (int shift = 24; shift >= 0; shift -= 8) {
    out += std::to_string((addr >> shift) & 0xFFu);
    if (shift > 0) out += '.';
  }
  return out;
}

}  // namespace truncmap
