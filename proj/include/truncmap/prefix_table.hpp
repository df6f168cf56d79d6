#ifndef TRUNCMAP_PREFIX_TABLE_HPP
#define TRUNCMAP_PREFIX_TABLE_HPP

#include <cstdint>
#include <istream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "truncmap/ipv4.hpp"

namespace truncmap {

struct Prefix {
  Ipv4 base = 0;
  int length = 0;

  std::uint64_t size() const { return std::uint64_t{1} << (32 - length); }
  bool contains(Ipv4 addr) const { return (addr & prefix_mask(length)) == base; }
  Ipv4 last() const { return base | ~prefix_mask(length); }

  friend bool operator==(const Prefix&, const Prefix&) = default;
};

/// Parses "a.b.c.d/len". Throws DataError on malformed text or set host bits.
Prefix parse_prefix(std::string_view text);
std::string format_prefix(const Prefix& prefix);

enum class Domain { internal, external };

/// The assigned (internal) address space of the observed network.
///
/// Prefixes are kept sorted by base address; the constructor rejects
/// prefixes with host bits set and overlapping prefixes, so lookups reduce
/// to one binary search.
class PrefixTable {
 public:
  PrefixTable() = default;
  explicit PrefixTable(std::vector<Prefix> prefixes);

  /// Reads one prefix per line. Blank lines and `#` comments are skipped.
  static PrefixTable parse(std::istream& in);
  static PrefixTable load(const std::string& path);

  std::span<const Prefix> prefixes() const { return prefixes_; }
  bool empty() const { return prefixes_.empty(); }

  /// Number of addresses covered, sum of 2^(32 - len).
  std::uint64_t assigned_size() const { return assigned_size_; }

  bool contains(Ipv4 addr) const;
  Domain classify(Ipv4 addr) const { return contains(addr) ? Domain::internal : Domain::external; }

  /// The `index`-th assigned address in ascending order; index < assigned_size().
  Ipv4 address_at(std::uint64_t index) const;

 private:
  std::vector<Prefix> prefixes_;
  std::vector<std::uint64_t> offsets_;  // cumulative sizes before each prefix
  std::uint64_t assigned_size_ = 0;
};

inline Domain classify_address(Ipv4 addr, const PrefixTable& table) { return table.classify(addr); }

}  // namespace truncmap

#endif  // TRUNCMAP_PREFIX_TABLE_HPP
