#include "truncmap/prefix_table.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>

#include "truncmap/error.hpp"

namespace truncmap {

Prefix parse_prefix(std::string_view text) {
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) {
    throw DataError("prefix '" + std::string(text) + "': missing '/len'");
  }
  const auto addr = parse_ipv4(text.substr(0, slash));
  if (!addr) throw DataError("prefix '" + std::string(text) + "': bad address");
  const auto len_text = text.substr(slash + 1);
  int length = -1;
  const auto [ptr, ec] = std::from_chars(len_text.data(), len_text.data() + len_text.size(), length);
  if (ec != std::errc{} || ptr != len_text.data() + len_text.size() || len_text.empty() || length < 0 ||
      length > 32) {
    throw DataError("prefix '" + std::string(text) + "': length must be 0..32");
  }
  if ((*addr & ~prefix_mask(length)) != 0) {
    throw DataError("prefix '" + std::string(text) + "': host bits set below /" + std::to_string(length));
  }
  return Prefix{*addr, length};
}

std::string format_prefix(const Prefix& prefix) {
  return format_ipv4(prefix.base) + "/" + std::to_string(prefix.length);
}

PrefixTable::PrefixTable(std::vector<Prefix> prefixes) : prefixes_(std::move(prefixes)) {
  for (const auto& p : prefixes_) {
    if (p.length < 0 || p.length > 32 || (p.base & ~prefix_mask(p.length)) != 0) {
      throw DataError("invalid prefix " + format_prefix(p));
    }
  }
  std::sort(prefixes_.begin(), prefixes_.end(),
            [](const Prefix& a, const Prefix& b) { return a.base < b.base || (a.base == b.base && a.length < b.length); });
  for (std::size_t i = 1; i < prefixes_.size(); ++i) {
    // Sorted by base, so any overlap shows up between neighbours.
    if (prefixes_[i].base <= prefixes_[i - 1].last()) {
      throw DataError("overlapping prefixes " + format_prefix(prefixes_[i - 1]) + " and " +
                      format_prefix(prefixes_[i]));
    }
  }
  offsets_.reserve(prefixes_.size());
  for (const auto& p : prefixes_) {
    offsets_.push_back(assigned_size_);
    assigned_size_ += p.size();
  }
}

PrefixTable PrefixTable::parse(std::istream& in) {
  std::vector<Prefix> prefixes;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const auto last = line.find_last_not_of(" \t\r");
    try {
      prefixes.push_back(parse_prefix(std::string_view(line).substr(first, last - first + 1)));
    } catch (const DataError& e) {
      throw DataError("prefix table line " + std::to_string(line_number) + ": " + e.what());
    }
  }
  return PrefixTable(std::move(prefixes));
}

PrefixTable PrefixTable::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open prefix table '" + path + "'");
  return parse(in);
}

bool PrefixTable::contains(Ipv4 addr) const {
  auto it = std::upper_bound(prefixes_.begin(), prefixes_.end(), addr,
                             [](Ipv4 a, const Prefix& p) { return a < p.base; });
  if (it == prefixes_.begin()) return false;
  return std::prev(it)->contains(addr);
}

Ipv4 PrefixTable::address_at(std::uint64_t index) const {
  if (index >= assigned_size_) throw ConfigError("address index outside assigned space");
  auto it = std::upper_bound(offsets_.begin(), offsets_.end(), index);
  const auto slot = static_cast<std::size_t>(std::distance(offsets_.begin(), it)) - 1;
  return prefixes_[slot].base + static_cast<Ipv4>(index - offsets_[slot]);
}

}  // namespace truncmap
