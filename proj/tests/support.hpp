#ifndef TRUNCMAP_TESTS_SUPPORT_HPP
#define TRUNCMAP_TESTS_SUPPORT_HPP

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "truncmap/ipv4.hpp"
#include "truncmap/prefix_table.hpp"

namespace truncmap::test {

inline Ipv4 ip(const char* text) { return *parse_ipv4(text); }

// The six originals of the worked truncation example, in table order.
inline std::vector<Ipv4> example_originals() {
  return {ip("129.132.80.15"), ip("129.132.80.77"), ip("129.132.115.5"),
          ip("152.88.3.90"),   ip("129.132.80.144"), ip("129.132.115.90")};
}

inline std::vector<Ipv4> example_truncated() {
  return {ip("129.132.80.0"), ip("129.132.80.0"), ip("129.132.115.0"),
          ip("152.88.3.0"),   ip("129.132.80.0"), ip("129.132.115.0")};
}

inline PrefixTable table_of(std::initializer_list<const char*> prefixes) {
  std::vector<Prefix> out;
  for (const char* p : prefixes) out.push_back(parse_prefix(p));
  return PrefixTable(std::move(out));
}

/// Scratch directory removed on destruction.
class TempDir {
 public:
  TempDir() {
    static std::uint64_t counter = 0;
    path_ = std::filesystem::temp_directory_path() /
            ("truncmap_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() { std::filesystem::remove_all(path_); }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::string file(const std::string& name) const { return (path_ / name).string(); }

 private:
  std::filesystem::path path_;
};

inline void write_text(const std::string& path, const std::string& text) {
  std::ofstream(path, std::ios::binary) << text;
}

inline std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Random addresses clustered in a few /16s so truncation actually merges.
inline std::vector<Ipv4> clustered_addresses(std::mt19937_64& rng, std::size_t n) {
  std::uniform_int_distribution<std::uint32_t> any;
  std::uniform_int_distribution<int> cluster_count(1, 6);
  std::vector<Ipv4> bases(static_cast<std::size_t>(cluster_count(rng)));
  for (auto& b : bases) b = any(rng) & 0xFFFF0000u;
  std::uniform_int_distribution<std::size_t> pick(0, bases.size() - 1);
  std::uniform_int_distribution<std::uint32_t> low(0, 0xFFFF);
  std::vector<Ipv4> out(n);
  for (auto& a : out) a = bases[pick(rng)] | low(rng);
  return out;
}

}  // namespace truncmap::test

#endif  // TRUNCMAP_TESTS_SUPPORT_HPP
