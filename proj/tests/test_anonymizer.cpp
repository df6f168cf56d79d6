#include <catch_amalgamated.hpp>

#include <random>

#include "support.hpp"
#include "truncmap/anonymizer.hpp"
#include "truncmap/error.hpp"

using namespace truncmap;
using truncmap::test::ip;

TEST_CASE("truncation zeroes the low bits", "[anonymizer]") {
  CHECK(truncate_address(ip("129.132.80.15"), 8) == ip("129.132.80.0"));
  CHECK(truncate_address(ip("129.132.115.90"), 0) == ip("129.132.115.90"));
  CHECK(truncate_address(ip("152.88.3.90"), 32) == 0u);
  CHECK(truncate_address(ip("152.88.3.90"), 12) == ip("152.88.0.0"));
  static_assert(truncate_address(0xFFFFFFFFu, 1) == 0xFFFFFFFEu);
}

TEST_CASE("the worked example truncates to its published column", "[anonymizer]") {
  const auto originals = truncmap::test::example_originals();
  const auto expected = truncmap::test::example_truncated();
  std::vector<FlowRecord> trace;
  for (std::size_t i = 0; i < originals.size(); ++i) {
    trace.push_back({1187481600 + static_cast<std::int64_t>(i), originals[i], originals[(i + 3) % 6], 2, 120});
  }
  const auto out = anonymize_trace(trace, TruncationDepth{8});
  REQUIRE(out.size() == 6);
  for (std::size_t i = 0; i < 6; ++i) {
    CHECK(out[i].src_addr == expected[i]);
    CHECK(out[i].dst_addr == expected[(i + 3) % 6]);
    CHECK(out[i].start_time == trace[i].start_time);
    CHECK(out[i].packets == 2);
    CHECK(out[i].bytes == 120);
  }
}

TEST_CASE("depth 0 is the identity and depth 32 collapses everything", "[anonymizer]") {
  std::mt19937_64 rng(8);
  std::uniform_int_distribution<std::uint32_t> any;
  std::vector<FlowRecord> trace;
  for (int i = 0; i < 100; ++i) trace.push_back({i, any(rng), any(rng), any(rng) % 9 + 1, any(rng)});
  const auto same = anonymize_trace(trace, TruncationDepth{0});
  const auto zero = anonymize_trace(trace, TruncationDepth{32});
  for (std::size_t i = 0; i < trace.size(); ++i) {
    CHECK(same[i].src_addr == trace[i].src_addr);
    CHECK(same[i].dst_addr == trace[i].dst_addr);
    CHECK(zero[i].src_addr == 0u);
    CHECK(zero[i].dst_addr == 0u);
    CHECK(zero[i].packets == trace[i].packets);
    CHECK(zero[i].bytes == trace[i].bytes);
  }
}

TEST_CASE("truncation depth validates its range", "[anonymizer]") {
  CHECK_THROWS_AS(TruncationDepth{-1}, ConfigError);
  CHECK_THROWS_AS(TruncationDepth{33}, ConfigError);
  CHECK(TruncationDepth{32}.prefix_length() == 0);
}

TEST_CASE("depth lists and ranges parse", "[anonymizer]") {
  auto bits = [](std::string_view text) {
    std::vector<int> out;
    for (auto d : parse_depths(text)) out.push_back(d.bits());
    return out;
  };
  CHECK(bits("8") == std::vector<int>{8});
  CHECK(bits("0,4,8") == std::vector<int>{0, 4, 8});
  CHECK(bits("0..3") == std::vector<int>{0, 1, 2, 3});
  CHECK(bits("0..16:4") == std::vector<int>{0, 4, 8, 12, 16});
  CHECK_THROWS_AS(parse_depths("0..40"), ConfigError);
  CHECK_THROWS_AS(parse_depths("eight"), ConfigError);
  CHECK_THROWS_AS(parse_depths(""), ConfigError);
}

TEST_CASE("truncation algebra", "[anonymizer][property]") {
  std::mt19937_64 rng(77);
  std::uniform_int_distribution<std::uint32_t> any;
  std::uniform_int_distribution<int> depth(0, 32);
  for (int i = 0; i < 20000; ++i) {
    const Ipv4 a = any(rng);
    const Ipv4 b = (i % 2 == 0) ? any(rng) : a ^ (any(rng) >> (depth(rng) % 32));
    int x1 = depth(rng);
    int x2 = depth(rng);
    if (x1 > x2) std::swap(x1, x2);
    // idempotence
    REQUIRE(truncate_address(truncate_address(a, x1), x1) == truncate_address(a, x1));
    // composition equals the coarser truncation
    REQUIRE(truncate_address(truncate_address(a, x1), x2) == truncate_address(a, x2));
    // collision iff the top 32-x bits agree
    const bool share = x1 == 32 || (a >> x1) == (b >> x1);
    REQUIRE((truncate_address(a, x1) == truncate_address(b, x1)) == share);
  }
}
