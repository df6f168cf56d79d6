#include <catch_amalgamated.hpp>

#include <random>
#include <sstream>

#include "support.hpp"
#include "truncmap/error.hpp"
#include "truncmap/flow.hpp"
#include "truncmap/ipv4.hpp"
#include "truncmap/prefix_table.hpp"

using namespace truncmap;
using truncmap::test::ip;

TEST_CASE("ipv4 parsing is strict", "[ipv4]") {
  CHECK(parse_ipv4("129.132.80.15") == 0x8184500Fu);
  CHECK(parse_ipv4("0.0.0.0") == 0u);
  CHECK(parse_ipv4("255.255.255.255") == 0xFFFFFFFFu);
  for (const char* bad : {"", "1.2.3", "1.2.3.4.5", "256.1.1.1", "1..2.3", "a.b.c.d", "1.2.3.4 ", "-1.2.3.4",
                          "01.2.3.4", "1.2.3.1234"}) {
    INFO(bad);
    CHECK_FALSE(parse_ipv4(bad).has_value());
  }
  CHECK(format_ipv4(0x9858035Au) == "152.88.3.90");
}

TEST_CASE("ipv4 format and parse round-trip", "[ipv4][property]") {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<std::uint32_t> any;
  for (int i = 0; i < 1000; ++i) {
    const Ipv4 a = any(rng);
    REQUIRE(parse_ipv4(format_ipv4(a)) == a);
  }
}

TEST_CASE("flow records parse from CSV", "[flow]") {
  const auto f = parse_flow_csv("1187481600,129.132.80.15,152.88.3.90,3,180");
  CHECK(f.start_time == 1187481600);
  CHECK(f.src_addr == 0x8184500Fu);
  CHECK(f.dst_addr == 0x9858035Au);
  CHECK(f.packets == 3);
  CHECK(f.bytes == 180);

  const auto b = parse_flow_csv("0,0.0.0.0,255.255.255.255,1,20");
  CHECK(b.start_time == 0);
  CHECK(b.src_addr == 0u);
  CHECK(b.dst_addr == 0xFFFFFFFFu);

  CHECK(parse_flow_csv("5,1.2.3.4,5.6.7.8,1,2\r").bytes == 2);
}

TEST_CASE("malformed flow lines name the problem", "[flow]") {
  CHECK_THROWS_WITH(parse_flow_csv("1187481600,129.132.80.15,152.88.3.90", 7),
                    Catch::Matchers::ContainsSubstring("field count") && Catch::Matchers::ContainsSubstring("7"));
  CHECK_THROWS_AS(parse_flow_csv("x,1.2.3.4,5.6.7.8,1,2"), DataError);
  CHECK_THROWS_AS(parse_flow_csv("-5,1.2.3.4,5.6.7.8,1,2"), DataError);
  CHECK_THROWS_AS(parse_flow_csv("5,1.2.3.400,5.6.7.8,1,2"), DataError);
  CHECK_THROWS_AS(parse_flow_csv("5,1.2.3.4,5.6.7.8,1,2,9"), DataError);
  CHECK_THROWS_AS(parse_flow_csv("5,1.2.3.4,5.6.7.8,-1,2"), DataError);
}

TEST_CASE("flow CSV round-trips through the streaming reader", "[flow][property]") {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<std::uint32_t> any;
  std::vector<FlowRecord> flows;
  for (int i = 0; i < 200; ++i) {
    flows.push_back({1187481600 + i * 7, any(rng), any(rng), any(rng) % 100 + 1, any(rng)});
  }
  std::stringstream ss;
  write_flows(ss, flows);
  const auto back = read_flows(ss);
  REQUIRE(back.size() == flows.size());
  for (std::size_t i = 0; i < flows.size(); ++i) {
    CHECK(back[i].start_time == flows[i].start_time);
    CHECK(back[i].src_addr == flows[i].src_addr);
    CHECK(back[i].dst_addr == flows[i].dst_addr);
    CHECK(back[i].packets == flows[i].packets);
    CHECK(back[i].bytes == flows[i].bytes);
  }
}

TEST_CASE("prefix table classification", "[prefix_table]") {
  const auto table = truncmap::test::table_of({"129.132.0.0/16"});
  CHECK(classify_address(ip("129.132.80.15"), table) == Domain::internal);
  CHECK(classify_address(ip("152.88.3.90"), table) == Domain::external);
  CHECK(classify_address(ip("129.132.0.0"), table) == Domain::internal);
  CHECK(classify_address(ip("129.132.255.255"), table) == Domain::internal);
  CHECK(classify_address(ip("129.133.0.0"), table) == Domain::external);
  CHECK(classify_address(ip("129.131.255.255"), table) == Domain::external);
  CHECK(table.assigned_size() == 65536);
}

TEST_CASE("prefix table rejects bad entries", "[prefix_table]") {
  CHECK_THROWS_AS(parse_prefix("10.0.0.1/8"), DataError);
  CHECK_THROWS_AS(parse_prefix("10.0.0.0/33"), DataError);
  CHECK_THROWS_AS(parse_prefix("10.0.0.0"), DataError);
  CHECK_THROWS_AS(truncmap::test::table_of({"10.0.0.0/8", "10.1.0.0/16"}), DataError);
  std::istringstream in("# campus\n129.132.0.0/16\n\n  192.33.96.0/21  # lab\n");
  const auto table = PrefixTable::parse(in);
  CHECK(table.assigned_size() == 65536 + 2048);
  CHECK(table.contains(ip("192.33.103.255")));
  CHECK_FALSE(table.contains(ip("192.33.104.0")));
  CHECK_THROWS_AS(PrefixTable::load("/nonexistent/table.txt"), ConfigError);
}

TEST_CASE("prefix table index addressing covers the table in order", "[prefix_table]") {
  const auto table = truncmap::test::table_of({"10.0.0.0/30", "192.168.1.0/31"});
  CHECK(table.address_at(0) == ip("10.0.0.0"));
  CHECK(table.address_at(3) == ip("10.0.0.3"));
  CHECK(table.address_at(4) == ip("192.168.1.0"));
  CHECK(table.address_at(5) == ip("192.168.1.1"));
}

TEST_CASE("classification is total and consistent", "[prefix_table][property]") {
  const auto table = truncmap::test::table_of({"129.128.0.0/11", "192.33.96.0/21", "10.0.0.0/8"});
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<std::uint32_t> any;
  for (int i = 0; i < 20000; ++i) {
    const Ipv4 a = any(rng);
    bool inside = false;
    for (const char* p : {"129.128.0.0/11", "192.33.96.0/21", "10.0.0.0/8"}) inside |= parse_prefix(p).contains(a);
    REQUIRE((classify_address(a, table) == Domain::internal) == inside);
    REQUIRE(classify_address(a, table) == classify_address(a, table));
  }
}

TEST_CASE("bin index arithmetic", "[flow][bins]") {
  CHECK(bin_index(900, 900, 0) == 1);
  CHECK(bin_index(899, 900, 0) == 0);
  CHECK(bin_index(1187483400, 900, 1187481600) == 2);
  CHECK_THROWS_AS(bin_index(10, 900, 20), DataError);
  CHECK_THROWS_AS(bin_index(10, 0, 0), ConfigError);
  CHECK(align_to_bin(1187481601, 900) == 1187481600);
}

TEST_CASE("address views parse in several spellings", "[flow]") {
  const AddressView dst_int{Direction::destination, Domain::internal};
  CHECK(parse_view("dst_int") == dst_int);
  CHECK(parse_view("dst-int") == dst_int);
  CHECK(parse_view("dstxint") == dst_int);
  CHECK(to_string(dst_int) == "dst_int");
  CHECK_THROWS_AS(parse_view("dst_mid"), ConfigError);
}

TEST_CASE("labels fill unlisted bins as excluded", "[flow][labels]") {
  std::istringstream in("0,normal\n2,attack\n3,excluded\n");
  const auto labels = read_labels(in);
  const auto v = label_vector(labels, 5);
  CHECK(v == std::vector<Label>{Label::normal, Label::excluded, Label::attack, Label::excluded, Label::excluded});

  std::istringstream dup("0,normal\n0,attack\n");
  CHECK_THROWS_AS(read_labels(dup), DataError);
  std::istringstream bad("0,maybe\n");
  CHECK_THROWS_AS(read_labels(bad), DataError);
}
