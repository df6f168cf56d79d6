#include <catch_amalgamated.hpp>

#include <random>

#include "support.hpp"
#include "truncmap/error.hpp"
#include "truncmap/evaluation.hpp"
#include "truncmap/generator.hpp"

using namespace truncmap;
using Catch::Matchers::WithinAbs;

namespace {

constexpr Label N = Label::normal;
constexpr Label A = Label::attack;
constexpr Label X = Label::excluded;

// P(score_attack > score_normal) + 1/2 P(tie), by enumerating all pairs.
double pair_counting(const std::vector<double>& s, const std::vector<Label>& l) {
  double wins = 0;
  double pairs = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (l[i] != A) continue;
    for (std::size_t j = 0; j < s.size(); ++j) {
      if (l[j] != N) continue;
      pairs += 1;
      wins += s[i] > s[j] ? 1.0 : (s[i] == s[j] ? 0.5 : 0.0);
    }
  }
  return wins / pairs;
}

// Random instance with at least one bin of each class; scores are coarse so
// ties are common.
void random_instance(std::mt19937_64& rng, std::vector<double>& s, std::vector<Label>& l) {
  const std::size_t n = 2 + rng() % 59;
  s.resize(n);
  l.resize(n);
  std::uniform_int_distribution<int> coarse(0, 8);
  for (std::size_t i = 0; i < n; ++i) {
    s[i] = coarse(rng) * 0.5;
    const auto r = rng() % 10;
    l[i] = r < 5 ? N : (r < 9 ? A : X);
  }
  l[0] = N;
  l[1] = A;
}

GeneratedTrace scan_trace(std::uint64_t seed) {
  GeneratorConfig c;
  c.internal_table = truncmap::test::table_of({"10.0.0.0/16"});
  c.duration_bins = 400;
  c.internal_activity = 0.1;
  c.external_active_count = 20000;
  c.baseline_flows_per_bin = 400;
  c.seed = seed;
  for (std::int64_t start = 130; start + 3 < 400; start += 45) {
    c.anomalies.push_back({AnomalyKind::scan, start, start + 2, 300,
                           Prefix{c.internal_table.address_at(static_cast<std::uint64_t>(start) * 97) & 0xFFFFFF00u, 24},
                           1});
  }
  return generate_trace(c);
}

}  // namespace

TEST_CASE("roc curve enumerates every threshold", "[evaluation]") {
  const std::vector<double> s{1, 2, 3, 4};
  const std::vector<Label> l{N, N, A, A};
  const auto c = roc_curve(s, l);
  CHECK(c.points == std::vector<RocPoint>{{0, 0}, {0, 0.5}, {0, 1}, {0.5, 1}, {1, 1}});
  CHECK(auc(c) == 1.0);
}

TEST_CASE("inverted scores give zero area", "[evaluation]") {
  const std::vector<double> s{5, 6, 1, 2};
  const std::vector<Label> l{N, N, A, A};
  CHECK(auc(roc_curve(s, l)) == 0.0);
}

TEST_CASE("one bin per class is enough", "[evaluation]") {
  const std::vector<double> s{0.3, 9, 0.7, 4};
  const std::vector<Label> l{X, N, A, X};
  const auto c = roc_curve(s, l);
  CHECK(c.points.front() == RocPoint{0, 0});
  CHECK(c.points.back() == RocPoint{1, 1});
  CHECK(auc(c) == 0.0);
}

TEST_CASE("auc of reference curves", "[evaluation]") {
  CHECK(auc(RocCurve{{{0, 0}, {0, 1}, {1, 1}}}) == 1.0);
  CHECK(auc(RocCurve{{{0, 0}, {1, 1}}}) == 0.5);
  const RocCurve diag{{{0, 0}, {0.5, 0.5}, {1, 1}}};
  CHECK_THAT(tpr_at_fpr(diag, 0.25), WithinAbs(0.25, 1e-12));
  CHECK(tpr_at_fpr(RocCurve{{{0, 0}, {0, 0.8}, {1, 1}}}, 0.0) == 0.8);
}

TEST_CASE("roc input errors", "[evaluation]") {
  const std::vector<double> s{1, 2};
  CHECK_THROWS_AS(roc_curve(s, std::vector<Label>{N}), EvaluationError);
  CHECK_THROWS_WITH(roc_curve(s, std::vector<Label>{N, N}), Catch::Matchers::ContainsSubstring("attack"));
  CHECK_THROWS_WITH(roc_curve(s, std::vector<Label>{A, X}), Catch::Matchers::ContainsSubstring("normal"));
  CHECK_THROWS_AS(roc_curve(std::vector<double>{std::nan(""), 1}, std::vector<Label>{N, A}), EvaluationError);
}

TEST_CASE("trapezoid area equals the pair-counting statistic", "[evaluation][property]") {
  std::mt19937_64 rng(1234);
  std::vector<double> s;
  std::vector<Label> l;
  for (int trial = 0; trial < 500; ++trial) {
    random_instance(rng, s, l);
    REQUIRE_THAT(auc(roc_curve(s, l)), WithinAbs(pair_counting(s, l), 1e-9));
  }
}

TEST_CASE("negating scores reflects the area", "[evaluation][property]") {
  std::mt19937_64 rng(99);
  std::vector<double> s;
  std::vector<Label> l;
  for (int trial = 0; trial < 300; ++trial) {
    random_instance(rng, s, l);
    std::vector<double> neg(s.size());
    std::transform(s.begin(), s.end(), neg.begin(), [](double v) { return -v; });
    REQUIRE_THAT(auc(roc_curve(neg, l)), WithinAbs(1.0 - auc(roc_curve(s, l)), 1e-9));
  }
}

TEST_CASE("excluded bins never move the curve", "[evaluation][property]") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> any(-100, 100);
  std::vector<double> s;
  std::vector<Label> l;
  for (int trial = 0; trial < 300; ++trial) {
    random_instance(rng, s, l);
    const auto base = roc_curve(s, l).points;
    auto s2 = s;
    for (std::size_t i = 0; i < s2.size(); ++i) {
      if (l[i] == X) s2[i] = any(rng);
    }
    REQUIRE(roc_curve(s2, l).points == base);
  }
}

TEST_CASE("curves are monotone and anchored", "[evaluation][property]") {
  std::mt19937_64 rng(8);
  std::vector<double> s;
  std::vector<Label> l;
  for (int trial = 0; trial < 300; ++trial) {
    random_instance(rng, s, l);
    const auto c = roc_curve(s, l);
    REQUIRE(c.points.front() == RocPoint{0, 0});
    REQUIRE(c.points.back() == RocPoint{1, 1});
    for (std::size_t i = 1; i < c.points.size(); ++i) {
      REQUIRE(c.points[i].fpr >= c.points[i - 1].fpr);
      REQUIRE(c.points[i].tpr >= c.points[i - 1].tpr);
    }
  }
}

TEST_CASE("utility on a scanned trace", "[evaluation]") {
  const auto g = scan_trace(5);
  const auto table = truncmap::test::table_of({"10.0.0.0/16"});
  const auto trace = bin_trace(g.flows, table, {900, std::nullopt, 400});
  const auto labels = label_vector(g.labels, trace.bin_count());
  const AddressView dst_int{Direction::destination, Domain::internal};
  const std::vector<TruncationDepth> depths{TruncationDepth{0}, TruncationDepth{32}};
  const std::vector<Metric> metrics{Metric::unique_count, Metric::entropy};
  const std::vector<AddressView> views{dst_int};
  const auto u = utility_table(trace, labels, depths, metrics, views, {});
  REQUIRE(u.cells.size() == 4);

  CHECK(*u.auc(Metric::entropy, dst_int, TruncationDepth{0}) >= 0.9);
  const auto flat = u.find(Metric::unique_count, dst_int, TruncationDepth{32});
  REQUIRE(flat->auc);
  CHECK_THAT(*flat->auc, WithinAbs(0.5, 0.1));
  CHECK_FALSE(flat->note.empty());

  const std::vector<Label> all_normal(trace.bin_count(), Label::normal);
  CHECK_THROWS_AS(utility_table(trace, all_normal, depths, metrics, views, {}), EvaluationError);
}

TEST_CASE("a series that cannot be fitted is absent, not guessed", "[evaluation]") {
  MetricSeries s;
  s.values.assign(100, 1.0);
  for (std::size_t t = 40; t < 100; ++t) s.values[t] = static_cast<double>(t % 7);
  std::vector<Label> labels(100, Label::normal);
  labels[60] = Label::attack;
  DetectorConfig cfg;
  cfg.train_fraction = 0.05;  // five training bins
  const auto cell = evaluate_series(s, labels, cfg);
  CHECK_FALSE(cell.auc.has_value());
  CHECK_THAT(cell.note, Catch::Matchers::ContainsSubstring("training"));
}
