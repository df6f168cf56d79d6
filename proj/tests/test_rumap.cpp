#include <catch_amalgamated.hpp>

#include <algorithm>
#include <random>

#include "support.hpp"
#include "truncmap/error.hpp"
#include "truncmap/rumap.hpp"

using namespace truncmap;
using Catch::Matchers::WithinAbs;

namespace {

const AddressView dst_int{Direction::destination, Domain::internal};
const AddressView src_ext{Direction::source, Domain::external};

UtilityCell cell(Metric m, AddressView v, int x, std::optional<double> auc) {
  return UtilityCell{m, v, TruncationDepth{x}, auc, {}, auc ? "" : "fit failed"};
}

// Utility values shaped like the published sweep: entropy holds up under
// truncation, counts collapse.
UtilityTable published_shape() {
  UtilityTable t;
  const double int_entropy[] = {0.99, 0.97, 0.94, 0.87, 0.80};
  const double ext_entropy[] = {0.99, 0.99, 0.99, 0.98, 0.97};
  const double int_count[] = {0.95, 0.70, 0.55, 0.52, 0.50};
  const double ext_count[] = {0.90, 0.85, 0.60, 0.55, 0.50};
  for (int i = 0; i < 5; ++i) {
    t.cells.push_back(cell(Metric::entropy, dst_int, 4 * i, int_entropy[i]));
    t.cells.push_back(cell(Metric::entropy, src_ext, 4 * i, ext_entropy[i]));
    t.cells.push_back(cell(Metric::unique_count, dst_int, 4 * i, int_count[i]));
    t.cells.push_back(cell(Metric::unique_count, src_ext, 4 * i, ext_count[i]));
  }
  return t;
}

RiskModels published_models() {
  return RiskModels{ActivityModel::from_fraction(0.105), ActivityModel::from_fraction(0.0008), {}, {}};
}

}  // namespace

TEST_CASE("points take risk from the view's domain", "[rumap]") {
  UtilityTable t;
  t.cells.push_back(cell(Metric::entropy, dst_int, 8, 0.94));
  t.cells.push_back(cell(Metric::entropy, src_ext, 16, 0.97));
  t.cells.push_back(cell(Metric::entropy, src_ext, 0, 0.99));
  const auto depths = std::vector<TruncationDepth>{TruncationDepth{0}, TruncationDepth{8}, TruncationDepth{16}};
  const auto map = ru_points(t, published_models(), depths);
  REQUIRE(map.points.size() == 3);
  CHECK(map.points[0].utility == 0.94);
  CHECK_THAT(map.points[0].risk, WithinAbs(0.0372, 5e-5));
  CHECK_THAT(map.points[0].risk, WithinAbs(0.035, 0.005));
  CHECK(map.points[1].utility == 0.97);
  CHECK_THAT(map.points[1].risk, WithinAbs(0.0191, 5e-5));
  CHECK_THAT(map.points[1].risk, WithinAbs(0.020, 0.005));
  CHECK(map.points[2].risk == 1.0);
}

TEST_CASE("missing utility cells are listed as absent", "[rumap]") {
  UtilityTable t;
  t.cells.push_back(cell(Metric::entropy, dst_int, 8, std::nullopt));
  t.cells.push_back(cell(Metric::entropy, dst_int, 4, 0.9));
  const auto map = ru_points(t, published_models(), default_ru_depths());
  CHECK(map.points.size() == 1);
  REQUIRE(map.absent.size() == 1);
  CHECK(map.absent[0].depth.bits() == 8);
  CHECK(map.absent[0].reason == "fit failed");
}

TEST_CASE("empirical risk substitutes when address sets are given", "[rumap]") {
  UtilityTable t;
  t.cells.push_back(cell(Metric::entropy, dst_int, 8, 0.9));
  auto models = published_models();
  models.internal_addresses = AddressSet(truncmap::test::example_originals());
  const auto map = ru_points(t, models, default_ru_depths());
  REQUIRE(map.points.size() == 1);
  CHECK_THAT(map.points[0].risk, WithinAbs(11.0 / 18.0, 1e-12));
}

TEST_CASE("best tradeoff recovers the three published rows", "[rumap]") {
  const auto map = ru_points(published_shape(), published_models(), default_ru_depths());
  CHECK(map.points.size() == 20);
  const auto best = best_tradeoff(map.points, 0.85, 0.05);
  REQUIRE(best.size() == 3);
  CHECK(best[0].metric == Metric::entropy);
  CHECK(best[0].view == src_ext);
  CHECK(best[0].depth.bits() == 16);
  CHECK_THAT(best[0].risk, WithinAbs(0.020, 0.005));
  CHECK(best[1].view == dst_int);
  CHECK(best[1].depth.bits() == 8);
  CHECK_THAT(best[1].risk, WithinAbs(0.035, 0.005));
  CHECK(best[2].view == dst_int);
  CHECK(best[2].depth.bits() == 12);
  CHECK_THAT(best[2].risk, WithinAbs(0.002, 0.005));
}

TEST_CASE("best tradeoff thresholds", "[rumap]") {
  const auto map = ru_points(published_shape(), published_models(), default_ru_depths());
  CHECK(best_tradeoff(map.points, 0.0, 0.0).empty());
  CHECK(best_tradeoff(map.points, 0.0, 1.0).size() == map.points.size());
  CHECK_THROWS_AS(best_tradeoff(map.points, -0.1, 0.5), ConfigError);
  CHECK_THROWS_AS(best_tradeoff(map.points, 0.5, 1.5), ConfigError);
}

TEST_CASE("risk is non-increasing along each curve", "[rumap][property]") {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> act(1e-5, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    UtilityTable t;
    for (int x = 0; x <= 32; ++x) {
      t.cells.push_back(cell(Metric::entropy, dst_int, x, 0.5));
      t.cells.push_back(cell(Metric::entropy, src_ext, x, 0.5));
    }
    std::vector<TruncationDepth> depths;
    for (int x = 0; x <= 32; ++x) depths.emplace_back(x);
    const RiskModels models{ActivityModel::from_fraction(act(rng)), ActivityModel::from_fraction(act(rng)), {}, {}};
    const auto map = ru_points(t, models, depths);
    for (const auto& view : {dst_int, src_ext}) {
      double prev = 1.0;
      for (const auto& p : map.points) {
        if (p.view != view) continue;
        REQUIRE(p.risk <= prev);
        REQUIRE(p.risk > 0.0);
        prev = p.risk;
      }
    }
  }
}

TEST_CASE("best tradeoff is a stable, deterministic subset", "[rumap][property]") {
  std::mt19937_64 rng(13);
  std::uniform_int_distribution<int> coarse(0, 4);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<RUPoint> points;
    for (int i = 0; i < 30; ++i) {
      const auto m = coarse(rng) % 2 ? Metric::entropy : Metric::unique_count;
      const auto v = kAllViews[static_cast<std::size_t>(coarse(rng)) % 4];
      points.push_back({m, v, TruncationDepth{4 * coarse(rng)}, 0.8 + 0.05 * coarse(rng), 0.01 * (1 + coarse(rng))});
    }
    const auto best = best_tradeoff(points, 0.85, 0.04);
    for (const auto& p : best) {
      REQUIRE(p.utility >= 0.85);
      REQUIRE(p.risk <= 0.04);
    }
    REQUIRE(best.size() == static_cast<std::size_t>(std::count_if(points.begin(), points.end(), [](const RUPoint& p) {
              return p.utility >= 0.85 && p.risk <= 0.04;
            })));
    auto shuffled = points;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    const auto again = best_tradeoff(shuffled, 0.85, 0.04);
    REQUIRE(again.size() == best.size());
    for (std::size_t i = 0; i < best.size(); ++i) {
      REQUIRE(again[i].metric == best[i].metric);
      REQUIRE(again[i].view == best[i].view);
      REQUIRE(again[i].depth == best[i].depth);
      REQUIRE(again[i].utility == best[i].utility);
      REQUIRE(again[i].risk == best[i].risk);
    }
  }
}
