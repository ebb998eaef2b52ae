#include <catch2/catch_amalgamated.hpp>

#include <berkfekete/search.hpp>

using namespace berkfekete;

namespace {
SearchConfig quick_cfg(int n, std::uint64_t seed) {
  SearchConfig cfg;
  cfg.n_points = n;
  cfg.iterations = 2000;
  cfg.restarts = 4;
  cfg.seed = seed;
  return cfg;
}
}  // namespace

TEST_CASE("structured seed keeps best above N log N") {
  auto g0 = g0_weight();
  for (int n : {4, 8}) {
    auto res = fekete_maximize(g0, quick_cfg(n, 42));
    CHECK(res.best_value >= n * std::log(double(n)) - 1e-9);
    CHECK(res.bound_report.holds);
    CHECK(res.ratio <= res.bound_report.rhs / (n * std::log(double(n))) + 1e-12);
  }
}

TEST_CASE("deterministic under a fixed seed") {
  auto g0 = g0_weight();
  auto a = fekete_maximize(g0, quick_cfg(6, 777));
  auto b = fekete_maximize(g0, quick_cfg(6, 777));
  REQUIRE(a.best.size() == b.best.size());
  CHECK(a.best_value == b.best_value);  // bit-identical
  for (size_t i = 0; i < a.best.size(); ++i) {
    CHECK(a.best.entries[i].point == b.best.entries[i].point);
  }
}

TEST_CASE("antipodal pair found for N = 2") {
  auto g0 = g0_weight();
  SearchConfig cfg = quick_cfg(2, 7);
  cfg.iterations = 10000;
  cfg.include_structured_seeds = false;
  auto res = fekete_maximize(g0, cfg);
  // the maximum of (F,F)_{g0} at N = 2 is 2 log 2, attained at antipodes
  CHECK(res.best_value <= 2 * std::log(2.0) + 1e-9);
  CHECK(res.best_value >= 2 * std::log(2.0) - 1e-2);
}

TEST_CASE("ratio_report table") {
  auto g0 = g0_weight();
  auto rows = ratio_report(g0, {4, 8}, quick_cfg(4, 3));
  REQUIRE(rows.size() == 2);
  for (const auto& r : rows) {
    CHECK(r.ratio >= 1.0 - 1e-9);  // structured seed floor
    CHECK(r.ratio <= r.bound_ratio);
  }
  CHECK(rows[1].bound_ratio < rows[0].bound_ratio);
  CHECK(ratio_report(g0, {}, quick_cfg(4, 3)).empty());
}

TEST_CASE("search preconditions") {
  auto g0 = g0_weight();
  SearchConfig bad = quick_cfg(1, 0);
  CHECK_THROWS_AS(fekete_maximize(g0, bad), precondition_error);
  SearchConfig cfg = quick_cfg(4, 0);
  auto zp = zero_weight(FieldMode::padic(3));
  CHECK_THROWS_AS(fekete_maximize(zp, cfg), unsupported_mode_error);
}
