#include <catch2/catch_amalgamated.hpp>

#include "oracles.hpp"

using namespace anisovoro;

namespace {
const Box<2> kUnit = oracles::unit_box<2>();
}

TEST_CASE("cover check on a single centered site") {
  auto id = MetricField<2>::identity(kUnit);
  const Grid<2> grid{kUnit, {64, 64}};
  const std::vector<Vec<2>> sites{{{0.5, 0.5}}};
  const double half_diag = 0.5 * std::sqrt(2.0);

  CHECK(check_cover(sites, half_diag, id, DistanceKind::DW, grid).holds);
  const auto fail = check_cover(sites, half_diag / 2, id, DistanceKind::DW, grid);
  CHECK_FALSE(fail.holds);
  // Worst point is a corner cell center.
  for (int i = 0; i < 2; ++i) {
    const double d = std::min(fail.worst_point[i], 1.0 - fail.worst_point[i]);
    CHECK(d == Catch::Approx(0.5 / 64).margin(1e-12));
  }
  CHECK_THROWS_AS(check_cover(std::vector<Vec<2>>{}, 1.0, id, DistanceKind::DW, grid),
                  std::invalid_argument);
}

TEST_CASE("packing check basics") {
  auto id = MetricField<2>::identity(kUnit);
  std::vector<Vec<2>> coincident{{{0.5, 0.5}}, {{0.5, 0.5}}};
  const auto bad = check_packing(coincident, 0.1, id, DistanceKind::DW);
  CHECK_FALSE(bad.holds);
  CHECK(bad.first == 0);
  CHECK(bad.second == 1);

  std::vector<Vec<2>> spread{{{0.1, 0.5}}, {{0.9, 0.5}}};  // distance 0.8 = 2 eps
  CHECK(check_packing(spread, 0.4, id, DistanceKind::DW).holds);
  CHECK(check_packing({{{0.5, 0.5}}}, 0.1, id, DistanceKind::DW).holds);
}

TEST_CASE("greedy on the identity metric picks center then corners") {
  auto id = MetricField<2>::identity(kUnit);
  const Grid<2> grid{kUnit, {9, 9}};
  const auto result = greedy_build(id, DistanceKind::DW, grid, StopRule::sites(3));
  REQUIRE(result.net.sites.size() == 3);
  const double lo = 0.5 / 9, hi = 1.0 - 0.5 / 9;
  CHECK(result.net.sites[0] == Vec<2>{{0.5, 0.5}});
  CHECK(result.net.sites[1] == Vec<2>{{lo, lo}});    // corner ties break to cell 0
  CHECK(result.net.sites[2] == Vec<2>{{hi, lo}});    // next lowest-index corner
  // Cross-check every step against the exhaustive argmax oracle.
  std::vector<Vec<2>> sites{result.net.sites[0]};
  for (size_t k = 1; k < result.net.sites.size(); ++k) {
    const int64_t cell = oracles::greedy_argmax_cell(sites, id, DistanceKind::DW, grid);
    CHECK(grid.center(cell) == result.net.sites[k]);
    sites.push_back(result.net.sites[k]);
  }
}

TEST_CASE("greedy matches the per-step oracle on a constant anisotropic metric") {
  auto constant = oracles::constant_field<2>(kUnit, Mat<2>::diagonal({{1.0, 4.0}}));
  const Grid<2> grid{kUnit, {17, 17}};
  for (DistanceKind kind : {DistanceKind::DW, DistanceKind::LS}) {
    const auto result = greedy_build(constant, kind, grid, StopRule::sites(6));
    std::vector<Vec<2>> sites{result.net.sites[0]};
    for (size_t k = 1; k < result.net.sites.size(); ++k) {
      const int64_t cell = oracles::greedy_argmax_cell(sites, constant, kind, grid);
      CHECK(grid.center(cell) == result.net.sites[k]);
      sites.push_back(result.net.sites[k]);
    }
  }
}

TEST_CASE("greedy history is nonincreasing and the net satisfies both properties") {
  auto ax = MetricField<2>::axis_scaling(kUnit, 0.5);
  const Grid<2> grid{kUnit, {64, 64}};
  const auto result =
      greedy_build(ax, DistanceKind::DW, grid, StopRule::target(0.25));
  CHECK_FALSE(result.budget_exhausted);
  const auto& net = result.net;
  CHECK(net.epsilon <= 0.25);
  for (size_t k = 2; k < net.history.size(); ++k)
    CHECK(net.history[k].farthest_distance <=
          net.history[k - 1].farthest_distance + 1e-15);

  CHECK(check_cover(net.sites, net.epsilon * (1 + 1e-12), ax, DistanceKind::DW, grid)
            .holds);
  CHECK(check_packing(net.sites, net.epsilon * (1 - 1e-12), ax, DistanceKind::DW)
            .holds);

  // Diagnostic only: how often the stronger AND-form packing holds.
  int64_t and_ok = 0, pairs = 0;
  for (size_t i = 0; i < net.sites.size(); ++i)
    for (size_t j = i + 1; j < net.sites.size(); ++j) {
      ++pairs;
      const double dij = d_dw(SitePoint<2>{net.sites[i], int(i)}, net.sites[j], ax);
      const double dji = d_dw(SitePoint<2>{net.sites[j], int(j)}, net.sites[i], ax);
      if (dij > net.epsilon && dji > net.epsilon) ++and_ok;
    }
  WARN("AND-form packing rate: " << and_ok << "/" << pairs);
}

TEST_CASE("greedy runs are deterministic") {
  auto sw = MetricField<2>::swirl(kUnit, {{-0.5, -0.5}}, 1.5);
  const Grid<2> grid{kUnit, {32, 32}};
  const auto a = greedy_build(sw, DistanceKind::LS, grid, StopRule::sites(25));
  GreedyOptions<2> threaded;
  threaded.threads = 3;
  const auto b = greedy_build(sw, DistanceKind::LS, grid, StopRule::sites(25), threaded);
  REQUIRE(a.net.sites.size() == b.net.sites.size());
  for (size_t i = 0; i < a.net.sites.size(); ++i)
    CHECK(a.net.sites[i] == b.net.sites[i]);
  CHECK(a.net.epsilon == b.net.epsilon);
}

TEST_CASE("orphan-free stopping terminates and reports a clean diagram") {
  auto sw = MetricField<2>::swirl(kUnit, {{-0.25, -0.25}}, 2.0);
  const Grid<2> grid{kUnit, {96, 96}};
  GreedyOptions<2> opt;
  opt.max_sites = 4000;
  const auto result = greedy_build(sw, DistanceKind::DW, grid, StopRule::orphan_free(), opt);
  CHECK_FALSE(result.budget_exhausted);
  CHECK(result.orphan_checks_run >= 1);
  CHECK(result.diagram.orphans_checked);
  CHECK(result.diagram.confirmed_orphans.empty());
  CHECK(result.net.epsilon > 0);
}

TEST_CASE("budget exhaustion is reported, not thrown") {
  auto id = MetricField<2>::identity(kUnit);
  const Grid<2> grid{kUnit, {32, 32}};
  GreedyOptions<2> opt;
  opt.max_sites = 5;
  const auto result = greedy_build(id, DistanceKind::DW, grid, StopRule::target(1e-6), opt);
  CHECK(result.budget_exhausted);
  CHECK(result.net.sites.size() == 5);
  CHECK(result.net.epsilon > 1e-6);
}

TEST_CASE("seed site is honored and validated") {
  auto id = MetricField<2>::identity(kUnit);
  const Grid<2> grid{kUnit, {16, 16}};
  GreedyOptions<2> opt;
  opt.seed_site = Vec<2>{{0.1, 0.2}};
  const auto result = greedy_build(id, DistanceKind::DW, grid, StopRule::sites(2), opt);
  CHECK(result.net.sites[0] == Vec<2>{{0.1, 0.2}});
  GreedyOptions<2> bad;
  bad.seed_site = Vec<2>{{1.5, 0.2}};
  CHECK_THROWS_AS(greedy_build(id, DistanceKind::DW, grid, StopRule::sites(2), bad),
                  std::invalid_argument);
}
