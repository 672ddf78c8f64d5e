#include <catch2/catch_amalgamated.hpp>

#include "oracles.hpp"

using namespace anisovoro;

namespace {
const Box<2> kUnit = oracles::unit_box<2>();

std::vector<Vec<2>> random_sites(std::mt19937_64& rng, int count) {
  std::vector<Vec<2>> sites;
  for (int i = 0; i < count; ++i)
    sites.push_back({{0.02 + 0.96 * rand_unit(rng), 0.02 + 0.96 * rand_unit(rng)}});
  return sites;
}
}  // namespace

TEST_CASE("single-site diagram is one connected region") {
  auto id = MetricField<2>::identity(kUnit);
  const Grid<2> grid{kUnit, {32, 32}};
  auto d = label_grid({{{0.4, 0.6}}}, id, DistanceKind::DW, grid);
  CHECK(d.components.size() == 1);
  CHECK(d.components[0].is_main);
  CHECK(d.orphan_candidates.empty());
  find_orphans(d, {{{0.4, 0.6}}}, id);
  CHECK(d.confirmed_orphans.empty());
  for (int32_t l : d.labels) CHECK(l == 0);
}

TEST_CASE("two identity sites split along the perpendicular bisector") {
  auto id = MetricField<2>::identity(kUnit);
  const Grid<2> grid{kUnit, {64, 64}};
  const std::vector<Vec<2>> sites{{{0.25, 0.5}}, {{0.75, 0.5}}};
  auto d = label_grid(sites, id, DistanceKind::LS, grid);
  const double cell = grid.spacing()[0];
  for (int64_t c = 0; c < grid.cell_count(); ++c) {
    const Vec<2> p = grid.center(c);
    if (p[0] < 0.5 - cell) CHECK(d.labels[size_t(c)] == 0);
    if (p[0] > 0.5 + cell) CHECK(d.labels[size_t(c)] == 1);
  }
  CHECK(d.components.size() == 2);
  CHECK(d.orphan_candidates.empty());
}

TEST_CASE("labels match the exhaustive argmin oracle") {
  auto sw = MetricField<2>::swirl(kUnit, {{-0.5, -0.5}}, 1.5);
  std::mt19937_64 rng(51);
  const auto sites = random_sites(rng, 24);
  const Grid<2> grid{kUnit, {96, 96}};
  for (DistanceKind kind : {DistanceKind::DW, DistanceKind::LS}) {
    auto d = label_grid(sites, sw, kind, grid);
    for (int trial = 0; trial < 10000; ++trial) {
      const int64_t c = static_cast<int64_t>(rand_unit(rng) * grid.cell_count());
      CHECK(d.labels[size_t(c)] == oracles::exhaustive_label(sites, sw, kind, grid.center(c)));
    }
  }
}

TEST_CASE("components partition the grid and cover all site cells") {
  auto rb = MetricField<2>::radial_bump(kUnit, {{0.5, 0.5}}, 0.5, 0.3);
  std::mt19937_64 rng(53);
  const auto sites = random_sites(rng, 15);
  const Grid<2> grid{kUnit, {64, 64}};
  auto d = label_grid(sites, rb, DistanceKind::DW, grid);
  int64_t total = 0;
  for (const auto& comp : d.components) total += static_cast<int64_t>(comp.cells.size());
  CHECK(total == grid.cell_count());
  for (size_t s = 0; s < sites.size(); ++s) {
    const int64_t cell = grid.cell_of(sites[s]);
    if (d.labels[size_t(cell)] == int32_t(s)) {
      REQUIRE(d.main_component[s] >= 0);
      const auto& comp = d.components[size_t(d.main_component[s])];
      CHECK(std::find(comp.cells.begin(), comp.cells.end(), cell) != comp.cells.end());
    }
  }
}

TEST_CASE("orphan candidates match the union-find oracle") {
  auto sw = MetricField<2>::swirl(kUnit, {{-0.25, -0.25}}, 2.0);
  std::mt19937_64 rng(59);
  for (int trial = 0; trial < 5; ++trial) {
    const auto sites = random_sites(rng, 12);
    const Grid<2> grid{kUnit, {80, 80}};
    auto d = label_grid(sites, sw, DistanceKind::DW, grid);
    CHECK(static_cast<int64_t>(d.orphan_candidates.size()) ==
          oracles::unionfind_orphan_candidates(grid, d.labels, sites));
  }
}

TEST_CASE("identity diagrams have no confirmed orphans or star violations") {
  auto id = MetricField<2>::identity(kUnit);
  std::mt19937_64 rng(61);
  for (int trial = 0; trial < 5; ++trial) {
    const auto sites = random_sites(rng, 3 + int(rand_unit(rng) * 20));
    const Grid<2> grid{kUnit, {64, 64}};
    auto d = label_grid(sites, id, DistanceKind::DW, grid);
    find_orphans(d, sites, id);
    CHECK(d.confirmed_orphans.empty());
    const auto star = check_star_shaped(d, sites, id);
    CHECK(star.violations.empty());
    CHECK(star.samples_checked > 0);
  }
}

TEST_CASE("the planted demo orphan is detected and survives 2x refinement") {
  const auto sc = build_demo_scenario(0.01, 0.8, {128, 128});
  auto d = label_grid(sc.sites, sc.field, DistanceKind::DW, sc.grid);
  find_orphans(d, sc.sites, sc.field);
  REQUIRE(d.confirmed_orphans.size() == 1);
  CHECK(d.components[size_t(d.confirmed_orphans[0])].site == 0);  // v

  auto fine = label_grid(sc.sites, sc.field, DistanceKind::DW, sc.grid.refined(2));
  find_orphans(fine, sc.sites, sc.field);
  CHECK(fine.confirmed_orphans.size() == 1);
}

TEST_CASE("site outside the grid box is rejected") {
  auto id = MetricField<2>::identity(kUnit);
  const Grid<2> grid{kUnit, {16, 16}};
  Box<2> wide{{{-1.0, -1.0}}, {{2.0, 2.0}}};
  auto id_wide = MetricField<2>::identity(wide);
  CHECK_THROWS_AS(label_grid({{{1.5, 0.5}}}, id_wide, DistanceKind::DW, grid),
                  std::invalid_argument);
}

TEST_CASE("witness for two identity sites sits on the bisector") {
  Box<2> box{{{-2.0, -2.0}}, {{2.0, 2.0}}};
  auto id = MetricField<2>::identity(box);
  const std::vector<Vec<2>> sites{{{-1.0, 0.0}}, {{1.0, 0.0}}};
  const Grid<2> grid{box, {64, 64}};
  auto d = label_grid(sites, id, DistanceKind::DW, grid);
  const auto res = find_neighbor_witnesses(d, sites, id);
  REQUIRE(res.witnesses.size() == 1);
  CHECK(res.dropped == 0);
  const auto& w = res.witnesses[0];
  CHECK(std::abs(w.c[0]) <= 1e-9);
  CHECK(w.m == Vec<2>{{0.0, 0.0}});
  CHECK(std::abs(w.d_v - w.d_w) <= 1e-9 * std::max(w.d_v, w.d_w));
}

TEST_CASE("witnesses on a constant metric satisfy the closed-form bisector") {
  // For constant Q the boundary is the hyperplane
  // 2 (w-v)^t Q x = w^t Q w - v^t Q v.
  const Mat<2> q = Mat<2>::diagonal({{1.0, 4.0}});
  auto constant = oracles::constant_field<2>(kUnit, q);
  const std::vector<Vec<2>> sites{{{0.2, 0.3}}, {{0.7, 0.6}}};
  const Grid<2> grid{kUnit, {64, 64}};
  for (DistanceKind kind : {DistanceKind::DW, DistanceKind::LS}) {
    auto d = label_grid(sites, constant, kind, grid);
    const auto res = find_neighbor_witnesses(d, sites, constant);
    REQUIRE(res.witnesses.size() == 1);
    const auto& w = res.witnesses[0];
    const Vec<2> u = sites[1] - sites[0];
    const double lhs = 2.0 * bilinear_form(u, q, w.c);
    const double rhs =
        quadratic_form(q, sites[1]) - quadratic_form(q, sites[0]);
    CHECK(lhs == Catch::Approx(rhs).epsilon(1e-8));
  }
}

TEST_CASE("swirl witnesses keep the equidistance residual small") {
  auto sw = MetricField<2>::swirl(kUnit, {{-0.5, -0.5}}, 1.5);
  const Grid<2> grid{kUnit, {64, 64}};
  const auto net = greedy_build(sw, DistanceKind::DW, grid, StopRule::sites(20));
  const auto res = find_neighbor_witnesses(net.diagram, net.net.sites, sw);
  CHECK(res.witnesses.size() >= 10);
  for (const auto& w : res.witnesses) {
    CHECK(std::abs(w.d_v - w.d_w) <= 1e-9 * std::max(w.d_v, w.d_w));
    // Cover bound with one-cell slack.
    const double slack =
        std::sqrt(sw.max_eigenvalue_upper_bound()) * grid.cell_diagonal();
    CHECK(w.d_v <= net.net.epsilon + slack);
  }
}

TEST_CASE("phi vanishes at the witness and is affine for constant metrics") {
  const Mat<2> q = Mat<2>::diagonal({{1.0, 2.0}});
  auto constant = oracles::constant_field<2>(kUnit, q);
  const std::vector<Vec<2>> sites{{{0.3, 0.4}}, {{0.8, 0.7}}};
  const Grid<2> grid{kUnit, {64, 64}};
  auto d = label_grid(sites, constant, DistanceKind::DW, grid);
  const auto res = find_neighbor_witnesses(d, sites, constant);
  REQUIRE(res.witnesses.size() == 1);
  const auto& w = res.witnesses[0];
  const auto phi =
      phi_profile(sites[0], sites[1], w.c, 0.5, constant, DistanceKind::DW, 64);
  CHECK(std::abs(phi.values.front()) <= 1e-7);
  for (size_t k = 2; k < phi.values.size(); ++k) {
    const double second_diff =
        phi.values[k] - 2 * phi.values[k - 1] + phi.values[k - 2];
    CHECK(std::abs(second_diff) <= 1e-9);
  }
  CHECK(phi.zeros.empty());  // only the anchor zero at c
  CHECK_THROWS_AS(
      phi_profile(sites[0], sites[1], w.c, 0.0, constant, DistanceKind::DW, 64),
      std::invalid_argument);
}

TEST_CASE("star-shape check flags nothing on convex regions") {
  auto id = MetricField<2>::identity(kUnit);
  std::mt19937_64 rng(67);
  const auto sites = random_sites(rng, 10);
  const Grid<2> grid{kUnit, {64, 64}};
  auto d = label_grid(sites, id, DistanceKind::LS, grid);
  CHECK(check_star_shaped(d, sites, id).violations.empty());
}
