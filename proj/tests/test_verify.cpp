#include <catch2/catch_amalgamated.hpp>

#include "oracles.hpp"

using namespace anisovoro;

namespace {
const Box<2> kUnit = oracles::unit_box<2>();
}

TEST_CASE("threshold constants and derived quantities") {
  CHECK(threshold_for(DistanceKind::DW) == 0.09868);
  CHECK(threshold_for(DistanceKind::LS) == 0.0584);
  const double es = kLsEpsSigmaThreshold;
  const double k = k_of(es);
  CHECK(k == Catch::Approx((1 + es) / (1 - es)));
  CHECK(k > 1.0);
  CHECK(gamma_of(es) == Catch::Approx(es * (1 + k)));
  // The printed LS beta bound is identically one half.
  for (double x : {0.01, 0.03, 0.0584}) {
    CHECK(ls_beta_bound_printed(x) == Catch::Approx(0.5).margin(1e-12));
  }
}

TEST_CASE("positivity at the exact thresholds, both readings") {
  // DW: positive at the stated threshold, negative just past it, which
  // pins the constant to the subtraction reading of the proof line.
  CHECK(dw_theorem_margin(kDwEpsSigmaThreshold) > 0);
  CHECK(dw_theorem_margin(0.0987) < 0);
  // LS: the strict 1/k^2 form flips sign within (0.0584, 0.0585); the
  // printed form stays positive until ~0.101.
  CHECK(ls_theorem_margin_strict(kLsEpsSigmaThreshold) > 0);
  CHECK(ls_theorem_margin_strict(0.0585) < 0);
  CHECK(ls_theorem_margin_printed(kLsEpsSigmaThreshold) > 0);
}

TEST_CASE("dense scalar scans stay positive on the stated intervals") {
  const auto dw = scan_dw_positivity(100000);
  CHECK(dw.violations == 0);
  CHECK(dw.worst_margin > 0);
  const auto ls = scan_ls_positivity(100000);
  CHECK(ls.violations == 0);
  CHECK(ls.worst_margin > 0);
  const auto ls_printed = scan_ls_positivity_printed(100000);
  CHECK(ls_printed.violations == 0);
}

TEST_CASE("asymmetry lemma holds with matching-resolution sigma") {
  auto ax = MetricField<2>::axis_scaling(kUnit, 0.5);
  const Grid<2> grid{kUnit, {64, 64}};
  const double sigma = sigma_brute_force(ax, grid).sigma_hat;
  const auto res = verify_asymmetry_lemma(ax, grid, sigma, 0.25, 2000, 7);
  CHECK(res.pairs_checked == 2000);
  CHECK(res.violations == 0);
}

TEST_CASE("hypothesis filter excludes distant pairs") {
  // With a tiny epsilon almost everything is filtered; whatever remains
  // satisfies the hypothesis by construction.
  auto ax = MetricField<2>::axis_scaling(kUnit, 0.5);
  const Grid<2> grid{kUnit, {64, 64}};
  const double eps = 1.5 * grid.cell_diagonal();
  const auto res = verify_asymmetry_lemma(ax, grid, 0.6, eps, 100, 11);
  CHECK(res.violations == 0);
  CHECK(res.pairs_checked < 100 * 64);
}

TEST_CASE("dw beta formula on the hand-computable configuration") {
  // Identity metric, v = (-1,0), w = (1,0), c = (0,1) equidistant at
  // eps = sqrt(2): beta = |eps^-2 (c-v)^t Q (w-v)| = 2 eps^-2 = 1.
  const Vec<2> v{{-1.0, 0.0}}, w{{1.0, 0.0}}, c{{0.0, 1.0}};
  const double eps = std::sqrt(2.0);
  const double beta =
      std::abs(bilinear_form(c - v, Mat<2>::identity(), w - v)) / (eps * eps);
  CHECK(beta == Catch::Approx(2.0 / (eps * eps)));
  CHECK(beta == Catch::Approx(1.0));
  // And alpha vanishes for any constant metric: Q_{c'} - Q_c = 0.
  const Mat<2> dq = Mat<2>::identity() - Mat<2>::identity();
  CHECK(bilinear_form(w - v, dq, c) == 0.0);
}

TEST_CASE("witness suite passes on a small identity scenario") {
  Box<2> box{{{-2.0, -2.0}}, {{2.0, 2.0}}};
  auto id = MetricField<2>::identity(box);
  const Grid<2> grid{box, {64, 64}};
  const auto net = greedy_build(id, DistanceKind::DW, grid, StopRule::sites(12));
  auto wres = find_neighbor_witnesses(net.diagram, net.net.sites, id);
  REQUIRE_FALSE(wres.witnesses.empty());
  VerifyContext<2> ctx{id, DistanceKind::DW, grid, net.net.epsilon, 0.0, 1.10};
  const auto suite = verify_witness_suite(ctx, net.net.sites, wres.witnesses);
  for (const auto& lemma : suite.lemmas) {
    INFO(lemma.id);
    CHECK(lemma.violations == 0);
  }
}

TEST_CASE("full verification on identity sites keeps the implication") {
  auto id = MetricField<2>::identity(kUnit);
  std::mt19937_64 rng(71);
  std::vector<Vec<2>> sites;
  for (int i = 0; i < 14; ++i)
    sites.push_back({{0.05 + 0.9 * rand_unit(rng), 0.05 + 0.9 * rand_unit(rng)}});
  const Grid<2> grid{kUnit, {96, 96}};
  auto d = label_grid(sites, id, DistanceKind::DW, grid);
  const double eps =
      check_cover(sites, 0.0, id, DistanceKind::DW, grid).worst_distance;
  VerifyContext<2> ctx{id, DistanceKind::DW, grid, eps, 0.0, 1.10};
  auto rep = run_verification("identity-unit", ctx, sites, d);
  CHECK(rep.below_threshold);  // sigma = 0
  CHECK(rep.orphan_count == 0);
  CHECK(rep.implication_holds);
  CHECK(rep.all_checks_pass);
  CHECK(rep.star_violations == 0);
  // Report serializes and parses back.
  const auto text = canonical_dump(rep.to_json());
  const auto back = nlohmann::json::parse(text);
  CHECK(back.at("kind") == "DW");
  CHECK(back.at("orphan_count") == 0);
}

TEST_CASE("demo produces the planted orphan at documented defaults") {
  auto sc = cover_insufficiency_demo();
  CHECK(sc.confirmed_orphans >= 1);
  CHECK(sc.separation == kDemoDefaultSeparation);
  CHECK(sc.perturbation == kDemoDefaultPerturbation);
  // Cover holds at the measured radius; packing fails there.
  const auto cover =
      check_cover(sc.sites, 1e9, sc.field, DistanceKind::DW, sc.grid);
  CHECK(cover.worst_distance < 0.3);
  const auto packing =
      check_packing(sc.sites, cover.worst_distance, sc.field, DistanceKind::DW);
  CHECK_FALSE(packing.holds);
  CHECK(packing.first == 0);
  CHECK(packing.second == 1);
}

TEST_CASE("demo trivial limits produce no orphan") {
  for (auto [sep, pert] : {std::pair{0.01, 0.0}, std::pair{0.35, 0.8}}) {
    auto sc = build_demo_scenario(sep, pert, {128, 128});
    auto d = label_grid(sc.sites, sc.field, DistanceKind::DW, sc.grid);
    find_orphans(d, sc.sites, sc.field);
    INFO("sep=" << sep << " pert=" << pert);
    CHECK(d.confirmed_orphans.empty());
  }
}

TEST_CASE("demo sweep failure carries its log") {
  // Far-separated sites never orphan at any swept perturbation.
  try {
    cover_insufficiency_demo(0.45, 0.0, {96, 96});
    FAIL("expected DemoConstructionFailure");
  } catch (const DemoConstructionFailure& e) {
    CHECK(e.sweep_log.size() >= 2);
  }
}

TEST_CASE("demo parameter validation") {
  CHECK_THROWS_AS(build_demo_scenario(0.0, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(build_demo_scenario(0.01, 1.0), std::invalid_argument);
}
