// Command-line front end. One JSON config drives every subcommand;
// individual fields can be overridden with --set dotted.path=value.
//
// Exit codes: 0 ok, 1 verification failure, 2 config or input-file
// error, 3 site budget exhausted, 4 demo construction failure.

#include <CLI11.hpp>

#include "anisovoro/anisovoro.hpp"

#include <filesystem>
#include <iostream>

namespace fs = std::filesystem;
using namespace anisovoro;

namespace {

struct CliArgs {
  std::string config_path;
  std::vector<std::string> sets;
  std::string out_dir_override;
  int threads = 0;  // 0: ANISOVORO_THREADS or hardware default
  // demo-fig1 options
  double demo_separation = kDemoDefaultSeparation;
  double demo_perturbation = kDemoDefaultPerturbation;
  bool demo_sweep = false;
};

int resolve_threads(int flag) { return flag > 0 ? flag : default_thread_count(); }

RunConfig load_config(const CliArgs& args) {
  if (args.config_path.empty()) throw ConfigError("config", "missing --config file");
  if (!fs::exists(args.config_path))
    throw ConfigError("config", "no such file: " + args.config_path);
  nlohmann::json j = nlohmann::json::parse(read_text_file(args.config_path));
  for (const auto& s : args.sets) apply_set_override(j, s);
  RunConfig c = parse_config(j);
  if (!args.out_dir_override.empty()) c.out_dir = args.out_dir_override;
  return c;
}

template <int N>
MetricField<N> build_field(const RunConfig& c) {
  const Box<N> box = config_box<N>(c);
  if (c.metric.contains("plgrid")) {
    const std::string path = c.metric.at("plgrid").get<std::string>();
    if (!fs::exists(path)) throw ConfigError("metric.plgrid", "no such file: " + path);
    return MetricField<N>::from_json(nlohmann::json::parse(read_text_file(path)));
  }
  return metric_from_preset_spec<N>(box, c.metric);
}

template <int N>
SigmaEstimate<N> run_sigma(const RunConfig& c, const MetricField<N>& field, int threads) {
  SigmaOptions opt;
  opt.refine_rounds = c.sigma_refine_rounds;
  opt.pair_budget = c.sigma_pair_budget;
  opt.threads = threads;
  return estimate_sigma(field, config_sigma_grid<N>(c), opt);
}

template <int N>
nlohmann::json sigma_to_json(const SigmaEstimate<N>& s) {
  nlohmann::json j;
  j["sigma_hat"] = s.sigma_hat;
  j["pairs_sampled"] = s.pairs_sampled;
  j["refinement_rounds"] = s.refinement_rounds;
  j["attaining_pair"] = {detail::vec_to_json<N>(s.attaining_a),
                         detail::vec_to_json<N>(s.attaining_b)};
  return j;
}

template <int N>
int cmd_build_net(const RunConfig& c, int threads) {
  const auto field = build_field<N>(c);
  const Grid<N> grid = config_grid<N>(c);
  StopRule stop;
  nlohmann::json summary;
  if (c.stop_kind == RunConfig::StopKind::TargetEpsSigma) {
    const auto sig = run_sigma(c, field, threads);
    if (sig.sigma_hat == 0) {
      stop = StopRule::sites(c.stop_sites);
    } else {
      stop = StopRule::target(c.stop_value / sig.sigma_hat);
    }
    summary["sigma"] = sigma_to_json(sig);
  } else if (c.stop_kind == RunConfig::StopKind::TargetEpsilon) {
    stop = StopRule::target(c.stop_value);
  } else if (c.stop_kind == RunConfig::StopKind::OrphanFree) {
    stop = StopRule::orphan_free();
    summary["sigma"] = sigma_to_json(run_sigma(c, field, threads));
  } else {
    stop = StopRule::sites(c.stop_sites);
  }

  GreedyOptions<N> opt;
  opt.check_every = c.check_every;
  opt.max_sites = c.max_sites;
  opt.threads = threads;
  opt.orphan_options.threads = threads;
  const auto result = greedy_build(field, c.kind, grid, stop, opt);

  fs::create_directories(c.out_dir);
  write_text_file(fs::path(c.out_dir) / "sites.csv", sites_to_csv(result.net.sites));
  write_text_file(fs::path(c.out_dir) / "net.json",
                  canonical_dump(net_sidecar(result.net, grid, c.seed)));
  summary["site_count"] = result.net.sites.size();
  summary["epsilon_hat"] = result.net.epsilon;
  summary["budget_exhausted"] = result.budget_exhausted;
  summary["orphan_checks_run"] = result.orphan_checks_run;
  if (summary.contains("sigma"))
    summary["eps_sigma"] =
        result.net.epsilon * summary["sigma"]["sigma_hat"].get<double>();
  write_text_file(fs::path(c.out_dir) / "summary.json", canonical_dump(summary));
  std::cout << "sites=" << result.net.sites.size()
            << " epsilon_hat=" << format_double(result.net.epsilon) << "\n";
  return result.budget_exhausted ? 3 : 0;
}

template <int N>
std::vector<Vec<N>> load_sites(const RunConfig& c) {
  const fs::path path = fs::path(c.out_dir) / "sites.csv";
  if (!fs::exists(path))
    throw ConfigError("out_dir", "missing net file: " + path.string());
  return sites_from_csv<N>(read_text_file(path));
}

template <int N>
void write_rasters(const RunConfig& c, const LabeledDiagram<N>& d) {
  const auto mask = orphan_mask(d);
  Grid<2> g2;
  std::vector<int32_t> l2;
  std::vector<uint8_t> m2;
  if constexpr (N == 2) {
    g2 = d.grid;
    l2 = d.labels;
    m2 = mask;
  } else {
    slice_labels(d.grid, d.labels, mask, g2, l2, m2);
  }
  write_text_file(fs::path(c.out_dir) / "labels.pgm", labels_to_pgm(g2, l2));
  write_text_file(fs::path(c.out_dir) / "labels.ppm", labels_to_ppm(g2, l2, m2));
}

template <int N>
int cmd_render(const RunConfig& c, int threads) {
  const auto field = build_field<N>(c);
  const Grid<N> grid = config_grid<N>(c);
  const auto sites = load_sites<N>(c);
  auto d = label_grid(sites, field, c.kind, grid, threads);
  find_orphans(d, sites, field, {.threads = threads});
  write_rasters(c, d);
  std::cout << "wrote labels.pgm and labels.ppm to " << c.out_dir << "\n";
  return 0;
}

template <int N>
int cmd_check_orphans(const RunConfig& c, int threads) {
  const auto field = build_field<N>(c);
  const Grid<N> grid = config_grid<N>(c);
  const auto sites = load_sites<N>(c);
  auto d = label_grid(sites, field, c.kind, grid, threads);
  find_orphans(d, sites, field, {.threads = threads});
  write_text_file(fs::path(c.out_dir) / "components.json",
                  canonical_dump(components_to_json(d)));
  std::cout << "components=" << d.components.size()
            << " confirmed_orphans=" << d.confirmed_orphans.size()
            << " suspects=" << d.dropped_suspects.size() << "\n";
  return 0;
}

template <int N>
int cmd_estimate_sigma(const RunConfig& c, int threads) {
  const auto field = build_field<N>(c);
  const auto sig = run_sigma(c, field, threads);
  nlohmann::json j = sigma_to_json(sig);
  j["pair_budget"] = c.sigma_pair_budget;
  fs::create_directories(c.out_dir);
  write_text_file(fs::path(c.out_dir) / "sigma.json", canonical_dump(j));
  std::cout << "sigma_hat=" << format_double(sig.sigma_hat) << "\n";
  return 0;
}

template <int N>
int cmd_verify(const RunConfig& c, int threads) {
  const auto field = build_field<N>(c);
  const Grid<N> grid = config_grid<N>(c);
  const auto sites = load_sites<N>(c);

  double epsilon = 0;
  const fs::path sidecar = fs::path(c.out_dir) / "net.json";
  if (fs::exists(sidecar)) {
    epsilon = nlohmann::json::parse(read_text_file(sidecar)).at("epsilon").get<double>();
  } else {
    epsilon = check_cover(sites, 0.0, field, c.kind, grid, threads).worst_distance;
  }
  const auto sig = run_sigma(c, field, threads);

  auto d = label_grid(sites, field, c.kind, grid, threads);
  VerifyContext<N> ctx{field, c.kind, grid, epsilon, sig.sigma_hat, c.safety_factor};
  auto report = run_verification("cli", ctx, sites, d, c.samples_per_cell_segment, threads);
  write_text_file(fs::path(c.out_dir) / "report.json", canonical_dump(report.to_json()));
  write_text_file(fs::path(c.out_dir) / "sigma.json", canonical_dump(sigma_to_json(sig)));
  std::cout << "eps_sigma=" << format_double(report.eps_sigma)
            << " threshold=" << format_double(report.threshold)
            << " orphans=" << report.orphan_count
            << " all_checks_pass=" << (report.all_checks_pass ? "yes" : "no") << "\n";
  return report.all_checks_pass ? 0 : 1;
}

int cmd_demo(const CliArgs& args) {
  const int threads = resolve_threads(args.threads);
  const std::string out_dir =
      args.out_dir_override.empty() ? "demo_out" : args.out_dir_override;
  DemoScenario sc = args.demo_sweep
                        ? cover_insufficiency_demo(args.demo_separation, 0.0,
                                                   {256, 256}, threads)
                        : cover_insufficiency_demo(args.demo_separation,
                                                   args.demo_perturbation, {256, 256},
                                                   threads);
  auto d = label_grid(sc.sites, sc.field, DistanceKind::DW, sc.grid, threads);
  find_orphans(d, sc.sites, sc.field, {.threads = threads});
  const auto cover = check_cover(sc.sites, 0.0, sc.field, DistanceKind::DW, sc.grid,
                                 threads);
  const auto packing =
      check_packing(sc.sites, cover.worst_distance, sc.field, DistanceKind::DW);

  fs::create_directories(out_dir);
  write_text_file(fs::path(out_dir) / "sites.csv", sites_to_csv(sc.sites));
  write_text_file(fs::path(out_dir) / "metric_plgrid.json",
                  canonical_dump(sc.field.to_json()));
  write_text_file(fs::path(out_dir) / "labels.ppm",
                  labels_to_ppm(sc.grid, d.labels, orphan_mask(d)));
  nlohmann::json rep;
  rep["separation"] = sc.separation;
  rep["perturbation"] = sc.perturbation;
  rep["confirmed_orphans"] = d.confirmed_orphans.size();
  rep["cover_epsilon"] = cover.worst_distance;
  rep["packing_holds_at_cover_epsilon"] = packing.holds;
  if (!packing.holds) rep["packing_violating_pair"] = {packing.first, packing.second};
  rep["sweep_log"] = sc.sweep_log;
  write_text_file(fs::path(out_dir) / "demo_report.json", canonical_dump(rep));
  std::cout << "confirmed_orphans=" << d.confirmed_orphans.size()
            << " cover_epsilon=" << format_double(cover.worst_distance)
            << " packing_holds=" << (packing.holds ? "yes" : "no") << "\n";
  return 0;
}

template <template <int> class Fn>
int dispatch(const CliArgs& args) {
  const RunConfig c = load_config(args);
  const int threads = resolve_threads(args.threads);
  if (c.dim == 2) return Fn<2>::run(c, threads);
  return Fn<3>::run(c, threads);
}

template <int N>
struct BuildNetCmd {
  static int run(const RunConfig& c, int t) { return cmd_build_net<N>(c, t); }
};
template <int N>
struct RenderCmd {
  static int run(const RunConfig& c, int t) { return cmd_render<N>(c, t); }
};
template <int N>
struct CheckOrphansCmd {
  static int run(const RunConfig& c, int t) { return cmd_check_orphans<N>(c, t); }
};
template <int N>
struct EstimateSigmaCmd {
  static int run(const RunConfig& c, int t) { return cmd_estimate_sigma<N>(c, t); }
};
template <int N>
struct VerifyCmd {
  static int run(const RunConfig& c, int t) { return cmd_verify<N>(c, t); }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"anisotropic Voronoi nets, diagrams and verification"};
  app.require_subcommand(1);
  CliArgs args;

  auto add_common = [&](CLI::App* sub, bool needs_config) {
    if (needs_config)
      sub->add_option("--config", args.config_path, "JSON run configuration");
    sub->add_option("--set", args.sets, "override config fields, key.path=value");
    sub->add_option("--threads", args.threads,
                    "worker threads (default: ANISOVORO_THREADS or logical cores)");
    sub->add_option("--out-dir", args.out_dir_override, "output directory override");
  };

  auto* build = app.add_subcommand("build-net", "greedy farthest-point net construction");
  add_common(build, true);
  auto* render = app.add_subcommand("render", "rasterize a labeled diagram to PGM/PPM");
  add_common(render, true);
  auto* orphans = app.add_subcommand("check-orphans", "label and report components");
  add_common(orphans, true);
  auto* sigma = app.add_subcommand("estimate-sigma", "sample the metric variation bound");
  add_common(sigma, true);
  auto* verify = app.add_subcommand("verify", "run the full lemma and theorem suite");
  add_common(verify, true);
  auto* demo = app.add_subcommand("demo-fig1", "cover-insufficiency counterexample");
  add_common(demo, false);
  demo->add_option("--separation", args.demo_separation, "distance between v and w");
  demo->add_option("--perturbation", args.demo_perturbation, "off-diagonal magnitude");
  demo->add_flag("--sweep", args.demo_sweep, "sweep the perturbation ladder from scratch");

  CLI11_PARSE(app, argc, argv);

  try {
    if (build->parsed()) return dispatch<BuildNetCmd>(args);
    if (render->parsed()) return dispatch<RenderCmd>(args);
    if (orphans->parsed()) return dispatch<CheckOrphansCmd>(args);
    if (sigma->parsed()) return dispatch<EstimateSigmaCmd>(args);
    if (verify->parsed()) return dispatch<VerifyCmd>(args);
    if (demo->parsed()) return cmd_demo(args);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const DemoConstructionFailure& e) {
    std::cerr << "error: " << e.what() << "\n";
    for (const auto& line : e.sweep_log) std::cerr << "  " << line << "\n";
    return 4;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: config json: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
