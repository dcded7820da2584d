// Command-line front end: single layouts, metric reports and sweeps.

#include <adjstress/harness.hpp>

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

namespace fs = std::filesystem;
using namespace adjstress;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitConfig = 2;

struct LayoutOptions {
  std::string graph_path;
  std::string method = "full";
  std::optional<double> p;
  std::optional<int> k;
  std::uint64_t seed = 0;
  std::size_t iters = 15;
  double eps = 0.1;
  double dmin = 0.1;
  std::size_t pivots = 200;
  std::size_t dimension = 2;
  std::string mode = "signed";
  std::string out = ".";
  bool spectrum = false;
};

nlohmann::ordered_json report_json(const QualityReport& r) {
  nlohmann::ordered_json obj;
  const auto values = metric_values(r);
  for (std::size_t m = 0; m < values.size(); ++m)
    obj[kMetricNames[m]] = values[m];
  return obj;
}

int run_layout(const LayoutOptions& opt) {
  Method method;
  ReconstructionMode mode;
  double param = 0.0;
  SgdParams params;
  try {
    method = parse_method(opt.method);
    if (opt.mode == "signed")
      mode = ReconstructionMode::signed_eigenvalues;
    else if (opt.mode == "hermitian")
      mode = ReconstructionMode::hermitian;
    else
      throw ConfigError("--mode must be signed or hermitian");
    if (method == Method::lr) {
      if (opt.k)
        throw ConfigError("--k applies to daf/das; lr takes --p");
      param = opt.p.value_or(0.0);
      if (!(param >= 0.0 && param < 100.0))
        throw ConfigError("--p must lie in [0, 100)");
    } else if (method == Method::daf || method == Method::das) {
      if (opt.p)
        throw ConfigError("--p applies to lr; daf/das take --k");
      param = opt.k.value_or(0);
      if (param < 0)
        throw ConfigError("--k must be nonnegative");
    } else if (opt.p || opt.k) {
      throw ConfigError("method " + opt.method + " takes neither --p nor --k");
    }
    params.iterations = opt.iters;
    params.eps = opt.eps;
    params.d_min = opt.dmin;
    params.dimension = opt.dimension;
    params.validate();
  } catch (const Error& e) {
    std::cerr << "adjstress: " << e.what() << '\n';
    return kExitConfig;
  }

  try {
    auto [name, graph] = load_input(opt.graph_path);
    std::cerr << "adjstress: " << name << ": " << graph.size() << " nodes, " << graph.edge_count()
              << " edges\n";
    const PreparedGraph prepared = prepare_graph(name, std::move(graph), method);
    const TrialOutput trial =
        run_trial(prepared, method, param, opt.seed, params, opt.pivots, mode);

    fs::create_directories(opt.out);
    const std::string tag = name + "_" + to_string(method) +
                            (method == Method::lr    ? "_p" + format_double(param, 9)
                             : method == Method::daf ? "_k" + format_double(param, 9)
                             : method == Method::das ? "_k" + format_double(param, 9)
                                                     : std::string{}) +
                            "_seed" + std::to_string(opt.seed);
    {
      std::ofstream f(fs::path(opt.out) / (tag + ".layout.txt"));
      write_layout(f, trial.layout);
    }
    {
      std::ofstream f(fs::path(opt.out) / (tag + ".svg"), std::ios::binary);
      f << render_layout_svg(trial.layout, prepared.graph);
    }
    if (opt.spectrum && prepared.spectrum) {
      std::ofstream f(fs::path(opt.out) / (tag + ".spectrum.csv"));
      write_spectrum_csv(f, *prepared.spectrum, percentile_mask(prepared.spectrum->values, param));
    }
    nlohmann::ordered_json summary;
    summary["graph"] = name;
    summary["method"] = to_string(method);
    summary["param"] = param;
    summary["seed"] = opt.seed;
    summary["elapsed_s"] = trial.record.elapsed_s + prepared.setup_seconds;
    summary["metrics"] = report_json(trial.record.report);
    {
      std::ofstream f(fs::path(opt.out) / (tag + ".report.json"));
      f << summary.dump(2) << '\n';
    }
    std::cout << summary.dump(2) << '\n';
  } catch (const std::exception& e) {
    std::cerr << "adjstress: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitOk;
}

int run_report(const std::string& graph_path, const std::string& layout_path) {
  try {
    auto [name, graph] = load_input(graph_path);
    std::ifstream in(layout_path);
    if (!in)
      throw Error("cannot open " + layout_path);
    const Layout x = read_layout(in);
    const QualityReport r = full_report(x, graph, bfs_all_pairs(graph));
    std::cout << report_json(r).dump(2) << '\n';
  } catch (const std::exception& e) {
    std::cerr << "adjstress: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitOk;
}

int run_sweep_command(const std::string& config_path) {
  ExperimentConfig config;
  try {
    config = load_config(config_path);
  } catch (const Error& e) {
    std::cerr << "adjstress: config error: " << e.what() << '\n';
    return kExitConfig;
  }
  try {
    const SweepResult result = run_sweep(config);
    write_sweep_outputs(config, result);
    std::cerr << "adjstress: " << result.records.size() << " records written to "
              << config.out.string() << ", " << result.failures.size() << " failures\n";
    return result.exit_code();
  } catch (const std::exception& e) {
    std::cerr << "adjstress: " << e.what() << '\n';
    return kExitFailure;
  }
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stress-model graph layout with distance-matrix adjustment"};
  app.require_subcommand(1);

  LayoutOptions lo;
  auto* layout = app.add_subcommand("layout", "Lay out one graph and report its quality metrics");
  layout->add_option("graph", lo.graph_path, "Matrix Market file or gen:<kind>:<size>")->required();
  layout->add_option("--method", lo.method, "full | sparse | lr | daf | das")
      ->check(CLI::IsMember({"full", "sparse", "lr", "daf", "das"}));
  auto* p_opt = layout->add_option("--p", lo.p, "Eigenvalue percentile for lr, in [0, 100)");
  auto* k_opt = layout->add_option("--k", lo.k, "Adjustment exponent for daf/das: alpha = 1 - 0.5^k");
  p_opt->excludes(k_opt);
  layout->add_option("--seed", lo.seed, "Random seed");
  layout->add_option("--iters", lo.iters, "SGD iterations");
  layout->add_option("--eps", lo.eps, "Final step-size parameter");
  layout->add_option("--dmin", lo.dmin, "Minimum adjusted distance");
  layout->add_option("--pivots", lo.pivots, "Pivot count for sparse/das");
  layout->add_option("--dim", lo.dimension, "Embedding dimension (1-3)");
  layout->add_option("--mode", lo.mode, "lr reconstruction: signed | hermitian");
  layout->add_option("--out", lo.out, "Output directory");
  layout->add_flag("--spectrum", lo.spectrum, "Also write the eigenvalue spectrum (lr only)");

  std::string report_graph, report_layout;
  auto* report = app.add_subcommand("report", "Score an existing layout file");
  report->add_option("graph", report_graph, "Matrix Market file or gen:<kind>:<size>")->required();
  report->add_option("layout", report_layout, "Layout file (id x y per line)")->required();

  std::string config_path;
  auto* sweep = app.add_subcommand("sweep", "Run a multi-seed parameter sweep");
  sweep->add_option("--config", config_path, "Sweep config file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  if (*layout)
    return run_layout(lo);
  if (*report)
    return run_report(report_graph, report_layout);
  return run_sweep_command(config_path);
}
