#pragma once

#include <adjstress/generators.hpp>
#include <adjstress/metrics.hpp>
#include <adjstress/records.hpp>
#include <adjstress/render.hpp>
#include <adjstress/sgd.hpp>

#include <atomic>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <thread>

namespace adjstress {

enum class SaveLayouts { none, first, all };

/// Parameters of a sweep: every input graph x grid value x trial.
struct ExperimentConfig {
  std::vector<std::string> inputs;
  Method method = Method::full;
  /// p values for lr, k values for daf/das, {0} for full/sparse.
  std::vector<double> grid = {0.0};
  std::size_t trials = 100;
  std::uint64_t base_seed = 0;
  SgdParams sgd;
  std::size_t pivots = 200;
  ReconstructionMode mode = ReconstructionMode::signed_eigenvalues;
  std::filesystem::path out = "out";
  bool write_csv = true;
  bool write_json = false;
  bool boxplots = true;
  SaveLayouts save_layouts = SaveLayouts::none;
  std::size_t threads = 0;
  /// When false, elapsed_s is written as 0 so that records are byte-stable.
  bool record_timing = false;
  bool compare_baseline = false;
  double improvement_threshold = 0.10;

  void validate() const {
    if (inputs.empty())
      throw ConfigError("no inputs given");
    if (trials < 1)
      throw ConfigError("trials must be at least 1");
    if (grid.empty())
      throw ConfigError("parameter grid is empty");
    if (pivots < 1)
      throw ConfigError("pivots must be at least 1");
    for (double v : grid) {
      switch (method) {
      case Method::lr:
        if (!(v >= 0.0 && v < 100.0))
          throw ConfigError("percentile " + format_double(v, 9) + " outside [0, 100)");
        break;
      case Method::daf:
      case Method::das:
        if (!(v >= 0.0) || v != std::floor(v) || v > 60)
          throw ConfigError("k must be a nonnegative integer, got " + format_double(v, 9));
        break;
      case Method::full:
      case Method::sparse:
        if (v != 0.0)
          throw ConfigError("method " + to_string(method) + " takes no parameter grid");
        break;
      }
    }
    try {
      sgd.validate();
    } catch (const Error& e) {
      throw ConfigError(e.what());
    }
  }
};

namespace detail {

inline std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos)
    return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

inline std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    auto piece = trim(s.substr(start, pos == std::string_view::npos ? pos : pos - start));
    if (!piece.empty())
      out.push_back(std::move(piece));
    if (pos == std::string_view::npos)
      break;
    start = pos + 1;
  }
  return out;
}

inline bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "yes" || v == "1" || v == "on")
    return true;
  if (v == "false" || v == "no" || v == "0" || v == "off")
    return false;
  throw ConfigError("key '" + key + "' expects a boolean, got '" + v + "'");
}

inline double config_number(const std::string& key, const std::string& v) {
  try {
    return parse_double(v);
  } catch (const ParseError&) {
    throw ConfigError("key '" + key + "' expects a number, got '" + v + "'");
  }
}

inline std::uint64_t config_count(const std::string& key, const std::string& v) {
  const double x = config_number(key, v);
  if (!(x >= 0.0) || x != std::floor(x) || x > 1.8e19)
    throw ConfigError("key '" + key + "' expects a nonnegative integer, got '" + v + "'");
  return static_cast<std::uint64_t>(x);
}

/// "0,10,20" or an inclusive range "start:stop:step".
inline std::vector<double> parse_grid(const std::string& v) {
  std::vector<double> out;
  for (const std::string& item : split(v, ',')) {
    const auto parts = split(item, ':');
    if (parts.size() == 1) {
      out.push_back(config_number("grid", parts[0]));
    } else if (parts.size() == 3) {
      const double start = config_number("grid", parts[0]);
      const double stop = config_number("grid", parts[1]);
      const double step = config_number("grid", parts[2]);
      if (!(step > 0.0))
        throw ConfigError("grid range step must be positive");
      for (std::size_t k = 0;; ++k) {
        const double x = start + step * static_cast<double>(k);
        if (x > stop + 1e-9 * step)
          break;
        out.push_back(x);
      }
    } else {
      throw ConfigError("malformed grid item '" + item + "'");
    }
  }
  return out;
}

} // namespace detail

/// Reads the flat "key = value" config format. '#' starts a comment.
/// `input` may repeat or hold a comma-separated list.
inline ExperimentConfig parse_config(std::istream& in) {
  ExperimentConfig cfg;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos)
      line.erase(hash);
    const std::string content = detail::trim(line);
    if (content.empty())
      continue;
    const auto eq = content.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
    const std::string key = detail::trim(std::string_view(content).substr(0, eq));
    const std::string value = detail::trim(std::string_view(content).substr(eq + 1));

    if (key == "input" || key == "inputs") {
      for (auto& item : detail::split(value, ','))
        cfg.inputs.push_back(item);
    } else if (key == "method") {
      cfg.method = parse_method(value);
    } else if (key == "grid") {
      cfg.grid = detail::parse_grid(value);
    } else if (key == "trials") {
      cfg.trials = detail::config_count(key, value);
    } else if (key == "base_seed" || key == "seed") {
      cfg.base_seed = detail::config_count(key, value);
    } else if (key == "iters" || key == "iterations") {
      cfg.sgd.iterations = detail::config_count(key, value);
    } else if (key == "eps") {
      cfg.sgd.eps = detail::config_number(key, value);
    } else if (key == "dmin") {
      cfg.sgd.d_min = detail::config_number(key, value);
    } else if (key == "dimension") {
      cfg.sgd.dimension = detail::config_count(key, value);
    } else if (key == "pivots") {
      cfg.pivots = detail::config_count(key, value);
    } else if (key == "mode") {
      if (value == "signed")
        cfg.mode = ReconstructionMode::signed_eigenvalues;
      else if (value == "hermitian")
        cfg.mode = ReconstructionMode::hermitian;
      else
        throw ConfigError("mode must be signed or hermitian");
    } else if (key == "out") {
      cfg.out = value;
    } else if (key == "formats") {
      cfg.write_csv = cfg.write_json = false;
      for (const auto& f : detail::split(value, ',')) {
        if (f == "csv")
          cfg.write_csv = true;
        else if (f == "json")
          cfg.write_json = true;
        else
          throw ConfigError("unknown record format '" + f + "'");
      }
    } else if (key == "boxplots") {
      cfg.boxplots = detail::parse_bool(key, value);
    } else if (key == "save_layouts") {
      if (value == "none")
        cfg.save_layouts = SaveLayouts::none;
      else if (value == "first")
        cfg.save_layouts = SaveLayouts::first;
      else if (value == "all")
        cfg.save_layouts = SaveLayouts::all;
      else
        throw ConfigError("save_layouts must be none, first or all");
    } else if (key == "threads") {
      cfg.threads = detail::config_count(key, value);
    } else if (key == "record_timing") {
      cfg.record_timing = detail::parse_bool(key, value);
    } else if (key == "compare_baseline") {
      cfg.compare_baseline = detail::parse_bool(key, value);
    } else if (key == "improvement_threshold") {
      cfg.improvement_threshold = detail::config_number(key, value);
    } else {
      throw ConfigError("line " + std::to_string(line_no) + ": unknown key '" + key + "'");
    }
  }
  cfg.validate();
  return cfg;
}

inline ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in)
    throw ConfigError("cannot open config file " + path.string());
  return parse_config(in);
}

/// A graph ready for trials: APSP (and the spectrum for lr) computed once.
struct PreparedGraph {
  std::string name;
  Graph graph;
  DistanceMatrix distances;
  double setup_seconds = 0.0;
  std::optional<Spectrum> spectrum;
};

/// Input spec: a Matrix Market path, or "gen:<kind>:<size>" with kind in
/// path, cycle, grid (RxC), star, complete; "gen:claw" is star:3.
inline std::pair<std::string, Graph> load_input(const std::string& spec) {
  if (spec.rfind("gen:", 0) == 0) {
    const auto parts = detail::split(spec.substr(4), ':');
    if (parts.empty())
      throw Error("empty generator spec");
    const std::string& kind = parts[0];
    auto arg = [&](std::size_t idx) -> std::size_t {
      if (parts.size() <= idx)
        throw Error("generator '" + kind + "' needs a size");
      return static_cast<std::size_t>(detail::config_count("gen", parts[idx]));
    };
    std::string name = spec.substr(4);
    std::replace(name.begin(), name.end(), ':', '_');
    if (kind == "path") return {name, generators::path(arg(1))};
    if (kind == "cycle") return {name, generators::cycle(arg(1))};
    if (kind == "star") return {name, generators::star(arg(1))};
    if (kind == "complete") return {name, generators::complete(arg(1))};
    if (kind == "claw") return {name, generators::star(3)};
    if (kind == "grid") {
      if (parts.size() < 2)
        throw Error("grid generator needs RxC");
      const auto dims = detail::split(parts[1], 'x');
      if (dims.size() != 2)
        throw Error("grid generator needs RxC");
      return {name, generators::grid(detail::config_count("gen", dims[0]),
                                     detail::config_count("gen", dims[1]))};
    }
    throw Error("unknown generator '" + kind + "'");
  }
  std::ifstream in(spec);
  if (!in)
    throw Error("cannot open " + spec);
  auto parsed = parse_matrix_market(in);
  return {std::filesystem::path(spec).stem().string(), std::move(parsed.graph)};
}

/// APSP is always computed (stress is scored against it). Its cost counts
/// toward setup_seconds only for the methods that optimise against it.
inline PreparedGraph prepare_graph(std::string name, Graph graph, Method method) {
  if (!is_connected(graph))
    throw Error("graph " + name + " is not connected");
  PreparedGraph out;
  out.name = std::move(name);
  out.graph = std::move(graph);
  const auto start = std::chrono::steady_clock::now();
  out.distances = bfs_all_pairs(out.graph);
  if (method == Method::lr)
    out.spectrum = eigendecompose(double_center(out.distances));
  if (method != Method::sparse && method != Method::das)
    out.setup_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

struct TrialOutput {
  Layout layout;
  TrialRecord record;
};

/// Runs one method at one parameter value with one seed and scores the
/// result against the original graph distances.
///
/// Pivots for sparse/das are drawn from stream RngStream::pivots of the
/// trial seed; the layout uses stream RngStream::layout.
inline TrialOutput run_trial(const PreparedGraph& g, Method method, double param,
                             std::uint64_t seed, const SgdParams& base_params, std::size_t pivots,
                             ReconstructionMode mode = ReconstructionMode::signed_eigenvalues) {
  SgdParams params = base_params;
  params.seed = seed;
  const auto start = std::chrono::steady_clock::now();

  Layout x;
  switch (method) {
  case Method::full:
    x = full_sgd(g.graph, g.distances, AdjustParams{}, params);
    break;
  case Method::daf:
    x = full_sgd(g.graph, g.distances, AdjustParams::from_k(static_cast<int>(param)), params);
    break;
  case Method::lr: {
    const Spectrum spectrum =
        g.spectrum ? *g.spectrum : eigendecompose(double_center(g.distances));
    const DistanceMatrix adjusted = reconstruct_distance_matrix(
        spectrum, percentile_mask(spectrum.values, param), params.d_min, mode);
    x = full_sgd(g.graph, adjusted, AdjustParams{}, params);
    break;
  }
  case Method::sparse:
  case Method::das: {
    Rng pivot_rng = make_rng(seed, RngStream::pivots);
    const PivotSet pivot_set = choose_pivots(g.graph, pivots, pivot_rng);
    const SparseDistanceSet sparse = sparse_shortest_paths(g.graph, pivot_set);
    const AdjustParams adjust =
        method == Method::das ? AdjustParams::from_k(static_cast<int>(param)) : AdjustParams{};
    x = sparse_sgd(g.graph, sparse, adjust, params);
    break;
  }
  }
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  TrialOutput out;
  out.record.graph = g.name;
  out.record.method = method;
  out.record.param = param;
  out.record.seed = seed;
  out.record.elapsed_s = elapsed;
  out.record.report = full_report(x, g.graph, g.distances);
  out.layout = std::move(x);
  return out;
}

struct SweepResult {
  std::vector<TrialRecord> records;
  std::vector<std::string> failures;
  /// Layouts kept according to ExperimentConfig::save_layouts, same order as
  /// `saved_records`.
  std::vector<Layout> saved_layouts;
  std::vector<TrialRecord> saved_records;
  std::vector<Condition> conditions;
  /// Graphs that loaded successfully, for rendering saved layouts.
  std::map<std::string, Graph> graphs;

  /// 0 when every trial succeeded, 1 on partial failure or no records.
  int exit_code() const { return failures.empty() && !records.empty() ? 0 : 1; }
};

/// Runs every (graph, parameter, trial) combination with seed
/// base_seed + trial. Graphs or trials that fail are logged and skipped.
/// Records come back sorted by (graph, method, param, seed).
inline SweepResult run_sweep(const ExperimentConfig& config) {
  config.validate();
  SweepResult result;
  std::vector<PreparedGraph> graphs;
  for (const std::string& input : config.inputs) {
    try {
      auto [name, graph] = load_input(input);
      graphs.push_back(prepare_graph(std::move(name), std::move(graph), config.method));
    } catch (const std::exception& e) {
      result.failures.push_back(input + ": " + e.what());
      warn("skipping input " + input + ": " + e.what());
    }
  }
  for (const PreparedGraph& g : graphs) {
    result.graphs.emplace(g.name, g.graph);
    for (double p : config.grid)
      result.conditions.push_back(Condition{g.name, config.method, p});
  }

  struct Task {
    std::size_t graph;
    double param;
    std::size_t trial;
  };
  std::vector<Task> tasks;
  for (std::size_t gi = 0; gi < graphs.size(); ++gi)
    for (double p : config.grid)
      for (std::size_t t = 0; t < config.trials; ++t)
        tasks.push_back(Task{gi, p, t});

  std::vector<std::optional<TrialOutput>> outputs(tasks.size());
  std::vector<std::string> task_errors(tasks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < tasks.size(); k = next++) {
      const Task& task = tasks[k];
      const PreparedGraph& g = graphs[task.graph];
      try {
        auto out = run_trial(g, config.method, task.param, config.base_seed + task.trial,
                             config.sgd, config.pivots, config.mode);
        out.record.elapsed_s = config.record_timing ? out.record.elapsed_s + g.setup_seconds : 0.0;
        const bool keep = config.save_layouts == SaveLayouts::all ||
                          (config.save_layouts == SaveLayouts::first && task.trial == 0);
        if (!keep)
          out.layout = Layout{};
        outputs[k] = std::move(out);
      } catch (const std::exception& e) {
        task_errors[k] = g.name + " param " + format_double(task.param, 9) + " trial " +
                         std::to_string(task.trial) + ": " + e.what();
      }
    }
  };
  std::size_t threads = config.threads != 0 ? config.threads
                                            : std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, std::max<std::size_t>(tasks.size(), 1));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < threads; ++t)
      pool.emplace_back(worker);
  }

  for (std::size_t k = 0; k < tasks.size(); ++k) {
    if (!task_errors[k].empty()) {
      result.failures.push_back(task_errors[k]);
      warn(task_errors[k]);
      continue;
    }
    if (outputs[k]->layout.size() > 0) {
      result.saved_layouts.push_back(std::move(outputs[k]->layout));
      result.saved_records.push_back(outputs[k]->record);
    }
    result.records.push_back(std::move(outputs[k]->record));
  }
  sort_records(result.records);
  return result;
}

namespace detail {

inline void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw Error("cannot write " + path.string());
  out << text;
}

inline std::string file_tag(const TrialRecord& r) {
  return r.graph + "_" + to_string(r.method) + "_" + format_double(r.param, kRecordDigits) +
         "_seed" + std::to_string(r.seed);
}

} // namespace detail

/// Writes records, summary, boxplots, comparisons and saved layouts under
/// config.out.
inline void write_sweep_outputs(const ExperimentConfig& config, const SweepResult& result) {
  namespace fs = std::filesystem;
  fs::create_directories(config.out);
  if (config.write_csv) {
    std::ostringstream s;
    write_records_csv(s, result.records);
    detail::write_text(config.out / "records.csv", s.str());
  }
  if (config.write_json) {
    std::ostringstream s;
    write_records_json(s, result.records);
    detail::write_text(config.out / "records.json", s.str());
  }
  const auto stats = summarize(result.records, result.conditions);
  {
    std::ostringstream s;
    write_summary_csv(s, stats);
    detail::write_text(config.out / "summary.csv", s.str());
  }
  if (config.boxplots && !stats.empty()) {
    fs::create_directories(config.out / "boxplots");
    std::map<std::pair<std::string, std::string>, std::vector<ConditionStats>> by_series;
    for (const ConditionStats& s : stats)
      by_series[{s.condition.graph, to_string(s.condition.method)}].push_back(s);
    for (const auto& [series, conds] : by_series)
      for (std::size_t m = 0; m < kMetricNames.size(); ++m)
        detail::write_text(config.out / "boxplots" /
                               (series.first + "_" + series.second + "_" + kMetricNames[m] + ".svg"),
                           render_boxplot_svg(conds, m,
                                              series.first + " " + series.second + " " +
                                                  kMetricNames[m]));
  }
  if (config.compare_baseline) {
    const auto rows = compare_to_baseline(stats, config.improvement_threshold);
    std::ostringstream a, b;
    write_improvements_csv(a, rows);
    write_improvement_counts_csv(b, rows);
    detail::write_text(config.out / "improvements.csv", a.str());
    detail::write_text(config.out / "improvement_counts.csv", b.str());
  }
  if (!result.saved_layouts.empty()) {
    fs::create_directories(config.out / "layouts");
    for (std::size_t k = 0; k < result.saved_layouts.size(); ++k) {
      const TrialRecord& r = result.saved_records[k];
      std::ostringstream s;
      write_layout(s, result.saved_layouts[k]);
      detail::write_text(config.out / "layouts" / (detail::file_tag(r) + ".txt"), s.str());
      if (auto it = result.graphs.find(r.graph); it != result.graphs.end())
        detail::write_text(config.out / "layouts" / (detail::file_tag(r) + ".svg"),
                           render_layout_svg(result.saved_layouts[k], it->second));
    }
  }
}

} // namespace adjstress
