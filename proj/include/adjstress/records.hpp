#pragma once

#include <adjstress/metrics.hpp>

#include <json.hpp>

#include <map>
#include <optional>
#include <tuple>

namespace adjstress {

enum class Method { full, sparse, lr, daf, das };

inline std::string to_string(Method m) {
  switch (m) {
  case Method::full: return "full";
  case Method::sparse: return "sparse";
  case Method::lr: return "lr";
  case Method::daf: return "daf";
  case Method::das: return "das";
  }
  return "full";
}

inline Method parse_method(std::string_view s) {
  if (s == "full") return Method::full;
  if (s == "sparse") return Method::sparse;
  if (s == "lr") return Method::lr;
  if (s == "daf") return Method::daf;
  if (s == "das") return Method::das;
  throw ConfigError("unknown method '" + std::string(s) + "' (expected full|sparse|lr|daf|das)");
}

/// One (graph, method, parameter, seed) trial and its quality report.
struct TrialRecord {
  std::string graph;
  Method method = Method::full;
  /// p for lr, k for daf/das, 0 otherwise.
  double param = 0.0;
  std::uint64_t seed = 0;
  double elapsed_s = 0.0;
  QualityReport report;

  auto key() const { return std::tuple(graph, to_string(method), param, seed); }
};

inline void sort_records(std::vector<TrialRecord>& records) {
  std::sort(records.begin(), records.end(),
            [](const TrialRecord& a, const TrialRecord& b) { return a.key() < b.key(); });
}

inline constexpr int kRecordDigits = 9;

namespace detail {

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos)
    return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"')
      out += '"';
    out += c;
  }
  return out + '"';
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t k = 0; k < line.size(); ++k) {
    const char c = line[k];
    if (quoted) {
      if (c == '"' && k + 1 < line.size() && line[k + 1] == '"') {
        cur += '"';
        ++k;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(cur));
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  fields.push_back(std::move(cur));
  return fields;
}

inline double rounded(double v) { return parse_double(format_double(v, kRecordDigits)); }

} // namespace detail

inline std::string records_csv_header() {
  std::string h = "graph,method,param,seed,elapsed_s";
  for (const char* name : kMetricNames)
    h += std::string(",") + name;
  return h;
}

/// CSV with a header row; numbers carry 9 significant digits.
inline void write_records_csv(std::ostream& out, const std::vector<TrialRecord>& records) {
  out << records_csv_header() << '\n';
  for (const TrialRecord& r : records) {
    out << detail::csv_field(r.graph) << ',' << to_string(r.method) << ','
        << format_double(r.param, kRecordDigits) << ',' << r.seed << ','
        << format_double(r.elapsed_s, kRecordDigits);
    for (double v : metric_values(r.report))
      out << ',' << format_double(v, kRecordDigits);
    out << '\n';
  }
}

inline std::vector<TrialRecord> read_records_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line))
    throw ParseError("empty records file");
  if (!line.empty() && line.back() == '\r')
    line.pop_back();
  if (line != records_csv_header())
    throw ParseError("unexpected records header: '" + line + "'");
  std::vector<TrialRecord> records;
  while (std::getline(in, line)) {
    if (line.empty())
      continue;
    auto f = detail::split_csv_line(line);
    if (f.size() != 5 + kMetricNames.size())
      throw ParseError("wrong field count in records line: '" + line + "'");
    TrialRecord r;
    r.graph = f[0];
    r.method = parse_method(f[1]);
    r.param = parse_double(f[2]);
    r.seed = std::stoull(f[3]);
    r.elapsed_s = parse_double(f[4]);
    std::array<double, 9> v{};
    for (std::size_t k = 0; k < v.size(); ++k)
      v[k] = parse_double(f[5 + k]);
    r.report = report_from_values(v);
    records.push_back(std::move(r));
  }
  return records;
}

/// JSON array of flat objects with the CSV column names.
inline nlohmann::ordered_json records_to_json(const std::vector<TrialRecord>& records) {
  auto arr = nlohmann::ordered_json::array();
  for (const TrialRecord& r : records) {
    nlohmann::ordered_json obj;
    obj["graph"] = r.graph;
    obj["method"] = to_string(r.method);
    obj["param"] = detail::rounded(r.param);
    obj["seed"] = r.seed;
    obj["elapsed_s"] = detail::rounded(r.elapsed_s);
    const auto values = metric_values(r.report);
    for (std::size_t k = 0; k < values.size(); ++k)
      obj[kMetricNames[k]] = detail::rounded(values[k]);
    arr.push_back(std::move(obj));
  }
  return arr;
}

inline void write_records_json(std::ostream& out, const std::vector<TrialRecord>& records) {
  out << records_to_json(records).dump(1) << '\n';
}

inline std::vector<TrialRecord> read_records_json(std::istream& in) {
  nlohmann::json arr;
  try {
    arr = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("records JSON: ") + e.what());
  }
  if (!arr.is_array())
    throw ParseError("records JSON must be an array");
  std::vector<TrialRecord> records;
  for (const auto& obj : arr) {
    try {
      TrialRecord r;
      r.graph = obj.at("graph").get<std::string>();
      r.method = parse_method(obj.at("method").get<std::string>());
      r.param = obj.at("param").get<double>();
      r.seed = obj.at("seed").get<std::uint64_t>();
      r.elapsed_s = obj.at("elapsed_s").get<double>();
      std::array<double, 9> v{};
      for (std::size_t k = 0; k < v.size(); ++k)
        v[k] = obj.at(kMetricNames[k]).get<double>();
      r.report = report_from_values(v);
      records.push_back(std::move(r));
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(std::string("records JSON: ") + e.what());
    }
  }
  return records;
}

struct BoxStats {
  double min = 0.0;
  double q1 = 0.0;
  double median = 0.0;
  double q3 = 0.0;
  double max = 0.0;
  double mean = 0.0;
};

/// Quantile by linear interpolation between order statistics (h = (n-1) q).
inline double quantile_sorted(const std::vector<double>& sorted, double q) {
  if (sorted.empty())
    throw Error("quantile of an empty sample");
  const double h = (static_cast<double>(sorted.size()) - 1.0) * q;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  if (lo + 1 >= sorted.size())
    return sorted.back();
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[lo + 1] - sorted[lo]);
}

inline BoxStats box_stats(std::vector<double> values) {
  if (values.empty())
    throw Error("box stats of an empty sample");
  std::sort(values.begin(), values.end());
  BoxStats s;
  s.min = values.front();
  s.max = values.back();
  s.q1 = quantile_sorted(values, 0.25);
  s.median = quantile_sorted(values, 0.5);
  s.q3 = quantile_sorted(values, 0.75);
  double sum = 0.0;
  for (double v : values)
    sum += v;
  s.mean = sum / static_cast<double>(values.size());
  return s;
}

struct Condition {
  std::string graph;
  Method method = Method::full;
  double param = 0.0;

  auto key() const { return std::tuple(graph, to_string(method), param); }
  friend bool operator==(const Condition& a, const Condition& b) { return a.key() == b.key(); }
};

struct ConditionStats {
  Condition condition;
  std::size_t count = 0;
  std::array<BoxStats, 9> metrics;
};

/// Per-condition box statistics for every metric, ordered by
/// (graph, method, param). Conditions listed in `expected` that have no
/// records are omitted with a warning.
inline std::vector<ConditionStats> summarize(const std::vector<TrialRecord>& records,
                                             const std::vector<Condition>& expected = {}) {
  std::map<std::tuple<std::string, std::string, double>, std::vector<const TrialRecord*>> groups;
  std::map<std::tuple<std::string, std::string, double>, Condition> conditions;
  for (const TrialRecord& r : records) {
    Condition c{r.graph, r.method, r.param};
    groups[c.key()].push_back(&r);
    conditions.emplace(c.key(), c);
  }
  for (const Condition& c : expected)
    if (!groups.contains(c.key()))
      warn("no records for condition " + c.graph + "/" + to_string(c.method) + "/" +
           format_double(c.param, kRecordDigits) + "; omitted from summary");

  std::vector<ConditionStats> out;
  for (const auto& [key, members] : groups) {
    ConditionStats s;
    s.condition = conditions.at(key);
    s.count = members.size();
    for (std::size_t m = 0; m < kMetricNames.size(); ++m) {
      std::vector<double> values;
      values.reserve(members.size());
      for (const TrialRecord* r : members)
        values.push_back(metric_values(r->report)[m]);
      s.metrics[m] = box_stats(std::move(values));
    }
    out.push_back(std::move(s));
  }
  return out;
}

inline void write_summary_csv(std::ostream& out, const std::vector<ConditionStats>& stats) {
  out << "graph,method,param,metric,count,min,q1,median,q3,max,mean\n";
  for (const ConditionStats& s : stats) {
    for (std::size_t m = 0; m < kMetricNames.size(); ++m) {
      const BoxStats& b = s.metrics[m];
      out << detail::csv_field(s.condition.graph) << ',' << to_string(s.condition.method) << ','
          << format_double(s.condition.param, kRecordDigits) << ',' << kMetricNames[m] << ','
          << s.count;
      for (double v : {b.min, b.q1, b.median, b.q3, b.max, b.mean})
        out << ',' << format_double(v, kRecordDigits);
      out << '\n';
    }
  }
}

/// Median of one condition compared against the parameter-0 baseline of
/// the same graph and method.
struct Improvement {
  Condition condition;
  std::size_t metric = 0;
  double baseline_median = 0.0;
  double median = 0.0;
  /// Positive when better, relative to |baseline|; infinite for a strict
  /// improvement over a zero baseline.
  double relative = 0.0;
  bool improved = false;
};

/// Median-vs-baseline comparison for every non-baseline condition; a metric
/// counts as improved when it is better by at least `threshold` (relative).
inline std::vector<Improvement> compare_to_baseline(const std::vector<ConditionStats>& stats,
                                                    double threshold = 0.10) {
  std::vector<Improvement> out;
  for (const ConditionStats& s : stats) {
    if (s.condition.param == 0.0)
      continue;
    auto base = std::find_if(stats.begin(), stats.end(), [&](const ConditionStats& b) {
      return b.condition.graph == s.condition.graph && b.condition.method == s.condition.method &&
             b.condition.param == 0.0;
    });
    if (base == stats.end())
      continue;
    for (std::size_t m = 0; m < kMetricNames.size(); ++m) {
      Improvement imp;
      imp.condition = s.condition;
      imp.metric = m;
      imp.baseline_median = base->metrics[m].median;
      imp.median = s.metrics[m].median;
      const double gain = higher_is_better(m) ? imp.median - imp.baseline_median
                                              : imp.baseline_median - imp.median;
      if (imp.baseline_median != 0.0)
        imp.relative = gain / std::abs(imp.baseline_median);
      else
        imp.relative = gain > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
      imp.improved = imp.relative >= threshold;
      out.push_back(imp);
    }
  }
  return out;
}

inline void write_improvements_csv(std::ostream& out, const std::vector<Improvement>& rows) {
  out << "graph,method,param,metric,baseline_median,median,relative_improvement,improved\n";
  for (const Improvement& r : rows) {
    out << detail::csv_field(r.condition.graph) << ',' << to_string(r.condition.method) << ','
        << format_double(r.condition.param, kRecordDigits) << ',' << kMetricNames[r.metric] << ','
        << format_double(r.baseline_median, kRecordDigits) << ','
        << format_double(r.median, kRecordDigits) << ','
        << format_double(r.relative, kRecordDigits) << ',' << (r.improved ? 1 : 0) << '\n';
  }
}

/// Number of graphs improved per (method, param, metric).
inline void write_improvement_counts_csv(std::ostream& out, const std::vector<Improvement>& rows) {
  std::map<std::tuple<std::string, double, std::size_t>, std::size_t> counts;
  for (const Improvement& r : rows)
    counts[{to_string(r.condition.method), r.condition.param, r.metric}] += r.improved ? 1 : 0;
  out << "method,param,metric,graphs_improved\n";
  for (const auto& [key, count] : counts)
    out << std::get<0>(key) << ',' << format_double(std::get<1>(key), kRecordDigits) << ','
        << kMetricNames[std::get<2>(key)] << ',' << count << '\n';
}

} // namespace adjstress
