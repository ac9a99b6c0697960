#include "fislab/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "fislab/error.hpp"
#include "report.hpp"

namespace fislab {

namespace fs = std::filesystem;
using report::Table;
using report::fmt;

const char* report_format_name(ReportFormat f) {
  switch (f) {
    case ReportFormat::csv: return "csv";
    case ReportFormat::json: return "json";
    case ReportFormat::svg: return "svg";
  }
  return "unknown";
}

ReportFormat parse_report_format(const std::string& name) {
  if (name == "csv") return ReportFormat::csv;
  if (name == "json") return ReportFormat::json;
  if (name == "svg") return ReportFormat::svg;
  throw Error(ErrorKind::invalid_argument, "unknown report format: " + name);
}

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

void RunConfig::validate(bool needs_input) const {
  if (needs_input) {
    if (synthetic.has_value() == csv.has_value()) {
      throw Error(ErrorKind::invalid_argument,
                  "config.input: exactly one of 'synthetic' or 'csv' is required");
    }
    if (synthetic) synthetic->validate();
    if (csv && csv->options.label_column.empty()) {
      throw Error(ErrorKind::invalid_argument,
                  "config.input.csv.label_column is required");
    }
  }
  experiment.validate();
  if (!(adjacency_alpha > 0.0 && adjacency_alpha < 1.0)) {
    throw Error(ErrorKind::invalid_argument,
                "config.adjacency_alpha must be in (0,1)");
  }
  if (out_dir.empty()) {
    throw Error(ErrorKind::invalid_argument, "config.output.dir is required");
  }
  if (formats.empty()) {
    throw Error(ErrorKind::invalid_argument, "config.output.formats is empty");
  }
}

namespace {

[[noreturn]] void fail_field(const std::string& path, const std::string& what) {
  throw Error(ErrorKind::parse, "config." + path + ": " + what);
}

const nlohmann::json* maybe(const nlohmann::json& j, const char* key) {
  if (!j.is_object()) return nullptr;
  const auto it = j.find(key);
  return it == j.end() ? nullptr : &*it;
}

double num_or(const nlohmann::json& j, const std::string& path, const char* key,
              double def) {
  const auto* v = maybe(j, key);
  if (!v) return def;
  if (!v->is_number()) fail_field(path + "." + key, "expected a number");
  return v->get<double>();
}

std::int64_t int_or(const nlohmann::json& j, const std::string& path, const char* key,
                    std::int64_t def) {
  const auto* v = maybe(j, key);
  if (!v) return def;
  if (!v->is_number_integer()) fail_field(path + "." + key, "expected an integer");
  return v->get<std::int64_t>();
}

std::string str_or(const nlohmann::json& j, const std::string& path, const char* key,
                   const std::string& def) {
  const auto* v = maybe(j, key);
  if (!v) return def;
  if (!v->is_string()) fail_field(path + "." + key, "expected a string");
  return v->get<std::string>();
}

std::vector<double> number_list(const nlohmann::json& j, const std::string& path) {
  if (!j.is_array()) fail_field(path, "expected an array of numbers");
  std::vector<double> out;
  for (const auto& v : j) {
    if (!v.is_number()) fail_field(path, "expected an array of numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

ExperimentConfig parse_experiment(const nlohmann::json& j, std::uint64_t seed) {
  ExperimentConfig c;
  c.seed = seed;
  c.n_bootstraps = static_cast<int>(int_or(j, "experiment", "bootstraps", 100));
  c.auc_floor = num_or(j, "experiment", "auc_floor", 0.55);
  c.auc_step_tolerance = num_or(j, "experiment", "auc_step_tolerance", 0.05);
  const std::string eval = str_or(j, "experiment", "eval_mode", "oob");
  if (eval == "oob") {
    c.eval_mode = EvalMode::out_of_bag;
  } else if (eval == "holdout") {
    c.eval_mode = EvalMode::holdout;
  } else {
    fail_field("experiment.eval_mode", "expected 'oob' or 'holdout'");
  }
  c.holdout_fraction = num_or(j, "experiment", "holdout_fraction", 0.3);
  const std::string fcm = str_or(j, "experiment", "feature_cut_mode", "schedule");
  if (fcm == "schedule") {
    c.feature_cut_mode = FeatureCutMode::schedule;
  } else if (fcm == "one_at_a_time") {
    c.feature_cut_mode = FeatureCutMode::one_at_a_time;
  } else {
    fail_field("experiment.feature_cut_mode", "expected 'schedule' or 'one_at_a_time'");
  }
  if (const auto* f = maybe(j, "forest")) {
    c.forest.n_trees = static_cast<int>(int_or(*f, "experiment.forest", "trees", 100));
    c.forest.max_features =
        static_cast<int>(int_or(*f, "experiment.forest", "max_features", 0));
    c.forest.min_samples_leaf =
        static_cast<int>(int_or(*f, "experiment.forest", "min_samples_leaf", 1));
    c.forest.max_depth =
        static_cast<int>(int_or(*f, "experiment.forest", "max_depth", 0));
  }
  return c;
}

}  // namespace

RunConfig parse_run_config(const std::string& json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::parse, std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw Error(ErrorKind::parse, "config: expected a JSON object");

  RunConfig cfg;
  const auto* seed = maybe(j, "seed");
  if (!seed || !seed->is_number_integer()) {
    fail_field("seed", "a 64-bit integer seed is required (no wall-clock default)");
  }
  cfg.seed = seed->get<std::uint64_t>();

  if (const auto* input = maybe(j, "input")) {
    if (const auto* syn = maybe(*input, "synthetic")) {
      SyntheticSpec spec;
      try {
        from_json(*syn, spec);
      } catch (const nlohmann::json::exception& e) {
        fail_field("input.synthetic", e.what());
      }
      if (!syn->contains("seed")) spec.seed = cfg.seed;  // inherit the global seed
      cfg.synthetic = spec;
    }
    if (const auto* c = maybe(*input, "csv")) {
      CsvInput in;
      in.path = str_or(*c, "input.csv", "path", "");
      if (in.path.empty()) fail_field("input.csv.path", "required");
      in.options.label_column = str_or(*c, "input.csv", "label_column", "");
      const std::string cat = str_or(*c, "input.csv", "categorical", "reject");
      if (cat == "reject") {
        in.options.categorical = CsvOptions::Categorical::reject;
      } else if (cat == "ordinal") {
        in.options.categorical = CsvOptions::Categorical::ordinal;
      } else if (cat == "one_hot") {
        in.options.categorical = CsvOptions::Categorical::one_hot;
      } else {
        fail_field("input.csv.categorical", "expected reject|ordinal|one_hot");
      }
      const std::string mis = str_or(*c, "input.csv", "missing", "reject");
      if (mis == "reject") {
        in.options.missing = CsvOptions::Missing::reject;
      } else if (mis == "impute_median") {
        in.options.missing = CsvOptions::Missing::impute_median;
      } else {
        fail_field("input.csv.missing", "expected reject|impute_median");
      }
      cfg.csv = in;
    }
  }

  cfg.experiment = parse_experiment(j.contains("experiment") ? j["experiment"]
                                                             : nlohmann::json::object(),
                                    cfg.seed);
  cfg.adjacency_alpha = num_or(j, "", "adjacency_alpha", 0.05);
  if (const auto* cs = maybe(j, "correlation_standards")) {
    cfg.correlation_standards = number_list(*cs, "correlation_standards");
  }
  if (const auto* s = maybe(j, "sufficiency")) {
    SufficiencyConfig sc;
    const auto* fr = maybe(*s, "fractions");
    if (!fr) fail_field("sufficiency.fractions", "required");
    sc.fractions = number_list(*fr, "sufficiency.fractions");
    sc.tolerance = num_or(*s, "sufficiency", "tolerance", 0.02);
    cfg.sufficiency = sc;
  }
  if (const auto* t = maybe(j, "theory")) {
    TheoryConfig tc;
    tc.population_size = static_cast<std::size_t>(
        int_or(*t, "theory", "population_size", 1000));
    tc.n_features = static_cast<std::size_t>(int_or(*t, "theory", "n_features", 20));
    tc.mu = num_or(*t, "theory", "mu", 0.5);
    if (const auto* kv = maybe(*t, "k_values")) {
      for (double v : number_list(*kv, "theory.k_values")) {
        tc.k_values.push_back(static_cast<std::size_t>(v));
      }
    }
    if (const auto* g = maybe(*t, "gaps")) tc.gaps = number_list(*g, "theory.gaps");
    cfg.theory = tc;
  }
  if (const auto* out = maybe(j, "output")) {
    cfg.out_dir = str_or(*out, "output", "dir", cfg.out_dir);
    if (const auto* f = maybe(*out, "formats")) {
      if (!f->is_array()) fail_field("output.formats", "expected an array");
      cfg.formats.clear();
      for (const auto& v : *f) {
        if (!v.is_string()) fail_field("output.formats", "expected strings");
        cfg.formats.push_back(parse_report_format(v.get<std::string>()));
      }
    }
  }
  return cfg;
}

nlohmann::ordered_json run_config_to_json(const RunConfig& config) {
  nlohmann::ordered_json j;
  j["seed"] = config.seed;
  nlohmann::ordered_json input;
  if (config.synthetic) {
    nlohmann::ordered_json spec;
    to_json(spec, *config.synthetic);
    input["synthetic"] = spec;
  }
  if (config.csv) {
    const char* cat = config.csv->options.categorical == CsvOptions::Categorical::reject
                          ? "reject"
                          : config.csv->options.categorical ==
                                    CsvOptions::Categorical::ordinal
                                ? "ordinal"
                                : "one_hot";
    input["csv"] = {{"path", config.csv->path},
                    {"label_column", config.csv->options.label_column},
                    {"categorical", cat},
                    {"missing",
                     config.csv->options.missing == CsvOptions::Missing::reject
                         ? "reject"
                         : "impute_median"}};
  }
  j["input"] = std::move(input);
  j["experiment"] = {
      {"bootstraps", config.experiment.n_bootstraps},
      {"auc_floor", config.experiment.auc_floor},
      {"auc_step_tolerance", config.experiment.auc_step_tolerance},
      {"eval_mode",
       config.experiment.eval_mode == EvalMode::out_of_bag ? "oob" : "holdout"},
      {"holdout_fraction", config.experiment.holdout_fraction},
      {"feature_cut_mode",
       config.experiment.feature_cut_mode == FeatureCutMode::schedule
           ? "schedule"
           : "one_at_a_time"},
      {"forest",
       {{"trees", config.experiment.forest.n_trees},
        {"max_features", config.experiment.forest.max_features},
        {"min_samples_leaf", config.experiment.forest.min_samples_leaf},
        {"max_depth", config.experiment.forest.max_depth}}}};
  j["adjacency_alpha"] = config.adjacency_alpha;
  if (!config.correlation_standards.empty()) {
    j["correlation_standards"] = config.correlation_standards;
  }
  if (config.sufficiency) {
    j["sufficiency"] = {{"fractions", config.sufficiency->fractions},
                        {"tolerance", config.sufficiency->tolerance}};
  }
  if (config.theory) {
    j["theory"] = {{"population_size", config.theory->population_size},
                   {"n_features", config.theory->n_features},
                   {"k_values", config.theory->k_values},
                   {"gaps", config.theory->gaps},
                   {"mu", config.theory->mu}};
  }
  nlohmann::ordered_json fmts = nlohmann::ordered_json::array();
  for (ReportFormat f : config.formats) fmts.push_back(report_format_name(f));
  j["output"] = {{"dir", config.out_dir}, {"formats", std::move(fmts)}};
  return j;
}

Dataset load_input(const RunConfig& config) {
  if (config.synthetic) return generate_synthetic(*config.synthetic);
  if (config.csv) return load_csv(config.csv->path, config.csv->options);
  throw Error(ErrorKind::invalid_argument, "config has no input block");
}

namespace {

constexpr const char* kToolVersion = "1.0.0";

bool has_format(const RunConfig& c, ReportFormat f) {
  return std::find(c.formats.begin(), c.formats.end(), f) != c.formats.end();
}

struct BundleWriter {
  std::string dir;
  std::vector<std::pair<std::string, std::string>> files;  // (name, bytes)

  void add(const std::string& name, std::string bytes) {
    files.emplace_back(name, std::move(bytes));
  }

  ReportBundle finalize(const std::string& command, const RunConfig& config,
                        const std::vector<std::string>& warnings) {
    fs::create_directories(dir);
    std::sort(files.begin(), files.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    nlohmann::ordered_json file_list = nlohmann::ordered_json::array();
    for (const auto& [name, bytes] : files) {
      std::ofstream out(fs::path(dir) / name, std::ios::binary);
      if (!out) throw Error(ErrorKind::io, "cannot write " + name + " under " + dir);
      out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
      if (!out) throw Error(ErrorKind::io, "write failed for " + name);
      char hash[32];
      std::snprintf(hash, sizeof(hash), "%016llx",
                    static_cast<unsigned long long>(fnv1a64(bytes)));
      file_list.push_back({{"name", name}, {"bytes", bytes.size()}, {"fnv1a64", hash}});
    }
    ReportBundle bundle;
    bundle.out_dir = dir;
    bundle.warnings = warnings;
    bundle.manifest = {{"tool", "fislab"},
                       {"version", kToolVersion},
                       {"command", command},
                       {"config", run_config_to_json(config)},
                       {"files", std::move(file_list)},
                       {"warnings", warnings}};
    std::ofstream out(fs::path(dir) / "manifest.json", std::ios::binary);
    if (!out) throw Error(ErrorKind::io, "cannot write manifest.json under " + dir);
    out << bundle.manifest.dump(2) << '\n';
    return bundle;
  }
};

struct BoxStats {
  double lo_whisker, q1, median, q3, hi_whisker, mean;
  std::vector<double> outliers;
};

double quantile_sorted(const std::vector<double>& sorted, double q) {
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(std::floor(pos));
  const double frac = pos - static_cast<double>(lo);
  if (lo + 1 >= sorted.size()) return sorted.back();
  return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

BoxStats box_stats(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  BoxStats b{};
  b.q1 = quantile_sorted(values, 0.25);
  b.median = quantile_sorted(values, 0.5);
  b.q3 = quantile_sorted(values, 0.75);
  const double iqr = b.q3 - b.q1;
  const double lo_fence = b.q1 - 1.5 * iqr;
  const double hi_fence = b.q3 + 1.5 * iqr;
  b.lo_whisker = b.q3;
  b.hi_whisker = b.q1;
  double sum = 0.0;
  for (double v : values) {
    sum += v;
    if (v < lo_fence || v > hi_fence) {
      b.outliers.push_back(v);
    } else {
      b.lo_whisker = std::min(b.lo_whisker, v);
      b.hi_whisker = std::max(b.hi_whisker, v);
    }
  }
  b.mean = sum / static_cast<double>(values.size());
  return b;
}

// Column order that lists features by the experiment's own rank (rank 1 first).
std::vector<std::size_t> rank_order(const ExperimentResult& r) {
  std::vector<std::size_t> order(r.feature_set.size());
  for (std::size_t i = 0; i < order.size(); ++i) {
    order[static_cast<std::size_t>(r.rank.ranks[i]) - 1] = i;
  }
  return order;
}

std::vector<double> rank_sorted_matrix(const ExperimentResult& r) {
  const std::size_t B = r.n_bootstraps;
  const std::size_t n = r.feature_set.size();
  const std::vector<std::size_t> order = rank_order(r);
  std::vector<double> m(B * n);
  for (std::size_t b = 0; b < B; ++b) {
    for (std::size_t pos = 0; pos < n; ++pos) {
      m[b * n + pos] = r.importance_matrix[b * n + order[pos]];
    }
  }
  return m;
}

void add_box_rows(Table& box, const std::string& experiment, std::size_t size,
                  const ExperimentResult& r) {
  const std::size_t B = r.n_bootstraps;
  const std::size_t n = r.feature_set.size();
  const std::vector<std::size_t> order = rank_order(r);
  for (std::size_t pos = 0; pos < n; ++pos) {
    std::vector<double> column(B);
    for (std::size_t b = 0; b < B; ++b) {
      column[b] = r.importance_matrix[b * n + order[pos]];
    }
    const BoxStats bs = box_stats(std::move(column));
    std::string outliers;
    for (std::size_t i = 0; i < bs.outliers.size(); ++i) {
      if (i) outliers.push_back(';');
      outliers += fmt(bs.outliers[i]);
    }
    box.add_row({experiment, fmt(static_cast<double>(size)),
                 fmt(r.mean_auc), fmt(static_cast<double>(pos + 1)),
                 r.feature_set[order[pos]], fmt(bs.mean), fmt(bs.lo_whisker),
                 fmt(bs.q1), fmt(bs.median), fmt(bs.q3), fmt(bs.hi_whisker), outliers});
  }
}

Table make_trace_table(const DegradationTrace& trace,
                       const std::set<std::size_t>& trimmed_sizes) {
  Table t;
  t.name = std::string("trace_") + cut_algorithm_name(trace.algorithm);
  t.columns = {"size",     "mean_auc", "auc_sd",      "refinement",
               "rank_difference", "srcc",     "canberra", "bray_curtis",
               "trimmed"};
  for (const auto& s : trace.steps) {
    t.add_row({fmt(static_cast<double>(s.size)), fmt(s.result.mean_auc),
               fmt(s.result.auc_sd), s.refinement ? "1" : "0",
               fmt(s.stability.rank_difference), fmt(s.stability.srcc),
               fmt(s.stability.canberra), fmt(s.stability.bray_curtis),
               trimmed_sizes.count(s.size) ? "1" : "0"});
  }
  return t;
}

void add_stability_long_rows(Table& t, const DegradationTrace& trace,
                             const std::set<std::size_t>& trimmed_sizes) {
  for (const auto& s : trace.steps) {
    for (std::size_t idx = 0; idx < 4; ++idx) {
      t.add_row({cut_algorithm_name(trace.algorithm),
                 fmt(static_cast<double>(s.size)), fmt(s.result.mean_auc),
                 kStabilityIndexNames[idx],
                 kStabilityHigherIsStable[idx] ? "higher_is_stable"
                                               : "lower_is_stable",
                 fmt(stability_value(s.stability, idx)),
                 trimmed_sizes.count(s.size) ? "1" : "0"});
    }
  }
}

std::set<std::size_t> step_sizes(const DegradationTrace& trace) {
  std::set<std::size_t> sizes;
  for (const auto& s : trace.steps) sizes.insert(s.size);
  return sizes;
}

void add_comparison_rows(Table& t, std::size_t idx, const RegressionResult& reg) {
  static const char* kTerms[3] = {"intercept", "auc", "algorithm_indicator"};
  for (std::size_t term = 0; term < reg.coefficients.size(); ++term) {
    t.add_row({kStabilityIndexNames[idx],
               kStabilityHigherIsStable[idx] ? "higher_is_stable" : "lower_is_stable",
               term < 3 ? kTerms[term] : "term" + std::to_string(term),
               fmt(reg.coefficients[term]), fmt(reg.standard_errors[term]),
               fmt(reg.t_statistics[term]), fmt(reg.p_values[term]),
               fmt(reg.r_squared), fmt(static_cast<double>(reg.n))});
  }
}

struct TheoryTables {
  Table surface;
  Table window;
  Table distribution;
};

TheoryTables make_theory_tables(const TheoryConfig& tc) {
  TheoryTables out;
  TheoryConfig t = tc;
  if (t.k_values.empty()) {
    for (std::size_t k : {10, 25, 50, 100, 200, 400, 700, 1000}) {
      if (k <= t.population_size) t.k_values.push_back(k);
    }
  }
  if (t.gaps.empty()) {
    t.gaps = {0.005, 0.01, 0.02, 0.03, 0.05, 0.07, 0.09};
  }
  std::sort(t.k_values.begin(), t.k_values.end());
  std::sort(t.gaps.begin(), t.gaps.end());

  out.surface.name = "theory_surface";
  out.surface.columns = {"gap", "k", "probability"};
  const std::vector<double> grid =
      probability_surface(t.population_size, t.k_values, t.gaps);
  for (std::size_t gi = 0; gi < t.gaps.size(); ++gi) {
    for (std::size_t ki = 0; ki < t.k_values.size(); ++ki) {
      out.surface.add_row({fmt(t.gaps[gi]), fmt(static_cast<double>(t.k_values[ki])),
                           fmt(grid[gi * t.k_values.size() + ki])});
    }
  }

  out.window.name = "theory_window";
  out.window.columns = {"pair", "a_i", "a_j", "mu", "probability"};
  const std::vector<double> a = SyntheticSpec::default_coefficients(t.n_features);
  for (std::size_t i = 0; i + 1 < t.n_features; ++i) {
    out.window.add_row(
        {"a" + std::to_string(i + 1) + ",a" + std::to_string(i + 2), fmt(a[i]),
         fmt(a[i + 1]), fmt(t.mu),
         fmt(window_probability(t.mu, a[i], a[i + 1], t.n_features))});
  }

  out.distribution.name = "theory_distribution";
  out.distribution.columns = {"n_features", "mean", "variance"};
  const auto [mean, variance] = y_distribution_params(t.n_features);
  out.distribution.add_row(
      {fmt(static_cast<double>(t.n_features)), fmt(mean), fmt(variance)});
  return out;
}

Table make_sweep_table(const CorrelationSweepResult& sweep) {
  Table t;
  t.name = "sweep_comparison";
  t.columns = {"standard",   "surviving_features", "removed_features", "index",
               "orientation", "indicator_coefficient", "indicator_p",
               "r_squared",  "n_points",           "skipped",          "warning"};
  for (const auto& entry : sweep.entries) {
    if (entry.skipped) {
      t.add_row({fmt(entry.standard), fmt(static_cast<double>(entry.surviving_features)),
                 fmt(static_cast<double>(entry.removed_features)), "", "", "", "", "",
                 "", "1", entry.warning});
      continue;
    }
    for (std::size_t idx = 0; idx < 4; ++idx) {
      if (!entry.comparison[idx]) continue;
      const RegressionResult& reg = *entry.comparison[idx];
      t.add_row({fmt(entry.standard), fmt(static_cast<double>(entry.surviving_features)),
                 fmt(static_cast<double>(entry.removed_features)),
                 kStabilityIndexNames[idx],
                 kStabilityHigherIsStable[idx] ? "higher_is_stable" : "lower_is_stable",
                 fmt(reg.coefficients[2]), fmt(reg.p_values[2]), fmt(reg.r_squared),
                 fmt(static_cast<double>(reg.n)), "0", ""});
    }
  }
  return t;
}

Table make_effect_table(const CorrelationSweepResult& sweep) {
  Table t;
  t.name = "correlation_effect";
  t.columns = {"index", "orientation", "slope", "intercept", "slope_p", "r_squared",
               "n_points"};
  for (std::size_t idx = 0; idx < 4; ++idx) {
    if (!sweep.effect[idx]) continue;
    const RegressionResult& reg = *sweep.effect[idx];
    t.add_row({kStabilityIndexNames[idx],
               kStabilityHigherIsStable[idx] ? "higher_is_stable" : "lower_is_stable",
               fmt(reg.coefficients[1]), fmt(reg.coefficients[0]),
               fmt(reg.p_values[1]), fmt(reg.r_squared),
               fmt(static_cast<double>(reg.n))});
  }
  return t;
}

void emit_tables(BundleWriter& writer, const RunConfig& config,
                 const std::vector<Table>& tables,
                 const nlohmann::ordered_json& extra_json) {
  if (has_format(config, ReportFormat::csv)) {
    for (const auto& t : tables) writer.add(t.name + ".csv", t.to_csv());
  }
  if (has_format(config, ReportFormat::json)) {
    nlohmann::ordered_json results;
    results["tables"] = nlohmann::ordered_json::object();
    for (const auto& t : tables) results["tables"][t.name] = t.to_json();
    for (const auto& [key, value] : extra_json.items()) results[key] = value;
    writer.add("results.json", results.dump(2) + "\n");
  }
}

const Table* find_table(const std::vector<Table>& tables, const std::string& name) {
  for (const auto& t : tables) {
    if (t.name == name) return &t;
  }
  return nullptr;
}

void emit_charts(BundleWriter& writer, const std::vector<Table>& tables) {
  if (const Table* t = find_table(tables, "stability_long")) {
    for (std::size_t idx = 0; idx < 4; ++idx) {
      writer.add(std::string("scatter_") + kStabilityIndexNames[idx] + ".svg",
                 report::scatter_chart_svg(*t, idx));
    }
  }
  if (const Table* t = find_table(tables, "differences")) {
    if (!t->rows.empty()) {
      for (std::size_t idx = 0; idx < 4; ++idx) {
        writer.add(std::string("difference_") + kStabilityIndexNames[idx] + ".svg",
                   report::difference_chart_svg(*t, idx));
      }
    }
  }
  if (const Table* t = find_table(tables, "adjacency")) {
    writer.add("adjacency_ratio.svg", report::adjacency_chart_svg(*t));
  }
  if (const Table* t = find_table(tables, "importance_box")) {
    writer.add("importance_box_reference.svg",
               report::box_chart_svg(*t, "reference", "Importance by rank: full data"));
    writer.add("importance_box_data_cut.svg",
               report::box_chart_svg(*t, "data_cut",
                                     "Importance by rank: deepest data cut"));
    writer.add("importance_box_feature_cut.svg",
               report::box_chart_svg(*t, "feature_cut",
                                     "Importance by rank: deepest feature cut"));
  }
  if (const Table* t = find_table(tables, "theory_surface")) {
    writer.add("theory_surface.svg", report::heatmap_chart_svg(*t));
  }
  if (const Table* t = find_table(tables, "sufficiency")) {
    writer.add("sufficiency.svg", report::sufficiency_chart_svg(*t));
  }
}

}  // namespace

ReportBundle run_pipeline(const RunConfig& config, int threads) {
  config.validate(true);
  std::vector<std::string> warnings;
  std::vector<Table> tables;
  nlohmann::ordered_json extra;

  const Dataset d = load_input(config);
  const ExperimentConfig& exp = config.experiment;
  const ExperimentResult reference = bootstrap_experiment(d, exp, threads);

  DegradationTrace data_trace = run_data_cutting(d, exp, reference, threads);
  DegradationTrace feature_trace = run_feature_cutting(d, reference, exp, threads);
  for (const auto& w : data_trace.warnings) warnings.push_back("data_cut: " + w);
  for (const auto& w : feature_trace.warnings) warnings.push_back("feature_cut: " + w);

  // Reference importance table.
  {
    Table t;
    t.name = "reference_importance";
    t.columns = {"feature", "mean_importance", "rank"};
    for (std::size_t j = 0; j < d.n_features(); ++j) {
      t.add_row({d.feature_names[j], fmt(reference.mean_importance[j]),
                 fmt(static_cast<double>(reference.rank.ranks[j]))});
    }
    tables.push_back(std::move(t));
  }

  // Trimming and the per-index comparison regression.
  std::set<std::size_t> data_trimmed;
  std::set<std::size_t> feature_trimmed;
  bool have_trim = false;
  DegradationTrace data_trim;
  DegradationTrace feature_trim;
  try {
    std::tie(data_trim, feature_trim) = trim_traces(data_trace, feature_trace);
    data_trimmed = step_sizes(data_trim);
    feature_trimmed = step_sizes(feature_trim);
    have_trim = true;
  } catch (const Error& e) {
    warnings.push_back(std::string("trimming skipped: ") + e.what());
  }

  tables.push_back(make_trace_table(data_trace, data_trimmed));
  tables.push_back(make_trace_table(feature_trace, feature_trimmed));
  {
    Table t;
    t.name = "stability_long";
    t.columns = {"algorithm", "size", "mean_auc", "index", "orientation", "value",
                 "trimmed"};
    add_stability_long_rows(t, data_trace, data_trimmed);
    add_stability_long_rows(t, feature_trace, feature_trimmed);
    tables.push_back(std::move(t));
  }

  {
    Table t;
    t.name = "comparison";
    t.columns = {"index",       "orientation", "term",    "coefficient",
                 "std_error",   "t_statistic", "p_value", "r_squared",
                 "n_points"};
    if (have_trim) {
      for (std::size_t idx = 0; idx < 4; ++idx) {
        std::vector<ComparisonPoint> points;
        for (const auto& s : data_trim.steps) {
          points.push_back({s.result.mean_auc, stability_value(s.stability, idx),
                            CutAlgorithm::data_cut});
        }
        for (const auto& s : feature_trim.steps) {
          points.push_back({s.result.mean_auc, stability_value(s.stability, idx),
                            CutAlgorithm::feature_cut});
        }
        try {
          add_comparison_rows(t, idx, algorithm_comparison(points));
        } catch (const Error& e) {
          warnings.push_back(std::string("comparison (") + kStabilityIndexNames[idx] +
                             ") skipped: " + e.what());
        }
      }
    }
    tables.push_back(std::move(t));
  }

  // Interpolated differences over the trimmed AUC overlap.
  {
    Table t;
    t.name = "differences";
    t.columns = {"auc", "rank_difference", "srcc", "canberra", "bray_curtis"};
    if (have_trim) {
      const double lo = std::max(data_trim.min_auc(), feature_trim.min_auc());
      const double hi = std::min(data_trim.max_auc(), feature_trim.max_auc());
      if (hi > lo) {
        std::vector<double> grid;
        constexpr int kGridPoints = 11;
        for (int i = 0; i < kGridPoints; ++i) {
          grid.push_back(lo + (hi - lo) * i / (kGridPoints - 1));
        }
        try {
          const DifferenceCurve curve =
              interpolated_difference(data_trim, feature_trim, grid);
          for (std::size_t i = 0; i < curve.auc_grid.size(); ++i) {
            t.add_row({fmt(curve.auc_grid[i]), fmt(curve.differences[i].rank_difference),
                       fmt(curve.differences[i].srcc), fmt(curve.differences[i].canberra),
                       fmt(curve.differences[i].bray_curtis)});
          }
        } catch (const Error& e) {
          warnings.push_back(std::string("difference curve skipped: ") + e.what());
        }
      }
    }
    tables.push_back(std::move(t));
  }

  // Adjacent-rank significance per experiment.
  {
    Table t;
    t.name = "adjacency";
    t.columns = {"experiment", "size", "mean_auc", "pairs", "significant", "ratio"};
    const auto add_adjacency = [&](const std::string& experiment, std::size_t size,
                                   const ExperimentResult& r) {
      if (r.feature_set.size() < 2) return;
      try {
        const AdjacencyReport rep =
            adjacent_rank_significance(rank_sorted_matrix(r), r.n_bootstraps,
                                       r.feature_set.size(), config.adjacency_alpha);
        std::size_t sig = 0;
        for (const auto& pr : rep.pairs) sig += static_cast<std::size_t>(pr.significant);
        t.add_row({experiment, fmt(static_cast<double>(size)), fmt(r.mean_auc),
                   fmt(static_cast<double>(rep.pairs.size())),
                   fmt(static_cast<double>(sig)), fmt(rep.significant_ratio)});
      } catch (const Error& e) {
        warnings.push_back("adjacency (" + experiment + ", size " +
                           std::to_string(size) + ") skipped: " + e.what());
      }
    };
    add_adjacency("reference", d.n_samples(), reference);
    for (std::size_t i = 1; i < data_trace.steps.size(); ++i) {
      add_adjacency("data_cut", data_trace.steps[i].size, data_trace.steps[i].result);
    }
    for (std::size_t i = 1; i < feature_trace.steps.size(); ++i) {
      add_adjacency("feature_cut", feature_trace.steps[i].size,
                    feature_trace.steps[i].result);
    }
    tables.push_back(std::move(t));
  }

  // Importance distributions per rank (box-plot data) for every experiment.
  {
    Table t;
    t.name = "importance_box";
    t.columns = {"experiment", "size",   "mean_auc", "rank_position",
                 "feature",    "mean",   "lo_whisker", "q1",
                 "median",     "q3",     "hi_whisker", "outliers"};
    add_box_rows(t, "reference", d.n_samples(), reference);
    for (std::size_t i = 1; i < data_trace.steps.size(); ++i) {
      add_box_rows(t, "data_cut", data_trace.steps[i].size, data_trace.steps[i].result);
    }
    for (std::size_t i = 1; i < feature_trace.steps.size(); ++i) {
      add_box_rows(t, "feature_cut", feature_trace.steps[i].size,
                   feature_trace.steps[i].result);
    }
    tables.push_back(std::move(t));
  }

  if (config.sufficiency) {
    const SufficiencyReport rep = sufficiency_probe(
        d, config.sufficiency->fractions, exp, config.sufficiency->tolerance, threads);
    for (const auto& w : rep.warnings) warnings.push_back("sufficiency: " + w);
    Table t;
    t.name = "sufficiency";
    t.columns = {"fraction", "sample_count", "mean_auc", "skipped"};
    for (const auto& p : rep.points) {
      t.add_row({fmt(p.fraction), fmt(static_cast<double>(p.sample_count)),
                 p.skipped ? "" : fmt(p.mean_auc), p.skipped ? "1" : "0"});
    }
    tables.push_back(std::move(t));
    extra["sufficiency_summary"] = {{"auc_delta", rep.auc_delta},
                                    {"tolerance", rep.tolerance},
                                    {"data_sufficient", rep.data_sufficient}};
  }

  if (!config.correlation_standards.empty()) {
    const CorrelationSweepResult sweep = correlation_sweep(
        d, reference.mean_importance, config.correlation_standards, exp, threads);
    for (const auto& w : sweep.warnings) warnings.push_back("sweep: " + w);
    tables.push_back(make_sweep_table(sweep));
    tables.push_back(make_effect_table(sweep));
  }

  if (config.theory) {
    const TheoryTables tt = make_theory_tables(*config.theory);
    tables.push_back(tt.surface);
    tables.push_back(tt.window);
    tables.push_back(tt.distribution);
  }

  extra["trace_data_cut"] = trace_to_json(data_trace);
  extra["trace_feature_cut"] = trace_to_json(feature_trace);

  BundleWriter writer;
  writer.dir = config.out_dir;
  emit_tables(writer, config, tables, extra);
  if (has_format(config, ReportFormat::svg)) emit_charts(writer, tables);
  return writer.finalize("run", config, warnings);
}

ReportBundle run_sweep_pipeline(const RunConfig& config, int threads) {
  config.validate(true);
  if (config.correlation_standards.empty()) {
    throw Error(ErrorKind::invalid_argument,
                "config.correlation_standards is required for sweep-correlation");
  }
  std::vector<std::string> warnings;
  std::vector<Table> tables;
  nlohmann::ordered_json extra;

  const Dataset d = load_input(config);
  const ExperimentResult reference = bootstrap_experiment(d, config.experiment, threads);
  const CorrelationSweepResult sweep = correlation_sweep(
      d, reference.mean_importance, config.correlation_standards, config.experiment,
      threads);
  for (const auto& w : sweep.warnings) warnings.push_back("sweep: " + w);
  tables.push_back(make_sweep_table(sweep));
  tables.push_back(make_effect_table(sweep));

  BundleWriter writer;
  writer.dir = config.out_dir;
  emit_tables(writer, config, tables, extra);
  return writer.finalize("sweep-correlation", config, warnings);
}

ReportBundle run_theory_pipeline(const RunConfig& config) {
  config.validate(false);
  if (!config.theory) {
    throw Error(ErrorKind::invalid_argument,
                "config.theory block is required for the theory command");
  }
  std::vector<Table> tables;
  const TheoryTables tt = make_theory_tables(*config.theory);
  tables.push_back(tt.surface);
  tables.push_back(tt.window);
  tables.push_back(tt.distribution);

  BundleWriter writer;
  writer.dir = config.out_dir;
  emit_tables(writer, config, tables, nlohmann::ordered_json::object());
  if (has_format(config, ReportFormat::svg)) emit_charts(writer, tables);
  return writer.finalize("theory", config, {});
}

std::vector<std::string> render_report(const std::string& bundle_dir,
                                       const std::vector<ReportFormat>& formats) {
  if (std::find(formats.begin(), formats.end(), ReportFormat::svg) == formats.end()) {
    return {};
  }
  const fs::path dir(bundle_dir);
  if (!fs::exists(dir / "manifest.json")) {
    throw Error(ErrorKind::io, "no manifest.json in " + bundle_dir);
  }
  std::vector<Table> tables;
  for (const char* name :
       {"stability_long", "differences", "adjacency", "importance_box",
        "theory_surface", "sufficiency"}) {
    const fs::path p = dir / (std::string(name) + ".csv");
    if (!fs::exists(p)) continue;
    std::ifstream in(p, std::ios::binary);
    std::stringstream buf;
    buf << in.rdbuf();
    tables.push_back(Table::from_csv(name, buf.str()));
  }
  if (tables.empty()) {
    throw Error(ErrorKind::io,
                "no chartable tables (CSV) found in " + bundle_dir +
                    "; rerun with the csv format enabled");
  }
  BundleWriter writer;
  writer.dir = bundle_dir;
  emit_charts(writer, tables);

  // Write chart files and refresh their manifest entries.
  std::vector<std::string> written;
  nlohmann::ordered_json manifest;
  {
    std::ifstream in(dir / "manifest.json", std::ios::binary);
    try {
      manifest = nlohmann::ordered_json::parse(in);
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorKind::parse, std::string("manifest.json is invalid: ") + e.what());
    }
  }
  std::map<std::string, nlohmann::ordered_json> entries;
  if (manifest.contains("files")) {
    for (const auto& f : manifest["files"]) {
      entries[f.at("name").get<std::string>()] = f;
    }
  }
  for (const auto& [name, bytes] : writer.files) {
    std::ofstream out(dir / name, std::ios::binary);
    if (!out) throw Error(ErrorKind::io, "cannot write " + name);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    char hash[32];
    std::snprintf(hash, sizeof(hash), "%016llx",
                  static_cast<unsigned long long>(fnv1a64(bytes)));
    entries[name] = {{"name", name}, {"bytes", bytes.size()}, {"fnv1a64", hash}};
    written.push_back(name);
  }
  nlohmann::ordered_json file_list = nlohmann::ordered_json::array();
  for (const auto& [name, entry] : entries) file_list.push_back(entry);
  manifest["files"] = std::move(file_list);
  std::ofstream out(dir / "manifest.json", std::ios::binary);
  out << manifest.dump(2) << '\n';
  return written;
}

}  // namespace fislab
