#include "fislab/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "fislab/error.hpp"
#include "fislab/random.hpp"
#include "csv_util.hpp"

namespace fislab {

std::size_t Dataset::positive_count() const {
  std::size_t c = 0;
  for (int l : labels) c += static_cast<std::size_t>(l == 1);
  return c;
}

std::size_t Dataset::feature_index(const std::string& name) const {
  for (std::size_t j = 0; j < feature_names.size(); ++j) {
    if (feature_names[j] == name) return j;
  }
  throw Error(ErrorKind::invalid_argument, "unknown feature name: " + name);
}

void Dataset::validate() const {
  const std::size_t n = labels.size();
  const std::size_t f = feature_names.size();
  if (f == 0) throw Error(ErrorKind::domain, "dataset has no features");
  if (features.size() != n * f) {
    throw Error(ErrorKind::internal, "feature matrix shape does not match labels");
  }
  std::set<std::string> names(feature_names.begin(), feature_names.end());
  if (names.size() != f) {
    throw Error(ErrorKind::domain, "feature names are not unique");
  }
  for (int l : labels) {
    if (l != 0 && l != 1) {
      throw Error(ErrorKind::domain, "labels must be 0 or 1");
    }
  }
  for (double v : features) {
    if (!std::isfinite(v)) {
      throw Error(ErrorKind::domain, "non-finite feature value");
    }
  }
}

std::vector<double> SyntheticSpec::default_coefficients(std::size_t n_features) {
  // a_n proportional to n, normalized to sum 1: a_n = 2n / (N(N+1)).
  std::vector<double> a(n_features);
  const double denom =
      static_cast<double>(n_features) * (static_cast<double>(n_features) + 1.0) / 2.0;
  for (std::size_t n = 0; n < n_features; ++n) {
    a[n] = static_cast<double>(n + 1) / denom;
  }
  return a;
}

std::vector<double> SyntheticSpec::resolved_coefficients() const {
  return coefficients.empty() ? default_coefficients(n_features) : coefficients;
}

void SyntheticSpec::validate() const {
  if (n_features < 2) {
    throw Error(ErrorKind::invalid_argument, "synthetic spec: n_features must be >= 2");
  }
  if (n_samples < 2) {
    throw Error(ErrorKind::invalid_argument, "synthetic spec: n_samples must be >= 2");
  }
  if (!(positive_fraction > 0.0 && positive_fraction < 1.0)) {
    throw Error(ErrorKind::invalid_argument,
                "synthetic spec: positive_fraction must be in (0,1)");
  }
  const std::vector<double> a = resolved_coefficients();
  if (a.size() != n_features) {
    throw Error(ErrorKind::invalid_argument,
                "synthetic spec: coefficients length must equal n_features");
  }
  double sum = 0.0;
  for (std::size_t n = 0; n < a.size(); ++n) {
    if (!(a[n] > 0.0)) {
      throw Error(ErrorKind::invalid_argument,
                  "synthetic spec: coefficients must be positive");
    }
    if (n > 0 && !(a[n] > a[n - 1])) {
      throw Error(ErrorKind::invalid_argument,
                  "synthetic spec: coefficients must be strictly increasing");
    }
    sum += a[n];
  }
  if (std::fabs(sum - 1.0) > 1e-12) {
    throw Error(ErrorKind::invalid_argument,
                "synthetic spec: coefficients must sum to 1 within 1e-12");
  }
  if (threshold.has_value()) {
    if (!(*threshold >= 0.0 && *threshold <= sum)) {
      throw Error(ErrorKind::invalid_argument,
                  "synthetic spec: threshold outside the attainable range of y");
    }
  }
}

void to_json(nlohmann::ordered_json& j, const SyntheticSpec& spec) {
  j = nlohmann::ordered_json{{"n_features", spec.n_features},
                             {"n_samples", spec.n_samples},
                             {"positive_fraction", spec.positive_fraction},
                             {"seed", spec.seed}};
  if (!spec.coefficients.empty()) j["coefficients"] = spec.coefficients;
  if (spec.threshold.has_value()) j["threshold"] = *spec.threshold;
}

void from_json(const nlohmann::json& j, SyntheticSpec& spec) {
  spec = SyntheticSpec{};
  spec.n_features = j.at("n_features").get<std::size_t>();
  spec.n_samples = j.at("n_samples").get<std::size_t>();
  spec.positive_fraction = j.at("positive_fraction").get<double>();
  spec.seed = j.contains("seed") ? j.at("seed").get<std::uint64_t>() : 0;
  if (j.contains("coefficients")) {
    spec.coefficients = j.at("coefficients").get<std::vector<double>>();
  }
  if (j.contains("threshold")) spec.threshold = j.at("threshold").get<double>();
}

double calibrate_threshold(const std::vector<double>& coefficients,
                           double positive_fraction, std::uint64_t seed) {
  constexpr std::size_t kCalibrationDraws = 1000000;
  Rng rng(derive_seed(seed, SeedStream::threshold_calibration));
  std::vector<double> ys(kCalibrationDraws);
  for (std::size_t i = 0; i < kCalibrationDraws; ++i) {
    double y = 0.0;
    for (double a : coefficients) y += a * rng.uniform();
    ys[i] = y;
  }
  // Nearest-rank empirical (1 - positive_fraction) quantile.
  const double q = 1.0 - positive_fraction;
  std::size_t idx = static_cast<std::size_t>(
      std::floor(q * static_cast<double>(kCalibrationDraws)));
  idx = std::min(idx, kCalibrationDraws - 1);
  std::nth_element(ys.begin(), ys.begin() + static_cast<std::ptrdiff_t>(idx), ys.end());
  return ys[idx];
}

Dataset generate_synthetic(const SyntheticSpec& spec) {
  spec.validate();
  const std::vector<double> a = spec.resolved_coefficients();
  const double threshold =
      spec.threshold.has_value()
          ? *spec.threshold
          : calibrate_threshold(a, spec.positive_fraction, spec.seed);

  Dataset d;
  d.feature_names.resize(spec.n_features);
  for (std::size_t j = 0; j < spec.n_features; ++j) {
    d.feature_names[j] = "f" + std::to_string(j + 1);
  }
  d.features.resize(spec.n_samples * spec.n_features);
  d.labels.resize(spec.n_samples);

  Rng rng(derive_seed(spec.seed, SeedStream::synthetic_draw));
  for (std::size_t i = 0; i < spec.n_samples; ++i) {
    double y = 0.0;
    double* row = d.features.data() + i * spec.n_features;
    for (std::size_t j = 0; j < spec.n_features; ++j) {
      row[j] = rng.uniform();
      y += a[j] * row[j];
    }
    d.labels[i] = y > threshold ? 1 : 0;
  }

  std::ostringstream prov;
  prov << "synthetic(n_features=" << spec.n_features << ",n_samples=" << spec.n_samples
       << ",positive_fraction=" << spec.positive_fraction << ",seed=" << spec.seed
       << ")";
  d.provenance = prov.str();
  d.validate();
  return d;
}

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && (s[b] == ' ' || s[b] == '\t' || s[b] == '\r')) ++b;
  while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\r')) --e;
  return s.substr(b, e - b);
}

bool is_missing_token(const std::string& s) {
  return s.empty() || s == "NA" || s == "na" || s == "NaN" || s == "nan" ||
         s == "NULL" || s == "null" || s == "N/A";
}

bool parse_double(const std::string& s, double& out) {
  const char* begin = s.data();
  const char* end = begin + s.size();
  const auto r = std::from_chars(begin, end, out);
  return r.ec == std::errc{} && r.ptr == end;
}

double column_median(std::vector<double> values) {
  const std::size_t n = values.size();
  std::sort(values.begin(), values.end());
  if (n % 2 == 1) return values[n / 2];
  return 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

}  // namespace

Dataset load_csv(const std::string& path, const CsvOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::io, "cannot open file: " + path);

  std::vector<std::vector<std::string>> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line_no == 1 && line.size() >= 3 && static_cast<unsigned char>(line[0]) == 0xEF &&
        static_cast<unsigned char>(line[1]) == 0xBB &&
        static_cast<unsigned char>(line[2]) == 0xBF) {
      line.erase(0, 3);  // UTF-8 BOM
    }
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() && in.peek() == EOF) break;
    rows.push_back(csvutil::split_line(line, line_no));
  }
  if (rows.empty()) throw Error(ErrorKind::parse, "empty file: " + path);

  std::vector<std::string> header;
  header.reserve(rows[0].size());
  for (const auto& h : rows[0]) header.push_back(trim(h));
  const std::size_t n_cols = header.size();
  {
    std::set<std::string> uniq(header.begin(), header.end());
    if (uniq.size() != n_cols) {
      throw Error(ErrorKind::parse, "duplicate column names in header");
    }
  }

  std::size_t label_col = n_cols;
  for (std::size_t j = 0; j < n_cols; ++j) {
    if (header[j] == options.label_column) label_col = j;
  }
  if (label_col == n_cols) {
    throw Error(ErrorKind::invalid_argument,
                "label column not found: " + options.label_column);
  }

  const std::size_t n_rows = rows.size() - 1;
  if (n_rows == 0) throw Error(ErrorKind::parse, "no data rows in " + path);
  for (std::size_t i = 1; i <= n_rows; ++i) {
    if (rows[i].size() != n_cols) {
      throw Error(ErrorKind::parse, "row " + std::to_string(i) + " has " +
                                        std::to_string(rows[i].size()) +
                                        " fields, expected " + std::to_string(n_cols));
    }
  }

  // Labels first.
  std::vector<int> labels(n_rows);
  for (std::size_t i = 0; i < n_rows; ++i) {
    const std::string cell = trim(rows[i + 1][label_col]);
    double v;
    if (is_missing_token(cell) || !parse_double(cell, v) || (v != 0.0 && v != 1.0)) {
      throw Error(ErrorKind::domain, "label not binary at row " + std::to_string(i + 1) +
                                         ": '" + cell + "'");
    }
    labels[i] = static_cast<int>(v);
  }

  // Classify feature columns: numeric if every non-missing cell parses finite.
  struct Column {
    std::string name;
    bool categorical = false;
    std::vector<double> numeric;   // NaN marks missing
    std::vector<std::string> raw;  // categorical cells
  };
  std::vector<Column> cols;
  for (std::size_t j = 0; j < n_cols; ++j) {
    if (j == label_col) continue;
    Column col;
    col.name = header[j];
    col.numeric.assign(n_rows, std::numeric_limits<double>::quiet_NaN());
    col.raw.assign(n_rows, "");
    for (std::size_t i = 0; i < n_rows; ++i) {
      const std::string cell = trim(rows[i + 1][j]);
      col.raw[i] = cell;
      if (is_missing_token(cell)) continue;
      double v;
      if (parse_double(cell, v)) {
        if (!std::isfinite(v)) {
          throw Error(ErrorKind::parse, "non-finite value at row " +
                                            std::to_string(i + 1) + ", column '" +
                                            col.name + "'");
        }
        col.numeric[i] = v;
      } else {
        col.categorical = true;
      }
    }
    cols.push_back(std::move(col));
  }
  if (cols.empty()) throw Error(ErrorKind::parse, "no feature columns in " + path);

  // Expand into the final numeric columns per the categorical policy.
  struct OutColumn {
    std::string name;
    std::vector<double> values;  // NaN marks missing
  };
  std::vector<OutColumn> out_cols;
  for (auto& col : cols) {
    if (!col.categorical) {
      out_cols.push_back({col.name, std::move(col.numeric)});
      continue;
    }
    switch (options.categorical) {
      case CsvOptions::Categorical::reject:
        throw Error(ErrorKind::domain,
                    "categorical column '" + col.name +
                        "' (pass categorical=ordinal or one_hot to encode)");
      case CsvOptions::Categorical::ordinal: {
        std::vector<std::string> order;  // first-appearance order
        std::map<std::string, double> codes;
        OutColumn oc{col.name, std::vector<double>(n_rows,
                                                   std::numeric_limits<double>::quiet_NaN())};
        for (std::size_t i = 0; i < n_rows; ++i) {
          if (is_missing_token(col.raw[i])) continue;
          auto it = codes.find(col.raw[i]);
          if (it == codes.end()) {
            it = codes.emplace(col.raw[i], static_cast<double>(order.size())).first;
            order.push_back(col.raw[i]);
          }
          oc.values[i] = it->second;
        }
        out_cols.push_back(std::move(oc));
        break;
      }
      case CsvOptions::Categorical::one_hot: {
        std::vector<std::string> order;
        std::set<std::string> seen;
        for (std::size_t i = 0; i < n_rows; ++i) {
          if (is_missing_token(col.raw[i])) continue;
          if (seen.insert(col.raw[i]).second) order.push_back(col.raw[i]);
        }
        for (const auto& level : order) {
          OutColumn oc{col.name + "=" + level,
                       std::vector<double>(n_rows,
                                           std::numeric_limits<double>::quiet_NaN())};
          for (std::size_t i = 0; i < n_rows; ++i) {
            if (is_missing_token(col.raw[i])) continue;
            oc.values[i] = col.raw[i] == level ? 1.0 : 0.0;
          }
          out_cols.push_back(std::move(oc));
        }
        break;
      }
    }
  }

  // Missing-value policy.
  for (auto& oc : out_cols) {
    std::vector<double> present;
    present.reserve(n_rows);
    for (double v : oc.values) {
      if (!std::isnan(v)) present.push_back(v);
    }
    if (present.size() == n_rows) continue;
    if (options.missing == CsvOptions::Missing::reject) {
      for (std::size_t i = 0; i < n_rows; ++i) {
        if (std::isnan(oc.values[i])) {
          throw Error(ErrorKind::domain, "missing value at row " + std::to_string(i + 1) +
                                             ", column '" + oc.name +
                                             "' (pass missing=impute_median to impute)");
        }
      }
    }
    if (present.empty()) {
      throw Error(ErrorKind::domain, "column '" + oc.name + "' is entirely missing");
    }
    const double med = column_median(present);
    for (double& v : oc.values) {
      if (std::isnan(v)) v = med;
    }
  }

  Dataset d;
  d.labels = std::move(labels);
  for (const auto& oc : out_cols) d.feature_names.push_back(oc.name);
  d.features.resize(n_rows * out_cols.size());
  for (std::size_t i = 0; i < n_rows; ++i) {
    for (std::size_t j = 0; j < out_cols.size(); ++j) {
      d.features[i * out_cols.size() + j] = out_cols[j].values[i];
    }
  }
  d.provenance = "csv(" + path + ")";
  d.validate();
  return d;
}

void write_csv(const Dataset& d, const std::string& path,
               const std::string& label_column) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::io, "cannot write file: " + path);
  for (std::size_t j = 0; j < d.n_features(); ++j) {
    out << d.feature_names[j] << ',';
  }
  out << label_column << '\n';
  char buf[64];
  for (std::size_t i = 0; i < d.n_samples(); ++i) {
    const double* row = d.row(i);
    for (std::size_t j = 0; j < d.n_features(); ++j) {
      std::snprintf(buf, sizeof(buf), "%.17g", row[j]);
      out << buf << ',';
    }
    out << d.labels[i] << '\n';
  }
  if (!out) throw Error(ErrorKind::io, "write failed: " + path);
}

namespace {

Dataset take_rows(const Dataset& d, const std::vector<std::size_t>& rows,
                  const std::string& provenance) {
  Dataset out;
  out.feature_names = d.feature_names;
  out.provenance = provenance;
  out.labels.reserve(rows.size());
  out.features.reserve(rows.size() * d.n_features());
  for (std::size_t r : rows) {
    out.labels.push_back(d.labels[r]);
    const double* src = d.row(r);
    out.features.insert(out.features.end(), src, src + d.n_features());
  }
  return out;
}

}  // namespace

std::vector<std::size_t> stratified_indices(const Dataset& d, std::size_t k,
                                            std::uint64_t seed) {
  const std::size_t n = d.n_samples();
  if (k < 2 || k > n) {
    throw Error(ErrorKind::class_exhaustion,
                "subsample size " + std::to_string(k) + " outside [2, " +
                    std::to_string(n) + "]");
  }
  std::vector<std::size_t> pos;
  std::vector<std::size_t> neg;
  for (std::size_t i = 0; i < n; ++i) {
    (d.labels[i] == 1 ? pos : neg).push_back(i);
  }
  if (pos.empty() || neg.empty()) {
    throw Error(ErrorKind::class_exhaustion, "dataset has a single class");
  }
  // Proportional rounding, clamped so each class keeps at least one sample.
  const double pos_fraction = static_cast<double>(pos.size()) / static_cast<double>(n);
  std::size_t k_pos = static_cast<std::size_t>(
      std::llround(static_cast<double>(k) * pos_fraction));
  k_pos = std::clamp<std::size_t>(k_pos, 1, k - 1);
  k_pos = std::min(k_pos, pos.size());
  std::size_t k_neg = k - k_pos;
  if (k_neg > neg.size()) {
    k_neg = neg.size();
    k_pos = k - k_neg;
  }
  if (k_pos < 1 || k_neg < 1 || k_pos > pos.size() || k_neg > neg.size()) {
    throw Error(ErrorKind::class_exhaustion,
                "subsample of size " + std::to_string(k) + " would empty a class");
  }

  Rng rng(seed);
  auto draw = [&rng](std::vector<std::size_t>& idx, std::size_t count) {
    for (std::size_t i = 0; i < count; ++i) {
      const std::size_t j = i + rng.below(idx.size() - i);
      std::swap(idx[i], idx[j]);
    }
    idx.resize(count);
  };
  draw(pos, k_pos);
  draw(neg, k_neg);

  std::vector<std::size_t> chosen;
  chosen.reserve(k);
  chosen.insert(chosen.end(), pos.begin(), pos.end());
  chosen.insert(chosen.end(), neg.begin(), neg.end());
  std::sort(chosen.begin(), chosen.end());
  return chosen;
}

Dataset stratified_subsample(const Dataset& d, std::size_t k, std::uint64_t seed) {
  return take_rows(d, stratified_indices(d, k, seed),
                   d.provenance + "|subsample(k=" + std::to_string(k) + ")");
}

Dataset drop_features(const Dataset& d, const std::vector<std::string>& names) {
  std::set<std::size_t> dropped;
  for (const auto& name : names) dropped.insert(d.feature_index(name));
  if (dropped.size() >= d.n_features()) {
    throw Error(ErrorKind::invalid_argument, "cannot drop all features");
  }
  std::vector<std::size_t> keep;
  for (std::size_t j = 0; j < d.n_features(); ++j) {
    if (!dropped.count(j)) keep.push_back(j);
  }
  Dataset out;
  for (std::size_t j : keep) out.feature_names.push_back(d.feature_names[j]);
  out.labels = d.labels;
  out.provenance = d.provenance + "|drop(" + std::to_string(names.size()) + ")";
  out.features.resize(d.n_samples() * keep.size());
  for (std::size_t i = 0; i < d.n_samples(); ++i) {
    const double* src = d.row(i);
    double* dst = out.features.data() + i * keep.size();
    for (std::size_t j = 0; j < keep.size(); ++j) dst[j] = src[keep[j]];
  }
  return out;
}

std::vector<double> correlation_matrix(const Dataset& d) {
  const std::size_t n = d.n_samples();
  const std::size_t f = d.n_features();
  // Constant features have no defined correlation; detect them exactly.
  for (std::size_t j = 0; j < f; ++j) {
    double lo = d.at(0, j);
    double hi = lo;
    for (std::size_t i = 1; i < n; ++i) {
      lo = std::min(lo, d.at(i, j));
      hi = std::max(hi, d.at(i, j));
    }
    if (lo == hi) {
      throw Error(ErrorKind::domain,
                  "zero-variance feature: " + d.feature_names[j]);
    }
  }
  std::vector<double> mean(f, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double* row = d.row(i);
    for (std::size_t j = 0; j < f; ++j) mean[j] += row[j];
  }
  for (double& m : mean) m /= static_cast<double>(n);

  std::vector<double> css(f, 0.0);  // centered sum of squares
  std::vector<double> r(f * f, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double* row = d.row(i);
    for (std::size_t j = 0; j < f; ++j) {
      const double cj = row[j] - mean[j];
      css[j] += cj * cj;
      for (std::size_t l = j + 1; l < f; ++l) {
        r[j * f + l] += cj * (row[l] - mean[l]);
      }
    }
  }
  for (std::size_t j = 0; j < f; ++j) {
    r[j * f + j] = 1.0;
    for (std::size_t l = j + 1; l < f; ++l) {
      const double v = std::clamp(r[j * f + l] / std::sqrt(css[j] * css[l]), -1.0, 1.0);
      r[j * f + l] = v;
      r[l * f + j] = v;
    }
  }
  return r;
}

std::pair<Dataset, PruneLog> prune_correlated(const Dataset& d,
                                              const std::vector<double>& importance,
                                              double cut_standard) {
  if (importance.size() != d.n_features()) {
    throw Error(ErrorKind::invalid_argument,
                "importance length must equal the feature count");
  }
  if (!(cut_standard > 0.0 && cut_standard <= 1.0)) {
    throw Error(ErrorKind::invalid_argument, "cut_standard must be in (0,1]");
  }
  const std::size_t f = d.n_features();
  const std::vector<double> r = correlation_matrix(d);

  PruneLog log;
  log.cut_standard = cut_standard;
  std::vector<bool> alive(f, true);
  std::size_t n_alive = f;
  while (n_alive >= 2) {
    double best = -1.0;
    std::size_t bi = 0;
    std::size_t bj = 0;
    for (std::size_t i = 0; i < f; ++i) {
      if (!alive[i]) continue;
      for (std::size_t j = i + 1; j < f; ++j) {
        if (!alive[j]) continue;
        const double v = std::fabs(r[i * f + j]);
        if (v > best) {
          best = v;
          bi = i;
          bj = j;
        }
      }
    }
    if (!(best > cut_standard)) break;
    // Remove the lower-importance member; on a tie, the later column.
    std::size_t removed = bj;
    std::size_t kept = bi;
    if (importance[bi] < importance[bj]) {
      removed = bi;
      kept = bj;
    }
    log.entries.push_back({d.feature_names[kept], d.feature_names[removed], best});
    alive[removed] = false;
    --n_alive;
  }
  log.too_few_features = n_alive < 2;

  std::vector<std::string> to_drop;
  for (std::size_t j = 0; j < f; ++j) {
    if (!alive[j]) to_drop.push_back(d.feature_names[j]);
  }
  Dataset pruned = to_drop.empty() ? d : drop_features(d, to_drop);
  pruned.provenance = d.provenance + "|prune(cut=" + std::to_string(cut_standard) + ")";
  return {std::move(pruned), std::move(log)};
}

}  // namespace fislab
