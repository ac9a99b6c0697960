#include "fislab/degradation.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>

#include "fislab/error.hpp"
#include "fislab/parallel.hpp"
#include "fislab/random.hpp"

namespace fislab {

void ExperimentConfig::validate() const {
  if (n_bootstraps < 1) {
    throw Error(ErrorKind::invalid_argument, "experiment: n_bootstraps must be >= 1");
  }
  if (!(auc_floor >= 0.5 && auc_floor < 1.0)) {
    throw Error(ErrorKind::invalid_argument, "experiment: auc_floor must be in [0.5, 1)");
  }
  if (!(auc_step_tolerance > 0.0)) {
    throw Error(ErrorKind::invalid_argument,
                "experiment: auc_step_tolerance must be positive");
  }
  if (!(holdout_fraction > 0.0 && holdout_fraction < 1.0)) {
    throw Error(ErrorKind::invalid_argument,
                "experiment: holdout_fraction must be in (0,1)");
  }
  forest.validate();
}

const char* termination_name(Termination t) {
  switch (t) {
    case Termination::auc_floor: return "auc_floor";
    case Termination::class_exhaustion: return "class_exhaustion";
    case Termination::feature_exhaustion: return "feature_exhaustion";
  }
  return "unknown";
}

double DegradationTrace::min_auc() const {
  double v = steps.front().result.mean_auc;
  for (const auto& s : steps) v = std::min(v, s.result.mean_auc);
  return v;
}

double DegradationTrace::max_auc() const {
  double v = steps.front().result.mean_auc;
  for (const auto& s : steps) v = std::max(v, s.result.mean_auc);
  return v;
}

namespace {

struct BootstrapOutcome {
  double auc_value = 0.0;
  std::vector<double> importance;
  bool failed = false;
  std::string message;
};

BootstrapOutcome run_one_bootstrap(const Dataset& d, const ExperimentConfig& c,
                                   std::size_t b) {
  BootstrapOutcome out;
  const std::size_t n = d.n_samples();
  Rng rng(derive_seed(c.seed, SeedStream::bootstrap_resample, b));

  Dataset train;
  std::vector<std::size_t> eval_rows;
  if (c.eval_mode == EvalMode::out_of_bag) {
    std::vector<std::uint8_t> drawn(n, 0);
    train.feature_names = d.feature_names;
    train.provenance = d.provenance;
    train.labels.reserve(n);
    train.features.reserve(n * d.n_features());
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t r = rng.below(n);
      drawn[r] = 1;
      train.labels.push_back(d.labels[r]);
      const double* src = d.row(r);
      train.features.insert(train.features.end(), src, src + d.n_features());
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (!drawn[i]) eval_rows.push_back(i);
    }
  } else {
    // Stratified holdout: the test fraction is held out, the rest trains.
    const std::size_t k_test = std::max<std::size_t>(
        2, static_cast<std::size_t>(std::llround(
               c.holdout_fraction * static_cast<double>(n))));
    if (k_test >= n) {
      out.failed = true;
      out.message = "holdout leaves no training rows";
      return out;
    }
    const std::vector<std::size_t> test_rows = stratified_indices(
        d, k_test, derive_seed(c.seed, SeedStream::holdout_split, b));
    std::vector<std::uint8_t> held(n, 0);
    for (std::size_t r : test_rows) held[r] = 1;
    train.feature_names = d.feature_names;
    train.provenance = d.provenance;
    for (std::size_t i = 0; i < n; ++i) {
      if (held[i]) {
        eval_rows.push_back(i);
      } else {
        train.labels.push_back(d.labels[i]);
        const double* src = d.row(i);
        train.features.insert(train.features.end(), src, src + d.n_features());
      }
    }
  }

  std::size_t train_pos = train.positive_count();
  if (train.labels.size() < 2 || train_pos == 0 || train_pos == train.labels.size()) {
    out.failed = true;
    out.message = "bootstrap " + std::to_string(b) + " training rows lost a class";
    return out;
  }
  std::vector<int> eval_labels;
  eval_labels.reserve(eval_rows.size());
  for (std::size_t r : eval_rows) eval_labels.push_back(d.labels[r]);
  std::size_t eval_pos = 0;
  for (int l : eval_labels) eval_pos += static_cast<std::size_t>(l);
  if (eval_labels.empty() || eval_pos == 0 || eval_pos == eval_labels.size()) {
    out.failed = true;
    out.message = "bootstrap " + std::to_string(b) + " test labels lost a class";
    return out;
  }

  ForestHyperparams h = c.forest;
  h.seed = derive_seed(c.seed, SeedStream::forest_model, b);
  const ForestModel model = fit(train, h, 1);

  std::vector<double> eval_features;
  eval_features.reserve(eval_rows.size() * d.n_features());
  for (std::size_t r : eval_rows) {
    const double* src = d.row(r);
    eval_features.insert(eval_features.end(), src, src + d.n_features());
  }
  const std::vector<double> scores =
      predict_proba(model, eval_features.data(), eval_rows.size(), d.n_features());
  out.auc_value = auc(eval_labels, scores);
  out.importance = gini_importance(model);
  return out;
}

}  // namespace

ExperimentResult bootstrap_experiment(const Dataset& d, const ExperimentConfig& c,
                                      int threads) {
  c.validate();
  if (d.n_features() == 0) {
    throw Error(ErrorKind::domain, "experiment requires at least 1 feature");
  }
  const std::size_t n_pos = d.positive_count();
  if (d.n_samples() < 2 || n_pos == 0 || n_pos == d.n_samples()) {
    throw Error(ErrorKind::class_exhaustion, "experiment requires both classes present");
  }

  const std::size_t B = static_cast<std::size_t>(c.n_bootstraps);
  std::vector<BootstrapOutcome> outcomes(B);
  parallel_for(B, threads,
               [&](std::size_t b) { outcomes[b] = run_one_bootstrap(d, c, b); });
  for (const auto& o : outcomes) {
    if (o.failed) throw Error(ErrorKind::class_exhaustion, o.message);
  }

  ExperimentResult res;
  res.n_bootstraps = B;
  res.sample_count = d.n_samples();
  res.feature_set = d.feature_names;
  res.importance_matrix.resize(B * d.n_features());
  double sum = 0.0;
  for (std::size_t b = 0; b < B; ++b) {
    sum += outcomes[b].auc_value;
    std::copy(outcomes[b].importance.begin(), outcomes[b].importance.end(),
              res.importance_matrix.begin() +
                  static_cast<std::ptrdiff_t>(b * d.n_features()));
  }
  res.mean_auc = sum / static_cast<double>(B);
  double ss = 0.0;
  for (std::size_t b = 0; b < B; ++b) {
    const double dv = outcomes[b].auc_value - res.mean_auc;
    ss += dv * dv;
  }
  res.auc_sd = B > 1 ? std::sqrt(ss / static_cast<double>(B - 1)) : 0.0;

  res.mean_importance.assign(d.n_features(), 0.0);
  for (std::size_t b = 0; b < B; ++b) {
    for (std::size_t j = 0; j < d.n_features(); ++j) {
      res.mean_importance[j] += res.importance_matrix[b * d.n_features() + j];
    }
  }
  for (double& v : res.mean_importance) v /= static_cast<double>(B);
  res.rank = rank_from_importance(res.mean_importance, d.feature_names,
                                  "n=" + std::to_string(d.n_samples()) + ",f=" +
                                      std::to_string(d.n_features()));
  return res;
}

namespace {

StabilityIndexes identity_indexes() { return StabilityIndexes{0.0, 1.0, 0.0, 0.0}; }

}  // namespace

DegradationTrace run_cut_schedule(
    CutAlgorithm algorithm, const ExperimentResult& reference, std::size_t full_size,
    std::size_t min_size, const ExperimentConfig& c, bool one_at_a_time,
    Termination exhaustion_kind,
    const std::function<ExperimentResult(std::size_t)>& run_at,
    const std::function<StabilityIndexes(const ExperimentResult&)>& stability) {
  DegradationTrace trace;
  trace.algorithm = algorithm;
  trace.reference = reference;
  trace.steps.push_back({full_size, false, reference, identity_indexes()});

  if (reference.mean_auc < c.auc_floor) {
    trace.warnings.push_back("full-data AUC " + std::to_string(reference.mean_auc) +
                             " is already below the floor " +
                             std::to_string(c.auc_floor));
    trace.termination = Termination::auc_floor;
    return trace;
  }

  std::map<std::size_t, ExperimentResult> cache;
  cache.emplace(full_size, reference);
  auto run_cached = [&](std::size_t size) -> const ExperimentResult& {
    auto it = cache.find(size);
    if (it == cache.end()) {
      it = cache.emplace(size, run_at(size)).first;
      trace.steps.push_back({size, false, it->second, stability(it->second)});
    }
    return it->second;
  };

  std::size_t accepted = full_size;
  double accepted_auc = reference.mean_auc;
  for (;;) {
    const std::size_t cand = one_at_a_time ? accepted - 1 : accepted / 2;
    if (cand < min_size || cand >= accepted) {
      trace.termination = exhaustion_kind;
      break;
    }
    double cand_auc;
    try {
      cand_auc = run_cached(cand).mean_auc;
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::class_exhaustion) throw;
      trace.warnings.push_back(std::string("stopped at size ") + std::to_string(cand) +
                               ": " + e.what());
      trace.termination = Termination::class_exhaustion;
      break;
    }

    std::size_t next_accepted = cand;
    if (!one_at_a_time && accepted_auc - cand_auc > c.auc_step_tolerance) {
      const std::size_t mid = (accepted + cand) / 2;
      if (mid > cand && mid < accepted) {
        const bool fresh = cache.find(mid) == cache.end();
        try {
          const ExperimentResult& mid_res = run_cached(mid);
          if (fresh) trace.steps.back().refinement = true;
          next_accepted = mid;
          (void)mid_res;
        } catch (const Error& e) {
          if (e.kind() != ErrorKind::class_exhaustion) throw;
          trace.warnings.push_back(std::string("refinement at size ") +
                                   std::to_string(mid) + " stopped: " + e.what());
          trace.termination = Termination::class_exhaustion;
          break;
        }
      }
    }
    accepted = next_accepted;
    accepted_auc = cache.at(accepted).mean_auc;
    if (accepted_auc < c.auc_floor) {
      trace.termination = Termination::auc_floor;
      break;
    }
  }

  std::sort(trace.steps.begin(), trace.steps.end(),
            [](const TraceStep& a, const TraceStep& b) { return a.size > b.size; });
  return trace;
}

DegradationTrace run_data_cutting(const Dataset& d, const ExperimentConfig& c,
                                  const ExperimentResult& reference, int threads) {
  c.validate();
  const auto run_at = [&](std::size_t size) {
    const Dataset sub =
        stratified_subsample(d, size, derive_seed(c.seed, SeedStream::subsample, size));
    ExperimentConfig step = c;
    step.seed = derive_seed(c.seed, SeedStream::data_cut_step, size);
    return bootstrap_experiment(sub, step, threads);
  };
  const auto stab = [&](const ExperimentResult& r) {
    return stability_indexes(reference.rank, r.rank);
  };
  return run_cut_schedule(CutAlgorithm::data_cut, reference, d.n_samples(), 2, c,
                          false, Termination::class_exhaustion, run_at, stab);
}

DegradationTrace run_data_cutting(const Dataset& d, const ExperimentConfig& c,
                                  int threads) {
  return run_data_cutting(d, c, bootstrap_experiment(d, c, threads), threads);
}

DegradationTrace run_feature_cutting(const Dataset& d, const ExperimentResult& reference,
                                     const ExperimentConfig& c, int threads) {
  c.validate();
  if (reference.feature_set != d.feature_names) {
    throw Error(ErrorKind::invalid_argument,
                "feature cutting: reference was not computed on this dataset");
  }
  const std::size_t n_feat = d.n_features();

  // Names ordered by reference rank (rank 1 first); cutting removes from the
  // front, so the surviving set at count f is the f lowest-importance names.
  std::vector<std::string> by_rank(n_feat);
  for (std::size_t i = 0; i < n_feat; ++i) {
    by_rank[static_cast<std::size_t>(reference.rank.ranks[i]) - 1] =
        reference.rank.names[i];
  }

  const auto run_at = [&](std::size_t f) {
    const std::vector<std::string> removed(by_rank.begin(),
                                           by_rank.begin() +
                                               static_cast<std::ptrdiff_t>(n_feat - f));
    const Dataset cut = drop_features(d, removed);
    ExperimentConfig step = c;
    step.seed = derive_seed(c.seed, SeedStream::feature_cut_step, f);
    return bootstrap_experiment(cut, step, threads);
  };
  const auto stab = [&](const ExperimentResult& r) {
    const RankVector projected = project_reference_rank(reference.rank, r.feature_set);
    return stability_indexes(projected, r.rank);
  };
  return run_cut_schedule(CutAlgorithm::feature_cut, reference, n_feat, 1, c,
                          c.feature_cut_mode == FeatureCutMode::one_at_a_time,
                          Termination::feature_exhaustion, run_at, stab);
}

std::pair<DegradationTrace, DegradationTrace> trim_traces(const DegradationTrace& a,
                                                          const DegradationTrace& b) {
  if (a.steps.empty() || b.steps.empty()) {
    throw Error(ErrorKind::invalid_argument, "trim_traces: empty trace");
  }
  if (std::max(a.min_auc(), b.min_auc()) > std::min(a.max_auc(), b.max_auc())) {
    throw Error(ErrorKind::domain, "trim_traces: no overlap between AUC ranges");
  }
  const auto trim_one = [](const DegradationTrace& t, double lo, double hi) {
    DegradationTrace out = t;
    out.steps.clear();
    // At most one step beyond each end: the closest one.
    std::ptrdiff_t best_below = -1;
    std::ptrdiff_t best_above = -1;
    for (std::size_t i = 0; i < t.steps.size(); ++i) {
      const double v = t.steps[i].result.mean_auc;
      if (v < lo && (best_below < 0 ||
                     v > t.steps[static_cast<std::size_t>(best_below)].result.mean_auc)) {
        best_below = static_cast<std::ptrdiff_t>(i);
      }
      if (v > hi && (best_above < 0 ||
                     v < t.steps[static_cast<std::size_t>(best_above)].result.mean_auc)) {
        best_above = static_cast<std::ptrdiff_t>(i);
      }
    }
    for (std::size_t i = 0; i < t.steps.size(); ++i) {
      const double v = t.steps[i].result.mean_auc;
      const bool inside = v >= lo && v <= hi;
      if (inside || static_cast<std::ptrdiff_t>(i) == best_below ||
          static_cast<std::ptrdiff_t>(i) == best_above) {
        out.steps.push_back(t.steps[i]);
      }
    }
    return out;
  };
  return {trim_one(a, b.min_auc(), b.max_auc()), trim_one(b, a.min_auc(), a.max_auc())};
}

namespace {

// Piecewise-linear interpolation of index `idx` over mean AUC; duplicate AUC
// values are averaged first.
double interp_index(const DegradationTrace& t, std::size_t idx, double x) {
  std::vector<std::pair<double, double>> pts;
  for (const auto& s : t.steps) {
    pts.emplace_back(s.result.mean_auc, stability_value(s.stability, idx));
  }
  std::sort(pts.begin(), pts.end());
  std::vector<std::pair<double, double>> merged;
  std::size_t i = 0;
  while (i < pts.size()) {
    std::size_t j = i;
    double sum = 0.0;
    while (j < pts.size() && pts[j].first == pts[i].first) {
      sum += pts[j].second;
      ++j;
    }
    merged.emplace_back(pts[i].first, sum / static_cast<double>(j - i));
    i = j;
  }
  if (x < merged.front().first - 1e-12 || x > merged.back().first + 1e-12) {
    throw Error(ErrorKind::invalid_argument,
                "grid point " + std::to_string(x) + " outside the trace AUC span");
  }
  x = std::clamp(x, merged.front().first, merged.back().first);
  for (std::size_t s = 0; s + 1 < merged.size(); ++s) {
    if (x <= merged[s + 1].first) {
      const double x0 = merged[s].first;
      const double x1 = merged[s + 1].first;
      const double y0 = merged[s].second;
      const double y1 = merged[s + 1].second;
      if (x1 == x0) return y0;
      return y0 + (y1 - y0) * (x - x0) / (x1 - x0);
    }
  }
  return merged.back().second;
}

}  // namespace

DifferenceCurve interpolated_difference(const DegradationTrace& a,
                                        const DegradationTrace& b,
                                        const std::vector<double>& grid) {
  if (a.steps.empty() || b.steps.empty()) {
    throw Error(ErrorKind::invalid_argument, "interpolated_difference: empty trace");
  }
  const DegradationTrace* feature = &b;
  const DegradationTrace* data = &a;
  if (a.algorithm == CutAlgorithm::feature_cut && b.algorithm == CutAlgorithm::data_cut) {
    feature = &a;
    data = &b;
  }
  const double lo = std::max(a.min_auc(), b.min_auc());
  const double hi = std::min(a.max_auc(), b.max_auc());
  DifferenceCurve curve;
  for (double x : grid) {
    if (x < lo - 1e-12 || x > hi + 1e-12) {
      throw Error(ErrorKind::invalid_argument,
                  "grid point " + std::to_string(x) + " outside the AUC overlap [" +
                      std::to_string(lo) + ", " + std::to_string(hi) + "]");
    }
    StabilityIndexes diff;
    diff.rank_difference = interp_index(*feature, 0, x) - interp_index(*data, 0, x);
    diff.srcc = interp_index(*feature, 1, x) - interp_index(*data, 1, x);
    diff.canberra = interp_index(*feature, 2, x) - interp_index(*data, 2, x);
    diff.bray_curtis = interp_index(*feature, 3, x) - interp_index(*data, 3, x);
    curve.auc_grid.push_back(x);
    curve.differences.push_back(diff);
  }
  return curve;
}

CorrelationSweepResult correlation_sweep(const Dataset& d,
                                         const std::vector<double>& ref_importance,
                                         const std::vector<double>& standards,
                                         const ExperimentConfig& c, int threads) {
  if (standards.empty()) {
    throw Error(ErrorKind::invalid_argument, "correlation_sweep: empty standards");
  }
  for (std::size_t i = 0; i < standards.size(); ++i) {
    if (!(standards[i] > 0.0 && standards[i] <= 1.0)) {
      throw Error(ErrorKind::invalid_argument,
                  "correlation_sweep: standards must lie in (0,1]");
    }
    if (i > 0 && !(standards[i] < standards[i - 1])) {
      throw Error(ErrorKind::invalid_argument,
                  "correlation_sweep: standards must be strictly decreasing");
    }
  }

  CorrelationSweepResult sweep;
  for (std::size_t si = 0; si < standards.size(); ++si) {
    SweepEntry entry;
    entry.standard = standards[si];
    auto [pruned, log] = prune_correlated(d, ref_importance, standards[si]);
    entry.surviving_features = pruned.n_features();
    entry.removed_features = log.entries.size();
    if (pruned.n_features() < 2) {
      entry.skipped = true;
      entry.warning = "standard " + std::to_string(standards[si]) +
                      " leaves too few features";
      sweep.warnings.push_back(entry.warning);
      sweep.entries.push_back(std::move(entry));
      continue;
    }
    try {
      ExperimentConfig cs = c;
      cs.seed = derive_seed(c.seed, SeedStream::correlation_sweep, si);
      const ExperimentResult ref = bootstrap_experiment(pruned, cs, threads);
      const DegradationTrace data_trace = run_data_cutting(pruned, cs, ref, threads);
      const DegradationTrace feat_trace = run_feature_cutting(pruned, ref, cs, threads);
      const auto [data_trim, feat_trim] = trim_traces(data_trace, feat_trace);
      for (std::size_t idx = 0; idx < 4; ++idx) {
        std::vector<ComparisonPoint> points;
        for (const auto& s : data_trim.steps) {
          points.push_back({s.result.mean_auc, stability_value(s.stability, idx),
                            CutAlgorithm::data_cut});
        }
        for (const auto& s : feat_trim.steps) {
          points.push_back({s.result.mean_auc, stability_value(s.stability, idx),
                            CutAlgorithm::feature_cut});
        }
        entry.comparison[idx] = algorithm_comparison(points);
      }
    } catch (const Error& e) {
      entry.skipped = true;
      entry.warning = "standard " + std::to_string(standards[si]) +
                      " skipped: " + e.what();
      sweep.warnings.push_back(entry.warning);
    }
    sweep.entries.push_back(std::move(entry));
  }

  for (std::size_t idx = 0; idx < 4; ++idx) {
    std::vector<std::pair<double, double>> points;
    for (const auto& entry : sweep.entries) {
      if (!entry.skipped && entry.comparison[idx].has_value()) {
        points.emplace_back(entry.standard, entry.comparison[idx]->coefficients[2]);
      }
    }
    if (points.size() >= 3) {
      sweep.effect[idx] = correlation_effect(points);
    } else {
      sweep.warnings.push_back(std::string(kStabilityIndexNames[idx]) +
                               ": fewer than 3 usable standards, no effect regression");
    }
  }
  return sweep;
}

SufficiencyReport sufficiency_probe(const Dataset& d, const std::vector<double>& fractions,
                                    const ExperimentConfig& c, double tolerance,
                                    int threads) {
  if (fractions.empty() || std::fabs(fractions.front() - 1.0) > 1e-12) {
    throw Error(ErrorKind::invalid_argument,
                "sufficiency_probe: fractions must start at 1.0");
  }
  for (std::size_t i = 0; i < fractions.size(); ++i) {
    if (!(fractions[i] > 0.0 && fractions[i] <= 1.0)) {
      throw Error(ErrorKind::invalid_argument,
                  "sufficiency_probe: fractions must lie in (0,1]");
    }
    if (i > 0 && !(fractions[i] < fractions[i - 1])) {
      throw Error(ErrorKind::invalid_argument,
                  "sufficiency_probe: fractions must be strictly decreasing");
    }
  }

  SufficiencyReport report;
  report.tolerance = tolerance;
  for (std::size_t fi = 0; fi < fractions.size(); ++fi) {
    SufficiencyPoint point;
    point.fraction = fractions[fi];
    const std::size_t k = static_cast<std::size_t>(
        std::llround(fractions[fi] * static_cast<double>(d.n_samples())));
    point.sample_count = k;
    try {
      ExperimentConfig cp = c;
      cp.seed = derive_seed(c.seed, SeedStream::sufficiency_point, fi);
      if (fractions[fi] == 1.0) {
        point.mean_auc = bootstrap_experiment(d, cp, threads).mean_auc;
      } else {
        const Dataset sub = stratified_subsample(
            d, k, derive_seed(c.seed, SeedStream::subsample, 1'000'000 + fi));
        point.mean_auc = bootstrap_experiment(sub, cp, threads).mean_auc;
      }
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::class_exhaustion) throw;
      point.skipped = true;
      report.warnings.push_back("fraction " + std::to_string(fractions[fi]) +
                                " skipped: " + e.what());
    }
    report.points.push_back(point);
  }

  const SufficiencyPoint* full = nullptr;
  const SufficiencyPoint* smallest_half = nullptr;
  for (const auto& p : report.points) {
    if (p.skipped) continue;
    if (p.fraction == 1.0) full = &p;
    if (p.fraction >= 0.5 &&
        (smallest_half == nullptr || p.fraction < smallest_half->fraction)) {
      smallest_half = &p;
    }
  }
  if (full != nullptr && smallest_half != nullptr && smallest_half != full) {
    report.auc_delta = std::fabs(full->mean_auc - smallest_half->mean_auc);
    report.data_sufficient = report.auc_delta < tolerance;
  } else {
    report.warnings.push_back(
        "no usable fraction in [0.5, 1.0); data sufficiency undetermined");
  }
  return report;
}

nlohmann::ordered_json trace_to_json(const DegradationTrace& trace) {
  nlohmann::ordered_json j;
  j["algorithm"] = cut_algorithm_name(trace.algorithm);
  j["termination"] = termination_name(trace.termination);
  j["warnings"] = trace.warnings;
  nlohmann::ordered_json steps = nlohmann::ordered_json::array();
  for (const auto& s : trace.steps) {
    nlohmann::ordered_json step;
    step["size"] = s.size;
    step["refinement"] = s.refinement;
    step["mean_auc"] = s.result.mean_auc;
    step["auc_sd"] = s.result.auc_sd;
    step["sample_count"] = s.result.sample_count;
    step["feature_set"] = s.result.feature_set;
    step["rank"] = s.result.rank.ranks;
    step["stability"] = {{"rank_difference", s.stability.rank_difference},
                         {"srcc", s.stability.srcc},
                         {"canberra", s.stability.canberra},
                         {"bray_curtis", s.stability.bray_curtis}};
    steps.push_back(std::move(step));
  }
  j["steps"] = std::move(steps);
  return j;
}

}  // namespace fislab
