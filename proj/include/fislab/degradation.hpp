#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fislab/dataset.hpp"
#include "fislab/forest.hpp"
#include "fislab/metrics.hpp"
#include "fislab/stats.hpp"

namespace fislab {

enum class EvalMode { out_of_bag, holdout };
enum class FeatureCutMode { schedule, one_at_a_time };

struct ExperimentConfig {
  int n_bootstraps = 100;
  ForestHyperparams forest;
  double auc_floor = 0.55;
  double auc_step_tolerance = 0.05;
  EvalMode eval_mode = EvalMode::out_of_bag;
  double holdout_fraction = 0.3;
  FeatureCutMode feature_cut_mode = FeatureCutMode::schedule;
  std::uint64_t seed = 0;

  void validate() const;
};

/// One bootstrap-averaged evaluation: AUC summary plus the per-bootstrap
/// normalized importance matrix and the rank derived from its column means.
struct ExperimentResult {
  double mean_auc = 0.0;
  double auc_sd = 0.0;
  std::size_t n_bootstraps = 0;
  std::vector<double> importance_matrix;  // B x n_features row-major
  std::vector<double> mean_importance;
  RankVector rank;
  std::size_t sample_count = 0;
  std::vector<std::string> feature_set;
};

enum class Termination { auc_floor, class_exhaustion, feature_exhaustion };

const char* termination_name(Termination t);

struct TraceStep {
  std::size_t size = 0;  // sample count (data cutting) or feature count
  bool refinement = false;
  ExperimentResult result;
  StabilityIndexes stability;  // vs the full-data reference
};

struct DegradationTrace {
  CutAlgorithm algorithm = CutAlgorithm::data_cut;
  ExperimentResult reference;
  std::vector<TraceStep> steps;  // sizes strictly decreasing; steps[0] is full
  Termination termination = Termination::auc_floor;
  std::vector<std::string> warnings;

  double min_auc() const;
  double max_auc() const;
};

/// Per bootstrap: with-replacement resample as the training set, forest seeded
/// from (config seed, bootstrap index), AUC on the out-of-bag rows (or a
/// stratified holdout per eval_mode). Errors with class_exhaustion when any
/// bootstrap's training or evaluation rows lose a class.
ExperimentResult bootstrap_experiment(const Dataset& d, const ExperimentConfig& c,
                                      int threads = 1);

/// The halving schedule shared by both cutting algorithms, driven by
/// callbacks so it can be exercised against arbitrary AUC profiles:
/// candidate = accepted/2 (or accepted-1 when one_at_a_time); when the AUC
/// drop from the accepted step exceeds auc_step_tolerance, one refinement at
/// the midpoint is run and becomes the accepted size; stops below auc_floor,
/// on class exhaustion (run_at throws), or when the candidate falls below
/// min_size. Every conducted experiment is recorded once, in decreasing size
/// order.
DegradationTrace run_cut_schedule(
    CutAlgorithm algorithm, const ExperimentResult& reference, std::size_t full_size,
    std::size_t min_size, const ExperimentConfig& c, bool one_at_a_time,
    Termination exhaustion_kind,
    const std::function<ExperimentResult(std::size_t)>& run_at,
    const std::function<StabilityIndexes(const ExperimentResult&)>& stability);

/// Halving schedule with one midpoint refinement per step when the AUC drop
/// exceeds the tolerance; runs until the AUC floor or class exhaustion.
DegradationTrace run_data_cutting(const Dataset& d, const ExperimentConfig& c,
                                  int threads = 1);
DegradationTrace run_data_cutting(const Dataset& d, const ExperimentConfig& c,
                                  const ExperimentResult& reference, int threads = 1);

/// Same schedule applied to the feature count; at count f the surviving set is
/// the f lowest-importance reference features (top ranks removed first) and
/// stability is measured against the projected reference rank.
DegradationTrace run_feature_cutting(const Dataset& d, const ExperimentResult& reference,
                                     const ExperimentConfig& c, int threads = 1);

/// Keeps each trace's steps inside the other's [min, max] AUC span plus at
/// most one step beyond each end; errors when the spans are disjoint.
std::pair<DegradationTrace, DegradationTrace> trim_traces(const DegradationTrace& a,
                                                          const DegradationTrace& b);

struct DifferenceCurve {
  std::vector<double> auc_grid;
  std::vector<StabilityIndexes> differences;  // feature_cut minus data_cut
};

DifferenceCurve interpolated_difference(const DegradationTrace& a,
                                        const DegradationTrace& b,
                                        const std::vector<double>& grid);

struct SweepEntry {
  double standard = 1.0;
  std::size_t surviving_features = 0;
  std::size_t removed_features = 0;
  bool skipped = false;
  std::string warning;
  std::array<std::optional<RegressionResult>, 4> comparison;  // per stability index
};

struct CorrelationSweepResult {
  std::vector<SweepEntry> entries;
  std::array<std::optional<RegressionResult>, 4> effect;  // coefficient ~ standard
  std::vector<std::string> warnings;
};

CorrelationSweepResult correlation_sweep(const Dataset& d,
                                         const std::vector<double>& ref_importance,
                                         const std::vector<double>& standards,
                                         const ExperimentConfig& c, int threads = 1);

struct SufficiencyPoint {
  double fraction = 1.0;
  std::size_t sample_count = 0;
  double mean_auc = 0.0;
  bool skipped = false;
};

struct SufficiencyReport {
  std::vector<SufficiencyPoint> points;
  double tolerance = 0.02;
  double auc_delta = 0.0;  // |AUC(1.0) - AUC(smallest fraction >= 0.5)|
  bool data_sufficient = false;
  std::vector<std::string> warnings;
};

SufficiencyReport sufficiency_probe(const Dataset& d, const std::vector<double>& fractions,
                                    const ExperimentConfig& c, double tolerance = 0.02,
                                    int threads = 1);

/// JSON view of a trace (steps, AUCs, ranks, stability indexes).
nlohmann::ordered_json trace_to_json(const DegradationTrace& trace);

}  // namespace fislab
