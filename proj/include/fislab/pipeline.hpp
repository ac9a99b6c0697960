#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "fislab/dataset.hpp"
#include "fislab/degradation.hpp"
#include "fislab/theory.hpp"

namespace fislab {

struct CsvInput {
  std::string path;
  CsvOptions options;
};

struct TheoryConfig {
  std::size_t population_size = 1000;
  std::size_t n_features = 20;
  std::vector<std::size_t> k_values;
  std::vector<double> gaps;
  double mu = 0.5;
};

struct SufficiencyConfig {
  std::vector<double> fractions;
  double tolerance = 0.02;
};

enum class ReportFormat { csv, json, svg };

const char* report_format_name(ReportFormat f);
ReportFormat parse_report_format(const std::string& name);

/// The single serializable source of truth for a run. Thread count is a
/// runtime argument, not configuration, so outputs cannot depend on it.
struct RunConfig {
  std::uint64_t seed = 0;
  std::optional<SyntheticSpec> synthetic;
  std::optional<CsvInput> csv;
  ExperimentConfig experiment;
  double adjacency_alpha = 0.05;
  std::vector<double> correlation_standards;
  std::optional<SufficiencyConfig> sufficiency;
  std::optional<TheoryConfig> theory;
  std::string out_dir = "out";
  std::vector<ReportFormat> formats = {ReportFormat::csv, ReportFormat::json,
                                       ReportFormat::svg};

  void validate(bool needs_input) const;
};

RunConfig parse_run_config(const std::string& json_text);
nlohmann::ordered_json run_config_to_json(const RunConfig& config);

struct ReportBundle {
  std::string out_dir;
  nlohmann::ordered_json manifest;
  std::vector<std::string> warnings;
};

/// Loads or generates the configured dataset.
Dataset load_input(const RunConfig& config);

/// Full pipeline: reference experiment, both degradation traces, trimming,
/// per-index algorithm comparison, per-step adjacency analysis, plus the
/// optional correlation sweep / sufficiency probe / theory surface blocks.
ReportBundle run_pipeline(const RunConfig& config, int threads = 1);

/// Correlation-cut sweep only (requires correlation_standards).
ReportBundle run_sweep_pipeline(const RunConfig& config, int threads = 1);

/// Theory tables and surface only (requires the theory block).
ReportBundle run_theory_pipeline(const RunConfig& config);

/// Re-renders charts (and nothing else) from a bundle directory's tables.
std::vector<std::string> render_report(const std::string& bundle_dir,
                                       const std::vector<ReportFormat>& formats);

std::uint64_t fnv1a64(const std::string& bytes);

}  // namespace fislab
