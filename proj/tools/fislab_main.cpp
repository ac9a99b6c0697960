// fislab command-line front end. All analysis runs inside the shared library
// through the C API; this binary only parses flags, merges overrides into the
// JSON config, and reports results.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "fislab.h"

namespace {

struct CommonFlags {
  std::string config_path;
  std::string out_dir;
  std::string formats;
  std::string label_column;
  long long seed = -1;
  bool seed_set = false;
  int bootstraps = 0;
  int threads = 1;
};

void add_common_flags(CLI::App* cmd, CommonFlags& flags, bool config_required) {
  auto* config = cmd->add_option("--config", flags.config_path, "JSON config file");
  if (config_required) config->required();
  cmd->add_option("--seed", flags.seed, "override config seed (u64)")
      ->each([&flags](const std::string&) { flags.seed_set = true; });
  cmd->add_option("--out", flags.out_dir, "override output directory");
  cmd->add_option("--format", flags.formats,
                  "comma-separated output formats: csv,json,svg");
  cmd->add_option("--label-column", flags.label_column,
                  "override the CSV label column");
  cmd->add_option("--bootstraps", flags.bootstraps, "override bootstrap count");
  cmd->add_option("--threads", flags.threads,
                  "worker threads (never changes results)")
      ->check(CLI::PositiveNumber);
}

nlohmann::json load_config(const CommonFlags& flags) {
  nlohmann::json config = nlohmann::json::object();
  if (!flags.config_path.empty()) {
    std::ifstream in(flags.config_path, std::ios::binary);
    if (!in) {
      throw std::runtime_error("cannot open config file: " + flags.config_path);
    }
    std::stringstream buf;
    buf << in.rdbuf();
    try {
      config = nlohmann::json::parse(buf.str());
    } catch (const nlohmann::json::exception& e) {
      throw std::runtime_error(flags.config_path + ": " + e.what());
    }
  }
  if (flags.seed_set) config["seed"] = static_cast<std::uint64_t>(flags.seed);
  if (!flags.out_dir.empty()) config["output"]["dir"] = flags.out_dir;
  if (!flags.formats.empty()) {
    std::vector<std::string> fmts;
    std::string cur;
    for (char c : flags.formats + ",") {
      if (c == ',') {
        if (!cur.empty()) fmts.push_back(cur);
        cur.clear();
      } else if (c != ' ') {
        cur.push_back(c);
      }
    }
    config["output"]["formats"] = fmts;
  }
  if (!flags.label_column.empty()) {
    config["input"]["csv"]["label_column"] = flags.label_column;
  }
  if (flags.bootstraps > 0) config["experiment"]["bootstraps"] = flags.bootstraps;
  return config;
}

int fail(fislab_status status) {
  std::cerr << "error (" << fislab_status_name(status) << "): " << fislab_last_error()
            << "\n";
  return static_cast<int>(status);
}

void print_warnings(const std::string& manifest_json) {
  const auto manifest = nlohmann::json::parse(manifest_json);
  if (manifest.contains("warnings")) {
    for (const auto& w : manifest["warnings"]) {
      std::cerr << "warning: " << w.get<std::string>() << "\n";
    }
  }
  std::size_t n_files = manifest.contains("files") ? manifest["files"].size() : 0;
  std::cout << "wrote " << n_files << " files under "
            << manifest["config"]["output"]["dir"].get<std::string>() << "\n";
}

using PipelineFn = fislab_status (*)(const char*, int, char**);

int run_pipeline_command(const CommonFlags& flags, PipelineFn fn) {
  const nlohmann::json config = load_config(flags);
  char* manifest = nullptr;
  const fislab_status status = fn(config.dump().c_str(), flags.threads, &manifest);
  if (status != FISLAB_OK) return fail(status);
  print_warnings(manifest);
  fislab_string_free(manifest);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fislab: feature-importance stability laboratory"};
  app.require_subcommand(1);
  app.set_version_flag("--version", fislab_version());

  CommonFlags run_flags, sweep_flags, theory_flags, gen_flags;
  std::string gen_out = "dataset.csv";
  std::string report_bundle;
  std::string report_formats = "svg";

  auto* run = app.add_subcommand("run", "full degradation pipeline");
  add_common_flags(run, run_flags, true);

  auto* sweep = app.add_subcommand("sweep-correlation",
                                   "correlation-cut sweep of the comparison");
  add_common_flags(sweep, sweep_flags, true);

  auto* theory = app.add_subcommand("theory", "essential-sample probability tables");
  add_common_flags(theory, theory_flags, true);

  auto* gen = app.add_subcommand("generate", "write a synthetic dataset CSV");
  add_common_flags(gen, gen_flags, true);
  gen->add_option("--out-csv", gen_out, "output CSV path")->capture_default_str();

  auto* report = app.add_subcommand("report", "re-render charts from a bundle");
  report->add_option("--bundle", report_bundle, "bundle directory")->required();
  report->add_option("--format", report_formats, "formats to render")
      ->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return run_pipeline_command(run_flags, fislab_run_pipeline);
    if (sweep->parsed()) {
      return run_pipeline_command(sweep_flags, fislab_sweep_correlation);
    }
    if (theory->parsed()) {
      const nlohmann::json config = load_config(theory_flags);
      char* manifest = nullptr;
      const fislab_status status =
          fislab_theory_report(config.dump().c_str(), &manifest);
      if (status != FISLAB_OK) return fail(status);
      print_warnings(manifest);
      fislab_string_free(manifest);
      return 0;
    }
    if (gen->parsed()) {
      nlohmann::json config = load_config(gen_flags);
      if (!config.contains("input") || !config["input"].contains("synthetic")) {
        std::cerr << "error: generate needs config.input.synthetic\n";
        return 1;
      }
      nlohmann::json spec = config["input"]["synthetic"];
      if (!spec.contains("seed") && config.contains("seed")) {
        spec["seed"] = config["seed"];
      }
      fislab_dataset* dataset = nullptr;
      fislab_status status = fislab_dataset_generate(spec.dump().c_str(), &dataset);
      if (status != FISLAB_OK) return fail(status);
      std::string label = "label";
      if (config["input"].contains("csv") &&
          config["input"]["csv"].contains("label_column")) {
        label = config["input"]["csv"]["label_column"].get<std::string>();
      }
      status = fislab_dataset_write_csv(dataset, gen_out.c_str(), label.c_str());
      if (status != FISLAB_OK) {
        fislab_dataset_free(dataset);
        return fail(status);
      }
      std::cout << "wrote " << gen_out << ": " << fislab_dataset_n_samples(dataset)
                << " samples, " << fislab_dataset_n_features(dataset) << " features, "
                << fislab_dataset_n_positive(dataset) << " positive\n";
      fislab_dataset_free(dataset);
      return 0;
    }
    if (report->parsed()) {
      char* files = nullptr;
      const fislab_status status =
          fislab_render_report(report_bundle.c_str(), report_formats.c_str(), &files);
      if (status != FISLAB_OK) return fail(status);
      const auto list = nlohmann::json::parse(files);
      std::cout << "rendered " << list.size() << " charts under " << report_bundle
                << "\n";
      fislab_string_free(files);
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
