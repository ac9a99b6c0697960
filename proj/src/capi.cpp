#include "fislab.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <string>
#include <vector>

#include "fislab/dataset.hpp"
#include "fislab/error.hpp"
#include "fislab/pipeline.hpp"

using fislab::Error;
using fislab::ErrorKind;

struct fislab_dataset {
  fislab::Dataset data;
};

namespace {

thread_local std::string g_last_error;

fislab_status status_from(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_argument: return FISLAB_ERROR_INVALID_ARGUMENT;
    case ErrorKind::parse: return FISLAB_ERROR_PARSE;
    case ErrorKind::io: return FISLAB_ERROR_IO;
    case ErrorKind::domain: return FISLAB_ERROR_DOMAIN;
    case ErrorKind::class_exhaustion: return FISLAB_ERROR_CLASS_EXHAUSTION;
    case ErrorKind::internal: return FISLAB_ERROR_INTERNAL;
  }
  return FISLAB_ERROR_INTERNAL;
}

template <typename Fn>
fislab_status guarded(Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    return FISLAB_OK;
  } catch (const Error& e) {
    g_last_error = e.what();
    return status_from(e.kind());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return FISLAB_ERROR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return FISLAB_ERROR_INTERNAL;
  }
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out != nullptr) std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

fislab_status require_arg(const void* p, const char* what) {
  if (p != nullptr) return FISLAB_OK;
  g_last_error = std::string(what) + " must not be NULL";
  return FISLAB_ERROR_INVALID_ARGUMENT;
}

}  // namespace

extern "C" {

const char* fislab_version(void) { return "1.0.0"; }

const char* fislab_status_name(fislab_status status) {
  switch (status) {
    case FISLAB_OK: return "ok";
    case FISLAB_ERROR_INVALID_ARGUMENT: return "invalid_argument";
    case FISLAB_ERROR_PARSE: return "parse_error";
    case FISLAB_ERROR_IO: return "io_error";
    case FISLAB_ERROR_DOMAIN: return "domain_error";
    case FISLAB_ERROR_CLASS_EXHAUSTION: return "class_exhaustion";
    case FISLAB_ERROR_INTERNAL: return "internal_error";
  }
  return "unknown";
}

const char* fislab_last_error(void) { return g_last_error.c_str(); }

void fislab_string_free(char* s) { std::free(s); }

fislab_status fislab_dataset_generate(const char* spec_json, fislab_dataset** out) {
  if (fislab_status s = require_arg(spec_json, "spec_json")) return s;
  if (fislab_status s = require_arg(out, "out")) return s;
  return guarded([&] {
    fislab::SyntheticSpec spec;
    try {
      from_json(nlohmann::json::parse(spec_json), spec);
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorKind::parse, std::string("synthetic spec: ") + e.what());
    }
    auto* handle = new fislab_dataset{fislab::generate_synthetic(spec)};
    *out = handle;
  });
}

fislab_status fislab_dataset_load_csv(const char* path, const char* label_column,
                                      const char* options_json, fislab_dataset** out) {
  if (fislab_status s = require_arg(path, "path")) return s;
  if (fislab_status s = require_arg(label_column, "label_column")) return s;
  if (fislab_status s = require_arg(out, "out")) return s;
  return guarded([&] {
    fislab::CsvOptions options;
    options.label_column = label_column;
    if (options_json != nullptr && options_json[0] != '\0') {
      nlohmann::json j;
      try {
        j = nlohmann::json::parse(options_json);
      } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::parse, std::string("csv options: ") + e.what());
      }
      const std::string cat = j.value("categorical", "reject");
      if (cat == "ordinal") {
        options.categorical = fislab::CsvOptions::Categorical::ordinal;
      } else if (cat == "one_hot") {
        options.categorical = fislab::CsvOptions::Categorical::one_hot;
      } else if (cat != "reject") {
        throw Error(ErrorKind::invalid_argument, "csv options: bad categorical mode");
      }
      const std::string mis = j.value("missing", "reject");
      if (mis == "impute_median") {
        options.missing = fislab::CsvOptions::Missing::impute_median;
      } else if (mis != "reject") {
        throw Error(ErrorKind::invalid_argument, "csv options: bad missing mode");
      }
    }
    auto* handle = new fislab_dataset{fislab::load_csv(path, options)};
    *out = handle;
  });
}

fislab_status fislab_dataset_write_csv(const fislab_dataset* dataset, const char* path,
                                       const char* label_column) {
  if (fislab_status s = require_arg(dataset, "dataset")) return s;
  if (fislab_status s = require_arg(path, "path")) return s;
  return guarded([&] {
    fislab::write_csv(dataset->data, path,
                      label_column != nullptr ? label_column : "label");
  });
}

size_t fislab_dataset_n_samples(const fislab_dataset* dataset) {
  return dataset == nullptr ? 0 : dataset->data.n_samples();
}

size_t fislab_dataset_n_features(const fislab_dataset* dataset) {
  return dataset == nullptr ? 0 : dataset->data.n_features();
}

size_t fislab_dataset_n_positive(const fislab_dataset* dataset) {
  return dataset == nullptr ? 0 : dataset->data.positive_count();
}

void fislab_dataset_free(fislab_dataset* dataset) { delete dataset; }

}  // extern "C"

namespace {

template <typename Runner>
fislab_status run_bundle(const char* config_json, char** manifest_json_out,
                         Runner&& runner) {
  if (fislab_status s = require_arg(config_json, "config_json")) return s;
  return guarded([&] {
    const fislab::RunConfig config = fislab::parse_run_config(config_json);
    const fislab::ReportBundle bundle = runner(config);
    if (manifest_json_out != nullptr) {
      *manifest_json_out = dup_string(bundle.manifest.dump(2));
      if (*manifest_json_out == nullptr) throw std::bad_alloc();
    }
  });
}

}  // namespace

extern "C" {

fislab_status fislab_run_pipeline(const char* config_json, int threads,
                                  char** manifest_json_out) {
  return run_bundle(config_json, manifest_json_out, [threads](const auto& config) {
    return fislab::run_pipeline(config, threads);
  });
}

fislab_status fislab_sweep_correlation(const char* config_json, int threads,
                                       char** manifest_json_out) {
  return run_bundle(config_json, manifest_json_out, [threads](const auto& config) {
    return fislab::run_sweep_pipeline(config, threads);
  });
}

fislab_status fislab_theory_report(const char* config_json, char** manifest_json_out) {
  return run_bundle(config_json, manifest_json_out, [](const auto& config) {
    return fislab::run_theory_pipeline(config);
  });
}

fislab_status fislab_render_report(const char* bundle_dir, const char* formats,
                                   char** files_json_out) {
  if (fislab_status s = require_arg(bundle_dir, "bundle_dir")) return s;
  return guarded([&] {
    std::vector<fislab::ReportFormat> fmts;
    std::string list = formats != nullptr ? formats : "svg";
    std::string cur;
    for (char c : list + ",") {
      if (c == ',') {
        if (!cur.empty()) fmts.push_back(fislab::parse_report_format(cur));
        cur.clear();
      } else if (c != ' ') {
        cur.push_back(c);
      }
    }
    const std::vector<std::string> files = fislab::render_report(bundle_dir, fmts);
    if (files_json_out != nullptr) {
      nlohmann::ordered_json j = files;
      *files_json_out = dup_string(j.dump(2));
      if (*files_json_out == nullptr) throw std::bad_alloc();
    }
  });
}

}  // extern "C"
