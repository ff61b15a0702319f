#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "subspace/eval.hpp"

namespace subspace {

struct DatasetEntry {
  std::string name;
  std::filesystem::path path;
  std::string label_column;  // empty: last column
};

/// Benchmark configuration.
///
/// Text format, one `key = value` per line, `#` starts a comment. Each
/// `[dataset]` line opens a block that takes `name`, `path` and
/// `label_column`; everything else is global:
///
///   seed         integer (falls back to $SUBSPACE_SEED, then 0)
///   repetitions  integer >= 1 (default 10)
///   output_dir   directory for results (default "results")
///   methods      comma list of baseline,pca,sdspca,pcan,spcan,sdspca_lpp,sdspcaan
///   k_grid, alpha_grid, beta_grid, delta_grid   comma lists
///   neighbors    m for the adaptive graph (default 5)
///   tol, max_iter, jobs
///   timing       true|false; false writes 0 runtimes for byte-stable output
///
/// Relative dataset paths resolve against the config file's directory.
struct ExperimentConfig {
  std::vector<DatasetEntry> datasets;
  std::vector<std::string> methods;
  Grids grids;
  int repetitions = 10;
  std::optional<std::uint64_t> seed;
  std::filesystem::path output_dir = "results";
  FitOptions fit;
  int jobs = 1;
  bool timing = true;
};

ExperimentConfig parse_config(const std::string& text,
                              const std::filesystem::path& base_dir = ".");

ExperimentConfig load_config(const std::filesystem::path& path);

/// Throws ValidationError for missing datasets/paths, no methods, empty grids
/// or repetitions < 1. Method names are checked by the bench runner.
void validate_config(const ExperimentConfig& config);

/// seed from the config, else $SUBSPACE_SEED, else 0.
std::uint64_t resolve_seed(const ExperimentConfig& config);

std::vector<double> parse_double_list(const std::string& text);

}  // namespace subspace
