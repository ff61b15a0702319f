#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "subspace/config.hpp"
#include "subspace/data.hpp"
#include "subspace/eval.hpp"

namespace subspace {

// ---------------------------------------------------------------------------
// Results table

/// One (dataset, method) cell. A failed cell keeps its error message and is
/// serialized with ERROR in the numeric columns.
struct ResultsRow {
  std::string dataset;
  std::string method;
  double mean_bca = 0.0;
  double std_bca = 0.0;
  Eigen::Index best_k_mode = 0;
  double runtime_seconds = 0.0;
  std::string error;

  bool failed() const { return !error.empty(); }
};

struct ResultsTable {
  std::vector<ResultsRow> rows;
};

/// Header: dataset,method,mean_bca,std_bca,best_k_mode,runtime_seconds.
/// Numbers use %.17g so write(read(text)) == text.
std::string results_to_csv(const ResultsTable& table);
ResultsTable results_from_csv(const std::string& text);

/// Aligned, human-readable table with BCAs in percent.
std::string results_to_text(const ResultsTable& table);

// ---------------------------------------------------------------------------
// Benchmark runner

/// Runs grid search plus test scoring for one prepared split.
using MethodRunner =
    std::function<GridResult(const PreparedSplit&, const Grids&, const FitOptions&)>;

struct NamedDataset {
  std::string name;
  Dataset data;
};

/// Outcome of one (dataset, method, repetition) work item.
struct RunRecord {
  std::string dataset;
  std::string method;
  int repetition = 0;
  double test_bca = 0.0;
  double val_bca = 0.0;
  HyperParams params;
  double runtime_seconds = 0.0;
  std::vector<IterationRecord> trace;
  std::string error;
};

struct BenchOptions {
  std::uint64_t seed = 0;
  int jobs = 1;
  bool timing = true;
  /// Runners that replace or extend the built-in methods, keyed by name.
  std::map<std::string, MethodRunner> runners;
};

struct BenchOutput {
  ResultsTable table;
  std::vector<RunRecord> runs;  // ordered by dataset, method, repetition
};

/// Built-in runner for a method.
MethodRunner builtin_runner(Method method);

/// Every (dataset, method, repetition) is split, centered, grid-searched and
/// scored independently; failures stay inside their cell. Deterministic for
/// a given seed regardless of `jobs`.
BenchOutput run_bench(const std::vector<NamedDataset>& datasets,
                      const std::vector<std::string>& methods, const Grids& grids,
                      const FitOptions& fit, int repetitions, const BenchOptions& options);

/// Loads the configured datasets and runs the benchmark.
BenchOutput run_bench(const ExperimentConfig& config, const BenchOptions& options);

/// Writes results.csv, results.txt, runs.csv and one
/// trace_<dataset>_<method>_<rep>.csv per iterative fit into `dir`.
void write_bench_outputs(const BenchOutput& out, const std::filesystem::path& dir);

// ---------------------------------------------------------------------------
// Sensitivity curves

struct SensitivityRow {
  std::string dataset;
  double value = 0.0;
  double mean_bca = 0.0;
  double std_bca = 0.0;
  double scale = 1.0;  // mean trace scale applied to the swept multiplier
  std::string error;
};

/// Per repetition, selects all parameters by grid search, then refits with
/// `param` (k, alpha, beta or delta) set to each of `values` and scores the
/// test fold. Throws ParameterError if the method has no such parameter.
std::vector<SensitivityRow> emit_sensitivity(const std::vector<NamedDataset>& datasets,
                                             Method method, const std::string& param,
                                             const std::vector<double>& values,
                                             const Grids& grids, const FitOptions& fit,
                                             int repetitions, std::uint64_t seed);

std::string sensitivity_to_csv(const std::vector<SensitivityRow>& rows);

std::vector<NamedDataset> load_datasets(const ExperimentConfig& config);

// ---------------------------------------------------------------------------
// Oracle cross-checks

struct VerifyReport {
  std::vector<std::string> lines;
  bool ok = true;
};

/// Checks the closed-form simplex rows of the initial graph against the QP
/// oracle and the Laplacian zero-eigenvalue count against union-find, on
/// the centered data. Requires n <= 200.
VerifyReport verify_oracles(const Eigen::MatrixXd& X, int m, double eps = kDefaultEps);

/// Same checks on a learned graph S.
void verify_graph(const Eigen::MatrixXd& S, VerifyReport& report);

}  // namespace subspace
