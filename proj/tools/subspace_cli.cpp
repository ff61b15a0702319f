#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "subspace/bench.hpp"
#include "subspace/config.hpp"
#include "subspace/data_io.hpp"
#include "subspace/errors.hpp"
#include "subspace/eval.hpp"
#include "subspace/pca.hpp"

namespace fs = std::filesystem;
using namespace subspace;

namespace {

struct BenchArgs {
  std::string config;
  std::optional<std::uint64_t> seed;
  int jobs = 0;
  std::string out;
  bool no_timing = false;
};

struct FitArgs {
  std::string dataset;
  std::string method;
  std::string label_column;
  long k = 10;
  double alpha = 1.0, beta = 1.0, delta = 1.0;
  int m = kDefaultNeighbors;
  double tol = 1e-3;
  int max_iter = 500;
  bool verify = false;
};

struct SweepArgs {
  std::string config;
  std::string method;
  std::string param;
  std::string values;
  std::optional<std::uint64_t> seed;
  std::string out;
};

int run_bench_cmd(const BenchArgs& args) {
  ExperimentConfig config = load_config(args.config);
  if (args.seed) config.seed = args.seed;
  if (args.jobs > 0) config.jobs = args.jobs;
  if (!args.out.empty()) config.output_dir = args.out;
  if (args.no_timing) config.timing = false;
  validate_config(config);

  BenchOptions options;
  options.seed = resolve_seed(config);
  options.jobs = config.jobs;
  options.timing = config.timing;
  const BenchOutput out = run_bench(config, options);
  write_bench_outputs(out, config.output_dir);
  std::cout << results_to_text(out.table);
  for (const auto& row : out.table.rows) {
    if (row.failed()) std::cerr << row.dataset << "/" << row.method << ": " << row.error << "\n";
  }
  std::cout << "wrote " << (config.output_dir / "results.csv").string() << "\n";
  return 0;
}

int run_fit_cmd(const FitArgs& args) {
  const Method method = parse_method(args.method);
  Dataset data = load_csv(args.dataset, args.label_column);
  center_columns(data.X);

  FitOptions options;
  options.m = args.m;
  options.tol = args.tol;
  options.max_iter = args.max_iter;
  const TraceScales scales = trace_scales(data.X, data.Y, options.m, options.eps);
  HyperParams hp;
  hp.k = args.k;
  hp.alpha = args.alpha;
  hp.beta = args.beta;
  hp.delta = args.delta;

  std::printf("data: n=%ld d=%ld c=%ld\n", static_cast<long>(data.X.rows()),
              static_cast<long>(data.X.cols()), static_cast<long>(data.Y.cols()));
  std::printf("scales: alpha %.6g  beta %.6g  delta %.6g\n", scales.alpha, scales.beta,
              scales.delta);

  const ReductionModel model = fit_method(method, data.X, data.Y, hp, scales, options);
  const auto& diag = model.diagnostics;
  std::printf("method %s  k=%ld  iterations %d  converged %s\n", method_name(method).c_str(),
              static_cast<long>(model.k), diag.iterations, diag.converged ? "yes" : "no");
  if (diag.final_lambda) std::printf("final lambda %.6g\n", *diag.final_lambda);
  if (!diag.trace.empty()) {
    std::printf("%6s  %22s  %14s\n", "iter", "objective", "lambda");
    for (const auto& rec : diag.trace) {
      std::printf("%6d  %22.12g  %14.6g\n", rec.iter, rec.objective, rec.lambda);
    }
  }
  const Fold all{data.X, data.Y, data.labels};
  std::printf("training 1-NN BCA (leave-in, optimistic) %.4f\n",
              score_model(model, all, all, static_cast<int>(data.Y.cols())));

  if (args.verify) {
    if (data.X.rows() > 200) {
      std::printf("verify: skipped, oracle checks need n <= 200 (n=%ld)\n",
                  static_cast<long>(data.X.rows()));
      return 0;
    }
    const VerifyReport report = verify_oracles(data.X, options.m, options.eps);
    for (const auto& line : report.lines) std::printf("verify: %s\n", line.c_str());
    return report.ok ? 0 : 3;
  }
  return 0;
}

int run_sweep_cmd(const SweepArgs& args) {
  ExperimentConfig config = load_config(args.config);
  if (args.seed) config.seed = args.seed;
  validate_config(config);
  const Method method = parse_method(args.method);
  const std::vector<double> values = parse_double_list(args.values);
  const auto rows = emit_sensitivity(load_datasets(config), method, args.param, values,
                                     config.grids, config.fit, config.repetitions,
                                     resolve_seed(config));
  const std::string csv = sensitivity_to_csv(rows);
  if (args.out.empty()) {
    std::cout << csv;
  } else {
    fs::path p(args.out);
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
    std::ofstream f(p, std::ios::binary);
    if (!f) throw Error("cannot write " + p.string());
    f << csv;
    std::cout << "wrote " << p.string() << "\n";
  }
  return 0;
}

int run_convert_check(const std::string& path, const std::string& label_column) {
  const Dataset data = load_csv(path, label_column);
  std::printf("ok: n=%ld d=%ld c=%zu\n", static_cast<long>(data.X.rows()),
              static_cast<long>(data.X.cols()), data.class_names.size());
  std::vector<int> counts(data.class_names.size(), 0);
  for (int l : data.labels) ++counts[static_cast<std::size_t>(l)];
  for (std::size_t j = 0; j < counts.size(); ++j) {
    std::printf("  class %-20s %d\n", data.class_names[j].c_str(), counts[j]);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Supervised sparse PCA with adaptive neighbors: fitting and benchmarking"};
  app.require_subcommand(1);

  BenchArgs bench;
  auto* bench_cmd = app.add_subcommand("bench", "Run the repeated-split benchmark from a config file");
  bench_cmd->add_option("--config", bench.config, "Config file")->required()->check(CLI::ExistingFile);
  bench_cmd->add_option("--seed", bench.seed, "Seed (overrides config and SUBSPACE_SEED)");
  bench_cmd->add_option("--jobs", bench.jobs, "Worker threads")->check(CLI::PositiveNumber);
  bench_cmd->add_option("--out", bench.out, "Output directory (overrides config)");
  bench_cmd->add_flag("--no-timing", bench.no_timing, "Write zero runtimes for byte-stable output");

  FitArgs fit;
  auto* fit_cmd = app.add_subcommand("fit", "Fit one method on one CSV and print diagnostics");
  fit_cmd->add_option("--dataset", fit.dataset, "CSV file")->required()->check(CLI::ExistingFile);
  fit_cmd->add_option("--method", fit.method, "baseline|pca|sdspca|pcan|spcan|sdspca_lpp|sdspcaan")
      ->required();
  fit_cmd->add_option("--k", fit.k, "Target dimension")->required();
  fit_cmd->add_option("--alpha", fit.alpha, "Label weight, multiple of Tr(XX^T)/Tr(YY^T)");
  fit_cmd->add_option("--beta", fit.beta, "Sparsity weight, multiple of Tr(XX^T)/n");
  fit_cmd->add_option("--delta", fit.delta, "Graph weight, multiple of Tr(XX^T)/Tr(XX^T L XX^T)");
  fit_cmd->add_option("--m", fit.m, "Neighbors per sample in the adaptive graph");
  fit_cmd->add_option("--tol", fit.tol, "Convergence tolerance");
  fit_cmd->add_option("--max-iter", fit.max_iter, "Iteration cap");
  fit_cmd->add_option("--label-column", fit.label_column, "Label column name or index");
  fit_cmd->add_flag("--verify", fit.verify, "Cross-check closed forms against oracles (n <= 200)");

  SweepArgs sweep;
  auto* sweep_cmd = app.add_subcommand("sweep", "Sensitivity curve for one parameter");
  sweep_cmd->add_option("--config", sweep.config, "Config file")->required()->check(CLI::ExistingFile);
  sweep_cmd->add_option("--method", sweep.method, "Method name")->required();
  sweep_cmd->add_option("--param", sweep.param, "k|alpha|beta|delta")->required();
  sweep_cmd->add_option("--values", sweep.values, "Comma-separated values")->required();
  sweep_cmd->add_option("--seed", sweep.seed, "Seed");
  sweep_cmd->add_option("--out", sweep.out, "Output CSV (default: stdout)");

  std::string check_path, check_label;
  auto* check_cmd = app.add_subcommand("convert-check", "Validate a dataset CSV");
  check_cmd->add_option("csv", check_path, "CSV file")->required()->check(CLI::ExistingFile);
  check_cmd->add_option("--label-column", check_label, "Label column name or index");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*bench_cmd) return run_bench_cmd(bench);
    if (*fit_cmd) return run_fit_cmd(fit);
    if (*sweep_cmd) return run_sweep_cmd(sweep);
    if (*check_cmd) return run_convert_check(check_path, check_label);
  } catch (const subspace::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
