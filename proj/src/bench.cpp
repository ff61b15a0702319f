#include "subspace/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

#include "subspace/data_io.hpp"
#include "subspace/errors.hpp"
#include "subspace/linalg.hpp"
#include "subspace/synth.hpp"

namespace subspace {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<std::string> split_commas(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream is(line);
  while (std::getline(is, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

// Sample standard deviation; zero for fewer than two values.
double std_of(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const double mu = mean_of(v);
  double ss = 0.0;
  for (double x : v) ss += (x - mu) * (x - mu);
  return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

Eigen::Index mode_smallest(std::vector<Eigen::Index> ks) {
  if (ks.empty()) return 0;
  std::sort(ks.begin(), ks.end());
  Eigen::Index best = ks.front();
  std::size_t best_count = 0;
  for (std::size_t i = 0; i < ks.size();) {
    std::size_t j = i;
    while (j < ks.size() && ks[j] == ks[i]) ++j;
    if (j - i > best_count) {
      best = ks[i];
      best_count = j - i;
    }
    i = j;
  }
  return best;
}

// Runs fn(i) for i in [0, count) on up to `jobs` threads.
template <typename Fn>
void parallel_for(std::size_t count, int jobs, Fn fn) {
  const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(std::max(jobs, 1)), count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

std::string safe_name(const std::string& s) {
  std::string out = s;
  for (char& ch : out) {
    if (!(std::isalnum(static_cast<unsigned char>(ch)) || ch == '-' || ch == '_' || ch == '.')) {
      ch = '_';
    }
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// Results table

std::string results_to_csv(const ResultsTable& table) {
  std::ostringstream os;
  os << "dataset,method,mean_bca,std_bca,best_k_mode,runtime_seconds\n";
  for (const auto& r : table.rows) {
    os << r.dataset << ',' << r.method << ',';
    if (r.failed()) {
      os << "ERROR,ERROR,ERROR," << fmt(r.runtime_seconds) << '\n';
    } else {
      os << fmt(r.mean_bca) << ',' << fmt(r.std_bca) << ',' << r.best_k_mode << ','
         << fmt(r.runtime_seconds) << '\n';
    }
  }
  return os.str();
}

ResultsTable results_from_csv(const std::string& text) {
  ResultsTable table;
  std::istringstream is(text);
  std::string line;
  int line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (line_no == 1) {
      if (line != "dataset,method,mean_bca,std_bca,best_k_mode,runtime_seconds") {
        throw ParseError("results CSV has an unexpected header");
      }
      continue;
    }
    if (line.empty()) continue;
    const auto cells = split_commas(line);
    if (cells.size() != 6) {
      throw ParseError("results CSV line " + std::to_string(line_no) + ": expected 6 columns");
    }
    ResultsRow r;
    r.dataset = cells[0];
    r.method = cells[1];
    try {
      if (cells[2] == "ERROR") {
        r.error = "ERROR";
      } else {
        r.mean_bca = std::stod(cells[2]);
        r.std_bca = std::stod(cells[3]);
        r.best_k_mode = static_cast<Eigen::Index>(std::stoll(cells[4]));
      }
      r.runtime_seconds = std::stod(cells[5]);
    } catch (const std::logic_error&) {
      throw ParseError("results CSV line " + std::to_string(line_no) + ": bad number");
    }
    table.rows.push_back(std::move(r));
  }
  return table;
}

std::string results_to_text(const ResultsTable& table) {
  std::size_t wd = 7, wm = 6;
  for (const auto& r : table.rows) {
    wd = std::max(wd, r.dataset.size());
    wm = std::max(wm, r.method.size());
  }
  std::ostringstream os;
  os << std::left << std::setw(static_cast<int>(wd)) << "dataset" << "  "
     << std::setw(static_cast<int>(wm)) << "method" << "  " << std::right << std::setw(16)
     << "BCA (%)" << "  " << std::setw(6) << "k" << "  " << std::setw(10) << "time (s)" << '\n';
  for (const auto& r : table.rows) {
    os << std::left << std::setw(static_cast<int>(wd)) << r.dataset << "  "
       << std::setw(static_cast<int>(wm)) << r.method << "  " << std::right;
    if (r.failed()) {
      os << std::setw(16) << "ERROR" << "  " << std::setw(6) << "-";
    } else {
      char cell[40];
      std::snprintf(cell, sizeof cell, "%.2f +- %.2f", 100.0 * r.mean_bca, 100.0 * r.std_bca);
      os << std::setw(16) << cell << "  " << std::setw(6) << r.best_k_mode;
    }
    char t[32];
    std::snprintf(t, sizeof t, "%.3f", r.runtime_seconds);
    os << "  " << std::setw(10) << t << '\n';
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// Benchmark runner

MethodRunner builtin_runner(Method method) {
  return [method](const PreparedSplit& split, const Grids& grids, const FitOptions& fit) {
    return grid_search(split, method, grids, fit);
  };
}

BenchOutput run_bench(const std::vector<NamedDataset>& datasets,
                      const std::vector<std::string>& methods, const Grids& grids,
                      const FitOptions& fit, int repetitions, const BenchOptions& options) {
  if (datasets.empty()) throw ValidationError("no datasets to benchmark");
  if (methods.empty()) throw ValidationError("no methods to benchmark");
  if (repetitions < 1) throw ValidationError("repetitions must be at least 1");

  std::vector<MethodRunner> runners;
  for (const auto& name : methods) {
    if (const auto it = options.runners.find(name); it != options.runners.end()) {
      runners.push_back(it->second);
    } else {
      try {
        runners.push_back(builtin_runner(parse_method(name)));
      } catch (const Error&) {
        throw ValidationError("unknown method '" + name + "'");
      }
    }
  }

  const std::size_t n_data = datasets.size();
  const std::size_t n_methods = methods.size();
  const std::size_t n_reps = static_cast<std::size_t>(repetitions);
  std::vector<RunRecord> runs(n_data * n_methods * n_reps);

  parallel_for(runs.size(), options.jobs, [&](std::size_t item) {
    const std::size_t rep = item % n_reps;
    const std::size_t mi = (item / n_reps) % n_methods;
    const std::size_t di = item / (n_reps * n_methods);
    RunRecord& rec = runs[item];
    rec.dataset = datasets[di].name;
    rec.method = methods[mi];
    rec.repetition = static_cast<int>(rep);
    const auto start = std::chrono::steady_clock::now();
    try {
      const Dataset& data = datasets[di].data;
      SplitSpec spec;
      spec.seed = options.seed;
      spec.repetition_index = static_cast<int>(rep);
      const Splits s = split(static_cast<int>(data.X.rows()), data.labels, spec);
      const PreparedSplit prepared = prepare_split(data, s);
      const GridResult result = runners[mi](prepared, grids, fit);
      rec.test_bca = result.test_bca;
      rec.val_bca = result.selection.val_bca;
      rec.params = result.selection.params;
      rec.trace = result.selection.model.diagnostics.trace;
    } catch (const std::exception& e) {
      rec.error = e.what();
      if (rec.error.empty()) rec.error = "unknown failure";
    }
    if (options.timing) {
      rec.runtime_seconds =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
  });

  BenchOutput out;
  for (std::size_t di = 0; di < n_data; ++di) {
    for (std::size_t mi = 0; mi < n_methods; ++mi) {
      ResultsRow row;
      row.dataset = datasets[di].name;
      row.method = methods[mi];
      std::vector<double> bcas;
      std::vector<Eigen::Index> ks;
      for (std::size_t rep = 0; rep < n_reps; ++rep) {
        const RunRecord& rec = runs[(di * n_methods + mi) * n_reps + rep];
        row.runtime_seconds += rec.runtime_seconds;
        if (!rec.error.empty()) {
          if (row.error.empty()) {
            row.error = "repetition " + std::to_string(rep) + ": " + rec.error;
          }
          continue;
        }
        bcas.push_back(rec.test_bca);
        ks.push_back(rec.params.k);
      }
      if (!row.failed()) {
        row.mean_bca = mean_of(bcas);
        row.std_bca = std_of(bcas);
        row.best_k_mode = mode_smallest(ks);
      }
      out.table.rows.push_back(std::move(row));
    }
  }
  out.runs = std::move(runs);
  return out;
}

std::vector<NamedDataset> load_datasets(const ExperimentConfig& config) {
  std::vector<NamedDataset> out;
  for (const auto& entry : config.datasets) {
    out.push_back({entry.name, load_csv(entry.path, entry.label_column)});
  }
  return out;
}

BenchOutput run_bench(const ExperimentConfig& config, const BenchOptions& options) {
  validate_config(config);
  return run_bench(load_datasets(config), config.methods, config.grids, config.fit,
                   config.repetitions, options);
}

void write_bench_outputs(const BenchOutput& out, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  auto write = [&](const std::filesystem::path& p, const std::string& text) {
    std::ofstream f(p, std::ios::binary);
    if (!f) throw Error("cannot write " + p.string());
    f << text;
  };
  write(dir / "results.csv", results_to_csv(out.table));
  write(dir / "results.txt", results_to_text(out.table));

  std::ostringstream runs;
  runs << "dataset,method,rep,test_bca,val_bca,k,alpha,beta,delta,runtime_seconds,error\n";
  for (const auto& r : out.runs) {
    std::string err = r.error;
    std::replace(err.begin(), err.end(), ',', ';');
    std::replace(err.begin(), err.end(), '\n', ' ');
    runs << r.dataset << ',' << r.method << ',' << r.repetition << ',' << fmt(r.test_bca) << ','
         << fmt(r.val_bca) << ',' << r.params.k << ',' << fmt(r.params.alpha) << ','
         << fmt(r.params.beta) << ',' << fmt(r.params.delta) << ',' << fmt(r.runtime_seconds)
         << ',' << err << '\n';
  }
  write(dir / "runs.csv", runs.str());

  for (const auto& r : out.runs) {
    if (r.trace.empty()) continue;
    std::ostringstream t;
    t << "iter,objective,lambda\n";
    for (const auto& it : r.trace) {
      t << it.iter << ',' << fmt(it.objective) << ',' << fmt(it.lambda) << '\n';
    }
    write(dir / ("trace_" + safe_name(r.dataset) + "_" + safe_name(r.method) + "_" +
                 std::to_string(r.repetition) + ".csv"),
          t.str());
  }
}

// ---------------------------------------------------------------------------
// Sensitivity curves

std::vector<SensitivityRow> emit_sensitivity(const std::vector<NamedDataset>& datasets,
                                             Method method, const std::string& param,
                                             const std::vector<double>& values,
                                             const Grids& grids, const FitOptions& fit,
                                             int repetitions, std::uint64_t seed) {
  const MethodAxes axes = method_axes(method);
  const bool known = param == "k" || (param == "alpha" && axes.alpha) ||
                     (param == "beta" && axes.beta) || (param == "delta" && axes.delta);
  if (method == Method::Baseline || !known) {
    throw ParameterError("method " + method_name(method) + " has no parameter '" + param + "'");
  }
  if (values.empty()) throw ParameterError("sweep needs at least one value");
  if (repetitions < 1) throw ValidationError("repetitions must be at least 1");

  std::vector<SensitivityRow> rows;
  for (const auto& nd : datasets) {
    std::vector<std::vector<double>> bcas(values.size());
    std::vector<double> scale_sum(values.size(), 0.0);
    std::vector<std::string> errors(values.size());
    for (int rep = 0; rep < repetitions; ++rep) {
      SplitSpec spec;
      spec.seed = seed;
      spec.repetition_index = rep;
      const Splits s = split(static_cast<int>(nd.data.X.rows()), nd.data.labels, spec);
      const PreparedSplit prepared = prepare_split(nd.data, s);
      const Selection sel =
          select_hyperparameters(prepared.train, prepared.val, prepared.c, method, grids, fit);
      double scale = 1.0;
      if (param == "alpha") scale = sel.scales.alpha;
      if (param == "beta") scale = sel.scales.beta;
      if (param == "delta") scale = sel.scales.delta;
      for (std::size_t v = 0; v < values.size(); ++v) {
        HyperParams hp = sel.params;
        if (param == "k") hp.k = static_cast<Eigen::Index>(std::llround(values[v]));
        if (param == "alpha") hp.alpha = values[v];
        if (param == "beta") hp.beta = values[v];
        if (param == "delta") hp.delta = values[v];
        scale_sum[v] += scale;
        try {
          const ReductionModel model =
              fit_method(method, prepared.train.X, prepared.train.Y, hp, sel.scales, fit);
          bcas[v].push_back(score_model(model, prepared.train, prepared.test, prepared.c));
        } catch (const std::exception& e) {
          if (errors[v].empty()) errors[v] = e.what();
        }
      }
    }
    for (std::size_t v = 0; v < values.size(); ++v) {
      SensitivityRow row;
      row.dataset = nd.name;
      row.value = values[v];
      row.scale = scale_sum[v] / repetitions;
      row.error = errors[v];
      if (row.error.empty()) {
        row.mean_bca = mean_of(bcas[v]);
        row.std_bca = std_of(bcas[v]);
      }
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

std::string sensitivity_to_csv(const std::vector<SensitivityRow>& rows) {
  std::ostringstream os;
  os << "dataset,value,mean_bca,std_bca,scale\n";
  for (const auto& r : rows) {
    os << r.dataset << ',' << fmt(r.value) << ',';
    if (r.error.empty()) {
      os << fmt(r.mean_bca) << ',' << fmt(r.std_bca);
    } else {
      os << "ERROR,ERROR";
    }
    os << ',' << fmt(r.scale) << '\n';
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// Oracle cross-checks

void verify_graph(const Eigen::MatrixXd& S, VerifyReport& report) {
  const Eigen::MatrixXd Ssym = symmetrize(S);
  const int by_union_find = count_components(Ssym);
  const int by_spectrum = count_zero_eigenvalues(sym_eigvals(laplacian(Ssym)));
  const bool ok = by_union_find == by_spectrum;
  report.ok = report.ok && ok;
  report.lines.push_back(std::string(ok ? "ok   " : "FAIL ") +
                         "components: union-find " + std::to_string(by_union_find) +
                         ", zero Laplacian eigenvalues " + std::to_string(by_spectrum));
}

VerifyReport verify_oracles(const Eigen::MatrixXd& X, int m, double eps) {
  const Eigen::Index n = X.rows();
  if (n > 200) throw ParameterError("oracle checks are limited to n <= 200");
  if (m < 1 || m > n - 2) throw ParameterError("oracle checks need 1 <= m <= n - 2");

  VerifyReport report;
  Eigen::MatrixXd D = pairwise_sq_dists(X);
  double worst = 0.0;
  int checked = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    std::vector<double> row(static_cast<std::size_t>(n));
    std::vector<double> finite;
    Eigen::VectorXd others(n - 1);
    for (Eigen::Index j = 0, o = 0; j < n; ++j) {
      row[static_cast<std::size_t>(j)] = j == i ? std::numeric_limits<double>::infinity() : D(i, j);
      if (j != i) {
        finite.push_back(D(i, j));
        others(o++) = D(i, j);
      }
    }
    std::sort(finite.begin(), finite.end());
    const double gamma = optimal_gamma(finite, m);
    if (!(gamma > 0.0)) continue;  // tied neighbors: the QP has no unique answer
    const Eigen::VectorXd closed = simplex_row(row, m, eps);
    const Eigen::VectorXd oracle = qp_simplex_oracle(others, gamma);
    for (Eigen::Index j = 0, o = 0; j < n; ++j) {
      if (j == i) continue;
      worst = std::max(worst, std::abs(closed(j) - oracle(o++)));
    }
    ++checked;
  }
  const bool simplex_ok = worst <= 1e-6;
  report.ok = simplex_ok;
  char line[160];
  std::snprintf(line, sizeof line, "%s simplex rows vs QP oracle: %d rows, max |diff| %.3g",
                simplex_ok ? "ok  " : "FAIL", checked, worst);
  report.lines.emplace_back(line);

  verify_graph(update_similarity(D, m, eps).S, report);
  return report;
}

}  // namespace subspace
