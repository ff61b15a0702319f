#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <doctest.h>

#include "subspace/bench.hpp"
#include "subspace/config.hpp"
#include "subspace/data_io.hpp"
#include "subspace/errors.hpp"
#include "subspace/synth.hpp"
#include "support.hpp"

namespace fs = std::filesystem;
using namespace subspace;
using Eigen::MatrixXd;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    static int counter = 0;
    std::random_device rd;
    path = fs::temp_directory_path() /
           ("subspace_test_" + std::to_string(rd()) + "_" + std::to_string(counter++));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void spit(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
}

// Informative columns last, so the first-k baseline sees only noise.
Dataset anisotropic(std::uint64_t seed) {
  BlobSpec spec;
  spec.n_per_class = 25;
  spec.c = 2;
  spec.d_informative = 2;
  spec.d_noise = 8;
  spec.separation = 8.0;
  spec.noise_sigma = 3.0;
  spec.informative_last = true;
  spec.seed = seed;
  return make_blobs(spec);
}

Grids small_grids() {
  Grids g;
  g.k = {2, 4};
  g.alpha = {1.0};
  g.beta = {1.0};
  g.delta = {0.1, 1.0};
  return g;
}

}  // namespace

// ---------------------------------------------------------------------------
// CSV ingestion

TEST_CASE("parse_csv without a header") {
  const Dataset d = parse_csv("1,2,A\n3,4,B\n5,6,A\n");
  CHECK(d.X.rows() == 3);
  CHECK(d.X.cols() == 2);
  CHECK(d.Y.cols() == 2);
  CHECK(d.class_names == std::vector<std::string>{"A", "B"});
  CHECK(d.labels == std::vector<int>{0, 1, 0});
  CHECK(d.X(2, 1) == 6.0);
}

TEST_CASE("parse_csv skips a header and honors named label columns") {
  const Dataset d = parse_csv("f1,f2,label\n1,2,x\n3,4,y\n");
  CHECK(d.X.rows() == 2);
  const Dataset e = parse_csv("cls,a,b\n2,1.5,2\n1,3,4\n2,0,0\n", "cls");
  CHECK(e.X.cols() == 2);
  CHECK(e.class_names == std::vector<std::string>{"1", "2"});
  CHECK(e.labels == std::vector<int>{1, 0, 1});
  const Dataset f = parse_csv("7,1,2\n8,3,4\n", "0");
  CHECK(f.X(1, 0) == 3.0);
  CHECK(f.class_names == std::vector<std::string>{"7", "8"});
}

TEST_CASE("parse_csv errors carry line numbers") {
  try {
    parse_csv("1,2,A\n3,B\n");
    CHECK(false);
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find(":2:") != std::string::npos);
  }
  try {
    parse_csv("1,2,A\n3,x,B\n");
    CHECK(false);
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find(":2:") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_csv("1,2,A\n3,4,A\n"), ParseError);
  CHECK_THROWS_AS(parse_csv(""), ParseError);
  CHECK_THROWS_AS(parse_csv("a,b\n1,c\n", "nope"), ParseError);
  CHECK_THROWS_AS(load_csv("/nonexistent/file.csv"), ParseError);
}

TEST_CASE("save_csv and load_csv round-trip") {
  TempDir tmp;
  std::mt19937_64 rng(1);
  Dataset d;
  d.X = testing::gaussian(rng, 12, 5) * 1e3;
  d.labels = testing::random_labels(rng, 12, 3);
  d.class_names = {"alpha", "beta", "gamma"};
  d.Y = one_hot(d.labels, 3);
  save_csv(tmp.path / "d.csv", d);
  const Dataset back = load_csv(tmp.path / "d.csv", "label");
  CHECK((back.X - d.X).cwiseAbs().maxCoeff() <= 1e-12);
  CHECK(back.labels == d.labels);
  CHECK(back.class_names == d.class_names);
}

// ---------------------------------------------------------------------------
// Config

TEST_CASE("parse_config grammar") {
  TempDir tmp;
  spit(tmp.path / "a.csv", "1,2,A\n3,4,B\n");
  const auto cfg = parse_config(R"(# comment
seed = 42
repetitions = 3
methods = pca, sdspcaan
k_grid = 10,20
alpha_grid = 0.1, 1
neighbors = 7
timing = false
output_dir = out

[dataset]
name = first
path = a.csv
label_column = label
)",
                                tmp.path);
  CHECK(cfg.seed == 42u);
  CHECK(cfg.repetitions == 3);
  CHECK(cfg.methods == std::vector<std::string>{"pca", "sdspcaan"});
  CHECK(cfg.grids.k == std::vector<Eigen::Index>{10, 20});
  CHECK(cfg.grids.alpha == std::vector<double>{0.1, 1.0});
  CHECK(cfg.grids.beta.size() == 5);
  CHECK(cfg.fit.m == 7);
  CHECK_FALSE(cfg.timing);
  REQUIRE(cfg.datasets.size() == 1);
  CHECK(cfg.datasets[0].name == "first");
  CHECK(cfg.datasets[0].path == tmp.path / "a.csv");
  CHECK(cfg.datasets[0].label_column == "label");
  CHECK_NOTHROW(validate_config(cfg));

  CHECK_THROWS_AS(parse_config("bogus = 1\n"), ParseError);
  CHECK_THROWS_AS(parse_config("seed = x\n"), ParseError);
  CHECK_THROWS_AS(parse_config("no equals sign\n"), ParseError);
}

TEST_CASE("validate_config rejects bad configs") {
  TempDir tmp;
  spit(tmp.path / "a.csv", "1,2,A\n3,4,B\n");
  ExperimentConfig cfg;
  cfg.methods = {"pca"};
  CHECK_THROWS_AS(validate_config(cfg), ValidationError);
  cfg.datasets.push_back({"a", tmp.path / "a.csv", ""});
  CHECK_NOTHROW(validate_config(cfg));
  cfg.methods.clear();
  CHECK_THROWS_AS(validate_config(cfg), ValidationError);
  cfg.methods = {"pca"};
  cfg.repetitions = 0;
  CHECK_THROWS_AS(validate_config(cfg), ValidationError);
  cfg.repetitions = 1;
  cfg.grids.k.clear();
  CHECK_THROWS_AS(validate_config(cfg), ValidationError);
  cfg.grids = Grids{};
  cfg.datasets[0].path = tmp.path / "missing.csv";
  CHECK_THROWS_AS(validate_config(cfg), ValidationError);
}

TEST_CASE("seed precedence") {
  ExperimentConfig cfg;
  cfg.seed = 5;
  CHECK(resolve_seed(cfg) == 5u);
  cfg.seed.reset();
  ::setenv("SUBSPACE_SEED", "77", 1);
  CHECK(resolve_seed(cfg) == 77u);
  ::unsetenv("SUBSPACE_SEED");
  CHECK(resolve_seed(cfg) == 0u);
}

// ---------------------------------------------------------------------------
// Results and bench

TEST_CASE("results CSV round-trips byte for byte") {
  ResultsTable t;
  t.rows.push_back({"d1", "pca", 0.8123456789012345, 0.0123, 20, 1.5, ""});
  t.rows.push_back({"d1", "sdspcaan", 0.0, 0.0, 0, 0.25, "boom"});
  const std::string csv = results_to_csv(t);
  CHECK(csv.rfind("dataset,method,mean_bca,std_bca,best_k_mode,runtime_seconds\n", 0) == 0);
  const ResultsTable back = results_from_csv(csv);
  REQUIRE(back.rows.size() == 2);
  CHECK(back.rows[0].mean_bca == t.rows[0].mean_bca);
  CHECK(back.rows[1].failed());
  CHECK(results_to_csv(back) == csv);
  CHECK(results_to_text(t).find("ERROR") != std::string::npos);
}

TEST_CASE("run_bench on anisotropic blobs") {
  const std::vector<NamedDataset> data{{"aniso", anisotropic(3)}};
  BenchOptions opt;
  opt.seed = 9;
  opt.timing = false;
  Grids g;
  g.k = {2};
  const BenchOutput out = run_bench(data, {"baseline", "pca"}, g, FitOptions{}, 2, opt);
  REQUIRE(out.table.rows.size() == 2);
  CHECK(out.table.rows[0].method == "baseline");
  CHECK(out.table.rows[0].mean_bca <= out.table.rows[1].mean_bca);
  CHECK(out.runs.size() == 4);
  CHECK(out.table.rows[1].best_k_mode == 2);
  CHECK(out.table.rows[0].std_bca >= 0.0);
  CHECK_THROWS_AS(run_bench(data, {}, g, FitOptions{}, 2, opt), ValidationError);
  CHECK_THROWS_AS(run_bench(data, {"jpcda"}, g, FitOptions{}, 2, opt), ValidationError);
}

TEST_CASE("run_bench is deterministic and independent of job count") {
  const std::vector<NamedDataset> data{{"a", anisotropic(1)}, {"b", anisotropic(2)}};
  BenchOptions opt;
  opt.seed = 4;
  opt.timing = false;
  const std::vector<std::string> methods{"pca", "sdspca", "sdspcaan"};
  const auto first = run_bench(data, methods, small_grids(), FitOptions{}, 2, opt);
  const auto second = run_bench(data, methods, small_grids(), FitOptions{}, 2, opt);
  opt.jobs = 3;
  const auto threaded = run_bench(data, methods, small_grids(), FitOptions{}, 2, opt);
  CHECK(results_to_csv(first.table) == results_to_csv(second.table));
  CHECK(results_to_csv(first.table) == results_to_csv(threaded.table));

  TempDir t1, t2;
  write_bench_outputs(first, t1.path);
  write_bench_outputs(threaded, t2.path);
  CHECK(slurp(t1.path / "results.csv") == slurp(t2.path / "results.csv"));
  CHECK(slurp(t1.path / "runs.csv") == slurp(t2.path / "runs.csv"));
  CHECK(fs::exists(t1.path / "results.txt"));
  CHECK(fs::exists(t1.path / "trace_a_sdspcaan_0.csv"));
  CHECK(slurp(t1.path / "trace_a_sdspcaan_1.csv").rfind("iter,objective,lambda\n", 0) == 0);
  CHECK_FALSE(fs::exists(t1.path / "trace_a_pca_0.csv"));
}

TEST_CASE("a failing method does not disturb other cells") {
  const std::vector<NamedDataset> data{{"a", anisotropic(5)}};
  BenchOptions opt;
  opt.seed = 2;
  opt.timing = false;
  const auto clean = run_bench(data, {"pca", "sdspca"}, small_grids(), FitOptions{}, 2, opt);
  opt.runners["broken"] = [](const PreparedSplit&, const Grids&, const FitOptions&) -> GridResult {
    throw NumericError("injected failure");
  };
  const auto mixed =
      run_bench(data, {"pca", "broken", "sdspca"}, small_grids(), FitOptions{}, 2, opt);
  REQUIRE(mixed.table.rows.size() == 3);
  CHECK(mixed.table.rows[1].failed());
  CHECK(mixed.table.rows[1].error.find("injected failure") != std::string::npos);
  CHECK(results_to_csv(mixed.table).find("a,broken,ERROR,ERROR,ERROR") != std::string::npos);
  for (int i : {0, 2}) {
    const auto& a = mixed.table.rows[static_cast<std::size_t>(i)];
    const auto& b = clean.table.rows[static_cast<std::size_t>(i == 0 ? 0 : 1)];
    CHECK(a.mean_bca == b.mean_bca);
    CHECK(a.std_bca == b.std_bca);
    CHECK(a.best_k_mode == b.best_k_mode);
  }
}

TEST_CASE("emit_sensitivity") {
  const std::vector<NamedDataset> data{{"a", anisotropic(7)}};
  Grids g = small_grids();
  const auto ks = emit_sensitivity(data, Method::Pca, "k", {2, 4}, g, FitOptions{}, 2, 1);
  CHECK(ks.size() == 2);
  CHECK(ks[0].value == 2.0);
  CHECK(ks[1].scale == 1.0);

  g.delta = {0.01, 0.1, 1, 10, 100};
  const auto ds = emit_sensitivity(data, Method::Sdspcaan, "delta", g.delta, g, FitOptions{}, 1, 1);
  CHECK(ds.size() == 5);
  CHECK(ds[0].scale > 0.0);
  CHECK(ds[0].scale != 1.0);
  const std::string csv = sensitivity_to_csv(ds);
  CHECK(csv.rfind("dataset,value,mean_bca,std_bca,scale\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 6);

  CHECK_THROWS_AS(emit_sensitivity(data, Method::Baseline, "k", {2}, g, FitOptions{}, 1, 1),
                  ParameterError);
  CHECK_THROWS_AS(emit_sensitivity(data, Method::Pca, "alpha", {1}, g, FitOptions{}, 1, 1),
                  ParameterError);
  CHECK_THROWS_AS(emit_sensitivity(data, Method::Sdspca, "gamma", {1}, g, FitOptions{}, 1, 1),
                  ParameterError);
}

TEST_CASE("verify_oracles on a small instance") {
  Dataset d = anisotropic(11);
  d.X.rowwise() -= d.X.colwise().mean();
  const VerifyReport r = verify_oracles(d.X, 5);
  CHECK(r.ok);
  CHECK(r.lines.size() == 2);
  CHECK_THROWS_AS(verify_oracles(MatrixXd::Zero(201, 2), 5), ParameterError);
}

// ---------------------------------------------------------------------------
// Command line

TEST_CASE("command line end to end") {
  TempDir tmp;
  save_csv(tmp.path / "blobs.csv", anisotropic(13));
  spit(tmp.path / "bench.cfg", R"(seed = 3
repetitions = 2
methods = baseline, pca, sdspca
k_grid = 2, 4
alpha_grid = 1
beta_grid = 1
timing = false

[dataset]
name = blobs
path = blobs.csv
label_column = label
)");
  const std::string cli = SUBSPACE_CLI_PATH;
  auto run = [&](const std::string& args) {
    return std::system((cli + " " + args + " > " + (tmp.path / "log.txt").string() + " 2>&1").c_str());
  };
  CHECK(run("convert-check " + (tmp.path / "blobs.csv").string()) == 0);
  CHECK(slurp(tmp.path / "log.txt").find("n=50 d=10 c=2") != std::string::npos);

  CHECK(run("bench --config " + (tmp.path / "bench.cfg").string() + " --out " +
            (tmp.path / "r1").string()) == 0);
  CHECK(run("bench --config " + (tmp.path / "bench.cfg").string() + " --jobs 2 --out " +
            (tmp.path / "r2").string()) == 0);
  const std::string first = slurp(tmp.path / "r1" / "results.csv");
  CHECK(first.find("blobs,sdspca,") != std::string::npos);
  CHECK(first == slurp(tmp.path / "r2" / "results.csv"));

  CHECK(run("fit --dataset " + (tmp.path / "blobs.csv").string() +
            " --method sdspcaan --k 2 --verify") == 0);
  CHECK(slurp(tmp.path / "log.txt").find("verify: ok") != std::string::npos);

  CHECK(run("sweep --config " + (tmp.path / "bench.cfg").string() +
            " --method pca --param k --values 2,4 --out " + (tmp.path / "sweep.csv").string()) ==
        0);
  CHECK(slurp(tmp.path / "sweep.csv").rfind("dataset,value,mean_bca", 0) == 0);

  CHECK(run("sweep --config " + (tmp.path / "bench.cfg").string() +
            " --method baseline --param k --values 2") != 0);
  CHECK(run("fit --dataset " + (tmp.path / "blobs.csv").string() + " --method nope --k 2") != 0);
}
