#include "subspace/config.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "subspace/errors.hpp"

namespace subspace {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream is(text);
  std::string item;
  while (std::getline(is, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

long long parse_int(const std::string& value, const std::string& where) {
  try {
    std::size_t used = 0;
    const long long v = std::stoll(value, &used);
    if (used == value.size()) return v;
  } catch (const std::exception&) {
  }
  throw ParseError(where + ": expected an integer, got '" + value + "'");
}

bool parse_bool(const std::string& value, const std::string& where) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  throw ParseError(where + ": expected true or false, got '" + value + "'");
}

}  // namespace

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> out;
  for (const auto& item : split_list(text)) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != item.size() || !std::isfinite(v)) {
      throw ParseError("expected a number, got '" + item + "'");
    }
    out.push_back(v);
  }
  return out;
}

ExperimentConfig parse_config(const std::string& text, const std::filesystem::path& base_dir) {
  ExperimentConfig cfg;
  std::istringstream is(text);
  std::string line;
  int line_no = 0;
  DatasetEntry* block = nullptr;
  while (std::getline(is, line)) {
    ++line_no;
    const std::string where = "config line " + std::to_string(line_no);
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line == "[dataset]") {
      cfg.datasets.emplace_back();
      block = &cfg.datasets.back();
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError(where + ": expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));

    if (block && (key == "name" || key == "path" || key == "label_column")) {
      if (key == "name") block->name = value;
      if (key == "path") {
        const std::filesystem::path p(value);
        block->path = p.is_absolute() ? p : base_dir / p;
      }
      if (key == "label_column") block->label_column = value;
      continue;
    }
    if (key == "seed") {
      cfg.seed = static_cast<std::uint64_t>(parse_int(value, where));
    } else if (key == "repetitions") {
      cfg.repetitions = static_cast<int>(parse_int(value, where));
    } else if (key == "output_dir") {
      cfg.output_dir = value;
    } else if (key == "methods") {
      cfg.methods = split_list(value);
    } else if (key == "k_grid") {
      cfg.grids.k.clear();
      for (double v : parse_double_list(value)) cfg.grids.k.push_back(static_cast<Eigen::Index>(v));
    } else if (key == "alpha_grid") {
      cfg.grids.alpha = parse_double_list(value);
    } else if (key == "beta_grid") {
      cfg.grids.beta = parse_double_list(value);
    } else if (key == "delta_grid") {
      cfg.grids.delta = parse_double_list(value);
    } else if (key == "neighbors") {
      cfg.fit.m = static_cast<int>(parse_int(value, where));
    } else if (key == "tol") {
      const auto v = parse_double_list(value);
      if (v.size() != 1) throw ParseError(where + ": tol takes one number");
      cfg.fit.tol = v.front();
    } else if (key == "max_iter") {
      cfg.fit.max_iter = static_cast<int>(parse_int(value, where));
    } else if (key == "jobs") {
      cfg.jobs = static_cast<int>(parse_int(value, where));
    } else if (key == "timing") {
      cfg.timing = parse_bool(value, where);
    } else {
      throw ParseError(where + ": unknown key '" + key + "'");
    }
  }
  for (auto& d : cfg.datasets) {
    if (d.name.empty()) d.name = d.path.stem().string();
  }
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open config " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str(), path.parent_path().empty() ? "." : path.parent_path());
}

void validate_config(const ExperimentConfig& config) {
  if (config.datasets.empty()) throw ValidationError("config lists no datasets");
  for (const auto& d : config.datasets) {
    if (d.path.empty()) throw ValidationError("dataset '" + d.name + "' has no path");
    if (!std::filesystem::exists(d.path)) {
      throw ValidationError("dataset file not found: " + d.path.string());
    }
  }
  if (config.methods.empty()) throw ValidationError("config lists no methods");
  if (config.repetitions < 1) throw ValidationError("repetitions must be at least 1");
  if (config.grids.k.empty() || config.grids.alpha.empty() || config.grids.beta.empty() ||
      config.grids.delta.empty()) {
    throw ValidationError("hyperparameter grids must be nonempty");
  }
  if (config.jobs < 1) throw ValidationError("jobs must be at least 1");
}

std::uint64_t resolve_seed(const ExperimentConfig& config) {
  if (config.seed) return *config.seed;
  if (const char* env = std::getenv("SUBSPACE_SEED")) {
    try {
      return static_cast<std::uint64_t>(std::stoull(env));
    } catch (const std::exception&) {
      throw ValidationError(std::string("SUBSPACE_SEED is not an integer: ") + env);
    }
  }
  return 0;
}

}  // namespace subspace
