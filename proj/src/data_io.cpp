#include "subspace/data_io.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <vector>

#include "subspace/errors.hpp"

namespace subspace {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r");
  std::string out = s.substr(first, last - first + 1);
  if (out.size() >= 2 && out.front() == '"' && out.back() == '"') out = out.substr(1, out.size() - 2);
  return out;
}

std::vector<std::string> split_cells(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream is(line);
  while (std::getline(is, cell, ',')) cells.push_back(trim(cell));
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

std::optional<double> parse_number(const std::string& s) {
  if (s.empty()) return std::nullopt;
  const char* begin = s.data();
  if (*begin == '+') ++begin;
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(begin, s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

std::optional<long> parse_index(const std::string& s) {
  if (s.empty()) return std::nullopt;
  long v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

}  // namespace

Dataset parse_csv(const std::string& text, const std::string& label_column,
                  const std::string& source) {
  std::vector<std::pair<int, std::vector<std::string>>> rows;  // (line number, cells)
  {
    std::istringstream is(text);
    std::string line;
    int line_no = 0;
    while (std::getline(is, line)) {
      ++line_no;
      if (trim(line).empty()) continue;
      rows.emplace_back(line_no, split_cells(line));
    }
  }
  if (rows.empty()) throw ParseError(source + ": no data rows");

  const std::size_t width = rows.front().second.size();
  if (width < 2) throw ParseError(source + ": need at least one feature and one label column");
  for (const auto& [line_no, cells] : rows) {
    if (cells.size() != width) {
      throw ParseError(source + ":" + std::to_string(line_no) + ": expected " +
                       std::to_string(width) + " columns, found " + std::to_string(cells.size()));
    }
  }

  // Resolve the label column; a name forces the first row to be a header.
  std::size_t label_idx = width - 1;
  bool named = false;
  if (!label_column.empty() && label_column != "last") {
    if (const auto idx = parse_index(label_column)) {
      const long w = static_cast<long>(width);
      const long resolved = *idx < 0 ? w + *idx : *idx;
      if (resolved < 0 || resolved >= w) {
        throw ParseError(source + ": label column index " + label_column + " out of range");
      }
      label_idx = static_cast<std::size_t>(resolved);
    } else {
      const auto& header = rows.front().second;
      const auto it = std::find(header.begin(), header.end(), label_column);
      if (it == header.end()) {
        throw ParseError(source + ": no column named '" + label_column + "' in the header");
      }
      label_idx = static_cast<std::size_t>(it - header.begin());
      named = true;
    }
  }

  bool has_header = named;
  if (!has_header) {
    const auto& first = rows.front().second;
    for (std::size_t j = 0; j < width; ++j) {
      if (j != label_idx && !parse_number(first[j])) has_header = true;
    }
  }
  const std::size_t start = has_header ? 1 : 0;
  const std::size_t n = rows.size() - start;
  if (n == 0) throw ParseError(source + ": header but no data rows");

  Dataset out;
  out.X.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(width - 1));
  std::vector<std::string> raw_labels;
  raw_labels.reserve(n);
  for (std::size_t r = start; r < rows.size(); ++r) {
    const auto& [line_no, cells] = rows[r];
    Eigen::Index col = 0;
    for (std::size_t j = 0; j < width; ++j) {
      if (j == label_idx) continue;
      const auto v = parse_number(cells[j]);
      if (!v) {
        throw ParseError(source + ":" + std::to_string(line_no) + ": column " +
                         std::to_string(j + 1) + " is not numeric ('" + cells[j] + "')");
      }
      out.X(static_cast<Eigen::Index>(r - start), col++) = *v;
    }
    if (cells[label_idx].empty()) {
      throw ParseError(source + ":" + std::to_string(line_no) + ": empty label");
    }
    raw_labels.push_back(cells[label_idx]);
  }

  std::map<std::string, int> index;  // sorted lexicographically
  for (const auto& l : raw_labels) index.emplace(l, 0);
  if (index.size() < 2) {
    throw ParseError(source + ": found a single class; need at least two");
  }
  int next = 0;
  for (auto& [name, id] : index) {
    id = next++;
    out.class_names.push_back(name);
  }
  out.labels.reserve(n);
  for (const auto& l : raw_labels) out.labels.push_back(index.at(l));
  out.Y = one_hot(out.labels, static_cast<int>(out.class_names.size()));
  return out;
}

Dataset load_csv(const std::filesystem::path& path, const std::string& label_column) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_csv(buffer.str(), label_column, path.string());
}

void save_csv(const std::filesystem::path& path, const Dataset& data) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write " + path.string());
  for (Eigen::Index j = 0; j < data.X.cols(); ++j) out << 'f' << j << ',';
  out << "label\n";
  char buf[32];
  for (Eigen::Index i = 0; i < data.X.rows(); ++i) {
    for (Eigen::Index j = 0; j < data.X.cols(); ++j) {
      std::snprintf(buf, sizeof buf, "%.17g", data.X(i, j));
      out << buf << ',';
    }
    out << data.class_names[static_cast<std::size_t>(data.labels[static_cast<std::size_t>(i)])]
        << '\n';
  }
}

}  // namespace subspace
