#pragma once

#include <filesystem>
#include <string>

#include "subspace/data.hpp"

namespace subspace {

/// Reads a comma-separated numeric table with one categorical label column.
///
/// `label_column` is a header name, a 0-based index (negative counts from
/// the end) or empty for the last column. A header row is recognized when
/// any feature cell of the first row is not numeric. Classes are indexed in
/// lexicographic order of their names. Features are returned uncentered.
/// Throws ParseError (with line numbers) for ragged rows, non-numeric
/// features, fewer than two classes or an empty file.
Dataset load_csv(const std::filesystem::path& path, const std::string& label_column = "");

/// Parses CSV text; `source` names the input in error messages.
Dataset parse_csv(const std::string& text, const std::string& label_column = "",
                  const std::string& source = "<memory>");

/// Writes features (full precision) followed by the class name in a final
/// `label` column, with a header row f0,f1,...,label.
void save_csv(const std::filesystem::path& path, const Dataset& data);

}  // namespace subspace
