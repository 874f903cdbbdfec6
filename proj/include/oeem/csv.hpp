#pragma once

#include <string>
#include <vector>

namespace oeem::csv {

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  /// Index of a named column; throws IoError if absent.
  int column(const std::string& name) const;
};

Table read(const std::string& path);

double to_double(const std::string& field);

/// Shortest round-trippable decimal form of a double.
std::string format_double(double v);

/// Writes lines to a temporary file in the target directory and renames it
/// into place, so readers never observe a partially written file.
void write_atomic(const std::string& path, const std::string& contents);

std::string join_row(const std::vector<std::string>& fields);

}  // namespace oeem::csv
