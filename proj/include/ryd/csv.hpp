// Deterministic CSV emission: fixed column order, 12-significant-digit
// scientific floats, LF line endings.
#pragma once

#include <fstream>
#include <string>
#include <vector>

namespace ryd {

class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::vector<std::string>& columns);

  void row(const std::vector<double>& values);
  /// Mixed row: strings written verbatim (used for scheme labels).
  void row_mixed(const std::vector<std::string>& values);

  static std::string format(double v);  // 12 significant digits, scientific

 private:
  std::ofstream out_;
  std::size_t n_cols_;
};

}  // namespace ryd
