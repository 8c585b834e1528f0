#pragma once

#include <cstdio>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace bbb {

/// Linear grid parsed from "min:max:steps" (steps points, endpoints
/// included; a single step collapses to min).
struct GridSpec {
  double min = 0;
  double max = 0;
  int steps = 1;

  static GridSpec parse(const std::string& text);
  std::vector<double> values() const;
};

/// Formats with 9 significant digits, locale-independent.
std::string format_g9(double v);

/// CSV with '#' metadata lines, a header row, and %.9g numeric cells.
/// No timestamps or other run-varying content: identical configuration
/// must produce identical bytes.
class CsvWriter {
 public:
  explicit CsvWriter(std::ostream& os) : os_(os) {}

  void comment(const std::string& line);
  void header(const std::vector<std::string>& names);
  void row(const std::vector<std::string>& cells);

 private:
  std::ostream& os_;
};

}  // namespace bbb
