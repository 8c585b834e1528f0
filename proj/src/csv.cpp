#include "bbb/csv.hpp"

#include <cstdio>

namespace bbb {

GridSpec GridSpec::parse(const std::string& text) {
  GridSpec g;
  double mn = 0, mx = 0;
  int steps = 0;
  if (std::sscanf(text.c_str(), "%lf:%lf:%d", &mn, &mx, &steps) != 3)
    throw std::invalid_argument("grid must be min:max:steps");
  if (steps < 1 || mx < mn)
    throw std::invalid_argument("grid must satisfy steps >= 1, max >= min");
  g.min = mn;
  g.max = mx;
  g.steps = steps;
  return g;
}

std::vector<double> GridSpec::values() const {
  std::vector<double> v;
  v.reserve(steps);
  if (steps == 1) {
    v.push_back(min);
    return v;
  }
  for (int i = 0; i < steps; ++i)
    v.push_back(min + (max - min) * i / (steps - 1));
  return v;
}

std::string format_g9(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

void CsvWriter::comment(const std::string& line) { os_ << "# " << line << "\n"; }

void CsvWriter::header(const std::vector<std::string>& names) {
  for (std::size_t i = 0; i < names.size(); ++i)
    os_ << names[i] << (i + 1 < names.size() ? "," : "\n");
}

void CsvWriter::row(const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i)
    os_ << cells[i] << (i + 1 < cells.size() ? "," : "\n");
}

}  // namespace bbb
