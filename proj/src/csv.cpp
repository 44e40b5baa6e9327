#include "nrsurf/csv.hpp"

#include <cstdio>

namespace nrsurf {

CsvWriter::CsvWriter(const std::string& path) : out_(path) {}

std::string CsvWriter::fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

void CsvWriter::header(std::initializer_list<std::string> cols) {
  bool first = true;
  for (const auto& c : cols) {
    if (!first) out_ << ',';
    out_ << c;
    first = false;
  }
  out_ << '\n';
}

void CsvWriter::row(std::initializer_list<double> vals) {
  bool first = true;
  for (double v : vals) {
    if (!first) out_ << ',';
    out_ << fmt(v);
    first = false;
  }
  out_ << '\n';
}

void CsvWriter::raw_row(const std::string& line) { out_ << line << '\n'; }

}  // namespace nrsurf
