#pragma once

#include <fstream>
#include <initializer_list>
#include <string>
#include <vector>

namespace nrsurf {

// Small deterministic CSV writer: fixed %.9g formatting so identical runs
// produce byte-identical files.
class CsvWriter {
 public:
  explicit CsvWriter(const std::string& path);

  void header(std::initializer_list<std::string> cols);
  void row(std::initializer_list<double> vals);
  void raw_row(const std::string& line);
  bool ok() const { return static_cast<bool>(out_); }

  static std::string fmt(double v);

 private:
  std::ofstream out_;
};

}  // namespace nrsurf
