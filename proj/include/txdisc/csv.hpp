#pragma once

#include <fstream>
#include <string>
#include <vector>

namespace txdisc {

// Deterministic decimal rendering used for every CSV cell (round-trippable,
// locale-independent).
std::string format_double(double v);

// Minimal comma-separated writer; the header row is mandatory.
class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::vector<std::string>& header);

  void row(const std::vector<std::string>& cells);

  bool good() const { return out_.good(); }

 private:
  std::ofstream out_;
  std::size_t n_cols_;
};

}  // namespace txdisc
