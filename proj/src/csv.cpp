#include "txdisc/csv.hpp"

#include <cstdio>
#include <stdexcept>

namespace txdisc {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

CsvWriter::CsvWriter(const std::string& path,
                     const std::vector<std::string>& header)
    : out_(path), n_cols_(header.size()) {
  if (!out_) {
    throw std::runtime_error("CsvWriter: cannot open " + path);
  }
  row(header);
}

void CsvWriter::row(const std::vector<std::string>& cells) {
  if (cells.size() != n_cols_) {
    throw std::invalid_argument("CsvWriter: wrong number of cells");
  }
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out_ << ',';
    out_ << cells[i];
  }
  out_ << '\n';
}

}  // namespace txdisc
