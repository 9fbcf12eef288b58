#pragma once

#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "wavepml/errors.hpp"

namespace wavepml {

/// Minimal CSV emitter; numbers are printed with 17 significant digits so
/// identical runs produce byte-identical files.
class CsvWriter {
 public:
  explicit CsvWriter(const std::string& path) : out_(path) {
    if (!out_) throw Error("cannot open '" + path + "' for writing");
  }

  void header(const std::vector<std::string>& cols) { write_strings(cols); }

  void row(const std::vector<double>& vals) {
    std::string line;
    for (std::size_t i = 0; i < vals.size(); ++i) {
      if (i) line += ',';
      line += format(vals[i]);
    }
    out_ << line << '\n';
  }

  void mixed_row(const std::vector<std::string>& head,
                 const std::vector<double>& vals) {
    std::string line;
    for (std::size_t i = 0; i < head.size(); ++i) {
      if (i) line += ',';
      line += head[i];
    }
    for (double v : vals) {
      line += ',';
      line += format(v);
    }
    out_ << line << '\n';
  }

  static std::string format(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
  }

 private:
  void write_strings(const std::vector<std::string>& cols) {
    for (std::size_t i = 0; i < cols.size(); ++i)
      out_ << (i ? "," : "") << cols[i];
    out_ << '\n';
  }
  std::ofstream out_;
};

}  // namespace wavepml
