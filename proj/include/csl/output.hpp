// Deterministic CSV/JSON output: fixed "%.17g" number formatting and a
// metadata comment header (version, config hash, seed) so identical runs
// produce byte-identical files.
#pragma once

#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "csl/config.hpp"

namespace csl {

inline std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

class CsvWriter {
 public:
  CsvWriter(std::ostream& out, const RunConfig& cfg,
            const nlohmann::json& extra_metadata = nlohmann::json::object())
      : out_(out) {
    nlohmann::json meta = {{"version", kVersion},
                           {"config_hash", config_hash(cfg)},
                           {"seed", cfg.seed}};
    meta.update(extra_metadata);
    out_ << "# " << meta.dump() << "\n";
  }

  void header(const std::vector<std::string>& columns) {
    for (std::size_t i = 0; i < columns.size(); ++i)
      out_ << (i ? "," : "") << columns[i];
    out_ << "\n";
  }

  void row(const std::vector<double>& values) {
    for (std::size_t i = 0; i < values.size(); ++i)
      out_ << (i ? "," : "") << format_number(values[i]);
    out_ << "\n";
  }

  void mixed_row(const std::vector<std::string>& values) {
    for (std::size_t i = 0; i < values.size(); ++i)
      out_ << (i ? "," : "") << values[i];
    out_ << "\n";
  }

 private:
  std::ostream& out_;
};

inline std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary);  // binary: no platform newline drift
  if (!out) throw std::runtime_error("cannot open output file " + path);
  return out;
}

}  // namespace csl
