#ifndef STABLEKERN_UTIL_CSV_HPP
#define STABLEKERN_UTIL_CSV_HPP

#include <string>
#include <vector>

namespace stablekern::csv {

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  std::size_t column(const std::string& name) const;  // throws ConfigError if absent
};

// Writes numeric rows with full double precision (%.17g).
void write(const std::string& path, const std::vector<std::string>& header,
           const std::vector<std::vector<double>>& rows);

// Reads a numeric CSV with a header line.  Blank lines are skipped.
Table read(const std::string& path);

}  // namespace stablekern::csv

#endif
