#ifndef TAILMIX_CSV_HPP
#define TAILMIX_CSV_HPP

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace tailmix::csv {

/// Reads a two-column numeric CSV. `#`-prefixed lines and a single
/// non-numeric header line are skipped; anything else malformed raises
/// std::runtime_error naming the offending line number.
std::vector<std::pair<double, double>> read_pairs(std::istream& is);

/// Reads a one-column numeric file (used for empirical mixing samples).
std::vector<double> read_column(std::istream& is);

/// Full decimal precision (17 significant digits), locale-independent.
std::string format(double x);

}  // namespace tailmix::csv

#endif  // TAILMIX_CSV_HPP
