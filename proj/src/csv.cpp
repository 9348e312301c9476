#include "tailmix/csv.hpp"

#include <cstdio>
#include <istream>
#include <stdexcept>

namespace tailmix::csv {

namespace {

bool parse_double(const std::string& tok, double* out) {
  const char* begin = tok.c_str();
  char* end = nullptr;
  *out = std::strtod(begin, &end);
  while (end && *end == ' ') ++end;
  return end != begin && end && *end == '\0';
}

std::string strip(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

}  // namespace

std::vector<std::pair<double, double>> read_pairs(std::istream& is) {
  std::vector<std::pair<double, double>> rows;
  std::string line;
  std::size_t lineno = 0;
  bool header_allowed = true;
  while (std::getline(is, line)) {
    ++lineno;
    const std::string body = strip(line);
    if (body.empty() || body[0] == '#') continue;
    const auto comma = body.find(',');
    if (comma == std::string::npos)
      throw std::runtime_error("csv: line " + std::to_string(lineno) + ": expected two columns");
    double a = 0.0, b = 0.0;
    const bool ok = parse_double(strip(body.substr(0, comma)), &a) &&
                    parse_double(strip(body.substr(comma + 1)), &b);
    if (!ok) {
      if (header_allowed) {
        header_allowed = false;  // one non-numeric header line is fine
        continue;
      }
      throw std::runtime_error("csv: line " + std::to_string(lineno) + ": malformed number");
    }
    header_allowed = false;
    rows.emplace_back(a, b);
  }
  return rows;
}

std::vector<double> read_column(std::istream& is) {
  std::vector<double> rows;
  std::string line;
  std::size_t lineno = 0;
  bool header_allowed = true;
  while (std::getline(is, line)) {
    ++lineno;
    std::string body = strip(line);
    if (body.empty() || body[0] == '#') continue;
    const auto comma = body.find(',');
    if (comma != std::string::npos) body = strip(body.substr(0, comma));
    double a = 0.0;
    if (!parse_double(body, &a)) {
      if (header_allowed) {
        header_allowed = false;
        continue;
      }
      throw std::runtime_error("csv: line " + std::to_string(lineno) + ": malformed number");
    }
    header_allowed = false;
    rows.push_back(a);
  }
  return rows;
}

std::string format(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

}  // namespace tailmix::csv
