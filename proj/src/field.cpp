#include "su11/field.hpp"

#include <cmath>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "su11/algebra.hpp"
#include "su11/csv.hpp"

namespace su11 {

GridSpec GridSpec::hyperboloid(std::vector<double> taus, std::vector<double> chis) {
  GridSpec g{std::move(taus), std::move(chis), GridCoordinates::Hyperboloid};
  validate(g);
  return g;
}

GridSpec GridSpec::disk(const std::vector<double>& radii, std::vector<double> chis) {
  std::vector<double> taus;
  taus.reserve(radii.size());
  for (double r : radii) {
    if (!(r >= 0.0 && r < 1.0)) throw std::invalid_argument("disk grid: radius must be in [0, 1)");
    taus.push_back(2.0 * std::atanh(r));
  }
  GridSpec g{std::move(taus), std::move(chis), GridCoordinates::Disk};
  validate(g);
  return g;
}

void validate(const GridSpec& grid) {
  if (grid.tau_values.empty() || grid.chi_values.empty()) {
    throw std::invalid_argument("grid: empty axis");
  }
  for (std::size_t i = 0; i < grid.tau_values.size(); ++i) {
    const double t = grid.tau_values[i];
    if (!(t >= 0.0) || !std::isfinite(t)) throw std::invalid_argument("grid: tau must be >= 0");
    if (i > 0 && !(t > grid.tau_values[i - 1])) {
      throw std::invalid_argument("grid: tau values must be strictly ascending");
    }
  }
  for (double c : grid.chi_values) {
    if (!(c >= 0.0 && c < 2.0 * std::numbers::pi)) {
      throw std::invalid_argument("grid: chi must lie in [0, 2 pi)");
    }
  }
}

std::vector<double> parse_range(const std::string& text) {
  std::stringstream ss(text);
  std::string a, b, c;
  if (!std::getline(ss, a, ':') || !std::getline(ss, b, ':') || !std::getline(ss, c) ||
      ss.rdbuf()->in_avail() > 0) {
    throw std::invalid_argument("range '" + text + "' must look like start:stop:count");
  }
  double start = 0.0, stop = 0.0;
  long count = 0;
  try {
    std::size_t pos = 0;
    start = std::stod(a, &pos);
    if (pos != a.size()) throw std::invalid_argument("");
    stop = std::stod(b, &pos);
    if (pos != b.size()) throw std::invalid_argument("");
    count = std::stol(c, &pos);
    if (pos != c.size()) throw std::invalid_argument("");
  } catch (const std::exception&) {
    throw std::invalid_argument("range '" + text + "' has a malformed number");
  }
  if (count < 1) throw std::invalid_argument("range '" + text + "': count must be >= 1");
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(count));
  if (count == 1) {
    out.push_back(start);
    return out;
  }
  for (long i = 0; i < count; ++i) {
    out.push_back(start + (stop - start) * static_cast<double>(i) / static_cast<double>(count - 1));
  }
  return out;
}

std::vector<double> uniform_angles(int count) {
  if (count < 1) throw std::invalid_argument("uniform_angles: count must be >= 1");
  std::vector<double> out(static_cast<std::size_t>(count));
  for (int j = 0; j < count; ++j) out[j] = 2.0 * std::numbers::pi * j / count;
  return out;
}

void write_field_csv(std::ostream& out, const WignerField& field) {
  out << "tau,chi,n0,n1,n2,re_xi,im_xi,w,tail\n";
  const auto& g = field.grid;
  for (std::size_t i = 0; i < g.tau_values.size(); ++i) {
    for (std::size_t j = 0; j < g.chi_values.size(); ++j) {
      const SqueezeParam p(g.tau_values[i], g.chi_values[j]);
      const HyperboloidPoint n = to_hyperboloid(p);
      const DiskPoint x = to_disk(p);
      out << format_double(p.tau()) << ',' << format_double(g.chi_values[j]) << ','
          << format_double(n.n0) << ',' << format_double(n.n1) << ',' << format_double(n.n2)
          << ',' << format_double(x.xi.real()) << ',' << format_double(x.xi.imag()) << ','
          << format_double(field.values(i, j)) << ','
          << format_double(field.truncation_tail(i, j)) << '\n';
    }
  }
}

std::vector<FieldSample> read_field_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line.rfind("tau,chi,", 0) != 0) {
    throw std::runtime_error("field file: missing 'tau,chi,...' header");
  }
  std::vector<FieldSample> rows;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<std::string> cols;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cols.push_back(cell);
    if (cols.size() != 9) {
      throw std::runtime_error("field file: line " + std::to_string(lineno) + " has " +
                               std::to_string(cols.size()) + " columns, expected 9");
    }
    try {
      rows.push_back({std::stod(cols[0]), std::stod(cols[1]), std::stod(cols[7])});
    } catch (const std::exception&) {
      throw std::runtime_error("field file: bad number on line " + std::to_string(lineno));
    }
  }
  return rows;
}

}  // namespace su11
