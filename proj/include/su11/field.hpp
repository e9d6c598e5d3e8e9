#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace su11 {

enum class GridCoordinates { Hyperboloid, Disk };

/// Sampling points (tau_i, chi_j). For Disk grids the radial axis was
/// specified as |xi| and converted to tau = 2 atanh|xi|; both views are
/// exported either way.
struct GridSpec {
  std::vector<double> tau_values;
  std::vector<double> chi_values;
  GridCoordinates coordinates = GridCoordinates::Hyperboloid;

  static GridSpec hyperboloid(std::vector<double> taus, std::vector<double> chis);
  static GridSpec disk(const std::vector<double>& radii, std::vector<double> chis);

  std::size_t size() const { return tau_values.size() * chi_values.size(); }
};

/// Throws std::invalid_argument when empty, tau < 0, tau not ascending, or chi
/// outside [0, 2 pi).
void validate(const GridSpec& grid);

/// "start:stop:count", endpoints inclusive; count == 1 gives {start}.
std::vector<double> parse_range(const std::string& text);

/// count equally spaced angles 2 pi j / count.
std::vector<double> uniform_angles(int count);

struct WignerField {
  GridSpec grid;
  /// values(i, j) = W(tau_i, chi_j).
  Eigen::MatrixXd values;
  /// Probability in the squeezer's guard shell (see SqueezeResult::tail_mass).
  Eigen::MatrixXd truncation_tail;
  std::optional<std::uint64_t> shot_seed;
  std::optional<std::uint64_t> noise_seed;
};

/// Header "tau,chi,n0,n1,n2,re_xi,im_xi,w,tail", rows tau-major, shortest
/// round-trip decimals.
void write_field_csv(std::ostream& out, const WignerField& field);

/// Reads a file written by write_field_csv back into (tau, chi, w) rows.
struct FieldSample {
  double tau;
  double chi;
  double w;
};
std::vector<FieldSample> read_field_csv(std::istream& in);

}  // namespace su11
