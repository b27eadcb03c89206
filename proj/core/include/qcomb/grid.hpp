#pragma once

#include <cstddef>
#include <optional>
#include <vector>

namespace qcomb {

/// Uniform sampling of one frequency axis. Coordinates are
/// center + (i - (points-1)/2) * step, so an odd point count centered on zero
/// contains zero exactly and reflects onto itself index by index.
struct GridAxis {
  double center = 0.0;  // rad/s
  double span = 0.0;    // rad/s, distance between first and last sample
  std::size_t points = 0;

  double step() const;
  double coordinate(std::size_t i) const;
  std::vector<double> coordinates() const;
  bool symmetric_about_zero() const;
  void validate(const char* name) const;

  bool operator==(const GridAxis&) const = default;
};

/// 1D grids run over omega_minus at fixed omega_plus; 2D grids add an
/// omega_plus axis (row index) in front of the omega_minus axis (column).
struct SpectralGrid {
  GridAxis minus;
  std::optional<GridAxis> plus;

  static SpectralGrid one_d(double span, std::size_t points);
  static SpectralGrid two_d(double plus_center, double plus_span, std::size_t plus_points,
                            double minus_span, std::size_t minus_points);

  bool is_2d() const { return plus.has_value(); }
  std::size_t size() const;
  /// Area element of a sample: step (1D) or step_plus * step_minus (2D).
  double cell() const;
  void validate() const;

  bool operator==(const SpectralGrid&) const = default;
};

/// Smallest 2^k + 1 not below `minimum`.
std::size_t odd_power_of_two_points(std::size_t minimum);

}  // namespace qcomb
