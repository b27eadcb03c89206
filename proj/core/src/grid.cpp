#include "qcomb/grid.hpp"

#include <cmath>
#include <string>

#include "qcomb/errors.hpp"

namespace qcomb {

double GridAxis::step() const {
  return points > 1 ? span / static_cast<double>(points - 1) : 0.0;
}

double GridAxis::coordinate(std::size_t i) const {
  const double offset = static_cast<double>(i) - 0.5 * static_cast<double>(points - 1);
  return center + offset * step();
}

std::vector<double> GridAxis::coordinates() const {
  std::vector<double> out(points);
  for (std::size_t i = 0; i < points; ++i) {
    out[i] = coordinate(i);
  }
  return out;
}

bool GridAxis::symmetric_about_zero() const {
  return center == 0.0 && points % 2 == 1;
}

void GridAxis::validate(const char* name) const {
  if (points < 2) {
    throw ValidationError(std::string("grid: axis '") + name + "' needs at least 2 points");
  }
  if (!(span > 0.0) || !std::isfinite(span) || !std::isfinite(center)) {
    throw ValidationError(std::string("grid: axis '") + name + "' needs a positive finite span");
  }
}

SpectralGrid SpectralGrid::one_d(double span, std::size_t points) {
  return SpectralGrid{GridAxis{0.0, span, points}, std::nullopt};
}

SpectralGrid SpectralGrid::two_d(double plus_center, double plus_span, std::size_t plus_points,
                                 double minus_span, std::size_t minus_points) {
  return SpectralGrid{GridAxis{0.0, minus_span, minus_points},
                      GridAxis{plus_center, plus_span, plus_points}};
}

std::size_t SpectralGrid::size() const {
  return minus.points * (plus ? plus->points : 1);
}

double SpectralGrid::cell() const {
  return minus.step() * (plus ? plus->step() : 1.0);
}

void SpectralGrid::validate() const {
  minus.validate("omega_minus");
  if (plus) {
    plus->validate("omega_plus");
  }
}

std::size_t odd_power_of_two_points(std::size_t minimum) {
  std::size_t n = 2;
  while (n + 1 < minimum) {
    n *= 2;
  }
  return n + 1;
}

}  // namespace qcomb
