#include "scenarios.hpp"

namespace qcomb::testing {

ToyFit toy_fit() {
  ToyFit t;
  t.model.cavity = {units::ghz(19.2), 0.5, 0.5, 0.0};
  t.model.pump = resonant_pump(t.model.cavity);
  t.model.shape = PhaseMatchShape::Sinc;
  const double bandwidth = units::thz(0.2);
  t.model.grid = SpectralGrid::one_d(8.0 * bandwidth, 4097);
  t.truth = {bandwidth, 2e-12, 8e-25, 1000.0, 50.0};
  t.bounds = {ParameterBounds{units::thz(0.1), units::thz(0.4)}, ParameterBounds{-5e-12, 5e-12},
              ParameterBounds{0.0, 4e-24}, ParameterBounds{0.0, 4000.0},
              ParameterBounds{-500.0, 500.0}};
  t.delays = uniform_delays(-40e-12, 40e-12, 161);
  return t;
}

}  // namespace qcomb::testing
