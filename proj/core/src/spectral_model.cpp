#include "qcomb/spectral_model.hpp"

#include <cmath>
#include <numbers>

#include "qcomb/errors.hpp"

namespace qcomb {
namespace {

constexpr double kTwoLn2 = 2.0 * std::numbers::ln2;

double sinc(double x) {
  if (std::abs(x) < 1e-8) {
    return 1.0 - x * x / 6.0;
  }
  return std::sin(x) / x;
}

// Unit-peak amplitude whose square has intensity FWHM `fwhm`.
double gaussian_amplitude(double offset, double fwhm) {
  return std::exp(-kTwoLn2 * offset * offset / (fwhm * fwhm));
}

}  // namespace

void PumpSpec::validate() const {
  if (!(center_frequency > 0.0) || !std::isfinite(center_frequency)) {
    throw ValidationError("pump: center frequency must be positive");
  }
  if (!(linewidth >= 0.0) || !std::isfinite(linewidth)) {
    throw ValidationError("pump: linewidth must be non-negative");
  }
  if (mode == PumpMode::GaussianBroadband && linewidth == 0.0) {
    throw ValidationError("pump: broadband pump needs a positive linewidth");
  }
}

void PhaseMatchSpec::validate() const {
  if (!(bandwidth > 0.0) || !std::isfinite(bandwidth)) {
    throw ValidationError("phase_match: bandwidth must be positive");
  }
  if (!std::isfinite(walkoff) || !std::isfinite(dispersion)) {
    throw ValidationError("phase_match: walkoff and dispersion must be finite");
  }
  if (!(degeneracy_frequency >= 0.0)) {
    throw ValidationError("phase_match: degeneracy frequency must be non-negative");
  }
}

void FilterSpec::validate() const {
  if (!(bandwidth > 0.0) || !std::isfinite(bandwidth)) {
    throw ValidationError("filter: bandwidth must be positive");
  }
}

Complex eval_pump(const PumpSpec& spec, double omega_plus) {
  if (spec.mode == PumpMode::Monochromatic) {
    throw ValidationError(
        "delta pump not evaluable: monochromatic pumps enter only through the 1D "
        "(omega_minus) reduction");
  }
  return {gaussian_amplitude(omega_plus - spec.center_frequency, spec.linewidth), 0.0};
}

double phase_match_envelope(const PhaseMatchSpec& spec, double omega_minus) {
  switch (spec.shape) {
    case PhaseMatchShape::Sinc:
      return sinc(2.0 * kSincHalfIntensity * omega_minus / spec.bandwidth);
    case PhaseMatchShape::Gaussian:
      return gaussian_amplitude(omega_minus, spec.bandwidth);
  }
  return 0.0;
}

double phase_match_phase(const PhaseMatchSpec& spec, double omega_minus) {
  return 0.5 * spec.walkoff * omega_minus + 0.5 * spec.dispersion * omega_minus * omega_minus;
}

Complex eval_phase_match(const PhaseMatchSpec& spec, double /*omega_plus*/, double omega_minus) {
  // The sinc envelope changes sign in its side lobes, so std::polar is not usable here.
  const double envelope = phase_match_envelope(spec, omega_minus);
  const double phase = phase_match_phase(spec, omega_minus);
  return {envelope * std::cos(phase), envelope * std::sin(phase)};
}

double eval_filter(const FilterSpec& spec, double omega) {
  const double offset = omega - spec.center;
  switch (spec.shape) {
    case FilterShape::Gaussian:
      return gaussian_amplitude(offset, spec.bandwidth);
    case FilterShape::TopHat:
      return std::abs(offset) <= 0.5 * spec.bandwidth ? 1.0 : 0.0;
  }
  return 0.0;
}

}  // namespace qcomb
