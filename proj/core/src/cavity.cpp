#include "qcomb/cavity.hpp"

#include <cmath>

#include "qcomb/errors.hpp"
#include "qcomb/units.hpp"

namespace qcomb {
namespace {

double reflectivity_of(const CavitySpec& spec, Polarization p) {
  return p == Polarization::Signal ? spec.reflectivity_signal : spec.reflectivity_idler;
}

}  // namespace

void CavitySpec::validate() const {
  if (!(fsr > 0.0) || !std::isfinite(fsr)) {
    throw ValidationError("cavity: free spectral range must be positive");
  }
  for (double r : {reflectivity_signal, reflectivity_idler}) {
    if (!(r >= 0.0 && r < 1.0)) {
      throw ValidationError("cavity: reflectivity must lie in [0, 1)");
    }
  }
  if (!std::isfinite(resonance_offset)) {
    throw ValidationError("cavity: resonance offset must be finite");
  }
}

Complex amplitude_transmission(const CavitySpec& spec, Polarization polarization, double omega,
                               double excess_phase) {
  const double r = reflectivity_of(spec, polarization);
  const double phi = units::kPi * (omega - spec.resonance_offset) / spec.fsr;
  const Complex numerator = std::polar(1.0 - r, phi);
  const double round_trip = 2.0 * (phi + excess_phase);
  const Complex denominator(1.0 - r * std::cos(round_trip), -r * std::sin(round_trip));
  // |denominator| >= 1 - r > 0, so the plain formula is safe and avoids the
  // slow generic complex division.
  return numerator * std::conj(denominator) / std::norm(denominator);
}

Complex cavity_factor(const CavitySpec& spec, double omega_plus, double omega_minus,
                      const MediumPhase& medium) {
  const double excess = medium.excess_phase(omega_minus);
  const double omega_s = 0.5 * (omega_plus + omega_minus);
  const double omega_i = 0.5 * (omega_plus - omega_minus);
  return amplitude_transmission(spec, Polarization::Signal, omega_s, excess) *
         amplitude_transmission(spec, Polarization::Idler, omega_i, excess);
}

double linewidth(const CavitySpec& spec, Polarization polarization) {
  const double r = reflectivity_of(spec, polarization);
  if (r <= 0.0) {
    throw ValidationError("no linewidth defined for a cavity with zero reflectivity");
  }
  const double s = (1.0 - r) / (2.0 * std::sqrt(r));
  if (s > 1.0) {
    throw ValidationError("no linewidth defined: Airy contrast too low to reach half maximum");
  }
  return 2.0 * spec.fsr * std::asin(s) / units::kPi;
}

PumpClass classify_pump(const CavitySpec& spec, double pump_frequency, double tolerance) {
  if (!(tolerance >= 0.0) || tolerance >= 0.25 * spec.fsr) {
    throw ValidationError("classify_pump: tolerance must lie in [0, fsr/4)");
  }
  // Position in units of the FSR relative to the resonant reference.
  const double x = (pump_frequency - 2.0 * spec.resonance_offset) / spec.fsr;
  const double nearest_even = 2.0 * std::round(0.5 * x);
  double offset = x - nearest_even;  // in [-1, 1]
  if (offset <= -1.0) {
    offset += 2.0;
  }
  PumpClass out;
  out.nearest_resonant_detuning = offset * spec.fsr;
  const double detuning = std::abs(out.nearest_resonant_detuning);
  if (detuning < tolerance) {
    out.label = PumpClassLabel::Resonant;
  } else if (std::abs(spec.fsr - detuning) < tolerance) {
    out.label = PumpClassLabel::AntiResonant;
  } else {
    out.label = PumpClassLabel::Intermediate;
  }
  return out;
}

double resonant_pump_frequency(const CavitySpec& spec, double nominal, double detuning) {
  const double reference = 2.0 * spec.resonance_offset;
  const double n = std::round((nominal - reference) / (2.0 * spec.fsr));
  return reference + 2.0 * n * spec.fsr + detuning;
}

const char* to_string(PumpClassLabel label) {
  switch (label) {
    case PumpClassLabel::Resonant:
      return "resonant";
    case PumpClassLabel::AntiResonant:
      return "anti-resonant";
    case PumpClassLabel::Intermediate:
      return "intermediate";
  }
  return "unknown";
}

}  // namespace qcomb
