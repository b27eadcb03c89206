#pragma once

#include <complex>

namespace qcomb {

using Complex = std::complex<double>;

enum class PumpMode { Monochromatic, GaussianBroadband };

struct PumpSpec {
  double center_frequency = 0.0;  // rad/s, absolute
  PumpMode mode = PumpMode::Monochromatic;
  double linewidth = 0.0;  // rad/s, intensity FWHM; unused when monochromatic

  void validate() const;
  bool operator==(const PumpSpec&) const = default;
};

enum class PhaseMatchShape { Sinc, Gaussian };

/// Phase-matching function in the difference frequency. The bandwidth is the
/// intensity FWHM of the main lobe; walkoff and dispersion are the linear and
/// quadratic spectral-phase coefficients in omega_minus.
struct PhaseMatchSpec {
  double degeneracy_frequency = 0.0;  // rad/s, on the omega_plus axis
  double bandwidth = 0.0;             // rad/s
  double walkoff = 0.0;               // s
  double dispersion = 0.0;            // s^2
  PhaseMatchShape shape = PhaseMatchShape::Sinc;

  void validate() const;
  bool operator==(const PhaseMatchSpec&) const = default;
};

enum class FilterShape { Gaussian, TopHat };

struct FilterSpec {
  double center = 0.0;     // rad/s, absolute photon frequency
  double bandwidth = 0.0;  // rad/s, intensity FWHM (Gaussian) or full width (TopHat)
  FilterShape shape = FilterShape::TopHat;

  void validate() const;
  bool operator==(const FilterSpec&) const = default;
};

/// Argument scale of the sinc main lobe: sinc^2(x) = 1/2 at x = kSincHalfIntensity.
inline constexpr double kSincHalfIntensity = 1.3915573782515103;

/// Unit-peak Gaussian pump amplitude. Throws for monochromatic pumps, whose
/// spectral profile is a delta and only enters through the 1D reduction.
Complex eval_pump(const PumpSpec& spec, double omega_plus);

/// Phase-matching amplitude. The omega_plus dependence is neglected over the
/// simulated window, so the argument is accepted but unused.
Complex eval_phase_match(const PhaseMatchSpec& spec, double omega_plus, double omega_minus);

/// Real envelope of the phase-matching function (no spectral phase).
double phase_match_envelope(const PhaseMatchSpec& spec, double omega_minus);

/// Spectral phase walkoff*w/2 + dispersion*w^2/2.
double phase_match_phase(const PhaseMatchSpec& spec, double omega_minus);

double eval_filter(const FilterSpec& spec, double omega);

}  // namespace qcomb
