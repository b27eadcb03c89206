#pragma once

#include <complex>

namespace qcomb {

using Complex = std::complex<double>;

/// Lossless symmetric Fabry-Perot cavity around the nonlinear medium.
/// Resonances of each photon sit at resonance_offset + k * fsr.
struct CavitySpec {
  double fsr = 0.0;                  // rad/s
  double reflectivity_signal = 0.0;  // [0, 1)
  double reflectivity_idler = 0.0;   // [0, 1)
  double resonance_offset = 0.0;     // rad/s

  void validate() const;
  bool operator==(const CavitySpec&) const = default;
};

enum class Polarization { Signal, Idler };

/// Differential group delay and dispersion of the medium as seen by the
/// photons on each cavity round trip. Both photons pick up the excess
/// single-pass phase walkoff*w/2 - dispersion*w^2/2 (w = omega_minus) in the
/// round-trip term only; zero values reproduce the bare Airy cavity.
struct MediumPhase {
  double walkoff = 0.0;     // s
  double dispersion = 0.0;  // s^2

  double excess_phase(double omega_minus) const {
    return 0.5 * walkoff * omega_minus - 0.5 * dispersion * omega_minus * omega_minus;
  }
};

/// Amplitude transmission t = (1-R) e^{i phi} / (1 - R e^{2i(phi + excess)}),
/// phi = pi (omega - offset) / fsr.
Complex amplitude_transmission(const CavitySpec& spec, Polarization polarization, double omega,
                               double excess_phase = 0.0);

/// T_s((w+ + w-)/2) * T_i((w+ - w-)/2).
Complex cavity_factor(const CavitySpec& spec, double omega_plus, double omega_minus,
                      const MediumPhase& medium = {});

/// Airy intensity FWHM in photon angular frequency. Throws when R = 0 or when
/// the Airy minimum never drops to half maximum (R < 3 - 2*sqrt(2)).
double linewidth(const CavitySpec& spec, Polarization polarization);

enum class PumpClassLabel { Resonant, AntiResonant, Intermediate };

struct PumpClass {
  PumpClassLabel label = PumpClassLabel::Intermediate;
  double nearest_resonant_detuning = 0.0;  // rad/s, signed, in (-fsr, fsr]
};

/// Classifies the pump against even (resonant) and odd (anti-resonant)
/// multiples of the FSR, referenced to 2 * resonance_offset.
PumpClass classify_pump(const CavitySpec& spec, double pump_frequency, double tolerance);

/// Pump frequency that sits `detuning` above the even resonance nearest to
/// `nominal`.
double resonant_pump_frequency(const CavitySpec& spec, double nominal, double detuning = 0.0);

const char* to_string(PumpClassLabel label);

}  // namespace qcomb
