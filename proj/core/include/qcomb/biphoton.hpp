#pragma once

#include <complex>
#include <span>
#include <string>
#include <vector>

#include "qcomb/cavity.hpp"
#include "qcomb/grid.hpp"
#include "qcomb/spectral_model.hpp"

namespace qcomb {

enum class FactorKind { Pump, PhaseMatch, Cavity, Delay, Filter };

/// One multiplicative factor applied to a Jsa, kept for provenance.
struct FactorRecord {
  FactorKind kind;
  double value = 0.0;  // delay in s, filter bandwidth, pump linewidth, ...
  std::string detail;

  bool operator==(const FactorRecord&) const = default;
};

const char* to_string(FactorKind kind);

/// Joint spectral amplitude sampled on a SpectralGrid. Values are immutable;
/// every operation below returns a new Jsa. Storage is row-major with the
/// omega_plus index outermost (a single row for 1D grids).
class Jsa {
 public:
  Jsa(SpectralGrid grid, std::vector<Complex> amplitudes, std::vector<FactorRecord> factors,
      double pump_frequency);

  const SpectralGrid& grid() const { return grid_; }
  std::span<const Complex> amplitudes() const { return amplitudes_; }
  const std::vector<FactorRecord>& factors() const { return factors_; }
  double pump_frequency() const { return pump_frequency_; }

  std::size_t rows() const { return grid_.plus ? grid_.plus->points : 1; }
  std::size_t columns() const { return grid_.minus.points; }
  Complex at(std::size_t row, std::size_t column) const {
    return amplitudes_[row * columns() + column];
  }
  /// omega_plus of a row: the pump frequency for 1D grids.
  double omega_plus(std::size_t row) const;

  /// sum |C|^2 * cell
  double norm_squared() const;

 private:
  SpectralGrid grid_;
  std::vector<Complex> amplitudes_;
  std::vector<FactorRecord> factors_;
  double pump_frequency_;
};

/// Throws when the grid step does not resolve the cavity resonances
/// (step > linewidth / 8 on any axis).
void check_resolution(const CavitySpec& cavity, const SpectralGrid& grid);

/// Medium phase the cavity round trips inherit from the phase-matching spec.
MediumPhase medium_phase_of(const PhaseMatchSpec& pm);

/// Monochromatic pump: C(w-) = C_PM(wp, w-) T_s((wp + w-)/2) T_i((wp - w-)/2).
Jsa assemble_jsa_mono(const PumpSpec& pump, const PhaseMatchSpec& pm, const CavitySpec& cavity,
                      const SpectralGrid& grid);
Jsa assemble_jsa_mono(const PumpSpec& pump, const PhaseMatchSpec& pm, const CavitySpec& cavity,
                      const SpectralGrid& grid, const MediumPhase& medium);

/// Broadband pump on a 2D grid: C(w+, w-) = C_p(w+) C_PM C_cav.
Jsa assemble_jsa_broadband(const PumpSpec& pump, const PhaseMatchSpec& pm,
                           const CavitySpec& cavity, const SpectralGrid& grid);

/// Relative delay between the photons: multiplies by exp(i tau w- / 2).
Jsa apply_delay(const Jsa& jsa, double tau);

/// Multiplies by F(w_s) F(w_i). Throws if less than 1e-12 of the norm survives.
Jsa apply_filter(const Jsa& jsa, const FilterSpec& filter);

/// S = sum C(w-) C*(-w-) / sum |C|^2, i.e. the overlap of the state with its
/// signal/idler-exchanged copy. Requires an omega_minus axis symmetric about 0.
Complex exchange_overlap(const Jsa& jsa);

/// Pointwise |C|^2 in storage order.
std::vector<double> jsi(const Jsa& jsa);

/// JSI summed over omega_plus (per omega_minus sample) and over omega_minus
/// (per omega_plus row), each weighted by the other axis' step.
std::vector<double> marginal_minus(const Jsa& jsa);
std::vector<double> marginal_plus(const Jsa& jsa);

/// Number of strict interior local maxima above threshold_fraction * max.
int count_comb_peaks(std::span<const double> jsi_1d, double threshold_fraction);

enum class SymmetryLabel { Symmetric, AntiSymmetric, Mixed };

struct SymmetryThresholds {
  double symmetric = 0.9;
  double antisymmetric = -0.9;
};

struct SymmetryReport {
  Complex exchange_overlap;
  SymmetryLabel label = SymmetryLabel::Mixed;
  PumpClass pump_class;
};

SymmetryReport symmetry_report(const Jsa& jsa, const CavitySpec& cavity, double class_tolerance,
                               SymmetryThresholds thresholds = {});

const char* to_string(SymmetryLabel label);

}  // namespace qcomb
