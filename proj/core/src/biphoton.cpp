#include "qcomb/biphoton.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "qcomb/errors.hpp"

namespace qcomb {
namespace {

// Finest spectral feature the grid has to resolve, or 0 when the cavity is
// absent. Below R = 3 - 2 sqrt(2) the Airy ripple has no half-maximum width
// and the FSR itself is the relevant scale.
double resolution_scale(const CavitySpec& cavity) {
  double scale = 0.0;
  for (Polarization p : {Polarization::Signal, Polarization::Idler}) {
    const double r = p == Polarization::Signal ? cavity.reflectivity_signal
                                               : cavity.reflectivity_idler;
    if (r <= 0.0) {
      continue;
    }
    double width = cavity.fsr;
    if ((1.0 - r) / (2.0 * std::sqrt(r)) <= 1.0) {
      width = linewidth(cavity, p);
    }
    scale = scale == 0.0 ? width : std::min(scale, width);
  }
  return scale;
}

void require_nonzero_norm(const Jsa& jsa) {
  const double n = jsa.norm_squared();
  if (!(n > 0.0) || !std::isfinite(n)) {
    throw ValidationError("degenerate state: joint spectral amplitude has zero norm");
  }
}

std::vector<FactorRecord> with(std::vector<FactorRecord> factors, FactorRecord record) {
  factors.push_back(std::move(record));
  return factors;
}

std::string describe_cavity(const CavitySpec& cavity, const MediumPhase& medium) {
  std::ostringstream os;
  os.precision(17);
  os << "fsr=" << cavity.fsr << " R_s=" << cavity.reflectivity_signal
     << " R_i=" << cavity.reflectivity_idler << " offset=" << cavity.resonance_offset
     << " walkoff=" << medium.walkoff << " dispersion=" << medium.dispersion;
  return os.str();
}

}  // namespace

const char* to_string(FactorKind kind) {
  switch (kind) {
    case FactorKind::Pump:
      return "pump";
    case FactorKind::PhaseMatch:
      return "phase_match";
    case FactorKind::Cavity:
      return "cavity";
    case FactorKind::Delay:
      return "delay";
    case FactorKind::Filter:
      return "filter";
  }
  return "unknown";
}

Jsa::Jsa(SpectralGrid grid, std::vector<Complex> amplitudes, std::vector<FactorRecord> factors,
         double pump_frequency)
    : grid_(std::move(grid)),
      amplitudes_(std::move(amplitudes)),
      factors_(std::move(factors)),
      pump_frequency_(pump_frequency) {
  if (amplitudes_.size() != grid_.size()) {
    throw ValidationError("jsa: amplitude count does not match grid size");
  }
}

double Jsa::omega_plus(std::size_t row) const {
  return grid_.plus ? grid_.plus->coordinate(row) : pump_frequency_;
}

double Jsa::norm_squared() const {
  double sum = 0.0;
  for (const Complex& c : amplitudes_) {
    sum += std::norm(c);
  }
  return sum * grid_.cell();
}

void check_resolution(const CavitySpec& cavity, const SpectralGrid& grid) {
  const double scale = resolution_scale(cavity);
  if (scale == 0.0) {
    return;
  }
  const auto check = [&](const GridAxis& axis, const char* name) {
    if (axis.step() > scale / 8.0) {
      std::ostringstream os;
      os << "grid too coarse: " << name << " step " << axis.step()
         << " rad/s exceeds cavity linewidth/8 = " << scale / 8.0 << " rad/s";
      throw ValidationError(os.str());
    }
  };
  check(grid.minus, "omega_minus");
  if (grid.plus) {
    check(*grid.plus, "omega_plus");
  }
}

MediumPhase medium_phase_of(const PhaseMatchSpec& pm) {
  return MediumPhase{pm.walkoff, pm.dispersion};
}

Jsa assemble_jsa_mono(const PumpSpec& pump, const PhaseMatchSpec& pm, const CavitySpec& cavity,
                      const SpectralGrid& grid) {
  return assemble_jsa_mono(pump, pm, cavity, grid, medium_phase_of(pm));
}

Jsa assemble_jsa_mono(const PumpSpec& pump, const PhaseMatchSpec& pm, const CavitySpec& cavity,
                      const SpectralGrid& grid, const MediumPhase& medium) {
  pump.validate();
  pm.validate();
  cavity.validate();
  grid.validate();
  if (pump.mode != PumpMode::Monochromatic) {
    throw ValidationError("assemble_jsa_mono requires a monochromatic pump");
  }
  if (grid.is_2d()) {
    throw ValidationError("assemble_jsa_mono requires a 1D omega_minus grid");
  }
  check_resolution(cavity, grid);

  const double wp = pump.center_frequency;
  std::vector<Complex> amplitudes(grid.minus.points);
  for (std::size_t k = 0; k < amplitudes.size(); ++k) {
    const double wm = grid.minus.coordinate(k);
    amplitudes[k] = eval_phase_match(pm, wp, wm) * cavity_factor(cavity, wp, wm, medium);
  }
  std::vector<FactorRecord> factors{
      {FactorKind::Pump, 0.0, "monochromatic"},
      {FactorKind::PhaseMatch, pm.bandwidth,
       pm.shape == PhaseMatchShape::Sinc ? "sinc" : "gaussian"},
      {FactorKind::Cavity, cavity.fsr, describe_cavity(cavity, medium)},
  };
  Jsa out(grid, std::move(amplitudes), std::move(factors), wp);
  require_nonzero_norm(out);
  return out;
}

Jsa assemble_jsa_broadband(const PumpSpec& pump, const PhaseMatchSpec& pm,
                           const CavitySpec& cavity, const SpectralGrid& grid) {
  pump.validate();
  pm.validate();
  cavity.validate();
  grid.validate();
  if (pump.mode != PumpMode::GaussianBroadband) {
    throw ValidationError("assemble_jsa_broadband requires a Gaussian broadband pump");
  }
  if (!grid.is_2d()) {
    throw ValidationError("assemble_jsa_broadband requires a 2D (omega_plus, omega_minus) grid");
  }
  check_resolution(cavity, grid);

  const MediumPhase medium = medium_phase_of(pm);
  const std::size_t rows = grid.plus->points;
  const std::size_t cols = grid.minus.points;
  std::vector<Complex> pm_row(cols);
  for (std::size_t k = 0; k < cols; ++k) {
    pm_row[k] = eval_phase_match(pm, 0.0, grid.minus.coordinate(k));
  }
  std::vector<Complex> amplitudes(rows * cols);
  for (std::size_t r = 0; r < rows; ++r) {
    const double wp = grid.plus->coordinate(r);
    const Complex cp = eval_pump(pump, wp);
    for (std::size_t k = 0; k < cols; ++k) {
      amplitudes[r * cols + k] =
          cp * pm_row[k] * cavity_factor(cavity, wp, grid.minus.coordinate(k), medium);
    }
  }
  std::vector<FactorRecord> factors{
      {FactorKind::Pump, pump.linewidth, "gaussian"},
      {FactorKind::PhaseMatch, pm.bandwidth,
       pm.shape == PhaseMatchShape::Sinc ? "sinc" : "gaussian"},
      {FactorKind::Cavity, cavity.fsr, describe_cavity(cavity, medium)},
  };
  Jsa out(grid, std::move(amplitudes), std::move(factors), pump.center_frequency);
  require_nonzero_norm(out);
  return out;
}

Jsa apply_delay(const Jsa& jsa, double tau) {
  const std::size_t cols = jsa.columns();
  std::vector<Complex> phase(cols);
  for (std::size_t k = 0; k < cols; ++k) {
    phase[k] = std::polar(1.0, 0.5 * tau * jsa.grid().minus.coordinate(k));
  }
  std::vector<Complex> out(jsa.amplitudes().begin(), jsa.amplitudes().end());
  for (std::size_t r = 0; r < jsa.rows(); ++r) {
    for (std::size_t k = 0; k < cols; ++k) {
      out[r * cols + k] *= phase[k];
    }
  }
  return Jsa(jsa.grid(), std::move(out), with(jsa.factors(), {FactorKind::Delay, tau, "tau_s"}),
             jsa.pump_frequency());
}

Jsa apply_filter(const Jsa& jsa, const FilterSpec& filter) {
  filter.validate();
  const std::size_t cols = jsa.columns();
  std::vector<Complex> out(jsa.amplitudes().begin(), jsa.amplitudes().end());
  for (std::size_t r = 0; r < jsa.rows(); ++r) {
    const double wp = jsa.omega_plus(r);
    for (std::size_t k = 0; k < cols; ++k) {
      const double wm = jsa.grid().minus.coordinate(k);
      out[r * cols + k] *= eval_filter(filter, 0.5 * (wp + wm)) * eval_filter(filter, 0.5 * (wp - wm));
    }
  }
  Jsa filtered(jsa.grid(), std::move(out),
               with(jsa.factors(), {FactorKind::Filter, filter.bandwidth,
                                    filter.shape == FilterShape::TopHat ? "tophat" : "gaussian"}),
               jsa.pump_frequency());
  if (filtered.norm_squared() < 1e-12 * jsa.norm_squared()) {
    throw ValidationError("over-filtered: filter removes all but <1e-12 of the state norm");
  }
  return filtered;
}

Complex exchange_overlap(const Jsa& jsa) {
  if (!jsa.grid().minus.symmetric_about_zero()) {
    throw ValidationError(
        "exchange_overlap needs an omega_minus grid symmetric about zero (center 0, odd points)");
  }
  const std::size_t cols = jsa.columns();
  Complex sum{0.0, 0.0};
  double norm = 0.0;
  for (std::size_t r = 0; r < jsa.rows(); ++r) {
    for (std::size_t k = 0; k < cols; ++k) {
      const Complex c = jsa.at(r, k);
      sum += c * std::conj(jsa.at(r, cols - 1 - k));
      norm += std::norm(c);
    }
  }
  if (!(norm > 0.0)) {
    throw ValidationError("degenerate state: joint spectral amplitude has zero norm");
  }
  return sum / norm;
}

std::vector<double> jsi(const Jsa& jsa) {
  std::vector<double> out(jsa.amplitudes().size());
  std::transform(jsa.amplitudes().begin(), jsa.amplitudes().end(), out.begin(),
                 [](const Complex& c) { return std::norm(c); });
  return out;
}

std::vector<double> marginal_minus(const Jsa& jsa) {
  const double weight = jsa.grid().plus ? jsa.grid().plus->step() : 1.0;
  std::vector<double> out(jsa.columns(), 0.0);
  for (std::size_t r = 0; r < jsa.rows(); ++r) {
    for (std::size_t k = 0; k < jsa.columns(); ++k) {
      out[k] += std::norm(jsa.at(r, k)) * weight;
    }
  }
  return out;
}

std::vector<double> marginal_plus(const Jsa& jsa) {
  const double weight = jsa.grid().minus.step();
  std::vector<double> out(jsa.rows(), 0.0);
  for (std::size_t r = 0; r < jsa.rows(); ++r) {
    for (std::size_t k = 0; k < jsa.columns(); ++k) {
      out[r] += std::norm(jsa.at(r, k)) * weight;
    }
  }
  return out;
}

int count_comb_peaks(std::span<const double> values, double threshold_fraction) {
  if (!(threshold_fraction > 0.0 && threshold_fraction < 1.0)) {
    throw ValidationError("count_comb_peaks: threshold fraction must lie in (0, 1)");
  }
  if (values.size() < 3) {
    throw ValidationError("count_comb_peaks: need at least 3 samples");
  }
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  if (!(*hi > *lo)) {
    throw ValidationError("count_comb_peaks: input is flat");
  }
  const double threshold = threshold_fraction * *hi;
  int count = 0;
  for (std::size_t i = 1; i + 1 < values.size(); ++i) {
    if (values[i] > threshold && values[i] > values[i - 1] && values[i] > values[i + 1]) {
      ++count;
    }
  }
  return count;
}

SymmetryReport symmetry_report(const Jsa& jsa, const CavitySpec& cavity, double class_tolerance,
                               SymmetryThresholds thresholds) {
  SymmetryReport report;
  report.exchange_overlap = exchange_overlap(jsa);
  report.pump_class = classify_pump(cavity, jsa.pump_frequency(), class_tolerance);
  const double re = report.exchange_overlap.real();
  if (re >= thresholds.symmetric) {
    report.label = SymmetryLabel::Symmetric;
  } else if (re <= thresholds.antisymmetric) {
    report.label = SymmetryLabel::AntiSymmetric;
  } else {
    report.label = SymmetryLabel::Mixed;
  }
  return report;
}

const char* to_string(SymmetryLabel label) {
  switch (label) {
    case SymmetryLabel::Symmetric:
      return "symmetric";
    case SymmetryLabel::AntiSymmetric:
      return "anti-symmetric";
    case SymmetryLabel::Mixed:
      return "mixed";
  }
  return "unknown";
}

}  // namespace qcomb
