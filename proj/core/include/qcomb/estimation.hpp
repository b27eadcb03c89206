#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qcomb/biphoton.hpp"
#include "qcomb/errors.hpp"
#include "qcomb/hom.hpp"
#include "qcomb/nelder_mead.hpp"

namespace qcomb {

/// Free parameters of the HOM model, in vector order.
enum class FitParameter : std::size_t { Bandwidth, Walkoff, Dispersion, Amplitude, Offset };

inline constexpr std::size_t kFitParameterCount = 5;
using ParameterVector = std::array<double, kFitParameterCount>;

const char* to_string(FitParameter p);

struct ParameterBounds {
  double lower = 0.0;
  double upper = 0.0;
};
using BoundsVector = std::array<ParameterBounds, kFitParameterCount>;

/// Everything the model needs besides the free parameters.
struct FitModel {
  PumpSpec pump;  // monochromatic
  PhaseMatchShape shape = PhaseMatchShape::Sinc;
  CavitySpec cavity;
  SpectralGrid grid;  // 1D, symmetric about zero
  double delay = 0.0;  // relative photon delay tau applied before the splitter
  std::optional<FilterSpec> filter;
};

/// Builds the state for parameters theta (amplitude/offset are ignored).
Jsa model_state(const FitModel& model, const ParameterVector& theta);

/// counts(tau) = amplitude * P_c(tau; bandwidth, walkoff, dispersion) + offset
std::vector<double> model_counts(const FitModel& model, const ParameterVector& theta,
                                 const CoincidenceEvaluator& evaluator);
std::vector<double> model_counts(const FitModel& model, const ParameterVector& theta,
                                 std::span<const double> delays);

struct FitProblem {
  std::vector<double> delays;  // s
  std::vector<double> counts;
  FitModel model;
  ParameterVector initial{};
  BoundsVector bounds{};
  bool poisson_weights = false;

  void validate() const;
};

/// Bandwidth in [0.1, 10] x guess, walkoff within +-1 ps, dispersion within
/// +-1e-24 s^2, amplitude in [0, 4 max(counts)], offset within +-max(counts).
BoundsVector default_bounds(const ParameterVector& initial, std::span<const double> counts);

struct FitOptions {
  std::size_t starts = 8;
  std::uint64_t seed = 1;
  NelderMeadOptions optimizer{};
  bool confidence = true;
};

struct FitResult {
  ParameterVector parameters{};
  std::array<bool, kFitParameterCount> at_bound{};
  ParameterVector half_width{};  // residual-curvature confidence proxy
  double residual = 0.0;         // weighted sum of squares
  std::size_t iterations = 0;    // of the winning start
  std::size_t evaluations = 0;   // over all starts
  bool converged = false;
  std::size_t best_start = 0;
  std::size_t converged_starts = 0;
  std::vector<double> best_history;  // of the winning start
};

class NonConvergenceError : public ValidationError {
 public:
  NonConvergenceError(const std::string& what, FitResult best_effort)
      : ValidationError(what), best_effort_(std::move(best_effort)) {}
  const FitResult& best_effort() const { return best_effort_; }

 private:
  FitResult best_effort_;
};

/// Poisson counts with mean pairs_per_bin * P_c per delay; deterministic in seed.
std::vector<double> simulate_counts(const HomTrace& trace, double pairs_per_bin, std::uint64_t seed);

/// Bounded multi-start Nelder-Mead least squares. Start 0 is problem.initial,
/// the others are drawn uniformly inside the bounds from `seed`. Throws
/// NonConvergenceError when no start converges.
FitResult fit_hom_trace(const FitProblem& problem, const FitOptions& options = {});

/// Weighted residual sum of squares of `theta` against the problem data.
double fit_residual(const FitProblem& problem, const ParameterVector& theta);

struct BandwidthReport {
  double delta_omega_minus = 0.0;         // rad/s
  double delta_omega_signal_idler = 0.0;  // rad/s, delta_omega_minus / 2
  double delta_lambda_signal_idler = 0.0; // m, lambda^2 delta_omega_minus / (2 pi c)
  double center_wavelength = 0.0;         // m
};

BandwidthReport extract_bandwidth_report(const FitResult& result, double center_wavelength);
BandwidthReport bandwidth_report(double delta_omega_minus, double center_wavelength);

}  // namespace qcomb
