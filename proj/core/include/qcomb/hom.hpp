#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "qcomb/biphoton.hpp"

namespace qcomb {

enum class ExtremumKind { Dip, Peak };

const char* to_string(ExtremumKind kind);

/// Coincidence probability behind a balanced beam splitter versus the HOM
/// delay. `baseline` and `extremum` start as the ideal-splitter values
/// (1/2 and the most extreme sample) and are refined by annotate().
struct HomTrace {
  std::vector<double> delays;  // s
  std::vector<double> p_coincidence;
  double baseline = 0.5;
  double extremum = 0.5;
  double extremum_delay = 0.0;
  ExtremumKind kind = ExtremumKind::Dip;
};

/// Distances (s) from the feature center whose samples define the baseline.
struct BaselineWindow {
  double inner = 0.0;
  double outer = 0.0;
};

struct FeatureSummary {
  double baseline = 0.0;  // N_tau
  double extremum = 0.0;  // N_0
  double extremum_delay = 0.0;
  ExtremumKind kind = ExtremumKind::Dip;
  double visibility = 0.0;  // (N_tau - N_0) / N_tau
  std::size_t baseline_samples = 0;
  bool window_overlaps_feature = false;
};

/// P_c(tau) = 1/2 - 1/2 Re[sum C(w) C*(-w) e^{-i w tau}] / sum |C|^2, summed
/// over every omega_plus row. Needs an omega_minus grid symmetric about 0.
HomTrace coincidence_trace(const Jsa& jsa, std::span<const double> delays);

/// Same sum as coincidence_trace with the e^{-i w tau} table precomputed for a
/// fixed grid and delay set; used by the fitter, which re-evaluates thousands
/// of states on one sampling.
class CoincidenceEvaluator {
 public:
  CoincidenceEvaluator(const GridAxis& minus_axis, std::vector<double> delays);

  std::vector<double> evaluate(const Jsa& jsa) const;
  const std::vector<double>& delays() const { return delays_; }

 private:
  GridAxis axis_;
  std::vector<double> delays_;
  std::size_t half_ = 0;
  std::vector<double> cos_table_;  // delays x half
  std::vector<double> sin_table_;
};

/// Baseline window |tau - center| in [3w, 5w], w the estimated feature width,
/// clipped to the trace span.
BaselineWindow default_baseline_window(const HomTrace& trace);

FeatureSummary analyze_feature(const HomTrace& trace, const BaselineWindow& window);
FeatureSummary analyze_feature(const HomTrace& trace);

/// Copy of `trace` with baseline, extremum and kind from analyze_feature.
HomTrace annotate(HomTrace trace, const BaselineWindow& window);
HomTrace annotate(HomTrace trace);

double visibility(const HomTrace& trace, const BaselineWindow& window);

/// FWHM of the feature between baseline and extremum, by linear
/// interpolation. Throws if fewer than 5 samples fall inside the FWHM or the
/// half level is not crossed inside the trace.
double feature_width(const HomTrace& trace, const BaselineWindow& window);
double feature_width(const HomTrace& trace);

/// apply_delay followed by coincidence_trace and annotate.
HomTrace trace_for_delayed_state(const Jsa& jsa, double tau, std::span<const double> delays);

/// Closed form for C(w) = exp(-w^2 / (2 sigma^2)): 1/2 (1 - exp(-sigma^2 tau^2 / 4)).
double gaussian_coincidence(double sigma, double tau);

/// n uniformly spaced delays covering [first, last].
std::vector<double> uniform_delays(double first, double last, std::size_t n);

}  // namespace qcomb
