#include "qcomb/hom.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <thread>

#include "qcomb/errors.hpp"

namespace qcomb {
namespace {

// Re-anchor the phasor recurrence this often to bound rounding drift.
constexpr std::size_t kResyncInterval = 256;

// g_k = sum over rows of C(k) C*(mirror k), k in the upper half of the axis.
// g of the mirrored index is conj(g_k), so only the upper half is needed.
std::vector<Complex> exchange_products(const Jsa& jsa, double& norm) {
  const auto& axis = jsa.grid().minus;
  if (!axis.symmetric_about_zero()) {
    throw ValidationError(
        "coincidence trace needs an omega_minus grid symmetric about zero (center 0, odd points)");
  }
  const std::size_t cols = jsa.columns();
  const std::size_t mid = cols / 2;
  std::vector<Complex> g(mid + 1, Complex{0.0, 0.0});
  norm = 0.0;
  for (std::size_t r = 0; r < jsa.rows(); ++r) {
    for (std::size_t k = 0; k < cols; ++k) {
      norm += std::norm(jsa.at(r, k));
    }
    for (std::size_t j = 0; j <= mid; ++j) {
      g[j] += jsa.at(r, mid + j) * std::conj(jsa.at(r, mid - j));
    }
  }
  if (!(norm > 0.0) || !std::isfinite(norm)) {
    throw ValidationError("degenerate state: joint spectral amplitude has zero norm");
  }
  return g;
}

double coincidence_at(const std::vector<Complex>& g, double norm, double step, double tau) {
  // sum_k g_k e^{-i w_k tau} = g_0 + 2 sum_{j>0} Re(g_j e^{-i j step tau})
  double sum = g[0].real();
  const Complex z = std::polar(1.0, -step * tau);
  Complex phasor{1.0, 0.0};
  for (std::size_t j = 1; j < g.size(); ++j) {
    if (j % kResyncInterval == 0) {
      phasor = std::polar(1.0, -static_cast<double>(j) * step * tau);
    } else {
      phasor *= z;
    }
    sum += 2.0 * (g[j].real() * phasor.real() - g[j].imag() * phasor.imag());
  }
  return std::clamp(0.5 - 0.5 * sum / norm, 0.0, 1.0);
}

template <typename Fn>
void parallel_for(std::size_t n, Fn&& fn) {
  const std::size_t workers =
      std::min<std::size_t>(std::max(1u, std::thread::hardware_concurrency()), n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) {
      fn(i);
    }
    return;
  }
  std::vector<std::future<void>> jobs;
  for (std::size_t w = 0; w < workers; ++w) {
    jobs.push_back(std::async(std::launch::async, [&, w] {
      for (std::size_t i = w; i < n; i += workers) {
        fn(i);
      }
    }));
  }
  for (auto& job : jobs) {
    job.get();
  }
}

void set_provisional_extremum(HomTrace& trace) {
  std::size_t best = 0;
  double deviation = -1.0;
  for (std::size_t i = 0; i < trace.p_coincidence.size(); ++i) {
    const double d = std::abs(trace.p_coincidence[i] - 0.5);
    if (d > deviation) {
      deviation = d;
      best = i;
    }
  }
  trace.baseline = 0.5;
  trace.extremum = trace.p_coincidence[best];
  trace.extremum_delay = trace.delays[best];
  trace.kind = trace.extremum <= 0.5 ? ExtremumKind::Dip : ExtremumKind::Peak;
}

std::size_t index_of_delay(const HomTrace& trace, double tau) {
  const auto it = std::min_element(trace.delays.begin(), trace.delays.end(),
                                   [tau](double a, double b) {
                                     return std::abs(a - tau) < std::abs(b - tau);
                                   });
  return static_cast<std::size_t>(it - trace.delays.begin());
}

struct HalfCrossing {
  double left = 0.0;
  double right = 0.0;
  std::size_t inside = 0;
};

// Walks outward from `center` until the trace crosses `half` on both sides.
HalfCrossing find_half_crossings(const HomTrace& trace, std::size_t center, double half) {
  const auto& p = trace.p_coincidence;
  const auto& t = trace.delays;
  const double sign = p[center] < half ? -1.0 : 1.0;  // inside the feature: sign*(p-half) > 0
  const auto inside = [&](std::size_t i) { return sign * (p[i] - half) > 0.0; };
  const auto cross = [&](std::size_t a, std::size_t b) {
    return t[a] + (half - p[a]) * (t[b] - t[a]) / (p[b] - p[a]);
  };
  std::size_t i = center;
  while (i > 0 && inside(i - 1)) {
    --i;
  }
  std::size_t j = center;
  while (j + 1 < p.size() && inside(j + 1)) {
    ++j;
  }
  if (i == 0 || j + 1 == p.size()) {
    throw ValidationError("feature not resolved: half level not crossed inside the trace");
  }
  return HalfCrossing{cross(i - 1, i), cross(j, j + 1), j - i + 1};
}

}  // namespace

const char* to_string(ExtremumKind kind) {
  return kind == ExtremumKind::Dip ? "dip" : "peak";
}

HomTrace coincidence_trace(const Jsa& jsa, std::span<const double> delays) {
  if (delays.empty()) {
    throw ValidationError("coincidence_trace: no delays requested");
  }
  double norm = 0.0;
  const std::vector<Complex> g = exchange_products(jsa, norm);
  const double step = jsa.grid().minus.step();

  HomTrace trace;
  trace.delays.assign(delays.begin(), delays.end());
  trace.p_coincidence.resize(delays.size());
  parallel_for(delays.size(), [&](std::size_t i) {
    trace.p_coincidence[i] = coincidence_at(g, norm, step, delays[i]);
  });
  set_provisional_extremum(trace);
  return trace;
}

CoincidenceEvaluator::CoincidenceEvaluator(const GridAxis& minus_axis, std::vector<double> delays)
    : axis_(minus_axis), delays_(std::move(delays)), half_(minus_axis.points / 2 + 1) {
  if (!axis_.symmetric_about_zero()) {
    throw ValidationError("CoincidenceEvaluator needs an omega_minus axis symmetric about zero");
  }
  const double step = axis_.step();
  cos_table_.resize(delays_.size() * half_);
  sin_table_.resize(delays_.size() * half_);
  for (std::size_t m = 0; m < delays_.size(); ++m) {
    for (std::size_t j = 0; j < half_; ++j) {
      const double phase = static_cast<double>(j) * step * delays_[m];
      cos_table_[m * half_ + j] = std::cos(phase);
      sin_table_[m * half_ + j] = std::sin(phase);
    }
  }
}

std::vector<double> CoincidenceEvaluator::evaluate(const Jsa& jsa) const {
  if (!(jsa.grid().minus == axis_)) {
    throw ValidationError("CoincidenceEvaluator: state sampled on a different grid");
  }
  double norm = 0.0;
  const std::vector<Complex> g = exchange_products(jsa, norm);
  std::vector<double> out(delays_.size());
  for (std::size_t m = 0; m < delays_.size(); ++m) {
    const double* c = &cos_table_[m * half_];
    const double* s = &sin_table_[m * half_];
    double sum = 0.0;
    for (std::size_t j = 1; j < half_; ++j) {
      // Re(g e^{-i phase}) = g.re cos + g.im sin
      sum += g[j].real() * c[j] + g[j].imag() * s[j];
    }
    sum = g[0].real() + 2.0 * sum;
    out[m] = std::clamp(0.5 - 0.5 * sum / norm, 0.0, 1.0);
  }
  return out;
}

BaselineWindow default_baseline_window(const HomTrace& trace) {
  if (trace.delays.size() < 3) {
    throw ValidationError("trace too short to estimate a baseline window");
  }
  HomTrace provisional = trace;
  set_provisional_extremum(provisional);
  const std::size_t center = index_of_delay(provisional, provisional.extremum_delay);
  const double reach = std::max(provisional.extremum_delay - trace.delays.front(),
                                trace.delays.back() - provisional.extremum_delay);
  double width = 0.0;
  try {
    const double half = 0.5 * (provisional.baseline + provisional.extremum);
    const HalfCrossing hc = find_half_crossings(provisional, center, half);
    width = hc.right - hc.left;
  } catch (const ValidationError&) {
    width = reach / 5.0;
  }
  BaselineWindow window{3.0 * width, 5.0 * width};
  if (window.outer > reach) {
    window.outer = reach;
    window.inner = std::min(window.inner, 0.6 * reach);
  }
  return window;
}

FeatureSummary analyze_feature(const HomTrace& trace, const BaselineWindow& window) {
  const auto& p = trace.p_coincidence;
  const auto& t = trace.delays;
  if (p.size() != t.size() || p.empty()) {
    throw ValidationError("malformed trace: delay and probability counts differ");
  }
  if (!(window.outer > window.inner) || window.inner < 0.0) {
    throw ValidationError("baseline window must satisfy 0 <= inner < outer");
  }
  HomTrace provisional = trace;
  set_provisional_extremum(provisional);
  const double center = provisional.extremum_delay;

  FeatureSummary out;
  double sum = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double d = std::abs(t[i] - center);
    if (d >= window.inner && d <= window.outer) {
      sum += p[i];
      ++out.baseline_samples;
    }
  }
  if (out.baseline_samples < 10) {
    throw ValidationError("baseline window holds fewer than 10 samples");
  }
  out.baseline = sum / static_cast<double>(out.baseline_samples);
  if (out.baseline == 0.0) {
    throw ValidationError("undefined visibility: baseline coincidence rate is zero");
  }

  double lo = 2.0;
  double hi = -1.0;
  double lo_t = center;
  double hi_t = center;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (std::abs(t[i] - center) >= window.inner) {
      continue;
    }
    if (p[i] < lo) {
      lo = p[i];
      lo_t = t[i];
    }
    if (p[i] > hi) {
      hi = p[i];
      hi_t = t[i];
    }
  }
  if (out.baseline - lo >= hi - out.baseline) {
    out.kind = ExtremumKind::Dip;
    out.extremum = lo;
    out.extremum_delay = lo_t;
  } else {
    out.kind = ExtremumKind::Peak;
    out.extremum = hi;
    out.extremum_delay = hi_t;
  }
  out.visibility = (out.baseline - out.extremum) / out.baseline;

  const double depth = std::abs(out.baseline - out.extremum);
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double d = std::abs(t[i] - center);
    if (d >= window.inner && d <= window.outer && std::abs(p[i] - out.baseline) > 0.25 * depth) {
      out.window_overlaps_feature = true;
      break;
    }
  }
  return out;
}

FeatureSummary analyze_feature(const HomTrace& trace) {
  return analyze_feature(trace, default_baseline_window(trace));
}

HomTrace annotate(HomTrace trace, const BaselineWindow& window) {
  const FeatureSummary s = analyze_feature(trace, window);
  trace.baseline = s.baseline;
  trace.extremum = s.extremum;
  trace.extremum_delay = s.extremum_delay;
  trace.kind = s.kind;
  return trace;
}

HomTrace annotate(HomTrace trace) {
  const BaselineWindow window = default_baseline_window(trace);
  return annotate(std::move(trace), window);
}

double visibility(const HomTrace& trace, const BaselineWindow& window) {
  return analyze_feature(trace, window).visibility;
}

double feature_width(const HomTrace& trace, const BaselineWindow& window) {
  const FeatureSummary s = analyze_feature(trace, window);
  const std::size_t center = index_of_delay(trace, s.extremum_delay);
  const double half = 0.5 * (s.baseline + s.extremum);
  const HalfCrossing hc = find_half_crossings(trace, center, half);
  if (hc.inside < 5) {
    throw ValidationError("feature not resolved: fewer than 5 delay samples inside the FWHM");
  }
  return hc.right - hc.left;
}

double feature_width(const HomTrace& trace) {
  return feature_width(trace, default_baseline_window(trace));
}

HomTrace trace_for_delayed_state(const Jsa& jsa, double tau, std::span<const double> delays) {
  return annotate(coincidence_trace(apply_delay(jsa, tau), delays));
}

double gaussian_coincidence(double sigma, double tau) {
  return 0.5 * (1.0 - std::exp(-sigma * sigma * tau * tau / 4.0));
}

std::vector<double> uniform_delays(double first, double last, std::size_t n) {
  if (n < 2) {
    throw ValidationError("uniform_delays: need at least 2 delays");
  }
  std::vector<double> out(n);
  const double step = (last - first) / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = first + static_cast<double>(i) * step;
  }
  return out;
}

}  // namespace qcomb
