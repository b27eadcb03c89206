#include "qcomb/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <random>

#include "qcomb/units.hpp"

namespace qcomb {
namespace {

constexpr std::size_t kBandwidth = static_cast<std::size_t>(FitParameter::Bandwidth);
constexpr std::size_t kWalkoff = static_cast<std::size_t>(FitParameter::Walkoff);
constexpr std::size_t kDispersion = static_cast<std::size_t>(FitParameter::Dispersion);
constexpr std::size_t kAmplitude = static_cast<std::size_t>(FitParameter::Amplitude);
constexpr std::size_t kOffset = static_cast<std::size_t>(FitParameter::Offset);

// The optimizer works in the unit box; points outside are projected back.
ParameterVector from_unit(const BoundsVector& bounds, std::span<const double> u) {
  ParameterVector theta{};
  for (std::size_t i = 0; i < kFitParameterCount; ++i) {
    const double t = std::clamp(u[i], 0.0, 1.0);
    theta[i] = bounds[i].lower + t * (bounds[i].upper - bounds[i].lower);
  }
  return theta;
}

std::vector<double> to_unit(const BoundsVector& bounds, const ParameterVector& theta) {
  std::vector<double> u(kFitParameterCount);
  for (std::size_t i = 0; i < kFitParameterCount; ++i) {
    const double width = bounds[i].upper - bounds[i].lower;
    u[i] = width > 0.0 ? (theta[i] - bounds[i].lower) / width : 0.0;
  }
  return u;
}

double weighted_residual(const FitProblem& problem, const std::vector<double>& model) {
  double sum = 0.0;
  for (std::size_t i = 0; i < model.size(); ++i) {
    const double r = problem.counts[i] - model[i];
    const double w = problem.poisson_weights ? 1.0 / std::max(problem.counts[i], 1.0) : 1.0;
    sum += w * r * r;
  }
  return sum;
}

struct StartOutcome {
  NelderMeadResult nm;
  std::size_t evaluations = 0;
};

}  // namespace

const char* to_string(FitParameter p) {
  switch (p) {
    case FitParameter::Bandwidth:
      return "bandwidth_rad_per_s";
    case FitParameter::Walkoff:
      return "walkoff_s";
    case FitParameter::Dispersion:
      return "dispersion_s2";
    case FitParameter::Amplitude:
      return "amplitude";
    case FitParameter::Offset:
      return "offset";
  }
  return "unknown";
}

Jsa model_state(const FitModel& model, const ParameterVector& theta) {
  PhaseMatchSpec pm;
  pm.degeneracy_frequency = model.pump.center_frequency;
  pm.bandwidth = theta[kBandwidth];
  pm.walkoff = theta[kWalkoff];
  pm.dispersion = theta[kDispersion];
  pm.shape = model.shape;
  Jsa state = assemble_jsa_mono(model.pump, pm, model.cavity, model.grid);
  if (model.filter) {
    state = apply_filter(state, *model.filter);
  }
  if (model.delay != 0.0) {
    state = apply_delay(state, model.delay);
  }
  return state;
}

std::vector<double> model_counts(const FitModel& model, const ParameterVector& theta,
                                 const CoincidenceEvaluator& evaluator) {
  std::vector<double> p = evaluator.evaluate(model_state(model, theta));
  for (double& v : p) {
    v = theta[kAmplitude] * v + theta[kOffset];
  }
  return p;
}

std::vector<double> model_counts(const FitModel& model, const ParameterVector& theta,
                                 std::span<const double> delays) {
  HomTrace trace = coincidence_trace(model_state(model, theta), delays);
  for (double& v : trace.p_coincidence) {
    v = theta[kAmplitude] * v + theta[kOffset];
  }
  return trace.p_coincidence;
}

void FitProblem::validate() const {
  if (delays.size() != counts.size()) {
    throw ValidationError("fit: delay and count arrays differ in length");
  }
  if (counts.size() < 2 * kFitParameterCount) {
    throw ValidationError("fit: need at least " + std::to_string(2 * kFitParameterCount) +
                          " data points for " + std::to_string(kFitParameterCount) +
                          " free parameters");
  }
  for (std::size_t i = 0; i < kFitParameterCount; ++i) {
    const auto& b = bounds[i];
    if (!std::isfinite(b.lower) || !std::isfinite(b.upper) || !(b.lower < b.upper)) {
      throw ValidationError(std::string("fit: bounds of ") + to_string(FitParameter{i}) +
                            " must be finite and ordered");
    }
    if (initial[i] < b.lower || initial[i] > b.upper) {
      throw ValidationError(std::string("fit: initial value of ") + to_string(FitParameter{i}) +
                            " lies outside its bounds");
    }
  }
  if (!(bounds[kBandwidth].lower > 0.0)) {
    throw ValidationError("fit: bandwidth lower bound must be positive");
  }
  if (model.pump.mode != PumpMode::Monochromatic || model.grid.is_2d()) {
    throw ValidationError("fit: model must use a monochromatic pump on a 1D grid");
  }
}

BoundsVector default_bounds(const ParameterVector& initial, std::span<const double> counts) {
  double peak = 1.0;
  for (double c : counts) {
    peak = std::max(peak, std::abs(c));
  }
  BoundsVector b{};
  b[kBandwidth] = {0.1 * initial[kBandwidth], 10.0 * initial[kBandwidth]};
  b[kWalkoff] = {-1e-12, 1e-12};
  b[kDispersion] = {-1e-24, 1e-24};
  b[kAmplitude] = {0.0, 4.0 * peak};
  b[kOffset] = {-peak, peak};
  return b;
}

std::vector<double> simulate_counts(const HomTrace& trace, double pairs_per_bin, std::uint64_t seed) {
  if (!(pairs_per_bin > 0.0)) {
    throw ValidationError("simulate_counts: pairs_per_bin must be positive");
  }
  std::mt19937_64 rng(seed);
  std::vector<double> out(trace.p_coincidence.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double mean = pairs_per_bin * trace.p_coincidence[i];
    if (mean <= 0.0) {
      out[i] = 0.0;
      continue;
    }
    std::poisson_distribution<long long> draw(mean);
    out[i] = static_cast<double>(draw(rng));
  }
  return out;
}

double fit_residual(const FitProblem& problem, const ParameterVector& theta) {
  return weighted_residual(problem, model_counts(problem.model, theta, problem.delays));
}

FitResult fit_hom_trace(const FitProblem& problem, const FitOptions& options) {
  problem.validate();
  if (options.starts == 0) {
    throw ValidationError("fit: need at least one start");
  }
  const CoincidenceEvaluator evaluator(problem.model.grid.minus, problem.delays);

  const auto objective = [&](std::span<const double> u) {
    try {
      return weighted_residual(problem,
                               model_counts(problem.model, from_unit(problem.bounds, u), evaluator));
    } catch (const ValidationError&) {
      return std::numeric_limits<double>::infinity();
    }
  };

  std::vector<std::vector<double>> starts;
  starts.push_back(to_unit(problem.bounds, problem.initial));
  std::mt19937_64 rng(options.seed);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  while (starts.size() < options.starts) {
    std::vector<double> u(kFitParameterCount);
    for (double& v : u) {
      v = uniform(rng);
    }
    starts.push_back(std::move(u));
  }

  // Each start polishes once more from a fresh simplex around its optimum so
  // that a collapsed simplex does not stop short of the minimum.
  const auto run_start = [&](std::vector<double> u0) {
    StartOutcome out;
    out.nm = nelder_mead(objective, std::move(u0), options.optimizer);
    out.evaluations = out.nm.evaluations;
    NelderMeadOptions polish = options.optimizer;
    polish.initial_step = std::min(polish.initial_step, 1e-3);
    NelderMeadResult second = nelder_mead(objective, out.nm.x, polish);
    out.evaluations += second.evaluations;
    if (second.value <= out.nm.value) {
      std::vector<double> history = std::move(out.nm.best_history);
      for (double v : second.best_history) {
        history.push_back(std::min(v, history.empty() ? v : history.back()));
      }
      const std::size_t iterations = out.nm.iterations + second.iterations;
      out.nm = std::move(second);
      out.nm.iterations = iterations;
      out.nm.best_history = std::move(history);
    }
    return out;
  };

  std::vector<std::future<StartOutcome>> jobs;
  for (auto& u0 : starts) {
    jobs.push_back(std::async(std::launch::async, run_start, u0));
  }
  std::vector<StartOutcome> outcomes;
  for (auto& job : jobs) {
    outcomes.push_back(job.get());
  }

  FitResult result;
  std::size_t best = 0;
  for (std::size_t s = 0; s < outcomes.size(); ++s) {
    result.evaluations += outcomes[s].evaluations;
    if (outcomes[s].nm.converged) {
      ++result.converged_starts;
    }
    // Strict comparison keeps the lowest start index on ties.
    const bool better_status = outcomes[s].nm.converged && !outcomes[best].nm.converged;
    const bool same_status = outcomes[s].nm.converged == outcomes[best].nm.converged;
    if (better_status || (same_status && outcomes[s].nm.value < outcomes[best].nm.value)) {
      best = s;
    }
  }
  const NelderMeadResult& nm = outcomes[best].nm;
  result.best_start = best;
  result.parameters = from_unit(problem.bounds, nm.x);
  result.residual = nm.value;
  result.iterations = nm.iterations;
  result.converged = nm.converged;
  result.best_history = nm.best_history;
  for (std::size_t i = 0; i < kFitParameterCount; ++i) {
    const double u = std::clamp(nm.x[i], 0.0, 1.0);
    result.at_bound[i] = u <= 1e-6 || u >= 1.0 - 1e-6;
  }

  if (options.confidence) {
    const std::size_t dof = problem.counts.size() - kFitParameterCount;
    const double variance = result.residual / static_cast<double>(dof);
    const double h = 1e-3;
    const std::vector<double> u0(nm.x.begin(), nm.x.end());
    for (std::size_t i = 0; i < kFitParameterCount; ++i) {
      std::vector<double> up = u0;
      std::vector<double> down = u0;
      up[i] = std::min(1.0, std::clamp(u0[i], 0.0, 1.0) + h);
      down[i] = std::max(0.0, std::clamp(u0[i], 0.0, 1.0) - h);
      const double hu = up[i] - std::clamp(u0[i], 0.0, 1.0);
      const double hd = std::clamp(u0[i], 0.0, 1.0) - down[i];
      const double fu = objective(up);
      const double fd = objective(down);
      // Second derivative from a three-point quadratic through (−hd, fd), (0, f0), (hu, fu).
      const double curvature =
          2.0 * (hd * fu + hu * fd - (hu + hd) * result.residual) / (hu * hd * (hu + hd));
      const double width = problem.bounds[i].upper - problem.bounds[i].lower;
      result.half_width[i] = curvature > 0.0
                                 ? std::sqrt(2.0 * variance / curvature) * width
                                 : std::numeric_limits<double>::infinity();
    }
  }

  if (result.converged_starts == 0) {
    throw NonConvergenceError("fit did not converge from any of " +
                                  std::to_string(options.starts) + " starts",
                              result);
  }
  return result;
}

BandwidthReport bandwidth_report(double delta_omega_minus, double center_wavelength) {
  if (!(center_wavelength > 0.0)) {
    throw ValidationError("bandwidth report: center wavelength must be positive");
  }
  BandwidthReport r;
  r.delta_omega_minus = delta_omega_minus;
  r.delta_omega_signal_idler = 0.5 * delta_omega_minus;
  r.center_wavelength = center_wavelength;
  r.delta_lambda_signal_idler = center_wavelength * center_wavelength * delta_omega_minus /
                                (units::kTwoPi * units::kSpeedOfLight);
  return r;
}

BandwidthReport extract_bandwidth_report(const FitResult& result, double center_wavelength) {
  if (!result.converged) {
    throw ValidationError("bandwidth report needs a converged fit");
  }
  return bandwidth_report(result.parameters[kBandwidth], center_wavelength);
}

}  // namespace qcomb
