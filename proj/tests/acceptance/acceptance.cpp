// Acceptance suite: one PASS/FAIL line per criterion.
//
//   qcomb_acceptance [--only N] [--scratch DIR] [--report FILE] [--expect-fail N,M,...]
//
// Exit status is the number of criteria whose outcome differs from the
// expectation: PASS, or FAIL for those listed in --expect-fail.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>
#include <filesystem>
#include <functional>
#include <numeric>
#include <string>
#include <vector>

#include "properties.hpp"
#include "qcomb/biphoton.hpp"
#include "qcomb/cavity.hpp"
#include "qcomb/estimation.hpp"
#include "qcomb/hom.hpp"
#include "qcomb/nelder_mead.hpp"
#include "qcomb/units.hpp"
#include "scenarios.hpp"

using namespace qcomb;
namespace qt = qcomb::testing;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* format, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, format, a);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// ---------------------------------------------------------------- 1
Outcome symmetry_flip() {
  const auto t0 = std::chrono::steady_clock::now();
  const CavitySpec cav{units::ghz(19.2), 0.999, 0.999, 0.0};
  const double fsr = cav.fsr;
  const double tau = units::kPi / fsr;

  PhaseMatchSpec pm;
  pm.bandwidth = 12.0 * fsr;
  pm.shape = PhaseMatchShape::Gaussian;
  // Step just under linewidth / 8 over +-2 bandwidths.
  const double step = linewidth(cav, Polarization::Signal) / 8.2;
  const std::size_t points = 2 * static_cast<std::size_t>(std::ceil(2.0 * pm.bandwidth / step)) + 1;
  const SpectralGrid grid = SpectralGrid::one_d(4.0 * pm.bandwidth, points);
  const std::vector<double> delays = uniform_delays(-0.85 * tau, 0.85 * tau, 341);

  Outcome out{true, ""};
  for (bool resonant : {true, false}) {
    PumpSpec pump = qt::resonant_pump(cav, resonant ? 0.0 : fsr);
    pm.degeneracy_frequency = pump.center_frequency;
    const Jsa state = apply_delay(assemble_jsa_mono(pump, pm, cav, grid), tau);
    const double s = exchange_overlap(state).real();
    const FeatureSummary f = analyze_feature(coincidence_trace(state, delays));
    const bool ok = resonant ? (s >= 0.95 && f.kind == ExtremumKind::Dip && f.visibility >= 0.95)
                             : (s <= -0.95 && f.kind == ExtremumKind::Peak && f.visibility <= -0.95);
    out.pass = out.pass && ok;
    out.detail += std::string(resonant ? "resonant" : "anti-resonant") + " Re S=" + fmt("%+.4f", s) +
                  " V=" + fmt("%+.4f", f.visibility) + " " + to_string(f.kind) + "; ";
  }
  const double elapsed = seconds_since(t0);
  out.pass = out.pass && elapsed < 5.0;
  out.detail += "runtime " + fmt("%.2f s", elapsed);
  return out;
}

// ---------------------------------------------------------------- 2
Outcome airy_closed_form() {
  double worst = 0.0;
  for (double r : {0.24, 0.27, 0.5, 0.8, 0.999}) {
    const CavitySpec cav{units::ghz(19.2), r, r, units::ghz(3.0)};
    const double anti = cav.resonance_offset + 0.5 * cav.fsr + 7.0 * cav.fsr;
    const double t2 = std::norm(amplitude_transmission(cav, Polarization::Signal, anti));
    const double expected = std::pow((1.0 - r) / (1.0 + r), 2);
    worst = std::max(worst, std::abs(t2 - expected));
  }
  return {worst <= 1e-12, "max |t|^2 error " + fmt("%.2e", worst)};
}

// ---------------------------------------------------------------- 3
Outcome gaussian_oracle() {
  // C = exp(-w^2 / (2 sigma^2)) has intensity FWHM 2 sqrt(2 ln 2) sigma;
  // as an amplitude FWHM-parameterised Gaussian that is sigma * 2 sqrt(ln 2).
  const double sigma = units::thz(1.0);
  PumpSpec pump;
  pump.center_frequency = units::thz(390.0);
  PhaseMatchSpec pm;
  pm.degeneracy_frequency = pump.center_frequency;
  pm.bandwidth = 2.0 * std::sqrt(std::log(2.0)) * sigma;
  pm.shape = PhaseMatchShape::Gaussian;
  const CavitySpec none{units::ghz(19.2), 0.0, 0.0, 0.0};
  const Jsa state = assemble_jsa_mono(pump, pm, none, SpectralGrid::one_d(24.0 * sigma, 4097));
  const std::vector<double> delays = uniform_delays(-5.0 / sigma, 5.0 / sigma, 401);
  const HomTrace trace = coincidence_trace(state, delays);
  double worst = 0.0;
  for (std::size_t i = 0; i < delays.size(); ++i) {
    const double t = delays[i];
    const double oracle = 0.5 * (1.0 - std::exp(-sigma * sigma * t * t / 4.0));
    worst = std::max(worst, std::abs(trace.p_coincidence[i] - oracle));
  }
  return {worst <= 1e-6, "max |P - oracle| " + fmt("%.2e", worst) + " over +-5/sigma"};
}

// ---------------------------------------------------------------- 4
struct DipFit {
  double walkoff = 0.0;
  double dispersion = 0.0;
  double visibility = 0.0;
  double width = 0.0;
};

struct DipObservables {
  double visibility = 0.0;
  double width = 0.0;
};

DipObservables device_dip(double walkoff, double dispersion) {
  const CavitySpec cav = qt::device_cavity();
  const PumpSpec pump = qt::resonant_pump(cav);
  const Jsa state =
      assemble_jsa_mono(pump, qt::device_phase_match(pump, walkoff, dispersion), cav, qt::device_grid());
  const HomTrace trace = coincidence_trace(state, uniform_delays(-400e-15, 400e-15, 401));
  const BaselineWindow window = default_baseline_window(trace);
  DipObservables o;
  o.visibility = analyze_feature(trace, window).visibility;
  try {
    o.width = feature_width(trace, window);
  } catch (const ValidationError&) {
    o.width = 0.0;
  }
  return o;
}

// Reported dip: visibility 0.86 (last digit 0.01) and width 52 +- 2 fs.
double dip_misfit(const DipObservables& o) {
  return std::pow((o.visibility - 0.86) / 0.01, 2) + std::pow((o.width - 52e-15) / 2e-15, 2);
}

const DipFit& dip_fit() {
  static const DipFit fit = [] {
    constexpr double kWalkoffScale = 100e-15;
    constexpr double kDispersionScale = 1e-26;
    auto objective = [&](std::span<const double> x) {
      const double k1 = std::clamp(x[0], 0.0, 1.0) * kWalkoffScale;
      const double k2 = std::clamp(x[1], 0.0, 1.0) * kDispersionScale;
      return dip_misfit(device_dip(k1, k2));
    };
    std::vector<double> best{0.0, 0.0};
    double best_value = INFINITY;
    for (double k1 : {0.0, 10e-15, 20e-15, 30e-15, 40e-15, 60e-15}) {
      for (double k2 : {0.0, 0.5e-27, 1e-27, 2e-27, 4e-27}) {
        const std::vector<double> x{k1 / kWalkoffScale, k2 / kDispersionScale};
        const double v = objective(x);
        if (v < best_value) {
          best_value = v;
          best = x;
        }
      }
    }
    NelderMeadOptions options;
    options.initial_step = 0.05;
    options.x_tolerance = 1e-3;
    options.max_iterations = 60;
    const NelderMeadResult r = nelder_mead(objective, best, options);
    DipFit out;
    const std::vector<double>& x = r.value < best_value ? r.x : best;
    out.walkoff = std::clamp(x[0], 0.0, 1.0) * kWalkoffScale;
    out.dispersion = std::clamp(x[1], 0.0, 1.0) * kDispersionScale;
    const DipObservables o = device_dip(out.walkoff, out.dispersion);
    out.visibility = o.visibility;
    out.width = o.width;
    return out;
  }();
  return fit;
}

Outcome reported_visibility() {
  const DipFit& f = dip_fit();
  const bool ok = std::abs(f.visibility - 0.86) <= 0.05 && f.width >= 40e-15 && f.width <= 65e-15;
  return {ok, "fitted walkoff=" + fmt("%.2f fs", f.walkoff * 1e15) + " dispersion=" +
                  fmt("%.3g s^2", f.dispersion) + " -> V=" + fmt("%.3f", f.visibility) +
                  " FWHM=" + fmt("%.1f fs", f.width * 1e15)};
}

// ---------------------------------------------------------------- 5
Outcome delayed_visibilities() {
  const DipFit& f = dip_fit();
  const CavitySpec cav = qt::device_cavity();
  const double tau = units::kPi / cav.fsr;
  const std::vector<double> delays = uniform_delays(-400e-15, 400e-15, 401);
  Outcome out{true, ""};
  for (bool resonant : {true, false}) {
    const PumpSpec pump = qt::resonant_pump(cav, resonant ? 0.0 : cav.fsr);
    const Jsa state = assemble_jsa_mono(pump, qt::device_phase_match(pump, f.walkoff, f.dispersion),
                                        cav, qt::device_grid());
    const FeatureSummary s = analyze_feature(trace_for_delayed_state(state, tau, delays));
    const bool kind_ok = s.kind == (resonant ? ExtremumKind::Dip : ExtremumKind::Peak);
    const bool ok = kind_ok && std::abs(s.visibility) >= 0.05 && std::abs(s.visibility) <= 0.20;
    out.pass = out.pass && ok;
    out.detail += std::string(resonant ? "resonant " : "anti-resonant ") + to_string(s.kind) +
                  " V=" + fmt("%+.3f", s.visibility) + (resonant ? "; " : "");
  }
  return out;
}

// ---------------------------------------------------------------- 6
Outcome filter_prediction() {
  const DipFit& f = dip_fit();
  const CavitySpec cav{units::ghz(19.2), 0.5, 0.5, 0.0};
  const double tau = units::kPi / cav.fsr;
  FilterSpec filter;
  filter.shape = FilterShape::TopHat;
  filter.bandwidth = units::angular_width_of_wavelength_band(25e-9, 1530e-9);
  // Both photons inside the band means |w-| <= filter bandwidth.
  const SpectralGrid grid = SpectralGrid::one_d(2.2 * filter.bandwidth, 32769);
  const std::vector<double> delays = uniform_delays(-2e-12, 2e-12, 801);
  Outcome out{true, ""};
  for (bool resonant : {true, false}) {
    const PumpSpec pump = qt::resonant_pump(cav, resonant ? 0.0 : cav.fsr);
    filter.center = 0.5 * pump.center_frequency;
    // Walk-off compensated, dispersion kept.
    const Jsa state = apply_filter(
        assemble_jsa_mono(pump, qt::device_phase_match(pump, 0.0, f.dispersion), cav, grid), filter);
    const FeatureSummary s = analyze_feature(trace_for_delayed_state(state, tau, delays));
    if (resonant) {
      out.pass = s.kind == ExtremumKind::Dip && std::abs(s.visibility - 0.70) <= 0.10;
    }
    out.detail += std::string(resonant ? "resonant " : "anti-resonant ") + to_string(s.kind) +
                  " V=" + fmt("%+.3f", s.visibility) + (resonant ? "; " : "");
  }
  return out;
}

// ---------------------------------------------------------------- 7
Outcome peak_count() {
  const CavitySpec cav = qt::device_cavity();
  const PumpSpec pump = qt::resonant_pump(cav);
  const PhaseMatchSpec pm = qt::device_phase_match(pump, 0.0, 0.0);
  // Comb spanning +-bandwidth / 2.
  const Jsa state = assemble_jsa_mono(pump, pm, cav, SpectralGrid::one_d(pm.bandwidth, 32769));
  const int n = count_comb_peaks(jsi(state), 0.01);
  const double expected = pm.bandwidth / (2.0 * cav.fsr);
  return {n > 500, std::to_string(n) + " peaks at 1% (bandwidth / 2 fsr = " + fmt("%.1f)", expected)};
}

// ---------------------------------------------------------------- 8
Outcome jsi_periodicity() {
  const CavitySpec cav{units::ghz(19.2), 0.8, 0.8, 0.0};
  const double fsr = cav.fsr;
  PumpSpec pump;
  pump.mode = PumpMode::GaussianBroadband;
  pump.center_frequency = resonant_pump_frequency(cav, units::thz(195.94));
  pump.linewidth = 20.0 * fsr;
  PhaseMatchSpec pm;
  pm.degeneracy_frequency = pump.center_frequency;
  pm.bandwidth = 100.0 * fsr;
  const std::size_t n = 769;  // 2 fsr is exactly 256 steps
  const SpectralGrid grid =
      SpectralGrid::two_d(pump.center_frequency, 6.0 * fsr, n, 6.0 * fsr, n);
  const std::vector<double> j = jsi(assemble_jsa_broadband(pump, pm, cav, grid));

  // Mean product over the overlap, so the envelope does not bias the shift.
  auto corr = [&](long dr, long dc) {
    double sum = 0.0;
    long count = 0;
    const long size = static_cast<long>(n);
    for (long r = std::max(0L, -dr); r < std::min(size, size - dr); ++r) {
      for (long c = std::max(0L, -dc); c < std::min(size, size - dc); ++c) {
        sum += j[r * size + c] * j[(r + dr) * size + (c + dc)];
        ++count;
      }
    }
    return sum / static_cast<double>(count);
  };
  auto locate = [&](long r0, long c0) {
    // Line scans over +-fsr/2 along each axis, then a 3x3 hill climb.
    long br = r0;
    long bc = c0;
    double best = -1.0;
    for (long d = -64; d <= 64; ++d) {
      for (auto [r, c] : {std::pair{r0 + d, c0}, std::pair{r0, c0 + d}}) {
        const double v = corr(r, c);
        if (v > best) {
          best = v;
          br = r;
          bc = c;
        }
      }
    }
    for (bool moved = true; moved;) {
      moved = false;
      long nr = br;
      long nc = bc;
      for (long dr = -1; dr <= 1; ++dr) {
        for (long dc = -1; dc <= 1; ++dc) {
          const double v = corr(br + dr, bc + dc);
          if (v > best) {
            best = v;
            nr = br + dr;
            nc = bc + dc;
            moved = true;
          }
        }
      }
      br = nr;
      bc = nc;
    }
    return std::pair{br, bc};
  };
  const auto along_minus = locate(0, 256);
  const auto along_plus = locate(256, 0);
  const bool ok = std::abs(along_minus.first) <= 1 && std::abs(along_minus.second - 256) <= 1 &&
                  std::abs(along_plus.first - 256) <= 1 && std::abs(along_plus.second) <= 1;
  return {ok, "maxima at (" + std::to_string(along_minus.first) + "," +
                  std::to_string(along_minus.second) + ") and (" + std::to_string(along_plus.first) +
                  "," + std::to_string(along_plus.second) + ") steps; lattice (0,256),(256,0)"};
}

// ---------------------------------------------------------------- 9
Outcome fit_oracle() {
  const qt::ToyFit toy = qt::toy_fit();
  FitProblem problem;
  problem.model = toy.model;
  problem.delays = toy.delays;
  problem.bounds = toy.bounds;
  problem.counts = model_counts(problem.model, toy.truth, problem.delays);
  problem.initial = {units::thz(0.25), 1e-12, 2e-25, 800.0, 0.0};
  const FitResult clean = fit_hom_trace(problem);
  double worst = 0.0;
  for (std::size_t i = 0; i < kFitParameterCount; ++i) {
    worst = std::max(worst, std::abs(clean.parameters[i] / toy.truth[i] - 1.0));
  }

  const ParameterVector shape{toy.truth[0], toy.truth[1], toy.truth[2], 1.0, 0.0};
  HomTrace probability;
  probability.delays = toy.delays;
  probability.p_coincidence = model_counts(problem.model, shape, toy.delays);
  const double pairs = 1e4;
  double worst_bandwidth = 0.0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    FitProblem noisy = problem;
    noisy.counts = simulate_counts(probability, pairs, seed);
    const double mean = std::accumulate(noisy.counts.begin(), noisy.counts.end(), 0.0) /
                        static_cast<double>(noisy.counts.size());
    noisy.initial = {units::thz(0.25), 1e-12, 2e-25, 2.0 * mean, 0.0};
    noisy.bounds[3] = {0.0, 4.0 * pairs};
    noisy.bounds[4] = {-0.5 * pairs, 0.5 * pairs};
    FitOptions options;
    options.seed = seed;
    const FitResult r = fit_hom_trace(noisy, options);
    worst_bandwidth = std::max(worst_bandwidth, std::abs(r.parameters[0] / toy.truth[0] - 1.0));
  }
  const bool ok = worst <= 0.01 && worst_bandwidth <= 0.05;
  return {ok, "noiseless worst relative error " + fmt("%.2e", worst) +
                  "; Poisson 1e4 pairs/bin, 10 seeds: worst bandwidth error " +
                  fmt("%.2e", worst_bandwidth)};
}

// ---------------------------------------------------------------- 10
Outcome invariant_suites(const std::filesystem::path& scratch) {
  std::filesystem::create_directories(scratch);
  const std::vector<qt::PropertyOutcome> all{
      qt::overlap_bound(101),     qt::delay_composition(102), qt::trace_symmetry(103),
      qt::comb_revival(104),      qt::config_round_trip(105), qt::output_determinism(106, scratch),
  };
  Outcome out{true, ""};
  for (const auto& p : all) {
    out.pass = out.pass && p.ok();
    out.detail += p.name + " " + std::to_string(p.cases - p.failures) + "/" + std::to_string(p.cases);
    if (!p.ok()) {
      out.detail += " (" + p.first_failure + ")";
    }
    out.detail += "; ";
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  std::filesystem::path scratch = std::filesystem::temp_directory_path() / "qcomb_acceptance";
  std::filesystem::path report_path;
  std::set<int> expect_fail;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--only" && i + 1 < argc) {
      only = std::atoi(argv[++i]);
    } else if (arg == "--scratch" && i + 1 < argc) {
      scratch = argv[++i];
    } else if (arg == "--report" && i + 1 < argc) {
      report_path = argv[++i];
    } else if (arg == "--expect-fail" && i + 1 < argc) {
      std::stringstream list(argv[++i]);
      for (std::string item; std::getline(list, item, ',');) {
        expect_fail.insert(std::atoi(item.c_str()));
      }
    } else {
      std::fprintf(stderr, "unknown argument %s\n", arg.c_str());
      return 64;
    }
  }

  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"symmetry flip at R = 0.999", symmetry_flip},
      {"Airy anti-resonance closed form", airy_closed_form},
      {"Gaussian HOM oracle", gaussian_oracle},
      {"reported visibility and dip width", reported_visibility},
      {"delayed-state visibilities", delayed_visibilities},
      {"filter prediction", filter_prediction},
      {"comb peak count", peak_count},
      {"2D JSI periodicity", jsi_periodicity},
      {"fit oracle", fit_oracle},
      {"invariant suites", [&] { return invariant_suites(scratch); }},
  };

  int unexpected = 0;
  std::string report;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    const int number = static_cast<int>(k) + 1;
    if (only != 0 && only != number) {
      continue;
    }
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[k].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const bool expected_failure = expect_fail.count(number) != 0;
    unexpected += o.pass == expected_failure ? 1 : 0;
    char line[2048];
    std::snprintf(line, sizeof line, "%s criterion %d (%s): %s [%.1f s]%s\n",
                  o.pass ? "PASS" : "FAIL", number, criteria[k].first, o.detail.c_str(),
                  seconds_since(t0), expected_failure ? " (expected failure)" : "");
    std::fputs(line, stdout);
    std::fflush(stdout);
    report += line;
  }
  if (!report_path.empty()) {
    std::ofstream(report_path) << report;
  }
  return unexpected;
}
