#include "qcomb/commands.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "qcomb/csv.hpp"
#include "qcomb/errors.hpp"
#include "qcomb/estimation.hpp"
#include "qcomb/units.hpp"

namespace qcomb {
namespace {

using nlohmann::json;

constexpr std::size_t kMaxGridSamples = std::size_t{1} << 26;

std::string provenance(const RunConfig& config) {
  return provenance_line(config_hash(config)) + "\n";
}

SpectralGrid checked_grid(const RunConfig& config) {
  SpectralGrid grid = make_grid(config);
  if (grid.size() > kMaxGridSamples) {
    throw ValidationError("grid of " + std::to_string(grid.size()) +
                          " samples is too large; set grid.points / grid.plus_points");
  }
  return grid;
}

Jsa assemble(const RunConfig& config, const PumpSpec& pump, double tau) {
  const SpectralGrid grid = checked_grid(config);
  Jsa state = pump.mode == PumpMode::Monochromatic
                  ? assemble_jsa_mono(pump, config.phase_match, config.cavity, grid)
                  : assemble_jsa_broadband(pump, config.phase_match, config.cavity, grid);
  if (config.filter) {
    state = apply_filter(state, *config.filter);
  }
  if (tau != 0.0) {
    state = apply_delay(state, tau);
  }
  return state;
}

json complex_json(Complex z) { return {{"re", z.real()}, {"im", z.imag()}}; }

json class_json(const PumpClass& c) {
  return {{"label", to_string(c.label)}, {"nearest_resonant_detuning_rad_per_s", c.nearest_resonant_detuning}};
}

double class_tolerance(const RunConfig& config) {
  return config.class_tolerance_fsr * config.cavity.fsr;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

json feature_json(const HomTrace& trace) {
  json out;
  const BaselineWindow window = default_baseline_window(trace);
  const FeatureSummary s = analyze_feature(trace, window);
  out["baseline"] = s.baseline;
  out["extremum"] = s.extremum;
  out["extremum_delay_s"] = s.extremum_delay;
  out["extremum_kind"] = to_string(s.kind);
  out["visibility"] = s.visibility;
  out["baseline_window_s"] = {window.inner, window.outer};
  out["baseline_samples"] = s.baseline_samples;
  out["window_overlaps_feature"] = s.window_overlaps_feature;
  try {
    out["feature_width_s"] = feature_width(trace, window);
  } catch (const ValidationError&) {
    out["feature_width_s"] = nullptr;
  }
  return out;
}

}  // namespace

Jsa configured_state(const RunConfig& config) {
  return assemble(config, config.pump, config.delay);
}

std::vector<double> configured_delays(const RunConfig& config) {
  double effective = config.phase_match.bandwidth;
  if (config.filter) {
    effective = std::min(effective, config.filter->bandwidth);
  }
  const double width = 4.0 * kSincHalfIntensity / effective;
  const double lo = config.hom.delay_min.value_or(-12.0 * width);
  const double hi = config.hom.delay_max.value_or(12.0 * width);
  if (!(hi > lo)) {
    throw ValidationError("hom: delay_max must exceed delay_min");
  }
  return uniform_delays(lo, hi, config.hom.delay_points);
}

CommandResult run_jsi(const RunConfig& config, const std::filesystem::path& out_dir) {
  const Jsa state = configured_state(config);
  const std::vector<double> intensity = jsi(state);
  const std::vector<double> minus = state.grid().minus.coordinates();

  std::string csv = provenance(config);
  json meta;
  if (!state.grid().is_2d()) {
    std::vector<double> re(intensity.size());
    std::vector<double> im(intensity.size());
    for (std::size_t i = 0; i < intensity.size(); ++i) {
      re[i] = state.at(0, i).real();
      im[i] = state.at(0, i).imag();
    }
    csv += csv_columns({"omega_minus_rad_per_s", "jsi", "re_jsa", "im_jsa"},
                       {minus, intensity, re, im});
    try {
      meta["peak_count"] = count_comb_peaks(intensity, 0.01);
    } catch (const ValidationError&) {
      meta["peak_count"] = nullptr;
    }
  } else {
    // Row-major matrix: first row holds omega_minus, first column omega_plus.
    csv += "omega_plus_rad_per_s\\omega_minus_rad_per_s";
    for (double w : minus) {
      csv += "," + format_number(w);
    }
    csv += '\n';
    for (std::size_t r = 0; r < state.rows(); ++r) {
      csv += format_number(state.omega_plus(r));
      for (std::size_t c = 0; c < state.columns(); ++c) {
        csv += "," + format_number(intensity[r * state.columns() + c]);
      }
      csv += '\n';
    }
  }

  const SymmetryReport sym = symmetry_report(state, config.cavity, class_tolerance(config));
  meta["mode"] = state.grid().is_2d() ? "broadband" : "monochromatic";
  meta["rows"] = state.rows();
  meta["columns"] = state.columns();
  meta["norm_squared"] = state.norm_squared();
  meta["pump_frequency_rad_per_s"] = state.pump_frequency();
  meta["pump_class"] = class_json(sym.pump_class);
  meta["exchange_overlap"] = complex_json(sym.exchange_overlap);
  meta["symmetry"] = to_string(sym.label);
  json factors = json::array();
  for (const auto& f : state.factors()) {
    factors.push_back({{"kind", to_string(f.kind)}, {"value", f.value}, {"detail", f.detail}});
  }
  meta["factors"] = factors;

  CommandResult result;
  result.files = {out_dir / "jsi.csv", out_dir / "jsi_meta.json"};
  write_text_file(result.files[0], csv);
  write_text_file(result.files[1], dump(meta));
  result.report = meta;
  return result;
}

CommandResult run_hom(const RunConfig& config, const std::filesystem::path& out_dir) {
  const Jsa state = configured_state(config);
  const std::vector<double> delays = configured_delays(config);
  HomTrace trace = coincidence_trace(state, delays);
  json report = feature_json(trace);
  trace.baseline = report["baseline"].get<double>();

  std::vector<double> normalized(trace.p_coincidence.size());
  for (std::size_t i = 0; i < normalized.size(); ++i) {
    normalized[i] = trace.p_coincidence[i] / trace.baseline;
  }
  const SymmetryReport sym = symmetry_report(state, config.cavity, class_tolerance(config));
  report["exchange_overlap"] = complex_json(sym.exchange_overlap);
  report["symmetry"] = to_string(sym.label);
  report["pump_class"] = class_json(sym.pump_class);
  report["delay_s"] = config.delay;

  CommandResult result;
  result.files = {out_dir / "hom_trace.csv", out_dir / "hom_report.json"};
  write_text_file(result.files[0],
                  provenance(config) + csv_columns({"tau_s", "p_coincidence", "p_normalized"},
                                                   {trace.delays, trace.p_coincidence, normalized}));
  if (config.pairs_per_bin) {
    const std::vector<double> counts = simulate_counts(trace, *config.pairs_per_bin, config.seed);
    result.files.push_back(out_dir / "hom_counts.csv");
    write_text_file(result.files.back(),
                    provenance(config) + csv_columns({"tau_s", "counts"}, {trace.delays, counts}));
    report["pairs_per_bin"] = *config.pairs_per_bin;
    report["seed"] = config.seed;
  }
  write_text_file(result.files[1], dump(report));
  result.report = report;
  return result;
}

CommandResult run_sweep(const RunConfig& config, const std::filesystem::path& out_dir) {
  if (config.sweep.steps < 2) {
    throw ValidationError("sweep: steps must be at least 2");
  }
  if (config.pump.mode != PumpMode::Monochromatic) {
    throw ValidationError("sweep: needs a monochromatic pump");
  }
  const double fsr = config.cavity.fsr;
  const double tau = units::kPi / fsr;
  const std::vector<double> delays = configured_delays(config);
  const std::size_t n = config.sweep.steps;

  struct Row {
    double detuning = 0.0;
    Complex overlap;
    double visibility = std::nan("");
    std::string kind = "none";
  };
  auto evaluate = [&](std::size_t i) {
    Row row;
    const double frac = config.sweep.detuning_min_fsr +
                        (config.sweep.detuning_max_fsr - config.sweep.detuning_min_fsr) *
                            static_cast<double>(i) / static_cast<double>(n - 1);
    row.detuning = frac * fsr;
    PumpSpec pump = config.pump;
    pump.center_frequency = resonant_pump_frequency(config.cavity, config.pump.center_frequency, row.detuning);
    const Jsa state = assemble(config, pump, tau);
    row.overlap = exchange_overlap(state);
    try {
      const FeatureSummary s = analyze_feature(coincidence_trace(state, delays));
      row.visibility = s.visibility;
      row.kind = to_string(s.kind);
    } catch (const ValidationError&) {
    }
    return row;
  };
  // The trace evaluation is already parallel, so rows are computed in order.
  std::vector<Row> rows;
  rows.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    rows.push_back(evaluate(i));
  }

  std::string csv = provenance(config) + "detuning_rad_per_s,detuning_fsr,re_s,im_s,visibility,extremum_kind\n";
  bool positive = false;
  bool negative = false;
  json table = json::array();
  for (const Row& r : rows) {
    csv += format_number(r.detuning) + "," + format_number(r.detuning / fsr) + "," +
           format_number(r.overlap.real()) + "," + format_number(r.overlap.imag()) + "," +
           format_number(r.visibility) + "," + r.kind + "\n";
    positive = positive || r.overlap.real() > 0.0;
    negative = negative || r.overlap.real() < 0.0;
  }
  json summary = {
      {"delay_s", tau},
      {"steps", n},
      {"sign_flip", positive && negative},
      {"re_s_min", std::min_element(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
                     return a.overlap.real() < b.overlap.real();
                   })->overlap.real()},
      {"re_s_max", std::max_element(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
                     return a.overlap.real() < b.overlap.real();
                   })->overlap.real()},
  };

  CommandResult result;
  result.files = {out_dir / "sweep.csv", out_dir / "sweep_summary.json"};
  write_text_file(result.files[0], csv);
  write_text_file(result.files[1], dump(summary));
  result.report = summary;
  return result;
}

CommandResult run_fit(const RunConfig& config, const std::filesystem::path& data,
                      const std::filesystem::path& out_dir) {
  const CountsData counts = read_counts_csv(data);

  FitProblem problem;
  problem.delays = counts.delays;
  problem.counts = counts.counts;
  problem.model.pump = config.pump;
  problem.model.shape = config.phase_match.shape;
  problem.model.cavity = config.cavity;
  problem.model.grid = checked_grid(config);
  problem.model.delay = config.delay;
  problem.model.filter = config.filter;
  problem.poisson_weights = config.fit.poisson_weights;

  const double mean = counts.counts.empty()
                          ? 0.0
                          : std::accumulate(counts.counts.begin(), counts.counts.end(), 0.0) /
                                static_cast<double>(counts.counts.size());
  problem.initial = {config.phase_match.bandwidth, config.phase_match.walkoff,
                     config.phase_match.dispersion, config.fit.initial_amplitude.value_or(2.0 * mean),
                     config.fit.initial_offset.value_or(0.0)};
  problem.bounds = default_bounds(problem.initial, problem.counts);
  for (std::size_t i = 0; i < kFitParameterCount; ++i) {
    if (config.fit.bounds[i]) {
      problem.bounds[i] = *config.fit.bounds[i];
    }
  }

  FitOptions options;
  options.starts = config.fit.starts;
  options.seed = config.seed;
  options.optimizer.max_iterations = config.fit.max_iterations;
  options.optimizer.x_tolerance = config.fit.x_tolerance;

  auto to_json = [&](const FitResult& r) {
    json parameters = json::object();
    json half_width = json::object();
    json at_bound = json::object();
    for (std::size_t i = 0; i < kFitParameterCount; ++i) {
      const char* name = to_string(FitParameter{i});
      parameters[name] = r.parameters[i];
      half_width[name] = r.half_width[i];
      at_bound[name] = r.at_bound[i];
    }
    json out = {
        {"parameters", parameters},
        {"residual", r.residual},
        {"converged", r.converged},
        {"iterations", r.iterations},
        {"evaluations", r.evaluations},
        {"best_start", r.best_start},
        {"converged_starts", r.converged_starts},
        {"half_width", half_width},
        {"at_bound", at_bound},
    };
    const BandwidthReport b =
        bandwidth_report(r.parameters[static_cast<std::size_t>(FitParameter::Bandwidth)],
                         config.center_wavelength);
    out["bandwidth"] = {
        {"delta_omega_minus_rad_per_s", b.delta_omega_minus},
        {"delta_omega_signal_idler_rad_per_s", b.delta_omega_signal_idler},
        {"delta_lambda_signal_idler_m", b.delta_lambda_signal_idler},
        {"center_wavelength_m", b.center_wavelength},
    };
    return out;
  };

  CommandResult result;
  result.files = {out_dir / "fit.json"};
  try {
    const FitResult fit = fit_hom_trace(problem, options);
    result.report = to_json(fit);
  } catch (const NonConvergenceError& e) {
    json out = to_json(e.best_effort());
    out["converged"] = false;
    out["error"] = e.what();
    write_text_file(result.files[0], dump(out));
    throw;
  }
  write_text_file(result.files[0], dump(result.report));
  return result;
}

}  // namespace qcomb
