#pragma once

#include <filesystem>
#include <optional>
#include <vector>

#include <nlohmann/json.hpp>

#include "qcomb/config.hpp"
#include "qcomb/hom.hpp"

namespace qcomb {

struct CommandResult {
  std::vector<std::filesystem::path> files;
  nlohmann::json report;
};

/// The configured state: pump, phase matching and cavity assembled on
/// make_grid(config), then filtered, then delayed by config.delay.
Jsa configured_state(const RunConfig& config);

/// HOM delays from config.hom, or +-12 estimated feature widths about zero.
std::vector<double> configured_delays(const RunConfig& config);

/// jsi.csv and jsi_meta.json
CommandResult run_jsi(const RunConfig& config, const std::filesystem::path& out_dir);

/// hom_trace.csv (tau_s,p_coincidence,p_normalized), hom_report.json and,
/// with synthetic.pairs_per_bin set, hom_counts.csv (tau_s,counts).
CommandResult run_hom(const RunConfig& config, const std::filesystem::path& out_dir);

/// Pump detuning sweep of the state delayed by pi / fsr: sweep.csv and
/// sweep_summary.json.
CommandResult run_sweep(const RunConfig& config, const std::filesystem::path& out_dir);

/// Fits the `tau_s,counts` file at `data` and writes fit.json. Non-convergence
/// still writes fit.json (converged = false) before rethrowing.
CommandResult run_fit(const RunConfig& config, const std::filesystem::path& data,
                      const std::filesystem::path& out_dir);

}  // namespace qcomb
