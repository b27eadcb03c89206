#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "qcomb/biphoton.hpp"
#include "qcomb/estimation.hpp"

namespace qcomb {

struct GridSettings {
  std::optional<std::size_t> points;       // omega_minus samples
  std::optional<double> span;              // rad/s
  std::optional<std::size_t> plus_points;  // omega_plus samples (broadband only)
  std::optional<double> plus_span;         // rad/s

  bool operator==(const GridSettings&) const = default;
};

struct HomSettings {
  std::optional<double> delay_min;  // s
  std::optional<double> delay_max;  // s
  std::size_t delay_points = 1201;

  bool operator==(const HomSettings&) const = default;
};

struct SweepSettings {
  double detuning_min_fsr = 0.0;
  double detuning_max_fsr = 2.0;
  std::size_t steps = 9;

  bool operator==(const SweepSettings&) const = default;
};

struct FitSettings {
  std::optional<std::string> data_path;
  std::optional<double> initial_amplitude;
  std::optional<double> initial_offset;
  std::array<std::optional<ParameterBounds>, kFitParameterCount> bounds{};
  std::size_t starts = 8;
  std::size_t max_iterations = 2000;
  double x_tolerance = 1e-9;
  bool poisson_weights = false;

  bool operator==(const FitSettings& o) const;
};

struct RunConfig {
  PumpSpec pump;
  PhaseMatchSpec phase_match;
  CavitySpec cavity;
  GridSettings grid;
  double delay = 0.0;  // s, relative photon delay tau
  std::optional<FilterSpec> filter;
  HomSettings hom;
  SweepSettings sweep;
  FitSettings fit;
  std::optional<double> pairs_per_bin;  // synthetic counts from `hom`
  double center_wavelength = 1530e-9;   // m, for bandwidth reports
  double class_tolerance_fsr = 0.05;    // pump classification tolerance / fsr
  std::string output_dir = "out";
  std::uint64_t seed = 1;

  bool operator==(const RunConfig&) const = default;
};

/// Parses a JSON configuration document. Frequencies may be given with any of
/// the suffixes _rad_per_s, _hz, _khz, _mhz, _ghz, _thz; times with _s, _ps,
/// _fs. Unknown keys, missing required keys and two encodings of one field
/// are rejected with the key path in the message.
RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::string& path);

/// Canonical JSON (rad/s and seconds) such that parse_config(emit) == config.
nlohmann::json emit_config_json(const RunConfig& config);
std::string emit_config(const RunConfig& config);

/// 64-bit FNV-1a of the canonical configuration, as 16 hex digits.
std::string config_hash(const RunConfig& config);

/// Sampling grid for the configured state: explicit settings win, otherwise
/// the span covers +-4 phase-matching bandwidths and the step resolves the
/// cavity linewidth.
SpectralGrid make_grid(const RunConfig& config);

}  // namespace qcomb
