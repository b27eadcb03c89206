#include "qcomb/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <utility>
#include <vector>

#include "qcomb/errors.hpp"
#include "qcomb/units.hpp"

namespace qcomb {
namespace {

using nlohmann::json;

struct Suffix {
  const char* name;
  double scale;
};

constexpr Suffix kFrequencySuffixes[] = {
    {"rad_per_s", 1.0},          {"hz", units::kTwoPi},        {"khz", units::kTwoPi * 1e3},
    {"mhz", units::kTwoPi * 1e6}, {"ghz", units::kTwoPi * 1e9}, {"thz", units::kTwoPi * 1e12},
};
constexpr Suffix kTimeSuffixes[] = {{"s", 1.0}, {"ps", 1e-12}, {"fs", 1e-15}};
constexpr Suffix kWavelengthSuffixes[] = {{"m", 1.0}, {"nm", 1e-9}};

// Walks one JSON object, remembering which keys were read so that the rest
// can be reported as unknown.
class Section {
 public:
  Section(const json* node, std::string path, std::vector<std::string>& missing)
      : node_(node), path_(std::move(path)), missing_(missing) {
    if (node_ && !node_->is_object()) {
      throw ValidationError("configuration: '" + path_ + "' must be an object");
    }
  }

  bool present() const { return node_ != nullptr; }

  const json* find(const std::string& key) {
    if (!node_) {
      return nullptr;
    }
    auto it = node_->find(key);
    if (it == node_->end()) {
      return nullptr;
    }
    used_.insert(key);
    return &*it;
  }

  std::string key_path(const std::string& key) const {
    return path_.empty() ? key : path_ + "." + key;
  }

  double number(const std::string& key, const json& value) const {
    if (!value.is_number()) {
      throw ValidationError("configuration: '" + key_path(key) + "' must be a number");
    }
    return value.get<double>();
  }

  std::optional<double> optional_number(const std::string& key) {
    const json* v = find(key);
    return v ? std::optional<double>(number(key, *v)) : std::nullopt;
  }

  double required_number(const std::string& key) {
    auto v = optional_number(key);
    if (!v) {
      missing_.push_back(key_path(key));
      return 0.0;
    }
    return *v;
  }

  std::optional<std::size_t> optional_count(const std::string& key) {
    const json* v = find(key);
    if (!v) {
      return std::nullopt;
    }
    if (!v->is_number_integer() || v->get<long long>() < 0) {
      throw ValidationError("configuration: '" + key_path(key) + "' must be a non-negative integer");
    }
    return v->get<std::size_t>();
  }

  std::optional<bool> optional_bool(const std::string& key) {
    const json* v = find(key);
    if (!v) {
      return std::nullopt;
    }
    if (!v->is_boolean()) {
      throw ValidationError("configuration: '" + key_path(key) + "' must be true or false");
    }
    return v->get<bool>();
  }

  std::optional<std::string> optional_string(const std::string& key) {
    const json* v = find(key);
    if (!v) {
      return std::nullopt;
    }
    if (!v->is_string()) {
      throw ValidationError("configuration: '" + key_path(key) + "' must be a string");
    }
    return v->get<std::string>();
  }

  /// Reads `base_<suffix>` for exactly one suffix of the family.
  template <std::size_t N>
  std::optional<double> quantity(const std::string& base, const Suffix (&family)[N],
                                 std::vector<std::string> also_conflicting = {}) {
    std::optional<double> value;
    std::vector<std::string> found;
    for (const Suffix& s : family) {
      const std::string key = base + "_" + s.name;
      if (const json* v = find(key)) {
        found.push_back(key);
        value = number(key, *v) * s.scale;
      }
    }
    for (const auto& key : also_conflicting) {
      if (node_ && node_->contains(key)) {
        found.push_back(key);
      }
    }
    if (found.size() > 1) {
      std::string list;
      for (const auto& k : found) {
        list += (list.empty() ? "" : ", ") + key_path(k);
      }
      throw ValidationError("configuration: unit ambiguity, one field given as " + list);
    }
    return value;
  }

  template <std::size_t N>
  double required_quantity(const std::string& base, const Suffix (&family)[N]) {
    auto v = quantity(base, family);
    if (!v) {
      missing_.push_back(key_path(base) + "_<unit>");
      return 0.0;
    }
    return *v;
  }

  Section child(const std::string& key) {
    return Section(find(key), key_path(key), missing_);
  }

  void reject_unknown() const {
    if (!node_) {
      return;
    }
    for (auto it = node_->begin(); it != node_->end(); ++it) {
      if (!used_.count(it.key())) {
        throw ValidationError("configuration: unknown key '" + key_path(it.key()) + "'");
      }
    }
  }

 private:
  const json* node_;
  std::string path_;
  std::vector<std::string>& missing_;
  std::set<std::string> used_;
};

PumpMode parse_pump_mode(const std::string& s) {
  if (s == "monochromatic") return PumpMode::Monochromatic;
  if (s == "gaussian" || s == "broadband") return PumpMode::GaussianBroadband;
  throw ValidationError("configuration: pump.mode must be 'monochromatic' or 'gaussian'");
}

PhaseMatchShape parse_shape(const std::string& s) {
  if (s == "sinc") return PhaseMatchShape::Sinc;
  if (s == "gaussian") return PhaseMatchShape::Gaussian;
  throw ValidationError("configuration: phase_match.shape must be 'sinc' or 'gaussian'");
}

FilterShape parse_filter_shape(const std::string& s) {
  if (s == "tophat") return FilterShape::TopHat;
  if (s == "gaussian") return FilterShape::Gaussian;
  throw ValidationError("configuration: filter.shape must be 'tophat' or 'gaussian'");
}

std::uint64_t fnv1a(std::string_view data) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace

bool FitSettings::operator==(const FitSettings& o) const {
  const auto same_bounds = [&](std::size_t i) {
    if (bounds[i].has_value() != o.bounds[i].has_value()) return false;
    return !bounds[i] || (bounds[i]->lower == o.bounds[i]->lower && bounds[i]->upper == o.bounds[i]->upper);
  };
  for (std::size_t i = 0; i < kFitParameterCount; ++i) {
    if (!same_bounds(i)) return false;
  }
  return data_path == o.data_path && initial_amplitude == o.initial_amplitude &&
         initial_offset == o.initial_offset && starts == o.starts &&
         max_iterations == o.max_iterations && x_tolerance == o.x_tolerance &&
         poisson_weights == o.poisson_weights;
}

RunConfig parse_config(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("malformed configuration document: ") + e.what());
  }
  if (!doc.is_object()) {
    throw ValidationError("malformed configuration document: top level must be an object");
  }

  std::vector<std::string> missing;
  Section root(&doc, "", missing);
  RunConfig cfg;

  // Cavity first: the pump may be placed relative to its resonances.
  Section cavity = root.child("cavity");
  cfg.cavity.fsr = cavity.required_quantity("fsr", kFrequencySuffixes);
  {
    auto both = cavity.optional_number("reflectivity");
    auto rs = cavity.optional_number("reflectivity_signal");
    auto ri = cavity.optional_number("reflectivity_idler");
    if (both && (rs || ri)) {
      throw ValidationError(
          "configuration: unit ambiguity, cavity.reflectivity given together with "
          "cavity.reflectivity_signal/idler");
    }
    if (both) {
      rs = ri = both;
    }
    if (!rs) missing.push_back(cavity.key_path("reflectivity_signal"));
    if (!ri) missing.push_back(cavity.key_path("reflectivity_idler"));
    cfg.cavity.reflectivity_signal = rs.value_or(0.0);
    cfg.cavity.reflectivity_idler = ri.value_or(0.0);
  }
  cfg.cavity.resonance_offset =
      cavity.quantity("resonance_offset", kFrequencySuffixes).value_or(0.0);
  cavity.reject_unknown();

  Section pump = root.child("pump");
  if (auto mode = pump.optional_string("mode")) {
    cfg.pump.mode = parse_pump_mode(*mode);
  }
  cfg.pump.center_frequency = pump.required_quantity("center", kFrequencySuffixes);
  cfg.pump.linewidth = pump.quantity("linewidth", kFrequencySuffixes).value_or(0.0);
  const auto detuning_fsr = pump.optional_number("detuning_fsr");
  pump.reject_unknown();

  Section pm = root.child("phase_match");
  cfg.phase_match.bandwidth = pm.required_quantity("bandwidth", kFrequencySuffixes);
  const auto degeneracy = pm.quantity("degeneracy", kFrequencySuffixes);
  cfg.phase_match.walkoff = pm.quantity("walkoff", kTimeSuffixes).value_or(0.0);
  cfg.phase_match.dispersion = pm.optional_number("dispersion_s2").value_or(0.0);
  if (auto shape = pm.optional_string("shape")) {
    cfg.phase_match.shape = parse_shape(*shape);
  }
  pm.reject_unknown();

  Section grid = root.child("grid");
  cfg.grid.points = grid.optional_count("points");
  cfg.grid.span = grid.quantity("span", kFrequencySuffixes);
  cfg.grid.plus_points = grid.optional_count("plus_points");
  cfg.grid.plus_span = grid.quantity("plus_span", kFrequencySuffixes);
  grid.reject_unknown();

  {
    auto tau = root.quantity("delay", kTimeSuffixes, {"delay_half_round_trips"});
    auto half_trips = root.optional_number("delay_half_round_trips");
    if (half_trips) {
      tau = *half_trips * units::kPi / (cfg.cavity.fsr > 0.0 ? cfg.cavity.fsr : 1.0);
    }
    cfg.delay = tau.value_or(0.0);
  }

  std::optional<double> center_wavelength = root.quantity("center_wavelength", kWavelengthSuffixes);
  if (center_wavelength) {
    cfg.center_wavelength = *center_wavelength;
  }

  Section filter = root.child("filter");
  std::optional<double> filter_center;
  std::optional<double> filter_center_wavelength;
  std::optional<double> filter_band;
  std::optional<double> filter_band_wavelength;
  std::optional<std::string> filter_shape;
  if (filter.present()) {
    filter_shape = filter.optional_string("shape");
    filter_band = filter.quantity("bandwidth", kFrequencySuffixes, {"bandwidth_nm", "bandwidth_m"});
    filter_band_wavelength = filter.quantity("bandwidth", kWavelengthSuffixes);
    filter_center =
        filter.quantity("center", kFrequencySuffixes, {"center_wavelength_nm", "center_wavelength_m"});
    filter_center_wavelength = filter.quantity("center_wavelength", kWavelengthSuffixes);
    if (!filter_band && !filter_band_wavelength) {
      missing.push_back(filter.key_path("bandwidth_<unit>"));
    }
  }
  filter.reject_unknown();

  Section hom = root.child("hom");
  cfg.hom.delay_min = hom.quantity("delay_min", kTimeSuffixes);
  cfg.hom.delay_max = hom.quantity("delay_max", kTimeSuffixes);
  if (auto n = hom.optional_count("delay_points")) cfg.hom.delay_points = *n;
  hom.reject_unknown();

  Section sweep = root.child("sweep");
  if (auto v = sweep.optional_number("detuning_min_fsr")) cfg.sweep.detuning_min_fsr = *v;
  if (auto v = sweep.optional_number("detuning_max_fsr")) cfg.sweep.detuning_max_fsr = *v;
  if (auto n = sweep.optional_count("steps")) cfg.sweep.steps = *n;
  sweep.reject_unknown();

  Section fit = root.child("fit");
  cfg.fit.data_path = fit.optional_string("data_path");
  cfg.fit.initial_amplitude = fit.optional_number("initial_amplitude");
  cfg.fit.initial_offset = fit.optional_number("initial_offset");
  if (auto n = fit.optional_count("starts")) cfg.fit.starts = *n;
  if (auto n = fit.optional_count("max_iterations")) cfg.fit.max_iterations = *n;
  if (auto v = fit.optional_number("x_tolerance")) cfg.fit.x_tolerance = *v;
  if (auto b = fit.optional_bool("poisson_weights")) cfg.fit.poisson_weights = *b;
  {
    Section bounds = fit.child("bounds");
    for (std::size_t i = 0; i < kFitParameterCount; ++i) {
      const char* name = to_string(FitParameter{i});
      if (const json* v = bounds.find(name)) {
        if (!v->is_array() || v->size() != 2 || !(*v)[0].is_number() || !(*v)[1].is_number()) {
          throw ValidationError("configuration: '" + bounds.key_path(name) +
                                "' must be a [lower, upper] pair");
        }
        cfg.fit.bounds[i] = ParameterBounds{(*v)[0].get<double>(), (*v)[1].get<double>()};
      }
    }
    bounds.reject_unknown();
  }
  fit.reject_unknown();

  Section synthetic = root.child("synthetic");
  cfg.pairs_per_bin = synthetic.optional_number("pairs_per_bin");
  synthetic.reject_unknown();

  if (auto v = root.optional_number("class_tolerance_fsr")) cfg.class_tolerance_fsr = *v;
  if (auto dir = root.optional_string("output_dir")) cfg.output_dir = *dir;
  if (const json* seed = root.find("seed")) {
    if (!seed->is_number_unsigned()) {
      throw ValidationError("configuration: 'seed' must be a non-negative integer");
    }
    cfg.seed = seed->get<std::uint64_t>();
  }
  root.reject_unknown();

  if (!missing.empty()) {
    std::string list;
    for (const auto& k : missing) {
      list += (list.empty() ? "" : ", ") + k;
    }
    throw ValidationError("configuration: missing required keys: " + list);
  }

  cfg.cavity.validate();
  if (detuning_fsr) {
    cfg.pump.center_frequency =
        resonant_pump_frequency(cfg.cavity, cfg.pump.center_frequency, *detuning_fsr * cfg.cavity.fsr);
  }
  cfg.phase_match.degeneracy_frequency = degeneracy.value_or(cfg.pump.center_frequency);

  if (filter.present()) {
    FilterSpec f;
    f.shape = filter_shape ? parse_filter_shape(*filter_shape) : FilterShape::TopHat;
    if (filter_center_wavelength) {
      f.center = units::angular_frequency_of_wavelength(*filter_center_wavelength);
    } else {
      f.center = filter_center.value_or(0.5 * cfg.pump.center_frequency);
    }
    if (filter_band) {
      f.bandwidth = *filter_band;
    } else {
      const double lambda = filter_center_wavelength.value_or(
          units::kTwoPi * units::kSpeedOfLight / f.center);
      f.bandwidth = units::angular_width_of_wavelength_band(*filter_band_wavelength, lambda);
    }
    f.validate();
    cfg.filter = f;
  }

  cfg.pump.validate();
  cfg.phase_match.validate();
  if (cfg.grid.points && *cfg.grid.points < 3) {
    throw ValidationError("configuration: grid.points must be at least 3");
  }
  if (cfg.hom.delay_points < 2) {
    throw ValidationError("configuration: hom.delay_points must be at least 2");
  }
  if (!(cfg.class_tolerance_fsr > 0.0 && cfg.class_tolerance_fsr < 0.25)) {
    throw ValidationError("configuration: class_tolerance_fsr must lie in (0, 0.25)");
  }
  if (!(cfg.center_wavelength > 0.0)) {
    throw ValidationError("configuration: center wavelength must be positive");
  }
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open configuration file '" + path + "'");
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

json emit_config_json(const RunConfig& c) {
  json doc;
  doc["pump"] = {
      {"mode", c.pump.mode == PumpMode::Monochromatic ? "monochromatic" : "gaussian"},
      {"center_rad_per_s", c.pump.center_frequency},
      {"linewidth_rad_per_s", c.pump.linewidth},
  };
  doc["phase_match"] = {
      {"bandwidth_rad_per_s", c.phase_match.bandwidth},
      {"degeneracy_rad_per_s", c.phase_match.degeneracy_frequency},
      {"walkoff_s", c.phase_match.walkoff},
      {"dispersion_s2", c.phase_match.dispersion},
      {"shape", c.phase_match.shape == PhaseMatchShape::Sinc ? "sinc" : "gaussian"},
  };
  doc["cavity"] = {
      {"fsr_rad_per_s", c.cavity.fsr},
      {"reflectivity_signal", c.cavity.reflectivity_signal},
      {"reflectivity_idler", c.cavity.reflectivity_idler},
      {"resonance_offset_rad_per_s", c.cavity.resonance_offset},
  };
  json grid = json::object();
  if (c.grid.points) grid["points"] = *c.grid.points;
  if (c.grid.span) grid["span_rad_per_s"] = *c.grid.span;
  if (c.grid.plus_points) grid["plus_points"] = *c.grid.plus_points;
  if (c.grid.plus_span) grid["plus_span_rad_per_s"] = *c.grid.plus_span;
  doc["grid"] = grid;
  doc["delay_s"] = c.delay;
  if (c.filter) {
    doc["filter"] = {
        {"shape", c.filter->shape == FilterShape::TopHat ? "tophat" : "gaussian"},
        {"center_rad_per_s", c.filter->center},
        {"bandwidth_rad_per_s", c.filter->bandwidth},
    };
  }
  json hom = {{"delay_points", c.hom.delay_points}};
  if (c.hom.delay_min) hom["delay_min_s"] = *c.hom.delay_min;
  if (c.hom.delay_max) hom["delay_max_s"] = *c.hom.delay_max;
  doc["hom"] = hom;
  doc["sweep"] = {
      {"detuning_min_fsr", c.sweep.detuning_min_fsr},
      {"detuning_max_fsr", c.sweep.detuning_max_fsr},
      {"steps", c.sweep.steps},
  };
  json fit = {
      {"starts", c.fit.starts},
      {"max_iterations", c.fit.max_iterations},
      {"x_tolerance", c.fit.x_tolerance},
      {"poisson_weights", c.fit.poisson_weights},
  };
  if (c.fit.data_path) fit["data_path"] = *c.fit.data_path;
  if (c.fit.initial_amplitude) fit["initial_amplitude"] = *c.fit.initial_amplitude;
  if (c.fit.initial_offset) fit["initial_offset"] = *c.fit.initial_offset;
  json bounds = json::object();
  for (std::size_t i = 0; i < kFitParameterCount; ++i) {
    if (c.fit.bounds[i]) {
      bounds[to_string(FitParameter{i})] = {c.fit.bounds[i]->lower, c.fit.bounds[i]->upper};
    }
  }
  if (!bounds.empty()) fit["bounds"] = bounds;
  doc["fit"] = fit;
  if (c.pairs_per_bin) doc["synthetic"] = {{"pairs_per_bin", *c.pairs_per_bin}};
  doc["center_wavelength_m"] = c.center_wavelength;
  doc["class_tolerance_fsr"] = c.class_tolerance_fsr;
  doc["output_dir"] = c.output_dir;
  doc["seed"] = c.seed;
  return doc;
}

std::string emit_config(const RunConfig& config) {
  return emit_config_json(config).dump(2);
}

std::string config_hash(const RunConfig& config) {
  std::ostringstream os;
  os << std::hex;
  os.width(16);
  os.fill('0');
  os << fnv1a(emit_config_json(config).dump());
  return os.str();
}

SpectralGrid make_grid(const RunConfig& c) {
  const double bandwidth = c.phase_match.bandwidth;
  const double span = c.grid.span.value_or(8.0 * bandwidth);

  // Finest scale to resolve: the cavity linewidth or, without a cavity, the
  // phase-matching bandwidth.
  double scale = bandwidth / 8.0;
  for (Polarization p : {Polarization::Signal, Polarization::Idler}) {
    const double r = p == Polarization::Signal ? c.cavity.reflectivity_signal
                                               : c.cavity.reflectivity_idler;
    if (r <= 0.0) {
      continue;
    }
    const double width = (1.0 - r) / (2.0 * std::sqrt(r)) <= 1.0 ? linewidth(c.cavity, p) : c.cavity.fsr;
    scale = std::min(scale, width);
  }
  const auto points_for = [&](double axis_span) {
    return odd_power_of_two_points(static_cast<std::size_t>(std::ceil(axis_span / (scale / 8.0))) + 1);
  };
  const std::size_t points = c.grid.points.value_or(points_for(span));

  if (c.pump.mode == PumpMode::Monochromatic) {
    return SpectralGrid::one_d(span, points);
  }
  const double plus_span = c.grid.plus_span.value_or(6.0 * c.pump.linewidth);
  const std::size_t plus_points = c.grid.plus_points.value_or(points_for(plus_span));
  return SpectralGrid::two_d(c.pump.center_frequency, plus_span, plus_points, span, points);
}

}  // namespace qcomb
