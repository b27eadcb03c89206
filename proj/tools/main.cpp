#include <cstdint>
#include <exception>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "qcomb/commands.hpp"
#include "qcomb/config.hpp"
#include "qcomb/errors.hpp"

namespace {

constexpr int kExitPhysics = 1;
constexpr int kExitIo = 2;

struct Options {
  std::string config;
  std::optional<std::string> out;
  std::optional<std::size_t> points;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> data;
};

void add_common(CLI::App* cmd, Options& o) {
  cmd->add_option("--config", o.config, "JSON configuration file")->required();
  cmd->add_option("--out", o.out, "output directory (overrides output_dir)");
  cmd->add_option("--points", o.points, "omega_minus grid points (overrides grid.points)");
  cmd->add_option("--seed", o.seed, "random seed (overrides seed)");
}

int run(const std::string& command, const Options& o) {
  qcomb::RunConfig config = qcomb::load_config(o.config);
  if (o.points) {
    config.grid.points = *o.points;
  }
  if (o.seed) {
    config.seed = *o.seed;
  }
  const std::filesystem::path out = o.out.value_or(config.output_dir);

  qcomb::CommandResult result;
  if (command == "jsi") {
    result = qcomb::run_jsi(config, out);
  } else if (command == "hom") {
    result = qcomb::run_hom(config, out);
  } else if (command == "sweep") {
    result = qcomb::run_sweep(config, out);
  } else {
    std::filesystem::path data;
    if (o.data) {
      data = *o.data;
    } else if (config.fit.data_path) {
      data = *config.fit.data_path;
      if (data.is_relative()) {
        data = std::filesystem::path(o.config).parent_path() / data;
      }
    } else {
      throw qcomb::ValidationError("fit: no data file (set fit.data_path or pass --data)");
    }
    result = qcomb::run_fit(config, data, out);
  }
  for (const auto& f : result.files) {
    std::cout << f.string() << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qcomb: cavity-filtered biphoton frequency comb simulator"};
  app.require_subcommand(1);
  Options options;
  for (const char* name : {"jsi", "hom", "sweep", "fit"}) {
    CLI::App* cmd = app.add_subcommand(name);
    add_common(cmd, options);
    if (std::string(name) == "fit") {
      cmd->add_option("--data", options.data, "tau_s,counts file (overrides fit.data_path)");
    }
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kExitPhysics;
  }

  try {
    return run(app.get_subcommands().front()->get_name(), options);
  } catch (const qcomb::IoError& e) {
    std::cerr << "qcomb: I/O error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "qcomb: error: " << e.what() << '\n';
    return kExitPhysics;
  }
}
