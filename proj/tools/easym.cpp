// easym: batch runner for entanglement-asymmetry experiments.
#include <cstdio>
#include <iostream>

#include "CLI11.hpp"
#include "easym/experiment.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

easym::ExperimentConfig load(const std::string& source) {
  constexpr std::string_view prefix = "preset:";
  if (source.rfind(prefix, 0) == 0) {
    return easym::parse_config(easym::find_preset(source.substr(prefix.size())).config_json);
  }
  return easym::load_config(source);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"easym: entanglement asymmetry and charge variance dynamics"};
  app.set_version_flag("--version", std::string(easym::kVersion));
  app.require_subcommand(1);

  std::string source, out_dir;
  std::optional<std::uint64_t> seed;
  int threads = 1;
  bool no_timestamp = false;
  auto* run = app.add_subcommand("run", "run an experiment config (a file path or preset:NAME)");
  run->add_option("config", source, "config file or preset:NAME")->required();
  run->add_option("--out", out_dir, "output directory")->required();
  run->add_option("--seed", seed, "override circuit.master_seed");
  run->add_option("--threads", threads, "worker threads (0 = hardware concurrency)")->check(CLI::NonNegativeNumber);
  run->add_flag("--no-timestamp", no_timestamp, "omit wall-clock time from summary.json");

  std::string show;
  auto* list = app.add_subcommand("presets", "list the figure recipes");
  list->add_option("--show", show, "print the config of one preset");

  CLI11_PARSE(app, argc, argv);

  try {
    if (list->parsed()) {
      if (!show.empty()) {
        std::cout << easym::find_preset(show).config_json << "\n";
        return 0;
      }
      for (const auto& p : easym::presets()) std::cout << p.name << "\t" << p.description << "\n";
      return 0;
    }
    const auto config = load(source);
    easym::RunOptions options;
    options.threads = threads;
    options.seed = seed;
    options.timestamp = !no_timestamp;
    const auto record = easym::run_experiment(config, options);
    easym::write_result(record, out_dir);
    std::cerr << "wrote " << record.files.size() + 1 << " files to " << out_dir << "\n";
    return 0;
  } catch (const easym::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const easym::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
