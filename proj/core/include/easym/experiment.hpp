#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "easym/circuit.hpp"
#include "easym/evolution.hpp"
#include "easym/hamiltonian.hpp"
#include "easym/observables.hpp"
#include "easym/state.hpp"

namespace easym {

enum class Mode { Quench, Circuit, GroundState, Analyze };
enum class Backend { Auto, Spectral, Krylov };

/// Region as written in a config: "third", "quarter", "full" or explicit sites.
struct RegionSpec {
  std::string shorthand = "third";
  std::vector<int> sites;  // used when shorthand == "explicit"

  /// Shorthands take floor(L/3) or floor(L/4) consecutive sites starting at
  /// site 0; for a domain wall the block is centred on the wall.
  Region resolve(int num_sites, Pattern pattern) const;
};

struct LateWindow {
  double t1 = 200.0;
  double t2 = 2000.0;
  int samples = 500;
};

struct TimeGrid {
  double t_max = 20.0;
  double dt = 0.05;
  std::optional<LateWindow> late;
};

struct AnalysisRequest {
  std::string type;  // peak | late-average | crossing | classify | powerlaw | finite-size
  std::optional<std::string> probe;  // defaults to the first probe
  double t1 = 200.0, t2 = 2000.0;     // late-average window
  std::optional<double> partner_theta;
  int min_persistence = 3;
  std::optional<double> horizon;      // classify
  std::vector<double> sweep;          // powerlaw: p_haar values; finite-size: chain lengths
};

/// Inputs of mode=analyze (paths relative to the config file).
struct AnalyzeInput {
  std::string series;
  std::string less_tilted;
  std::string more_tilted;
  std::vector<double> x;
  std::vector<double> y;
};

struct ExperimentConfig {
  std::string name;
  Mode mode = Mode::Quench;
  HamiltonianParams hamiltonian;
  CircuitConfig circuit;
  ProductStateSpec initial;
  RegionSpec region;
  std::vector<ProbeKind> probes;
  TimeGrid time;
  Backend backend = Backend::Auto;
  KrylovConfig krylov;
  std::vector<AnalysisRequest> analysis;
  AnalyzeInput input;
  std::filesystem::path base_dir;  // not echoed

  int num_sites() const { return mode == Mode::Circuit ? circuit.num_sites : hamiltonian.num_sites; }
  void validate() const;
};

/// Parses the JSON config format; throws ConfigError on any problem.
ExperimentConfig parse_config(std::string_view text, std::filesystem::path base_dir = {});
ExperimentConfig load_config(const std::filesystem::path& path);

/// Canonical JSON form; parse_config(config_to_json(c)) reproduces c.
std::string config_to_json(const ExperimentConfig& config);

struct OutputFile {
  std::string name;
  std::string contents;
};

struct ResultRecord {
  std::string summary_json;
  std::vector<OutputFile> files;  // CSVs, written after aggregation
};

struct RunOptions {
  int threads = 1;
  std::optional<std::uint64_t> seed;  // overrides circuit.master_seed
  bool timestamp = true;              // include wall-clock time in the provenance block
};

ResultRecord run_experiment(const ExperimentConfig& config, const RunOptions& options = {});

/// Writes every CSV plus summary.json into `out_dir` (created if needed).
void write_result(const ResultRecord& record, const std::filesystem::path& out_dir);

/// Shortest "%.17g" rendering of a double, used for every CSV field.
std::string format_number(double value);

/// Resolved backend for a quench config.
Backend resolve_backend(const ExperimentConfig& config);

struct Preset {
  std::string name;
  std::string description;
  std::string config_json;
};

const std::vector<Preset>& presets();
const Preset& find_preset(std::string_view name);

inline constexpr std::string_view kVersion = "0.1.0";

}  // namespace easym
