#include "easym/experiment.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <numbers>
#include <sstream>

#include "easym/analysis.hpp"
#include "easym/parallel.hpp"
#include "json.hpp"

namespace easym {

using nlohmann::json;

namespace {

// ---------------------------------------------------------------- parsing

void check_keys(const json& obj, std::initializer_list<std::string_view> allowed, std::string_view where) {
  if (!obj.is_object()) throw ConfigError(std::string(where) + " must be an object");
  for (const auto& [key, value] : obj.items()) {
    bool ok = false;
    for (auto a : allowed) ok = ok || key == a;
    if (!ok) throw ConfigError("unknown key '" + key + "' in " + std::string(where));
  }
}

template <typename T>
T value_or(const json& obj, const char* key, T fallback) {
  if (!obj.contains(key)) return fallback;
  return obj.at(key).get<T>();
}

std::string_view mode_name(Mode m) {
  switch (m) {
    case Mode::Quench: return "quench";
    case Mode::Circuit: return "circuit";
    case Mode::GroundState: return "ground-state";
    case Mode::Analyze: return "analyze";
  }
  return "?";
}

Mode parse_mode(const std::string& s) {
  for (auto m : {Mode::Quench, Mode::Circuit, Mode::GroundState, Mode::Analyze}) {
    if (mode_name(m) == s) return m;
  }
  throw ConfigError("unknown mode '" + s + "' (expected quench, circuit, ground-state or analyze)");
}

std::string_view backend_name(Backend b) {
  switch (b) {
    case Backend::Auto: return "auto";
    case Backend::Spectral: return "spectral";
    case Backend::Krylov: return "krylov";
  }
  return "?";
}

Backend parse_backend(const std::string& s) {
  for (auto b : {Backend::Auto, Backend::Spectral, Backend::Krylov}) {
    if (backend_name(b) == s) return b;
  }
  throw ConfigError("unknown backend '" + s + "'");
}

double parse_angle(const json& obj, const char* radians_key, const char* pi_key, double fallback) {
  if (obj.contains(radians_key) && obj.contains(pi_key)) {
    throw ConfigError(std::string("give either ") + radians_key + " or " + pi_key + ", not both");
  }
  if (obj.contains(pi_key)) return obj.at(pi_key).get<double>() * std::numbers::pi;
  return value_or(obj, radians_key, fallback);
}

ExperimentConfig parse_json(const json& j) {
  check_keys(j, {"name", "mode", "hamiltonian", "circuit", "initial", "region", "probes", "time",
                 "backend", "krylov", "analysis", "input", "resolved"},
             "config");
  ExperimentConfig c;
  c.name = value_or<std::string>(j, "name", "");
  if (!j.contains("mode")) throw ConfigError("config: 'mode' is required");
  c.mode = parse_mode(j.at("mode").get<std::string>());

  if (j.contains("hamiltonian")) {
    const auto& h = j.at("hamiltonian");
    check_keys(h, {"L", "gamma", "delta1", "delta2", "periodic", "delta2_scale"}, "hamiltonian");
    c.hamiltonian.num_sites = value_or(h, "L", c.hamiltonian.num_sites);
    c.hamiltonian.gamma = value_or(h, "gamma", c.hamiltonian.gamma);
    c.hamiltonian.delta1 = value_or(h, "delta1", c.hamiltonian.delta1);
    c.hamiltonian.delta2 = value_or(h, "delta2", c.hamiltonian.delta2);
    c.hamiltonian.periodic = value_or(h, "periodic", c.hamiltonian.periodic);
    c.hamiltonian.delta2_scale = value_or(h, "delta2_scale", c.hamiltonian.delta2_scale);
  } else if (c.mode == Mode::Quench || c.mode == Mode::GroundState) {
    throw ConfigError("config: mode " + std::string(mode_name(c.mode)) + " requires 'hamiltonian'");
  }

  if (j.contains("circuit")) {
    const auto& k = j.at("circuit");
    check_keys(k, {"L", "p_haar", "depth_units", "master_seed", "n_realizations"}, "circuit");
    c.circuit.num_sites = value_or(k, "L", c.circuit.num_sites);
    c.circuit.p_haar = value_or(k, "p_haar", c.circuit.p_haar);
    c.circuit.depth_units = value_or(k, "depth_units", c.circuit.depth_units);
    c.circuit.master_seed = value_or<std::uint64_t>(k, "master_seed", c.circuit.master_seed);
    c.circuit.n_realizations = value_or(k, "n_realizations", c.circuit.n_realizations);
  } else if (c.mode == Mode::Circuit) {
    throw ConfigError("config: mode circuit requires 'circuit'");
  }

  if (j.contains("initial")) {
    const auto& s = j.at("initial");
    check_keys(s, {"pattern", "tilt_angle", "tilt_angle_pi"}, "initial");
    try {
      c.initial.pattern = parse_pattern(value_or<std::string>(s, "pattern", "ferromagnetic"));
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
    c.initial.tilt_angle = parse_angle(s, "tilt_angle", "tilt_angle_pi", 0.0);
  }

  if (j.contains("region")) {
    const auto& r = j.at("region");
    if (r.is_string()) {
      c.region.shorthand = r.get<std::string>();
    } else if (r.is_array()) {
      c.region.shorthand = "explicit";
      c.region.sites = r.get<std::vector<int>>();
    } else {
      throw ConfigError("region must be \"third\", \"quarter\", \"full\" or a list of sites");
    }
  }

  if (j.contains("probes")) {
    for (const auto& p : j.at("probes")) {
      try {
        c.probes.push_back(parse_probe(p.get<std::string>()));
      } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
      }
    }
  }

  if (j.contains("time")) {
    const auto& t = j.at("time");
    check_keys(t, {"t_max", "dt", "late_window"}, "time");
    c.time.t_max = value_or(t, "t_max", c.time.t_max);
    c.time.dt = value_or(t, "dt", c.time.dt);
    if (t.contains("late_window")) {
      const auto& w = t.at("late_window");
      check_keys(w, {"t1", "t2", "samples"}, "time.late_window");
      LateWindow lw;
      lw.t1 = value_or(w, "t1", lw.t1);
      lw.t2 = value_or(w, "t2", lw.t2);
      lw.samples = value_or(w, "samples", lw.samples);
      c.time.late = lw;
    }
  }

  c.backend = parse_backend(value_or<std::string>(j, "backend", "auto"));

  if (j.contains("krylov")) {
    const auto& k = j.at("krylov");
    check_keys(k, {"subspace_dim", "dt", "tolerance"}, "krylov");
    c.krylov.subspace_dim = value_or(k, "subspace_dim", c.krylov.subspace_dim);
    c.krylov.dt = value_or(k, "dt", c.krylov.dt);
    c.krylov.tolerance = value_or(k, "tolerance", c.krylov.tolerance);
  }

  if (j.contains("analysis")) {
    for (const auto& a : j.at("analysis")) {
      AnalysisRequest r;
      if (a.is_string()) {
        r.type = a.get<std::string>();
      } else {
        check_keys(a, {"type", "probe", "window", "partner_theta", "partner_theta_pi", "min_persistence",
                       "horizon", "p_haar", "L"},
                   "analysis entry");
        r.type = a.at("type").get<std::string>();
        if (a.contains("probe")) r.probe = a.at("probe").get<std::string>();
        if (a.contains("window")) {
          const auto w = a.at("window").get<std::vector<double>>();
          if (w.size() != 2) throw ConfigError("analysis window must be [t1, t2]");
          r.t1 = w[0];
          r.t2 = w[1];
        }
        if (a.contains("partner_theta") || a.contains("partner_theta_pi")) {
          r.partner_theta = parse_angle(a, "partner_theta", "partner_theta_pi", 0.0);
        }
        r.min_persistence = value_or(a, "min_persistence", r.min_persistence);
        if (a.contains("horizon")) r.horizon = a.at("horizon").get<double>();
        if (a.contains("p_haar")) r.sweep = a.at("p_haar").get<std::vector<double>>();
        if (a.contains("L")) r.sweep = a.at("L").get<std::vector<double>>();
      }
      c.analysis.push_back(std::move(r));
    }
  }

  if (j.contains("input")) {
    const auto& in = j.at("input");
    check_keys(in, {"series", "less_tilted", "more_tilted", "x", "y"}, "input");
    c.input.series = value_or<std::string>(in, "series", "");
    c.input.less_tilted = value_or<std::string>(in, "less_tilted", "");
    c.input.more_tilted = value_or<std::string>(in, "more_tilted", "");
    c.input.x = value_or<std::vector<double>>(in, "x", {});
    c.input.y = value_or<std::vector<double>>(in, "y", {});
  }
  return c;
}

// ---------------------------------------------------------------- helpers

struct Emitted {
  ProbeRequest request;
  std::vector<double> times;
  std::vector<std::vector<double>> values;
  std::optional<std::vector<std::vector<double>>> std_error;

  TimeSeries series() const {
    std::vector<double> v(values.size());
    for (std::size_t k = 0; k < values.size(); ++k) v[k] = values[k].at(0);
    return TimeSeries(times, std::move(v));
  }
};

std::vector<ProbeRequest> make_requests(const ExperimentConfig& c, int num_sites) {
  const Region region = c.region.resolve(num_sites, c.initial.pattern);
  std::vector<ProbeRequest> out;
  for (auto k : c.probes) out.push_back(ProbeRequest{k, region});
  return out;
}

std::vector<double> time_points(const TimeGrid& grid) {
  auto t = uniform_times(grid.t_max, grid.dt);
  if (grid.late) {
    const auto& w = *grid.late;
    for (int k = 0; k < w.samples; ++k) {
      t.push_back(w.t1 + (w.t2 - w.t1) * static_cast<double>(k) / static_cast<double>(w.samples - 1));
    }
  }
  return t;
}

std::vector<Emitted> run_quench(const ExperimentConfig& c, int num_sites, double theta, int threads) {
  HamiltonianParams params = c.hamiltonian;
  params.num_sites = num_sites;
  const PauliSum h = build_hamiltonian(params);
  const StateVector psi0 = build_initial_state({c.initial.pattern, theta}, num_sites);
  const auto requests = make_requests(c, num_sites);
  const auto times = time_points(c.time);

  ExperimentConfig probe_cfg = c;
  probe_cfg.hamiltonian.num_sites = num_sites;
  std::vector<ProbeSeries> series;
  if (resolve_backend(probe_cfg) == Backend::Spectral) {
    const auto prop = build_spectral(materialize_dense(h, kSpectralCap));
    series = trajectory(prop, psi0, times, requests, threads);
  } else {
    series = trajectory(h, psi0, times, requests, c.krylov);
  }
  std::vector<Emitted> out;
  for (auto& s : series) out.push_back(Emitted{s.request, s.times, std::move(s.samples), std::nullopt});
  return out;
}

std::vector<Emitted> run_circuit(const ExperimentConfig& c, double theta, double p_haar, int threads) {
  CircuitConfig cc = c.circuit;
  cc.p_haar = p_haar;
  const auto ens = ensemble_average(cc, {c.initial.pattern, theta}, make_requests(c, cc.num_sites), threads);
  std::vector<Emitted> out;
  for (const auto& e : ens) {
    out.push_back(Emitted{e.probe, std::vector<double>(e.times.begin(), e.times.end()), e.mean, e.std_error});
  }
  return out;
}

std::string csv_for(const Emitted& e, int num_sites) {
  std::string s;
  const bool multi = e.request.kind == ProbeKind::ChargeDistribution;
  s += multi ? "time,charge,value" : "time,value";
  if (e.std_error) s += ",std_error";
  s += '\n';
  for (std::size_t k = 0; k < e.times.size(); ++k) {
    for (std::size_t ch = 0; ch < e.values[k].size(); ++ch) {
      s += format_number(e.times[k]);
      if (multi) s += "," + std::to_string(-num_sites + 2 * static_cast<int>(ch));
      s += "," + format_number(e.values[k][ch]);
      if (e.std_error) s += "," + format_number((*e.std_error)[k][ch]);
      s += '\n';
    }
  }
  return s;
}

std::size_t target_index(const ExperimentConfig& c, const AnalysisRequest& r) {
  if (!r.probe) return 0;
  const ProbeKind k = parse_probe(*r.probe);
  for (std::size_t i = 0; i < c.probes.size(); ++i) {
    if (c.probes[i] == k) return i;
  }
  throw ConfigError("analysis probe '" + *r.probe + "' is not among the configured probes");
}

json peak_json(const Peak& p) { return json{{"time", p.time}, {"value", p.value}}; }

json crossing_json(const CrossingReport& r, double less, double more) {
  json j{{"crossed", r.crossed}, {"persistence", r.persistence}, {"less_theta", less}, {"more_theta", more}};
  j["t_cross"] = r.crossed ? json(r.t_cross) : json(nullptr);
  return j;
}

TimeSeries read_series_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open series file " + path.string());
  std::string line;
  std::getline(in, line);
  if (line.rfind("time,value", 0) != 0) throw ConfigError(path.string() + ": expected header 'time,value[,std_error]'");
  std::vector<double> t, v;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::string a, b;
    std::getline(ss, a, ',');
    std::getline(ss, b, ',');
    try {
      t.push_back(std::stod(a));
      v.push_back(std::stod(b));
    } catch (const std::exception&) {
      throw ConfigError(path.string() + ": malformed row '" + line + "'");
    }
  }
  try {
    return TimeSeries(std::move(t), std::move(v));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

json run_analyze_mode(const ExperimentConfig& c) {
  json results = json::array();
  auto path_of = [&](const std::string& p) {
    if (p.empty()) throw ConfigError("analyze: missing input path");
    std::filesystem::path fp(p);
    return fp.is_absolute() ? fp : c.base_dir / fp;
  };
  for (const auto& r : c.analysis) {
    json entry{{"type", r.type}};
    if (r.type == "peak") {
      entry["result"] = peak_json(find_peak(read_series_csv(path_of(c.input.series))));
    } else if (r.type == "late-average") {
      const auto w = late_time_average(read_series_csv(path_of(c.input.series)), r.t1, r.t2);
      entry["result"] = json{{"mean", w.mean}, {"std", w.std_dev}, {"samples", w.samples}, {"window", {r.t1, r.t2}}};
    } else if (r.type == "classify") {
      if (!r.horizon) throw ConfigError("analyze: classify needs an explicit horizon");
      const auto g = classify_early_growth(read_series_csv(path_of(c.input.series)), *r.horizon);
      entry["result"] = json{{"class", g == EarlyGrowth::Exceeds ? "exceeds" : "stays-below"}, {"horizon", *r.horizon}};
    } else if (r.type == "crossing") {
      const auto rep = detect_crossing(read_series_csv(path_of(c.input.less_tilted)),
                                       read_series_csv(path_of(c.input.more_tilted)), r.min_persistence);
      entry["result"] = crossing_json(rep, 0.0, 0.0);
      entry["result"].erase("less_theta");
      entry["result"].erase("more_theta");
    } else if (r.type == "powerlaw") {
      const auto fit = power_law_fit(c.input.x, c.input.y);
      entry["result"] = json{{"a", fit.a}, {"b", fit.b}};
    } else if (r.type == "finite-size") {
      const auto fit = linear_fit_extrapolate(c.input.x, c.input.y);
      entry["result"] = json{{"slope", fit.slope}, {"intercept", fit.intercept}};
    }
    results.push_back(std::move(entry));
  }
  return results;
}

}  // namespace

// ---------------------------------------------------------------- public API

Region RegionSpec::resolve(int num_sites, Pattern pattern) const {
  if (shorthand == "explicit") return Region(sites, num_sites);
  if (shorthand == "full") return Region::full(num_sites);
  int count = 0;
  if (shorthand == "third") {
    count = num_sites / 3;
  } else if (shorthand == "quarter") {
    count = num_sites / 4;
  } else {
    throw ConfigError("unknown region shorthand '" + shorthand + "'");
  }
  count = std::max(count, 1);
  const int first = pattern == Pattern::DomainWall ? num_sites / 2 - count / 2 : 0;
  return Region::contiguous(first, count, num_sites);
}

void ExperimentConfig::validate() const {
  auto require = [](bool ok, const std::string& msg) {
    if (!ok) throw ConfigError(msg);
  };
  const bool simulation = mode != Mode::Analyze;
  if (simulation) require(!probes.empty(), "config: probes must be nonempty for mode " + std::string(mode_name(mode)));

  if (mode == Mode::Quench || mode == Mode::GroundState) {
    const auto& h = hamiltonian;
    require(h.num_sites >= 2 && h.num_sites <= 26, "hamiltonian.L must lie in [2, 26]");
    require(!h.periodic || h.num_sites >= 3, "hamiltonian.L must be >= 3 with periodic boundaries");
    require(h.gamma >= 0.0 && h.gamma <= 1.0, "hamiltonian.gamma must lie in [0, 1]");
    require(std::isfinite(h.delta1) && std::isfinite(h.delta2) && std::isfinite(h.delta2_scale),
            "hamiltonian couplings must be finite");
  }
  if (mode == Mode::Circuit) {
    try {
      circuit.validate();
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
    require(circuit.n_realizations >= 2, "circuit.n_realizations must be >= 2");
  }
  if (simulation) {
    const int n = num_sites();
    require(initial.tilt_angle >= 0.0 && initial.tilt_angle <= std::numbers::pi / 2 + 1e-12,
            "initial.tilt_angle must lie in [0, pi/2]");
    require(initial.pattern != Pattern::DomainWall || n % 2 == 0, "domain-wall state needs even L");
    try {
      (void)region.resolve(n, initial.pattern);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("region: ") + e.what());
    } catch (const std::out_of_range& e) {
      throw ConfigError(std::string("region: ") + e.what());
    }
  }
  if (mode == Mode::Quench) {
    require(time.dt > 0.0 && time.t_max >= 0.0, "time: need dt > 0 and t_max >= 0");
    if (time.late) {
      require(time.late->t1 > time.t_max && time.late->t2 > time.late->t1,
              "time.late_window: need t_max < t1 < t2");
      require(time.late->samples >= 2, "time.late_window.samples must be >= 2");
    }
    require(krylov.subspace_dim >= 2 && krylov.dt > 0.0 && krylov.tolerance > 0.0, "krylov: invalid settings");
    if (backend == Backend::Spectral) {
      require(hamiltonian.num_sites <= kSpectralCap, "spectral backend limited to L <= 14");
    }
  }
  for (const auto& a : analysis) {
    const std::string& t = a.type;
    require(t == "peak" || t == "late-average" || t == "crossing" || t == "classify" || t == "powerlaw" ||
                t == "finite-size",
            "unknown analysis type '" + t + "'");
    if (simulation) {
      const std::size_t idx = target_index(*this, a);
      require(probes[idx] != ProbeKind::ChargeDistribution, "analysis cannot target the PQ probe");
    }
    if (t == "crossing" && simulation) {
      require(a.partner_theta.has_value(), "crossing analysis needs partner_theta");
      require(*a.partner_theta >= 0.0 && *a.partner_theta <= std::numbers::pi / 2 + 1e-12,
              "partner_theta must lie in [0, pi/2]");
      require(*a.partner_theta != initial.tilt_angle, "partner_theta must differ from the initial tilt");
      require(a.min_persistence >= 1, "min_persistence must be >= 1");
    }
    if (t == "powerlaw" && simulation) {
      require(mode == Mode::Circuit, "powerlaw analysis sweeps p_haar and needs mode circuit");
      require(a.sweep.size() >= 3, "powerlaw analysis needs >= 3 p_haar values");
      for (double p : a.sweep) require(p > 0.0 && p <= 1.0, "powerlaw p_haar values must lie in (0, 1]");
    }
    if (t == "finite-size" && simulation) {
      require(mode == Mode::Quench, "finite-size analysis sweeps L and needs mode quench");
      require(a.sweep.size() >= 2, "finite-size analysis needs >= 2 chain lengths");
      for (double l : a.sweep) {
        require(l == std::floor(l) && l >= 3 && l <= 26, "finite-size L values must be integers in [3, 26]");
      }
    }
    if ((t == "late-average") && mode == Mode::Quench) {
      require(a.t2 > a.t1, "late-average window must satisfy t1 < t2");
    }
  }
  if (mode == Mode::GroundState) {
    require(hamiltonian.num_sites <= 24, "ground-state mode limited to L <= 24");
  }
}

ExperimentConfig parse_config(std::string_view text, std::filesystem::path base_dir) {
  ExperimentConfig c;
  try {
    c = parse_json(json::parse(text));
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
  c.base_dir = std::move(base_dir);
  c.validate();
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path.parent_path());
}

std::string config_to_json(const ExperimentConfig& c) {
  json j;
  j["name"] = c.name;
  j["mode"] = mode_name(c.mode);
  const auto& h = c.hamiltonian;
  j["hamiltonian"] = {{"L", h.num_sites},        {"gamma", h.gamma},       {"delta1", h.delta1},
                      {"delta2", h.delta2},      {"periodic", h.periodic}, {"delta2_scale", h.delta2_scale}};
  const auto& k = c.circuit;
  j["circuit"] = {{"L", k.num_sites},
                  {"p_haar", k.p_haar},
                  {"depth_units", k.depth_units},
                  {"master_seed", k.master_seed},
                  {"n_realizations", k.n_realizations}};
  j["initial"] = {{"pattern", to_string(c.initial.pattern)}, {"tilt_angle", c.initial.tilt_angle}};
  if (c.region.shorthand == "explicit") {
    j["region"] = c.region.sites;
  } else {
    j["region"] = c.region.shorthand;
  }
  j["probes"] = json::array();
  for (auto p : c.probes) j["probes"].push_back(probe_name(p));
  j["time"] = {{"t_max", c.time.t_max}, {"dt", c.time.dt}};
  if (c.time.late) {
    j["time"]["late_window"] = {{"t1", c.time.late->t1}, {"t2", c.time.late->t2}, {"samples", c.time.late->samples}};
  }
  j["backend"] = backend_name(c.backend);
  j["krylov"] = {{"subspace_dim", c.krylov.subspace_dim}, {"dt", c.krylov.dt}, {"tolerance", c.krylov.tolerance}};
  j["analysis"] = json::array();
  for (const auto& a : c.analysis) {
    json e{{"type", a.type}, {"min_persistence", a.min_persistence}, {"window", {a.t1, a.t2}}};
    if (a.probe) e["probe"] = *a.probe;
    if (a.partner_theta) e["partner_theta"] = *a.partner_theta;
    if (a.horizon) e["horizon"] = *a.horizon;
    if (a.type == "powerlaw") e["p_haar"] = a.sweep;
    if (a.type == "finite-size") e["L"] = a.sweep;
    j["analysis"].push_back(std::move(e));
  }
  if (c.mode == Mode::Analyze) {
    j["input"] = {{"series", c.input.series},
                  {"less_tilted", c.input.less_tilted},
                  {"more_tilted", c.input.more_tilted},
                  {"x", c.input.x},
                  {"y", c.input.y}};
  }
  return j.dump(2);
}

Backend resolve_backend(const ExperimentConfig& c) {
  if (c.backend != Backend::Auto) return c.backend;
  const bool long_run = c.time.late.has_value() || c.time.t_max > 200.0;
  return long_run && c.hamiltonian.num_sites <= 12 ? Backend::Spectral : Backend::Krylov;
}

std::string format_number(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

ResultRecord run_experiment(const ExperimentConfig& input, const RunOptions& options) {
  ExperimentConfig c = input;
  if (options.seed) c.circuit.master_seed = *options.seed;
  c.validate();
  const int threads = resolve_threads(options.threads);

  ResultRecord record;
  json summary;
  summary["config"] = json::parse(config_to_json(c));
  summary["provenance"] = {
      {"version", kVersion},
      {"seed_rule",
       "gate (realization r, layer l, slot g) draws from mt19937_64 seeded with "
       "mix64(mix64(mix64(mix64(master_seed) ^ r) ^ l) ^ g), mix64 = SplitMix64 finalizer; "
       "layer l = 2*unit + (0 even | 1 odd)"},
      {"threads", threads}};
  if (options.timestamp) summary["provenance"]["timestamp"] = utc_timestamp();

  if (c.mode == Mode::Analyze) {
    summary["analysis"] = run_analyze_mode(c);
    record.summary_json = summary.dump(2) + "\n";
    return record;
  }

  const int n = c.num_sites();
  if (c.mode == Mode::Quench || c.mode == Mode::Circuit) {
    const Region region = c.region.resolve(n, c.initial.pattern);
    summary["resolved"] = {{"region_sites", region.sites()}};
    if (c.mode == Mode::Quench) summary["resolved"]["backend"] = backend_name(resolve_backend(c));
  }

  try {
    if (c.mode == Mode::GroundState) {
      const PauliSum h = build_hamiltonian(c.hamiltonian);
      const auto gs = ground_state(h);
      const auto requests = make_requests(c, n);
      const auto values = evaluate_probes(requests, gs.state);
      summary["ground_state"] = {{"energy", gs.energy}, {"residual", gs.residual}, {"iterations", gs.iterations}};
      for (std::size_t p = 0; p < requests.size(); ++p) {
        Emitted e{requests[p], {0.0}, {values[p]}, std::nullopt};
        record.files.push_back({std::string(probe_name(requests[p].kind)) + ".csv", csv_for(e, n)});
        if (values[p].size() == 1) summary["ground_state"][std::string(probe_name(requests[p].kind))] = values[p][0];
      }
      record.summary_json = summary.dump(2) + "\n";
      return record;
    }

    const bool circuit = c.mode == Mode::Circuit;
    auto simulate = [&](double theta) {
      return circuit ? run_circuit(c, theta, c.circuit.p_haar, threads) : run_quench(c, n, theta, threads);
    };

    const auto main = simulate(c.initial.tilt_angle);
    for (const auto& e : main) {
      record.files.push_back({std::string(probe_name(e.request.kind)) + ".csv", csv_for(e, n)});
    }

    json results = json::array();
    for (const auto& a : c.analysis) {
      const std::size_t idx = target_index(c, a);
      const std::string probe(probe_name(c.probes[idx]));
      const TimeSeries series = main[idx].series();
      json entry{{"type", a.type}, {"probe", probe}};

      if (a.type == "peak") {
        entry["result"] = peak_json(find_peak(series));
      } else if (a.type == "late-average") {
        const auto w = late_time_average(series, a.t1, a.t2);
        entry["result"] = json{{"mean", w.mean}, {"std", w.std_dev}, {"samples", w.samples}, {"window", {a.t1, a.t2}}};
      } else if (a.type == "crossing") {
        const auto partner = simulate(*a.partner_theta);
        for (const auto& e : partner) {
          record.files.push_back({"partner_" + std::string(probe_name(e.request.kind)) + ".csv", csv_for(e, n)});
        }
        const bool partner_more = *a.partner_theta > c.initial.tilt_angle;
        const TimeSeries other = partner[idx].series();
        const auto rep = partner_more ? detect_crossing(series, other, a.min_persistence)
                                      : detect_crossing(other, series, a.min_persistence);
        entry["result"] = crossing_json(rep, std::min(*a.partner_theta, c.initial.tilt_angle),
                                        std::max(*a.partner_theta, c.initial.tilt_angle));
      } else if (a.type == "classify") {
        double horizon = 10.0;
        if (a.horizon) {
          horizon = *a.horizon;
        } else {
          const auto symmetric = simulate(0.0);
          const double t_peak = find_peak(symmetric[idx].series()).time;
          if (t_peak > 0.0) horizon = std::min(t_peak, 10.0);
        }
        const auto g = classify_early_growth(series, horizon);
        entry["result"] = json{{"class", g == EarlyGrowth::Exceeds ? "exceeds" : "stays-below"}, {"horizon", horizon}};
      } else if (a.type == "powerlaw") {
        std::vector<double> peaks;
        std::string csv = "p_haar,peak\n";
        for (double p : a.sweep) {
          const auto ens = run_circuit(c, c.initial.tilt_angle, p, threads);
          peaks.push_back(find_peak(ens[idx].series()).value);
          csv += format_number(p) + "," + format_number(peaks.back()) + "\n";
        }
        record.files.push_back({"powerlaw.csv", csv});
        const auto fit = power_law_fit(a.sweep, peaks);
        entry["result"] = json{{"a", fit.a}, {"b", fit.b}, {"p_haar", a.sweep}, {"peaks", peaks}};
      } else if (a.type == "finite-size") {
        std::vector<double> inv_l, density;
        std::string csv = "L,inverse_L,peak,density\n";
        for (double lv : a.sweep) {
          const int l = static_cast<int>(lv);
          const auto run = run_quench(c, l, c.initial.tilt_angle, threads);
          const double peak = find_peak(run[idx].series()).value;
          const int size = c.region.resolve(l, c.initial.pattern).size();
          inv_l.push_back(1.0 / l);
          density.push_back(peak / size);
          csv += std::to_string(l) + "," + format_number(inv_l.back()) + "," + format_number(peak) + "," +
                 format_number(density.back()) + "\n";
        }
        record.files.push_back({"finite_size.csv", csv});
        const auto fit = linear_fit_extrapolate(inv_l, density);
        entry["result"] = json{{"slope", fit.slope}, {"intercept", fit.intercept}, {"density", density}};
      }
      results.push_back(std::move(entry));
    }
    summary["analysis"] = std::move(results);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }

  summary["files"] = json::array();
  for (const auto& f : record.files) summary["files"].push_back(f.name);
  record.summary_json = summary.dump(2) + "\n";
  return record;
}

void write_result(const ResultRecord& record, const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);
  auto write = [&](const std::string& name, const std::string& contents) {
    std::ofstream out(out_dir / name, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + (out_dir / name).string());
    out << contents;
  };
  for (const auto& f : record.files) write(f.name, f.contents);
  write("summary.json", record.summary_json);
}

}  // namespace easym
