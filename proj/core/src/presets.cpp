#include <algorithm>

#include "easym/experiment.hpp"

namespace easym {

const std::vector<Preset>& presets() {
  static const std::vector<Preset> table = {
      {"fig1a",
       "EA-U1 of region L/3 after an H1 quench from the ferromagnetic state, gamma=0.5, L=12; "
       "late window sampled on [200, 2000] instead of t up to 4e4",
       R"({
  "name": "fig1a",
  "mode": "quench",
  "hamiltonian": {"L": 12, "gamma": 0.5, "delta1": 0.4},
  "initial": {"pattern": "ferromagnetic", "tilt_angle": 0.0},
  "region": "third",
  "probes": ["EA-U1", "CV"],
  "time": {"t_max": 20, "dt": 0.05, "late_window": {"t1": 200, "t2": 2000, "samples": 500}},
  "analysis": [{"type": "peak"}, {"type": "late-average", "window": [200, 2000]}]
})"},
      {"fig2a",
       "EA-U1 of region L/4 for a tilted ferromagnet (theta=0.2pi vs 0.5pi) under H1, gamma=0.9, L=12, "
       "crossing search up to t=20",
       R"({
  "name": "fig2a",
  "mode": "quench",
  "hamiltonian": {"L": 12, "gamma": 0.9, "delta1": 0.4},
  "initial": {"pattern": "ferromagnetic", "tilt_angle_pi": 0.2},
  "region": "quarter",
  "probes": ["EA-U1"],
  "time": {"t_max": 20, "dt": 0.05},
  "analysis": [{"type": "crossing", "partner_theta_pi": 0.5}, {"type": "classify"}]
})"},
      {"fig3b",
       "Circuit-averaged EA-U1 of 3 sites, antiferromagnet, p_haar=0.3, L=12, 200 realizations "
       "instead of L=16 with 5000",
       R"({
  "name": "fig3b",
  "mode": "circuit",
  "circuit": {"L": 12, "p_haar": 0.3, "depth_units": 40, "master_seed": 20240601, "n_realizations": 200},
  "initial": {"pattern": "antiferromagnetic", "tilt_angle": 0.0},
  "region": "quarter",
  "probes": ["EA-U1"],
  "analysis": [{"type": "peak"}, {"type": "powerlaw", "p_haar": [0.05, 0.1, 0.2, 0.3, 0.5]}]
})"},
      {"fig4",
       "Fully Haar circuit (p_haar=1), tilted ferromagnet theta=0.2pi vs 0.5pi, L=12, 200 realizations "
       "instead of L=16 with 5000",
       R"({
  "name": "fig4",
  "mode": "circuit",
  "circuit": {"L": 12, "p_haar": 1.0, "depth_units": 20, "master_seed": 20240602, "n_realizations": 200},
  "initial": {"pattern": "ferromagnetic", "tilt_angle_pi": 0.2},
  "region": "quarter",
  "probes": ["EA-U1", "CV"],
  "analysis": [{"type": "crossing", "partner_theta_pi": 0.5}]
})"},
      {"sm-cv-check",
       "Full-chain charge variance at early times, tilted ferromagnet theta=0.2pi, H1 gamma=0.6, L=12; "
       "compare against the analytic early-time expansion",
       R"({
  "name": "sm-cv-check",
  "mode": "quench",
  "hamiltonian": {"L": 12, "gamma": 0.6, "delta1": 0.4},
  "initial": {"pattern": "ferromagnetic", "tilt_angle_pi": 0.2},
  "region": "full",
  "probes": ["CV", "Qmean", "PQ"],
  "time": {"t_max": 0.3, "dt": 0.01},
  "backend": "krylov"
})"},
      {"sm-finite-size",
       "Peak EA-U1 density of region L/3 vs 1/L for L in {6, 8, 10, 12}, ferromagnet under H1 gamma=0.4; "
       "desk-scale sizes instead of L up to 27",
       R"({
  "name": "sm-finite-size",
  "mode": "quench",
  "hamiltonian": {"L": 12, "gamma": 0.4, "delta1": 0.4},
  "initial": {"pattern": "ferromagnetic", "tilt_angle": 0.0},
  "region": "third",
  "probes": ["EA-U1"],
  "time": {"t_max": 20, "dt": 0.05},
  "analysis": [{"type": "finite-size", "L": [6, 8, 10, 12]}]
})"},
  };
  return table;
}

const Preset& find_preset(std::string_view name) {
  const auto& table = presets();
  auto it = std::find_if(table.begin(), table.end(), [&](const Preset& p) { return p.name == name; });
  if (it == table.end()) throw ConfigError("unknown preset '" + std::string(name) + "'");
  return *it;
}

}  // namespace easym
