#pragma once

#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "ionquench/errors.hpp"
#include "ionquench/sweep.hpp"

// Flat key=value configuration. Every key can also be set by a CLI flag of
// the same name; the CLI wins.

namespace ionq {

struct AppConfig {
  // trap / quench
  int N = 50;
  int N_C = 30;
  double delta0 = 0.0;       // absolute quench amplitude; 0 -> delta0_frac
  double delta0_frac = 0.1;  // fraction of nu_c0^2 when delta0 == 0
  double tau_Q = 50.0;
  double eta = 100.0;
  double noise_amp = 0.05;
  // integration
  double dt = 0.0;  // 0 -> stability rule
  double max_hold_time = 400.0;
  std::uint64_t snapshot_stride = 1000;
  std::uint64_t seed = 1;  // single-realization seed
  // sweep
  std::string tau_grid;  // comma-separated, strictly increasing
  int realizations = 100;
  std::uint64_t master_seed = 0;
  bool master_seed_set = false;
  std::string model = "particles";  // particles | field
  int workers = 1;
  double fit_min_tau = 0.0;  // 0 -> unbounded
  double fit_max_tau = 0.0;
  // field geometry
  int ring_nodes = 0;  // > 0 selects the periodic ring
  double ring_spacing = 1.0;
  double field_dx = 0.5;
  double field_dt = 0.0;
  // predictors
  std::string regime = "overdamped";    // overdamped | underdamped
  std::string geometry = "trapped";     // trapped | homogeneous

  void set(const std::string& key, const std::string& value) {
    auto as_double = [&] {
      std::size_t pos = 0;
      const double v = std::stod(value, &pos);
      if (pos != value.size()) throw ConfigError("bad number for " + key);
      return v;
    };
    auto as_int = [&] { return int(as_double()); };
    auto as_u64 = [&] { return std::uint64_t(std::stoull(value)); };
    if (key == "N") N = as_int();
    else if (key == "N_C") N_C = as_int();
    else if (key == "delta0") delta0 = as_double();
    else if (key == "delta0_frac") delta0_frac = as_double();
    else if (key == "tau_Q") tau_Q = as_double();
    else if (key == "eta") eta = as_double();
    else if (key == "noise_amp") noise_amp = as_double();
    else if (key == "dt") dt = as_double();
    else if (key == "max_hold_time") max_hold_time = as_double();
    else if (key == "snapshot_stride") snapshot_stride = as_u64();
    else if (key == "seed") seed = as_u64();
    else if (key == "tau_grid") tau_grid = value;
    else if (key == "realizations") realizations = as_int();
    else if (key == "master_seed") { master_seed = as_u64(); master_seed_set = true; }
    else if (key == "model") model = value;
    else if (key == "workers") workers = as_int();
    else if (key == "fit_min_tau") fit_min_tau = as_double();
    else if (key == "fit_max_tau") fit_max_tau = as_double();
    else if (key == "ring_nodes") ring_nodes = as_int();
    else if (key == "ring_spacing") ring_spacing = as_double();
    else if (key == "field_dx") field_dx = as_double();
    else if (key == "field_dt") field_dt = as_double();
    else if (key == "regime") regime = value;
    else if (key == "geometry") geometry = value;
    else throw ConfigError("unknown config key: " + key);
  }

  void load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      const auto hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      const auto eq = line.find('=');
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      if (eq == std::string::npos)
        throw ConfigError("expected key = value at line " +
                          std::to_string(lineno));
      auto trim = [](std::string s) {
        const auto b = s.find_first_not_of(" \t\r");
        const auto e = s.find_last_not_of(" \t\r");
        return (b == std::string::npos) ? std::string{} : s.substr(b, e - b + 1);
      };
      set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
  }

  std::vector<double> parsed_tau_grid() const {
    std::vector<double> grid;
    std::stringstream ss(tau_grid);
    std::string item;
    while (std::getline(ss, item, ','))
      if (!item.empty()) grid.push_back(std::stod(item));
    return grid;
  }

  // delta0 resolved against a concrete central critical frequency.
  double resolved_delta0(double nu_c0_sq) const {
    if (delta0 > 0.0) return delta0;
    if (!(delta0_frac > 0.0)) throw ConfigError("delta0 or delta0_frac required");
    return delta0_frac * nu_c0_sq;
  }

  TrapConfig trap_config(double nu_c0_sq) const {
    TrapConfig t;
    t.n_ions = N;
    t.n_central = N_C;
    t.delta0 = resolved_delta0(nu_c0_sq);
    t.nu_t_sq_initial = nu_c0_sq + t.delta0;
    t.tau_q = tau_Q;
    t.eta = eta;
    t.noise_amp = noise_amp;
    return t;
  }

  LangevinParams langevin_params() const {
    LangevinParams p;
    p.eta = eta;
    p.noise_amp = noise_amp;
    p.dt = dt;
    return p;
  }

  SweepConfig sweep_config(double nu_c0_sq) const {
    SweepConfig s;
    s.trap = trap_config(nu_c0_sq);
    s.langevin = langevin_params();
    s.tau_grid = parsed_tau_grid();
    s.realizations = realizations;
    s.master_seed = master_seed;
    if (model == "particles") s.model = SweepModel::particles;
    else if (model == "field") s.model = SweepModel::field;
    else throw ConfigError("model must be particles or field");
    if (fit_min_tau > 0.0) s.fit_window.min_tau = fit_min_tau;
    if (fit_max_tau > 0.0) s.fit_window.max_tau = fit_max_tau;
    s.workers = workers;
    s.max_hold_time = max_hold_time;
    s.ring_nodes = ring_nodes;
    s.ring_spacing = ring_spacing;
    s.field_dx = field_dx;
    s.field_dt = field_dt;
    return s;
  }
};

}  // namespace ionq
