#pragma once

#include <atomic>
#include <cmath>
#include <cstdint>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "ionquench/driver.hpp"
#include "ionquench/field.hpp"
#include "ionquench/predict.hpp"
#include "ionquench/stats.hpp"

// Ensemble sweeps over a tau_Q grid for either model, with a bounded worker
// pool. Every realization is a pure function of (master seed, point index,
// realization index), and results are aggregated in task order, so the
// output is bit-identical for any worker count.

namespace ionq {

enum class SweepModel { particles, field };

struct SweepConfig {
  TrapConfig trap;
  LangevinParams langevin;
  std::vector<double> tau_grid;  // strictly increasing
  int realizations = 2;
  std::uint64_t master_seed = 0;
  SweepModel model = SweepModel::particles;
  FitWindow fit_window;
  int workers = 1;
  double max_hold_time = 400.0;

  // Field-model geometry: ring when ring_nodes > 0, else the trapped profile.
  int ring_nodes = 0;
  double ring_spacing = 1.0;
  double field_dx = 0.5;
  double field_dt = 0.0;  // 0 -> auto

  void validate() const {
    if (tau_grid.size() < 1) throw ConfigError("empty tau_Q grid");
    for (std::size_t i = 1; i < tau_grid.size(); ++i)
      if (!(tau_grid[i] > tau_grid[i - 1]))
        throw ConfigError("tau_Q grid must be strictly increasing");
    if (realizations < 2)
      throw ConfigError("need >= 2 realizations per grid point");
    if (workers < 1) throw ConfigError("need >= 1 worker");
  }
};

struct RealizationRecord {
  int point = 0;
  int realization = 0;
  double tau_q = 0.0;
  double eta = 0.0;
  std::uint64_t seed = 0;
  bool ok = false;
  int n_defects = 0;
  double density = 0.0;
  std::string charges;
  std::string error;
};

struct ScalingResult {
  std::vector<ScalingRow> rows;
  PowerLawFit fit;
  bool fit_ok = false;
  std::string fit_error;
  std::vector<RealizationRecord> raw;
  std::vector<std::size_t> saturation_flags;
};

inline double field_auto_dt(const GLCoefficients& coeffs, double eta,
                            double delta0) {
  double h_max = 0.0;
  for (double h : coeffs.speed) h_max = std::max(h_max, h);
  double dt = 0.4 * coeffs.dx / h_max;
  if (eta > 0.0) dt = std::min(dt, 0.05 / eta);
  if (delta0 > 0.0) dt = std::min(dt, 0.1 / std::sqrt(delta0));
  return dt;
}

inline ScalingResult run_sweep(const SweepConfig& config) {
  config.validate();
  const int n_points = int(config.tau_grid.size());
  const int n_real = config.realizations;

  // Shared context (profile, window, stop reference / field coefficients)
  // is tau_Q-independent; build it once.
  struct ParticleContext {
    QuenchSetup base;
  };
  struct FieldContext {
    GLCoefficients coeffs;
    double nu_c0_sq = 0.0;
    double dt = 0.0;
  };
  ParticleContext pc;
  FieldContext fc;
  if (config.model == SweepModel::particles) {
    TrapConfig trap = config.trap;
    trap.tau_q = config.tau_grid.front();
    pc.base = build_quench_setup(trap, config.langevin);
  } else {
    if (config.ring_nodes > 0) {
      fc.coeffs = homogeneous_coefficients(config.ring_spacing,
                                           config.ring_nodes, config.field_dx);
      fc.nu_c0_sq = fc.coeffs.nu_c_sq.front();
    } else {
      const auto profile = solve_ground_state(config.trap.n_ions);
      fc.coeffs = trapped_coefficients(profile, config.field_dx);
      fc.nu_c0_sq = profile.nu_c0_sq;
    }
    fc.dt = (config.field_dt > 0.0)
                ? config.field_dt
                : field_auto_dt(fc.coeffs, config.trap.eta, config.trap.delta0);
  }

  std::vector<RealizationRecord> records(std::size_t(n_points) * n_real);
  std::atomic<int> next_task{0};
  const int n_tasks = n_points * n_real;

  auto run_task = [&](int task) {
    const int point = task / n_real;
    const int realization = task % n_real;
    RealizationRecord& rec = records[std::size_t(task)];
    rec.point = point;
    rec.realization = realization;
    rec.tau_q = config.tau_grid[std::size_t(point)];
    rec.eta = config.trap.eta;
    rec.seed = derive_seed(config.master_seed, std::uint64_t(point),
                           std::uint64_t(realization));
    try {
      if (config.model == SweepModel::particles) {
        QuenchSetup setup = pc.base;
        setup.schedule.tau_q = rec.tau_q;
        setup.stop.min_time = rec.tau_q;
        RunOptions opts;
        opts.max_hold_time = config.max_hold_time;
        const RunResult run = run_quench(setup, rec.seed, opts);
        const DefectCensus census = census_of_run(setup, run);
        rec.n_defects = int(census.defects.size());
        rec.density = census.density;
        rec.charges = census.charge_string();
      } else {
        QuenchSchedule sched{fc.nu_c0_sq, config.trap.delta0, rec.tau_q};
        const FieldRunResult run =
            run_field_quench(fc.coeffs, sched, config.trap.eta,
                             config.trap.noise_amp, fc.dt, rec.seed,
                             config.max_hold_time);
        rec.n_defects = int(run.defect_count);
        rec.density = run.density;
      }
      rec.ok = true;
    } catch (const std::exception& e) {
      rec.ok = false;
      rec.error = e.what();
    }
  };

  if (config.workers == 1) {
    for (int task = 0; task < n_tasks; ++task) run_task(task);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < config.workers; ++w)
      pool.emplace_back([&] {
        for (int task = next_task.fetch_add(1); task < n_tasks;
             task = next_task.fetch_add(1))
          run_task(task);
      });
    for (auto& t : pool) t.join();
  }

  ScalingResult result;
  result.raw = std::move(records);
  for (int point = 0; point < n_points; ++point) {
    std::vector<double> densities;
    int excluded = 0;
    for (int r = 0; r < n_real; ++r) {
      const auto& rec = result.raw[std::size_t(point) * n_real + r];
      if (rec.ok)
        densities.push_back(rec.density);
      else
        ++excluded;
    }
    if (excluded * 10 > n_real)
      throw DataQualityError(
          ">10% excluded realizations at tau_Q = " +
          std::to_string(config.tau_grid[std::size_t(point)]));
    ScalingRow row;
    row.tau_q = config.tau_grid[std::size_t(point)];
    row.mean_density = sample_mean(densities);
    row.std_error = standard_error(densities);
    row.n_valid = int(densities.size());
    result.rows.push_back(row);
  }
  try {
    result.fit = fit_power_law(result.rows, config.fit_window);
    result.fit_ok = true;
  } catch (const DataQualityError& e) {
    result.fit_error = e.what();
  }
  if (result.rows.size() >= 5)
    result.saturation_flags = saturation_guard(result.rows);
  return result;
}

struct PredictionComparison {
  double predicted_exponent = 0.0;
  double fitted_exponent = 0.0;
  double deviation = 0.0;
  bool pass = false;
};

inline PredictionComparison compare_to_prediction(const PowerLawFit& fit,
                                                  Regime regime,
                                                  Geometry geometry,
                                                  double tolerance) {
  PredictionComparison cmp;
  if (geometry == Geometry::trapped)
    cmp.predicted_exponent = (regime == Regime::overdamped) ? 1.0 : 4.0 / 3.0;
  else
    cmp.predicted_exponent =
        (regime == Regime::overdamped) ? 0.25 : 1.0 / 3.0;
  cmp.fitted_exponent = fit.exponent;
  cmp.deviation = std::abs(fit.exponent - cmp.predicted_exponent);
  cmp.pass = cmp.deviation <= tolerance;
  return cmp;
}

inline void write_raw_csv(std::ostream& os, const ScalingResult& result) {
  os << "realization_id,tau_Q,eta,n_defects,density,charges,status\n";
  os << std::setprecision(17);
  for (const auto& rec : result.raw) {
    os << rec.point << ':' << rec.realization << ',' << rec.tau_q << ','
       << rec.eta << ',' << rec.n_defects << ',' << rec.density << ','
       << rec.charges << ',' << (rec.ok ? "ok" : "excluded") << '\n';
  }
}

inline void write_aggregate_csv(std::ostream& os, const ScalingResult& result) {
  os << "tau_Q,mean_density,std_error,n_valid\n";
  os << std::setprecision(17);
  for (const auto& row : result.rows)
    os << row.tau_q << ',' << row.mean_density << ',' << row.std_error << ','
       << row.n_valid << '\n';
}

}  // namespace ionq
