#pragma once

#include <cmath>
#include <cstdint>
#include <utility>
#include <vector>

#include "ionquench/defects.hpp"
#include "ionquench/equilibrium.hpp"
#include "ionquench/langevin.hpp"
#include "ionquench/model.hpp"
#include "ionquench/quench.hpp"

// Quench protocol for the particle model: thermalize above criticality, ramp
// nu_t^2 linearly through the transition, hold until the transverse pattern
// saturates, then hand the final state to the defect counter.

namespace ionq {

struct QuenchSetup {
  ChainProfile profile;
  QuenchSchedule schedule;
  LangevinParams params;
  double dt = 0.0;
  IndexWindow window;
  StopRule stop;
  IonState zigzag_reference;  // relaxed ground state in the final trap
};

inline IonState linear_chain_state(const ChainProfile& profile, double t) {
  IonState s;
  s.t = t;
  s.x = profile.positions;
  s.y.assign(s.x.size(), 0.0);
  s.vx.assign(s.x.size(), 0.0);
  s.vy.assign(s.x.size(), 0.0);
  return s;
}

// Noise-free overdamped relaxation from a seeded staggered pattern at fixed
// nu_t^2. Deterministic; used for the stop-rule reference and for
// amplitude checks against sqrt(-delta / 2A).
inline IonState relax_zigzag(const ChainProfile& profile, double nu_t_sq_final,
                             double force_tol = 1e-9,
                             std::uint64_t step_cap = 4'000'000) {
  IonState s = linear_chain_state(profile, 0.0);
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double amp =
        stationary_zigzag_amplitude(profile, s.x[i], nu_t_sq_final);
    s.y[i] = ((i % 2 == 0) ? 1.0 : -1.0) * 0.75 * amp;
  }
  const double delta_max = profile.nu_c0_sq - nu_t_sq_final;
  LangevinParams relax_params;
  relax_params.eta = std::max(1.0, std::sqrt(std::max(delta_max, 1.0)));
  const double nu_fast = std::sqrt(profile.nu_c0_sq);
  const double dt = LangevinParams::auto_dt(nu_fast, relax_params.eta);
  LangevinIntegrator integ(std::move(s), [nu_t_sq_final](double) { return nu_t_sq_final; },
                           relax_params, dt);
  Forces f;
  while (integ.steps_taken() < step_cap) {
    integ.run(500);
    forces_into(integ.state(), nu_t_sq_final, f);
    double fmax = 0.0, vmax = 0.0;
    for (std::size_t i = 0; i < f.fx.size(); ++i) {
      fmax = std::max({fmax, std::abs(f.fx[i]), std::abs(f.fy[i])});
      vmax = std::max({vmax, std::abs(integ.state().vx[i]),
                       std::abs(integ.state().vy[i])});
    }
    if (fmax < force_tol && vmax < force_tol) return std::move(integ).take_state();
  }
  throw ConvergenceError("zigzag relaxation did not converge", 0.0);
}

inline QuenchSetup build_quench_setup(const TrapConfig& trap,
                                      const LangevinParams& langevin) {
  TrapConfig t = trap;
  t.validate();
  QuenchSetup setup;
  setup.profile = solve_ground_state(t.n_ions);
  setup.schedule = {setup.profile.nu_c0_sq, t.delta0, t.tau_q};
  setup.params = langevin;
  setup.params.eta = t.eta;
  setup.params.noise_amp = t.noise_amp;
  const double nu_t_initial = std::sqrt(setup.profile.nu_c0_sq + t.delta0);
  setup.dt = setup.params.resolved_dt(nu_t_initial);
  const double nu_t_sq_final = setup.profile.nu_c0_sq - t.delta0;
  setup.window = central_window(setup.profile, nu_t_sq_final, t.n_central);
  setup.zigzag_reference = relax_zigzag(setup.profile, nu_t_sq_final);
  setup.stop.target_fraction = 0.9;
  setup.stop.reference = mean_abs_transverse(setup.zigzag_reference, setup.window);
  setup.stop.min_time = t.tau_q;
  return setup;
}

struct RunOptions {
  double max_hold_time = 400.0;    // post-ramp wall before a timeout error
  std::uint64_t snapshot_stride = 0;  // 0 -> no trajectory samples
  std::uint64_t stop_check_stride = 100;
};

struct RunResult {
  IonState final_state;
  std::uint64_t steps = 0;
  double stop_time = 0.0;
  std::vector<IonState> snapshots;
};

// One realization: thermalize for 10/eta at the initial frequency, ramp over
// [-tau_Q, +tau_Q], hold until <|y|> reaches 90% of the relaxed zigzag
// reference. Fully reproducible from (setup, seed).
inline RunResult run_quench(const QuenchSetup& setup, std::uint64_t seed,
                            const RunOptions& opts = {}) {
  const QuenchSchedule sched = setup.schedule;
  LangevinParams params = setup.params;
  params.seed = seed;
  const double t_therm =
      (params.eta > 0.0 && params.noise_amp > 0.0) ? 10.0 / params.eta : 0.0;
  const double t0 = -sched.tau_q - t_therm;
  const double t_end_cap = sched.tau_q + opts.max_hold_time;

  IonState init = linear_chain_state(setup.profile, t0);
  auto freq = [sched](double t) {
    return sched.nu_t_sq(std::max(t, -sched.tau_q));
  };
  LangevinIntegrator integ(std::move(init), freq, params, setup.dt);

  RunResult result;
  const std::uint64_t total_cap =
      std::uint64_t((t_end_cap - t0) / setup.dt) + 2;
  bool stopped = false;
  while (integ.steps_taken() < total_cap) {
    integ.step();
    if (opts.snapshot_stride != 0 &&
        integ.steps_taken() % opts.snapshot_stride == 0)
      result.snapshots.push_back(integ.state());
    if (integ.steps_taken() % opts.stop_check_stride == 0 &&
        should_stop(integ.state(), setup.stop, setup.window)) {
      stopped = true;
      break;
    }
  }
  if (!stopped)
    throw IntegrationError("stop rule did not fire before the hold cap",
                           long(integ.steps_taken()));
  result.steps = integ.steps_taken();
  result.stop_time = integ.state().t;
  result.final_state = std::move(integ).take_state();
  return result;
}

inline DefectCensus census_of_run(const QuenchSetup& setup,
                                  const RunResult& run) {
  const double floor =
      default_floor(run.final_state.y, setup.window);
  return count_defects(run.final_state, setup.window, floor);
}

}  // namespace ionq
