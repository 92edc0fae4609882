#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <utility>

#include "ionquench/errors.hpp"
#include "ionquench/model.hpp"
#include "ionquench/quench.hpp"
#include "ionquench/rng.hpp"

namespace ionq {

struct LangevinParams {
  double eta = 0.0;        // damping, nu
  double noise_amp = 0.0;  // epsilon, white-noise strength: <e(t)e(t')> = eps^2 d(t-t')
  double dt = 0.0;         // 0 -> pick from the stability rule
  std::uint64_t seed = 0;

  // dt nu_t(-tau_Q) <= 0.01, dt eta <= 0.05, dt nu <= 0.01.
  static double auto_dt(double nu_t_initial, double eta) {
    double dt = 0.01;  // dt * nu <= 0.01 with nu = 1
    if (nu_t_initial > 0.0) dt = std::min(dt, 0.01 / nu_t_initial);
    if (eta > 0.0) dt = std::min(dt, 0.05 / eta);
    return dt;
  }

  double resolved_dt(double nu_t_initial) const {
    const double d = (dt > 0.0) ? dt : auto_dt(nu_t_initial, eta);
    if (!(d * std::max({eta, nu_t_initial, 1.0}) < 0.1))
      throw ConfigError("timestep too large for eta / nu_t");
    return d;
  }

  // Implied temperature through <e(t)e(t')> = 2 eta kB T d(t-t').
  double kb_t() const {
    if (eta <= 0.0) return 0.0;
    return noise_amp * noise_amp / (2.0 * eta);
  }
};

// BAOAB splitting with an exact Ornstein-Uhlenbeck damping/noise substep.
// One force evaluation per step; the noise kick acts on every coordinate
// component with a per-step momentum deviation consistent with
// <e(t)e(t')> = eps^2 d(t-t').
class LangevinIntegrator {
 public:
  using FrequencyFn = std::function<double(double)>;  // t -> nu_t^2(t)

  LangevinIntegrator(IonState initial, FrequencyFn nu_t_sq, LangevinParams params,
                     double dt, std::uint64_t stream = 0, double nu_sq = 1.0)
      : state_(std::move(initial)),
        nu_t_sq_(std::move(nu_t_sq)),
        params_(params),
        dt_(dt),
        nu_sq_(nu_sq),
        rng_(params.seed, stream) {
    state_.validate();
    ou_decay_ = std::exp(-params_.eta * dt_);
    // sigma^2 = eps^2 * (1 - exp(-2 eta dt)) / (2 eta), -> eps^2 dt as eta -> 0.
    const double eps = params_.noise_amp;
    double var;
    if (params_.eta > 0.0)
      var = eps * eps * (-std::expm1(-2.0 * params_.eta * dt_)) /
            (2.0 * params_.eta);
    else
      var = eps * eps * dt_;
    ou_sigma_ = std::sqrt(var);
    forces_into(state_, nu_t_sq_(state_.t), forces_, nu_sq_);
  }

  void step() {
    const std::size_t n = state_.size();
    const double half = 0.5 * dt_;
    for (std::size_t i = 0; i < n; ++i) {
      state_.vx[i] += half * forces_.fx[i];
      state_.vy[i] += half * forces_.fy[i];
      state_.x[i] += half * state_.vx[i];
      state_.y[i] += half * state_.vy[i];
    }
    if (ou_sigma_ > 0.0) {
      for (std::size_t i = 0; i < n; ++i) {
        const auto z = rng_.normal_pair(step_count_, std::uint32_t(i));
        state_.vx[i] = ou_decay_ * state_.vx[i] + ou_sigma_ * z[0];
        state_.vy[i] = ou_decay_ * state_.vy[i] + ou_sigma_ * z[1];
      }
    } else if (ou_decay_ != 1.0) {
      for (std::size_t i = 0; i < n; ++i) {
        state_.vx[i] *= ou_decay_;
        state_.vy[i] *= ou_decay_;
      }
    }
    for (std::size_t i = 0; i < n; ++i) {
      state_.x[i] += half * state_.vx[i];
      state_.y[i] += half * state_.vy[i];
    }
    state_.t += dt_;
    forces_into(state_, nu_t_sq_(state_.t), forces_, nu_sq_);
    for (std::size_t i = 0; i < n; ++i) {
      state_.vx[i] += half * forces_.fx[i];
      state_.vy[i] += half * forces_.fy[i];
    }
    ++step_count_;
    if (!state_.ordered_and_finite())
      throw IntegrationError("axial order swap or non-finite state",
                             long(step_count_));
  }

  void run(std::uint64_t n_steps) {
    for (std::uint64_t i = 0; i < n_steps; ++i) step();
  }

  const IonState& state() const { return state_; }
  IonState take_state() && { return std::move(state_); }
  std::uint64_t steps_taken() const { return step_count_; }
  double dt() const { return dt_; }

  double kinetic_energy() const {
    double ke = 0.0;
    for (std::size_t i = 0; i < state_.size(); ++i)
      ke += state_.vx[i] * state_.vx[i] + state_.vy[i] * state_.vy[i];
    return 0.5 * ke;
  }

  double total_energy() const {
    return kinetic_energy() + potential_energy(state_, nu_t_sq_(state_.t), nu_sq_);
  }

 private:
  IonState state_;
  Forces forces_;
  FrequencyFn nu_t_sq_;
  LangevinParams params_;
  double dt_;
  double nu_sq_;
  NormalStream rng_;
  double ou_decay_ = 1.0;
  double ou_sigma_ = 0.0;
  std::uint64_t step_count_ = 0;
};

}  // namespace ionq
