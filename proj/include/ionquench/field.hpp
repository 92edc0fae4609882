#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <utility>
#include <vector>

#include "ionquench/constants.hpp"
#include "ionquench/defects.hpp"
#include "ionquench/equilibrium.hpp"
#include "ionquench/errors.hpp"
#include "ionquench/quench.hpp"
#include "ionquench/rng.hpp"

// 1D stochastic Ginzburg-Landau field solver:
//   d2_t psi - h(x)^2 d2_x psi + eta d_t psi + delta(x,t) psi + 2 A(x) psi^3 = e(t)
// Second-order central differences in space, BAOAB splitting in time with
// the same exact OU noise substep as the particle integrator. Per-node noise
// is scaled by 1/sqrt(rho dx) so the continuum correlator is independent of
// the discretization.

namespace ionq {

struct GLCoefficients {
  std::vector<double> grid;     // node positions
  std::vector<double> rho;      // linear mass density m n(x)
  std::vector<double> speed;    // h(x) = omega0 a sqrt(log 2)
  std::vector<double> quartic;  // A(x)
  std::vector<double> nu_c_sq;  // local critical squared frequency
  double dx = 0.0;
  bool periodic = false;

  std::size_t size() const { return grid.size(); }
};

inline double perturbation_speed(double spacing) {
  // omega0(a) * a * sqrt(log 2) = sqrt(log 2 / a)
  return std::sqrt(std::log(2.0) / spacing);
}

// Homogeneous (ring) profile at uniform spacing a.
inline GLCoefficients homogeneous_coefficients(double spacing, int n_nodes,
                                               double dx) {
  if (n_nodes < 8 || !(dx > 0.0) || !(spacing > 0.0))
    throw ConfigError("bad homogeneous grid");
  GLCoefficients c;
  c.dx = dx;
  c.periodic = true;
  const double nu_c = thermodynamic_critical_frequency(spacing);
  c.grid.resize(n_nodes);
  for (int i = 0; i < n_nodes; ++i) c.grid[i] = i * dx;
  c.rho.assign(n_nodes, 1.0 / spacing);
  c.speed.assign(n_nodes, perturbation_speed(spacing));
  c.quartic.assign(n_nodes, quartic_coefficient(spacing));
  c.nu_c_sq.assign(n_nodes, nu_c * nu_c);
  return c;
}

// Trapped profile: grid spans [-0.95 L, +0.95 L], field clamped to zero at
// the boundary nodes (the GL expansion fails where a(x) diverges).
inline GLCoefficients trapped_coefficients(const ChainProfile& profile,
                                           double dx = 0.0) {
  if (dx <= 0.0) dx = 0.5 * profile.central_spacing;
  const double half_span = 0.95 * profile.half_length;
  const int n_side = int(half_span / dx);
  GLCoefficients c;
  c.dx = dx;
  c.periodic = false;
  for (int i = -n_side; i <= n_side; ++i) {
    const double x = i * dx;
    const double a = profile.local_spacing(x);
    c.grid.push_back(x);
    c.rho.push_back(1.0 / a);
    c.speed.push_back(perturbation_speed(a));
    c.quartic.push_back(quartic_coefficient(a));
    c.nu_c_sq.push_back(profile.local_nu_c_sq(x));
  }
  return c;
}

struct FieldState {
  double t = 0.0;
  std::vector<double> psi;
  std::vector<double> psi_dot;
};

class FieldIntegrator {
 public:
  FieldIntegrator(FieldState initial, GLCoefficients coeffs,
                  QuenchSchedule schedule, double eta, double noise_amp,
                  double dt, std::uint64_t seed, std::uint64_t stream = 0)
      : state_(std::move(initial)),
        c_(std::move(coeffs)),
        schedule_(schedule),
        eta_(eta),
        dt_(dt),
        rng_(seed, stream) {
    const std::size_t n = c_.size();
    if (state_.psi.size() != n || state_.psi_dot.size() != n)
      throw ConfigError("field state does not match the grid");
    double h_max = 0.0;
    for (double h : c_.speed) h_max = std::max(h_max, h);
    if (!(dt_ * h_max / c_.dx < 0.5))
      throw ConfigError("CFL violation: dt h / dx must be < 0.5");
    ou_decay_ = std::exp(-eta_ * dt_);
    double var;
    if (eta_ > 0.0)
      var = noise_amp * noise_amp * (-std::expm1(-2.0 * eta_ * dt_)) /
            (2.0 * eta_);
    else
      var = noise_amp * noise_amp * dt_;
    ou_sigma_.resize(n);
    for (std::size_t i = 0; i < n; ++i)
      ou_sigma_[i] = std::sqrt(var / (c_.rho[i] * c_.dx));
    accel_.resize(n);
    compute_accel();
  }

  void step() {
    const std::size_t n = c_.size();
    const double half = 0.5 * dt_;
    for (std::size_t i = 0; i < n; ++i) {
      state_.psi_dot[i] += half * accel_[i];
      state_.psi[i] += half * state_.psi_dot[i];
    }
    if (noise_on()) {
      for (std::size_t i = 0; i < n; i += 2) {
        const auto z = rng_.normal_pair(step_count_, std::uint32_t(i / 2));
        state_.psi_dot[i] = ou_decay_ * state_.psi_dot[i] + ou_sigma_[i] * z[0];
        if (i + 1 < n)
          state_.psi_dot[i + 1] =
              ou_decay_ * state_.psi_dot[i + 1] + ou_sigma_[i + 1] * z[1];
      }
    } else if (ou_decay_ != 1.0) {
      for (std::size_t i = 0; i < n; ++i) state_.psi_dot[i] *= ou_decay_;
    }
    for (std::size_t i = 0; i < n; ++i)
      state_.psi[i] += half * state_.psi_dot[i];
    state_.t += dt_;
    clamp_boundary();
    compute_accel();
    for (std::size_t i = 0; i < n; ++i)
      state_.psi_dot[i] += half * accel_[i];
    ++step_count_;
  }

  void run(std::uint64_t n_steps) {
    for (std::uint64_t i = 0; i < n_steps; ++i) step();
  }

  const FieldState& state() const { return state_; }
  FieldState take_state() && { return std::move(state_); }
  const GLCoefficients& coefficients() const { return c_; }
  std::uint64_t steps_taken() const { return step_count_; }
  double dt() const { return dt_; }

  // Discrete energy per the Lagrangian density, for conservation checks at
  // fixed delta with eta = 0 and noise off.
  double energy() const {
    const std::size_t n = c_.size();
    const double nu_t_sq = schedule_.nu_t_sq(std::max(state_.t, -schedule_.tau_q));
    double e = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t j = c_.periodic ? (i + 1) % n : i + 1;
      double grad_sq = 0.0;
      if (j < n) {
        const double d = (state_.psi[j] - state_.psi[i]) / c_.dx;
        grad_sq = c_.speed[i] * c_.speed[i] * d * d;
      }
      const double delta = nu_t_sq - c_.nu_c_sq[i];
      const double p2 = state_.psi[i] * state_.psi[i];
      e += 0.5 * c_.rho[i] *
           (state_.psi_dot[i] * state_.psi_dot[i] + grad_sq + delta * p2 +
            c_.quartic[i] * p2 * p2) *
           c_.dx;
    }
    return e;
  }

 private:
  bool noise_on() const {
    for (double s : ou_sigma_)
      if (s > 0.0) return true;
    return false;
  }

  void clamp_boundary() {
    if (c_.periodic) return;
    state_.psi.front() = 0.0;
    state_.psi.back() = 0.0;
    state_.psi_dot.front() = 0.0;
    state_.psi_dot.back() = 0.0;
  }

  void compute_accel() {
    const std::size_t n = c_.size();
    const double inv_dx2 = 1.0 / (c_.dx * c_.dx);
    const double nu_t_sq = schedule_.nu_t_sq(std::max(state_.t, -schedule_.tau_q));
    for (std::size_t i = 0; i < n; ++i) {
      double lap;
      if (c_.periodic) {
        const std::size_t l = (i == 0) ? n - 1 : i - 1;
        const std::size_t r = (i + 1 == n) ? 0 : i + 1;
        lap = (state_.psi[l] - 2.0 * state_.psi[i] + state_.psi[r]) * inv_dx2;
      } else if (i == 0 || i + 1 == n) {
        accel_[i] = 0.0;
        continue;
      } else {
        lap = (state_.psi[i - 1] - 2.0 * state_.psi[i] + state_.psi[i + 1]) *
              inv_dx2;
      }
      const double delta = nu_t_sq - c_.nu_c_sq[i];
      const double p = state_.psi[i];
      accel_[i] =
          c_.speed[i] * c_.speed[i] * lap - delta * p - 2.0 * c_.quartic[i] * p * p * p;
    }
  }

  FieldState state_;
  GLCoefficients c_;
  QuenchSchedule schedule_;
  double eta_;
  double dt_;
  NormalStream rng_;
  double ou_decay_ = 1.0;
  std::vector<double> ou_sigma_;
  std::vector<double> accel_;
  std::uint64_t step_count_ = 0;
};

struct FieldRunResult {
  FieldState final_state;
  std::uint64_t steps = 0;
  std::size_t defect_count = 0;
  double density = 0.0;  // defects per unit length over the counting region
};

// Quench of the field, same protocol shape as the particle runs: thermalize
// at nu_t^2(-tau_Q), ramp, hold until <|psi|> over the counting region
// reaches 90% of the stationary amplitude. Defects are sign changes of psi
// with an amplitude floor of 0.1 <|psi|>.
inline FieldRunResult run_field_quench(const GLCoefficients& coeffs,
                                       const QuenchSchedule& schedule,
                                       double eta, double noise_amp, double dt,
                                       std::uint64_t seed,
                                       double max_hold_time = 2000.0) {
  const std::size_t n = coeffs.size();
  const double nu_t_sq_final = schedule.nu_c0_sq - schedule.delta0;

  // Counting region: nodes that go unstable at the final frequency (all of
  // them on the ring).
  IndexWindow region{0, n};
  if (!coeffs.periodic) {
    std::size_t lo = n, hi = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (nu_t_sq_final < coeffs.nu_c_sq[i]) {
        lo = std::min(lo, i);
        hi = std::max(hi, i);
      }
    }
    if (lo >= hi) throw ConfigError("quench too shallow for the field profile");
    region = {lo, hi + 1};
  }
  double amp_ref = 0.0;
  for (std::size_t i = region.begin; i < region.end; ++i) {
    const double delta = nu_t_sq_final - coeffs.nu_c_sq[i];
    if (delta < 0.0) amp_ref += std::sqrt(-delta / (2.0 * coeffs.quartic[i]));
  }
  amp_ref /= double(region.size());

  const double t_therm = (eta > 0.0 && noise_amp > 0.0) ? 10.0 / std::max(eta, 0.05) : 0.0;
  FieldState init;
  init.t = -schedule.tau_q - t_therm;
  init.psi.assign(n, 0.0);
  init.psi_dot.assign(n, 0.0);
  FieldIntegrator integ(std::move(init), coeffs, schedule, eta, noise_amp, dt,
                        seed);
  const std::uint64_t cap =
      std::uint64_t((t_therm + 2.0 * schedule.tau_q + max_hold_time) / dt) + 2;
  bool stopped = false;
  // Fallback for configurations where surviving kink cores keep <|psi|>
  // permanently below 90% of the defect-free amplitude: stop once the
  // amplitude has clearly saturated (growth < 0.5% over 20 time units).
  const double plateau_span = 20.0;
  double plateau_t = -std::numeric_limits<double>::infinity();
  double plateau_mean = 0.0;
  while (integ.steps_taken() < cap) {
    integ.step();
    if (integ.steps_taken() % 50 == 0 && integ.state().t >= schedule.tau_q) {
      double mean_abs = 0.0;
      for (std::size_t i = region.begin; i < region.end; ++i)
        mean_abs += std::abs(integ.state().psi[i]);
      mean_abs /= double(region.size());
      if (mean_abs >= 0.9 * amp_ref) {
        stopped = true;
        break;
      }
      if (integ.state().t >= plateau_t + plateau_span) {
        if (mean_abs > 0.3 * amp_ref && mean_abs < plateau_mean * 1.005) {
          stopped = true;
          break;
        }
        plateau_t = integ.state().t;
        plateau_mean = mean_abs;
      }
    }
  }
  if (!stopped)
    throw IntegrationError("field stop rule did not fire before the hold cap",
                           long(integ.steps_taken()));

  FieldRunResult result;
  result.steps = integ.steps_taken();
  result.final_state = std::move(integ).take_state();
  const auto& psi = result.final_state.psi;
  double mean_abs = 0.0;
  for (std::size_t i = region.begin; i < region.end; ++i)
    mean_abs += std::abs(psi[i]);
  mean_abs /= double(region.size());
  const double floor = 0.1 * mean_abs;
  if (coeffs.periodic) {
    result.defect_count = count_sign_changes_ring(psi, floor);
  } else {
    const auto census = count_defects(psi, region, floor, /*staggered=*/false);
    result.defect_count = census.defects.size();
  }
  result.density = double(result.defect_count) / (double(region.size()) * coeffs.dx);
  return result;
}

}  // namespace ionq
