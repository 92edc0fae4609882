#pragma once

#include <stdexcept>

#include "ionquench/errors.hpp"

namespace ionq {

// Linear ramp of the squared transverse frequency,
//   nu_t^2(t) = nu_c0^2 - delta0 * t / tau_Q   for t in [-tau_Q, +tau_Q],
// held constant at nu_c0^2 - delta0 afterwards.
struct QuenchSchedule {
  double nu_c0_sq = 0.0;
  double delta0 = 0.0;
  double tau_q = 0.0;

  double t_start() const { return -tau_q; }

  double nu_t_sq(double t) const {
    if (t < -tau_q) throw std::domain_error("time before quench start");
    if (t > tau_q) t = tau_q;
    return nu_c0_sq - delta0 * t / tau_q;
  }

  // delta(x, t) = nu_t^2(t) - nu_c^2(x); the caller supplies nu_c^2(x).
  double delta(double nu_c_sq_local, double t) const {
    return nu_t_sq(t) - nu_c_sq_local;
  }

  void validate() const {
    if (!(delta0 > 0.0)) throw ConfigError("delta0 must be > 0");
    if (!(tau_q > 0.0)) throw ConfigError("tau_Q must be > 0");
  }
};

}  // namespace ionq
