#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "ionquench/errors.hpp"

// Trap + Coulomb model for a planar ion chain, simulation units
// (m = Q = nu = l0 = 1). The transverse squared frequency nu_t^2 is the
// control parameter and is passed explicitly; the axial squared frequency
// defaults to 1 and is only overridable for free-chain checks.

namespace ionq {

inline constexpr double kCoincidenceThreshold = 1e-12;  // l0

struct IonState {
  double t = 0.0;
  std::vector<double> x, y;    // positions, l0
  std::vector<double> vx, vy;  // velocities, l0*nu

  std::size_t size() const { return x.size(); }

  // N >= 2, x strictly ascending, everything finite.
  void validate() const {
    if (size() < 2) throw ConfigError("IonState needs at least 2 ions");
    if (y.size() != size() || vx.size() != size() || vy.size() != size())
      throw ConfigError("IonState arrays have mismatched lengths");
    for (std::size_t i = 0; i < size(); ++i) {
      if (!std::isfinite(x[i]) || !std::isfinite(y[i]) ||
          !std::isfinite(vx[i]) || !std::isfinite(vy[i]))
        throw ConfigError("IonState has non-finite entries");
      if (i > 0 && !(x[i - 1] < x[i]))
        throw ConfigError("IonState axial order violated at index " +
                          std::to_string(i));
    }
  }

  bool ordered_and_finite() const {
    for (std::size_t i = 0; i < size(); ++i) {
      if (!std::isfinite(x[i]) || !std::isfinite(y[i]) ||
          !std::isfinite(vx[i]) || !std::isfinite(vy[i]))
        return false;
      if (i > 0 && !(x[i - 1] < x[i])) return false;
    }
    return true;
  }
};

struct Forces {
  std::vector<double> fx, fy;  // m*l0*nu^2
};

// V = 1/2 sum_i (nu^2 x_i^2 + nu_t^2 y_i^2) + sum_{i<j} 1/|r_i - r_j|
inline double potential_energy(const IonState& s, double nu_t_sq,
                               double nu_sq = 1.0) {
  const std::size_t n = s.size();
  double trap = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    trap += nu_sq * s.x[i] * s.x[i] + nu_t_sq * s.y[i] * s.y[i];
  trap *= 0.5;

  double coulomb = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double dx = s.x[i] - s.x[j];
      const double dy = s.y[i] - s.y[j];
      const double r = std::sqrt(dx * dx + dy * dy);
      if (r < kCoincidenceThreshold)
        throw SingularityError("coincident ions " + std::to_string(i) + "," +
                               std::to_string(j));
      coulomb += 1.0 / r;
    }
  }
  return trap + coulomb;
}

// -grad V, one pass over i<j pairs with Newton's third law.
inline void forces_into(const IonState& s, double nu_t_sq, Forces& out,
                        double nu_sq = 1.0) {
  const std::size_t n = s.size();
  out.fx.assign(n, 0.0);
  out.fy.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    out.fx[i] -= nu_sq * s.x[i];
    out.fy[i] -= nu_t_sq * s.y[i];
  }
  for (std::size_t i = 0; i < n; ++i) {
    const double xi = s.x[i], yi = s.y[i];
    double fxi = 0.0, fyi = 0.0;
    for (std::size_t j = i + 1; j < n; ++j) {
      const double dx = xi - s.x[j];
      const double dy = yi - s.y[j];
      const double r2 = dx * dx + dy * dy;
      const double r = std::sqrt(r2);
      if (r < kCoincidenceThreshold)
        throw SingularityError("coincident ions " + std::to_string(i) + "," +
                               std::to_string(j));
      const double inv_r3 = 1.0 / (r2 * r);
      const double fx = dx * inv_r3;
      const double fy = dy * inv_r3;
      fxi += fx;
      fyi += fy;
      out.fx[j] -= fx;
      out.fy[j] -= fy;
    }
    out.fx[i] += fxi;
    out.fy[i] += fyi;
  }
}

inline Forces forces(const IonState& s, double nu_t_sq, double nu_sq = 1.0) {
  Forces f;
  forces_into(s, nu_t_sq, f, nu_sq);
  return f;
}

struct TrapConfig {
  double nu_t_sq_initial = 0.0;  // nu^2, = nu_c0^2 + delta0 at t = -tau_Q
  double delta0 = 0.0;           // nu^2
  double tau_q = 0.0;            // 1/nu
  double eta = 0.0;              // nu
  double noise_amp = 0.05;       // epsilon, m*l0*nu^2
  int n_ions = 50;
  int n_central = 30;

  void validate() const {
    if (delta0 <= 0.0) throw ConfigError("delta0 must be > 0");
    if (tau_q <= 0.0) throw ConfigError("tau_Q must be > 0");
    if (eta < 0.0) throw ConfigError("eta must be >= 0");
    if (n_central <= 0 || n_central > n_ions)
      throw ConfigError("need 0 < N_C <= N");
    if (n_ions < 2) throw ConfigError("need N >= 2");
  }
};

}  // namespace ionq
