#pragma once

#include <cmath>
#include <limits>
#include <string>

#include "ionquench/errors.hpp"

// Closed-form IKZM predictors: front velocity, freeze-out scales and the
// defect-density scaling laws for both damping regimes and both geometries.

namespace ionq {

enum class Regime { overdamped, underdamped };
enum class Geometry { homogeneous, trapped };

struct IkzmParams {
  double delta0 = 0.0;    // quench amplitude, nu^2
  double tau_q = 0.0;     // half-duration, 1/nu
  double eta = 0.0;       // damping, nu
  double spacing = 0.0;   // a (central spacing for the trapped geometry)
  double omega0 = 0.0;    // sqrt(Q^2 / m a^3)
  double half_length = 0.0;  // L, trapped geometry only
  double nu_c0_sq = 0.0;     // central critical squared frequency
};

// v_F = (L delta0 / 6 nu_c0^2 tau_Q) / (|X| (1 - X^2)^2), X = x / L.
inline double front_velocity(double scaled_x, const IkzmParams& p) {
  const double ax = std::abs(scaled_x);
  if (ax == 0.0)
    throw std::domain_error(
        "front velocity diverges at the chain center (homogeneous KZM applies)");
  if (!(ax < 1.0)) throw std::domain_error("scaled position must be in (0, 1)");
  const double one_minus = 1.0 - scaled_x * scaled_x;
  return p.half_length * p.delta0 /
         (6.0 * p.nu_c0_sq * p.tau_q * ax * one_minus * one_minus);
}

struct FreezeOut {
  double t_hat = 0.0;   // freeze-out time
  double xi_hat = 0.0;  // frozen correlation length
  double v_hat = 0.0;   // characteristic perturbation speed
  bool marginal = false;  // regime inequality holds by less than a factor 3
  std::string diagnostics;
};

// Regime diagnostics: overdamped needs eta >> sqrt(delta(0, t_hat)),
// underdamped needs tau_Q << delta0 / eta^3.
inline double overdamped_margin(const IkzmParams& p) {
  const double delta_at_t_hat = std::sqrt(p.eta * p.delta0 / p.tau_q);
  return p.eta / std::sqrt(delta_at_t_hat);
}

inline double underdamped_margin(const IkzmParams& p) {
  if (p.eta <= 0.0) return std::numeric_limits<double>::infinity();
  return p.delta0 / (p.eta * p.eta * p.eta) / p.tau_q;
}

inline FreezeOut freeze_out(Regime regime, const IkzmParams& p) {
  if (!(p.delta0 > 0.0) || !(p.tau_q > 0.0) || !(p.spacing > 0.0))
    throw ConfigError("freeze_out needs delta0, tau_Q, spacing > 0");
  const double a_omega0 = p.spacing * p.omega0;
  const double m_over = overdamped_margin(p);
  const double m_under = underdamped_margin(p);
  const double margin = (regime == Regime::overdamped) ? m_over : m_under;
  std::string diag = "overdamped eta/sqrt(delta(t_hat)) = " +
                     std::to_string(m_over) +
                     ", underdamped (delta0/eta^3)/tau_Q = " +
                     std::to_string(m_under);
  if (margin <= 1.0)
    throw AmbiguousRegimeError("requested regime inequality violated; " + diag);

  FreezeOut f;
  f.marginal = margin < 3.0;
  f.diagnostics = std::move(diag);
  if (regime == Regime::overdamped) {
    if (!(p.eta > 0.0)) throw ConfigError("overdamped regime needs eta > 0");
    f.t_hat = std::sqrt(p.eta * p.tau_q / p.delta0);
    f.xi_hat = a_omega0 * std::pow(p.eta * p.delta0 / p.tau_q, -0.25);
    f.v_hat = a_omega0 * std::sqrt(p.delta0 / (p.eta * p.eta * p.eta * p.tau_q));
  } else {
    f.t_hat = std::cbrt(p.tau_q / p.delta0);
    f.xi_hat = a_omega0 * std::cbrt(p.tau_q / p.delta0);
    f.v_hat = a_omega0;
  }
  return f;
}

struct DensityPrediction {
  double density = 0.0;
  double exponent = 0.0;     // predicted -dlog d / dlog tau_Q
  double x_star = 0.0;       // trapped geometry: half-size of the KZM region
  bool validity_warning = false;  // trapped and X* not << 1
};

// Effective KZM region, |X*| ~= A_o (overdamped) or 2|X*| ~= A_u
// (underdamped), with the undefined paper scale xi0 set to 1.
inline double x_star(Regime regime, const IkzmParams& p) {
  const double base =
      p.half_length / (6.0 * p.nu_c0_sq * p.spacing * p.omega0);
  if (regime == Regime::overdamped)
    return base * std::pow(p.eta * p.delta0 / p.tau_q, 0.75);
  return 0.5 * base;
}

inline DensityPrediction predicted_density(Regime regime, Geometry geometry,
                                           const IkzmParams& p) {
  DensityPrediction out;
  const double a_omega0 = p.spacing * p.omega0;
  if (geometry == Geometry::homogeneous) {
    if (regime == Regime::overdamped) {
      out.density = std::pow(p.delta0 * p.eta / p.tau_q, 0.25) / a_omega0;
      out.exponent = 0.25;
    } else {
      out.density = std::cbrt(p.delta0 / p.tau_q) / a_omega0;
      out.exponent = 1.0 / 3.0;
    }
    return out;
  }
  const double prefactor =
      p.half_length / (3.0 * p.nu_c0_sq * a_omega0 * a_omega0);
  if (regime == Regime::overdamped) {
    out.density = prefactor * p.eta * p.delta0 / p.tau_q;
    out.exponent = 1.0;
  } else {
    out.density = prefactor * std::pow(p.delta0 / p.tau_q, 4.0 / 3.0);
    out.exponent = 4.0 / 3.0;
  }
  out.x_star = x_star(regime, p);
  out.validity_warning = !(out.x_star < 0.3);
  return out;
}

// Causality diagnostic v_F / v_hat at scaled position X; kinks form where it
// exceeds 1.
inline double causality_ratio(Regime regime, double scaled_x,
                              const IkzmParams& p) {
  return front_velocity(scaled_x, p) / freeze_out(regime, p).v_hat;
}

}  // namespace ionq
