#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include "ionquench/constants.hpp"
#include "ionquench/errors.hpp"
#include "ionquench/model.hpp"

// Linear-chain ground states and the critical-frequency landscape built from
// them. All maps over position use the parabolic local-density profile
// normalized to the empirical central spacing, so the two forms of
// nu_c^2(x) agree identically.

namespace ionq {

struct ChainProfile {
  std::vector<double> positions;  // equilibrium axial coordinates, ascending
  // Effective half-length of the parabolic density profile, L = 3 N a0 / 4,
  // so n(0) = 3N/(4L) reproduces the empirical central spacing. The
  // outermost ion sits well inside L.
  double half_length = 0.0;
  double outermost = 0.0;         // |x| of the edge ion
  double central_spacing = 0.0;   // a0, mean of the central gaps
  double omega0 = 0.0;            // sqrt(Q^2 / (m a0^3))
  double nu_c0_sq = 0.0;          // 4 Q^2 / (m a0^3)

  int size() const { return int(positions.size()); }

  // a(x) = a0 / (1 - (x/L)^2)
  double local_spacing(double x) const {
    require_inside(x);
    const double u = x / half_length;
    return central_spacing / (1.0 - u * u);
  }

  // nu_c^2(x) = 4 Q^2 / (m a(x)^3) = nu_c0^2 [1 - (x/L)^2]^3
  double local_nu_c_sq(double x) const {
    require_inside(x);
    const double u = x / half_length;
    const double p = 1.0 - u * u;
    return nu_c0_sq * p * p * p;
  }

 private:
  void require_inside(double x) const {
    if (!(std::abs(x) < half_length))
      throw std::domain_error("position outside the chain");
  }
};

// n(x) = (3N / 4L) (1 - x^2 / L^2), the local density approximation.
inline double local_density(double x, int n_ions, double half_length) {
  if (!(std::abs(x) < half_length))
    throw std::domain_error("position outside the chain");
  const double u = x / half_length;
  return 0.75 * n_ions / half_length * (1.0 - u * u);
}

// nu_t^(c) ~= 3 N nu / (4 sqrt(log N)), finite-N corrections O(1/log N).
inline double critical_frequency_finite_n(int n_ions) {
  if (n_ions < 3) throw ConfigError("finite-N estimate needs N >= 3");
  return 0.75 * n_ions / std::sqrt(std::log(double(n_ions)));
}

// nu_t^(c) = omega0(a) sqrt(7 zeta(3) / 2), thermodynamic limit at uniform
// spacing a.
inline double thermodynamic_critical_frequency(double spacing) {
  if (!(spacing > 0.0)) throw ConfigError("spacing must be > 0");
  const double omega0 = std::pow(spacing, -1.5);
  return kCriticalFrequencyFactor * omega0;
}

// Quartic coefficient of the zigzag mode, A(x) = (93 zeta(5)/32) omega0^2/a^2
// evaluated with the local spacing. Units nu^2 / l0^2.
inline double quartic_coefficient(double spacing) {
  const double omega0_sq = 1.0 / (spacing * spacing * spacing);
  return (93.0 * kZeta5 / 32.0) * omega0_sq / (spacing * spacing);
}

// Stationary zigzag amplitude rho(x) = sqrt(-delta(x) / 2 A(x)); 0 in the
// linear phase (delta >= 0).
inline double stationary_zigzag_amplitude(const ChainProfile& profile, double x,
                                          double nu_t_sq) {
  const double delta = nu_t_sq - profile.local_nu_c_sq(x);
  if (delta >= 0.0) return 0.0;
  return std::sqrt(-delta / (2.0 * quartic_coefficient(profile.local_spacing(x))));
}

namespace detail {

// Axial energy/gradient/Hessian of the linear chain (y = 0).
inline double axial_energy(const std::vector<double>& x) {
  double e = 0.0;
  const std::size_t n = x.size();
  for (std::size_t i = 0; i < n; ++i) e += 0.5 * x[i] * x[i];
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) e += 1.0 / (x[j] - x[i]);
  return e;
}

inline void axial_gradient(const std::vector<double>& x, std::vector<double>& g) {
  const std::size_t n = x.size();
  g.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) g[i] = x[i];
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const double d = x[j] - x[i];
      const double f = 1.0 / (d * d);
      g[i] += f;
      g[j] -= f;
    }
}

inline void axial_hessian(const std::vector<double>& x, std::vector<double>& h) {
  const std::size_t n = x.size();
  h.assign(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) h[i * n + i] = 1.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const double d = x[j] - x[i];
      const double c = 2.0 / (d * d * d);
      h[i * n + i] += c;
      h[j * n + j] += c;
      h[i * n + j] -= c;
      h[j * n + i] -= c;
    }
}

// In-place Cholesky solve of (H + lambda I) p = -g; returns false if the
// shifted matrix is not positive definite.
inline bool solve_spd(std::vector<double> h, std::size_t n, double lambda,
                      const std::vector<double>& g, std::vector<double>& p) {
  for (std::size_t i = 0; i < n; ++i) h[i * n + i] += lambda;
  // Cholesky factorization, lower triangle.
  for (std::size_t j = 0; j < n; ++j) {
    double d = h[j * n + j];
    for (std::size_t k = 0; k < j; ++k) d -= h[j * n + k] * h[j * n + k];
    if (!(d > 0.0)) return false;
    const double ljj = std::sqrt(d);
    h[j * n + j] = ljj;
    for (std::size_t i = j + 1; i < n; ++i) {
      double s = h[i * n + j];
      for (std::size_t k = 0; k < j; ++k) s -= h[i * n + k] * h[j * n + k];
      h[i * n + j] = s / ljj;
    }
  }
  p.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double s = -g[i];
    for (std::size_t k = 0; k < i; ++k) s -= h[i * n + k] * p[k];
    p[i] = s / h[i * n + i];
  }
  for (std::size_t ii = n; ii-- > 0;) {
    double s = p[ii];
    for (std::size_t k = ii + 1; k < n; ++k) s -= h[k * n + ii] * p[k];
    p[ii] = s / h[ii * n + ii];
  }
  return true;
}

inline bool strictly_ascending(const std::vector<double>& x) {
  for (std::size_t i = 1; i < x.size(); ++i)
    if (!(x[i - 1] < x[i])) return false;
  return true;
}

inline double norm2(const std::vector<double>& g) {
  double s = 0.0;
  for (double v : g) s += v * v;
  return std::sqrt(s);
}

// Damped Newton descent on the axial coordinates from an explicit start.
inline std::vector<double> minimize_axial(std::vector<double> x,
                                          double grad_tol, int max_iter) {
  const std::size_t n = x.size();
  std::vector<double> g, h, p;
  axial_gradient(x, g);
  double gnorm = norm2(g);
  for (int iter = 0; iter < max_iter; ++iter) {
    if (gnorm < grad_tol) return x;
    axial_hessian(x, h);
    double lambda = 0.0;
    while (!solve_spd(h, n, lambda, g, p))
      lambda = (lambda == 0.0) ? 1e-8 : lambda * 10.0;
    // Backtracking: keep the ordering and decrease the energy. Near the
    // minimum the true decrease drops below rounding on an energy of order
    // N^(5/3), so allow rounding-level slack instead of a strict decrease.
    const double e0 = axial_energy(x);
    const double slack = 16.0 * std::numeric_limits<double>::epsilon() *
                         std::abs(e0);
    double alpha = 1.0;
    std::vector<double> trial(n);
    for (int bt = 0; bt < 60; ++bt) {
      for (std::size_t i = 0; i < n; ++i) trial[i] = x[i] + alpha * p[i];
      if (strictly_ascending(trial) && axial_energy(trial) <= e0 + slack) break;
      alpha *= 0.5;
    }
    for (std::size_t i = 0; i < n; ++i) x[i] += alpha * p[i];
    axial_gradient(x, g);
    gnorm = norm2(g);
  }
  if (gnorm < grad_tol) return x;
  throw ConvergenceError("ground-state solver did not converge", gnorm);
}

}  // namespace detail

// Ground state of N ions on the axis: deterministic damped-Newton descent
// from a uniform-spacing start. Gradient 2-norm < 1e-10 on return.
inline ChainProfile solve_ground_state(int n_ions, double grad_tol = 1e-10,
                                       int max_iter = 200) {
  if (n_ions < 2) throw ConfigError("need N >= 2");
  const std::size_t n = std::size_t(n_ions);

  // Uniform start scaled so the outer ions sit near the LDA estimate
  // L ~ (3N/2)^(1/3) log(N)^(1/3); the exact constant does not matter.
  const double l_est =
      std::cbrt(1.5 * n_ions * std::max(1.0, std::log(double(n_ions))));
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i)
    x[i] = l_est * (2.0 * double(i) / double(n - 1) - 1.0);
  x = detail::minimize_axial(std::move(x), grad_tol, max_iter);

  // Symmetrize: the potential is even in x, kill the numerical residue.
  for (std::size_t i = 0; i < n / 2; ++i) {
    const double v = 0.5 * (x[n - 1 - i] - x[i]);
    x[i] = -v;
    x[n - 1 - i] = v;
  }
  if (n % 2 == 1) x[n / 2] = 0.0;

  ChainProfile profile;
  profile.outermost = x[n - 1];
  if (n % 2 == 0) {
    // Even N: the gap straddling x = 0.
    profile.central_spacing = x[n / 2] - x[n / 2 - 1];
  } else {
    // Odd N: mean of the two gaps adjacent to the central ion.
    const std::size_t c = n / 2;
    profile.central_spacing =
        0.5 * ((x[c] - x[c - 1]) + (x[c + 1] - x[c]));
  }
  profile.positions = std::move(x);
  const double a0 = profile.central_spacing;
  profile.half_length = 0.75 * double(n) * a0;
  profile.omega0 = std::pow(a0, -1.5);
  profile.nu_c0_sq = 4.0 / (a0 * a0 * a0);
  return profile;
}

}  // namespace ionq
