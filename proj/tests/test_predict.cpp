#include <doctest.h>

#include <cmath>

#include "ionquench/equilibrium.hpp"
#include "ionquench/predict.hpp"
#include "ionquench/quench.hpp"

using namespace ionq;

namespace {

IkzmParams sample_params() {
  IkzmParams p;
  p.delta0 = 10.0;
  p.tau_q = 5.0;
  p.eta = 100.0;
  p.spacing = 0.25;
  p.omega0 = std::pow(0.25, -1.5);
  p.half_length = 8.0;
  p.nu_c0_sq = 100.0;
  return p;
}

// Minimal dimensional bookkeeping: a value with exponents of length and time
// in the simulation unit system. Recomputing the closed forms through it
// audits the units of every output.
struct Quantity {
  double value = 0.0;
  int len = 0;   // exponent of l0
  int time = 0;  // exponent of 1/nu

  Quantity operator*(const Quantity& o) const {
    return {value * o.value, len + o.len, time + o.time};
  }
  Quantity operator/(const Quantity& o) const {
    return {value / o.value, len - o.len, time - o.time};
  }
};

Quantity qpow(const Quantity& q, int num, int den) {
  REQUIRE(q.len * num % den == 0);
  REQUIRE(q.time * num % den == 0);
  return {std::pow(q.value, double(num) / den), q.len * num / den,
          q.time * num / den};
}

}  // namespace

TEST_CASE("front velocity arithmetic at X = 1/sqrt(3)") {
  const auto p = sample_params();
  const double x = 1.0 / std::sqrt(3.0);
  const double prefactor =
      p.half_length * p.delta0 / (6.0 * p.nu_c0_sq * p.tau_q);
  // (1 - X^2)^2 = 4/9, so the shape factor is 9 sqrt(3) / 4.
  const double expected = prefactor * 9.0 * std::sqrt(3.0) / 4.0;
  CHECK(front_velocity(x, p) == doctest::Approx(expected).epsilon(1e-14));
}

TEST_CASE("front velocity diverges as 1/|X| toward the center") {
  const auto p = sample_params();
  const double prefactor =
      p.half_length * p.delta0 / (6.0 * p.nu_c0_sq * p.tau_q);
  for (double x : {1e-3, 1e-5}) {
    CHECK(front_velocity(x, p) * x == doctest::Approx(prefactor).epsilon(1e-4));
    CHECK(front_velocity(-x, p) == front_velocity(x, p));
  }
  CHECK_THROWS_AS(front_velocity(0.0, p), std::domain_error);
  CHECK_THROWS_AS(front_velocity(1.0, p), std::domain_error);
  CHECK_THROWS_AS(front_velocity(-1.2, p), std::domain_error);
}

TEST_CASE("front velocity equals dt(delta)/dx(delta) on the tabulated field") {
  // The front position satisfies delta(x_F(t), t) = 0, so
  // v_F = (d delta/dt) / |d delta/dx|. Evaluate both numerically on the
  // actual schedule and profile.
  const auto profile = solve_ground_state(50);
  IkzmParams p;
  p.delta0 = 0.3 * profile.nu_c0_sq;
  p.tau_q = 40.0;
  p.half_length = profile.half_length;
  p.nu_c0_sq = profile.nu_c0_sq;
  const QuenchSchedule sched{profile.nu_c0_sq, p.delta0, p.tau_q};
  for (double scaled_x : {0.1, 0.3, 0.55, 0.8}) {
    const double x = scaled_x * profile.half_length;
    const double t = 0.1 * p.tau_q;  // any ramp time works
    const double hx = 1e-5 * profile.half_length;
    const double ht = 1e-5 * p.tau_q;
    const double d_dt = (sched.delta(profile.local_nu_c_sq(x), t + ht) -
                         sched.delta(profile.local_nu_c_sq(x), t - ht)) /
                        (2.0 * ht);
    const double d_dx = (sched.delta(profile.local_nu_c_sq(x + hx), t) -
                         sched.delta(profile.local_nu_c_sq(x - hx), t)) /
                        (2.0 * hx);
    const double fd = std::abs(d_dt / d_dx);
    CHECK(front_velocity(scaled_x, p) == doctest::Approx(fd).epsilon(1e-6));
  }
}

TEST_CASE("underdamped freeze-out speed is independent of tau_Q") {
  auto p = sample_params();
  p.eta = 0.01;  // deep underdamped
  const auto f1 = freeze_out(Regime::underdamped, p);
  p.tau_q *= 100.0;
  const auto f2 = freeze_out(Regime::underdamped, p);
  CHECK(f1.v_hat == f2.v_hat);
  CHECK(f1.v_hat == doctest::Approx(p.spacing * p.omega0));
  // t_hat and xi_hat share the (tau_Q/delta0)^(1/3) factor.
  CHECK(f2.t_hat / f1.t_hat == doctest::Approx(std::cbrt(100.0)).epsilon(1e-12));
  CHECK(f2.xi_hat / f1.xi_hat == doctest::Approx(std::cbrt(100.0)).epsilon(1e-12));
}

TEST_CASE("overdamped freeze-out time doubles when eta quadruples") {
  auto p = sample_params();
  const auto f1 = freeze_out(Regime::overdamped, p);
  p.eta *= 4.0;
  const auto f2 = freeze_out(Regime::overdamped, p);
  CHECK(f2.t_hat / f1.t_hat == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(f1.t_hat == doctest::Approx(std::sqrt(p.eta / 4.0 * p.tau_q / p.delta0)));
}

TEST_CASE("regime inequality violations raise an ambiguous-regime error") {
  auto p = sample_params();  // eta = 100: deeply overdamped
  CHECK_NOTHROW(freeze_out(Regime::overdamped, p));
  CHECK_THROWS_AS(freeze_out(Regime::underdamped, p), AmbiguousRegimeError);
  p.eta = 0.01;
  CHECK_NOTHROW(freeze_out(Regime::underdamped, p));
  CHECK_THROWS_AS(freeze_out(Regime::overdamped, p), AmbiguousRegimeError);
  // Marginal flag when the inequality holds by less than a factor 3.
  p.eta = 100.0;
  p.tau_q = 5.0;
  const double margin = overdamped_margin(p);
  CHECK(margin > 3.0);
  CHECK(!freeze_out(Regime::overdamped, p).marginal);
  // Shrink eta until the margin sits between 1 and 3.
  auto q = p;
  q.eta = 1.8;
  CHECK(overdamped_margin(q) > 1.0);
  CHECK(overdamped_margin(q) < 3.0);
  CHECK(freeze_out(Regime::overdamped, q).marginal);
}

TEST_CASE("trapped density scalings under tau_Q doubling") {
  auto p = sample_params();
  const auto o1 = predicted_density(Regime::overdamped, Geometry::trapped, p);
  auto p2 = p;
  p2.tau_q *= 2.0;
  const auto o2 = predicted_density(Regime::overdamped, Geometry::trapped, p2);
  CHECK(o2.density / o1.density == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(o1.exponent == 1.0);

  auto pu = sample_params();
  pu.eta = 0.01;
  const auto u1 = predicted_density(Regime::underdamped, Geometry::trapped, pu);
  pu.tau_q *= 2.0;
  const auto u2 = predicted_density(Regime::underdamped, Geometry::trapped, pu);
  CHECK(u2.density / u1.density ==
        doctest::Approx(std::pow(2.0, -4.0 / 3.0)).epsilon(1e-12));
  CHECK(u1.exponent == doctest::Approx(4.0 / 3.0));
}

TEST_CASE("trapped and homogeneous overdamped exponents differ by a factor 4") {
  const auto p = sample_params();
  const auto trapped = predicted_density(Regime::overdamped, Geometry::trapped, p);
  const auto homog =
      predicted_density(Regime::overdamped, Geometry::homogeneous, p);
  CHECK(trapped.exponent == doctest::Approx(4.0 * homog.exponent));
  CHECK(homog.exponent == 0.25);
  CHECK(predicted_density(Regime::underdamped, Geometry::homogeneous, p)
            .exponent == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("validity warning fires when the KZM region is not small") {
  auto p = sample_params();
  CHECK(x_star(Regime::overdamped, p) > 0.0);
  // Fast quench: X* grows as tau_Q^(-3/4).
  p.tau_q = 1e-4;
  const auto fast = predicted_density(Regime::overdamped, Geometry::trapped, p);
  CHECK(fast.validity_warning);
  p.tau_q = 1e6;
  const auto slow = predicted_density(Regime::overdamped, Geometry::trapped, p);
  CHECK(!slow.validity_warning);
}

TEST_CASE("causality ratio is front velocity over freeze-out speed") {
  const auto p = sample_params();
  const auto f = freeze_out(Regime::overdamped, p);
  for (double x : {0.2, 0.5, 0.8})
    CHECK(causality_ratio(Regime::overdamped, x, p) ==
          doctest::Approx(front_velocity(x, p) / f.v_hat));
  // Kinks form near the center where the front outruns the perturbations.
  CHECK(causality_ratio(Regime::overdamped, 0.01, p) >
        causality_ratio(Regime::overdamped, 0.5, p));
}

TEST_CASE("dimensional audit of the closed forms") {
  const auto p = sample_params();
  const Quantity delta0{p.delta0, 0, -2};
  const Quantity tau_q{p.tau_q, 0, 1};
  const Quantity eta{p.eta, 0, -1};
  const Quantity a{p.spacing, 1, 0};
  const Quantity omega0{p.omega0, 0, -1};
  const Quantity big_l{p.half_length, 1, 0};
  const Quantity nu_c0_sq{p.nu_c0_sq, 0, -2};

  // Overdamped: t_hat = (eta tau_Q / delta0)^(1/2), xi_hat = a omega0
  // (eta delta0 / tau_Q)^(-1/4), v_hat = a omega0 (delta0 / eta^3 tau_Q)^(1/2).
  const auto t_hat = qpow(eta * tau_q / delta0, 1, 2);
  CHECK(t_hat.len == 0);
  CHECK(t_hat.time == 1);
  const auto xi_hat = a * omega0 * qpow(eta * delta0 / tau_q, -1, 4);
  CHECK(xi_hat.len == 1);
  CHECK(xi_hat.time == 0);
  const auto v_hat =
      a * omega0 * qpow(delta0 / (eta * eta * eta * tau_q), 1, 2);
  CHECK(v_hat.len == 1);
  CHECK(v_hat.time == -1);
  const auto f = freeze_out(Regime::overdamped, p);
  CHECK(f.t_hat == doctest::Approx(t_hat.value));
  CHECK(f.xi_hat == doctest::Approx(xi_hat.value));
  CHECK(f.v_hat == doctest::Approx(v_hat.value));

  // Front velocity carries l0 nu.
  const auto v_f = big_l * delta0 / (nu_c0_sq * tau_q);
  CHECK(v_f.len == 1);
  CHECK(v_f.time == -1);

  // Densities are defects per unit length in both geometries.
  const auto d_homog = qpow(delta0 * eta / tau_q, 1, 4) / (a * omega0);
  CHECK(d_homog.len == -1);
  CHECK(d_homog.time == 0);
  const auto d_trapped =
      big_l / (nu_c0_sq * a * omega0 * a * omega0) * eta * delta0 / tau_q;
  CHECK(d_trapped.len == -1);
  CHECK(d_trapped.time == 0);
  CHECK(predicted_density(Regime::overdamped, Geometry::trapped, p).density ==
        doctest::Approx(d_trapped.value / 3.0));
}
