#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "ionquench/equilibrium.hpp"
#include "ionquench/io.hpp"

using namespace ionq;

TEST_CASE("two-ion ground state is +-(1/4)^(1/3)") {
  const auto p = solve_ground_state(2);
  const double u = std::cbrt(0.25);
  CHECK(p.positions[0] == doctest::Approx(-u).epsilon(1e-10));
  CHECK(p.positions[1] == doctest::Approx(u).epsilon(1e-10));
}

TEST_CASE("three-ion ground state is {-(5/4)^(1/3), 0, +(5/4)^(1/3)}") {
  // Stationarity for the outer ion: u = 1/u^2 + 1/(2u)^2 => u^3 = 5/4.
  const auto p = solve_ground_state(3);
  const double u = std::cbrt(1.25);
  CHECK(p.positions[0] == doctest::Approx(-u).epsilon(1e-10));
  CHECK(std::abs(p.positions[1]) < 1e-10);
  CHECK(p.positions[2] == doctest::Approx(u).epsilon(1e-10));
}

TEST_CASE("N=50 solution agrees with a multi-start minimization oracle") {
  const auto p = solve_ground_state(50);
  std::mt19937 gen(7);
  std::uniform_real_distribution<double> jitter(-0.05, 0.05);
  for (int trial = 0; trial < 4; ++trial) {
    auto start = p.positions;
    for (auto& x : start) x += jitter(gen);
    const auto alt = detail::minimize_axial(start, 1e-10, 400);
    CHECK(std::abs(alt.front() - p.positions.front()) < 1e-6);
    CHECK(std::abs(alt.back() - p.positions.back()) < 1e-6);
  }
}

TEST_CASE("ground-state structure invariants") {
  for (int n : {10, 25, 50}) {
    const auto p = solve_ground_state(n);
    // Even under x -> -x.
    for (int i = 0; i < n; ++i)
      CHECK(std::abs(p.positions[std::size_t(i)] +
                     p.positions[std::size_t(n - 1 - i)]) < 1e-8);
    // Gaps increase from center to edge.
    std::vector<double> gaps;
    for (int i = 1; i < n; ++i)
      gaps.push_back(p.positions[std::size_t(i)] -
                     p.positions[std::size_t(i - 1)]);
    for (std::size_t i = gaps.size() / 2; i + 1 < gaps.size(); ++i)
      CHECK(gaps[i + 1] >= gaps[i] - 1e-12);
    // Gradient residual at the solution.
    std::vector<double> g;
    detail::axial_gradient(p.positions, g);
    CHECK(detail::norm2(g) < 1e-9);
  }
}

TEST_CASE("solver output is a local minimum") {
  const auto p = solve_ground_state(20);
  const double e0 = detail::axial_energy(p.positions);
  std::mt19937 gen(3);
  std::normal_distribution<double> perturb(0.0, 1e-3);
  for (int trial = 0; trial < 100; ++trial) {
    auto x = p.positions;
    for (auto& v : x) v += perturb(gen);
    std::sort(x.begin(), x.end());
    CHECK(detail::axial_energy(x) >= e0);
  }
}

TEST_CASE("solver is deterministic") {
  const auto a = solve_ground_state(30);
  const auto b = solve_ground_state(30);
  for (std::size_t i = 0; i < a.positions.size(); ++i)
    CHECK(a.positions[i] == b.positions[i]);
}

TEST_CASE("local density formula") {
  const int n = 50;
  const double L = 8.0;
  CHECK(local_density(0.0, n, L) == doctest::Approx(0.75 * n / L));
  CHECK(local_density(L / 2.0, n, L) ==
        doctest::Approx(0.75 * n / L * 0.75));
  CHECK_THROWS_AS(local_density(L, n, L), std::domain_error);
  CHECK_THROWS_AS(local_density(-1.1 * L, n, L), std::domain_error);
}

TEST_CASE("LDA central density matches the empirical central gap within 5%") {
  const auto p = solve_ground_state(50);
  const double n_lda = local_density(0.0, 50, p.half_length);
  const double n_emp = 1.0 / p.central_spacing;
  CHECK(n_lda == doctest::Approx(n_emp).epsilon(0.05));
}

TEST_CASE("finite-N critical frequency") {
  CHECK(critical_frequency_finite_n(50) ==
        doctest::Approx(0.75 * 50 / std::sqrt(std::log(50.0))).epsilon(1e-15));
  CHECK(critical_frequency_finite_n(50) == doctest::Approx(18.96).epsilon(0.001));
  CHECK_THROWS_AS(critical_frequency_finite_n(2), ConfigError);
}

TEST_CASE("finite-N formula vs solved chain within 15%") {
  const auto p = solve_ground_state(50);
  const double from_chain = std::sqrt(p.nu_c0_sq);
  const double from_formula = critical_frequency_finite_n(50);
  CHECK(std::abs(from_chain - from_formula) / from_formula < 0.15);
}

TEST_CASE("local critical frequency: both forms agree identically") {
  const auto p = solve_ground_state(50);
  CHECK(p.local_nu_c_sq(0.0) == doctest::Approx(p.nu_c0_sq).epsilon(1e-14));
  const double x_half = p.half_length / 2.0;
  CHECK(p.local_nu_c_sq(x_half) ==
        doctest::Approx(p.nu_c0_sq * std::pow(0.75, 3)).epsilon(1e-13));
  std::mt19937 gen(9);
  std::uniform_real_distribution<double> xs(-0.99, 0.99);
  for (int i = 0; i < 50; ++i) {
    const double x = xs(gen) * p.half_length;
    const double a = p.local_spacing(x);
    const double from_spacing = 4.0 / (a * a * a);
    const double u = x / p.half_length;
    const double from_parabola = p.nu_c0_sq * std::pow(1.0 - u * u, 3);
    CHECK(from_spacing == doctest::Approx(from_parabola).epsilon(1e-12));
  }
  CHECK_THROWS_AS(p.local_nu_c_sq(p.half_length * 1.01), std::domain_error);
}

TEST_CASE("local critical frequency decreases away from the center") {
  const auto p = solve_ground_state(40);
  double prev = p.local_nu_c_sq(0.0);
  for (double f = 0.1; f < 1.0; f += 0.1) {
    const double cur = p.local_nu_c_sq(f * p.half_length * 0.99);
    CHECK(cur < prev);
    prev = cur;
  }
}

TEST_CASE("thermodynamic critical frequency") {
  CHECK(thermodynamic_critical_frequency(1.0) ==
        doctest::Approx(2.0511458166).epsilon(1e-9));
  // omega0 ~ a^(-3/2): halving a multiplies by 2^(3/2).
  CHECK(thermodynamic_critical_frequency(0.5) ==
        doctest::Approx(std::pow(2.0, 1.5) * thermodynamic_critical_frequency(1.0))
            .epsilon(1e-12));
}

TEST_CASE("zeta constants match partial-sum evaluation") {
  long double z3 = 0.0L, z5 = 0.0L;
  for (int k = 1; k <= 2000000; ++k) {
    const long double kk = k;
    z3 += 1.0L / (kk * kk * kk);
    z5 += 1.0L / (kk * kk * kk * kk * kk);
  }
  // Euler-Maclaurin tail for zeta(3); zeta(5)'s tail is below 1e-25.
  const long double n = 2000000.0L;
  z3 += 1.0L / (2.0L * n * n) - 1.0L / (2.0L * n * n * n);
  CHECK(double(z3) == doctest::Approx(kZeta3).epsilon(1e-12));
  CHECK(double(z5) == doctest::Approx(kZeta5).epsilon(1e-12));
  CHECK(std::sqrt(7.0 * kZeta3 / 2.0) ==
        doctest::Approx(kCriticalFrequencyFactor).epsilon(1e-10));
}

TEST_CASE("stationary zigzag amplitude") {
  const auto p = solve_ground_state(50);
  // At onset (delta = 0) the amplitude is 0.
  CHECK(stationary_zigzag_amplitude(p, 0.0, p.nu_c0_sq) == 0.0);
  // Linear phase returns 0.
  CHECK(stationary_zigzag_amplitude(p, 0.0, p.nu_c0_sq * 1.1) == 0.0);
  // Inverted formula: delta = -2 A (0.1)^2 -> amplitude 0.1.
  const double a0 = p.central_spacing;
  const double target = 0.1;
  const double delta = -2.0 * quartic_coefficient(a0) * target * target;
  CHECK(stationary_zigzag_amplitude(p, 0.0, p.nu_c0_sq + delta) ==
        doctest::Approx(target).epsilon(1e-12));
}

TEST_CASE("chain profile JSON round trip") {
  const auto p = solve_ground_state(17);
  std::stringstream ss;
  ss << profile_to_json(p);
  const auto q = profile_from_json(nlohmann::json::parse(ss.str()));
  CHECK(q.positions == p.positions);
  CHECK(q.half_length == p.half_length);
  CHECK(q.outermost == p.outermost);
  CHECK(q.central_spacing == p.central_spacing);
  CHECK(q.omega0 == p.omega0);
  CHECK(q.nu_c0_sq == p.nu_c0_sq);
  nlohmann::json bad = profile_to_json(p);
  bad["schema_version"] = 999;
  CHECK_THROWS_AS(profile_from_json(bad), ConfigError);
}
