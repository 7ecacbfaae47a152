#include <doctest.h>

#include <cmath>
#include <random>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "kgeckart/spectrum.hpp"
#include "kgeckart/susy.hpp"

using namespace kgeckart;

namespace {

const PotentialSpec kWell{-2.0, 0.5, 1.0, 1.0};

SuperCoeffs coeffs(double a, double b) {
  SuperCoeffs c;
  c.a_coef = a;
  c.b_coef = b;
  c.lambda0 = -(a * a + b * b);
  return c;
}

// attractive spec and trial energy with a real superpotential
struct Sample {
  PotentialSpec spec;
  double energy;
};

Sample random_sample(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (;;) {
    const double alpha = 0.3 + 2.7 * u(rng);
    const double mass = 0.5 + 1.5 * u(rng);
    const PotentialSpec s = PotentialSpec::make(-8.0 * u(rng), 2.0 * u(rng) - 1.0, alpha, mass);
    const double e = mass * (2.0 * u(rng) - 1.0);
    if (alpha * alpha - 8.0 * (e + mass) * s.v1 >= 0.0) return {s, e};
  }
}

}  // namespace

TEST_CASE("effective potential values") {
  CHECK(effective_potential({0.0, 0.0, 1.0, 1.0}, 0.3, 2.0) == 0.0);
  CHECK(effective_potential({1.0, 0.0, 1.0, 1.0}, 1.0, 0.0) == 4.0);

  using Big = boost::multiprecision::cpp_bin_float_50;
  const Big r = 3, c = cosh(r);
  const Big ref = 2 * (Big(0) + 1) * (Big(-2) / (c * c) - Big("0.5") * tanh(r));
  const double want = static_cast<double>(ref);
  CHECK(std::abs(effective_potential(kWell, 0.0, 3.0) - want) <= 4e-16 * std::abs(want));

  // saturates instead of overflowing
  CHECK(std::isfinite(effective_potential(kWell, 0.2, 1e6)));
  CHECK(effective_potential(kWell, 0.2, 1e6) == doctest::Approx(-2.0 * 1.2 * 0.5));
}

TEST_CASE("super_coeffs examples") {
  const SuperCoeffs free = super_coeffs({0.0, 0.0, 1.0, 1.0}, 0.0, Branch::Plus);
  CHECK(free.a_coef == 0.0);
  CHECK(free.b_coef == 1.0);

  const SuperCoeffs tilt = super_coeffs({0.0, 1.0, 1.0, 1.0}, 1.0, Branch::Plus);
  CHECK(tilt.b_coef == 1.0);
  CHECK(tilt.a_coef == 2.0);

  const SuperCoeffs c = super_coeffs(kWell, 0.2, Branch::Plus);
  CHECK(riccati_residual(kWell, c, default_grid(kWell)) < 1e-10);
  CHECK(c.a_coef * c.b_coef == doctest::Approx((0.2 + 1.0) * 0.5).epsilon(1e-14));
  CHECK(c.b_coef * (c.b_coef - 1.0) == doctest::Approx(-2.0 * 1.2 * -2.0).epsilon(1e-14));
}

TEST_CASE("super_coeffs errors and branch invariants") {
  try {
    super_coeffs({1.0, 0.0, 1.0, 1.0}, 0.0, Branch::Plus);
    FAIL("expected ComplexDiscriminant");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ComplexDiscriminant);
  }
  try {
    super_coeffs({0.0, 0.5, 1.0, 1.0}, 0.0, Branch::Minus);
    FAIL("expected DivisionByZero");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DivisionByZero);
  }
  // v2 = 0 makes the vanishing denominator harmless
  CHECK(super_coeffs({0.0, 0.0, 1.0, 1.0}, 0.0, Branch::Minus).a_coef == 0.0);

  std::mt19937_64 rng(17);
  for (int i = 0; i < 500; ++i) {
    const auto [s, e] = random_sample(rng);
    const SuperCoeffs plus = super_coeffs(s, e, Branch::Plus);
    const SuperCoeffs minus = super_coeffs(s, e, Branch::Minus);
    CHECK(plus.b_coef >= s.alpha / 2.0);
    CHECK(minus.b_coef <= s.alpha / 2.0);
    CHECK(plus.trial_energy == e);
  }
}

TEST_CASE("riccati residual vanishes on both branches") {
  std::mt19937_64 rng(23);
  for (int i = 0; i < 200; ++i) {
    const auto [s, e] = random_sample(rng);
    const RadialGrid g = default_grid(s);
    for (Branch b : {Branch::Plus, Branch::Minus}) {
      SuperCoeffs c;
      try {
        c = super_coeffs(s, e, b);
      } catch (const Error&) {
        continue;
      }
      CHECK(riccati_residual(s, c, g) < 1e-10);
    }
  }

  const PotentialSpec zero{0.0, 0.0, 1.0, 1.0};
  SuperCoeffs flat;
  CHECK(riccati_residual(zero, flat, default_grid(zero)) == 0.0);

  SuperCoeffs shifted = super_coeffs(kWell, 0.2, Branch::Plus);
  shifted.lambda0 += 1.0;
  CHECK(riccati_residual(kWell, shifted, default_grid(kWell)) >= 1.0 - 1e-12);
}

TEST_CASE("superpotential values") {
  CHECK(superpotential(coeffs(0.0, 0.0), 1.0, 0.7) == 0.0);
  CHECK(superpotential(coeffs(1.0, 1.0), 1.0, 0.0) == 1.0);
  CHECK(std::abs(superpotential(coeffs(1.0, 2.0), 1.0, 25.0) - (1.0 - 2.0)) < 1e-15);
}

TEST_CASE("derivative matches centered differences") {
  for (double alpha : {0.5, 1.0, 2.0}) {
    const SuperCoeffs c = coeffs(0.7, 1.9);
    const RadialGrid g = RadialGrid::make(25.0 / alpha, 4001, DomainMode::FullLine);
    const double step = 1e-5 / alpha;
    double worst = 0.0;
    for (double r : g.points()) {
      const double fd = (superpotential(c, alpha, r + step) - superpotential(c, alpha, r - step)) /
                        (2.0 * step);
      worst = std::max(worst, std::abs(fd - superpotential_derivative(c, alpha, r)));
    }
    CHECK(worst < 1e-8);
  }
}

TEST_CASE("partner potentials") {
  const auto [vp0, vm0] = partner_potentials(coeffs(0.0, 0.0), 1.0, 0.4);
  CHECK(vp0 == 0.0);
  CHECK(vm0 == 0.0);

  // A = 0, B = alpha: W^2 - W' is the constant alpha^2
  for (double alpha : {0.5, 1.0, 3.0}) {
    const RadialGrid g = RadialGrid::make(25.0 / alpha, 4001, DomainMode::FullLine);
    double worst = 0.0;
    for (double r : g.points()) {
      worst = std::max(worst,
                       std::abs(partner_potentials(coeffs(0.0, alpha), alpha, r).second - alpha * alpha));
    }
    CHECK(worst < 1e-12);
  }

  const SuperCoeffs c = coeffs(1.0, 2.0);
  const double r = 0.7, step = 1e-5;
  const double w = superpotential(c, 1.0, r);
  const double dw = (superpotential(c, 1.0, r + step) - superpotential(c, 1.0, r - step)) / (2 * step);
  const auto [vp, vm] = partner_potentials(c, 1.0, r);
  CHECK(std::abs(vp - (w * w + dw)) < 1e-8);
  CHECK(std::abs(vm - (w * w - dw)) < 1e-8);
}

TEST_CASE("partner potentials flatten at the grid ends") {
  std::mt19937_64 rng(29);
  for (int i = 0; i < 100; ++i) {
    const auto [s, e] = random_sample(rng);
    const SuperCoeffs c = super_coeffs(s, e, Branch::Plus);
    const double a = c.a_coef, b = c.b_coef, edge = 25.0 / s.alpha;
    const auto [vp_right, vm_right] = partner_potentials(c, s.alpha, edge);
    const auto [vp_left, vm_left] = partner_potentials(c, s.alpha, -edge);
    const double scale = std::max(1.0, a * a + b * b);
    CHECK(std::abs(vp_right - (a * a + b * b - 2 * a * b)) < 1e-9 * scale);
    CHECK(std::abs(vm_right - (a * a + b * b - 2 * a * b)) < 1e-9 * scale);
    CHECK(std::abs(vp_left - (a * a + b * b + 2 * a * b)) < 1e-9 * scale);
    CHECK(std::abs(vm_left - (a * a + b * b + 2 * a * b)) < 1e-9 * scale);
  }
}

TEST_CASE("shape_step examples") {
  const ShapeParams p = shape_step(0.0, 2.0, 1.0);
  CHECK(p.a0 == 0.0);
  CHECK(p.a1 == 1.0);
  CHECK(p.remainder == -3.0);

  const ShapeParams q = shape_step(1.0, 2.0, 1.0);
  CHECK(q.a0 == 2.0);
  CHECK(q.a1 == 1.0);
  CHECK(q.remainder == 0.0);

  try {
    shape_step(1.0, 1.0, 1.0);
    FAIL("expected SingularMap");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::SingularMap);
  }

  // three steps from (1, 3.4)
  const SuperCoeffs start = coeffs(1.0, 3.4);
  const auto ladder = shape_ladder(start, 1.0, 3);
  REQUIRE(ladder.size() == 3);
  const double gap = 3.0 - 3.4;
  const double closed = std::pow(1.0 * 3.4 / gap, 2) + gap * gap - (1.0 + 3.4 * 3.4);
  CHECK(ladder.back().cumulative == doctest::Approx(closed).epsilon(1e-12));
  CHECK(ladder.back().cumulative == doctest::Approx(susy_ladder(start, 1.0, 3) - (1.0 + 3.4 * 3.4)).epsilon(1e-12));
}

TEST_CASE("shape invariance holds pointwise along the ladder") {
  std::mt19937_64 rng(31);
  for (int i = 0; i < 60; ++i) {
    const auto [s, e] = random_sample(rng);
    const SuperCoeffs c = super_coeffs(s, e, Branch::Plus);
    const int steps = static_cast<int>(std::ceil(c.b_coef / s.alpha)) - 1;
    const auto ladder = shape_ladder(c, s.alpha, steps);
    const RadialGrid g = default_grid(s);
    SuperCoeffs prev = c;
    for (const LadderTerm& t : ladder) {
      const SuperCoeffs next = coeffs(t.params.a0, t.params.a1);
      double worst = 0.0;
      for (double r : g.points()) {
        const double diff = partner_potentials(next, s.alpha, r).first -
                            partner_potentials(prev, s.alpha, r).second;
        worst = std::max(worst, std::abs(diff - t.params.remainder));
      }
      const double scale = std::max({1.0, next.a_coef * next.a_coef + next.b_coef * next.b_coef,
                                     prev.a_coef * prev.a_coef + prev.b_coef * prev.b_coef});
      CHECK(worst < 1e-10 * scale);
      // A B is carried unchanged
      CHECK(next.a_coef * next.b_coef == doctest::Approx(c.a_coef * c.b_coef).epsilon(1e-12));
      prev = next;
    }
  }
}

TEST_CASE("susy_ladder closed form") {
  CHECK(susy_ladder(coeffs(0.0, 2.0), 1.0, 1) == 1.0);
  const SuperCoeffs c = super_coeffs(kWell, -0.3, Branch::Plus);
  CHECK(susy_ladder(c, 1.0, 0) == doctest::Approx(-c.lambda0).epsilon(1e-15));
  try {
    susy_ladder(coeffs(0.5, 2.0), 1.0, 2);
    FAIL("expected LadderTerminated");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::LadderTerminated);
  }

  std::mt19937_64 rng(37);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 500; ++i) {
    const double alpha = 0.3 + 2.0 * u(rng);
    const SuperCoeffs start = coeffs(4.0 * u(rng) - 2.0, alpha * (0.6 + 8.0 * u(rng)));
    const int top = static_cast<int>(std::ceil(start.b_coef / alpha)) - 1;
    const auto ladder = shape_ladder(start, alpha, top);
    for (const LadderTerm& t : ladder) {
      const double closed = susy_ladder(start, alpha, t.k) + start.lambda0;
      CHECK(std::abs(t.cumulative - closed) <= 1e-12 * std::max(std::abs(closed), 1.0));
    }
  }
}

TEST_CASE("ladder reproduces the bound-state condition at solved levels") {
  for (const PotentialSpec& s : {PotentialSpec{-2.0, 0.0, 1.0, 1.0}, PotentialSpec{-5.0, 0.25, 1.0, 1.0}}) {
    const Spectrum sp = enumerate_levels(s, SolverSettings{});
    REQUIRE_FALSE(sp.levels.empty());
    for (const EnergyLevel& lv : sp.levels) {
      const SuperCoeffs c = super_coeffs(s, lv.energy, Branch::Plus);
      const double m2 = s.mass * s.mass - lv.energy * lv.energy;
      CHECK(susy_ladder(c, s.alpha, lv.n + 1) == doctest::Approx(m2).epsilon(1e-11));
    }
  }
}
