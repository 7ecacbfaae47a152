#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include <boost/math/tools/toms748_solve.hpp>

#include "kgeckart/oracle.hpp"
#include "kgeckart/spectrum.hpp"
#include "kgeckart/wavefunction.hpp"

using namespace kgeckart;

namespace {

constexpr double kPi = std::numbers::pi;

TridiagonalOperator make_op(std::vector<double> diag, std::vector<double> off) {
  TridiagonalOperator op;
  // only the point count matters for bare matrices
  op.grid.r_max = 1.0;
  op.grid.n_points = diag.size() + 2;
  op.diagonal = std::move(diag);
  op.off_diagonal = std::move(off);
  return op;
}

// det(T - x I) by the three-term continuant recurrence
double char_poly(const TridiagonalOperator& op, double x) {
  double prev = 1.0;
  double cur = op.diagonal[0] - x;
  for (std::size_t i = 1; i < op.dimension(); ++i) {
    const double next = (op.diagonal[i] - x) * cur - op.off_diagonal[i - 1] * op.off_diagonal[i - 1] * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

// roots of the characteristic polynomial by a dense sign scan plus TOMS748
std::vector<double> char_poly_roots(const TridiagonalOperator& op, double lo, double hi) {
  std::vector<double> roots;
  const int samples = 200000;
  double xa = lo, pa = char_poly(op, xa);
  for (int i = 1; i <= samples; ++i) {
    const double xb = lo + (hi - lo) * i / samples;
    const double pb = char_poly(op, xb);
    if (pa == 0.0) {
      roots.push_back(xa);
    } else if (pa * pb < 0.0) {
      std::uintmax_t iters = 200;
      auto [a, b] = boost::math::tools::toms748_solve(
          [&](double x) { return char_poly(op, x); }, xa, xb, pa, pb,
          boost::math::tools::eps_tolerance<double>(52), iters);
      roots.push_back(0.5 * (a + b));
    }
    xa = xb;
    pa = pb;
  }
  return roots;
}

TridiagonalOperator box(const RadialGrid& g) { return discretize({0.0, 0.0, 1.0, 1.0}, 0.0, g); }

}  // namespace

TEST_CASE("2x2 operator") {
  const auto op = make_op({2.0, 2.0}, {-1.0});
  const auto ev = eigen_smallest_k(op, 2);
  CHECK(ev[0] == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(ev[1] == doctest::Approx(3.0).epsilon(1e-15));
  CHECK(count_below(op, 2.0) == 1);
  CHECK_THROWS_AS(eigen_smallest_k(op, 3), Error);
}

TEST_CASE("particle in a box") {
  const RadialGrid g = RadialGrid::make(50.0, 4001, DomainMode::FullLine);
  const TridiagonalOperator op = box(g);
  const double h = g.spacing();
  for (double d : op.diagonal) CHECK(d == 2.0 / (h * h));
  for (double o : op.off_diagonal) CHECK(o == -1.0 / (h * h));
  CHECK(op.dimension() == 3999);

  const double length = g.r_max - g.r_min;
  const auto ev = eigen_smallest_k(op, 3);
  CHECK(std::abs(ev[0] - kPi * kPi / (length * length)) < 1e-4);
  for (int m = 1; m <= 3; ++m) {
    const double exact = std::pow(kPi * m / length, 2);
    CHECK(std::abs(ev[m - 1] - exact) / exact < 1e-3);
  }

  const RadialFunction v = inverse_iteration_vector(op, ev[0]);
  std::vector<double> ref(g.n_points);
  for (std::size_t i = 0; i < g.n_points; ++i) ref[i] = std::sin(kPi * (g.point(i) - g.r_min) / length);
  RadialFunction sine = v;
  sine.values = ref;
  normalize_in_place(sine.values, g.spacing());
  CHECK(max_abs_difference_aligned(v, sine) < 1e-4);
  CHECK(v.node_count == 0);
  CHECK(v.values.front() == 0.0);
  CHECK(v.values.back() == 0.0);
}

TEST_CASE("Sturm bisection agrees with characteristic polynomial roots") {
  std::mt19937_64 rng(59);
  std::uniform_real_distribution<double> diag(-3.0, 3.0), off(0.5, 1.5);
  std::uniform_int_distribution<int> size(1, 8);
  for (int t = 0; t < 300; ++t) {
    const int n = size(rng);
    std::vector<double> d(n), e(n > 0 ? n - 1 : 0);
    for (double& x : d) x = diag(rng);
    for (double& x : e) x = (rng() % 2 ? 1.0 : -1.0) * off(rng);
    const auto op = make_op(d, e);
    const double r = op.norm_bound() + 1.0;
    const auto roots = char_poly_roots(op, -r, r);
    REQUIRE(roots.size() == static_cast<std::size_t>(n));
    const auto ev = eigen_smallest_k(op, n);
    for (int i = 0; i < n; ++i) CHECK(std::abs(ev[i] - roots[i]) < 1e-10);
    for (int i = 1; i < n; ++i) CHECK(ev[i] > ev[i - 1]);
  }
}

TEST_CASE("frozen-coupling sech^2 well") {
  // E = 0 freezes V_eff = 2 v1 sech^2(r) = -4 sech^2(r); s(s+1) = 4
  const PotentialSpec s{-2.0, 0.0, 1.0, 1.0};
  const RadialGrid g = default_grid(s);
  const double depth = (-1.0 + std::sqrt(17.0)) / 2.0;
  for (std::size_t k = 0; k < 2; ++k) {
    const double exact = -std::pow(depth - k, 2);
    CHECK(std::abs(extrapolated_eigenvalue(s, 0.0, g, k, 3) - exact) / std::abs(exact) < 1e-6);
  }
  // the bare fine-grid eigenvalue carries the O(h^2) error
  const double bare = eigenvalue(discretize(s, 0.0, g), 0);
  CHECK(std::abs(bare + depth * depth) > 1e-6 * depth * depth);
}

TEST_CASE("symmetric operators give alternating parity") {
  const PotentialSpec s{-5.0, 0.0, 1.0, 1.0};
  const RadialGrid g = default_grid(s);
  const TridiagonalOperator op = discretize(s, -0.2, g);
  const auto ev = eigen_smallest_k(op, 4);
  for (int k = 0; k < 4; ++k) {
    const RadialFunction v = inverse_iteration_vector(op, ev[k]);
    CHECK(v.node_count == k);
    const double sign = k % 2 ? -1.0 : 1.0;
    double worst = 0.0;
    for (std::size_t i = 0; i < g.n_points; ++i) {
      worst = std::max(worst, std::abs(v.values[i] - sign * v.values[g.n_points - 1 - i]));
    }
    CHECK(worst < 1e-8);
  }
}

TEST_CASE("inverse iteration residuals and node counts") {
  std::mt19937_64 rng(61);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int t = 0; t < 10; ++t) {
    const PotentialSpec s = PotentialSpec::make(-(0.5 + 5.0 * u(rng)), u(rng) - 0.5, 1.0, 1.0);
    const RadialGrid g = RadialGrid::make(30.0, 2001, DomainMode::FullLine);
    const TridiagonalOperator op = discretize(s, 2.0 * u(rng) - 1.0, g);
    const auto ev = eigen_smallest_k(op, 3);
    for (int k = 0; k < 3; ++k) {
      const RadialFunction v = inverse_iteration_vector(op, ev[k]);
      CHECK(v.node_count == k);
      // residual on the unit-2-norm interior vector
      std::vector<double> x(v.values.begin() + 1, v.values.end() - 1);
      double n2 = 0.0;
      for (double xi : x) n2 += xi * xi;
      for (double& xi : x) xi /= std::sqrt(n2);
      double worst = 0.0;
      for (std::size_t i = 0; i < x.size(); ++i) {
        double y = (op.diagonal[i] - ev[k]) * x[i];
        if (i > 0) y += op.off_diagonal[i - 1] * x[i - 1];
        if (i + 1 < x.size()) y += op.off_diagonal[i] * x[i + 1];
        worst = std::max(worst, std::abs(y));
      }
      CHECK(worst < 1e-8 * std::abs(ev[k]) + 8.0 * 2.2e-16 * op.norm_bound());
    }
  }
}

TEST_CASE("near-degenerate shift is refused") {
  // Wilkinson W21+: the top pair is split by ~1e-14
  std::vector<double> d(21), e(20, 1.0);
  for (int i = 0; i < 21; ++i) d[i] = std::abs(10 - i);
  const auto op = make_op(d, e);
  const double top = eigenvalue(op, 20);
  try {
    inverse_iteration_vector(op, top);
    FAIL("expected IllConditionedShift");
  } catch (const Error& ex) {
    CHECK(ex.code() == ErrorCode::IllConditionedShift);
  }
}

TEST_CASE("self-consistent levels") {
  const SolverSettings settings;
  const PotentialSpec well{-2.0, 0.0, 1.0, 1.0};
  const RadialGrid g = default_grid(well);
  const OracleReport r0 = self_consistent_level(well, 0, g, settings);
  CHECK(r0.energy == doctest::Approx(-0.685403787723).epsilon(1e-9));
  CHECK(r0.sc_residual < 1e-9);
  CHECK(r0.eigenvector.node_count == 0);
  CHECK(r0.lambda_matrix == doctest::Approx(r0.energy * r0.energy - 1.0).epsilon(1e-9));

  const RadialGrid fine = RadialGrid::make(g.r_max, 2 * g.n_points - 1, DomainMode::FullLine);
  CHECK(std::abs(self_consistent_level(well, 0, fine, settings).energy - r0.energy) < 1e-7);

  const PotentialSpec barrier{0.5, 0.0, 1.0, 1.0};
  for (int k = 0; k < 3; ++k) {
    try {
      self_consistent_level(barrier, k, g, settings);
      FAIL("expected NoBoundState");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::NoBoundState);
    }
  }
  CHECK(oracle_census(barrier, g, settings).empty());
}

TEST_CASE("eigenvalues increase strictly with index") {
  const PotentialSpec s{-5.0, 0.5, 1.0, 1.0};
  const TridiagonalOperator op = discretize(s, 0.1, default_grid(s));
  const auto ev = eigen_smallest_k(op, 12);
  for (std::size_t i = 1; i < ev.size(); ++i) CHECK(ev[i] > ev[i - 1]);
}

TEST_CASE("richardson level selection") {
  CHECK(richardson_levels_for(RadialGrid::make(1.0, 4001, DomainMode::FullLine)) == 3);
  CHECK(richardson_levels_for(RadialGrid::make(1.0, 4003, DomainMode::FullLine)) == 2);
  CHECK(richardson_levels_for(RadialGrid::make(1.0, 3, DomainMode::FullLine)) == 1);
}
