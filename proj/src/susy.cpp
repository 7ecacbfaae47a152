#include "kgeckart/susy.hpp"

#include <algorithm>
#include <cmath>

namespace kgeckart {

namespace {

double sech2(double x) {
  const double c = std::cosh(x);
  return std::isfinite(c) ? 1.0 / (c * c) : 0.0;
}

}  // namespace

double effective_potential(const PotentialSpec& spec, double trial_energy, double r) {
  const double ar = spec.alpha * r;
  return 2.0 * (trial_energy + spec.mass) * (spec.v1 * sech2(ar) - spec.v2 * std::tanh(ar));
}

SuperCoeffs super_coeffs(const PotentialSpec& spec, double trial_energy, Branch branch) {
  const double coupling = trial_energy + spec.mass;
  const double disc = spec.alpha * spec.alpha - 8.0 * coupling * spec.v1;
  if (disc < 0.0) {
    throw Error(ErrorCode::ComplexDiscriminant,
                "alpha^2 - 8(E+M)v1 = " + format_double(disc) + " < 0 at E = " +
                    format_double(trial_energy));
  }
  const double root = std::sqrt(disc);
  const double denom = branch == Branch::Plus ? spec.alpha + root : spec.alpha - root;
  const double numer = 2.0 * coupling * spec.v2;

  SuperCoeffs c;
  c.branch = branch;
  c.trial_energy = trial_energy;
  c.b_coef = 0.5 * denom;
  if (denom == 0.0) {
    // W = A is then constant and 2AB = 2(E+M)v2 must vanish.
    if (numer != 0.0) {
      throw Error(ErrorCode::DivisionByZero, "branch denominator vanishes with v2 != 0");
    }
    c.a_coef = 0.0;
  } else {
    c.a_coef = numer / denom;
  }
  c.lambda0 = -(c.a_coef * c.a_coef + c.b_coef * c.b_coef);
  return c;
}

double superpotential(const SuperCoeffs& coeffs, double alpha, double r) {
  return coeffs.a_coef - coeffs.b_coef * std::tanh(alpha * r);
}

double superpotential_derivative(const SuperCoeffs& coeffs, double alpha, double r) {
  return -coeffs.b_coef * alpha * sech2(alpha * r);
}

std::pair<double, double> partner_potentials(const SuperCoeffs& coeffs, double alpha, double r) {
  const double a = coeffs.a_coef;
  const double b = coeffs.b_coef;
  const double s2 = sech2(alpha * r);
  const double t = std::tanh(alpha * r);
  const double base = a * a + b * b - 2.0 * a * b * t;
  return {base - b * (b + alpha) * s2, base - b * (b - alpha) * s2};
}

double riccati_residual(const PotentialSpec& spec, const SuperCoeffs& coeffs,
                        const RadialGrid& grid) {
  double worst = 0.0;
  for (std::size_t i = 0; i < grid.n_points; ++i) {
    const double r = grid.point(i);
    const double w = superpotential(coeffs, spec.alpha, r);
    const double dw = superpotential_derivative(coeffs, spec.alpha, r);
    const double lhs = w * w - dw;
    const double rhs = effective_potential(spec, coeffs.trial_energy, r) - coeffs.lambda0;
    worst = std::max(worst, std::abs(lhs - rhs));
  }
  return worst;
}

ShapeParams shape_step(double a_coef, double b_coef, double alpha) {
  const double gap = alpha - b_coef;
  if (gap == 0.0) throw Error(ErrorCode::SingularMap, "B equals alpha; shape map is singular");
  ShapeParams p;
  p.a0 = -a_coef * b_coef / gap;
  p.a1 = -alpha + b_coef;
  p.remainder = p.a0 * p.a0 + p.a1 * p.a1 - (a_coef * a_coef + b_coef * b_coef);
  return p;
}

std::vector<LadderTerm> shape_ladder(const SuperCoeffs& coeffs, double alpha, int n_steps) {
  std::vector<LadderTerm> terms;
  terms.reserve(static_cast<std::size_t>(std::max(n_steps, 0)));
  // parameters are anchored to B - k alpha and the invariant A B instead of
  // iterating the map, so rounding does not build up as B approaches k alpha
  const double product = coeffs.a_coef * coeffs.b_coef;
  double a = coeffs.a_coef;
  double b = coeffs.b_coef;
  double cumulative = 0.0;
  for (int k = 1; k <= n_steps; ++k) {
    ShapeParams p = shape_step(a, b, alpha);
    p.a1 = coeffs.b_coef - alpha * k;
    p.a0 = product / p.a1;
    p.remainder = p.a0 * p.a0 + p.a1 * p.a1 - (a * a + b * b);
    cumulative += p.remainder;
    terms.push_back(LadderTerm{k, p, cumulative});
    a = p.a0;
    b = p.a1;
  }
  return terms;
}

double susy_ladder(const SuperCoeffs& coeffs, double alpha, int n) {
  if (n < 0) throw Error(ErrorCode::InvalidValue, "ladder index must be >= 0");
  const double gap = alpha * n - coeffs.b_coef;
  if (gap >= 0.0) {
    throw Error(ErrorCode::LadderTerminated,
                "alpha*n >= B at n = " + std::to_string(n) + " (B = " +
                    format_double(coeffs.b_coef) + ")");
  }
  const double a_n = -coeffs.a_coef * coeffs.b_coef / gap;
  return a_n * a_n + gap * gap;
}

}  // namespace kgeckart
