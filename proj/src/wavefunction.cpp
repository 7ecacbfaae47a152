#include "kgeckart/wavefunction.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "kgeckart/specialfns.hpp"

namespace kgeckart {

namespace {

double log_cosh(double x) {
  const double ax = std::abs(x);
  return ax + std::log1p(std::exp(-2.0 * ax)) - std::numbers::ln2;
}

std::vector<double> sample_positions(const RadialGrid& grid) {
  std::vector<double> r = grid.points();
  if (grid.mode == DomainMode::HalfLine) {
    const double half = 0.5 * grid.spacing();
    for (double& x : r) x += half;
  }
  return r;
}

// f representation of a sampled function (HalfLine stores R = f / r).
std::vector<double> f_values(const RadialFunction& fn) {
  if (fn.grid.mode == DomainMode::FullLine) return fn.values;
  std::vector<double> f(fn.values.size());
  for (std::size_t i = 0; i < f.size(); ++i) f[i] = fn.positions[i] * fn.values[i];
  return f;
}

// Builds a normalized RadialFunction from log|prefactor| and a bounded
// polynomial factor, rescaling by the largest log before exponentiating.
RadialFunction assemble(const RadialGrid& grid, const std::vector<double>& positions,
                        const std::vector<double>& log_pre, const std::vector<double>& poly,
                        double f_at_origin_log, double f_at_origin_poly) {
  const double log_max = *std::max_element(log_pre.begin(), log_pre.end());
  RadialFunction fn;
  fn.grid = grid;
  fn.positions = positions;
  fn.values.resize(positions.size());
  for (std::size_t i = 0; i < positions.size(); ++i) {
    fn.values[i] = std::exp(log_pre[i] - log_max) * poly[i];
  }

  double fmax = 0.0;
  for (double v : fn.values) fmax = std::max(fmax, std::abs(v));
  if (grid.mode == DomainMode::HalfLine) {
    const double f0 = std::exp(f_at_origin_log - log_max) * f_at_origin_poly;
    fn.pole_at_origin = std::abs(f0) > 1e-12 * fmax;
    for (std::size_t i = 0; i < positions.size(); ++i) fn.values[i] /= positions[i];
  }

  std::vector<double> weight;
  if (grid.mode == DomainMode::HalfLine) {
    weight.resize(positions.size());
    for (std::size_t i = 0; i < positions.size(); ++i) weight[i] = positions[i] * positions[i];
  }
  const double factor = normalize_in_place(fn.values, grid.spacing(), weight);
  fn.norm_constant = factor * std::exp(-log_max);
  fn.node_count = count_nodes(fn.values);
  return fn;
}

}  // namespace

PwPair pw_params(const PotentialSpec& spec, const EnergyLevel& level) {
  const double nu = effective_index(spec, level.n, level.energy);
  return pw_at(spec, level.energy, nu);
}

double analytic_f(const PotentialSpec& spec, int n, const PwPair& pw, double r) {
  const double ar = spec.alpha * r;
  const double log_pre = -(pw.p + pw.w) * log_cosh(ar) + (pw.p - pw.w) * ar;
  return std::exp(log_pre) * jacobi_eval({n, 2.0 * pw.w, 2.0 * pw.p}, std::tanh(ar));
}

RadialFunction ground_state_f(const PotentialSpec& spec, const SuperCoeffs& coeffs,
                              const RadialGrid& grid) {
  const double a = coeffs.a_coef;
  const double b = coeffs.b_coef;
  // tail exponents: exp((B - A) r) at +inf, exp((A + B)|r|) at -inf
  const bool right_decays = b - a < 0.0;
  const bool left_decays = a + b < 0.0;
  if (!right_decays || (grid.mode == DomainMode::FullLine && !left_decays)) {
    throw Error(ErrorCode::NotNormalizable,
                "exp(-A r) cosh^(B/alpha) grows at a grid end (A = " + format_double(a) +
                    ", B = " + format_double(b) + ")");
  }
  const std::vector<double> r = sample_positions(grid);
  std::vector<double> log_pre(r.size());
  for (std::size_t i = 0; i < r.size(); ++i) {
    log_pre[i] = -a * r[i] + (b / spec.alpha) * log_cosh(spec.alpha * r[i]);
  }
  const std::vector<double> ones(r.size(), 1.0);
  return assemble(grid, r, log_pre, ones, 0.0, 1.0);
}

RadialFunction excited_state_R(const PotentialSpec& spec, const EnergyLevel& level,
                               const RadialGrid& grid) {
  const PwPair pw = pw_params(spec, level);
  if (!(pw.w > 0.0) || (grid.mode == DomainMode::FullLine && !(pw.p > 0.0))) {
    throw Error(ErrorCode::NotNormalizable, "level " + std::to_string(level.n) +
                                                " has p = " + format_double(pw.p) +
                                                ", w = " + format_double(pw.w));
  }
  const JacobiParams jp{level.n, 2.0 * pw.w, 2.0 * pw.p};
  const std::vector<double> r = sample_positions(grid);
  std::vector<double> log_pre(r.size());
  std::vector<double> poly(r.size());
  for (std::size_t i = 0; i < r.size(); ++i) {
    const double ar = spec.alpha * r[i];
    log_pre[i] = -(pw.p + pw.w) * log_cosh(ar) + (pw.p - pw.w) * ar;
    poly[i] = jacobi_eval(jp, std::tanh(ar));
  }
  return assemble(grid, r, log_pre, poly, 0.0, jacobi_eval(jp, 0.0));
}

double ode_residual(const PotentialSpec& spec, const EnergyLevel& level,
                    const RadialFunction& fn) {
  const std::vector<double> f = f_values(fn);
  const std::vector<double> d2 = central_diff2(f, fn.grid.spacing());
  double fmax = 0.0;
  for (double v : f) fmax = std::max(fmax, std::abs(v));
  double worst = 0.0;
  for (std::size_t i = 1; i + 1 < f.size(); ++i) {
    const double v = effective_potential(spec, level.energy, fn.positions[i]);
    worst = std::max(worst, std::abs(-d2[i - 1] + (v - level.lambda) * f[i]));
  }
  return worst / fmax;
}

double inner_product(const RadialFunction& a, const RadialFunction& b) {
  const std::vector<double> fa = f_values(a);
  const std::vector<double> fb = f_values(b);
  std::vector<double> prod(fa.size());
  for (std::size_t i = 0; i < fa.size(); ++i) prod[i] = fa[i] * fb[i];
  return simpson(prod, a.grid.spacing());
}

double max_abs_difference_aligned(const RadialFunction& a, const RadialFunction& b) {
  double dot = 0.0;
  for (std::size_t i = 0; i < a.values.size(); ++i) dot += a.values[i] * b.values[i];
  const double s = dot < 0.0 ? -1.0 : 1.0;
  double worst = 0.0;
  for (std::size_t i = 0; i < a.values.size(); ++i) {
    worst = std::max(worst, std::abs(a.values[i] - s * b.values[i]));
  }
  return worst;
}

}  // namespace kgeckart
