#include "kgeckart/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>

#include <boost/math/tools/toms748_solve.hpp>

namespace kgeckart {

double delta_of(const PotentialSpec& spec, double trial_energy) {
  const double radicand =
      1.0 - 8.0 * (trial_energy + spec.mass) * spec.v1 / (spec.alpha * spec.alpha);
  if (radicand < 0.0) {
    throw Error(ErrorCode::ComplexDelta, "1 - 8(E+M)v1/alpha^2 = " + format_double(radicand) +
                                             " at E = " + format_double(trial_energy));
  }
  return -0.5 + 0.5 * std::sqrt(radicand);
}

double effective_index(const PotentialSpec& spec, int n, double trial_energy) {
  const double nu = delta_of(spec, trial_energy) - n;
  if (!(nu > 0.0)) {
    throw Error(ErrorCode::DegenerateIndex, "delta - n = " + format_double(nu) + " <= 0 for n = " +
                                                std::to_string(n));
  }
  return nu;
}

double level_function(const PotentialSpec& spec, double trial_energy, double nu) {
  const double m = spec.mass;
  const double a2 = spec.alpha * spec.alpha;
  const double tilt = (trial_energy + m) * spec.v2;
  return m * m - trial_energy * trial_energy - tilt * tilt / (a2 * nu * nu) - a2 * nu * nu;
}

double spectrum_residual(const PotentialSpec& spec, int n, double trial_energy) {
  return level_function(spec, trial_energy, effective_index(spec, n, trial_energy));
}

PwPair pw_at(const PotentialSpec& spec, double trial_energy, double nu) {
  const double c = (trial_energy + spec.mass) * spec.v2 / (spec.alpha * spec.alpha);
  return PwPair{0.5 * (nu + c / nu), 0.5 * (nu - c / nu)};
}

namespace {

std::optional<double> residual_if_defined(const PotentialSpec& spec, int n, double e) {
  const double radicand = 1.0 - 8.0 * (e + spec.mass) * spec.v1 / (spec.alpha * spec.alpha);
  if (radicand < 0.0) return std::nullopt;
  const double nu = -0.5 + 0.5 * std::sqrt(radicand) - n;
  if (!(nu > 0.0)) return std::nullopt;
  return level_function(spec, e, nu);
}

// delta is monotone in E, so its largest value on the bracket sits at an end.
double delta_of_max(const PotentialSpec& spec) {
  double best = -1.0;
  for (double e : {bracket_lo(spec), bracket_hi(spec)}) {
    try {
      best = std::max(best, delta_of(spec, e));
    } catch (const Error&) {
    }
  }
  return best;
}

struct Candidate {
  double energy;
  double residual;
  int iterations;
};

}  // namespace

EnergyLevel solve_level(const PotentialSpec& spec, int n, const SolverSettings& settings) {
  settings.validate();
  const double lo = bracket_lo(spec);
  const double hi = bracket_hi(spec);
  const int samples = settings.bracket_samples;
  auto g = [&](double e) { return spectrum_residual(spec, n, e); };

  std::vector<double> grid_e(static_cast<std::size_t>(samples) + 1);
  std::vector<std::optional<double>> grid_g(grid_e.size());
  for (int i = 0; i <= samples; ++i) {
    grid_e[i] = i == samples ? hi : lo + (hi - lo) * i / samples;
    grid_g[i] = residual_if_defined(spec, n, grid_e[i]);
  }

  std::vector<Candidate> roots;
  bool converge_failed = false;
  for (std::size_t i = 0; i + 1 < grid_e.size(); ++i) {
    if (!grid_g[i] || !grid_g[i + 1]) continue;
    const double ga = *grid_g[i];
    const double gb = *grid_g[i + 1];
    if (ga == 0.0) {
      roots.push_back({grid_e[i], 0.0, 0});
      continue;
    }
    if (ga * gb > 0.0 || gb == 0.0) continue;

    std::uintmax_t iters = static_cast<std::uintmax_t>(settings.max_iter);
    const double floor_tol = 1e-3 * settings.abs_tol;
    auto tol = [floor_tol](double a, double b) {
      return std::abs(b - a) <= std::max(4.0 * std::numeric_limits<double>::epsilon() *
                                             std::max(std::abs(a), std::abs(b)),
                                         floor_tol);
    };
    auto [a, b] = boost::math::tools::toms748_solve(g, grid_e[i], grid_e[i + 1], ga, gb, tol,
                                                    iters);
    if (iters >= static_cast<std::uintmax_t>(settings.max_iter) && !tol(a, b)) {
      converge_failed = true;
      continue;
    }
    Candidate best{a, std::abs(g(a)), static_cast<int>(iters)};
    for (double e : {b, 0.5 * (a + b)}) {
      const double r = std::abs(g(e));
      if (r < best.residual) best = {e, r, static_cast<int>(iters)};
    }
    roots.push_back(best);
  }
  if (grid_g.back() && *grid_g.back() == 0.0) roots.push_back({grid_e.back(), 0.0, 0});

  const int root_count = static_cast<int>(roots.size());
  std::vector<EnergyLevel> accepted;
  for (const Candidate& c : roots) {
    EnergyLevel lv;
    lv.n = n;
    lv.energy = c.energy;
    lv.lambda = c.energy * c.energy - spec.mass * spec.mass;
    lv.delta = delta_of(spec, c.energy);
    const PwPair pw = pw_at(spec, c.energy, lv.delta - n);
    lv.p_param = pw.p;
    lv.w_param = pw.w;
    lv.residual = c.residual;
    lv.iterations = c.iterations;
    if (pw.p > 0.0 && pw.w > 0.0) accepted.push_back(lv);
  }

  if (accepted.empty()) {
    if (converge_failed) {
      throw Error(ErrorCode::NoConvergence,
                  "root refinement exceeded max_iter for level " + std::to_string(n));
    }
    throw Error(ErrorCode::NoRoot,
                "level " + std::to_string(n) + " is unbound (" + std::to_string(root_count) +
                    " non-normalizable root(s))");
  }

  auto best = std::min_element(accepted.begin(), accepted.end(),
                               [](const EnergyLevel& x, const EnergyLevel& y) {
                                 return x.lambda < y.lambda;
                               });
  EnergyLevel out = *best;
  out.root_count = root_count;
  out.normalizable_roots = static_cast<int>(accepted.size());
  if (!(out.residual < settings.abs_tol)) {
    throw Error(ErrorCode::NoConvergence, "level " + std::to_string(n) + " residual " +
                                              format_double(out.residual) + " above abs_tol");
  }
  return out;
}

Spectrum enumerate_levels(const PotentialSpec& spec, const SolverSettings& settings) {
  Spectrum out;
  for (int n = 0;; ++n) {
    try {
      out.levels.push_back(solve_level(spec, n, settings));
    } catch (const Error& e) {
      out.failures.push_back(LevelFailure{n, e.code(), e.what()});
      if (e.code() == ErrorCode::NoRoot) break;
      // Past the deepest possible index nothing can bind.
      if (n > delta_of_max(spec)) break;
    }
  }
  return out;
}

}  // namespace kgeckart
