#pragma once

// Bound-state condition
//   g_n(E) = M^2 - E^2 - (E+M)^2 v2^2 / (alpha^2 nu^2) - alpha^2 nu^2,
//   nu = delta(E) - n,   delta(E) = -1/2 + 1/2 sqrt(1 - 8(E+M) v1 / alpha^2),
// solved level by level on (-M, M). delta depends on E, so g_n is
// transcendental and each level needs a bracketed root search.

#include <string>
#include <vector>

#include "kgeckart/core.hpp"

namespace kgeckart {

struct EnergyLevel {
  int n = 0;
  double energy = 0.0;
  double lambda = 0.0;  // E^2 - M^2
  double delta = 0.0;
  double p_param = 0.0;
  double w_param = 0.0;
  double residual = 0.0;  // |g_n(E)|
  int iterations = 0;
  int root_count = 0;          // sign changes of g_n found by the scan
  int normalizable_roots = 0;  // of those, roots with p > 0 and w > 0
};

struct PwPair {
  double p = 0.0;
  double w = 0.0;
};

/// Throws ComplexDelta when 1 - 8(E+M)v1/alpha^2 < 0.
double delta_of(const PotentialSpec& spec, double trial_energy);

/// nu = delta(E) - n; throws DegenerateIndex when nu <= 0.
double effective_index(const PotentialSpec& spec, int n, double trial_energy);

/// g as a function of (E, nu), without the delta(E) coupling.
double level_function(const PotentialSpec& spec, double trial_energy, double nu);

double spectrum_residual(const PotentialSpec& spec, int n, double trial_energy);

/// p = (nu + c/nu)/2, w = (nu - c/nu)/2 with c = (E+M) v2 / alpha^2.
/// alpha p and alpha w are half the decay rates toward -inf and +inf.
PwPair pw_at(const PotentialSpec& spec, double trial_energy, double nu);

/// Scan + TOMS748 refinement. Roots whose p or w is not positive are
/// non-normalizable artifacts of the squared condition and are dropped;
/// among the rest the most bound wins. Throws NoRoot or NoConvergence.
EnergyLevel solve_level(const PotentialSpec& spec, int n, const SolverSettings& settings);

struct LevelFailure {
  int n = 0;
  ErrorCode code = ErrorCode::NoRoot;
  std::string message;
};

struct Spectrum {
  std::vector<EnergyLevel> levels;    // ascending n, hence ascending E
  std::vector<LevelFailure> failures; // the terminating NoRoot is last
};

/// Levels n = 0, 1, ... until the first NoRoot. lambda = E^2 - M^2 is not
/// monotone in n (V_eff depends on E); E is.
Spectrum enumerate_levels(const PotentialSpec& spec, const SolverSettings& settings);

}  // namespace kgeckart
