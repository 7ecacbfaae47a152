#pragma once

// Finite-difference reference path. The energy-dependent operator
//   -d^2/dr^2 + V_eff(r; E)
// is discretized with the 3-point stencil (Dirichlet at both grid ends),
// eigenvalues come from Sturm-count bisection, and a level is the root of
//   h(E) = lambda_k(E) - (E^2 - M^2).
// Oracle vectors hold f itself on grid.points(), in both domain modes.

#include <cstddef>
#include <vector>

#include "kgeckart/core.hpp"

namespace kgeckart {

struct TridiagonalOperator {
  std::vector<double> diagonal;
  std::vector<double> off_diagonal;  // size dimension() - 1
  RadialGrid grid;

  std::size_t dimension() const { return diagonal.size(); }
  /// Gershgorin bound on the spectral radius.
  double norm_bound() const;
};

TridiagonalOperator discretize(const PotentialSpec& spec, double trial_energy,
                               const RadialGrid& grid);

/// Number of eigenvalues strictly below x (LDL^T inertia).
std::size_t count_below(const TridiagonalOperator& op, double x);

/// k-th smallest eigenvalue (0-based) by bisection to roundoff.
double eigenvalue(const TridiagonalOperator& op, std::size_t k);

/// The k smallest eigenvalues, ascending.
std::vector<double> eigen_smallest_k(const TridiagonalOperator& op, std::size_t k);

/// Shifted inverse iteration. Throws IllConditionedShift when another
/// eigenvalue lies within 1e-9 of the shift, NoConvergence when the
/// residual |op v - lambda v| stays above 1e-8 |lambda|.
RadialFunction inverse_iteration_vector(const TridiagonalOperator& op, double eigenvalue);

/// k-th eigenvalue at E, Richardson-extrapolated over `levels` nested grids
/// (1: none, 2: h and 2h, 3: h, 2h, 4h).
double extrapolated_eigenvalue(const PotentialSpec& spec, double trial_energy,
                               const RadialGrid& grid, std::size_t k, int levels);

/// k-th eigenvector at E, Richardson-extrapolated pointwise over the same
/// nested grids; lives on grid.coarsened(2^(levels-1)) and is normalized
/// there. Each member vector is sign-aligned to the coarsest one first.
RadialFunction extrapolated_eigenvector(const PotentialSpec& spec, double trial_energy,
                                        const RadialGrid& grid, std::size_t k, int levels);

/// Deepest extrapolation the grid supports (coarse grids keep >= 3 points).
int richardson_levels_for(const RadialGrid& grid);

struct OracleReport {
  int level_index = 0;
  double energy = 0.0;
  double lambda_matrix = 0.0;  // extrapolated k-th eigenvalue at the root
  int sc_iterations = 0;
  double sc_residual = 0.0;  // |h(E)|
  RadialFunction eigenvector;  // fine-grid vector at the converged energy
  RadialFunction extrapolated_vector;  // see extrapolated_eigenvector
  int root_count = 0;          // sign changes of h found by the scan
};

/// Scans h over the bracket, bisects each sign change, and keeps roots below
/// the continuum threshold lambda < -2(E+M)|v2| (others are box states).
/// Throws NoBoundState or NoConvergence.
OracleReport self_consistent_level(const PotentialSpec& spec, int k, const RadialGrid& grid,
                                   const SolverSettings& settings, int richardson_levels = 3,
                                   int scan_samples = 100);

/// Levels k = 0, 1, ... until the first NoBoundState.
std::vector<OracleReport> oracle_census(const PotentialSpec& spec, const RadialGrid& grid,
                                        const SolverSettings& settings,
                                        int richardson_levels = 3);

}  // namespace kgeckart
