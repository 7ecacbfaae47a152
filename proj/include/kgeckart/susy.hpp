#pragma once

// Superpotential W(r) = A - B tanh(alpha r) for the effective potential
//   V_eff(r; E) = 2(E+M) [v1 sech^2(alpha r) - v2 tanh(alpha r)],
// partner potentials V± = W^2 ± W', and the shape-invariance ladder.
//
// Conventions (see docs/CONVENTIONS.md):
//   W^2 - W' = V_eff - lambda0,  lambda0 = -(A^2 + B^2),
//   B(B - alpha) = -2(E+M) v1,   A B = (E+M) v2.
// The Plus branch (B >= alpha/2) drives the ladder B -> B - alpha; the
// Minus branch (B <= alpha/2) gives the normalizable ground state
// exp(-A r) cosh(alpha r)^(B/alpha).

#include <utility>
#include <vector>

#include "kgeckart/core.hpp"

namespace kgeckart {

enum class Branch { Plus, Minus };

struct SuperCoeffs {
  double a_coef = 0.0;
  double b_coef = 0.0;
  double lambda0 = 0.0;
  Branch branch = Branch::Plus;
  double trial_energy = 0.0;
};

struct ShapeParams {
  double a0 = 0.0;  // A of the next step
  double a1 = 0.0;  // B of the next step
  double remainder = 0.0;
};

struct LadderTerm {
  int k = 0;
  ShapeParams params;
  double cumulative = 0.0;
};

double effective_potential(const PotentialSpec& spec, double trial_energy, double r);

/// Throws ComplexDiscriminant when alpha^2 - 8(E+M)v1 < 0 and
/// DivisionByZero when the branch denominator alpha ± sqrt(...) vanishes
/// with v2 != 0.
SuperCoeffs super_coeffs(const PotentialSpec& spec, double trial_energy, Branch branch);

double superpotential(const SuperCoeffs& coeffs, double alpha, double r);
double superpotential_derivative(const SuperCoeffs& coeffs, double alpha, double r);

/// {V+, V-} = {W^2 + W', W^2 - W'}.
std::pair<double, double> partner_potentials(const SuperCoeffs& coeffs, double alpha, double r);

/// sup over the grid of |W^2 - W' - (V_eff - lambda0)|.
double riccati_residual(const PotentialSpec& spec, const SuperCoeffs& coeffs,
                        const RadialGrid& grid);

/// One shape-invariance step (A, B) -> (-A B/(alpha - B), B - alpha).
ShapeParams shape_step(double a_coef, double b_coef, double alpha);

/// Steps k = 1..n_steps starting from `coeffs`, with running sums of R.
/// Stops with SingularMap if B hits a multiple of alpha on the way.
std::vector<LadderTerm> shape_ladder(const SuperCoeffs& coeffs, double alpha, int n_steps);

/// Closed-form ladder value (AB/(alpha n - B))^2 + (alpha n - B)^2, i.e.
/// A_n^2 + B_n^2. Equals lambda0-relative level n of the SUSY tower; on the
/// Plus branch at the physical root E_m, M^2 - E_m^2 = susy_ladder(n = m+1).
/// Throws LadderTerminated when alpha n >= B.
double susy_ladder(const SuperCoeffs& coeffs, double alpha, int n);

}  // namespace kgeckart
