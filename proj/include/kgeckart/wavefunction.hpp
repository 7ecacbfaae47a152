#pragma once

// Analytic bound states
//   f_n(r) = cosh(alpha r)^-(p+w) exp(alpha (p - w) r) P_n^{(2w, 2p)}(tanh alpha r),
// evaluated in log space for the prefactor. FullLine mode works with f;
// HalfLine mode returns R = f / r sampled half a spacing off the origin.

#include "kgeckart/core.hpp"
#include "kgeckart/spectrum.hpp"
#include "kgeckart/susy.hpp"

namespace kgeckart {

/// p, w recomputed from the level's energy and index.
PwPair pw_params(const PotentialSpec& spec, const EnergyLevel& level);

/// Unnormalized f_n at one point (prefactor from p, w; Jacobi degree n).
double analytic_f(const PotentialSpec& spec, int n, const PwPair& pw, double r);

/// exp(-A r) cosh(alpha r)^(B/alpha), normalized. Needs coefficients whose
/// tail decays (Minus branch at a bound E0); otherwise NotNormalizable.
RadialFunction ground_state_f(const PotentialSpec& spec, const SuperCoeffs& coeffs,
                              const RadialGrid& grid);

/// Level n on the grid, normalized so that the integral of f^2 is 1.
RadialFunction excited_state_R(const PotentialSpec& spec, const EnergyLevel& level,
                               const RadialGrid& grid);

/// sup over interior samples of |-f'' + (V_eff - lambda) f| / max|f| with
/// the 3-point stencil; f = r R in HalfLine mode.
double ode_residual(const PotentialSpec& spec, const EnergyLevel& level,
                    const RadialFunction& fn);

/// Simpson inner product of f-representations on a shared grid.
double inner_product(const RadialFunction& a, const RadialFunction& b);

/// max |a - s b| with s = ±1 chosen to align the two functions.
double max_abs_difference_aligned(const RadialFunction& a, const RadialFunction& b);

}  // namespace kgeckart
