#pragma once

#include <optional>
#include <span>
#include <vector>

namespace kgeckart {

struct JacobiParams {
  int degree = 0;
  double alpha_p = 0.0;
  double beta_p = 0.0;
};

/// P_n^{(a,b)}(x) for arbitrary real a, b and x. Uses the three-term
/// recurrence in degree and switches to the explicit sum whenever the
/// recurrence cannot certify ~1e-13 relative accuracy (vanishing or tiny
/// leading coefficients, cancellation).
double jacobi_eval(const JacobiParams& params, double x);

/// Recurrence only. Empty when a leading coefficient vanishes or the
/// running forward-error bound exceeds `certify_rel` * |result|.
std::optional<double> jacobi_recurrence(const JacobiParams& params, double x,
                                        double certify_rel = 1e-13);

/// Finite hypergeometric form
///   sum_s C(n+a, n-s) C(n+b, s) ((x-1)/2)^s ((x+1)/2)^(n-s),
/// accumulated in extended precision. Defined for every real a, b.
double jacobi_explicit_sum(const JacobiParams& params, double x);

/// Generalized binomial coefficient C(z, k) for real z.
double binomial_real(double z, int k);

/// Composite Simpson rule; odd sample count >= 3.
double simpson(std::span<const double> values, double spacing);

/// Interior second differences (f[i-1] - 2 f[i] + f[i+1]) / h^2; the
/// result has values.size() - 2 entries.
std::vector<double> central_diff2(std::span<const double> values, double spacing);

}  // namespace kgeckart
