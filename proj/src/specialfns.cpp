#include "kgeckart/specialfns.hpp"

#include <cmath>
#include <limits>

#include "kgeckart/core.hpp"

namespace kgeckart {

namespace {
constexpr double kEps = std::numeric_limits<double>::epsilon();
}

double binomial_real(double z, int k) {
  if (k < 0) return 0.0;
  long double r = 1.0L;
  for (int j = 1; j <= k; ++j) {
    r *= (static_cast<long double>(z) - k + j) / j;
  }
  return static_cast<double>(r);
}

std::optional<double> jacobi_recurrence(const JacobiParams& params, double x,
                                        double certify_rel) {
  const int n = params.degree;
  const double a = params.alpha_p;
  const double b = params.beta_p;
  if (n < 0) return std::nullopt;
  if (n == 0) return 1.0;

  double p_prev = 1.0;
  double p_cur = (a + 1.0) + (a + b + 2.0) * (x - 1.0) / 2.0;
  // Forward error bounds for p_prev / p_cur.
  double e_prev = 0.0;
  double e_cur = kEps * (std::abs(a + 1.0) + std::abs((a + b + 2.0) * (x - 1.0) / 2.0));

  for (int k = 2; k <= n; ++k) {
    const double s = 2.0 * k + a + b;
    const double lead = 2.0 * k * (k + a + b) * (s - 2.0);
    if (lead == 0.0) return std::nullopt;
    const double c1 = (s - 1.0) * (s * (s - 2.0) * x + a * a - b * b);
    const double c2 = -2.0 * (k + a - 1.0) * (k + b - 1.0) * s;
    const double p_next = (c1 * p_cur + c2 * p_prev) / lead;
    const double e_next =
        (std::abs(c1) * (e_cur + 4.0 * kEps * std::abs(p_cur)) +
         std::abs(c2) * (e_prev + 4.0 * kEps * std::abs(p_prev))) /
            std::abs(lead) +
        kEps * std::abs(p_next);
    p_prev = p_cur;
    p_cur = p_next;
    e_prev = e_cur;
    e_cur = e_next;
  }
  if (!std::isfinite(p_cur) || e_cur > certify_rel * std::abs(p_cur)) return std::nullopt;
  return p_cur;
}

double jacobi_explicit_sum(const JacobiParams& params, double x) {
  const int n = params.degree;
  if (n < 0) return 0.0;
  const long double a = params.alpha_p;
  const long double b = params.beta_p;
  const long double lo = (static_cast<long double>(x) - 1.0L) / 2.0L;
  const long double hi = (static_cast<long double>(x) + 1.0L) / 2.0L;

  long double total = 0.0L;
  for (int s = 0; s <= n; ++s) {
    // C(n+a, n-s) * C(n+b, s)
    long double coef = 1.0L;
    for (int j = 1; j <= n - s; ++j) coef *= (a + s + j) / j;
    for (int j = 1; j <= s; ++j) coef *= (n + b - s + j) / j;
    long double term = coef;
    for (int j = 0; j < s; ++j) term *= lo;
    for (int j = 0; j < n - s; ++j) term *= hi;
    total += term;
  }
  return static_cast<double>(total);
}

double jacobi_eval(const JacobiParams& params, double x) {
  if (auto v = jacobi_recurrence(params, x)) return *v;
  return jacobi_explicit_sum(params, x);
}

double simpson(std::span<const double> values, double spacing) {
  const std::size_t n = values.size();
  if (n < 3) throw Error(ErrorCode::TooFewSamples, "simpson needs at least 3 samples");
  if (n % 2 == 0) {
    throw Error(ErrorCode::EvenSampleCount,
                "simpson needs an odd sample count, got " + std::to_string(n));
  }
  double odd = 0.0;
  double even = 0.0;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    (i % 2 == 1 ? odd : even) += values[i];
  }
  return spacing / 3.0 * (values.front() + values.back() + 4.0 * odd + 2.0 * even);
}

std::vector<double> central_diff2(std::span<const double> values, double spacing) {
  if (values.size() < 3) {
    throw Error(ErrorCode::TooFewSamples, "central_diff2 needs at least 3 samples");
  }
  const double inv_h2 = 1.0 / (spacing * spacing);
  std::vector<double> out(values.size() - 2);
  for (std::size_t i = 1; i + 1 < values.size(); ++i) {
    out[i - 1] = (values[i - 1] - 2.0 * values[i] + values[i + 1]) * inv_h2;
  }
  return out;
}

}  // namespace kgeckart
