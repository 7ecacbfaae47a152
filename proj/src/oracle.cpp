#include "kgeckart/oracle.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <tuple>

#include <boost/math/tools/toms748_solve.hpp>

#include "kgeckart/specialfns.hpp"
#include "kgeckart/susy.hpp"

namespace kgeckart {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kIsolationGap = 1e-9;
// inverse-iteration noise in the decayed tails sits near eps*||T||/gap,
// far above the 1e-12 default
constexpr double kNodeFloor = 1e-8;

// v1 sech^2(alpha r) - v2 tanh(alpha r) at the interior points; the operator
// diagonal at energy E is 2/h^2 + 2(E+M) u
std::vector<double> coupling_profile(const PotentialSpec& spec, const RadialGrid& grid) {
  const std::size_t n = grid.n_points - 2;
  std::vector<double> u(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double ar = spec.alpha * grid.point(i + 1);
    const double c = std::cosh(ar);
    u[i] = spec.v1 * (std::isinf(c) ? 0.0 : 1.0 / (c * c)) - spec.v2 * std::tanh(ar);
  }
  return u;
}

void fill_diagonal(TridiagonalOperator& op, const PotentialSpec& spec, double trial_energy,
                   const std::vector<double>& u) {
  const double h = op.grid.spacing();
  const double inv_h2 = 1.0 / (h * h);
  const double coupling = 2.0 * (trial_energy + spec.mass);
  op.diagonal.resize(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) op.diagonal[i] = 2.0 * inv_h2 + coupling * u[i];
}

TridiagonalOperator bare_operator(const RadialGrid& grid) {
  const double h = grid.spacing();
  const std::size_t n = grid.n_points - 2;
  TridiagonalOperator op;
  op.grid = grid;
  op.off_diagonal.assign(n > 0 ? n - 1 : 0, -1.0 / (h * h));
  return op;
}

// LDL^T pivots of T - x I; the number of negative pivots is the count below x
class SturmCounter {
 public:
  explicit SturmCounter(const TridiagonalOperator& op)
      : d_(op.diagonal),
        e2_(op.off_diagonal.size()),
        pivmin_(kEps * std::max(op.norm_bound(), std::numeric_limits<double>::min())) {
    for (std::size_t i = 0; i < e2_.size(); ++i) e2_[i] = op.off_diagonal[i] * op.off_diagonal[i];
  }

  std::size_t count(double x) const {
    std::size_t c = 0;
    double prev = 1.0;
    for (std::size_t i = 0; i < d_.size(); ++i) {
      double cur = d_[i] - x;
      if (i > 0) cur -= e2_[i - 1] / prev;
      if (std::abs(cur) < pivmin_) cur = -pivmin_;
      c += cur < 0.0;
      prev = cur;
    }
    return c;
  }

  // three shifts in one sweep; the recurrences are independent
  std::array<std::size_t, 3> count3(const std::array<double, 3>& x) const {
    std::array<std::size_t, 3> c{0, 0, 0};
    double p0 = 1.0, p1 = 1.0, p2 = 1.0;
    for (std::size_t i = 0; i < d_.size(); ++i) {
      const double e2 = i > 0 ? e2_[i - 1] : 0.0;
      double c0 = d_[i] - x[0] - e2 / p0;
      double c1 = d_[i] - x[1] - e2 / p1;
      double c2 = d_[i] - x[2] - e2 / p2;
      if (std::abs(c0) < pivmin_) c0 = -pivmin_;
      if (std::abs(c1) < pivmin_) c1 = -pivmin_;
      if (std::abs(c2) < pivmin_) c2 = -pivmin_;
      c[0] += c0 < 0.0;
      c[1] += c1 < 0.0;
      c[2] += c2 < 0.0;
      p0 = c0;
      p1 = c1;
      p2 = c2;
    }
    return c;
  }

  double pivmin() const { return pivmin_; }

 private:
  std::vector<double> d_;
  std::vector<double> e2_;
  double pivmin_;
};

// quadrisection of a Gershgorin bracket down to max(eps ||T||, 2 eps |lambda|);
// a hint is used only after the counts confirm it brackets the k-th eigenvalue
double sturm_eigenvalue(const TridiagonalOperator& op, std::size_t k,
                        std::optional<double> hint = std::nullopt) {
  const std::size_t n = op.dimension();
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (std::size_t i = 0; i < n; ++i) {
    double radius = 0.0;
    if (i > 0) radius += std::abs(op.off_diagonal[i - 1]);
    if (i + 1 < n) radius += std::abs(op.off_diagonal[i]);
    lo = std::min(lo, op.diagonal[i] - radius);
    hi = std::max(hi, op.diagonal[i] + radius);
  }
  const double norm = std::max(std::abs(lo), std::abs(hi));
  const double slack = kEps * norm + 1e-300;
  lo -= slack;
  hi += slack;
  const SturmCounter sturm(op);
  const double abstol = kEps * norm;
  if (hint && *hint > lo && *hint < hi) {
    const double step = 0.05 * (std::abs(*hint) + 1.0);
    const std::array<double, 3> x{*hint - step, *hint, *hint + step};
    if (lo < x[0] && x[2] < hi) {
      const auto c = sturm.count3(x);
      if (c[0] <= k && c[2] > k) {
        if (c[1] > k) {
          lo = x[0];
          hi = x[1];
        } else {
          lo = x[1];
          hi = x[2];
        }
      }
    }
  }
  for (int it = 0; it < 2000; ++it) {
    const double width = hi - lo;
    if (width <= std::max(abstol, 2.0 * kEps * std::max(std::abs(lo), std::abs(hi)))) break;
    const std::array<double, 3> x{lo + 0.25 * width, lo + 0.5 * width, lo + 0.75 * width};
    if (!(lo < x[0] && x[0] < x[1] && x[1] < x[2] && x[2] < hi)) break;
    const auto c = sturm.count3(x);
    if (c[0] > k) {
      hi = x[0];
    } else if (c[1] > k) {
      lo = x[0];
      hi = x[1];
    } else if (c[2] > k) {
      lo = x[1];
      hi = x[2];
    } else {
      lo = x[2];
    }
  }
  return 0.5 * (lo + hi);
}

// the nested Richardson grids with their coupling profiles, reused across E
class OperatorFamily {
 public:
  OperatorFamily(const PotentialSpec& spec, const RadialGrid& grid, int levels) : spec_(spec) {
    if (levels < 1 || levels > 3) {
      throw Error(ErrorCode::InvalidValue,
                  "richardson levels must be 1, 2 or 3, got " + std::to_string(levels));
    }
    for (std::size_t stride = 1; stride <= (std::size_t{1} << (levels - 1)); stride *= 2) {
      const RadialGrid g = stride == 1 ? grid : grid.coarsened(stride);
      members_.push_back({bare_operator(g), coupling_profile(spec, g), std::nullopt, 0});
    }
  }

  double lambda(double trial_energy, std::size_t k) {
    std::array<double, 3> lam{};
    for (std::size_t j = 0; j < members_.size(); ++j) {
      Member& m = members_[j];
      fill_diagonal(m.op, spec_, trial_energy, m.u);
      lam[j] = sturm_eigenvalue(m.op, k, m.last_k == k ? m.last : std::nullopt);
      m.last = lam[j];
      m.last_k = k;
    }
    switch (members_.size()) {
      case 1:
        return lam[0];
      case 2:
        return (4.0 * lam[0] - lam[1]) / 3.0;
      default:
        return (64.0 * lam[0] - 20.0 * lam[1] + lam[2]) / 45.0;
    }
  }

 private:
  struct Member {
    TridiagonalOperator op;
    std::vector<double> u;
    std::optional<double> last;
    std::size_t last_k = 0;
  };
  PotentialSpec spec_;
  std::vector<Member> members_;
};

}  // namespace

double TridiagonalOperator::norm_bound() const {
  double best = 0.0;
  const std::size_t n = dimension();
  for (std::size_t i = 0; i < n; ++i) {
    double row = std::abs(diagonal[i]);
    if (i > 0) row += std::abs(off_diagonal[i - 1]);
    if (i + 1 < n) row += std::abs(off_diagonal[i]);
    best = std::max(best, row);
  }
  return best;
}

TridiagonalOperator discretize(const PotentialSpec& spec, double trial_energy,
                               const RadialGrid& grid) {
  TridiagonalOperator op = bare_operator(grid);
  fill_diagonal(op, spec, trial_energy, coupling_profile(spec, grid));
  return op;
}

std::size_t count_below(const TridiagonalOperator& op, double x) {
  return SturmCounter(op).count(x);
}

double eigenvalue(const TridiagonalOperator& op, std::size_t k) { return sturm_eigenvalue(op, k); }

std::vector<double> eigen_smallest_k(const TridiagonalOperator& op, std::size_t k) {
  if (k > op.dimension()) {
    throw Error(ErrorCode::InvalidValue, "requested " + std::to_string(k) +
                                             " eigenvalues of a " +
                                             std::to_string(op.dimension()) + "-dimensional operator");
  }
  std::vector<double> out(k);
  for (std::size_t i = 0; i < k; ++i) out[i] = eigenvalue(op, i);
  return out;
}

namespace {

// LU with partial pivoting of a shifted tridiagonal matrix; the factor has
// one sub-diagonal multiplier row and two super-diagonals.
struct TridiagonalLu {
  std::vector<double> dl, d, du, du2;
  std::vector<bool> swapped;

  TridiagonalLu(const TridiagonalOperator& op, double shift) {
    const std::size_t n = op.dimension();
    d = op.diagonal;
    for (double& x : d) x -= shift;
    dl = op.off_diagonal;
    du = op.off_diagonal;
    du2.assign(n > 1 ? n - 2 : 0, 0.0);
    swapped.assign(n > 0 ? n - 1 : 0, false);
    for (std::size_t i = 0; i + 1 < n; ++i) {
      if (std::abs(d[i]) >= std::abs(dl[i])) {
        if (d[i] != 0.0) {
          const double fact = dl[i] / d[i];
          dl[i] = fact;
          d[i + 1] -= fact * du[i];
        }
      } else {
        const double fact = d[i] / dl[i];
        d[i] = dl[i];
        dl[i] = fact;
        const double temp = du[i];
        du[i] = d[i + 1];
        d[i + 1] = temp - fact * d[i + 1];
        if (i + 2 < n) {
          du2[i] = du[i + 1];
          du[i + 1] = -fact * du[i + 1];
        }
        swapped[i] = true;
      }
    }
    const double tiny = kEps * std::max(op.norm_bound(), 1.0);
    for (double& x : d) {
      if (std::abs(x) < tiny) x = x < 0.0 ? -tiny : tiny;
    }
  }

  void solve(std::vector<double>& b) const {
    const std::size_t n = d.size();
    for (std::size_t i = 0; i + 1 < n; ++i) {
      if (swapped[i]) std::swap(b[i], b[i + 1]);
      b[i + 1] -= dl[i] * b[i];
    }
    b[n - 1] /= d[n - 1];
    if (n >= 2) b[n - 2] = (b[n - 2] - du[n - 2] * b[n - 1]) / d[n - 2];
    for (std::size_t j = n; j-- > 2;) {
      const std::size_t i = j - 2;
      b[i] = (b[i] - du[i] * b[i + 1] - du2[i] * b[i + 2]) / d[i];
    }
  }
};

double unit_normalize(std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  s = std::sqrt(s);
  for (double& x : v) x /= s;
  return s;
}

double residual_inf(const TridiagonalOperator& op, const std::vector<double>& v, double lambda) {
  const std::size_t n = op.dimension();
  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double y = (op.diagonal[i] - lambda) * v[i];
    if (i > 0) y += op.off_diagonal[i - 1] * v[i - 1];
    if (i + 1 < n) y += op.off_diagonal[i] * v[i + 1];
    worst = std::max(worst, std::abs(y));
  }
  return worst;
}

}  // namespace

RadialFunction inverse_iteration_vector(const TridiagonalOperator& op, double eigenvalue) {
  const std::size_t n = op.dimension();
  const std::size_t inside =
      count_below(op, eigenvalue + kIsolationGap) - count_below(op, eigenvalue - kIsolationGap);
  if (inside > 1) {
    throw Error(ErrorCode::IllConditionedShift,
                std::to_string(inside) + " eigenvalues within 1e-9 of shift " +
                    format_double(eigenvalue));
  }

  const TridiagonalLu lu(op, eigenvalue);
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = 1.0 + 0.5 * std::sin(0.37 * static_cast<double>(i) + 0.1);
  unit_normalize(v);
  const double bound = 1e-8 * std::abs(eigenvalue) + 8.0 * kEps * op.norm_bound();
  double res = std::numeric_limits<double>::infinity();
  for (int it = 0; it < 8 && !(res < bound); ++it) {
    lu.solve(v);
    unit_normalize(v);
    res = residual_inf(op, v, eigenvalue);
  }
  if (!(res < bound)) {
    throw Error(ErrorCode::NoConvergence, "inverse iteration residual " + format_double(res) +
                                              " above " + format_double(bound));
  }

  double vmax = 0.0;
  for (double x : v) vmax = std::max(vmax, std::abs(x));
  for (double x : v) {
    if (std::abs(x) > 1e-3 * vmax) {
      if (x < 0.0) {
        for (double& y : v) y = -y;
      }
      break;
    }
  }

  RadialFunction fn;
  fn.grid = op.grid;
  fn.positions = op.grid.points();
  fn.values.assign(op.grid.n_points, 0.0);
  std::copy(v.begin(), v.end(), fn.values.begin() + 1);
  fn.norm_constant = normalize_in_place(fn.values, op.grid.spacing());
  fn.node_count = count_nodes(fn.values, kNodeFloor);
  return fn;
}

double extrapolated_eigenvalue(const PotentialSpec& spec, double trial_energy,
                               const RadialGrid& grid, std::size_t k, int levels) {
  return OperatorFamily(spec, grid, levels).lambda(trial_energy, k);
}

RadialFunction extrapolated_eigenvector(const PotentialSpec& spec, double trial_energy,
                                        const RadialGrid& grid, std::size_t k, int levels) {
  if (levels < 1 || levels > 3) {
    throw Error(ErrorCode::InvalidValue,
                "richardson levels must be 1, 2 or 3, got " + std::to_string(levels));
  }
  const std::size_t coarse_stride = std::size_t{1} << (levels - 1);
  std::vector<RadialFunction> members;
  for (std::size_t stride = 1; stride <= coarse_stride; stride *= 2) {
    const RadialGrid g = stride == 1 ? grid : grid.coarsened(stride);
    const TridiagonalOperator op = discretize(spec, trial_energy, g);
    members.push_back(inverse_iteration_vector(op, eigenvalue(op, k)));
  }
  const RadialFunction& coarse = members.back();
  // samples of member j on the coarse grid, sign-aligned to the coarse vector
  auto on_coarse = [&](std::size_t j) {
    const std::size_t step = coarse_stride >> j;
    std::vector<double> v(coarse.values.size());
    double dot = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
      v[i] = members[j].values[i * step];
      dot += v[i] * coarse.values[i];
    }
    if (dot < 0.0) {
      for (double& x : v) x = -x;
    }
    return v;
  };

  RadialFunction out = coarse;
  const std::vector<double> v1 = on_coarse(0);
  if (levels == 1) {
    out.values = v1;
  } else if (levels == 2) {
    const std::vector<double> v2 = on_coarse(1);
    for (std::size_t i = 0; i < v1.size(); ++i) out.values[i] = (4.0 * v1[i] - v2[i]) / 3.0;
  } else {
    const std::vector<double> v2 = on_coarse(1);
    const std::vector<double>& v4 = coarse.values;
    for (std::size_t i = 0; i < v1.size(); ++i) {
      out.values[i] = (64.0 * v1[i] - 20.0 * v2[i] + v4[i]) / 45.0;
    }
  }
  out.norm_constant = normalize_in_place(out.values, out.grid.spacing());
  out.node_count = count_nodes(out.values, kNodeFloor);
  return out;
}

int richardson_levels_for(const RadialGrid& grid) {
  if ((grid.n_points - 1) % 4 == 0 && grid.n_points >= 9) return 3;
  return grid.n_points >= 5 ? 2 : 1;
}

OracleReport self_consistent_level(const PotentialSpec& spec, int k, const RadialGrid& grid,
                                   const SolverSettings& settings, int richardson_levels,
                                   int scan_samples) {
  settings.validate();
  if (k < 0 || static_cast<std::size_t>(k) + 2 >= grid.n_points) {
    throw Error(ErrorCode::InvalidValue, "level index " + std::to_string(k) + " out of range");
  }
  if (scan_samples < 2) throw Error(ErrorCode::InvalidValue, "scan_samples must be >= 2");
  const double m = spec.mass;
  const auto kk = static_cast<std::size_t>(k);
  OperatorFamily family(spec, grid, richardson_levels);
  auto h = [&](double e) { return family.lambda(e, kk) - (e * e - m * m); };

  const double lo = bracket_lo(spec);
  const double hi = bracket_hi(spec);
  std::vector<double> es(static_cast<std::size_t>(scan_samples) + 1);
  std::vector<double> hs(es.size());
  for (int i = 0; i <= scan_samples; ++i) {
    es[i] = i == scan_samples ? hi : lo + (hi - lo) * i / scan_samples;
    hs[i] = h(es[i]);
  }

  struct Root {
    double energy;
    double residual;
    int iterations;
  };
  std::vector<Root> roots;
  bool converge_failed = false;
  for (std::size_t i = 0; i + 1 < es.size(); ++i) {
    double a = es[i];
    double b = es[i + 1];
    const double ha = hs[i];
    const double hb = hs[i + 1];
    if (ha == 0.0) {
      roots.push_back({a, 0.0, 0});
      continue;
    }
    if (ha * hb > 0.0 || hb == 0.0) continue;
    std::uintmax_t iters = static_cast<std::uintmax_t>(settings.max_iter);
    auto tol = [m](double x, double y) {
      return std::abs(y - x) <= 4.0 * kEps * std::max({std::abs(x), std::abs(y), m});
    };
    std::tie(a, b) = boost::math::tools::toms748_solve(h, a, b, ha, hb, tol, iters);
    if (iters >= static_cast<std::uintmax_t>(settings.max_iter) && !tol(a, b)) {
      converge_failed = true;
      continue;
    }
    const int it = static_cast<int>(iters);
    const double ra = std::abs(h(a));
    const double rb = a == b ? ra : std::abs(h(b));
    roots.push_back(ra <= rb ? Root{a, ra, it} : Root{b, rb, it});
  }
  if (hs.back() == 0.0) roots.push_back({es.back(), 0.0, 0});

  std::optional<Root> best;
  for (const Root& r : roots) {
    const double lambda = r.energy * r.energy - m * m;
    const double threshold = -2.0 * (r.energy + m) * std::abs(spec.v2);
    if (!(lambda < threshold)) continue;
    if (!best || lambda < best->energy * best->energy - m * m) best = r;
  }
  if (!best) {
    if (converge_failed) {
      throw Error(ErrorCode::NoConvergence,
                  "self-consistency bisection exceeded max_iter for k = " + std::to_string(k));
    }
    throw Error(ErrorCode::NoBoundState, "no self-consistent bound state with index k = " +
                                             std::to_string(k) + " (" +
                                             std::to_string(roots.size()) + " box root(s))");
  }

  const TridiagonalOperator op = discretize(spec, best->energy, grid);
  const double tol = std::max(settings.abs_tol, 64.0 * kEps * op.norm_bound());
  if (!(best->residual < tol)) {
    throw Error(ErrorCode::NoConvergence, "self-consistency residual " +
                                              format_double(best->residual) + " above " +
                                              format_double(tol));
  }

  OracleReport report;
  report.level_index = k;
  report.energy = best->energy;
  report.lambda_matrix = best->energy * best->energy - m * m + h(best->energy);
  report.sc_iterations = best->iterations;
  report.sc_residual = best->residual;
  report.eigenvector = inverse_iteration_vector(op, eigenvalue(op, kk));
  report.extrapolated_vector =
      extrapolated_eigenvector(spec, best->energy, grid, kk, richardson_levels);
  report.root_count = static_cast<int>(roots.size());
  return report;
}

std::vector<OracleReport> oracle_census(const PotentialSpec& spec, const RadialGrid& grid,
                                        const SolverSettings& settings, int richardson_levels) {
  std::vector<OracleReport> out;
  for (int k = 0; static_cast<std::size_t>(k) + 2 < grid.n_points; ++k) {
    try {
      out.push_back(self_consistent_level(spec, k, grid, settings, richardson_levels));
    } catch (const Error& e) {
      if (e.code() == ErrorCode::NoBoundState) break;
      throw;
    }
  }
  return out;
}

}  // namespace kgeckart
