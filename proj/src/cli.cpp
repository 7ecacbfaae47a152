#include "kgeckart/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "kgeckart/oracle.hpp"
#include "kgeckart/spectrum.hpp"
#include "kgeckart/wavefunction.hpp"

namespace kgeckart::cli {

namespace {

constexpr double kOracleVectorTolerance = 1e-4;

std::string fmt(double v) { return format_double(v); }

void write_spec_header(std::ostream& out, const RunConfig& config) {
  const PotentialSpec& s = config.potential;
  out << "# potential v1=" << fmt(s.v1) << " v2=" << fmt(s.v2) << " alpha=" << fmt(s.alpha)
      << " mass=" << fmt(s.mass) << '\n';
}

void write_grid_header(std::ostream& out, const RadialGrid& grid) {
  out << "# grid r_min=" << fmt(grid.r_min) << " r_max=" << fmt(grid.r_max)
      << " n_points=" << grid.n_points << " domain=" << to_string(grid.mode) << '\n';
}

// Returns the first NoConvergence failure, if any.
const LevelFailure* convergence_failure(const Spectrum& sp) {
  for (const LevelFailure& f : sp.failures) {
    if (f.code == ErrorCode::NoConvergence) return &f;
  }
  return nullptr;
}

double parse_number(const std::string& text) {
  double v = 0.0;
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end) {
    throw Error(ErrorCode::InvalidValue, "not a number: '" + text + "'");
  }
  return v;
}

PotentialSpec with_param(const PotentialSpec& base, const std::string& name, double value) {
  PotentialSpec s = base;
  if (name == "v1") {
    s.v1 = value;
  } else if (name == "v2") {
    s.v2 = value;
  } else if (name == "alpha") {
    s.alpha = value;
  } else if (name == "mass") {
    s.mass = value;
  } else {
    throw Error(ErrorCode::InvalidValue, "unknown sweep parameter '" + name + "'");
  }
  return PotentialSpec::make(s.v1, s.v2, s.alpha, s.mass);
}

}  // namespace

GridSettings apply_grid_override(GridSettings base, const std::string& text) {
  const auto comma = text.find(',');
  const double n = parse_number(text.substr(0, comma));
  if (!(n >= 3.0) || n != std::floor(n) || n > 1e8) {
    throw Error(ErrorCode::InvalidValue, "--grid n_points must be an integer >= 3");
  }
  base.n_points = static_cast<std::size_t>(n);
  if (comma != std::string::npos) base.r_max_factor = parse_number(text.substr(comma + 1));
  base.validate();
  return base;
}

int cmd_spectrum(const RunConfig& config, std::ostream& out, std::ostream& err) {
  const Spectrum sp = enumerate_levels(config.potential, config.solver);
  if (const LevelFailure* f = convergence_failure(sp)) {
    err << "error: " << f->message << '\n';
    return kExitConvergence;
  }
  write_spec_header(out, config);
  out << "n,E_n,lambda_n,delta_n,p,w,residual,iterations\n";
  for (const EnergyLevel& lv : sp.levels) {
    out << lv.n << ',' << fmt(lv.energy) << ',' << fmt(lv.lambda) << ',' << fmt(lv.delta) << ','
        << fmt(lv.p_param) << ',' << fmt(lv.w_param) << ',' << fmt(lv.residual) << ','
        << lv.iterations << '\n';
  }
  out << "# " << sp.levels.size() << " bound states\n";
  return kExitOk;
}

int cmd_wavefunction(const RunConfig& config, int level, std::ostream& out, std::ostream& err) {
  const PotentialSpec& spec = config.potential;
  if (level < 0) {
    err << "error: --level must be >= 0\n";
    return kExitConfig;
  }
  EnergyLevel lv;
  RadialFunction fn;
  const RadialGrid grid = make_grid(spec, config.grid);
  try {
    lv = solve_level(spec, level, config.solver);
    fn = excited_state_R(spec, lv, grid);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::NoConvergence) {
      err << "error: " << e.what() << '\n';
      return kExitConvergence;
    }
    err << "error: level " << level << " is not bound: " << e.what() << '\n';
    return kExitMissingLevel;
  }

  write_spec_header(out, config);
  write_grid_header(out, grid);
  out << "# level n=" << lv.n << " E_n=" << fmt(lv.energy) << " lambda_n=" << fmt(lv.lambda)
      << '\n';
  out << "# node_count=" << fn.node_count << '\n';
  out << "# ode_residual=" << fmt(ode_residual(spec, lv, fn)) << '\n';
  if (grid.mode == DomainMode::HalfLine) {
    out << "# amplitude=R(r)=f(r)/r pole_at_origin=" << (fn.pole_at_origin ? "true" : "false")
        << '\n';
  } else {
    try {
      const OracleReport rep = self_consistent_level(spec, level, grid, config.solver,
                                                     richardson_levels_for(grid));
      const RadialFunction& ref = rep.extrapolated_vector;
      const RadialFunction sampled = excited_state_R(spec, lv, ref.grid);
      out << "# oracle_max_abs_diff=" << fmt(max_abs_difference_aligned(sampled, ref))
          << " tolerance=" << fmt(kOracleVectorTolerance) << '\n';
    } catch (const Error& e) {
      out << "# oracle_unavailable=" << to_string(e.code()) << '\n';
    }
  }
  out << "r,amplitude\n";
  for (std::size_t i = 0; i < fn.values.size(); ++i) {
    out << fmt(fn.positions[i]) << ',' << fmt(fn.values[i]) << '\n';
  }
  return kExitOk;
}

int cmd_verify(const RunConfig& config, double rtol, std::ostream& out, std::ostream& err) {
  const PotentialSpec& spec = config.potential;
  const Spectrum sp = enumerate_levels(spec, config.solver);
  if (const LevelFailure* f = convergence_failure(sp)) {
    err << "error: " << f->message << '\n';
    return kExitConvergence;
  }
  const RadialGrid grid = make_grid(spec, config.grid);
  std::vector<OracleReport> oracle;
  try {
    oracle = oracle_census(spec, grid, config.solver, richardson_levels_for(grid));
  } catch (const Error& e) {
    err << "error: oracle: " << e.what() << '\n';
    return e.code() == ErrorCode::NoConvergence ? kExitConvergence : kExitVerification;
  }

  write_spec_header(out, config);
  write_grid_header(out, grid);
  out << "# rtol=" << fmt(rtol) << '\n';
  out << "n,E_analytic,E_oracle,rel_diff,status\n";
  const std::size_t rows = std::max(sp.levels.size(), oracle.size());
  std::size_t failed = 0;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t k = 0; k < rows; ++k) {
    const double ea = k < sp.levels.size() ? sp.levels[k].energy : nan;
    const double eo = k < oracle.size() ? oracle[k].energy : nan;
    const double diff = std::abs(ea - eo);
    const double rel = eo != 0.0 ? diff / std::abs(eo) : diff;
    const bool ok = rel < rtol;
    if (!ok) ++failed;
    out << k << ',' << fmt(ea) << ',' << fmt(eo) << ',' << fmt(rel) << ','
        << (ok ? "pass" : "FAIL") << '\n';
  }
  if (rows == 0) {
    out << "# 0 levels, vacuously pass\n";
  } else if (failed == 0) {
    out << "# " << rows << " levels, all pass\n";
  } else {
    out << "# " << failed << " of " << rows << " levels fail\n";
  }
  return failed == 0 ? kExitOk : kExitVerification;
}

std::vector<double> sweep_values(const SweepRequest& request) {
  if (request.param != "v1" && request.param != "v2" && request.param != "alpha" &&
      request.param != "mass") {
    throw Error(ErrorCode::InvalidValue, "unknown sweep parameter '" + request.param + "'");
  }
  if (request.steps < 1) throw Error(ErrorCode::InvalidValue, "sweep needs --steps >= 1");
  if (!std::isfinite(request.from) || !std::isfinite(request.to)) {
    throw Error(ErrorCode::NonFinite, "sweep range must be finite");
  }
  if (request.steps > 1 && request.from == request.to) {
    throw Error(ErrorCode::InvalidValue, "sweep range is empty");
  }
  std::vector<double> values(static_cast<std::size_t>(request.steps));
  for (int i = 0; i < request.steps; ++i) {
    values[i] = request.steps == 1
                    ? request.from
                    : request.from + (request.to - request.from) * i / (request.steps - 1);
  }
  values.back() = request.steps == 1 ? request.from : request.to;
  return values;
}

int cmd_sweep(const RunConfig& config, const SweepRequest& request, std::ostream& out,
              std::ostream& err) {
  std::vector<double> values;
  std::vector<PotentialSpec> specs;
  try {
    values = sweep_values(request);
    for (double v : values) specs.push_back(with_param(config.potential, request.param, v));
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  }

  std::vector<Spectrum> results(specs.size());
  const std::size_t width = std::max(1u, std::thread::hardware_concurrency());
  for (std::size_t start = 0; start < specs.size(); start += width) {
    const std::size_t stop = std::min(specs.size(), start + width);
    std::vector<std::future<Spectrum>> batch;
    for (std::size_t i = start; i < stop; ++i) {
      batch.push_back(std::async(std::launch::async, enumerate_levels, specs[i],
                                 config.solver));
    }
    for (std::size_t i = start; i < stop; ++i) results[i] = batch[i - start].get();
  }

  for (const Spectrum& sp : results) {
    if (const LevelFailure* f = convergence_failure(sp)) {
      err << "error: " << f->message << '\n';
      return kExitConvergence;
    }
  }
  write_spec_header(out, config);
  out << "# sweep " << request.param << " from=" << fmt(request.from) << " to=" << fmt(request.to)
      << " steps=" << request.steps << '\n';
  out << request.param << ",n,E_n\n";
  for (std::size_t i = 0; i < results.size(); ++i) {
    for (const EnergyLevel& lv : results[i].levels) {
      out << fmt(values[i]) << ',' << lv.n << ',' << fmt(lv.energy) << '\n';
    }
  }
  return kExitOk;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Klein-Gordon bound states in an equal scalar/vector Eckart potential"};
  app.footer(
      "Exit codes:\n"
      "  0  success\n"
      "  2  configuration or usage error\n"
      "  3  solver did not converge\n"
      "  4  requested level is not bound\n"
      "  5  verification failed");
  app.require_subcommand(1);

  std::string config_path;
  std::string domain;
  std::string output;
  std::string grid_text;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("config", config_path, "INI config file")->required();
    sub->add_option("--domain", domain, "full or half")->check(CLI::IsMember({"full", "half"}));
    sub->add_option("--output", output, "write the table here instead of stdout");
  };

  CLI::App* spectrum = app.add_subcommand("spectrum", "list all bound levels");
  add_common(spectrum);

  int level = 0;
  CLI::App* wavefunction = app.add_subcommand("wavefunction", "sample one normalized level");
  add_common(wavefunction);
  wavefunction->add_option("--level", level, "level index n")->required();
  wavefunction->add_option("--grid", grid_text, "n_points[,r_max_factor]");

  double rtol = 1e-6;
  CLI::App* verify = app.add_subcommand("verify", "compare analytic levels with the FD oracle");
  add_common(verify);
  verify->add_option("--rtol", rtol, "relative tolerance")->capture_default_str();
  verify->add_option("--grid", grid_text, "n_points[,r_max_factor]");

  SweepRequest sweep_req;
  CLI::App* sweep = app.add_subcommand("sweep", "levels over a parameter range");
  add_common(sweep);
  sweep->add_option("--param", sweep_req.param, "v1, v2, alpha or mass")->required();
  sweep->add_option("--from", sweep_req.from, "first value")->required();
  sweep->add_option("--to", sweep_req.to, "last value")->required();
  sweep->add_option("--steps", sweep_req.steps, "number of points")->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    if (!reversed.empty()) {
      app.name(reversed.back());
      reversed.pop_back();
    }
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }

  RunConfig config;
  try {
    std::ifstream in(config_path, std::ios::binary);
    if (!in) throw Error(ErrorCode::InvalidValue, "cannot read config '" + config_path + "'");
    std::ostringstream text;
    text << in.rdbuf();
    config = parse_config(text.str());
    if (!domain.empty()) config.grid.mode = parse_domain_mode(domain);
    if (!grid_text.empty()) config.grid = apply_grid_override(config.grid, grid_text);
    make_grid(config.potential, config.grid);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  }

  std::ofstream file;
  if (!output.empty()) {
    file.open(output, std::ios::binary | std::ios::trunc);
    if (!file) {
      err << "error: cannot write '" << output << "'\n";
      return kExitConfig;
    }
  }
  std::ostream& sink = output.empty() ? out : file;

  try {
    if (*spectrum) return cmd_spectrum(config, sink, err);
    if (*wavefunction) return cmd_wavefunction(config, level, sink, err);
    if (*verify) return cmd_verify(config, rtol, sink, err);
    return cmd_sweep(config, sweep_req, sink, err);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return e.code() == ErrorCode::NoConvergence ? kExitConvergence : kExitConfig;
  }
}

}  // namespace kgeckart::cli
