#include "kgeckart/core.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "kgeckart/specialfns.hpp"

namespace kgeckart {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::MissingField: return "MissingField";
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::NonPositive: return "NonPositive";
    case ErrorCode::UnknownKey: return "UnknownKey";
    case ErrorCode::InvalidValue: return "InvalidValue";
    case ErrorCode::ComplexDiscriminant: return "ComplexDiscriminant";
    case ErrorCode::DivisionByZero: return "DivisionByZero";
    case ErrorCode::SingularMap: return "SingularMap";
    case ErrorCode::LadderTerminated: return "LadderTerminated";
    case ErrorCode::ComplexDelta: return "ComplexDelta";
    case ErrorCode::DegenerateIndex: return "DegenerateIndex";
    case ErrorCode::NoRoot: return "NoRoot";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::EvenSampleCount: return "EvenSampleCount";
    case ErrorCode::TooFewSamples: return "TooFewSamples";
    case ErrorCode::NotNormalizable: return "NotNormalizable";
    case ErrorCode::IllConditionedShift: return "IllConditionedShift";
    case ErrorCode::NoBoundState: return "NoBoundState";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

PotentialSpec PotentialSpec::make(double v1, double v2, double alpha, double mass) {
  const std::pair<const char*, double> fields[] = {
      {"v1", v1}, {"v2", v2}, {"alpha", alpha}, {"mass", mass}};
  for (const auto& [name, value] : fields) {
    if (!std::isfinite(value)) {
      throw Error(ErrorCode::NonFinite, std::string(name) + " must be finite");
    }
  }
  if (!(alpha > 0.0)) throw Error(ErrorCode::NonPositive, "alpha must be > 0");
  if (!(mass > 0.0)) throw Error(ErrorCode::NonPositive, "mass must be > 0");
  return PotentialSpec{v1, v2, alpha, mass};
}

std::string_view to_string(DomainMode mode) {
  return mode == DomainMode::FullLine ? "full" : "half";
}

DomainMode parse_domain_mode(std::string_view text) {
  if (text == "full" || text == "FullLine") return DomainMode::FullLine;
  if (text == "half" || text == "HalfLine") return DomainMode::HalfLine;
  throw Error(ErrorCode::InvalidValue,
              "domain_mode must be 'full' or 'half', got '" + std::string(text) + "'");
}

RadialGrid RadialGrid::make(double r_max, std::size_t n_points, DomainMode mode) {
  if (!std::isfinite(r_max) || !(r_max > 0.0)) {
    throw Error(ErrorCode::NonPositive, "grid r_max must be finite and > 0");
  }
  if (n_points < 3 || n_points % 2 == 0) {
    throw Error(ErrorCode::InvalidValue,
                "grid n_points must be odd and >= 3, got " + std::to_string(n_points));
  }
  const double r_min = mode == DomainMode::FullLine ? -r_max : 0.0;
  return RadialGrid{r_min, r_max, n_points, mode};
}

std::vector<double> RadialGrid::points() const {
  std::vector<double> r(n_points);
  for (std::size_t i = 0; i < n_points; ++i) r[i] = point(i);
  return r;
}

RadialGrid RadialGrid::coarsened(std::size_t stride) const {
  if (stride == 0 || (n_points - 1) % stride != 0) {
    throw Error(ErrorCode::InvalidValue, "grid of " + std::to_string(n_points) +
                                             " points cannot be coarsened by " +
                                             std::to_string(stride));
  }
  RadialGrid g = *this;
  g.n_points = (n_points - 1) / stride + 1;
  return g;
}

void SolverSettings::validate() const {
  if (!std::isfinite(abs_tol) || !(abs_tol > 0.0)) {
    throw Error(ErrorCode::NonPositive, "abs_tol must be > 0");
  }
  if (max_iter < 10) throw Error(ErrorCode::InvalidValue, "max_iter must be >= 10");
  if (bracket_samples < 2) throw Error(ErrorCode::InvalidValue, "bracket_samples must be >= 2");
}

void GridSettings::validate() const {
  if (!std::isfinite(r_max_factor) || !(r_max_factor > 0.0)) {
    throw Error(ErrorCode::NonPositive, "r_max_factor must be > 0");
  }
  if (n_points < 3 || n_points % 2 == 0) {
    throw Error(ErrorCode::InvalidValue, "n_points must be odd and >= 3");
  }
}

RadialGrid default_grid(const PotentialSpec& spec, DomainMode mode) {
  GridSettings gs;
  gs.mode = mode;
  return make_grid(spec, gs);
}

RadialGrid make_grid(const PotentialSpec& spec, const GridSettings& settings) {
  settings.validate();
  return RadialGrid::make(settings.r_max_factor / spec.alpha, settings.n_points, settings.mode);
}

std::string format_double(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

// ---------------------------------------------------------------------------
// config

namespace {

enum class Section { Potential, Solver, Grid };

const std::map<std::string, Section, std::less<>>& key_sections() {
  static const std::map<std::string, Section, std::less<>> table = {
      {"v1", Section::Potential},           {"v2", Section::Potential},
      {"alpha", Section::Potential},        {"mass", Section::Potential},
      {"abs_tol", Section::Solver},         {"max_iter", Section::Solver},
      {"bracket_samples", Section::Solver}, {"r_max_factor", Section::Grid},
      {"n_points", Section::Grid},          {"domain_mode", Section::Grid},
  };
  return table;
}

std::string_view section_name(Section s) {
  switch (s) {
    case Section::Potential: return "potential";
    case Section::Solver: return "solver";
    case Section::Grid: return "grid";
  }
  return "";
}

double to_number(const std::string& key, const std::string& text) {
  double value = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  if (!text.empty() && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) {
    throw Error(ErrorCode::InvalidValue, key + ": not a number: '" + text + "'");
  }
  if (!std::isfinite(value)) throw Error(ErrorCode::NonFinite, key + " must be finite");
  return value;
}

long long to_integer(const std::string& key, const std::string& text) {
  long long value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw Error(ErrorCode::InvalidValue, key + ": not an integer: '" + text + "'");
  }
  return value;
}

}  // namespace

RunConfig parse_config(std::string_view text) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  try {
    std::istringstream in{std::string(text)};
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw Error(ErrorCode::InvalidValue, std::string("malformed config: ") + e.what());
  }

  std::map<std::string, std::string, std::less<>> values;
  auto take = [&](const std::string& key, const std::string& data,
                  std::optional<Section> section) {
    auto it = key_sections().find(key);
    if (it == key_sections().end()) throw Error(ErrorCode::UnknownKey, "unknown key '" + key + "'");
    if (section && *section != it->second) {
      throw Error(ErrorCode::UnknownKey, "key '" + key + "' does not belong in [" +
                                             std::string(section_name(*section)) + "]");
    }
    if (!values.emplace(key, data).second) {
      throw Error(ErrorCode::InvalidValue, "key '" + key + "' given twice");
    }
  };

  for (const auto& [name, node] : tree) {
    if (node.empty()) {
      take(name, node.data(), std::nullopt);
      continue;
    }
    std::optional<Section> section;
    for (Section s : {Section::Potential, Section::Solver, Section::Grid}) {
      if (name == section_name(s)) section = s;
    }
    if (!section) throw Error(ErrorCode::UnknownKey, "unknown section [" + name + "]");
    for (const auto& [key, leaf] : node) take(key, leaf.data(), section);
  }

  auto required = [&](const char* key) {
    auto it = values.find(key);
    if (it == values.end()) {
      throw Error(ErrorCode::MissingField, std::string("missing required key '") + key + "'");
    }
    return to_number(key, it->second);
  };

  RunConfig cfg;
  const double v1 = required("v1");
  const double v2 = required("v2");
  const double alpha = required("alpha");
  const double mass = required("mass");
  cfg.potential = PotentialSpec::make(v1, v2, alpha, mass);

  if (auto it = values.find("abs_tol"); it != values.end()) {
    cfg.solver.abs_tol = to_number("abs_tol", it->second);
  }
  if (auto it = values.find("max_iter"); it != values.end()) {
    cfg.solver.max_iter = static_cast<int>(to_integer("max_iter", it->second));
  }
  if (auto it = values.find("bracket_samples"); it != values.end()) {
    cfg.solver.bracket_samples = static_cast<int>(to_integer("bracket_samples", it->second));
  }
  if (auto it = values.find("r_max_factor"); it != values.end()) {
    cfg.grid.r_max_factor = to_number("r_max_factor", it->second);
  }
  if (auto it = values.find("n_points"); it != values.end()) {
    const long long n = to_integer("n_points", it->second);
    if (n < 0) throw Error(ErrorCode::InvalidValue, "n_points must be positive");
    cfg.grid.n_points = static_cast<std::size_t>(n);
  }
  if (auto it = values.find("domain_mode"); it != values.end()) {
    cfg.grid.mode = parse_domain_mode(it->second);
  }
  cfg.solver.validate();
  cfg.grid.validate();
  return cfg;
}

PotentialSpec parse_spec(std::string_view text) { return parse_config(text).potential; }

std::string emit(const PotentialSpec& spec) {
  std::string out = "[potential]\n";
  out += "v1 = " + format_double(spec.v1) + "\n";
  out += "v2 = " + format_double(spec.v2) + "\n";
  out += "alpha = " + format_double(spec.alpha) + "\n";
  out += "mass = " + format_double(spec.mass) + "\n";
  return out;
}

std::string emit(const RunConfig& config) {
  std::string out = emit(config.potential);
  out += "\n[solver]\n";
  out += "abs_tol = " + format_double(config.solver.abs_tol) + "\n";
  out += "max_iter = " + std::to_string(config.solver.max_iter) + "\n";
  out += "bracket_samples = " + std::to_string(config.solver.bracket_samples) + "\n";
  out += "\n[grid]\n";
  out += "r_max_factor = " + format_double(config.grid.r_max_factor) + "\n";
  out += "n_points = " + std::to_string(config.grid.n_points) + "\n";
  out += "domain_mode = " + std::string(to_string(config.grid.mode)) + "\n";
  return out;
}

// ---------------------------------------------------------------------------
// sampled functions

double RadialFunction::max_abs() const {
  double m = 0.0;
  for (double v : values) m = std::max(m, std::abs(v));
  return m;
}

double RadialFunction::endpoint_ratio() const {
  const double m = max_abs();
  if (values.empty() || m == 0.0) return 0.0;
  return std::max(std::abs(values.front()), std::abs(values.back())) / m;
}

int count_nodes(std::span<const double> values, double floor_fraction) {
  double m = 0.0;
  for (double v : values) m = std::max(m, std::abs(v));
  const double floor = floor_fraction * m;
  int nodes = 0;
  int last_sign = 0;
  for (double v : values) {
    if (std::abs(v) <= floor) continue;
    const int sign = v > 0.0 ? 1 : -1;
    if (last_sign != 0 && sign != last_sign) ++nodes;
    last_sign = sign;
  }
  return nodes;
}

double normalize_in_place(std::vector<double>& values, double spacing,
                          std::span<const double> weight) {
  std::vector<double> density(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    density[i] = values[i] * values[i] * (weight.empty() ? 1.0 : weight[i]);
  }
  const double integral = simpson(density, spacing);
  if (!(integral > 0.0) || !std::isfinite(integral)) {
    throw Error(ErrorCode::NotNormalizable, "norm integral is not a positive finite number");
  }
  const double factor = 1.0 / std::sqrt(integral);
  for (double& v : values) v *= factor;
  return factor;
}

}  // namespace kgeckart
