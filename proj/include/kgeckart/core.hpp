#pragma once

// Shared domain types for the s-wave Klein-Gordon problem with equal scalar
// and vector Eckart potential V(r) = v1 sech^2(alpha r) - v2 tanh(alpha r).
// Natural units (hbar = c = 1) throughout.

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace kgeckart {

enum class ErrorCode {
  // configuration
  MissingField,
  NonFinite,
  NonPositive,
  UnknownKey,
  InvalidValue,
  // susy
  ComplexDiscriminant,
  DivisionByZero,
  SingularMap,
  LadderTerminated,
  // spectrum
  ComplexDelta,
  DegenerateIndex,
  NoRoot,
  NoConvergence,
  // numerics
  EvenSampleCount,
  TooFewSamples,
  // wavefunction
  NotNormalizable,
  // oracle
  IllConditionedShift,
  NoBoundState,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what);
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

struct PotentialSpec {
  double v1 = 0.0;     // sech^2 strength (energy)
  double v2 = 0.0;     // tanh strength (energy)
  double alpha = 1.0;  // range parameter (inverse length)
  double mass = 1.0;   // particle mass (energy)

  /// Validating constructor: alpha, mass > 0 and all fields finite.
  static PotentialSpec make(double v1, double v2, double alpha, double mass);

  friend bool operator==(const PotentialSpec&, const PotentialSpec&) = default;
};

/// Root brackets stay this far (times M) inside (-M, M); E = -M kills the
/// effective coupling identically.
inline constexpr double kBracketInset = 1e-9;

inline double bracket_lo(const PotentialSpec& s) { return -s.mass * (1.0 - kBracketInset); }
inline double bracket_hi(const PotentialSpec& s) { return s.mass * (1.0 - kBracketInset); }

enum class DomainMode { FullLine, HalfLine };

std::string_view to_string(DomainMode mode);
DomainMode parse_domain_mode(std::string_view text);

struct RadialGrid {
  double r_min = 0.0;
  double r_max = 0.0;
  std::size_t n_points = 0;
  DomainMode mode = DomainMode::FullLine;

  /// Checks r_min < r_max, n_points >= 3 and odd, and the mode's r_min rule.
  static RadialGrid make(double r_max, std::size_t n_points, DomainMode mode);

  double spacing() const { return (r_max - r_min) / static_cast<double>(n_points - 1); }
  double point(std::size_t i) const { return r_min + spacing() * static_cast<double>(i); }
  std::vector<double> points() const;

  /// Same interval sampled at every `stride`-th point.
  RadialGrid coarsened(std::size_t stride) const;

  friend bool operator==(const RadialGrid&, const RadialGrid&) = default;
};

struct SolverSettings {
  double abs_tol = 1e-12;
  int max_iter = 200;
  int bracket_samples = 400;

  void validate() const;
  friend bool operator==(const SolverSettings&, const SolverSettings&) = default;
};

struct GridSettings {
  double r_max_factor = 50.0;  // r_max = r_max_factor / alpha
  std::size_t n_points = 4001;
  DomainMode mode = DomainMode::FullLine;

  void validate() const;
  friend bool operator==(const GridSettings&, const GridSettings&) = default;
};

/// Everything a config file can carry.
struct RunConfig {
  PotentialSpec potential;
  SolverSettings solver;
  GridSettings grid;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

/// Parses the INI-style config ([potential], [solver], [grid] sections;
/// keys may also appear unsectioned). Unknown keys are errors.
RunConfig parse_config(std::string_view text);
PotentialSpec parse_spec(std::string_view text);

std::string emit(const RunConfig& config);
std::string emit(const PotentialSpec& spec);

RadialGrid default_grid(const PotentialSpec& spec, DomainMode mode = DomainMode::FullLine);
RadialGrid make_grid(const PotentialSpec& spec, const GridSettings& settings);

/// 17 significant digits; round-trips every double.
std::string format_double(double value);

/// A sampled wavefunction. `positions` is usually grid.points(); HalfLine
/// analytic functions are sampled half a spacing off the origin.
struct RadialFunction {
  RadialGrid grid;
  std::vector<double> positions;
  std::vector<double> values;
  double norm_constant = 1.0;
  int node_count = 0;
  bool pole_at_origin = false;

  /// max(|first|, |last|) / max|values|
  double endpoint_ratio() const;
  double max_abs() const;
};

/// Sign changes between consecutive samples, ignoring samples below
/// floor_fraction * max|values|.
int count_nodes(std::span<const double> values, double floor_fraction = 1e-12);

/// Scales `values` so that the Simpson integral of `weight * values^2` is 1;
/// returns the applied factor. An empty weight means unit weight.
double normalize_in_place(std::vector<double>& values, double spacing,
                          std::span<const double> weight = {});

}  // namespace kgeckart
