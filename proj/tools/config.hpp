#pragma once

// Run configuration for the command-line tool. Everything is parsed and
// validated up front; unknown keys are rejected.

#include "worldline/core.hpp"
#include "worldline/newton.hpp"
#include "worldline/ode.hpp"
#include "worldline/rational.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace cli {

using worldline::Rational;
using worldline::Vec;
using worldline::VectorXd;

enum class Command { Solve, Verify, Frontal, Identities };

std::string to_string(Command command);

enum class FamilyKind { Polynomial, Harmonic, Sincov, Ode, Constant };

struct ChartSpec {
  double t0 = 0.0;
  worldline::Interval interval{};
  /// Box U = center +- half_widths; unbounded when absent.
  std::optional<VectorXd> center;
  std::optional<VectorXd> half_widths;
};

struct FamilySpec {
  FamilyKind kind = FamilyKind::Polynomial;
  int k = 2;
  int n = 1;
  std::optional<worldline::Interval> interval;
  bool exact = false;

  // ode
  std::string rhs;
  std::map<std::string, double> constants;
  ChartSpec chart;

  // sincov
  std::string system;
  VectorXd drift;
  int size = 3;
  int first = 0;
  int last = 10;

  std::string describe() const;
};

struct SolverSpec {
  worldline::NewtonSettings newton;
  double step = worldline::kDefaultStep;
  int quadrature_points = 16;
};

/// One anchor (t, value) kept exactly; doubles convert without loss.
struct Point {
  Rational t;
  Vec<Rational> value;
};

struct LocalizeSpec {
  double time_half_width = 0.5;
  VectorXd parameter_half_widths = VectorXd::Constant(1, 0.5);
  double min_time_half_width = 1e-2;
  double condition_cap = 1e8;
  int beta_draws = 8;
};

struct TaskSpec {
  // solve
  std::vector<Point> restriction;
  std::vector<Rational> grid;
  std::optional<VectorXd> guess;
  // verify / identities
  int samples = 200;
  std::optional<double> tolerance;
  // frontal
  double t0 = 0.0;
  VectorXd w0;
  LocalizeSpec localize;
};

struct RunConfig {
  Command command = Command::Solve;
  FamilySpec family;
  SolverSpec solver;
  TaskSpec task;
  std::optional<std::filesystem::path> output;
  std::uint64_t seed = 42;
};

/// Parses and validates a configuration for `command`. Throws
/// worldline::ValidationError on malformed input or unknown keys.
RunConfig parse_config(const nlohmann::json& root, Command command);

RunConfig load_config(const std::filesystem::path& path, Command command);

}  // namespace cli
