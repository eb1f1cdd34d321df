#include "config.hpp"

#include <fstream>
#include <iomanip>
#include <numbers>
#include <set>
#include <sstream>

namespace cli {

using nlohmann::json;
using worldline::ValidationError;

std::string to_string(Command command) {
  switch (command) {
    case Command::Solve:
      return "solve";
    case Command::Verify:
      return "verify";
    case Command::Frontal:
      return "frontal";
    case Command::Identities:
      return "identities";
  }
  return "unknown";
}

std::string FamilySpec::describe() const {
  std::ostringstream s;
  s << std::setprecision(15);
  auto interval_text = [&](const worldline::Interval& I) {
    std::ostringstream t;
    t << std::setprecision(6) << "(" << I.lo << ", " << I.hi << ")";
    return t.str();
  };
  switch (kind) {
    case FamilyKind::Polynomial:
      s << "polynomial(k=" << k << ", n=" << n << ", " << (exact ? "exact" : "float");
      if (interval) s << ", I=" << interval_text(*interval);
      s << ")";
      break;
    case FamilyKind::Harmonic:
      s << "harmonic(I=" << interval_text(interval.value_or(worldline::Interval{-std::numbers::pi / 2, std::numbers::pi / 2})) << ")";
      break;
    case FamilyKind::Constant:
      s << "constant(k=" << k << ", n=" << n << ")";
      break;
    case FamilyKind::Ode:
      s << "ode(" << rhs << ", k=" << k << ", n=" << n;
      for (const auto& [name, value] : constants) s << ", " << name << "=" << value;
      s << ", t0=" << chart.t0 << ", I=" << interval_text(chart.interval) << ")";
      break;
    case FamilyKind::Sincov:
      s << "sincov(" << system;
      if (system == "cyclic") {
        s << ", size=" << size << ", times " << first << ".." << last;
      } else {
        s << ", n=" << n;
      }
      s << ")";
      break;
  }
  return s.str();
}

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw ValidationError(path + ": " + what);
}

// A JSON object whose keys must all be consumed.
class Section {
 public:
  Section(const json& node, std::string path) : node_(node), path_(std::move(path)) {
    if (!node_.is_object()) fail(path_, "expected an object");
  }

  std::string at(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  const json* find(const std::string& key) {
    const auto it = node_.find(key);
    if (it == node_.end()) return nullptr;
    used_.insert(key);
    return &*it;
  }

  const json& require(const std::string& key) {
    const json* node = find(key);
    if (!node) fail(at(key), "required key missing");
    return *node;
  }

  void finish() const {
    for (const auto& [key, value] : node_.items()) {
      if (!used_.count(key)) fail(at(key), "unknown key");
    }
  }

 private:
  const json& node_;
  std::string path_;
  std::set<std::string> used_;
};

double as_number(const json& node, const std::string& path) {
  if (!node.is_number()) fail(path, "expected a number");
  return node.get<double>();
}

int as_int(const json& node, const std::string& path) {
  if (!node.is_number_integer()) fail(path, "expected an integer");
  return node.get<int>();
}

std::string as_string(const json& node, const std::string& path) {
  if (!node.is_string()) fail(path, "expected a string");
  return node.get<std::string>();
}

Rational as_rational(const json& node, const std::string& path) {
  if (node.is_number_integer()) return Rational(node.get<std::int64_t>());
  if (node.is_number()) return Rational(node.get<double>());
  if (node.is_string()) {
    try {
      return worldline::parse_rational(node.get<std::string>());
    } catch (const std::exception& e) {
      fail(path, e.what());
    }
  }
  fail(path, "expected a number or a rational string such as \"1/3\"");
}

VectorXd as_vector(const json& node, const std::string& path) {
  if (node.is_number()) return VectorXd::Constant(1, node.get<double>());
  if (!node.is_array() || node.empty()) fail(path, "expected a non-empty array of numbers");
  VectorXd v(static_cast<Eigen::Index>(node.size()));
  for (std::size_t i = 0; i < node.size(); ++i) {
    v[static_cast<Eigen::Index>(i)] = as_number(node[i], path + "[" + std::to_string(i) + "]");
  }
  return v;
}

Vec<Rational> as_rational_vector(const json& node, const std::string& path) {
  if (!node.is_array()) return Vec<Rational>::Constant(1, as_rational(node, path));
  if (node.empty()) fail(path, "expected a non-empty array");
  Vec<Rational> v(static_cast<Eigen::Index>(node.size()));
  for (std::size_t i = 0; i < node.size(); ++i) {
    v[static_cast<Eigen::Index>(i)] = as_rational(node[i], path + "[" + std::to_string(i) + "]");
  }
  return v;
}

worldline::Interval as_interval(const json& node, const std::string& path) {
  if (!node.is_array() || node.size() != 2) fail(path, "expected [lo, hi]");
  const double lo = as_number(node[0], path + "[0]");
  const double hi = as_number(node[1], path + "[1]");
  if (!(lo < hi)) fail(path, "interval must satisfy lo < hi");
  return {lo, hi};
}

int positive_int(const json& node, const std::string& path) {
  const int v = as_int(node, path);
  if (v < 1) fail(path, "must be at least 1");
  return v;
}

double positive_number(const json& node, const std::string& path) {
  const double v = as_number(node, path);
  if (!(v > 0.0)) fail(path, "must be positive");
  return v;
}

FamilyKind parse_kind(const std::string& text, const std::string& path) {
  if (text == "polynomial") return FamilyKind::Polynomial;
  if (text == "harmonic") return FamilyKind::Harmonic;
  if (text == "sincov") return FamilyKind::Sincov;
  if (text == "ode") return FamilyKind::Ode;
  if (text == "constant") return FamilyKind::Constant;
  fail(path, "unknown family kind '" + text + "' (polynomial, harmonic, sincov, ode, constant)");
}

FamilySpec parse_family(const json& node) {
  Section s(node, "family");
  FamilySpec f;
  f.kind = parse_kind(as_string(s.require("kind"), s.at("kind")), s.at("kind"));
  auto read_kn = [&](int default_k) {
    f.k = default_k;
    if (const json* k = s.find("k")) f.k = positive_int(*k, s.at("k"));
    if (const json* n = s.find("n")) f.n = positive_int(*n, s.at("n"));
  };
  auto read_interval = [&] {
    if (const json* i = s.find("interval")) f.interval = as_interval(*i, s.at("interval"));
  };

  switch (f.kind) {
    case FamilyKind::Polynomial:
      read_kn(2);
      read_interval();
      if (const json* mode = s.find("arithmetic")) {
        const auto text = as_string(*mode, s.at("arithmetic"));
        if (text == "exact") {
          f.exact = true;
        } else if (text != "float") {
          fail(s.at("arithmetic"), "expected \"float\" or \"exact\"");
        }
      }
      break;
    case FamilyKind::Harmonic:
      f.k = 2;
      f.n = 1;
      read_interval();
      if (f.interval && f.interval->length() > std::numbers::pi) {
        fail(s.at("interval"), "harmonic interval must not be longer than pi");
      }
      break;
    case FamilyKind::Constant:
      read_kn(2);
      read_interval();
      break;
    case FamilyKind::Ode: {
      f.rhs = as_string(s.require("rhs"), s.at("rhs"));
      read_kn(2);
      if (const json* c = s.find("constants")) {
        if (!c->is_object()) fail(s.at("constants"), "expected an object");
        for (const auto& [name, value] : c->items()) {
          f.constants[name] = as_number(value, s.at("constants") + "." + name);
        }
      }
      Section chart(s.require("chart"), s.at("chart"));
      if (const json* t0 = chart.find("t0")) f.chart.t0 = as_number(*t0, chart.at("t0"));
      f.chart.interval = as_interval(chart.require("interval"), chart.at("interval"));
      if (!f.chart.interval.contains(f.chart.t0)) fail(chart.at("t0"), "anchor must lie inside the interval");
      const int dim = f.k * f.n;
      if (const json* c = chart.find("center")) {
        f.chart.center = as_vector(*c, chart.at("center"));
        if (f.chart.center->size() != dim) fail(chart.at("center"), "expected k*n entries");
        VectorXd hw = as_vector(chart.require("half_widths"), chart.at("half_widths"));
        if (hw.size() == 1) hw = VectorXd::Constant(dim, hw[0]);
        if (hw.size() != dim) fail(chart.at("half_widths"), "expected 1 or k*n entries");
        if ((hw.array() <= 0.0).any()) fail(chart.at("half_widths"), "must be positive");
        f.chart.half_widths = hw;
      }
      chart.finish();
      // Reject unknown right-hand sides and constants before running.
      (void)worldline::make_catalog_rhs(f.rhs, f.k, f.n, f.constants);
      break;
    }
    case FamilyKind::Sincov: {
      f.k = 1;
      f.system = as_string(s.require("system"), s.at("system"));
      if (f.system == "identity" || f.system == "multiplicative") {
        if (const json* n = s.find("n")) f.n = positive_int(*n, s.at("n"));
      } else if (f.system == "translation") {
        f.drift = as_vector(s.require("drift"), s.at("drift"));
        f.n = static_cast<int>(f.drift.size());
      } else if (f.system == "cyclic") {
        if (const json* v = s.find("size")) f.size = positive_int(*v, s.at("size"));
        if (const json* v = s.find("first")) f.first = as_int(*v, s.at("first"));
        if (const json* v = s.find("last")) f.last = as_int(*v, s.at("last"));
        if (f.last < f.first) fail(s.at("last"), "must not precede first");
      } else {
        fail(s.at("system"), "unknown system '" + f.system +
                                 "' (identity, translation, multiplicative, cyclic)");
      }
      break;
    }
  }
  s.finish();
  return f;
}

SolverSpec parse_solver(const json& node) {
  Section s(node, "solver");
  SolverSpec solver;
  if (const json* v = s.find("tolerance")) solver.newton.tolerance = positive_number(*v, s.at("tolerance"));
  if (const json* v = s.find("max_iterations")) solver.newton.max_iterations = positive_int(*v, s.at("max_iterations"));
  if (const json* v = s.find("max_halvings")) solver.newton.max_halvings = positive_int(*v, s.at("max_halvings"));
  if (const json* v = s.find("step")) solver.step = positive_number(*v, s.at("step"));
  if (const json* v = s.find("quadrature_points")) solver.quadrature_points = positive_int(*v, s.at("quadrature_points"));
  s.finish();
  return solver;
}

std::vector<Rational> parse_grid(const json& node, const std::string& path) {
  std::vector<Rational> grid;
  if (node.is_array()) {
    for (std::size_t i = 0; i < node.size(); ++i) {
      grid.push_back(as_rational(node[i], path + "[" + std::to_string(i) + "]"));
    }
  } else {
    Section s(node, path);
    const Rational start = as_rational(s.require("start"), s.at("start"));
    const Rational stop = as_rational(s.require("stop"), s.at("stop"));
    const Rational step = as_rational(s.require("step"), s.at("step"));
    s.finish();
    if (step <= 0) fail(s.at("step"), "must be positive");
    if (stop < start) fail(s.at("stop"), "must not precede start");
    const Rational count = (stop - start) / step;
    if (count > 1000000) fail(path, "more than a million grid points");
    for (Rational t = start; t <= stop; t += step) grid.push_back(t);
  }
  if (grid.empty()) fail(path, "grid is empty");
  return grid;
}

void check_restriction(const RunConfig& config, const std::string& path) {
  const auto& a = config.task.restriction;
  const int expected = config.family.k;
  if (static_cast<int>(a.size()) != expected) {
    fail(path, "expected " + std::to_string(expected) + " points, got " + std::to_string(a.size()));
  }
  for (std::size_t i = 0; i < a.size(); ++i) {
    const bool labelled = config.family.kind == FamilyKind::Sincov && config.family.system == "cyclic";
    const Eigen::Index dim = labelled ? 1 : config.family.n;
    if (a[i].value.size() != dim) {
      fail(path + "[" + std::to_string(i) + "]", "value must have n = " + std::to_string(dim) + " entries");
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (a[i].t == a[j].t) throw ValidationError(path + ": nodes not distinct");
    }
  }
}

TaskSpec parse_task(const json* node, RunConfig& config) {
  static const json empty = json::object();
  Section s(node ? *node : empty, "task");
  TaskSpec task;
  if (const json* type = s.find("type")) {
    const auto text = as_string(*type, s.at("type"));
    if (text != to_string(config.command)) {
      fail(s.at("type"), "task type '" + text + "' does not match the command '" +
                             to_string(config.command) + "'");
    }
  }

  switch (config.command) {
    case Command::Solve: {
      const json& points = s.require("restriction");
      if (!points.is_array()) fail(s.at("restriction"), "expected an array of [t, value] pairs");
      for (std::size_t i = 0; i < points.size(); ++i) {
        const auto path = s.at("restriction") + "[" + std::to_string(i) + "]";
        if (!points[i].is_array() || points[i].size() != 2) fail(path, "expected [t, value]");
        task.restriction.push_back(
            {as_rational(points[i][0], path + "[0]"), as_rational_vector(points[i][1], path + "[1]")});
      }
      config.task = task;
      check_restriction(config, s.at("restriction"));
      if (const json* grid = s.find("grid")) {
        task.grid = parse_grid(*grid, s.at("grid"));
      } else {
        for (const auto& p : task.restriction) task.grid.push_back(p.t);
      }
      if (const json* guess = s.find("guess")) {
        task.guess = as_vector(*guess, s.at("guess"));
        if (task.guess->size() != config.family.k * config.family.n) {
          fail(s.at("guess"), "expected k*n entries");
        }
      }
      break;
    }
    case Command::Verify:
    case Command::Identities:
      if (const json* v = s.find("samples")) task.samples = positive_int(*v, s.at("samples"));
      if (const json* v = s.find("tolerance")) {
        task.tolerance = as_number(*v, s.at("tolerance"));
        if (*task.tolerance < 0.0) fail(s.at("tolerance"), "must be non-negative");
      }
      break;
    case Command::Frontal: {
      task.t0 = as_number(s.require("t0"), s.at("t0"));
      task.w0 = as_vector(s.require("w0"), s.at("w0"));
      if (task.w0.size() != config.family.k * config.family.n) fail(s.at("w0"), "expected k*n entries");
      if (const json* loc = s.find("localize")) {
        Section l(*loc, s.at("localize"));
        auto& spec = task.localize;
        if (const json* v = l.find("time_half_width")) spec.time_half_width = positive_number(*v, l.at("time_half_width"));
        if (const json* v = l.find("parameter_half_widths")) {
          spec.parameter_half_widths = as_vector(*v, l.at("parameter_half_widths"));
          if ((spec.parameter_half_widths.array() <= 0.0).any()) fail(l.at("parameter_half_widths"), "must be positive");
        }
        if (const json* v = l.find("min_time_half_width")) spec.min_time_half_width = positive_number(*v, l.at("min_time_half_width"));
        if (const json* v = l.find("condition_cap")) spec.condition_cap = positive_number(*v, l.at("condition_cap"));
        if (const json* v = l.find("beta_draws")) spec.beta_draws = positive_int(*v, l.at("beta_draws"));
        l.finish();
      }
      break;
    }
  }
  s.finish();
  return task;
}

}  // namespace

RunConfig parse_config(const json& root, Command command) {
  Section s(root, "");
  RunConfig config;
  config.command = command;
  config.family = parse_family(s.require("family"));
  if (const json* solver = s.find("solver")) config.solver = parse_solver(*solver);
  config.task = parse_task(s.find("task"), config);
  if (const json* out = s.find("output")) {
    Section o(*out, "output");
    if (const json* path = o.find("path")) config.output = as_string(*path, o.at("path"));
    if (const json* format = o.find("format")) {
      if (as_string(*format, o.at("format")) != "csv") fail(o.at("format"), "only \"csv\" is supported");
    }
    o.finish();
  }
  if (const json* seed = s.find("seed")) {
    if (!seed->is_number_unsigned()) fail("seed", "expected a non-negative integer");
    config.seed = seed->get<std::uint64_t>();
  }
  s.finish();

  if (command == Command::Frontal && config.family.kind == FamilyKind::Sincov) {
    throw ValidationError("family: the frontal check needs a smooth family, not a Sincov system");
  }
  if (command == Command::Frontal && config.family.exact) {
    throw ValidationError("family: the frontal check runs in floating point; drop \"arithmetic\": \"exact\"");
  }
  return config;
}

RunConfig load_config(const std::filesystem::path& path, Command command) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open config file " + path.string());
  json root;
  try {
    root = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ValidationError("config " + path.string() + " is not valid JSON: " + e.what());
  }
  return parse_config(root, command);
}

}  // namespace cli
