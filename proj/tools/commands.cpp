#include "commands.hpp"

#include "worldline/chladek.hpp"
#include "worldline/flow_core.hpp"
#include "worldline/frontal_check.hpp"
#include "worldline/frontal_embedding.hpp"
#include "worldline/harmonic.hpp"
#include "worldline/ode.hpp"
#include "worldline/polynomial.hpp"
#include "worldline/sincov.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <random>
#include <sstream>
#include <variant>

namespace cli {

using nlohmann::json;
using namespace worldline;

namespace {

// ---------------------------------------------------------------- formatting

std::string num(double x) {
  std::ostringstream s;
  s << std::setprecision(15) << x;
  return s.str();
}

std::string num(const Rational& x) { return x.str(); }

std::string sci(double x) {
  if (x == 0.0) return "0";
  std::ostringstream s;
  s << std::scientific << std::setprecision(3) << x;
  return s.str();
}

template <typename Vector>
std::string bracket(const Vector& v) {
  std::string out = "[";
  for (Eigen::Index i = 0; i < v.size(); ++i) out += (i ? ", " : "") + num(v[i]);
  return out + "]";
}

json json_vector(const VectorXd& v) { return json(std::vector<double>(v.begin(), v.end())); }

json json_vector(const Vec<Rational>& v) {
  json out = json::array();
  for (const auto& x : v) out.push_back(x.str());
  return out;
}

std::string describe_interval(const Interval& I) {
  return "(" + num(I.lo) + ", " + num(I.hi) + ")";
}

void write_summary(std::ostream& os, const json& summary) {
  os << "--- summary ---\n" << summary.dump(2) << "\n";
}

// Sends text to the configured path, or to `fallback`.
void emit(const std::optional<std::filesystem::path>& path, std::ostream& fallback,
          const std::string& text) {
  if (!path) {
    fallback << text;
    return;
  }
  std::ofstream file(*path, std::ios::binary);
  if (!file) throw ValidationError("cannot write output file " + path->string());
  file << text;
}

// ------------------------------------------------------------------ families

LocalChart chart_of(const FamilySpec& spec, double step) {
  LocalChart chart{spec.chart.t0, spec.chart.interval, BoxDomain::unbounded(spec.k * spec.n), step};
  if (spec.chart.center) chart.box = BoxDomain::around(*spec.chart.center, *spec.chart.half_widths);
  return chart;
}

FamilyPtr build_family(const RunConfig& config) {
  const auto& f = config.family;
  const Interval I = f.interval.value_or(Interval{});
  switch (f.kind) {
    case FamilyKind::Polynomial:
      return std::make_shared<PolynomialFamily>(f.k, f.n, I);
    case FamilyKind::Harmonic:
      return f.interval ? std::make_shared<HarmonicFamily>(*f.interval)
                        : std::make_shared<HarmonicFamily>();
    case FamilyKind::Constant:
      return std::make_shared<ConstantFamily>(f.k, f.n, I);
    case FamilyKind::Ode:
      return std::make_shared<OdeFamily>(make_catalog_rhs(f.rhs, f.k, f.n, f.constants),
                                         chart_of(f, config.solver.step));
    case FamilyKind::Sincov:
      break;
  }
  throw ValidationError("family: a Sincov system is not a parametrised family");
}

using SincovSystem = std::variant<RealSincovSystem, FiniteSincovSystem>;

SincovSystem build_sincov(const FamilySpec& f) {
  if (f.system == "identity") return RealSincovSystem::identity(f.n);
  if (f.system == "translation") return RealSincovSystem::translation(f.drift);
  if (f.system == "multiplicative") return RealSincovSystem::multiplicative(f.n);
  return FiniteSincovSystem::cyclic(f.size, f.first, f.last);
}

InversionSettings inversion_settings(const RunConfig& config) {
  InversionSettings s;
  s.newton = config.solver.newton;
  return s;
}

Restriction float_restriction(const std::vector<Point>& points) {
  std::vector<Restriction::Entry> entries;
  for (const auto& p : points) entries.push_back({to_double(p.t), p.value.unaryExpr([](const Rational& x) {
                                                                     return to_double(x);
                                                                   })});
  return Restriction(std::move(entries));
}

ExactRestriction exact_restriction(const std::vector<Point>& points) {
  std::vector<ExactRestriction::Entry> entries;
  for (const auto& p : points) entries.push_back({p.t, p.value});
  return ExactRestriction(std::move(entries), 0.0);
}

// --------------------------------------------------------------------- solve

struct SolveOutput {
  std::string csv;
  std::string report;
};

std::string csv_header(Eigen::Index n) {
  std::string h = "t";
  for (Eigen::Index i = 1; i <= n; ++i) h += ",x_" + std::to_string(i);
  return h + "\n";
}

template <typename Scalar, typename Curve>
std::string csv_rows(const std::vector<Scalar>& grid, const Curve& curve, Eigen::Index n) {
  std::string out = csv_header(n);
  for (const auto& t : grid) {
    const auto x = curve(t);
    out += num(t);
    for (Eigen::Index i = 0; i < x.size(); ++i) out += "," + num(x[i]);
    out += "\n";
  }
  return out;
}

std::string solve_report(const RunConfig& config, const json& summary, const std::string& w,
                         double residual, int iterations, const std::string& method) {
  std::ostringstream r;
  r << "command: solve\n"
    << "family: " << config.family.describe() << "\n"
    << "w: " << w << "\n"
    << "anchor_residual: " << sci(residual) << "\n"
    << "iterations: " << iterations << "\n"
    << "method: " << method << "\n"
    << "samples: " << config.task.grid.size() << "\n";
  write_summary(r, summary);
  return r.str();
}

std::vector<double> float_grid(const std::vector<Rational>& grid) {
  std::vector<double> out;
  for (const auto& t : grid) out.push_back(to_double(t));
  return out;
}

SolveOutput solve_exact(const RunConfig& config) {
  const auto& f = config.family;
  const Interval I = f.interval.value_or(Interval{});
  const ExactPolynomialFlow flow(f.k, f.n, I);
  const ExactRestriction a = exact_restriction(config.task.restriction);
  for (const auto& e : a) {
    if (!I.contains(to_double(e.t))) throw DomainError("restriction time " + e.t.str() + " lies outside I");
  }
  for (const auto& t : config.task.grid) {
    if (!I.contains(to_double(t))) throw DomainError("grid time " + t.str() + " lies outside I");
  }
  const auto x = flow.flow(a);
  const auto w = stack_blocks(x.coefficients());
  Rational worst = 0;
  for (const auto& e : a) {
    for (Eigen::Index i = 0; i < e.value.size(); ++i) worst = std::max(worst, abs_value(Rational(x(e.t)[i] - e.value[i])));
  }
  json summary{{"command", "solve"},
               {"family", f.describe()},
               {"w", json_vector(w)},
               {"anchor_residual", worst.str()},
               {"iterations", 0},
               {"method", "analytic"},
               {"samples", config.task.grid.size()}};
  return {csv_rows(config.task.grid, x, f.n),
          solve_report(config, summary, bracket(w), to_double(worst), 0, "analytic")};
}

SolveOutput solve_sincov(const RunConfig& config) {
  const auto system = build_sincov(config.family);
  const auto& anchor = config.task.restriction.front();
  const double s = to_double(anchor.t);
  const auto grid = float_grid(config.task.grid);
  std::string csv;
  std::string w;
  json jw;
  if (const auto* real = std::get_if<RealSincovSystem>(&system)) {
    const VectorXd m = anchor.value.unaryExpr([](const Rational& x) { return to_double(x); });
    csv = csv_rows(grid, [&](double t) { return sincov_F(*real, t, s, m); }, real->dim());
    w = bracket(m);
    jw = json_vector(m);
  } else {
    const auto& finite = std::get<FiniteSincovSystem>(system);
    const Rational& label = anchor.value[0];
    if (denominator(label) != 1) throw ValidationError("task.restriction: labels must be integers");
    const int m = static_cast<int>(numerator(label));
    csv = csv_rows(grid, [&](double t) { return Eigen::VectorXi::Constant(1, sincov_F(finite, t, s, m)); }, 1);
    w = "[" + std::to_string(m) + "]";
    jw = json::array({m});
  }
  json summary{{"command", "solve"}, {"family", config.family.describe()}, {"w", jw},
               {"anchor_residual", 0.0}, {"iterations", 0}, {"method", "analytic"},
               {"samples", grid.size()}};
  return {csv, solve_report(config, summary, w, 0.0, 0, "analytic")};
}

SolveOutput solve_family(const RunConfig& config, const Overrides& overrides) {
  auto settings = inversion_settings(config);
  if (overrides.tolerance) settings.newton.tolerance = *overrides.tolerance;
  const FamilyPtr family = build_family(config);
  const Restriction a = float_restriction(config.task.restriction);
  const auto r = invert_omega_beta(*family, a, config.task.guess, settings);
  const auto grid = float_grid(config.task.grid);
  for (double t : grid) {
    if (!family->interval().contains(t)) throw DomainError("grid time " + num(t) + " lies outside I");
  }
  const auto values = family->evaluate_many(grid, r.w);
  std::string csv = csv_header(family->dim());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    csv += num(grid[i]);
    for (Eigen::Index c = 0; c < values[i].size(); ++c) csv += "," + num(values[i][c]);
    csv += "\n";
  }
  const std::string method = r.analytic ? "analytic" : "newton";
  json summary{{"command", "solve"}, {"family", config.family.describe()}, {"w", json_vector(r.w)},
               {"anchor_residual", r.residual}, {"iterations", r.iterations}, {"method", method},
               {"samples", grid.size()}};
  return {csv, solve_report(config, summary, bracket(r.w), r.residual, r.iterations, method)};
}

int run_solve(const RunConfig& config, const Overrides& overrides, std::ostream& out,
              std::ostream& log) {
  SolveOutput result;
  if (config.family.kind == FamilyKind::Sincov) {
    result = solve_sincov(config);
  } else if (config.family.exact) {
    result = solve_exact(config);
  } else {
    result = solve_family(config, overrides);
  }
  if (config.output) {
    emit(config.output, out, result.csv);
    out << result.report;
  } else {
    out << result.csv;
    log << result.report;
  }
  return kExitOk;
}

// -------------------------------------------------------------------- verify

struct Law {
  std::string name;
  double max_residual = 0.0;
  double tolerance = 0.0;
  std::size_t samples = 0;
  std::size_t failures = 0;
  std::string first_failure;

  bool passed() const { return failures == 0 && max_residual <= tolerance; }
};

std::vector<Law> from_report(const AxiomReport& report, const std::string& consistency,
                             const std::string& restriction) {
  Law c{consistency, report.max_residual_consistency, report.tolerance, report.samples_tested,
        report.failures.size(), report.failures.empty() ? "" : report.failures.front().message};
  Law r{restriction, report.max_residual_restriction, report.tolerance, report.samples_tested,
        report.failures.size(), c.first_failure};
  return {c, r};
}

struct Sampler {
  std::mt19937_64 rng;
  double lo;
  double hi;

  double uniform(double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng); }
  double time() { return uniform(lo, hi); }

  // k sorted times, one per equal-width bin, away from the bin edges.
  std::vector<double> times(int k) {
    const double width = (hi - lo) / k;
    std::vector<double> ts(k);
    for (int i = 0; i < k; ++i) ts[i] = lo + (i + uniform(0.1, 0.9)) * width;
    return ts;
  }

  VectorXd parameter(const BoxDomain& box) {
    VectorXd w(box.lower.size());
    for (Eigen::Index i = 0; i < w.size(); ++i) {
      if (std::isfinite(box.lower[i]) && std::isfinite(box.upper[i])) {
        const double c = 0.5 * (box.lower[i] + box.upper[i]);
        const double h = 0.25 * (box.upper[i] - box.lower[i]);
        w[i] = uniform(c - h, c + h);
      } else {
        w[i] = uniform(-1.0, 1.0);
      }
    }
    return w;
  }

  // Multiple of 1/64 in [-4, 4]; sums and differences of these stay exact.
  double dyadic() { return std::uniform_int_distribution<int>(-256, 256)(rng) / 64.0; }

  Rational rational(int denominator) {
    const auto a = static_cast<int>(std::floor(lo * denominator));
    const auto b = static_cast<int>(std::ceil(hi * denominator));
    return Rational(std::uniform_int_distribution<int>(a + 1, b - 1)(rng), denominator);
  }

  std::vector<Rational> distinct_rationals(int k) {
    std::vector<Rational> out;
    while (static_cast<int>(out.size()) < k) {
      const Rational r = rational(64);
      if (std::find(out.begin(), out.end(), r) == out.end()) out.push_back(r);
    }
    return out;
  }
};

// Where random times are drawn: I itself, or a unit window on unbounded sides.
Sampler make_sampler(const Interval& I, std::uint64_t seed) {
  double lo = I.lo;
  double hi = I.hi;
  if (!std::isfinite(lo) && !std::isfinite(hi)) {
    lo = -1.0;
    hi = 1.0;
  } else if (!std::isfinite(lo)) {
    lo = hi - 2.0;
  } else if (!std::isfinite(hi)) {
    hi = lo + 2.0;
  }
  return Sampler{std::mt19937_64(seed), lo, hi};
}

std::vector<double> eval_grid(const Sampler& s, int count = 7) {
  const double pad = 0.01 * (s.hi - s.lo);
  std::vector<double> out;
  for (int i = 0; i < count; ++i) out.push_back(s.lo + pad + (s.hi - s.lo - 2 * pad) * i / (count - 1));
  return out;
}

double tolerance_for(const RunConfig& config, const Overrides& overrides, double fallback) {
  if (overrides.tolerance) return *overrides.tolerance;
  if (config.task.tolerance) return *config.task.tolerance;
  return fallback;
}

std::vector<Law> flow_axiom_laws(const RunConfig& config, const FamilyPtr& family, double tol) {
  Sampler s = make_sampler(family->interval(), config.seed);
  const BoxDomain box = family->parameter_domain();
  std::vector<Restriction> as;
  std::vector<TimeSet> betas;
  for (int i = 0; i < config.task.samples; ++i) {
    const VectorXd w = s.parameter(box);
    as.push_back(omega_beta(*family, w, TimeSet(s.times(family->order()))));
    betas.emplace_back(s.times(family->order()));
  }
  const auto report =
      verify_flow_axioms(FlowMap(family, inversion_settings(config)), as, betas, eval_grid(s), tol);
  return from_report(report, "flow re-anchoring", "flow restriction");
}

std::vector<Law> exact_polynomial_laws(const RunConfig& config, bool with_axioms) {
  const auto& f = config.family;
  const Interval I = f.interval.value_or(Interval{});
  Sampler s = make_sampler(I, config.seed);
  auto random_restriction = [&] {
    std::vector<ExactRestriction::Entry> entries;
    for (const auto& t : s.distinct_rationals(f.k)) {
      Vec<Rational> v(f.n);
      for (auto& x : v) x = Rational(std::uniform_int_distribution<int>(-300, 300)(s.rng), 7);
      entries.push_back({t, v});
    }
    return ExactRestriction(std::move(entries), 0.0);
  };

  std::vector<Law> laws;
  if (with_axioms) {
    std::vector<ExactRestriction> as;
    std::vector<ExactTimeSet> betas;
    for (int i = 0; i < config.task.samples; ++i) {
      as.push_back(random_restriction());
      betas.emplace_back(s.distinct_rationals(f.k), 0.0);
    }
    std::vector<Rational> grid;
    for (int i = 0; i < 5; ++i) grid.push_back(s.rational(64));
    const auto report = verify_flow_axioms(ExactPolynomialFlow(f.k, f.n, I), as, betas, grid, 0.0);
    laws = from_report(report, "flow re-anchoring", "flow restriction");
  }

  Law summation{"Lagrange summation identity", 0.0, 0.0, 0, 0, ""};
  Law witness{"distinct worldlines meet < k times", 0.0, 0.0, 0, 0, ""};
  for (int i = 0; i < config.task.samples; ++i) {
    const auto a = random_restriction();
    const auto r = lagrange_summation_identity(a, ExactTimeSet(s.distinct_rationals(f.k), 0.0), s.rational(64));
    for (const auto& x : r) summation.max_residual = std::max(summation.max_residual, std::abs(to_double(x)));
    ++summation.samples;

    const auto x1 = lagrange_flow(a);
    const auto x2 = lagrange_flow(random_restriction());
    const auto count = intersection_count(PolynomialWorldline<Rational>(x1.coefficients(), I),
                                          PolynomialWorldline<Rational>(x2.coefficients(), I));
    if (!count.identical && !count.consistent) {
      witness.max_residual = std::max(witness.max_residual, static_cast<double>(*count.count));
      ++witness.failures;
    }
    ++witness.samples;
  }
  laws.push_back(summation);
  laws.push_back(witness);
  return laws;
}

Law summation_law(const RunConfig& config, double tol) {
  const auto& f = config.family;
  Sampler s = make_sampler(f.interval.value_or(Interval{}), config.seed + 1);
  Law law{"Lagrange summation identity", 0.0, tol, 0, 0, ""};
  for (int i = 0; i < config.task.samples; ++i) {
    std::vector<Restriction::Entry> entries;
    for (double t : s.times(f.k)) {
      VectorXd v(f.n);
      for (auto& x : v) x = s.uniform(-1.0, 1.0);
      entries.push_back({t, v});
    }
    const Restriction a(std::move(entries));
    const double t = s.time();
    const double r = lagrange_summation_identity(a, TimeSet(s.times(f.k)), t).lpNorm<Eigen::Infinity>();
    law.max_residual = std::max(law.max_residual, scaled_residual(r, lagrange_value(a, t).lpNorm<Eigen::Infinity>()));
    ++law.samples;
  }
  return law;
}

Law goniometric_law(const RunConfig& config, const FamilyPtr& family, double tol) {
  Sampler s = make_sampler(family->interval(), config.seed + 1);
  Law law{"goniometric identity", 0.0, tol, 0, 0, ""};
  for (int i = 0; i < config.task.samples; ++i) {
    const auto ts = s.times(2);
    const auto a = Restriction::scalar({{ts[0], s.uniform(-1, 1)}, {ts[1], s.uniform(-1, 1)}});
    const double r = goniometric_identity(a, TimeSet(s.times(2)), s.time(), family->interval());
    law.max_residual = std::max(law.max_residual, std::abs(r));
    ++law.samples;
  }
  return law;
}

std::vector<Law> chladek_laws(const RunConfig& config, const FamilyPtr& family, double tol) {
  if (family->order() != 2) {
    throw ValidationError("family: Chladek equations need a second-order family (k = 2)");
  }
  Sampler s = make_sampler(family->interval(), config.seed + 2);
  const BoxDomain box = family->parameter_domain();
  const auto settings = inversion_settings(config);
  Law consistency{"Chladek re-anchoring", 0.0, tol, 0, 0, ""};
  Law boundary{"Chladek boundary", 0.0, tol, 0, 0, ""};
  for (int i = 0; i < config.task.samples; ++i) {
    const VectorXd w = s.parameter(box);
    auto ab = s.times(2);
    if (i % 2) std::swap(ab[0], ab[1]);
    auto gd = s.times(2);
    if (i % 3 == 0) std::swap(gd[0], gd[1]);
    const double tau = s.time();
    try {
      const ChladekProblem problem(family, ab[0], ab[1], family->evaluate(ab[0], w),
                                   family->evaluate(ab[1], w));
      consistency.max_residual = std::max(consistency.max_residual,
                                          chladek_consistency(problem, gd[0], gd[1], tau, settings));
      boundary.max_residual = std::max(boundary.max_residual, chladek_boundary_residual(problem, settings));
    } catch (const Error& e) {
      for (Law* law : {&consistency, &boundary}) {
        if (!law->failures++) law->first_failure = e.what();
      }
    }
    ++consistency.samples;
    ++boundary.samples;
  }
  return {consistency, boundary};
}

std::vector<Law> sincov_laws(const RunConfig& config, double tol) {
  const auto system = build_sincov(config.family);
  Sampler s = make_sampler(Interval{-4.0, 4.0}, config.seed);
  std::vector<Law> laws;
  if (const auto* real = std::get_if<RealSincovSystem>(&system)) {
    // Dyadic samples keep additive systems exact in double arithmetic.
    std::vector<SincovSample<VectorXd>> samples;
    auto point = [&] {
      VectorXd m(real->dim());
      for (auto& x : m) x = s.dyadic();
      return m;
    };
    for (int i = 0; i < config.task.samples; ++i) samples.push_back({s.dyadic(), s.dyadic(), s.dyadic(), point()});
    auto sincov = from_report(sincov_check(*real, samples, tol), "Sincov composition", "Sincov F(s,s,m) = m");
    laws.insert(laws.end(), sincov.begin(), sincov.end());
    if (real->is_autonomous()) {
      std::vector<TranslationSample> ts;
      for (int i = 0; i < config.task.samples; ++i) ts.push_back({s.dyadic(), s.dyadic(), point()});
      auto translation = from_report(translation_check(*real, ts, tol), "translation composition",
                                     "translation F(0,m) = m");
      laws.insert(laws.end(), translation.begin(), translation.end());
    }
  } else {
    const auto& finite = std::get<FiniteSincovSystem>(system);
    Sampler times = make_sampler(Interval{static_cast<double>(config.family.first),
                                          static_cast<double>(config.family.last) + 1.0},
                                 config.seed);
    std::vector<SincovSample<int>> samples;
    std::uniform_int_distribution<int> label(0, finite.size() - 1);
    for (int i = 0; i < config.task.samples; ++i) {
      samples.push_back({times.time(), times.time(), times.time(), label(times.rng)});
    }
    laws = from_report(sincov_check(finite, samples), "Sincov composition", "Sincov F(s,s,m) = m");
  }
  return laws;
}

std::vector<Law> collect_laws(const RunConfig& config, const Overrides& overrides) {
  const auto& f = config.family;
  const bool axioms = config.command == Command::Verify;
  switch (f.kind) {
    case FamilyKind::Polynomial: {
      if (f.exact) {
        if (overrides.tolerance || config.task.tolerance) {
          throw ValidationError("exact mode checks equalities; a tolerance does not apply");
        }
        return exact_polynomial_laws(config, axioms);
      }
      const double tol = tolerance_for(config, overrides, 1e-9);
      std::vector<Law> laws;
      if (axioms) laws = flow_axiom_laws(config, build_family(config), tol);
      laws.push_back(summation_law(config, tol));
      return laws;
    }
    case FamilyKind::Harmonic: {
      const double tol = tolerance_for(config, overrides, 1e-10);
      const auto family = build_family(config);
      std::vector<Law> laws;
      if (axioms) laws = flow_axiom_laws(config, family, tol);
      laws.push_back(goniometric_law(config, family, tol));
      return laws;
    }
    case FamilyKind::Ode: {
      const double tol = tolerance_for(config, overrides, 1e-6);
      const auto family = build_family(config);
      std::vector<Law> laws;
      if (axioms) laws = flow_axiom_laws(config, family, tol);
      if (f.k == 2) {
        const auto chladek = chladek_laws(config, family, tol);
        laws.insert(laws.end(), chladek.begin(), chladek.end());
      } else if (!axioms) {
        throw ValidationError("family: identities for ODE families are the Chladek equations (k = 2)");
      }
      return laws;
    }
    case FamilyKind::Constant:
      if (!axioms) throw ValidationError("family: the constant family has no closed-form identities");
      return flow_axiom_laws(config, build_family(config), tolerance_for(config, overrides, 1e-9));
    case FamilyKind::Sincov: {
      const bool finite = f.system == "cyclic";
      if (finite && (overrides.tolerance || config.task.tolerance)) {
        throw ValidationError("finite Sincov systems are checked exactly; a tolerance does not apply");
      }
      return sincov_laws(config, tolerance_for(config, overrides, 1e-12));
    }
  }
  return {};
}

int run_verify(const RunConfig& config, const Overrides& overrides, std::ostream& out) {
  const auto laws = collect_laws(config, overrides);
  const bool passed = std::all_of(laws.begin(), laws.end(), [](const Law& l) { return l.passed(); });

  std::ostringstream r;
  r << "command: " << to_string(config.command) << "\n"
    << "family: " << config.family.describe() << "\n"
    << "seed: " << config.seed << "\n"
    << "samples: " << config.task.samples << "\n\n";
  r << std::left << std::setw(36) << "law" << std::setw(14) << "max_residual" << std::setw(12)
    << "tolerance" << std::setw(10) << "failures" << "verdict\n";
  json jlaws = json::array();
  for (const auto& law : laws) {
    r << std::left << std::setw(36) << law.name << std::setw(14) << sci(law.max_residual)
      << std::setw(12) << sci(law.tolerance) << std::setw(10) << law.failures
      << (law.passed() ? "pass" : "FAIL") << "\n";
    json j{{"law", law.name},         {"max_residual", law.max_residual},
           {"tolerance", law.tolerance}, {"samples", law.samples},
           {"failures", law.failures},   {"passed", law.passed()}};
    if (!law.first_failure.empty()) j["first_failure"] = law.first_failure;
    jlaws.push_back(j);
  }
  for (const auto& law : laws) {
    if (!law.first_failure.empty()) r << "first failure in " << law.name << ": " << law.first_failure << "\n";
  }
  r << "\nverdict: " << (passed ? "pass" : "FAIL") << "\n";
  write_summary(r, json{{"command", to_string(config.command)},
                        {"family", config.family.describe()},
                        {"seed", config.seed},
                        {"samples", config.task.samples},
                        {"laws", jlaws},
                        {"passed", passed}});
  emit(config.output, out, r.str());
  return passed ? kExitOk : kExitVerification;
}

// ------------------------------------------------------------------- frontal

int run_frontal(const RunConfig& config, const Overrides& overrides, std::ostream& out) {
  const double threshold = overrides.tolerance.value_or(kCertificateThreshold);
  const auto& task = config.task;
  FamilyPtr family;
  std::optional<ChartSearch> search;
  if (config.family.kind == FamilyKind::Ode) {
    const auto rhs = make_catalog_rhs(config.family.rhs, config.family.k, config.family.n,
                                      config.family.constants);
    ChartRequest request;
    request.time_half_width = task.localize.time_half_width;
    request.parameter_half_widths = task.localize.parameter_half_widths;
    request.min_time_half_width = task.localize.min_time_half_width;
    request.condition_cap = task.localize.condition_cap;
    request.beta_draws = task.localize.beta_draws;
    request.step = config.solver.step;
    request.seed = config.seed;
    request.inversion = inversion_settings(config);
    search = localize_chart(rhs, task.t0, task.w0, request);
    family = std::make_shared<OdeFamily>(rhs, search->chart);
  } else {
    family = build_family(config);
    if (!family->interval().contains(task.t0)) throw DomainError("task.t0 lies outside I");
  }
  const auto cert = lemma_jacobian(*family, task.t0, task.w0, threshold);

  std::ostringstream r;
  r << "command: frontal\n"
    << "family: " << config.family.describe() << "\n"
    << "anchor: t0 = " << num(task.t0) << ", w0 = " << bracket(task.w0) << "\n"
    << "jacobian: " << num(cert.jacobian) << "\n"
    << "threshold: " << sci(threshold) << "\n"
    << "certificate: " << (cert.certified ? "granted" : "refused") << "\n";
  json summary{{"command", "frontal"},
               {"family", config.family.describe()},
               {"t0", task.t0},
               {"w0", json_vector(task.w0)},
               {"jacobian", cert.jacobian},
               {"threshold", threshold},
               {"certified", cert.certified}};
  if (search) {
    const auto& c = search->chart;
    r << "chart.interval: " << describe_interval(c.interval) << "\n"
      << "chart.box.lower: " << bracket(c.box.lower) << "\n"
      << "chart.box.upper: " << bracket(c.box.upper) << "\n"
      << "chart.requested_time_half_width: " << num(search->requested_time_half_width) << "\n"
      << "chart.accepted_time_half_width: " << num(search->accepted_time_half_width) << "\n"
      << "chart.shrink_steps: " << search->shrink_steps << "\n"
      << "chart.worst_condition: " << sci(search->worst_condition) << "\n";
    summary["chart"] = json{{"interval", {c.interval.lo, c.interval.hi}},
                            {"box_lower", json_vector(c.box.lower)},
                            {"box_upper", json_vector(c.box.upper)},
                            {"requested_time_half_width", search->requested_time_half_width},
                            {"accepted_time_half_width", search->accepted_time_half_width},
                            {"shrink_steps", search->shrink_steps},
                            {"worst_condition", search->worst_condition}};
  }
  write_summary(r, summary);
  emit(config.output, out, r.str());
  return cert.certified ? kExitOk : kExitLocalization;
}

}  // namespace

int run(const RunConfig& config, const Overrides& overrides, std::ostream& out, std::ostream& log) {
  switch (config.command) {
    case Command::Solve:
      return run_solve(config, overrides, out, log);
    case Command::Verify:
    case Command::Identities:
      return run_verify(config, overrides, out);
    case Command::Frontal:
      return run_frontal(config, overrides, out);
  }
  return kExitValidation;
}

}  // namespace cli
