#include "worldline/ode.hpp"

#include "worldline/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

namespace worldline {

OdeRhs::OdeRhs(std::string name, int k, int n, Function f)
    : OdeRhs(std::move(name), k, n, std::move(f),
             StateDomain{Interval{}, BoxDomain::unbounded(static_cast<Eigen::Index>(k) * n)}) {}

OdeRhs::OdeRhs(std::string name, int k, int n, Function f, StateDomain domain)
    : name_(std::move(name)), k_(k), n_(n), f_(std::move(f)), domain_(std::move(domain)) {
  if (k < 1 || n < 1) throw ValidationError("ODE requires k >= 1 and n >= 1");
  if (!f_) throw ValidationError("ODE requires a right-hand side");
  if (domain_.state.dim() != state_dim()) {
    throw ValidationError("dom f box does not match the state dimension k*n");
  }
}

VectorXd OdeRhs::reduced(double t, const VectorXd& y) const {
  VectorXd dy(y.size());
  const Eigen::Index tail = static_cast<Eigen::Index>(k_ - 1) * n_;
  dy.head(tail) = y.tail(tail);
  dy.tail(n_) = f_(t, y);
  return dy;
}

namespace {

double constant_or(const std::map<std::string, double>& constants, const std::string& key,
                   double fallback) {
  const auto it = constants.find(key);
  return it == constants.end() ? fallback : it->second;
}

void require_known_constants(const std::map<std::string, double>& constants,
                             std::initializer_list<const char*> allowed, const std::string& rhs) {
  for (const auto& [key, value] : constants) {
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; })) {
      throw ValidationError("unknown constant '" + key + "' for rhs '" + rhs + "'");
    }
    if (!std::isfinite(value)) throw ValidationError("constant '" + key + "' is not finite");
  }
}

}  // namespace

OdeRhs make_catalog_rhs(const std::string& name, int k, int n,
                        const std::map<std::string, double>& constants) {
  if (n < 1) throw ValidationError("ODE requires n >= 1");
  if (name == "free") {
    require_known_constants(constants, {}, name);
    if (k < 1) throw ValidationError("ODE requires k >= 1");
    return OdeRhs(name, k, n, [n](double, const VectorXd&) { return VectorXd(VectorXd::Zero(n)); });
  }
  if (k != 2) throw ValidationError("catalog rhs '" + name + "' is second order (k = 2)");
  if (name == "harmonic") {
    require_known_constants(constants, {"omega2"}, name);
    const double omega2 = constant_or(constants, "omega2", 1.0);
    return OdeRhs(name, 2, n, [n, omega2](double, const VectorXd& y) {
      return VectorXd(-omega2 * y.head(n));
    });
  }
  if (name == "pendulum") {
    require_known_constants(constants, {"omega2"}, name);
    const double omega2 = constant_or(constants, "omega2", 1.0);
    return OdeRhs(name, 2, n, [n, omega2](double, const VectorXd& y) {
      return VectorXd(-omega2 * y.head(n).array().sin().matrix());
    });
  }
  if (name == "damped") {
    require_known_constants(constants, {"omega2", "c"}, name);
    const double omega2 = constant_or(constants, "omega2", 1.0);
    const double c = constant_or(constants, "c", 0.0);
    return OdeRhs(name, 2, n, [n, omega2, c](double, const VectorXd& y) {
      return VectorXd(-omega2 * y.head(n) - c * y.segment(n, n));
    });
  }
  throw ValidationError("unknown catalog rhs '" + name + "'");
}

namespace {

void check_state(const OdeRhs& rhs, double t, const VectorXd& y) {
  if (!y.allFinite()) {
    std::ostringstream msg;
    msg << "state of " << rhs.name() << " became non-finite at t = " << t;
    throw BlowUpError(msg.str(), t);
  }
  if (!rhs.domain().contains(t, y)) {
    std::ostringstream msg;
    msg << "state of " << rhs.name() << " left dom f at t = " << t;
    throw IntegrationEscapeError(msg.str(), t);
  }
}

VectorXd rk4_step(const OdeRhs& rhs, double t, const VectorXd& y, double h) {
  const VectorXd k1 = rhs.reduced(t, y);
  const VectorXd k2 = rhs.reduced(t + 0.5 * h, y + 0.5 * h * k1);
  const VectorXd k3 = rhs.reduced(t + 0.5 * h, y + 0.5 * h * k2);
  const VectorXd k4 = rhs.reduced(t + h, y + h * k3);
  return y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

/// Marches from t0 in direction `dir` (+1/-1) through the targets (sorted
/// away from t0), writing results into out[index].
void march(const OdeRhs& rhs, double t0, const VectorXd& w, double h, int dir,
           const std::vector<std::pair<double, std::size_t>>& targets,
           std::vector<VectorXd>& out) {
  VectorXd y = w;
  std::int64_t steps = 0;
  double node = t0;
  for (const auto& [target, index] : targets) {
    while (true) {
      const double next = t0 + dir * static_cast<double>(steps + 1) * h;
      if (dir * (next - target) > 0) break;
      y = rk4_step(rhs, node, y, dir * h);
      ++steps;
      node = next;
      check_state(rhs, node, y);
    }
    const double remaining = target - node;
    if (remaining == 0.0) {
      out[index] = y;
    } else {
      out[index] = rk4_step(rhs, node, y, remaining);
      check_state(rhs, target, out[index]);
    }
  }
}

}  // namespace

std::vector<VectorXd> integrate_cauchy_many(const OdeRhs& rhs, double t0, const VectorXd& w,
                                            std::span<const double> targets, double h) {
  if (w.size() != rhs.state_dim()) {
    throw ValidationError("Cauchy state dimension does not match k*n");
  }
  if (!(h > 0.0) || !std::isfinite(h)) throw ValidationError("integrator step must be positive");
  check_state(rhs, t0, w);

  std::vector<std::pair<double, std::size_t>> forward;
  std::vector<std::pair<double, std::size_t>> backward;
  for (std::size_t i = 0; i < targets.size(); ++i) {
    if (!std::isfinite(targets[i])) throw ValidationError("integration target is not finite");
    (targets[i] >= t0 ? forward : backward).emplace_back(targets[i], i);
  }
  std::sort(forward.begin(), forward.end());
  std::sort(backward.begin(), backward.end(), std::greater<>());

  std::vector<VectorXd> out(targets.size());
  march(rhs, t0, w, h, +1, forward, out);
  march(rhs, t0, w, h, -1, backward, out);
  return out;
}

VectorXd integrate_cauchy(const OdeRhs& rhs, double t0, const VectorXd& w, double t, double h) {
  const double target[] = {t};
  return integrate_cauchy_many(rhs, t0, w, target, h).front();
}

LocalChart make_chart(const OdeRhs& rhs, double t0, Interval interval, double step) {
  return LocalChart{t0, interval, BoxDomain::unbounded(rhs.state_dim()), step};
}

VectorXd ode_G(const OdeRhs& rhs, const LocalChart& chart, double t, const VectorXd& w) {
  if (!chart.interval.contains(t)) throw DomainError("time outside the chart interval");
  if (!chart.box.contains(w)) throw DomainError("Cauchy data outside the chart box");
  return integrate_cauchy(rhs, chart.t0, w, t, chart.step).head(rhs.dim());
}

OdeFamily::OdeFamily(OdeRhs rhs, LocalChart chart) : rhs_(std::move(rhs)), chart_(std::move(chart)) {
  if (chart_.box.dim() != rhs_.state_dim()) {
    throw ValidationError("chart box does not match the state dimension k*n");
  }
  if (!(chart_.step > 0.0)) throw ValidationError("integrator step must be positive");
}

std::string OdeFamily::id() const {
  std::ostringstream s;
  s << "ode(" << rhs_.name() << ",k=" << rhs_.order() << ",n=" << rhs_.dim()
    << ",t0=" << chart_.t0 << ")";
  return s.str();
}

VectorXd OdeFamily::evaluate(double t, const VectorXd& w) const {
  return integrate_cauchy(rhs_, chart_.t0, w, t, chart_.step).head(rhs_.dim());
}

std::vector<VectorXd> OdeFamily::evaluate_many(std::span<const double> ts,
                                               const VectorXd& w) const {
  auto states = integrate_cauchy_many(rhs_, chart_.t0, w, ts, chart_.step);
  for (auto& s : states) s = s.head(rhs_.dim()).eval();
  return states;
}

VectorXd OdeFamily::analytic_time_derivative(double t, const VectorXd& w, int order) const {
  const VectorXd y = integrate_cauchy(rhs_, chart_.t0, w, t, chart_.step);
  const int n = rhs_.dim();
  if (order < rhs_.order()) return y.segment(static_cast<Eigen::Index>(order) * n, n);
  if (order == rhs_.order()) return rhs_(t, y);
  throw CapabilityError("ODE family derivatives above order k need finite differences");
}

VectorXd OdeFamily::default_parameter() const { return chart_.box.center(); }

VectorXd OdeFamily::initial_guess(const Restriction& a) const {
  VectorXd guess = interpolant_derivatives(a, chart_.t0);
  if (!chart_.box.contains(guess)) return default_parameter();
  return guess;
}

InversionResult shoot_multipoint(const OdeRhs& rhs, const LocalChart& chart, const Restriction& a,
                                 const InversionSettings& settings) {
  const OdeFamily family(rhs, chart);
  return invert_omega_beta(family, a, std::nullopt, settings);
}

namespace {

std::vector<std::vector<double>> draw_betas(const Interval& I, int k, int count,
                                            std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const double margin = 1e-6 * I.length();
  std::uniform_real_distribution<double> uni(I.lo + margin, I.hi - margin);
  const double min_gap = I.length() / (4.0 * k);
  // The widest evenly spread node set comes first; it reaches the separations
  // random draws rarely hit.
  std::vector<std::vector<double>> out;
  std::vector<double> spread(k);
  for (int i = 0; i < k; ++i) {
    spread[i] = k == 1 ? 0.5 * (I.lo + I.hi) : (I.lo + margin) + i * (I.length() - 2 * margin) / (k - 1);
  }
  out.push_back(std::move(spread));
  while (static_cast<int>(out.size()) < count + 1) {
    std::vector<double> ts(k);
    for (auto& t : ts) t = uni(rng);
    std::sort(ts.begin(), ts.end());
    bool ok = true;
    for (int i = 1; i < k; ++i) ok = ok && (ts[i] - ts[i - 1] >= min_gap);
    if (ok) out.push_back(std::move(ts));
  }
  return out;
}

std::vector<VectorXd> probe_grid(const VectorXd& w0, const VectorXd& half_widths) {
  const auto dim = w0.size();
  std::vector<VectorXd> probes;
  std::int64_t total = 1;
  for (Eigen::Index i = 0; i < dim; ++i) total *= 3;
  for (std::int64_t code = 0; code < total; ++code) {
    VectorXd w = w0;
    std::int64_t c = code;
    for (Eigen::Index i = 0; i < dim; ++i) {
      w[i] += 0.9 * static_cast<double>(c % 3 - 1) * half_widths[i];
      c /= 3;
    }
    probes.push_back(std::move(w));
  }
  return probes;
}

/// Worst condition number over the probes, or nullopt when some probe fails.
/// Ordered node sets and U are connected, so det J changing sign between two
/// probes means J vanishes somewhere on the chart.
std::optional<double> probe_chart(const OdeFamily& family, const VectorXd& w0,
                                  const VectorXd& half_widths,
                                  const std::vector<std::vector<double>>& betas,
                                  const ChartRequest& request) {
  const Interval I = family.interval();
  const double edge = 1e-6 * I.length();
  const std::vector<double> ends{I.lo + edge, I.hi - edge};
  const auto n = family.dim();
  double worst = 0.0;
  int det_sign = 0;
  for (const VectorXd& w : probe_grid(w0, half_widths)) {
    try {
      (void)family.evaluate_many(ends, w);
      for (const auto& beta : betas) {
        const Restriction a = omega_beta(family, w, TimeSet(beta));
        VectorXd target(family.parameter_dim());
        for (std::size_t i = 0; i < a.size(); ++i) {
          target.segment(static_cast<Eigen::Index>(i) * n, n) = a[i].value;
        }
        const ResidualFunction residual = [&](const VectorXd& v) {
          const auto values = family.evaluate_many(beta, v);
          VectorXd r(target.size());
          for (std::size_t i = 0; i < values.size(); ++i) {
            r.segment(static_cast<Eigen::Index>(i) * n, n) = values[i];
          }
          return VectorXd(r - target);
        };
        const MatrixXd jac =
            finite_difference_jacobian(residual, w, VectorXd::Zero(target.size()), false);
        const Eigen::JacobiSVD<MatrixXd> svd(jac);
        const auto& sv = svd.singularValues();
        const double cond = sv[sv.size() - 1] > 0 ? sv[0] / sv[sv.size() - 1]
                                                 : std::numeric_limits<double>::infinity();
        worst = std::max(worst, cond);
        if (!(cond <= request.condition_cap)) return std::nullopt;
        const int sign = jac.determinant() > 0 ? 1 : -1;
        if (det_sign != 0 && sign != det_sign) return std::nullopt;
        det_sign = sign;

        const auto recovered = invert_omega_beta(family, a, std::nullopt, request.inversion);
        const double scale = std::max(1.0, w.lpNorm<Eigen::Infinity>());
        if ((recovered.w - w).lpNorm<Eigen::Infinity>() > 1e-5 * scale) return std::nullopt;
      }
    } catch (const Error&) {
      return std::nullopt;
    }
  }
  return worst;
}

}  // namespace

ChartSearch localize_chart(const OdeRhs& rhs, double t0, const VectorXd& w0,
                           const ChartRequest& request) {
  if (w0.size() != rhs.state_dim()) throw ValidationError("w0 dimension does not match k*n");
  if (!rhs.domain().contains(t0, w0)) throw ValidationError("(t0, w0) lies outside dom f");
  if (!(request.time_half_width > 0.0)) throw ValidationError("time half-width must be positive");

  VectorXd half_widths;
  if (request.parameter_half_widths.size() == 1) {
    half_widths = VectorXd::Constant(w0.size(), request.parameter_half_widths[0]);
  } else if (request.parameter_half_widths.size() == w0.size()) {
    half_widths = request.parameter_half_widths;
  } else {
    throw ValidationError("parameter half-widths must have one entry or k*n entries");
  }
  if ((half_widths.array() <= 0.0).any()) {
    throw ValidationError("parameter half-widths must be positive");
  }

  ChartSearch search;
  search.requested_time_half_width = request.time_half_width;
  double time_hw = request.time_half_width;
  while (time_hw >= request.min_time_half_width) {
    LocalChart chart{t0, Interval{t0 - time_hw, t0 + time_hw},
                     BoxDomain::around(w0, half_widths), request.step};
    const OdeFamily family(rhs, chart);
    const auto betas = draw_betas(chart.interval, rhs.order(), request.beta_draws,
                                  request.seed + static_cast<std::uint64_t>(search.shrink_steps));
    if (const auto worst = probe_chart(family, w0, half_widths, betas, request)) {
      search.chart = std::move(chart);
      search.accepted_time_half_width = time_hw;
      search.worst_condition = *worst;
      return search;
    }
    time_hw *= 0.5;
    half_widths *= 0.5;
    ++search.shrink_steps;
  }
  std::ostringstream msg;
  msg << "no frontal chart for " << rhs.name() << " with time half-width above "
      << request.min_time_half_width;
  throw LocalizationError(msg.str());
}

}  // namespace worldline
