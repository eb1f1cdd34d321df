#include "worldline/sincov.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace worldline {

RealSincovSystem::RealSincovSystem(int n, Map forward, Map inverse)
    : n_(n), forward_(std::move(forward)), inverse_(std::move(inverse)) {
  if (n < 1) throw ValidationError("Sincov system requires n >= 1");
  if (!forward_ || !inverse_) throw ValidationError("Sincov system requires both maps");
}

RealSincovSystem RealSincovSystem::autonomous(int n, AutonomousMap flow) {
  if (!flow) throw ValidationError("autonomous system requires a flow");
  RealSincovSystem system(
      n, [flow](double t, const VectorXd& m) { return flow(-t, m); },
      [flow](double t, const VectorXd& m) { return flow(t, m); });
  system.autonomous_ = std::move(flow);
  return system;
}

RealSincovSystem RealSincovSystem::identity(int n) {
  const auto id = [](double, const VectorXd& m) { return m; };
  return RealSincovSystem(n, id, id);
}

RealSincovSystem RealSincovSystem::translation(const VectorXd& drift) {
  return autonomous(static_cast<int>(drift.size()), [drift](double r, const VectorXd& m) {
    return VectorXd(m + r * drift);
  });
}

RealSincovSystem RealSincovSystem::multiplicative(int n) {
  return autonomous(n, [](double r, const VectorXd& m) { return VectorXd(m * std::exp(r)); });
}

VectorXd RealSincovSystem::forward(double t, const VectorXd& m) const {
  if (m.size() != n_) throw ValidationError("point dimension does not match the system");
  return forward_(t, m);
}

VectorXd RealSincovSystem::inverse(double t, const VectorXd& m) const {
  if (m.size() != n_) throw ValidationError("point dimension does not match the system");
  return inverse_(t, m);
}

VectorXd RealSincovSystem::autonomous_map(double r, const VectorXd& m) const {
  if (!autonomous_) throw ValidationError("system is not autonomous");
  if (m.size() != n_) throw ValidationError("point dimension does not match the system");
  return (*autonomous_)(r, m);
}

double RealSincovSystem::bijection_residual(std::span<const double> times,
                                            std::span<const VectorXd> points) const {
  double worst = 0.0;
  for (double t : times) {
    for (const auto& m : points) {
      worst = std::max(worst, (inverse(t, forward(t, m)) - m).lpNorm<Eigen::Infinity>());
      worst = std::max(worst, (forward(t, inverse(t, m)) - m).lpNorm<Eigen::Infinity>());
    }
  }
  return worst;
}

FiniteSincovSystem::FiniteSincovSystem(std::vector<double> breakpoints,
                                       std::vector<Permutation> tables)
    : breakpoints_(std::move(breakpoints)), forward_(std::move(tables)) {
  if (breakpoints_.empty() || breakpoints_.size() != forward_.size()) {
    throw ValidationError("finite Sincov system needs one table per breakpoint");
  }
  if (!std::is_sorted(breakpoints_.begin(), breakpoints_.end()) ||
      std::adjacent_find(breakpoints_.begin(), breakpoints_.end()) != breakpoints_.end()) {
    throw ValidationError("breakpoints must be strictly increasing");
  }
  size_ = static_cast<int>(forward_.front().size());
  if (size_ < 1) throw ValidationError("finite set must be non-empty");
  // Exhaustive bijectivity check.
  for (const auto& table : forward_) {
    if (static_cast<int>(table.size()) != size_) {
      throw ValidationError("permutation tables have inconsistent size");
    }
    Permutation inv(size_, -1);
    for (int m = 0; m < size_; ++m) {
      const int image = table[m];
      if (image < 0 || image >= size_ || inv[image] != -1) {
        throw ValidationError("table is not a bijection of the finite set");
      }
      inv[image] = m;
    }
    inverse_.push_back(std::move(inv));
  }
}

FiniteSincovSystem FiniteSincovSystem::cyclic(int size, int first, int last) {
  if (size < 1 || last < first) throw ValidationError("invalid cyclic system");
  std::vector<double> breaks;
  std::vector<Permutation> tables;
  for (int t = first; t <= last; ++t) {
    breaks.push_back(t);
    const int shift = ((t % size) + size) % size;
    Permutation p(size);
    for (int m = 0; m < size; ++m) p[m] = (m + shift) % size;
    tables.push_back(std::move(p));
  }
  return FiniteSincovSystem(std::move(breaks), std::move(tables));
}

std::size_t FiniteSincovSystem::table_index(double t) const {
  const auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), t);
  if (it == breakpoints_.begin()) {
    std::ostringstream msg;
    msg << "time " << t << " precedes the first breakpoint";
    throw ValidationError(msg.str());
  }
  return static_cast<std::size_t>(it - breakpoints_.begin()) - 1;
}

void FiniteSincovSystem::require_label(int m) const {
  if (m < 0 || m >= size_) {
    std::ostringstream msg;
    msg << "label " << m << " is not an element of M";
    throw ValidationError(msg.str());
  }
}

int FiniteSincovSystem::forward(double t, int m) const {
  require_label(m);
  return forward_[table_index(t)][m];
}

int FiniteSincovSystem::inverse(double t, int m) const {
  require_label(m);
  return inverse_[table_index(t)][m];
}

VectorXd sincov_F(const RealSincovSystem& system, double t, double s, const VectorXd& m) {
  return system.forward(t, system.inverse(s, m));
}

int sincov_F(const FiniteSincovSystem& system, double t, double s, int m) {
  return system.forward(t, system.inverse(s, m));
}

AxiomReport sincov_check(const RealSincovSystem& system,
                         std::span<const SincovSample<VectorXd>> samples, double tolerance) {
  AxiomReport report;
  report.tolerance = tolerance;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto& [t, r, s, m] = samples[i];
    try {
      const VectorXd direct = sincov_F(system, t, s, m);
      const VectorXd composed = sincov_F(system, t, r, sincov_F(system, r, s, m));
      const double mag = direct.lpNorm<Eigen::Infinity>();
      report.max_residual_consistency =
          std::max(report.max_residual_consistency,
                   scaled_residual((composed - direct).lpNorm<Eigen::Infinity>(), mag));
      report.max_residual_restriction = std::max(
          report.max_residual_restriction,
          scaled_residual((sincov_F(system, s, s, m) - m).lpNorm<Eigen::Infinity>(),
                          m.lpNorm<Eigen::Infinity>()));
    } catch (const Error& e) {
      report.failures.push_back({i, e.what()});
    }
    ++report.samples_tested;
  }
  return report;
}

AxiomReport sincov_check(const FiniteSincovSystem& system,
                         std::span<const SincovSample<int>> samples) {
  AxiomReport report;
  report.tolerance = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto& [t, r, s, m] = samples[i];
    try {
      const int direct = sincov_F(system, t, s, m);
      const int composed = sincov_F(system, t, r, sincov_F(system, r, s, m));
      if (composed != direct) report.max_residual_consistency = 1.0;
      if (sincov_F(system, s, s, m) != m) report.max_residual_restriction = 1.0;
    } catch (const Error& e) {
      report.failures.push_back({i, e.what()});
    }
    ++report.samples_tested;
  }
  return report;
}

AxiomReport translation_check(const RealSincovSystem& system,
                              std::span<const TranslationSample> samples, double tolerance) {
  if (!system.is_autonomous()) {
    throw ValidationError("translation check requires an autonomous system");
  }
  AxiomReport report;
  report.tolerance = tolerance;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto& [r, s, m] = samples[i];
    try {
      const VectorXd direct = system.autonomous_map(r + s, m);
      const VectorXd composed = system.autonomous_map(r, system.autonomous_map(s, m));
      report.max_residual_consistency = std::max(
          report.max_residual_consistency,
          scaled_residual((composed - direct).lpNorm<Eigen::Infinity>(),
                          direct.lpNorm<Eigen::Infinity>()));
      report.max_residual_restriction = std::max(
          report.max_residual_restriction,
          scaled_residual((system.autonomous_map(0.0, m) - m).lpNorm<Eigen::Infinity>(),
                          m.lpNorm<Eigen::Infinity>()));
    } catch (const Error& e) {
      report.failures.push_back({i, e.what()});
    }
    ++report.samples_tested;
  }
  return report;
}

}  // namespace worldline
