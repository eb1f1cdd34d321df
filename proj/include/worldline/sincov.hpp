#pragma once

// Flows without intersection of worldlines (k = 1). A system of bijections
// G_t : M -> M yields F(t, s, m) = G_t(G_s^{-1}(m)), which satisfies
//   F(t, r, F(r, s, m)) = F(t, s, m),   F(s, s, m) = m.

#include "worldline/core.hpp"
#include "worldline/flow_core.hpp"

#include <functional>
#include <optional>
#include <random>
#include <vector>

namespace worldline {

/// System of bijections of R^n indexed by time, given by forward maps and
/// their inverses. An autonomous system is generated by a one-parameter group
/// F(r, m) via G_t = F(-t, .) and G_t^{-1} = F(t, .).
class RealSincovSystem {
 public:
  using Map = std::function<VectorXd(double t, const VectorXd& m)>;
  using AutonomousMap = std::function<VectorXd(double r, const VectorXd& m)>;

  RealSincovSystem(int n, Map forward, Map inverse);

  static RealSincovSystem autonomous(int n, AutonomousMap flow);

  /// G_t(m) = m.
  static RealSincovSystem identity(int n);
  /// Autonomous drift F(r, m) = m + r v.
  static RealSincovSystem translation(const VectorXd& drift);
  /// Autonomous scalar flow F(r, m) = m e^r (componentwise).
  static RealSincovSystem multiplicative(int n);

  int dim() const noexcept { return n_; }
  bool is_autonomous() const noexcept { return autonomous_.has_value(); }

  VectorXd forward(double t, const VectorXd& m) const;
  VectorXd inverse(double t, const VectorXd& m) const;
  /// The generating group F(r, m); ValidationError when not autonomous.
  VectorXd autonomous_map(double r, const VectorXd& m) const;

  /// Max |G_t^{-1}(G_t(m)) - m| over the given samples.
  double bijection_residual(std::span<const double> times, std::span<const VectorXd> points) const;

 private:
  int n_;
  Map forward_;
  Map inverse_;
  std::optional<AutonomousMap> autonomous_;
};

/// System of permutations of the labels {0, ..., size-1}. The continuum of
/// times is sampled: G_t is the table of the last breakpoint <= t.
class FiniteSincovSystem {
 public:
  using Permutation = std::vector<int>;

  FiniteSincovSystem(std::vector<double> breakpoints, std::vector<Permutation> tables);

  /// G_t = cyclic shift by floor(t) mod size, on breakpoints first..last.
  static FiniteSincovSystem cyclic(int size, int first, int last);

  int size() const noexcept { return size_; }
  const std::vector<double>& breakpoints() const noexcept { return breakpoints_; }

  int forward(double t, int m) const;
  int inverse(double t, int m) const;

 private:
  std::size_t table_index(double t) const;
  void require_label(int m) const;

  int size_;
  std::vector<double> breakpoints_;
  std::vector<Permutation> forward_;
  std::vector<Permutation> inverse_;
};

/// F(t, s, m) = G_t(G_s^{-1}(m)).
VectorXd sincov_F(const RealSincovSystem& system, double t, double s, const VectorXd& m);
int sincov_F(const FiniteSincovSystem& system, double t, double s, int m);

template <typename Point>
struct SincovSample {
  double t;
  double r;
  double s;
  Point m;
};

/// Composition law F(t, r, F(r, s, m)) = F(t, s, m) in the consistency
/// residual and F(s, s, m) = m in the restriction residual.
AxiomReport sincov_check(const RealSincovSystem& system,
                         std::span<const SincovSample<VectorXd>> samples,
                         double tolerance = 1e-12);
/// Exact variant: residuals are 0 or 1 (labels differ).
AxiomReport sincov_check(const FiniteSincovSystem& system,
                         std::span<const SincovSample<int>> samples);

struct TranslationSample {
  double r;
  double s;
  VectorXd m;
};

/// F(r, F(s, m)) = F(r + s, m) in the consistency residual and F(0, m) = m in
/// the restriction residual. ValidationError when the system is not
/// autonomous.
AxiomReport translation_check(const RealSincovSystem& system,
                              std::span<const TranslationSample> samples,
                              double tolerance = 1e-12);

}  // namespace worldline
