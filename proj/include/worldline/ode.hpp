#pragma once

// Families induced by k-th order ODEs x^(k) = f(t, x, x', ..., x^(k-1)).
//
// A worldline is named by its Cauchy data w = (x(t0), x'(t0), ..., x^(k-1)(t0))
// stacked as a k*n vector, and G(t, w) = x(t). The k-th order equation is
// integrated through its first-order reduction
//   y' = (y_1, ..., y_{k-1}, f(t, y_0, ..., y_{k-1})).

#include "worldline/frontal_embedding.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <string>

namespace worldline {

/// Open box over (t, y) on which f is declared smooth.
struct StateDomain {
  Interval time{};
  BoxDomain state;

  bool contains(double t, const VectorXd& y) const { return time.contains(t) && state.contains(y); }
};

class OdeRhs {
 public:
  /// f(t, y) with y the stacked state; returns the n-vector x^(k).
  using Function = std::function<VectorXd(double t, const VectorXd& y)>;

  OdeRhs(std::string name, int k, int n, Function f);
  OdeRhs(std::string name, int k, int n, Function f, StateDomain domain);

  const std::string& name() const noexcept { return name_; }
  int order() const noexcept { return k_; }
  int dim() const noexcept { return n_; }
  int state_dim() const noexcept { return k_ * n_; }
  const StateDomain& domain() const noexcept { return domain_; }

  VectorXd operator()(double t, const VectorXd& y) const { return f_(t, y); }

  /// The first-order reduction y -> (y_1, ..., y_{k-1}, f(t, y)).
  VectorXd reduced(double t, const VectorXd& y) const;

 private:
  std::string name_;
  int k_;
  int n_;
  Function f_;
  StateDomain domain_;
};

/// Built-in right-hand sides, applied componentwise for n > 1:
///   "free"      x^(k) = 0                      (any k)
///   "harmonic"  x'' = -omega2 x                (k = 2, omega2 default 1)
///   "pendulum"  x'' = -omega2 sin x            (k = 2, omega2 default 1)
///   "damped"    x'' = -omega2 x - c x'         (k = 2, defaults 1, 0)
/// Unknown names or constants throw ValidationError.
OdeRhs make_catalog_rhs(const std::string& name, int k, int n,
                        const std::map<std::string, double>& constants = {});

inline constexpr double kDefaultStep = 1e-3;

/// Propagates the Cauchy state w from t0 to t with classical fixed-step RK4
/// on the grid t0 + i h, finishing with one partial step of the exact
/// remaining length. The state is checked against dom f after every step.
///
/// Throws IntegrationEscapeError (with exit time) when the state leaves the
/// domain and BlowUpError when it becomes non-finite.
VectorXd integrate_cauchy(const OdeRhs& rhs, double t0, const VectorXd& w, double t,
                          double h = kDefaultStep);

/// Same as integrate_cauchy for several targets in one march per direction.
std::vector<VectorXd> integrate_cauchy_many(const OdeRhs& rhs, double t0, const VectorXd& w,
                                            std::span<const double> targets,
                                            double h = kDefaultStep);

/// Where an ODE family is used: anchor t0, interval I, Cauchy-data box U and
/// integrator step.
struct LocalChart {
  double t0 = 0.0;
  Interval interval{};
  BoxDomain box;
  double step = kDefaultStep;
};

/// Chart with the given interval, an unbounded box, anchor t0.
LocalChart make_chart(const OdeRhs& rhs, double t0, Interval interval, double step = kDefaultStep);

/// G(t, w) = zero block of integrate_cauchy(rhs, t0, w, t).
VectorXd ode_G(const OdeRhs& rhs, const LocalChart& chart, double t, const VectorXd& w);

/// The family G(t, w) = x(t) of solutions on a chart.
class OdeFamily final : public Family {
 public:
  OdeFamily(OdeRhs rhs, LocalChart chart);

  std::string id() const override;
  int order() const override { return rhs_.order(); }
  int dim() const override { return rhs_.dim(); }
  Interval interval() const override { return chart_.interval; }
  BoxDomain parameter_domain() const override { return chart_.box; }

  VectorXd evaluate(double t, const VectorXd& w) const override;
  std::vector<VectorXd> evaluate_many(std::span<const double> ts,
                                      const VectorXd& w) const override;

  /// Orders below k are read off the integrated state; order k is f.
  bool has_analytic_time_derivative(int order) const override { return order <= rhs_.order(); }
  VectorXd analytic_time_derivative(double t, const VectorXd& w, int order) const override;

  VectorXd default_parameter() const override;
  /// Derivatives at t0 of the Lagrange interpolant through a.
  VectorXd initial_guess(const Restriction& a) const override;

  const OdeRhs& rhs() const noexcept { return rhs_; }
  const LocalChart& chart() const noexcept { return chart_; }

 private:
  OdeRhs rhs_;
  LocalChart chart_;
};

/// Cauchy data w whose solution passes through every point of a, by damped
/// Newton on the stacked k*n system.
InversionResult shoot_multipoint(const OdeRhs& rhs, const LocalChart& chart, const Restriction& a,
                                 const InversionSettings& settings = {});

struct ChartRequest {
  double time_half_width = 0.5;
  /// Half-widths of U around w0; a single entry applies to every coordinate.
  VectorXd parameter_half_widths = VectorXd::Constant(1, 0.5);
  double step = kDefaultStep;
  double min_time_half_width = 1e-2;
  /// Cap on the condition number of the k-point Jacobian.
  double condition_cap = 1e8;
  int beta_draws = 8;
  std::uint64_t seed = 42;
  InversionSettings inversion{};
};

struct ChartSearch {
  LocalChart chart;
  double requested_time_half_width = 0.0;
  double accepted_time_half_width = 0.0;
  int shrink_steps = 0;
  /// Worst condition number seen on the accepted chart.
  double worst_condition = 0.0;
};

/// Searches for a chart around (t0, w0) on which the family is empirically
/// k-frontal. Probes the 3^(k n) grid of U's corners, edge midpoints and
/// center against the evenly spread node set plus `beta_draws` random ones; a
/// probe passes when the state stays in dom f across I, the k-point Jacobian
/// has condition number below the cap and the same determinant sign as every
/// other probe, and shooting from the interpolant guess recovers it. On
/// failure I and U are halved. Throws LocalizationError once the time
/// half-width drops below the minimum.
ChartSearch localize_chart(const OdeRhs& rhs, double t0, const VectorXd& w0,
                           const ChartRequest& request = {});

}  // namespace worldline
