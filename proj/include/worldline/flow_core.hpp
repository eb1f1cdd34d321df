#pragma once

#include "worldline/family.hpp"
#include "worldline/polynomial.hpp"
#include "worldline/restriction.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace worldline {

/// Residuals of the two flow axioms over a sample set.
///
/// Residuals are max-norm differences, divided by max(1, |value| / 1e3) so
/// large values are compared relatively.
struct AxiomReport {
  struct Failure {
    std::size_t sample;
    std::string message;
  };

  /// max |flow(restrict(flow(a), beta))(t) - flow(a)(t)|
  double max_residual_consistency = 0.0;
  /// max |flow(a)(t_i) - a_i|
  double max_residual_restriction = 0.0;
  std::size_t samples_tested = 0;
  double tolerance = kDefaultTolerance;
  std::vector<Failure> failures;

  bool passed() const noexcept {
    return failures.empty() && max_residual_consistency <= tolerance &&
           max_residual_restriction <= tolerance;
  }
};

namespace detail {

template <typename Scalar>
double max_abs(const Vec<Scalar>& v) {
  double m = 0.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) m = std::max(m, std::abs(to_double(v[i])));
  return m;
}

}  // namespace detail

/// Checks flow(flow(a)|beta) = flow(a) on `grid` and flow(a)|dom a = a.
///
/// `restrictions[i]` is paired with `betas[i]`. A sample whose inversion
/// throws is recorded as a failure rather than aborting the sweep.
///
/// Flow must expose `flow(a)` returning a curve with interval() and
/// operator()(t); both FlowMap and PolynomialFlow<Scalar> qualify.
template <typename Flow, typename Scalar>
AxiomReport verify_flow_axioms(const Flow& flow,
                               const std::vector<BasicRestriction<Scalar>>& restrictions,
                               const std::vector<BasicTimeSet<Scalar>>& betas,
                               const std::vector<Scalar>& eval_grid,
                               double tolerance = kDefaultTolerance) {
  if (restrictions.size() != betas.size()) {
    throw ValidationError("each restriction needs a matching beta");
  }
  AxiomReport report;
  report.tolerance = tolerance;
  for (std::size_t i = 0; i < restrictions.size(); ++i) {
    const auto& a = restrictions[i];
    try {
      const auto x = flow.flow(a);
      for (const auto& entry : a) {
        const auto value = x(entry.t);
        const double r = detail::max_abs<Scalar>(value - entry.value);
        report.max_residual_restriction =
            std::max(report.max_residual_restriction,
                     scaled_residual(r, detail::max_abs<Scalar>(entry.value)));
      }
      const auto y = flow.flow(restrict(x, betas[i]));
      for (const auto& t : eval_grid) {
        const auto xt = x(t);
        const double r = detail::max_abs<Scalar>(y(t) - xt);
        report.max_residual_consistency =
            std::max(report.max_residual_consistency,
                     scaled_residual(r, detail::max_abs<Scalar>(xt)));
      }
    } catch (const Error& e) {
      report.failures.push_back({i, e.what()});
    }
    ++report.samples_tested;
  }
  return report;
}

/// Outcome of comparing two worldlines of one family.
struct IntersectionResult {
  /// True when both worldlines carry the same parameter.
  bool identical = false;
  /// Number of crossings found; absent when identical ("all").
  std::optional<int> count;
  /// True when count < k or the worldlines are identical.
  bool consistent = false;
};

/// Counts crossings of x1 and x2 on a grid: per component, zeros and sign
/// changes of x1 - x2, maximised over components. Grid sampling can only
/// under-count, so a consistent verdict is evidence, not proof.
IntersectionResult intersection_count(const Worldline& x1, const Worldline& x2,
                                      std::span<const double> grid, double zero_tolerance = 0.0);

/// Exact count for polynomial worldlines: the number of distinct real roots,
/// inside the interval, shared by every component of x1 - x2.
template <typename Scalar>
IntersectionResult intersection_count(const PolynomialWorldline<Scalar>& x1,
                                      const PolynomialWorldline<Scalar>& x2) {
  const auto diff = difference(x1, x2);
  IntersectionResult result;
  Poly<Scalar> common;
  for (Eigen::Index c = 0; c < diff.dim(); ++c) {
    auto p = diff.component(c);
    poly::trim(p);
    if (p.empty()) continue;
    common = common.empty() ? p : poly::gcd(common, p);
  }
  if (common.empty()) {
    result.identical = true;
    result.consistent = true;
    return result;
  }
  const Interval I = x1.interval();
  std::optional<Scalar> lo;
  std::optional<Scalar> hi;
  if (std::isfinite(I.lo)) lo = Scalar(I.lo);
  if (std::isfinite(I.hi)) hi = Scalar(I.hi);
  result.count = poly::count_real_roots(common, lo, hi);
  result.consistent = *result.count < x1.order();
  return result;
}

}  // namespace worldline
