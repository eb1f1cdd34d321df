#pragma once

#include "worldline/family.hpp"

#include <numbers>

namespace worldline {

/// Solutions of x'' = -x on an interval of length at most pi, parametrised as
/// G(t, w) = w_0 cos t + w_1 sin t. On longer intervals two solutions may
/// cross twice, so the interval length is capped.
class HarmonicFamily final : public Family {
 public:
  explicit HarmonicFamily(Interval interval = {-std::numbers::pi / 2, std::numbers::pi / 2});

  std::string id() const override;
  int order() const override { return 2; }
  int dim() const override { return 1; }
  Interval interval() const override { return interval_; }

  VectorXd evaluate(double t, const VectorXd& w) const override;
  std::optional<VectorXd> analytic_invert(const Restriction& a) const override;
  bool has_analytic_time_derivative(int) const override { return true; }
  VectorXd analytic_time_derivative(double t, const VectorXd& w, int order) const override;
  VectorXd default_parameter() const override { return VectorXd::Zero(2); }

 private:
  Interval interval_;
};

/// Parameters (w_0, w_1) of the harmonic worldline through the two points of a,
/// read off the sine-quotient formula
///   phi_a(t) = a_i sin(t - j) / sin(i - j) + a_j sin(t - i) / sin(j - i).
/// Throws ValidationError when the nodes leave the interval or |i - j| >= pi.
VectorXd harmonic_flow(const Restriction& a, const Interval& interval = HarmonicFamily().interval());

/// The sine-quotient formula evaluated directly at t.
double harmonic_value(const Restriction& a, double t);

/// Left side minus right side of the goniometric identity obtained from
/// re-anchoring the harmonic flow at beta:
///   sum_{(r,s)} sum_{(i,j)} a_i sin(r-j)/sin(i-j) * sin(t-s)/sin(r-s)
///     - sum_{(i,j)} a_i sin(t-j)/sin(i-j).
double goniometric_identity(const Restriction& a, const TimeSet& beta, double t,
                            const Interval& interval = HarmonicFamily().interval());

}  // namespace worldline
