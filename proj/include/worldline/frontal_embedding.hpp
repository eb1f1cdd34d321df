#pragma once

#include "worldline/family.hpp"
#include "worldline/newton.hpp"

#include <optional>

namespace worldline {

struct InversionSettings {
  NewtonSettings newton{};
  /// Ignore the family's analytic inverse and always run Newton.
  bool force_newton = false;
};

struct InversionResult {
  VectorXd w;
  /// Max-norm of G(t_i, w) - a_i over the entries.
  double residual = 0.0;
  int iterations = 0;
  bool analytic = false;
};

/// Solves G(t_i, w) = a_i for w, i.e. applies the inverse of the k-point
/// projection at dom a. Uses the family's analytic inverse when present,
/// damped Newton otherwise.
///
/// Throws ValidationError/DomainError on malformed input, InversionError when
/// Newton does not converge, and DomainEscapeError when the solution leaves U.
InversionResult invert_omega_beta(const Family& family, const Restriction& a,
                                  const std::optional<VectorXd>& initial_guess = std::nullopt,
                                  const InversionSettings& settings = {});

/// The flow a -> omega(omega_{dom a}^{-1}(a)) induced by a k-frontal family.
class FlowMap {
 public:
  using Scalar = double;

  explicit FlowMap(FamilyPtr family, InversionSettings settings = {});

  const Family& family() const noexcept { return *family_; }
  const FamilyPtr& family_ptr() const noexcept { return family_; }
  const InversionSettings& settings() const noexcept { return settings_; }
  int order() const { return family_->order(); }
  Interval interval() const { return family_->interval(); }

  InversionResult invert(const Restriction& a) const;

  /// The worldline through all points of a.
  Worldline flow(const Restriction& a) const;

 private:
  FamilyPtr family_;
  InversionSettings settings_;
};

/// flow(a) evaluated at t.
VectorXd flow_apply(const FlowMap& flow, const Restriction& a, double t);

}  // namespace worldline
