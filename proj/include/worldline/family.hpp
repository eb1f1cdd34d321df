#pragma once

#include "worldline/core.hpp"
#include "worldline/restriction.hpp"

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace worldline {

/// A parametrised family of curves G(t, w) with t in an interval I and w in a
/// box U of dimension k*n. Each w names one worldline; the family is k-frontal
/// when every k-point projection w -> (G(t_1, w), ..., G(t_k, w)) is a
/// bijection.
///
/// Implementations are immutable and safe to evaluate concurrently.
class Family {
 public:
  virtual ~Family() = default;

  virtual std::string id() const = 0;
  /// Number of points that determine a worldline.
  virtual int order() const = 0;
  /// Dimension of the values G(t, w).
  virtual int dim() const = 0;
  int parameter_dim() const { return order() * dim(); }

  virtual Interval interval() const = 0;
  virtual BoxDomain parameter_domain() const {
    return BoxDomain::unbounded(parameter_dim());
  }

  virtual VectorXd evaluate(double t, const VectorXd& w) const = 0;

  /// Evaluates at several times; families with a marching evaluator override
  /// this to share work between the times.
  virtual std::vector<VectorXd> evaluate_many(std::span<const double> ts,
                                              const VectorXd& w) const;

  /// Closed-form inverse of the k-point projection, when known.
  virtual std::optional<VectorXd> analytic_invert(const Restriction&) const {
    return std::nullopt;
  }

  virtual bool has_analytic_time_derivative(int order) const { return order == 0; }
  /// d^order G / dt^order. Only called when has_analytic_time_derivative(order).
  virtual VectorXd analytic_time_derivative(double t, const VectorXd& w, int order) const;

  virtual VectorXd default_parameter() const { return parameter_domain().center(); }

  /// Starting point for Newton inversion of the k-point projection.
  virtual VectorXd initial_guess(const Restriction&) const { return default_parameter(); }
};

using FamilyPtr = std::shared_ptr<const Family>;

/// d^order G / dt^order at (t, w): analytic when the family provides it,
/// otherwise central finite differences of G (step 1e-5 * max(1, |t|) for
/// the first derivative). Throws CapabilityError when neither is allowed.
VectorXd time_derivative(const Family& family, double t, const VectorXd& w, int order,
                         bool allow_finite_difference = true);

/// One curve of a family, identified by its parameter. Evaluation is lazy.
class Worldline {
 public:
  Worldline(FamilyPtr family, VectorXd w);

  VectorXd operator()(double t) const;

  const Family& family() const noexcept { return *family_; }
  const FamilyPtr& family_ptr() const noexcept { return family_; }
  std::string family_id() const { return family_->id(); }
  const VectorXd& parameter() const noexcept { return w_; }
  Interval interval() const { return family_->interval(); }

 private:
  FamilyPtr family_;
  VectorXd w_;
};

/// w -> (t -> G(t, w)). Throws DomainError when w is outside U.
Worldline omega(FamilyPtr family, const VectorXd& w);

/// w -> omega(w) restricted to beta.
Restriction omega_beta(const Family& family, const VectorXd& w, const TimeSet& beta);

/// Checks the shape of a restriction against a family: k entries of
/// dimension n with times inside I.
void require_admissible_shape(const Family& family, const Restriction& a);

}  // namespace worldline
