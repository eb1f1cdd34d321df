#pragma once

#include "worldline/core.hpp"

#include <functional>
#include <string>

namespace worldline {

struct NewtonSettings {
  /// Converged when ||F(x)||_inf <= tolerance * max(1, scale).
  double tolerance = 1e-10;
  int max_iterations = 100;
  int max_halvings = 20;
};

enum class NewtonStatus { Converged, MaxIterations, Stalled, DomainEscape, EvaluationFailed };

std::string to_string(NewtonStatus status);

struct NewtonResult {
  VectorXd x;
  double residual = 0.0;
  int iterations = 0;
  NewtonStatus status = NewtonStatus::MaxIterations;

  bool converged() const noexcept { return status == NewtonStatus::Converged; }
};

using ResidualFunction = std::function<VectorXd(const VectorXd&)>;

/// Damped Newton iteration for F(x) = 0 with F: R^m -> R^m.
///
/// The Jacobian is formed by forward differences with step
/// sqrt(eps) * max(1, |x_j|); once a step fails to reduce the residual after
/// max_halvings halvings, the iteration switches to central differences and
/// stops only if that stalls too. Trial points outside `box` or where F
/// throws worldline::Error are treated as non-decreasing. A failure whose
/// last undamped step pointed outside `box` is reported as DomainEscape.
NewtonResult damped_newton(const ResidualFunction& residual, VectorXd x0, const BoxDomain& box,
                           double scale, const NewtonSettings& settings = {});

/// Forward (or central) finite-difference Jacobian of F at x, given F(x).
MatrixXd finite_difference_jacobian(const ResidualFunction& residual, const VectorXd& x,
                                    const VectorXd& fx, bool central);

}  // namespace worldline
