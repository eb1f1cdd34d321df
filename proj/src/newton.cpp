#include "worldline/newton.hpp"

#include <cmath>
#include <limits>

namespace worldline {

std::string to_string(NewtonStatus status) {
  switch (status) {
    case NewtonStatus::Converged:
      return "converged";
    case NewtonStatus::MaxIterations:
      return "maximum iterations reached";
    case NewtonStatus::Stalled:
      return "residual stalled";
    case NewtonStatus::DomainEscape:
      return "iterate escaped the parameter domain";
    case NewtonStatus::EvaluationFailed:
      return "residual evaluation failed";
  }
  return "unknown";
}

MatrixXd finite_difference_jacobian(const ResidualFunction& residual, const VectorXd& x,
                                    const VectorXd& fx, bool central) {
  const double root_eps = std::sqrt(std::numeric_limits<double>::epsilon());
  MatrixXd jac(fx.size(), x.size());
  VectorXd probe = x;
  for (Eigen::Index j = 0; j < x.size(); ++j) {
    const double h = root_eps * std::max(1.0, std::abs(x[j]));
    probe[j] = x[j] + h;
    const VectorXd plus = residual(probe);
    if (central) {
      probe[j] = x[j] - h;
      const VectorXd minus = residual(probe);
      jac.col(j) = (plus - minus) / (2.0 * h);
    } else {
      jac.col(j) = (plus - fx) / h;
    }
    probe[j] = x[j];
  }
  return jac;
}

NewtonResult damped_newton(const ResidualFunction& residual, VectorXd x0, const BoxDomain& box,
                           double scale, const NewtonSettings& settings) {
  NewtonResult result;
  result.x = std::move(x0);
  const double target = settings.tolerance * std::max(1.0, scale);

  VectorXd fx;
  try {
    fx = residual(result.x);
  } catch (const Error&) {
    result.status = NewtonStatus::EvaluationFailed;
    result.residual = std::numeric_limits<double>::infinity();
    return result;
  }
  result.residual = fx.lpNorm<Eigen::Infinity>();

  bool central = false;
  bool full_step_outside = false;
  while (true) {
    if (result.residual <= target) {
      result.status = NewtonStatus::Converged;
      return result;
    }
    if (result.iterations >= settings.max_iterations) {
      result.status = full_step_outside ? NewtonStatus::DomainEscape : NewtonStatus::MaxIterations;
      return result;
    }
    ++result.iterations;

    MatrixXd jac;
    try {
      jac = finite_difference_jacobian(residual, result.x, fx, central);
    } catch (const Error&) {
      result.status = NewtonStatus::EvaluationFailed;
      return result;
    }
    const VectorXd step = Eigen::CompleteOrthogonalDecomposition<MatrixXd>(jac).solve(-fx);
    full_step_outside = !box.contains(result.x + step);

    bool accepted = false;
    bool any_inside = false;
    double lambda = 1.0;
    for (int halving = 0; halving <= settings.max_halvings; ++halving, lambda *= 0.5) {
      const VectorXd trial = result.x + lambda * step;
      if (!box.contains(trial)) continue;
      any_inside = true;
      VectorXd f_trial;
      try {
        f_trial = residual(trial);
      } catch (const Error&) {
        continue;
      }
      const double norm = f_trial.lpNorm<Eigen::Infinity>();
      if (std::isfinite(norm) && norm < result.residual) {
        result.x = trial;
        fx = std::move(f_trial);
        result.residual = norm;
        accepted = true;
        break;
      }
    }

    if (!accepted) {
      if (!any_inside) {
        result.status = NewtonStatus::DomainEscape;
        return result;
      }
      if (central) {
        result.status = full_step_outside ? NewtonStatus::DomainEscape : NewtonStatus::Stalled;
        return result;
      }
      central = true;
    }
  }
}

}  // namespace worldline
