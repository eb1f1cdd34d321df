#include "worldline/chladek.hpp"

namespace worldline {

ChladekProblem::ChladekProblem(FamilyPtr family_, double alpha_, double beta_, VectorXd a_,
                               VectorXd b_)
    : family(std::move(family_)), alpha(alpha_), beta(beta_), a(std::move(a_)), b(std::move(b_)) {
  if (!family) throw ValidationError("Chladek problem requires a family");
  if (family->order() != 2) throw ValidationError("Chladek problem requires a k = 2 family");
  if (alpha == beta) throw ValidationError("nodes not distinct");
  const Interval I = family->interval();
  if (!I.contains(alpha) || !I.contains(beta)) {
    throw ValidationError("boundary times must lie inside the family interval");
  }
  if (a.size() != family->dim() || b.size() != family->dim()) {
    throw ValidationError("boundary values do not match the family dimension");
  }
}

Restriction ChladekProblem::restriction() const {
  return Restriction({{alpha, a}, {beta, b}});
}

ChladekProblem ChladekProblem::swapped() const { return {family, beta, alpha, b, a}; }

InversionResult chladek_parameters(const ChladekProblem& problem,
                                   const InversionSettings& settings) {
  return invert_omega_beta(*problem.family, problem.restriction(), std::nullopt, settings);
}

VectorXd chladek_solve(const ChladekProblem& problem, double tau,
                       const InversionSettings& settings) {
  const auto h = chladek_parameters(problem, settings);
  return Worldline(problem.family, h.w)(tau);
}

double chladek_consistency(const ChladekProblem& problem, double gamma, double delta, double tau,
                           const InversionSettings& settings) {
  const Worldline x(problem.family, chladek_parameters(problem, settings).w);
  const ChladekProblem reanchored(problem.family, gamma, delta, x(gamma), x(delta));
  const Worldline y(problem.family, chladek_parameters(reanchored, settings).w);
  return (x(tau) - y(tau)).lpNorm<Eigen::Infinity>();
}

double chladek_boundary_residual(const ChladekProblem& problem,
                                 const InversionSettings& settings) {
  const Worldline x(problem.family, chladek_parameters(problem, settings).w);
  return std::max((x(problem.alpha) - problem.a).lpNorm<Eigen::Infinity>(),
                  (x(problem.beta) - problem.b).lpNorm<Eigen::Infinity>());
}

}  // namespace worldline
