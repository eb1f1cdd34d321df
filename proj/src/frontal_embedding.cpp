#include "worldline/frontal_embedding.hpp"

#include <sstream>

namespace worldline {

namespace {

std::vector<double> times_of(const Restriction& a) {
  std::vector<double> ts;
  ts.reserve(a.size());
  for (const auto& e : a) ts.push_back(e.t);
  return ts;
}

VectorXd stacked_values(const Restriction& a) {
  const auto n = a.dim();
  VectorXd out(static_cast<Eigen::Index>(a.size()) * n);
  for (std::size_t i = 0; i < a.size(); ++i) {
    out.segment(static_cast<Eigen::Index>(i) * n, n) = a[i].value;
  }
  return out;
}

}  // namespace

InversionResult invert_omega_beta(const Family& family, const Restriction& a,
                                  const std::optional<VectorXd>& initial_guess,
                                  const InversionSettings& settings) {
  require_admissible_shape(family, a);
  const BoxDomain box = family.parameter_domain();
  const std::vector<double> ts = times_of(a);
  const VectorXd target = stacked_values(a);
  const auto n = family.dim();

  const ResidualFunction residual = [&](const VectorXd& w) {
    const auto values = family.evaluate_many(ts, w);
    VectorXd r(target.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
      r.segment(static_cast<Eigen::Index>(i) * n, n) = values[i];
    }
    return VectorXd(r - target);
  };

  if (!settings.force_newton) {
    if (auto w = family.analytic_invert(a)) {
      InversionResult result;
      result.residual = residual(*w).lpNorm<Eigen::Infinity>();
      result.analytic = true;
      if (!box.contains(*w)) {
        throw DomainEscapeError("analytic inverse lies outside the parameter domain", *w,
                                result.residual, 0);
      }
      result.w = std::move(*w);
      return result;
    }
  }

  VectorXd guess = initial_guess ? *initial_guess : family.initial_guess(a);
  if (guess.size() != family.parameter_dim()) {
    throw ValidationError("initial guess dimension does not match k*n of the family");
  }
  if (!box.contains(guess)) guess = family.default_parameter();

  const NewtonResult newton = damped_newton(residual, guess, box, a.magnitude(), settings.newton);
  if (!newton.converged()) {
    std::ostringstream msg;
    msg << "inversion failed for " << family.id() << ": " << to_string(newton.status)
        << " after " << newton.iterations << " iterations (residual " << newton.residual
        << ")";
    if (newton.status == NewtonStatus::DomainEscape) {
      throw DomainEscapeError(msg.str(), newton.x, newton.residual, newton.iterations);
    }
    throw InversionError(msg.str(), newton.x, newton.residual, newton.iterations);
  }
  return InversionResult{newton.x, newton.residual, newton.iterations, false};
}

FlowMap::FlowMap(FamilyPtr family, InversionSettings settings)
    : family_(std::move(family)), settings_(settings) {
  if (!family_) throw ValidationError("flow map requires a family");
}

InversionResult FlowMap::invert(const Restriction& a) const {
  return invert_omega_beta(*family_, a, std::nullopt, settings_);
}

Worldline FlowMap::flow(const Restriction& a) const { return Worldline(family_, invert(a).w); }

VectorXd flow_apply(const FlowMap& flow, const Restriction& a, double t) {
  return flow.flow(a)(t);
}

}  // namespace worldline
