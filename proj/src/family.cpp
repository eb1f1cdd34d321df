#include "worldline/family.hpp"

#include <cmath>
#include <sstream>

namespace worldline {

std::vector<VectorXd> Family::evaluate_many(std::span<const double> ts,
                                            const VectorXd& w) const {
  std::vector<VectorXd> out;
  out.reserve(ts.size());
  for (double t : ts) out.push_back(evaluate(t, w));
  return out;
}

VectorXd Family::analytic_time_derivative(double t, const VectorXd& w, int order) const {
  if (order == 0) return evaluate(t, w);
  throw CapabilityError("family " + id() + " has no analytic time derivative");
}

namespace {

double binomial(int m, int j) {
  double c = 1.0;
  for (int i = 1; i <= j; ++i) c = c * (m - j + i) / i;
  return c;
}

}  // namespace

VectorXd time_derivative(const Family& family, double t, const VectorXd& w, int order,
                         bool allow_finite_difference) {
  if (order < 0) throw ValidationError("derivative order must be non-negative");
  if (family.has_analytic_time_derivative(order)) {
    return family.analytic_time_derivative(t, w, order);
  }
  if (!allow_finite_difference) {
    std::ostringstream msg;
    msg << "family " << family.id() << " provides no time derivative of order " << order
        << " and finite differences are disabled";
    throw CapabilityError(msg.str());
  }
  // Central m-th difference: sum_j (-1)^j C(m,j) G(t + (m/2 - j) h) / h^m.
  const double base = order == 1
                          ? 1e-5
                          : std::pow(std::numeric_limits<double>::epsilon(), 1.0 / (order + 2));
  const double h = base * std::max(1.0, std::abs(t));
  VectorXd acc = VectorXd::Zero(family.dim());
  for (int j = 0; j <= order; ++j) {
    const double sign = (j % 2 == 0) ? 1.0 : -1.0;
    const double tj = t + (0.5 * order - j) * h;
    acc += sign * binomial(order, j) * family.evaluate(tj, w);
  }
  return acc / std::pow(h, order);
}

Worldline::Worldline(FamilyPtr family, VectorXd w) : family_(std::move(family)), w_(std::move(w)) {
  if (!family_) throw ValidationError("worldline requires a family");
  if (w_.size() != family_->parameter_dim()) {
    throw ValidationError("parameter dimension does not match k*n of the family");
  }
}

VectorXd Worldline::operator()(double t) const {
  if (!family_->interval().contains(t)) {
    std::ostringstream msg;
    msg << "time " << t << " outside the interval of " << family_->id();
    throw DomainError(msg.str());
  }
  return family_->evaluate(t, w_);
}

Worldline omega(FamilyPtr family, const VectorXd& w) {
  if (!family) throw ValidationError("omega requires a family");
  if (!family->parameter_domain().contains(w)) {
    throw DomainError("parameter outside the family's domain U");
  }
  return Worldline(std::move(family), w);
}

Restriction omega_beta(const Family& family, const VectorXd& w, const TimeSet& beta) {
  if (w.size() != family.parameter_dim()) {
    throw ValidationError("parameter dimension does not match k*n of the family");
  }
  if (!family.parameter_domain().contains(w)) {
    throw DomainError("parameter outside the family's domain U");
  }
  beta.require_inside(family.interval());
  const auto values = family.evaluate_many(beta.points(), w);
  std::vector<Restriction::Entry> entries;
  entries.reserve(beta.size());
  for (std::size_t i = 0; i < beta.size(); ++i) entries.push_back({beta[i], values[i]});
  return Restriction(std::move(entries), 0.0);
}

void require_admissible_shape(const Family& family, const Restriction& a) {
  if (static_cast<int>(a.size()) != family.order()) {
    std::ostringstream msg;
    msg << "restriction has " << a.size() << " entries but the family needs k = "
        << family.order();
    throw ValidationError(msg.str());
  }
  if (a.dim() != family.dim()) {
    throw ValidationError("restriction value dimension does not match the family");
  }
  a.times(0.0).require_inside(family.interval());
}

}  // namespace worldline
