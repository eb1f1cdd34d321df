#include "worldline/harmonic.hpp"

#include <cmath>
#include <sstream>

namespace worldline {

namespace {

void require_harmonic_nodes(const std::vector<double>& nodes, const Interval& interval) {
  for (double t : nodes) {
    if (!interval.contains(t)) {
      std::ostringstream msg;
      msg << "node " << t << " outside the harmonic interval";
      throw ValidationError(msg.str());
    }
  }
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    for (std::size_t j = i + 1; j < nodes.size(); ++j) {
      if (std::abs(nodes[i] - nodes[j]) >= std::numbers::pi) {
        throw ValidationError("harmonic nodes must be closer than pi");
      }
    }
  }
}

void require_pair(const Restriction& a) {
  if (a.size() != 2 || a.dim() != 1) {
    throw ValidationError("harmonic flow needs two scalar entries");
  }
}

/// Sum over ordered pairs (i, j) of distinct nodes of a_i sin(t - j) / sin(i - j).
double sine_quotient(const std::vector<double>& nodes, const std::vector<double>& values,
                     double t) {
  double acc = 0.0;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    for (std::size_t j = 0; j < nodes.size(); ++j) {
      if (i == j) continue;
      acc += values[i] * std::sin(t - nodes[j]) / std::sin(nodes[i] - nodes[j]);
    }
  }
  return acc;
}

}  // namespace

HarmonicFamily::HarmonicFamily(Interval interval) : interval_(interval) {
  if (!(interval.lo < interval.hi)) throw ValidationError("interval requires lo < hi");
  if (!interval.bounded() || interval.length() > std::numbers::pi) {
    throw ValidationError("harmonic family interval must have length at most pi");
  }
}

std::string HarmonicFamily::id() const { return "harmonic"; }

VectorXd HarmonicFamily::evaluate(double t, const VectorXd& w) const {
  return VectorXd::Constant(1, w[0] * std::cos(t) + w[1] * std::sin(t));
}

std::optional<VectorXd> HarmonicFamily::analytic_invert(const Restriction& a) const {
  return harmonic_flow(a, interval_);
}

VectorXd HarmonicFamily::analytic_time_derivative(double t, const VectorXd& w,
                                                  int order) const {
  // d^m/dt^m cos t = cos(t + m pi/2), likewise for sin.
  const double shift = order * std::numbers::pi / 2;
  return VectorXd::Constant(1, w[0] * std::cos(t + shift) + w[1] * std::sin(t + shift));
}

VectorXd harmonic_flow(const Restriction& a, const Interval& interval) {
  require_pair(a);
  const double i = a[0].t;
  const double j = a[1].t;
  require_harmonic_nodes({i, j}, interval);
  const double ai = a[0].value[0];
  const double aj = a[1].value[0];
  // sin(t - x) = sin t cos x - cos t sin x
  const double s_ij = std::sin(i - j);
  VectorXd w(2);
  w[0] = (-ai * std::sin(j) + aj * std::sin(i)) / s_ij;
  w[1] = (ai * std::cos(j) - aj * std::cos(i)) / s_ij;
  return w;
}

double harmonic_value(const Restriction& a, double t) {
  require_pair(a);
  return sine_quotient({a[0].t, a[1].t}, {a[0].value[0], a[1].value[0]}, t);
}

double goniometric_identity(const Restriction& a, const TimeSet& beta, double t,
                            const Interval& interval) {
  require_pair(a);
  if (beta.size() != 2) throw ValidationError("beta must have two points");
  const std::vector<double> dom{a[0].t, a[1].t};
  const std::vector<double> values{a[0].value[0], a[1].value[0]};
  require_harmonic_nodes(dom, interval);
  require_harmonic_nodes(beta.points(), interval);

  std::vector<double> resampled;
  for (double r : beta) resampled.push_back(sine_quotient(dom, values, r));
  return sine_quotient(beta.points(), resampled, t) - sine_quotient(dom, values, t);
}

}  // namespace worldline
