#include "worldline/polynomial.hpp"

#include <cctype>
#include <sstream>

namespace worldline {

Rational parse_rational(const std::string& text) {
  const auto slash = text.find('/');
  try {
    if (slash != std::string::npos) {
      const boost::multiprecision::cpp_int num(text.substr(0, slash));
      const boost::multiprecision::cpp_int den(text.substr(slash + 1));
      if (den == 0) throw ValidationError("zero denominator in rational '" + text + "'");
      return Rational(num, den);
    }
    const bool integral = !text.empty() && text.find_first_of(".eE") == std::string::npos;
    if (integral) return Rational(boost::multiprecision::cpp_int(text));
    std::size_t used = 0;
    const double value = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return Rational(value);
  } catch (const ValidationError&) {
    throw;
  } catch (const std::exception&) {
    throw ValidationError("cannot parse rational '" + text + "'");
  }
}

VectorXd interpolant_derivatives(const Restriction& a, double t0) {
  const auto coeffs = lagrange_coefficients(a);
  const auto k = static_cast<Eigen::Index>(coeffs.size());
  const auto n = a.dim();
  VectorXd out = VectorXd::Zero(k * n);
  for (Eigen::Index c = 0; c < n; ++c) {
    Poly<double> p;
    for (const auto& block : coeffs) p.push_back(block[c]);
    for (Eigen::Index order = 0; order < k; ++order) {
      out[order * n + c] = poly::evaluate(p, t0);
      p = poly::derivative(p);
    }
  }
  return out;
}

PolynomialFamily::PolynomialFamily(int k, int n, Interval interval)
    : k_(k), n_(n), interval_(interval) {
  if (k < 1 || n < 1) throw ValidationError("polynomial family requires k >= 1 and n >= 1");
}

std::string PolynomialFamily::id() const {
  std::ostringstream s;
  s << "polynomial(k=" << k_ << ",n=" << n_ << ")";
  return s.str();
}

VectorXd PolynomialFamily::evaluate(double t, const VectorXd& w) const {
  VectorXd acc = VectorXd::Zero(n_);
  for (int j = k_ - 1; j >= 0; --j) acc = acc * t + w.segment(j * n_, n_);
  return acc;
}

std::optional<VectorXd> PolynomialFamily::analytic_invert(const Restriction& a) const {
  return stack_blocks(lagrange_coefficients(a));
}

VectorXd PolynomialFamily::analytic_time_derivative(double t, const VectorXd& w,
                                                    int order) const {
  VectorXd acc = VectorXd::Zero(n_);
  for (int j = k_ - 1; j >= order; --j) {
    double falling = 1.0;
    for (int m = 0; m < order; ++m) falling *= j - m;
    acc = acc * t + falling * w.segment(j * n_, n_);
  }
  return acc;
}

VectorXd PolynomialFamily::initial_guess(const Restriction& a) const {
  return stack_blocks(lagrange_coefficients(a));
}

}  // namespace worldline
