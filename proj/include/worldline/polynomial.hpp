#pragma once

// Polynomial worldlines and the Lagrange flow, templated on the scalar so the
// same code runs in double and in exact rational arithmetic.

#include "worldline/family.hpp"
#include "worldline/rational.hpp"
#include "worldline/restriction.hpp"

#include <optional>
#include <sstream>
#include <vector>

namespace worldline {

/// Scalar polynomial, coefficients in ascending powers.
template <typename Scalar>
using Poly = std::vector<Scalar>;

namespace poly {

template <typename Scalar>
void trim(Poly<Scalar>& p) {
  while (!p.empty() && p.back() == Scalar(0)) p.pop_back();
}

/// Degree of p, or -1 for the zero polynomial.
template <typename Scalar>
int degree(Poly<Scalar> p) {
  trim(p);
  return static_cast<int>(p.size()) - 1;
}

template <typename Scalar>
Scalar evaluate(const Poly<Scalar>& p, const Scalar& t) {
  Scalar acc(0);
  for (auto it = p.rbegin(); it != p.rend(); ++it) acc = acc * t + *it;
  return acc;
}

template <typename Scalar>
Poly<Scalar> derivative(const Poly<Scalar>& p) {
  if (p.size() <= 1) return {};
  Poly<Scalar> d(p.size() - 1);
  for (std::size_t j = 1; j < p.size(); ++j) d[j - 1] = p[j] * Scalar(static_cast<int>(j));
  return d;
}

/// Remainder of a divided by b (b nonzero); exact for rational scalars.
template <typename Scalar>
Poly<Scalar> remainder(Poly<Scalar> a, Poly<Scalar> b) {
  trim(a);
  trim(b);
  if (b.empty()) throw ValidationError("polynomial division by zero");
  while (a.size() >= b.size() && !a.empty()) {
    const Scalar factor = a.back() / b.back();
    const std::size_t shift = a.size() - b.size();
    for (std::size_t j = 0; j < b.size(); ++j) a[shift + j] -= factor * b[j];
    a.pop_back();
    trim(a);
  }
  return a;
}

template <typename Scalar>
Poly<Scalar> gcd(Poly<Scalar> a, Poly<Scalar> b) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    Poly<Scalar> r = remainder(a, b);
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

template <typename Scalar>
int sign_of(const Scalar& x) {
  return x > Scalar(0) ? 1 : (x < Scalar(0) ? -1 : 0);
}

/// Sturm sequence p, p', -rem(p, p'), ... .
template <typename Scalar>
std::vector<Poly<Scalar>> sturm_sequence(Poly<Scalar> p) {
  trim(p);
  std::vector<Poly<Scalar>> seq;
  seq.push_back(p);
  seq.push_back(derivative(p));
  trim(seq.back());
  while (!seq.back().empty()) {
    Poly<Scalar> r = remainder(seq[seq.size() - 2], seq.back());
    for (auto& c : r) c = -c;
    if (r.empty()) break;
    seq.push_back(std::move(r));
  }
  if (seq.back().empty()) seq.pop_back();
  return seq;
}

inline int sign_variations(const std::vector<int>& signs) {
  int count = 0;
  int last = 0;
  for (int s : signs) {
    if (s == 0) continue;
    if (last != 0 && s != last) ++count;
    last = s;
  }
  return count;
}

/// Sign variations of the Sturm sequence at x (nullopt with `sign_at_inf`
/// +1/-1 means +infinity / -infinity).
template <typename Scalar>
int variations_at(const std::vector<Poly<Scalar>>& seq, const std::optional<Scalar>& x,
                  int sign_at_inf) {
  std::vector<int> signs;
  signs.reserve(seq.size());
  for (const auto& p : seq) {
    if (x) {
      signs.push_back(sign_of(evaluate(p, *x)));
    } else {
      const int deg = static_cast<int>(p.size()) - 1;
      const int lead = sign_of(p.back());
      signs.push_back((sign_at_inf < 0 && deg % 2 == 1) ? -lead : lead);
    }
  }
  return sign_variations(signs);
}

/// Number of distinct real roots of p in the open interval (lo, hi); an
/// absent bound means infinite. Exact for rational scalars.
template <typename Scalar>
int count_real_roots(const Poly<Scalar>& p, const std::optional<Scalar>& lo,
                     const std::optional<Scalar>& hi) {
  if (degree(p) < 0) throw ValidationError("the zero polynomial has infinitely many roots");
  if (degree(p) == 0) return 0;
  const auto seq = sturm_sequence(p);
  // N(x) = V(-inf) - V(x) counts the roots in (-inf, x].
  const int v_minus_inf = variations_at<Scalar>(seq, std::nullopt, -1);
  const int up_to_hi =
      v_minus_inf - (hi ? variations_at<Scalar>(seq, hi, 0) : variations_at<Scalar>(seq, std::nullopt, 1));
  const int up_to_lo = lo ? v_minus_inf - variations_at<Scalar>(seq, lo, 0) : 0;
  const int hi_is_root = (hi && evaluate(p, *hi) == Scalar(0)) ? 1 : 0;
  return up_to_hi - hi_is_root - up_to_lo;
}

}  // namespace poly

// ---------------------------------------------------------------------------
// Lagrange interpolation

/// Lagrange formula sum_i a_i prod_{j != i} (t - t_j) / (t_i - t_j).
template <typename Scalar>
Vec<Scalar> lagrange_value(const BasicRestriction<Scalar>& a, const Scalar& t) {
  Vec<Scalar> acc = Vec<Scalar>::Zero(a.dim());
  for (std::size_t i = 0; i < a.size(); ++i) {
    Scalar weight(1);
    for (std::size_t j = 0; j < a.size(); ++j) {
      if (j == i) continue;
      weight *= (t - a[j].t) / (a[i].t - a[j].t);
    }
    acc += a[i].value * weight;
  }
  return acc;
}

/// Monomial coefficients of the interpolant through a: block j is the
/// n-vector coefficient of t^j, j = 0..k-1. Obtained by expanding the Lagrange
/// basis products.
template <typename Scalar>
std::vector<Vec<Scalar>> lagrange_coefficients(const BasicRestriction<Scalar>& a) {
  const std::size_t k = a.size();
  std::vector<Vec<Scalar>> coeffs(k, Vec<Scalar>::Zero(a.dim()));
  for (std::size_t i = 0; i < k; ++i) {
    Poly<Scalar> basis{Scalar(1)};
    Scalar denom(1);
    for (std::size_t j = 0; j < k; ++j) {
      if (j == i) continue;
      // basis *= (t - t_j)
      Poly<Scalar> next(basis.size() + 1, Scalar(0));
      for (std::size_t m = 0; m < basis.size(); ++m) {
        next[m + 1] += basis[m];
        next[m] -= basis[m] * a[j].t;
      }
      basis = std::move(next);
      denom *= a[i].t - a[j].t;
    }
    for (std::size_t m = 0; m < k; ++m) {
      coeffs[m] += a[i].value * Scalar(basis[m] / denom);
    }
  }
  return coeffs;
}

/// Left side minus right side of the Lagrange summation identity: the
/// interpolant re-sampled on beta and re-interpolated, minus the interpolant,
/// at t. Identically zero; exactly zero in rational arithmetic.
template <typename Scalar>
Vec<Scalar> lagrange_summation_identity(const BasicRestriction<Scalar>& a,
                                        const BasicTimeSet<Scalar>& beta, const Scalar& t) {
  if (beta.size() != a.size()) {
    throw ValidationError("beta must have as many points as dom a");
  }
  Vec<Scalar> lhs = Vec<Scalar>::Zero(a.dim());
  for (std::size_t r = 0; r < beta.size(); ++r) {
    Scalar outer(1);
    for (std::size_t s = 0; s < beta.size(); ++s) {
      if (s == r) continue;
      outer *= (t - beta[s]) / (beta[r] - beta[s]);
    }
    lhs += lagrange_value(a, beta[r]) * outer;
  }
  return lhs - lagrange_value(a, t);
}

// ---------------------------------------------------------------------------

/// Curve t -> sum_j c_j t^j with vector coefficients.
template <typename Scalar>
class PolynomialWorldline {
 public:
  PolynomialWorldline(std::vector<Vec<Scalar>> coefficients, Interval interval = {})
      : coeffs_(std::move(coefficients)), interval_(interval) {
    if (coeffs_.empty()) throw ValidationError("polynomial worldline needs k >= 1");
    for (const auto& c : coeffs_) {
      if (c.size() != coeffs_.front().size() || c.size() < 1) {
        throw ValidationError("polynomial coefficients have inconsistent dimension");
      }
    }
  }

  int order() const noexcept { return static_cast<int>(coeffs_.size()); }
  Eigen::Index dim() const noexcept { return coeffs_.front().size(); }
  Interval interval() const noexcept { return interval_; }
  const std::vector<Vec<Scalar>>& coefficients() const noexcept { return coeffs_; }

  Vec<Scalar> operator()(const Scalar& t) const {
    Vec<Scalar> acc = Vec<Scalar>::Zero(dim());
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * t + *it;
    return acc;
  }

  /// Component c of the curve as a scalar polynomial.
  Poly<Scalar> component(Eigen::Index c) const {
    Poly<Scalar> p;
    p.reserve(coeffs_.size());
    for (const auto& v : coeffs_) p.push_back(v[c]);
    return p;
  }

 private:
  std::vector<Vec<Scalar>> coeffs_;
  Interval interval_;
};

/// The Lagrange flow: each k-point restriction goes to its unique
/// interpolating polynomial of degree < k.
template <typename Scalar>
class PolynomialFlow {
 public:
  using ScalarType = Scalar;

  PolynomialFlow(int k, int n, Interval interval = {}) : k_(k), n_(n), interval_(interval) {
    if (k < 1 || n < 1) throw ValidationError("polynomial flow requires k >= 1 and n >= 1");
  }

  int order() const noexcept { return k_; }
  int dim() const noexcept { return n_; }
  Interval interval() const noexcept { return interval_; }

  PolynomialWorldline<Scalar> flow(const BasicRestriction<Scalar>& a) const {
    if (static_cast<int>(a.size()) != k_ || a.dim() != n_) {
      std::ostringstream msg;
      msg << "polynomial flow expects " << k_ << " entries of dimension " << n_;
      throw ValidationError(msg.str());
    }
    a.times(0.0).require_inside(interval_);
    return PolynomialWorldline<Scalar>(lagrange_coefficients(a), interval_);
  }

  Vec<Scalar> apply(const BasicRestriction<Scalar>& a, const Scalar& t) const {
    return flow(a)(t);
  }

 private:
  int k_;
  int n_;
  Interval interval_;
};

using ExactPolynomialFlow = PolynomialFlow<Rational>;

/// Stacks per-power coefficient blocks into a parameter vector.
template <typename Scalar>
Vec<Scalar> stack_blocks(const std::vector<Vec<Scalar>>& blocks) {
  const Eigen::Index n = blocks.front().size();
  Vec<Scalar> w(static_cast<Eigen::Index>(blocks.size()) * n);
  for (std::size_t j = 0; j < blocks.size(); ++j) {
    w.segment(static_cast<Eigen::Index>(j) * n, n) = blocks[j];
  }
  return w;
}

/// Derivatives (p(t0), p'(t0), ..., p^(k-1)(t0)) of the interpolant through a,
/// stacked as a k*n vector. Used to seed Newton for families parametrised by
/// Cauchy data.
VectorXd interpolant_derivatives(const Restriction& a, double t0);

/// Component-wise difference of two polynomial worldlines.
template <typename Scalar>
PolynomialWorldline<Scalar> difference(const PolynomialWorldline<Scalar>& x1,
                                       const PolynomialWorldline<Scalar>& x2) {
  if (x1.order() != x2.order() || x1.dim() != x2.dim()) {
    throw ValidationError("worldlines belong to different polynomial families");
  }
  std::vector<Vec<Scalar>> c;
  for (int j = 0; j < x1.order(); ++j) c.push_back(x1.coefficients()[j] - x2.coefficients()[j]);
  return PolynomialWorldline<Scalar>(std::move(c), x1.interval());
}

/// Worldlines of the polynomial family: G(t, w) = sum_j w_j t^j with w_j the
/// n-vector blocks of w.
class PolynomialFamily final : public Family {
 public:
  PolynomialFamily(int k, int n, Interval interval = {});

  std::string id() const override;
  int order() const override { return k_; }
  int dim() const override { return n_; }
  Interval interval() const override { return interval_; }

  VectorXd evaluate(double t, const VectorXd& w) const override;
  std::optional<VectorXd> analytic_invert(const Restriction& a) const override;
  bool has_analytic_time_derivative(int) const override { return true; }
  VectorXd analytic_time_derivative(double t, const VectorXd& w, int order) const override;
  VectorXd default_parameter() const override { return VectorXd::Zero(parameter_dim()); }
  VectorXd initial_guess(const Restriction& a) const override;

 private:
  int k_;
  int n_;
  Interval interval_;
};

/// The unique interpolating polynomial of degree < k through a, as
/// coefficients. Throws ValidationError on duplicate nodes.
template <typename Scalar>
PolynomialWorldline<Scalar> lagrange_flow(const BasicRestriction<Scalar>& a) {
  return PolynomialWorldline<Scalar>(lagrange_coefficients(a));
}

}  // namespace worldline
