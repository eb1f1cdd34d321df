#pragma once

// Divided differences of a family along time and the Jacobian criterion for
// local k-frontality.
//
// K_1(t_1, w) = G(t_1, w) and
//   K_{i+1}(t_1, ..., t_{i+1}, w) = int_0^1 dK_i/dt_1(t_1 (1-s) + t_2 s, t_3, ..., t_{i+1}, w) ds.
// On distinct nodes this equals the divided difference
//   K_i = sum_j G(t_j, w) prod_{m != j} 1 / (t_j - t_m),
// and it stays defined when nodes coincide.

#include "worldline/family.hpp"

#include <span>
#include <utility>
#include <vector>

namespace worldline {

/// Gauss-Legendre nodes and weights on [0, 1], computed with the
/// Golub-Welsch eigenvalue method.
struct GaussLegendre {
  explicit GaussLegendre(int points);

  std::vector<double> nodes;
  std::vector<double> weights;
};

struct RecursionSettings {
  int quadrature_points = 16;
  /// Composite rule: the unit interval is split into this many panels.
  int panels = 1;
  /// Fall back to finite-difference time derivatives when the family has no
  /// analytic ones.
  bool allow_finite_difference = true;
};

/// Closed-form divided difference over pairwise distinct nodes. Throws
/// ValidationError when two nodes are closer than min_separation and
/// DomainError for nodes outside I.
VectorXd k_closed(const Family& family, std::span<const double> nodes, const VectorXd& w,
                  double min_separation = kDefaultSeparation);

/// Divided difference through the integral recursion; repeated nodes allowed.
/// Needs time derivatives of G up to order nodes.size() - 1.
VectorXd k_recursive(const Family& family, std::span<const double> nodes, const VectorXd& w,
                     const RecursionSettings& settings = {});

struct FrontalCertificate {
  /// Determinant of the Jacobian of (t, w) -> (t, G, dG/dt, ..., d^{k-1}G/dt^{k-1}).
  double jacobian = 0.0;
  MatrixXd matrix;
  bool certified = false;
};

inline constexpr double kCertificateThreshold = 1e-6;

/// Finite-difference Jacobian of (t, w) -> (t, G, ..., d^{k-1}G/dt^{k-1}) at
/// (t0, w0) and its determinant; certified when |J| > threshold. Throws
/// CapabilityError when the time derivatives cannot be evaluated.
FrontalCertificate lemma_jacobian(const Family& family, double t0, const VectorXd& w0,
                                  double threshold = kCertificateThreshold,
                                  bool allow_finite_difference = true);

/// G(t, w) = first n-block of w, ignoring the rest: every k-point projection
/// with k >= 2 is singular. Serves as the negative control for the
/// certificate.
class ConstantFamily final : public Family {
 public:
  ConstantFamily(int k, int n, Interval interval = {});

  std::string id() const override;
  int order() const override { return k_; }
  int dim() const override { return n_; }
  Interval interval() const override { return interval_; }
  VectorXd evaluate(double t, const VectorXd& w) const override;
  bool has_analytic_time_derivative(int) const override { return true; }
  VectorXd analytic_time_derivative(double t, const VectorXd& w, int order) const override;

 private:
  int k_;
  int n_;
  Interval interval_;
};

}  // namespace worldline
