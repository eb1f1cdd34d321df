#include "worldline/frontal_check.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <sstream>

namespace worldline {

GaussLegendre::GaussLegendre(int points) {
  if (points < 1) throw ValidationError("quadrature needs at least one point");
  // Jacobi matrix of the Legendre recurrence: off-diagonal k / sqrt(4k^2 - 1).
  MatrixXd jacobi = MatrixXd::Zero(points, points);
  for (int k = 1; k < points; ++k) {
    const double b = k / std::sqrt(4.0 * k * k - 1.0);
    jacobi(k, k - 1) = b;
    jacobi(k - 1, k) = b;
  }
  const Eigen::SelfAdjointEigenSolver<MatrixXd> eig(jacobi);
  nodes.resize(points);
  weights.resize(points);
  for (int i = 0; i < points; ++i) {
    const double x = eig.eigenvalues()[i];
    const double v0 = eig.eigenvectors()(0, i);
    // Map [-1, 1] to [0, 1].
    nodes[i] = 0.5 * (x + 1.0);
    weights[i] = v0 * v0;
  }
}

namespace {

void require_nodes(const Family& family, std::span<const double> nodes) {
  if (nodes.empty()) throw ValidationError("divided difference needs at least one node");
  const Interval I = family.interval();
  for (double t : nodes) {
    if (!I.contains(t)) {
      std::ostringstream msg;
      msg << "node " << t << " lies outside I";
      throw DomainError(msg.str());
    }
  }
}

}  // namespace

VectorXd k_closed(const Family& family, std::span<const double> nodes, const VectorXd& w,
                  double min_separation) {
  require_nodes(family, nodes);
  for (std::size_t j = 0; j < nodes.size(); ++j) {
    for (std::size_t m = j + 1; m < nodes.size(); ++m) {
      if (std::abs(nodes[j] - nodes[m]) < std::max(min_separation, 0.0) ||
          nodes[j] == nodes[m]) {
        throw ValidationError("nodes not distinct; use k_recursive for confluent nodes");
      }
    }
  }
  VectorXd acc = VectorXd::Zero(family.dim());
  for (std::size_t j = 0; j < nodes.size(); ++j) {
    double weight = 1.0;
    for (std::size_t m = 0; m < nodes.size(); ++m) {
      if (m != j) weight /= nodes[j] - nodes[m];
    }
    acc += weight * family.evaluate(nodes[j], w);
  }
  return acc;
}

namespace {

class Recursion {
 public:
  Recursion(const Family& family, const VectorXd& w, const RecursionSettings& settings)
      : family_(family), w_(w), settings_(settings), rule_(settings.quadrature_points) {}

  /// d^m/dt_1^m K_i(nodes), i = nodes.size().
  VectorXd derivative(int m, std::vector<double> nodes) const {
    if (nodes.size() == 1) {
      return time_derivative(family_, nodes[0], w_, m, settings_.allow_finite_difference);
    }
    // d^m/dt_1^m K_{i+1} = int_0^1 (1-s)^m K_i^{(m+1)}(t_1 (1-s) + t_2 s, t_3, ...) ds
    const double t1 = nodes[0];
    const double t2 = nodes[1];
    std::vector<double> inner(nodes.begin() + 1, nodes.end());
    VectorXd acc = VectorXd::Zero(family_.dim());
    const double panel = 1.0 / settings_.panels;
    for (int p = 0; p < settings_.panels; ++p) {
      for (std::size_t q = 0; q < rule_.nodes.size(); ++q) {
        const double s = (p + rule_.nodes[q]) * panel;
        inner[0] = t1 * (1.0 - s) + t2 * s;
        acc += (panel * rule_.weights[q] * std::pow(1.0 - s, m)) * derivative(m + 1, inner);
      }
    }
    return acc;
  }

 private:
  const Family& family_;
  const VectorXd& w_;
  RecursionSettings settings_;
  GaussLegendre rule_;
};

}  // namespace

VectorXd k_recursive(const Family& family, std::span<const double> nodes, const VectorXd& w,
                     const RecursionSettings& settings) {
  require_nodes(family, nodes);
  if (settings.panels < 1) throw ValidationError("quadrature needs at least one panel");
  const Recursion recursion(family, w, settings);
  return recursion.derivative(0, std::vector<double>(nodes.begin(), nodes.end()));
}

FrontalCertificate lemma_jacobian(const Family& family, double t0, const VectorXd& w0,
                                  double threshold, bool allow_finite_difference) {
  const int k = family.order();
  const int n = family.dim();
  const Eigen::Index dim = 1 + static_cast<Eigen::Index>(k) * n;
  if (w0.size() != family.parameter_dim()) {
    throw ValidationError("w0 dimension does not match k*n of the family");
  }

  const auto jet = [&](const VectorXd& z) {
    VectorXd out(dim);
    out[0] = z[0];
    const VectorXd w = z.tail(dim - 1);
    for (int order = 0; order < k; ++order) {
      out.segment(1 + static_cast<Eigen::Index>(order) * n, n) =
          time_derivative(family, z[0], w, order, allow_finite_difference);
    }
    return out;
  };

  VectorXd z(dim);
  z[0] = t0;
  z.tail(dim - 1) = w0;

  FrontalCertificate cert;
  cert.matrix.resize(dim, dim);
  try {
    VectorXd probe = z;
    for (Eigen::Index j = 0; j < dim; ++j) {
      const double h = 1e-6 * std::max(1.0, std::abs(z[j]));
      probe[j] = z[j] + h;
      const VectorXd plus = jet(probe);
      probe[j] = z[j] - h;
      const VectorXd minus = jet(probe);
      probe[j] = z[j];
      cert.matrix.col(j) = (plus - minus) / (2.0 * h);
    }
  } catch (const CapabilityError&) {
    throw;
  } catch (const Error& e) {
    throw CapabilityError(std::string("derivative evaluation failed: ") + e.what());
  }
  cert.jacobian = cert.matrix.determinant();
  cert.certified = std::abs(cert.jacobian) > threshold;
  return cert;
}

ConstantFamily::ConstantFamily(int k, int n, Interval interval) : k_(k), n_(n), interval_(interval) {
  if (k < 1 || n < 1) throw ValidationError("constant family requires k >= 1 and n >= 1");
}

std::string ConstantFamily::id() const {
  std::ostringstream s;
  s << "constant(k=" << k_ << ",n=" << n_ << ")";
  return s.str();
}

VectorXd ConstantFamily::evaluate(double, const VectorXd& w) const { return w.head(n_); }

VectorXd ConstantFamily::analytic_time_derivative(double, const VectorXd& w, int order) const {
  return order == 0 ? VectorXd(w.head(n_)) : VectorXd(VectorXd::Zero(n_));
}

}  // namespace worldline
