#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace worldline {

template <typename Scalar>
using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using Eigen::MatrixXd;
using Eigen::VectorXd;

/// Minimum separation between two time points of a TimeSet.
inline constexpr double kDefaultSeparation = 1e-8;

/// Default absolute tolerance for axiom verdicts.
inline constexpr double kDefaultTolerance = 1e-9;

/// Values above this magnitude are compared relatively.
inline constexpr double kToleranceScale = 1e3;

// ---------------------------------------------------------------------------
// Errors. Every failure the library reports derives from worldline::Error so
// callers can catch one type; the CLI maps the concrete type to an exit code.

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input: duplicate nodes, wrong dimensions, bad configuration.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// A time or parameter lies outside the declared interval or box.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A required capability (time derivative, analytic inverse) is missing.
class CapabilityError : public Error {
 public:
  using Error::Error;
};

/// Newton inversion of a k-point projection did not converge.
class InversionError : public Error {
 public:
  InversionError(const std::string& what, VectorXd last_iterate, double residual,
                 int iterations)
      : Error(what),
        last_iterate_(std::move(last_iterate)),
        residual_(residual),
        iterations_(iterations) {}

  const VectorXd& last_iterate() const noexcept { return last_iterate_; }
  double residual() const noexcept { return residual_; }
  int iterations() const noexcept { return iterations_; }

 private:
  VectorXd last_iterate_;
  double residual_;
  int iterations_;
};

/// The Newton iterate left the parameter box U.
class DomainEscapeError : public InversionError {
 public:
  using InversionError::InversionError;
};

/// The integrated state left the declared domain of the right-hand side.
class IntegrationEscapeError : public Error {
 public:
  IntegrationEscapeError(const std::string& what, double exit_time)
      : Error(what), exit_time_(exit_time) {}
  double exit_time() const noexcept { return exit_time_; }

 private:
  double exit_time_;
};

/// The integrated state became non-finite.
class BlowUpError : public IntegrationEscapeError {
 public:
  using IntegrationEscapeError::IntegrationEscapeError;
};

/// No chart above the minimum size passed the probe grid.
class LocalizationError : public Error {
 public:
  using Error::Error;
};

// ---------------------------------------------------------------------------

/// Open interval (lo, hi); either end may be infinite.
struct Interval {
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();

  bool contains(double t) const noexcept { return t > lo && t < hi; }
  double length() const noexcept { return hi - lo; }
  bool bounded() const noexcept { return std::isfinite(lo) && std::isfinite(hi); }
};

inline Interval make_interval(double lo, double hi) {
  if (!(lo < hi)) {
    throw ValidationError("interval requires lo < hi");
  }
  return Interval{lo, hi};
}

/// Box constraint on a parameter vector; open, possibly unbounded per
/// coordinate.
struct BoxDomain {
  VectorXd lower;
  VectorXd upper;

  static BoxDomain unbounded(Eigen::Index dim) {
    const double inf = std::numeric_limits<double>::infinity();
    return {VectorXd::Constant(dim, -inf), VectorXd::Constant(dim, inf)};
  }

  static BoxDomain around(const VectorXd& center, const VectorXd& half_widths) {
    return {center - half_widths, center + half_widths};
  }

  Eigen::Index dim() const noexcept { return lower.size(); }

  bool contains(const VectorXd& w) const {
    if (w.size() != lower.size()) return false;
    for (Eigen::Index i = 0; i < w.size(); ++i) {
      if (!(w[i] > lower[i] && w[i] < upper[i])) return false;
    }
    return true;
  }

  /// Center of the box, with unbounded coordinates mapped to zero or to the
  /// finite end shifted by one.
  VectorXd center() const {
    VectorXd c(lower.size());
    for (Eigen::Index i = 0; i < c.size(); ++i) {
      const bool lo = std::isfinite(lower[i]);
      const bool hi = std::isfinite(upper[i]);
      if (lo && hi) {
        c[i] = 0.5 * (lower[i] + upper[i]);
      } else if (lo) {
        c[i] = lower[i] + 1.0;
      } else if (hi) {
        c[i] = upper[i] - 1.0;
      } else {
        c[i] = 0.0;
      }
    }
    return c;
  }
};

/// Residual normalised so that values of magnitude above kToleranceScale are
/// compared relatively.
inline double scaled_residual(double residual, double magnitude) {
  return residual / std::max(1.0, magnitude / kToleranceScale);
}

}  // namespace worldline
