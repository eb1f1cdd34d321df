#pragma once

#include "worldline/core.hpp"
#include "worldline/rational.hpp"

#include <algorithm>
#include <sstream>
#include <utility>
#include <vector>

namespace worldline {

/// k distinct, strictly increasing time points. Floating-point sets also
/// enforce a minimum separation, since closer nodes make the k-point
/// projection numerically singular.
template <typename Scalar>
class BasicTimeSet {
 public:
  explicit BasicTimeSet(std::vector<Scalar> points,
                        double min_separation = kDefaultSeparation)
      : points_(std::move(points)) {
    if (points_.empty()) {
      throw ValidationError("time set must contain at least one point");
    }
    std::sort(points_.begin(), points_.end());
    for (std::size_t i = 1; i < points_.size(); ++i) {
      if (points_[i] == points_[i - 1]) {
        throw ValidationError("nodes not distinct");
      }
      if constexpr (!is_exact_v<Scalar>) {
        if (points_[i] - points_[i - 1] < min_separation) {
          std::ostringstream msg;
          msg << "nodes closer than minimum separation " << min_separation;
          throw ValidationError(msg.str());
        }
      }
    }
  }

  std::size_t size() const noexcept { return points_.size(); }
  const std::vector<Scalar>& points() const noexcept { return points_; }
  const Scalar& operator[](std::size_t i) const { return points_[i]; }
  auto begin() const noexcept { return points_.begin(); }
  auto end() const noexcept { return points_.end(); }

  bool inside(const Interval& interval) const {
    return std::all_of(points_.begin(), points_.end(), [&](const Scalar& t) {
      return interval.contains(to_double(t));
    });
  }

  void require_inside(const Interval& interval) const {
    if (!inside(interval)) {
      throw DomainError("time point outside the family interval");
    }
  }

  friend bool operator==(const BasicTimeSet& a, const BasicTimeSet& b) {
    return a.points_ == b.points_;
  }

 private:
  std::vector<Scalar> points_;
};

/// Finite map from k distinct times to n-vectors, stored in time order.
template <typename Scalar>
class BasicRestriction {
 public:
  struct Entry {
    Scalar t;
    Vec<Scalar> value;
  };

  explicit BasicRestriction(std::vector<Entry> entries,
                            double min_separation = kDefaultSeparation)
      : entries_(std::move(entries)) {
    if (entries_.empty()) {
      throw ValidationError("restriction must contain at least one entry");
    }
    std::sort(entries_.begin(), entries_.end(),
              [](const Entry& a, const Entry& b) { return a.t < b.t; });
    const auto n = entries_.front().value.size();
    if (n < 1) {
      throw ValidationError("restriction values must have dimension >= 1");
    }
    for (const auto& e : entries_) {
      if (e.value.size() != n) {
        throw ValidationError("restriction values have inconsistent dimension");
      }
    }
    // Validates distinctness and separation.
    (void)times(min_separation);
  }

  /// Convenience for scalar-valued data.
  static BasicRestriction scalar(const std::vector<std::pair<Scalar, Scalar>>& data,
                                 double min_separation = kDefaultSeparation) {
    std::vector<Entry> entries;
    entries.reserve(data.size());
    for (const auto& [t, v] : data) {
      Vec<Scalar> value(1);
      value[0] = v;
      entries.push_back({t, std::move(value)});
    }
    return BasicRestriction(std::move(entries), min_separation);
  }

  std::size_t size() const noexcept { return entries_.size(); }
  Eigen::Index dim() const noexcept { return entries_.front().value.size(); }
  const Entry& operator[](std::size_t i) const { return entries_[i]; }
  const std::vector<Entry>& entries() const noexcept { return entries_; }
  auto begin() const noexcept { return entries_.begin(); }
  auto end() const noexcept { return entries_.end(); }

  BasicTimeSet<Scalar> times(double min_separation = kDefaultSeparation) const {
    std::vector<Scalar> ts;
    ts.reserve(entries_.size());
    for (const auto& e : entries_) ts.push_back(e.t);
    return BasicTimeSet<Scalar>(std::move(ts), min_separation);
  }

  /// Largest absolute value component over all entries.
  double magnitude() const {
    double m = 0.0;
    for (const auto& e : entries_) {
      for (Eigen::Index j = 0; j < e.value.size(); ++j) {
        m = std::max(m, std::abs(to_double(e.value[j])));
      }
    }
    return m;
  }

 private:
  std::vector<Entry> entries_;
};

using TimeSet = BasicTimeSet<double>;
using Restriction = BasicRestriction<double>;
using ExactTimeSet = BasicTimeSet<Rational>;
using ExactRestriction = BasicRestriction<Rational>;

/// Restriction of a curve to the points of beta: {(t, x(t)) : t in beta}.
/// Works for any curve type exposing interval() and operator()(t).
template <typename Curve, typename Scalar>
BasicRestriction<Scalar> restrict(const Curve& x, const BasicTimeSet<Scalar>& beta) {
  beta.require_inside(x.interval());
  std::vector<typename BasicRestriction<Scalar>::Entry> entries;
  entries.reserve(beta.size());
  for (const auto& t : beta) {
    entries.push_back({t, x(t)});
  }
  return BasicRestriction<Scalar>(std::move(entries), 0.0);
}

}  // namespace worldline
