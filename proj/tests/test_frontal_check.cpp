#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"
#include "worldline/frontal_check.hpp"
#include "worldline/frontal_embedding.hpp"
#include "worldline/harmonic.hpp"
#include "worldline/ode.hpp"
#include "worldline/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

using namespace worldline;

namespace {

VectorXd vec(std::initializer_list<double> xs) {
  VectorXd v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

// exp(w0 t) + w1 with no analytic time derivatives.
class Exponential final : public Family {
 public:
  std::string id() const override { return "exponential"; }
  int order() const override { return 2; }
  int dim() const override { return 1; }
  Interval interval() const override { return {-2.0, 2.0}; }
  VectorXd evaluate(double t, const VectorXd& w) const override {
    return VectorXd::Constant(1, std::exp(w[0] * t) + w[1]);
  }
};

const PolynomialFamily quadratic(3, 1);
const VectorXd t_squared = vec({0, 0, 1});

}  // namespace

TEST_CASE("Gauss-Legendre rule on [0, 1]") {
  const GaussLegendre rule(16);
  double sum = 0.0, moment = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    CHECK(rule.nodes[i] > 0.0);
    CHECK(rule.nodes[i] < 1.0);
    sum += rule.weights[i];
    moment += rule.weights[i] * std::pow(rule.nodes[i], 31);
  }
  CHECK(std::abs(sum - 1.0) <= 1e-14);
  CHECK(std::abs(moment - 1.0 / 32) <= 1e-14);
  CHECK_THROWS_AS(GaussLegendre(0), ValidationError);
}

TEST_CASE("k_closed examples") {
  CHECK(k_closed(quadratic, std::vector<double>{1.0, 3.0}, t_squared)[0] == doctest::Approx(4.0));
  CHECK(k_closed(quadratic, std::vector<double>{0.0, 1.0, 2.0}, t_squared)[0] ==
        doctest::Approx(1.0));
  const HarmonicFamily harmonic;
  const auto w = vec({0.3, -1.2});
  CHECK(k_closed(harmonic, std::vector<double>{0.4}, w) == harmonic.evaluate(0.4, w));
  CHECK_THROWS_AS(k_closed(quadratic, std::vector<double>{1.0, 1.0}, t_squared), ValidationError);
  CHECK_THROWS_AS(k_closed(harmonic, std::vector<double>{0.0, 2.0}, w), DomainError);
}

TEST_CASE("k_recursive examples") {
  CHECK(std::abs(k_recursive(quadratic, std::vector<double>{1.0, 3.0}, t_squared)[0] - 4.0) <=
        1e-10);
  CHECK(std::abs(k_recursive(quadratic, std::vector<double>{2.0, 2.0}, t_squared)[0] - 4.0) <=
        1e-12);
  // Fully confluent second difference is G'' / 2.
  CHECK(std::abs(k_recursive(quadratic, std::vector<double>{1.0, 1.0, 1.0}, t_squared)[0] - 1.0) <=
        1e-12);

  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> value(-2.0, 2.0);
  const HarmonicFamily harmonic;
  for (int trial = 0; trial < 50; ++trial) {
    const auto nodes = oracle::stratified_times(rng, -1.5, 1.5, 2);
    const auto w = vec({value(rng), value(rng)});
    CHECK((k_recursive(harmonic, nodes, w) - k_closed(harmonic, nodes, w)).norm() <= 1e-9);
  }
}

TEST_CASE("closed form and recursion agree across families") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> value(-1.0, 1.0);
  double worst = 0.0;

  const PolynomialFamily poly(5, 2, {-1.0, 1.0});
  const auto pendulum_rhs = make_catalog_rhs("pendulum", 2, 1);
  const OdeFamily pendulum(pendulum_rhs, make_chart(pendulum_rhs, 0.0, {-1.0, 1.0}));
  const Exponential exponential;

  for (int trial = 0; trial < 20; ++trial) {
    VectorXd w(10);
    for (auto& x : w) x = value(rng);
    for (int i = 1; i <= 5; ++i) {
      const auto nodes = oracle::stratified_times(rng, -1.0, 1.0, i);
      worst = std::max(worst, (k_recursive(poly, nodes, w) - k_closed(poly, nodes, w)).norm());
    }
    const auto wp = vec({value(rng), value(rng)});
    for (int i = 1; i <= 3; ++i) {
      const auto nodes = oracle::stratified_times(rng, -1.0, 1.0, i);
      worst = std::max(worst,
                       (k_recursive(pendulum, nodes, wp) - k_closed(pendulum, nodes, wp)).norm());
    }
    // Finite-difference derivatives only; first differences stay accurate.
    const auto nodes = oracle::stratified_times(rng, -1.0, 1.0, 2);
    worst = std::max(worst, (k_recursive(exponential, nodes, wp) -
                             k_closed(exponential, nodes, wp))
                                .norm());
  }
  CHECK(worst <= 1e-8);
}

TEST_CASE("k_closed is symmetric in its nodes") {
  const PolynomialFamily poly(4, 1);
  const auto w = vec({0.5, -1, 2, 0.25});
  std::vector<double> nodes{-0.7, 0.1, 0.4, 1.3};
  const auto reference = k_closed(poly, nodes, w);
  std::sort(nodes.begin(), nodes.end());
  do {
    CHECK((k_closed(poly, nodes, w) - reference).norm() <= 1e-13);
  } while (std::next_permutation(nodes.begin(), nodes.end()));
}

TEST_CASE("k_recursive tends to dG/dt as nodes merge") {
  const HarmonicFamily harmonic;
  const auto w = vec({0.8, 0.6});
  const double t = 0.3;
  const double slope = harmonic.analytic_time_derivative(t, w, 1)[0];
  std::vector<double> errors;
  for (double eps : {1e-2, 1e-3, 1e-4}) {
    errors.push_back(std::abs(k_recursive(harmonic, std::vector<double>{t, t + eps}, w)[0] - slope));
  }
  // First-order convergence: one decade of eps buys one decade of error.
  for (std::size_t i = 1; i < errors.size(); ++i) {
    CHECK(errors[i - 1] / errors[i] == doctest::Approx(10.0).epsilon(0.05));
  }
  CHECK(errors.back() <= 1e-4);
}

TEST_CASE("missing derivatives") {
  const Exponential family;
  RecursionSettings settings;
  settings.allow_finite_difference = false;
  CHECK_THROWS_AS(k_recursive(family, std::vector<double>{0.1, 0.2}, vec({1, 0}), settings),
                  CapabilityError);
  CHECK_THROWS_AS(lemma_jacobian(family, 0.1, vec({1, 0}), kCertificateThreshold, false),
                  CapabilityError);
  CHECK_NOTHROW(k_recursive(family, std::vector<double>{0.1}, vec({1, 0}), settings));
}

TEST_CASE("lemma_jacobian examples") {
  SUBCASE("harmonic family has J = 1 everywhere") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> time(-1.5, 1.5);
    std::uniform_real_distribution<double> value(-2.0, 2.0);
    const HarmonicFamily harmonic;
    for (int i = 0; i < 20; ++i) {
      const auto cert = lemma_jacobian(harmonic, time(rng), vec({value(rng), value(rng)}));
      CHECK(std::abs(cert.jacobian - 1.0) <= 1e-6);
      CHECK(cert.certified);
    }
  }
  SUBCASE("quadratic family has J = 0! 1! 2!") {
    const auto cert = lemma_jacobian(quadratic, 0.7, vec({1, 2, 3}));
    CHECK(std::abs(cert.jacobian - 2.0) <= 1e-6);
    CHECK(cert.matrix.rows() == 4);
  }
  SUBCASE("ODE family at its anchor") {
    const auto rhs = make_catalog_rhs("harmonic", 2, 1);
    const OdeFamily family(rhs, make_chart(rhs, 0.0, {-1.0, 1.0}));
    CHECK(std::abs(lemma_jacobian(family, 0.0, vec({1, 0})).jacobian - 1.0) <= 1e-4);
  }
  SUBCASE("degenerate family is refused") {
    const ConstantFamily degenerate(2, 1);
    const auto cert = lemma_jacobian(degenerate, 0.0, vec({1, 2}));
    CHECK(cert.jacobian == 0.0);
    CHECK_FALSE(cert.certified);
  }
}

TEST_CASE("certified points invert near their anchor") {
  const auto pendulum_rhs = make_catalog_rhs("pendulum", 2, 1);
  const auto damped_rhs = make_catalog_rhs("damped", 2, 1, {{"c", 0.3}});
  const std::vector<FamilyPtr> families{
      std::make_shared<HarmonicFamily>(),
      std::make_shared<PolynomialFamily>(3, 2),
      std::make_shared<OdeFamily>(pendulum_rhs, make_chart(pendulum_rhs, 0.2, {-1.0, 1.5})),
      std::make_shared<OdeFamily>(damped_rhs, make_chart(damped_rhs, 0.2, {-1.0, 1.5})),
  };
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> value(-1.0, 1.0);
  for (const auto& family : families) {
    const double t0 = 0.2;
    VectorXd w0(family->parameter_dim());
    for (auto& x : w0) x = value(rng);
    const auto cert = lemma_jacobian(*family, t0, w0);
    REQUIRE(cert.certified);
    for (int draw = 0; draw < 5; ++draw) {
      const TimeSet beta(oracle::stratified_times(rng, t0 - 0.2, t0 + 0.2, family->order()));
      const auto a = omega_beta(*family, w0, beta);
      const auto r = invert_omega_beta(*family, a);
      CHECK((r.w - w0).norm() <= 1e-6 * std::max(1.0, w0.norm()));
    }
  }
}
