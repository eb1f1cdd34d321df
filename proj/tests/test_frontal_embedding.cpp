#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"
#include "worldline/frontal_embedding.hpp"
#include "worldline/harmonic.hpp"
#include "worldline/newton.hpp"
#include "worldline/ode.hpp"
#include "worldline/polynomial.hpp"

#include <numbers>
#include <random>

using namespace worldline;
using doctest::Approx;

namespace {

VectorXd vec(std::initializer_list<double> xs) {
  VectorXd v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

FamilyPtr ode_family(const std::string& rhs, Interval I) {
  const auto f = make_catalog_rhs(rhs, 2, 1);
  return std::make_shared<OdeFamily>(f, make_chart(f, 0.0, I));
}

}  // namespace

TEST_CASE("omega evaluates G(t, w)") {
  SUBCASE("polynomial 3 + 2t") {
    const auto x = omega(std::make_shared<PolynomialFamily>(2, 1), vec({3, 2}));
    CHECK(x(0.0)[0] == 3.0);
    CHECK(x(4.0)[0] == 11.0);
  }
  SUBCASE("harmonic (1, 0) is cos t") {
    const auto x = omega(std::make_shared<HarmonicFamily>(), vec({1, 0}));
    CHECK(x(0.3)[0] == Approx(std::cos(0.3)).epsilon(1e-15));
  }
  SUBCASE("ODE x'' = -x from (1, 0) reaches cos 1") {
    const auto x = omega(ode_family("harmonic", {-1.5, 1.5}), vec({1, 0}));
    CHECK(std::abs(x(1.0)[0] - oracle::harmonic_solution(0, 1, 0, 1.0)) <= 1e-10);
  }
  SUBCASE("w outside U is a domain error") {
    const auto f = make_catalog_rhs("harmonic", 2, 1);
    LocalChart chart{0.0, {-1, 1}, BoxDomain::around(vec({0, 0}), vec({1, 1})), kDefaultStep};
    CHECK_THROWS_AS(omega(std::make_shared<OdeFamily>(f, chart), vec({2, 0})), DomainError);
  }
}

TEST_CASE("omega_beta samples k points") {
  SUBCASE("identity line on {2, 5}") {
    const auto a = omega_beta(PolynomialFamily(2, 1), vec({0, 1}), TimeSet({2.0, 5.0}));
    CHECK(a[0].value[0] == 2.0);
    CHECK(a[1].value[0] == 5.0);
  }
  SUBCASE("sin t on {0, pi/6}") {
    const auto a = omega_beta(HarmonicFamily(), vec({0, 1}), TimeSet({0.0, std::numbers::pi / 6}));
    CHECK(a[0].value[0] == 0.0);
    CHECK(a[1].value[0] == Approx(0.5).epsilon(1e-15));
  }
  SUBCASE("t^2 on {0, 1, 2}") {
    const auto a = omega_beta(PolynomialFamily(3, 1), vec({0, 0, 1}), TimeSet({0.0, 1.0, 2.0}));
    CHECK(a[0].value[0] == 0.0);
    CHECK(a[1].value[0] == 1.0);
    CHECK(a[2].value[0] == 4.0);
  }
}

TEST_CASE("invert_omega_beta on the worked examples") {
  SUBCASE("polynomial through (0, 3), (1, 5)") {
    const auto a = Restriction::scalar({{0.0, 3.0}, {1.0, 5.0}});
    const VectorXd expected = oracle::vandermonde_coefficients({0, 1}, {3, 5});
    const auto r = invert_omega_beta(PolynomialFamily(2, 1), a);
    CHECK(r.analytic);
    CHECK((r.w - expected).norm() <= 1e-14);
    CHECK(r.w[0] == Approx(3.0));
    CHECK(r.w[1] == Approx(2.0));
  }
  SUBCASE("harmonic through (0, 1), (pi/4, sqrt2/2)") {
    const auto a = Restriction::scalar({{0.0, 1.0}, {std::numbers::pi / 4, std::sqrt(2.0) / 2}});
    const auto expected = oracle::harmonic_parameters(0.0, 1.0, std::numbers::pi / 4, std::sqrt(2.0) / 2);
    const auto r = invert_omega_beta(HarmonicFamily(), a);
    CHECK((r.w - expected).norm() <= 1e-14);
    CHECK(r.w[0] == Approx(1.0));
    CHECK(std::abs(r.w[1]) <= 1e-15);
  }
  SUBCASE("ODE x'' = 0 through (0, 0), (1, 1)") {
    const auto family = ode_family("free", {-2, 2});
    const auto r = invert_omega_beta(*family, Restriction::scalar({{0.0, 0.0}, {1.0, 1.0}}));
    CHECK_FALSE(r.analytic);
    CHECK(std::abs(r.w[0]) <= 1e-9);
    CHECK(std::abs(r.w[1] - 1.0) <= 1e-9);
  }
  SUBCASE("wrong number of entries") {
    CHECK_THROWS_AS(invert_omega_beta(PolynomialFamily(3, 1), Restriction::scalar({{0.0, 0.0}})),
                    ValidationError);
  }
  SUBCASE("times outside I") {
    CHECK_THROWS_AS(invert_omega_beta(HarmonicFamily(), Restriction::scalar({{0.0, 0.0}, {2.0, 1.0}})),
                    DomainError);
  }
}

namespace {

/// G(t, w) = w_0^2 + w_1 t: values below w_1 t are unreachable.
class SquareOffset final : public Family {
 public:
  std::string id() const override { return "square-offset"; }
  int order() const override { return 2; }
  int dim() const override { return 1; }
  Interval interval() const override { return {}; }
  VectorXd evaluate(double t, const VectorXd& w) const override {
    return VectorXd::Constant(1, w[0] * w[0] + w[1] * t);
  }
  VectorXd default_parameter() const override { return vec({1.0, 0.0}); }
};

}  // namespace

TEST_CASE("Newton inversion failure carries the last iterate and residual") {
  const auto a = Restriction::scalar({{0.0, -1.0}, {1.0, -1.0}});
  try {
    (void)invert_omega_beta(SquareOffset(), a);
    FAIL("expected an inversion error");
  } catch (const InversionError& e) {
    CHECK(e.residual() >= 0.5);
    CHECK(e.last_iterate().size() == 2);
  }
}

TEST_CASE("solutions escaping U are reported") {
  const auto f = make_catalog_rhs("free", 2, 1);
  LocalChart chart{0.0, {-1, 1}, BoxDomain::around(vec({0, 0}), vec({0.5, 0.5})), kDefaultStep};
  const OdeFamily family(f, chart);
  // The line through these points has slope 2, outside the box.
  const auto a = Restriction::scalar({{-0.5, -1.0}, {0.5, 1.0}});
  CHECK_THROWS_AS(invert_omega_beta(family, a), DomainEscapeError);
}

TEST_CASE("flow_apply on the worked examples") {
  SUBCASE("identity line at t = 7") {
    const FlowMap flow(std::make_shared<PolynomialFamily>(2, 1));
    CHECK(flow_apply(flow, Restriction::scalar({{0.0, 0.0}, {1.0, 1.0}}), 7.0)[0] ==
          Approx(7.0).epsilon(1e-14));
  }
  SUBCASE("quadratic through (0,0), (1,1), (2,4) at t = 3") {
    const FlowMap flow(std::make_shared<PolynomialFamily>(3, 1));
    CHECK(flow_apply(flow, Restriction::scalar({{0.0, 0.0}, {1.0, 1.0}, {2.0, 4.0}}), 3.0)[0] ==
          Approx(9.0).epsilon(1e-14));
  }
  SUBCASE("harmonic cos t at pi/3") {
    const FlowMap flow(std::make_shared<HarmonicFamily>());
    const auto a = Restriction::scalar({{0.0, 1.0}, {std::numbers::pi / 4, std::sqrt(2.0) / 2}});
    CHECK(flow_apply(flow, a, std::numbers::pi / 3)[0] == Approx(0.5).epsilon(1e-14));
  }
}

TEST_CASE("round trip: inverting omega_beta recovers w") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> coef(-2.0, 2.0);
  SUBCASE("polynomial k = 4, n = 2") {
    const PolynomialFamily family(4, 2);
    for (int trial = 0; trial < 50; ++trial) {
      VectorXd w(8);
      for (auto& x : w) x = coef(rng);
      const TimeSet beta(oracle::stratified_times(rng, -1.0, 1.0, 4));
      const auto r = invert_omega_beta(family, omega_beta(family, w, beta));
      CHECK((r.w - w).lpNorm<Eigen::Infinity>() <= 1e-10);
    }
  }
  SUBCASE("harmonic") {
    const HarmonicFamily family;
    for (int trial = 0; trial < 50; ++trial) {
      const VectorXd w = vec({coef(rng), coef(rng)});
      const TimeSet beta(oracle::stratified_times(rng, -1.5, 1.5, 2));
      const auto r = invert_omega_beta(family, omega_beta(family, w, beta));
      CHECK((r.w - w).lpNorm<Eigen::Infinity>() <= 1e-10);
    }
  }
  SUBCASE("ODE pendulum on a short interval") {
    const auto family = ode_family("pendulum", {-0.8, 0.8});
    for (int trial = 0; trial < 10; ++trial) {
      const VectorXd w = vec({0.5 * coef(rng), 0.5 * coef(rng)});
      const TimeSet beta(oracle::stratified_times(rng, -0.8, 0.8, 2));
      const auto r = invert_omega_beta(*family, omega_beta(*family, w, beta));
      CHECK((r.w - w).lpNorm<Eigen::Infinity>() <= 1e-7);
    }
  }
}

TEST_CASE("analytic and Newton inversions agree") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> value(-3.0, 3.0);
  InversionSettings newton_only;
  newton_only.force_newton = true;
  SUBCASE("polynomial k = 3") {
    const PolynomialFamily family(3, 1);
    for (int trial = 0; trial < 30; ++trial) {
      const auto ts = oracle::stratified_times(rng, -1.0, 1.0, 3);
      const auto a = Restriction::scalar({{ts[0], value(rng)}, {ts[1], value(rng)}, {ts[2], value(rng)}});
      const auto analytic = invert_omega_beta(family, a);
      const auto newton = invert_omega_beta(family, a, VectorXd(VectorXd::Zero(3)), newton_only);
      CHECK(analytic.analytic);
      CHECK_FALSE(newton.analytic);
      CHECK((analytic.w - newton.w).lpNorm<Eigen::Infinity>() <= 1e-7);
    }
  }
  SUBCASE("harmonic") {
    const HarmonicFamily family;
    for (int trial = 0; trial < 30; ++trial) {
      const auto ts = oracle::stratified_times(rng, -1.5, 1.5, 2);
      const auto a = Restriction::scalar({{ts[0], value(rng)}, {ts[1], value(rng)}});
      const auto analytic = invert_omega_beta(family, a);
      const auto newton = invert_omega_beta(family, a, std::nullopt, newton_only);
      CHECK((analytic.w - newton.w).lpNorm<Eigen::Infinity>() <= 1e-7);
    }
  }
}

TEST_CASE("re-anchoring invariance of the flow") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> value(-1.0, 1.0);
  const FlowMap flow(ode_family("damped", {-1.0, 1.0}));
  for (int trial = 0; trial < 10; ++trial) {
    const auto ts = oracle::stratified_times(rng, -1.0, 1.0, 2);
    const auto a = Restriction::scalar({{ts[0], value(rng)}, {ts[1], value(rng)}});
    const auto x = flow.flow(a);
    const auto y = flow.flow(restrict(x, TimeSet(oracle::stratified_times(rng, -1.0, 1.0, 2))));
    for (double t : {-0.9, -0.3, 0.2, 0.8}) CHECK(std::abs(x(t)[0] - y(t)[0]) <= 1e-8);
  }
}

TEST_CASE("damped Newton solves a small nonlinear system") {
  // x^2 + y^2 = 4, x y = 1 near (2, 0.5).
  const ResidualFunction f = [](const VectorXd& v) {
    return vec({v[0] * v[0] + v[1] * v[1] - 4.0, v[0] * v[1] - 1.0});
  };
  const auto r = damped_newton(f, vec({2.0, 0.5}), BoxDomain::unbounded(2), 1.0);
  REQUIRE(r.converged());
  CHECK(f(r.x).lpNorm<Eigen::Infinity>() <= 1e-10);
  CHECK(r.x[0] * r.x[1] == Approx(1.0));
}
