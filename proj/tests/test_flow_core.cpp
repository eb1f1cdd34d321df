#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"
#include "worldline/flow_core.hpp"
#include "worldline/frontal_embedding.hpp"
#include "worldline/harmonic.hpp"
#include "worldline/polynomial.hpp"

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

std::vector<double> linspace(double lo, double hi, int count) {
  std::vector<double> out;
  for (int i = 0; i < count; ++i) out.push_back(lo + (hi - lo) * i / (count - 1));
  return out;
}

}  // namespace

TEST_CASE("time sets are sorted and reject near-coincident points") {
  const TimeSet beta({2.0, -1.0, 0.5});
  CHECK(beta.points() == std::vector<double>{-1.0, 0.5, 2.0});
  CHECK_THROWS_AS(TimeSet({1.0, 1.0}), ValidationError);
  CHECK_THROWS_AS(TimeSet({1.0, 1.0 + 1e-9}), ValidationError);
  CHECK_NOTHROW(TimeSet({1.0, 1.0 + 1e-9}, 1e-10));
  CHECK_THROWS_AS(TimeSet(std::vector<double>{}), ValidationError);
}

TEST_CASE("restrictions validate dimensions and distinct nodes") {
  CHECK_THROWS_WITH_AS(Restriction::scalar({{0.0, 1.0}, {0.0, 2.0}}), "nodes not distinct",
                       ValidationError);
  CHECK_THROWS_AS(Restriction({{0.0, vec({1.0})}, {1.0, vec({1.0, 2.0})}}), ValidationError);
  const auto a = Restriction::scalar({{1.0, 5.0}, {0.0, 3.0}});
  CHECK(a[0].t == 0.0);
  CHECK(a[1].value[0] == 5.0);
}

TEST_CASE("restrict samples a worldline on beta") {
  SUBCASE("t^2 on {0, 1}") {
    auto family = std::make_shared<PolynomialFamily>(3, 1);
    const auto a = restrict(omega(family, vec({0, 0, 1})), TimeSet({0.0, 1.0}));
    REQUIRE(a.size() == 2);
    CHECK(a[0].value[0] == 0.0);
    CHECK(a[1].value[0] == 1.0);
  }
  SUBCASE("3 + 2t on {2, 5}") {
    auto family = std::make_shared<PolynomialFamily>(2, 1);
    const auto a = restrict(omega(family, vec({3, 2})), TimeSet({2.0, 5.0}));
    CHECK(a[0].value[0] == 7.0);
    CHECK(a[1].value[0] == 13.0);
  }
  SUBCASE("cos t at 0") {
    auto family = std::make_shared<HarmonicFamily>();
    const auto a = restrict(omega(family, vec({1, 0})), TimeSet({0.0}));
    CHECK(a[0].value[0] == 1.0);
  }
  SUBCASE("times outside the interval are a domain error") {
    auto family = std::make_shared<HarmonicFamily>();
    CHECK_THROWS_AS(restrict(omega(family, vec({1, 0})), TimeSet({0.0, 2.0})), DomainError);
  }
}

TEST_CASE("flow axioms hold for the floating polynomial flow") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> value(-1.0, 1.0);
  const FlowMap flow(std::make_shared<PolynomialFamily>(2, 1));
  std::vector<Restriction> as;
  std::vector<TimeSet> betas;
  for (int i = 0; i < 100; ++i) {
    const auto ts = oracle::stratified_times(rng, -1.0, 1.0, 2);
    as.push_back(Restriction::scalar({{ts[0], value(rng)}, {ts[1], value(rng)}}));
    betas.emplace_back(oracle::stratified_times(rng, -1.0, 1.0, 2));
  }
  const auto report = verify_flow_axioms(flow, as, betas, linspace(-1.0, 1.0, 9));
  CHECK(report.passed());
  CHECK(report.samples_tested == 100);
  CHECK(report.max_residual_consistency <= 1e-10);
  CHECK(report.max_residual_restriction <= 1e-10);
}

TEST_CASE("flow axioms for the harmonic flow through cos t") {
  const FlowMap flow(std::make_shared<HarmonicFamily>());
  const auto a = Restriction::scalar({{0.0, 1.0}, {std::numbers::pi / 4, std::sqrt(2.0) / 2}});
  std::vector<Restriction> as(3, a);
  std::vector<TimeSet> betas{TimeSet({-1.2, 0.3}), TimeSet({-0.1, 1.5}), TimeSet({0.7, 0.71})};
  const auto report = verify_flow_axioms(flow, as, betas, linspace(-1.5, 1.5, 13));
  CHECK(report.passed());
  CHECK(report.max_residual_consistency <= 1e-14);
}

TEST_CASE("re-anchoring at dom a gives zero consistency residual") {
  const FlowMap flow(std::make_shared<PolynomialFamily>(3, 1));
  const auto a = Restriction::scalar({{0.0, 0.3}, {0.5, -1.0}, {1.0, 2.0}});
  const auto report = verify_flow_axioms(flow, std::vector<Restriction>{a},
                                         std::vector<TimeSet>{a.times()},
                                         std::vector<double>{0.25});
  CHECK(report.max_residual_consistency == 0.0);
}

TEST_CASE("inversion failures are flagged per sample") {
  // The constant family cannot be inverted from two points with different
  // values; the sweep must continue and record the failure.
  class Flat final : public Family {
   public:
    std::string id() const override { return "flat"; }
    int order() const override { return 2; }
    int dim() const override { return 1; }
    Interval interval() const override { return {}; }
    VectorXd evaluate(double, const VectorXd& w) const override { return w.head(1); }
  };
  InversionSettings settings;
  settings.newton.max_iterations = 10;
  const FlowMap flow(std::make_shared<Flat>(), settings);
  std::vector<Restriction> as{Restriction::scalar({{0.0, 1.0}, {1.0, 1.0}}),
                              Restriction::scalar({{0.0, 0.0}, {1.0, 1.0}})};
  std::vector<TimeSet> betas{TimeSet({0.2, 0.4}), TimeSet({0.2, 0.4})};
  const auto report = verify_flow_axioms(flow, as, betas, std::vector<double>{0.5});
  CHECK_FALSE(report.passed());
  REQUIRE(report.failures.size() == 1);
  CHECK(report.failures[0].sample == 1);
  CHECK(report.samples_tested == 2);
}

TEST_CASE("exact polynomial flow satisfies the axioms with zero residual") {
  const ExactPolynomialFlow flow(3, 1);
  std::vector<ExactRestriction> as{ExactRestriction::scalar(
      {{Rational(0), Rational(1, 3)}, {Rational(1, 2), Rational(-2)}, {Rational(5, 4), Rational(7)}})};
  std::vector<ExactTimeSet> betas{ExactTimeSet({Rational(-3), Rational(1, 7), Rational(9, 2)})};
  const auto report =
      verify_flow_axioms(flow, as, betas, std::vector<Rational>{Rational(11, 3), Rational(-5)});
  CHECK(report.max_residual_consistency == 0.0);
  CHECK(report.max_residual_restriction == 0.0);
}

TEST_CASE("intersection count on a grid") {
  SUBCASE("t and 2 - t cross once") {
    auto family = std::make_shared<PolynomialFamily>(2, 1);
    const auto r = intersection_count(omega(family, vec({0, 1})), omega(family, vec({2, -1})),
                                      linspace(-1.0, 3.0, 41));
    REQUIRE(r.count);
    CHECK(*r.count == 1);
    CHECK(r.consistent);
  }
  SUBCASE("identical parameters") {
    auto family = std::make_shared<PolynomialFamily>(2, 1);
    const auto r = intersection_count(omega(family, vec({1, 1})), omega(family, vec({1, 1})),
                                      linspace(0.0, 1.0, 5));
    CHECK(r.identical);
    CHECK_FALSE(r.count.has_value());
    CHECK(r.consistent);
  }
  SUBCASE("sin and cos cross once on (-pi/2, pi/2)") {
    auto family = std::make_shared<HarmonicFamily>();
    const auto r = intersection_count(omega(family, vec({0, 1})), omega(family, vec({1, 0})),
                                      linspace(-1.57, 1.57, 200));
    REQUIRE(r.count);
    CHECK(*r.count == 1);
    CHECK(r.consistent);
  }
  SUBCASE("mixed families are rejected") {
    auto p = std::make_shared<PolynomialFamily>(2, 1);
    auto h = std::make_shared<HarmonicFamily>();
    CHECK_THROWS_AS(intersection_count(omega(p, vec({0, 1})), omega(h, vec({0, 1})),
                                       linspace(0.0, 1.0, 5)),
                    ValidationError);
  }
}

TEST_CASE("exact intersection count counts shared real roots") {
  using W = PolynomialWorldline<Rational>;
  auto scalar_poly = [](std::vector<int> cs) {
    std::vector<Vec<Rational>> blocks;
    for (int c : cs) blocks.push_back(Vec<Rational>::Constant(1, Rational(c)));
    return W(blocks);
  };
  SUBCASE("t^2 - 1 vs 0 has two roots, consistent for k = 3") {
    const auto r = intersection_count(scalar_poly({-1, 0, 1}), scalar_poly({0, 0, 0}));
    REQUIRE(r.count);
    CHECK(*r.count == 2);
    CHECK(r.consistent);
  }
  SUBCASE("t^2 + 1 has no real roots") {
    const auto r = intersection_count(scalar_poly({1, 0, 1}), scalar_poly({0, 0, 0}));
    CHECK(*r.count == 0);
  }
  SUBCASE("double root counted once") {
    const auto r = intersection_count(scalar_poly({1, -2, 1}), scalar_poly({0, 0, 0}));
    CHECK(*r.count == 1);
  }
  SUBCASE("vector values intersect only at common roots") {
    // (t^2 - 1, t - 1) vanishes together only at t = 1.
    std::vector<Vec<Rational>> c(3, Vec<Rational>::Zero(2));
    c[0] << Rational(-1), Rational(-1);
    c[1] << Rational(0), Rational(1);
    c[2] << Rational(1), Rational(0);
    const W x1(c);
    const W x2(std::vector<Vec<Rational>>(3, Vec<Rational>::Zero(2)));
    CHECK(*intersection_count(x1, x2).count == 1);
  }
  SUBCASE("interval restricts the count") {
    std::vector<Vec<Rational>> blocks;
    for (int c : {-1, 0, 1}) blocks.push_back(Vec<Rational>::Constant(1, Rational(c)));
    const W x1(blocks, Interval{0.0, 2.0});
    const W x2(std::vector<Vec<Rational>>(3, Vec<Rational>::Zero(1)), Interval{0.0, 2.0});
    CHECK(*intersection_count(x1, x2).count == 1);
    const W y1(blocks, Interval{-1.0, 1.0});
    const W y2(std::vector<Vec<Rational>>(3, Vec<Rational>::Zero(1)), Interval{-1.0, 1.0});
    CHECK(*intersection_count(y1, y2).count == 0);
  }
}
