#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "helpers.hpp"
#include "liouville/config.hpp"
#include "liouville/errors.hpp"
#include "liouville/metric.hpp"

using namespace liouville;
using testing::rel;

namespace {

constexpr double kPi = std::numbers::pi;

PotentialSpec cosine(double mean, double amp) { return {mean, {{amp, 0.0}}}; }

MetricSpec liouville_metric(PotentialSpec u1, PotentialSpec u2) { return {std::move(u1), std::move(u2), MetricKind::liouville}; }

}  // namespace

TEST_CASE("eval of constants and single harmonics") {
  CHECK(eval(PotentialSpec::constant(2.0), 0.3, 0) == 2.0);
  CHECK(eval(cosine(3.0, 1.0), 0.0, 2) == doctest::Approx(-4 * kPi * kPi).epsilon(1e-14));
  const PotentialSpec s{1.0, {{0.0, 0.5}}};
  CHECK(eval(s, 0.75, 0) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(eval(s, 1.75, 0) == doctest::Approx(eval(s, 0.75, 0)).epsilon(1e-13));
}

TEST_CASE("derivatives agree with central differences") {
  const PotentialSpec p{0.7, {{0.3, -0.2}, {0.1, 0.05}, {-0.02, 0.04}}};
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> q(0.0, 1.0);
  const double h = 1e-5;
  for (int i = 0; i < 100; ++i) {
    const double x = q(rng);
    for (int k = 1; k <= 3; ++k) {
      const double fd = (eval(p, x + h, k - 1) - eval(p, x - h, k - 1)) / (2 * h);
      const double exact = eval(p, x, k);
      CHECK(std::abs(fd - exact) <= 1e-6 * std::max(1.0, std::abs(exact)));
    }
  }
}

TEST_CASE("critical constants of the sample metric") {
  const CriticalConstants cc = critical_constants(testing::sample());
  CHECK(cc.c1 == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(cc.c2 == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(cc.c3 == doctest::Approx(1.5).epsilon(1e-12));
  CHECK(cc.c4 == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(std::abs(cc.M1) < 1e-10);
  CHECK(cc.m2 == doctest::Approx(0.75).epsilon(1e-10));
  CHECK(cc.d2U1_M1 == doctest::Approx(-4 * kPi * kPi).epsilon(1e-10));
  CHECK(cc.d2U2_m2 == doctest::Approx(2 * kPi * kPi).epsilon(1e-10));
}

TEST_CASE("revolution constants have c3 = c4 = 0") {
  const CriticalConstants cc = critical_constants(testing::revolution());
  CHECK(cc.c1 == doctest::Approx(4.0));
  CHECK(cc.c2 == doctest::Approx(2.0));
  CHECK(cc.c3 == 0.0);
  CHECK(cc.c4 == 0.0);
}

TEST_CASE("critical constants are translation invariant") {
  const MetricSpec base = testing::sample();
  const CriticalConstants a = critical_constants(base);
  for (double dq : {0.2, 0.37, 0.91}) {
    const MetricSpec moved = liouville_metric(base.u1.translated(dq), base.u2.translated(-dq));
    const CriticalConstants b = critical_constants(moved);
    CHECK(std::abs(a.c1 - b.c1) < 1e-10);
    CHECK(std::abs(a.c2 - b.c2) < 1e-10);
    CHECK(std::abs(a.c3 - b.c3) < 1e-10);
    CHECK(std::abs(a.c4 - b.c4) < 1e-10);
    CHECK(std::abs(a.d2U1_M1 - b.d2U1_M1) < 1e-8);
    const double shifted = std::fmod(a.M1 + dq, 1.0);
    CHECK(std::min(std::abs(b.M1 - shifted), 1.0 - std::abs(b.M1 - shifted)) < 1e-10);
  }
  CHECK(critical_constants(liouville_metric(cosine(3.0, 1.0).translated(0.2), base.u2)).M1 ==
        doctest::Approx(0.2).epsilon(1e-10));
}

TEST_CASE("critical constants reject multiple or flat extrema") {
  const MetricSpec two_wells = liouville_metric({2.0, {{1.0, 0.0}, {1.0, 0.0}}}, PotentialSpec::constant(0.5));
  CHECK_THROWS_AS(critical_constants(two_wells), Error);
  try {
    critical_constants(two_wells);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::MultipleExtrema);
  }
  // a quartic-like extremum: cos(2 pi q) + cos(4 pi q)/4 has U'' = 0 at q = 1/2
  const MetricSpec flat_min = liouville_metric({3.0, {{1.0, 0.0}, {0.25, 0.0}}}, PotentialSpec::constant(0.5));
  try {
    critical_constants(flat_min);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DegenerateExtremum);
  }
}

TEST_CASE("validate_omega reports") {
  CHECK(validate_omega(testing::sample()).passed());

  const ValidationReport overlap = validate_omega(liouville_metric(cosine(3.0, 1.0), {2.5, {{0.0, 0.6}}}));
  CHECK_FALSE(overlap.passed());
  for (const auto& c : overlap.conditions) CHECK(c.passed == (c.index != 4));

  const ValidationReport wells =
      validate_omega(liouville_metric({2.0, {{1.0, 0.0}, {1.0, 0.0}}}, PotentialSpec::constant(0.5)));
  for (const auto& c : wells.conditions) CHECK(c.passed == (c.index != 3));

  const ValidationReport flat = validate_omega(testing::flat());
  REQUIRE(flat.conditions.size() == 4);
  for (const auto& c : flat.conditions) CHECK(c.passed == (c.index != 3));
}

TEST_CASE("two-minimum detection agrees with a dense sign-change count") {
  const PotentialSpec u1{2.0, {{1.0, 0.0}, {1.0, 0.0}}};
  int minima = 0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const double a = eval(u1, static_cast<double>(i) / n, 1), b = eval(u1, static_cast<double>(i + 1) / n, 1);
    if (a < 0 && b >= 0) ++minima;
  }
  CHECK(minima == 2);
  CHECK_FALSE(validate_omega(liouville_metric(u1, PotentialSpec::constant(0.5))).passed());
}

TEST_CASE("checked kinds refuse invalid potentials") {
  CHECK_NOTHROW(require_valid(testing::sample()));
  CHECK_NOTHROW(require_valid(testing::flat()));
  CHECK_THROWS_AS(require_valid(liouville_metric(cosine(3.0, 1.0), {2.5, {{0.0, 0.6}}})), Error);
  CHECK(min_conformal_factor(testing::sample()) == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("config round trip and strictness") {
  for (const char* name : {"sample", "flat", "revolution"}) {
    const MetricSpec m = testing::fixture(name);
    CHECK(parse_metric(dump_metric(m)) == m);
  }
  CHECK_THROWS_AS(parse_metric(R"({"kind": "liouville", "u1": {"mean": 3}, "extra": 1})"), Error);
  CHECK_THROWS_AS(parse_metric(R"({"kind": "liouville", "u1": {"mean": 3, "harmonic": []}})"), Error);
  CHECK_THROWS_AS(parse_metric(R"({"kind": "circle", "u1": {"mean": 3}})"), Error);
  CHECK_THROWS_AS(parse_metric("not json"), Error);
  const MetricSpec r = testing::revolution();
  CHECK(r.u2 == PotentialSpec{});
}
