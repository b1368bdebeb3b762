#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "helpers.hpp"
#include "liouville/diophantine.hpp"

using namespace liouville;
using testing::code_of;

namespace {

const double kPhi = std::numbers::phi;

// Brute-force ||x|| for moderate arguments.
double dist_int(long double x) { return static_cast<double>(std::fabs(x - std::nearbyint(x))); }

// sigma(t) = floor(t) - t + 1/2 summed directly in long double.
double sigma_oracle(double alpha, double beta, long r) {
  long double s = 0;
  for (long k = 1; k <= r; ++k) {
    const long double t = static_cast<long double>(alpha) * k + beta;
    s += std::floor(t) - t + 0.5L;
  }
  return static_cast<double>(s);
}

}  // namespace

TEST_CASE("continued fraction examples") {
  const ContinuedFraction g = continued_fraction(kPhi, 5);
  REQUIRE(g.partial_quotients.size() == 6);
  for (const auto& a : g.partial_quotients) CHECK(a == 1);
  const std::vector<int> q{1, 1, 2, 3, 5, 8};
  for (std::size_t i = 0; i < q.size(); ++i) CHECK(g.denominators[i] == q[i]);

  const ContinuedFraction s = continued_fraction(std::sqrt(2.0), 4);
  CHECK(s.partial_quotients[0] == 1);
  for (std::size_t i = 1; i < 5; ++i) CHECK(s.partial_quotients[i] == 2);
}

TEST_CASE("convergents bracket the source value") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int t = 0; t < 50; ++t) {
    const double alpha = u(rng);
    const ContinuedFraction cf = continued_fraction(alpha, 12);
    for (std::size_t n = 0; n + 1 < cf.denominators.size(); ++n) {
      const long double P = cf.numerators[n].convert_to<long double>();
      const long double Q = cf.denominators[n].convert_to<long double>();
      const long double Q1 = cf.denominators[n + 1].convert_to<long double>();
      // a double carries about 1e-16 of alpha, so deeper convergents are not checkable
      if (Q * Q1 > 1e12L) break;
      CHECK(std::fabs(alpha * Q - P) * Q1 < 1.0L);
      if (n >= 1) {
        CHECK(cf.denominators[n + 1] ==
              cf.partial_quotients[n + 1] * cf.denominators[n] + cf.denominators[n - 1]);
      }
    }
  }
  CHECK(code_of([] { continued_fraction(0.5, 5); }) == ErrorCode::PrecisionExhausted);
  CHECK(code_of([] { continued_fraction(kPhi, 41); }) == ErrorCode::OutOfRange);
}

TEST_CASE("typicality scan matches brute force") {
  for (double alpha : {kPhi, std::sqrt(2.0), 0.123456789}) {
    const auto rep = typicality_test(alpha, 2.0, 2000);
    double best = 1e300;
    long arg = 0;
    for (long k = 1; k <= 2000; ++k) {
      const double v = dist_int(static_cast<long double>(alpha) * k) * k * std::pow(std::log1p(k), 2.0);
      if (v < best) best = v, arg = k;
    }
    CHECK(rep.delta_est == doctest::Approx(best).epsilon(1e-9));
    CHECK(rep.worst_pair.second == arg);
    CHECK(rep.kmax == 2000);
  }
}

TEST_CASE("golden ratio scan at tau 1") {
  const auto rep = typicality_test(kPhi, 1.0, 1000000);
  // the minimum sits at k = 1 where ||phi|| = 2 - phi
  CHECK(rep.worst_pair.second == 1);
  CHECK(rep.delta_est == doctest::Approx((2.0 - kPhi) * std::log(2.0)).epsilon(1e-12));
  CHECK(rep.passed);
}

TEST_CASE("rationals fail") {
  const auto rep = typicality_test(0.5, 2.0, 100);
  CHECK(rep.delta_est == 0.0);
  CHECK(rep.worst_pair.second == 2);
  CHECK_FALSE(rep.passed);
}

TEST_CASE("typicality is non-increasing in kmax") {
  for (double alpha : {kPhi, std::sqrt(3.0) - 1, 0.7071}) {
    double prev = 1e300;
    for (std::int64_t k : {1, 10, 100, 1000, 10000, 100000}) {
      const double d = typicality_test(alpha, 2.0, k).delta_est;
      CHECK(d <= prev);
      prev = d;
    }
  }
}

TEST_CASE("random numbers are typical") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int passed = 0;
  for (int i = 0; i < 100; ++i) passed += typicality_test(u(rng), 2.0, 100000, 1e-6).passed ? 1 : 0;
  CHECK(passed >= 95);
}

TEST_CASE("pathological construction") {
  const ContinuedFraction cf = pathological_alpha(1.0, 3);
  const std::vector<int> a{0, 2, 5, 122}, q{1, 2, 11, 1344};
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(cf.partial_quotients[i] == a[i]);
    CHECK(cf.denominators[i] == q[i]);
  }
  const ContinuedFraction deep = pathological_alpha(10.0, 6);
  for (std::size_t n = 1; n + 1 < deep.partial_quotients.size(); ++n) {
    const BigInt Q = deep.denominators[n];
    CHECK(deep.partial_quotients[n + 1] > 10 * Q * Q);
  }
  CHECK(code_of([] { pathological_alpha(1.0, 13); }) == ErrorCode::OutOfRange);
  CHECK(code_of([] { pathological_alpha(1e30, 12); }) == ErrorCode::Overflow);
}

TEST_CASE("pathological numbers fail typicality") {
  const ContinuedFraction cf = pathological_alpha(10.0, 6);
  const std::int64_t q2 = cf.denominators[2].convert_to<std::int64_t>();
  const std::int64_t q3 = cf.denominators[3].convert_to<std::int64_t>();
  CHECK(typicality_test(cf, 2.0, q2 - 1).delta_est > typicality_test(cf, 2.0, q2).delta_est);
  CHECK_FALSE(typicality_test(cf, 2.0, q3).passed);
  CHECK(typicality_test(cf, 2.0, q3).worst_pair.second == q3);
}

// The three cases below state the documented examples literally. Each is
// contradicted by its own oracle and is kept as an expected failure.

TEST_CASE("documented: pathological C=10 fails already at Q2" * doctest::should_fail()) {
  const ContinuedFraction cf = pathological_alpha(10.0, 6);
  // ||Q2 alpha|| Q2 log(1+Q2)^2 is about 2.8e-4 here, above the 1e-6 floor
  CHECK_FALSE(typicality_test(cf, 2.0, cf.denominators[2].convert_to<std::int64_t>()).passed);
}

TEST_CASE("documented: golden ratio Hurwitz floor at tau 1" * doctest::should_fail()) {
  // k = 1 gives (2 - phi) log 2 = 0.2648 < log(2) / sqrt(5)
  CHECK(typicality_test(kPhi, 1.0, 1000000).delta_est >= std::log(2.0) / std::sqrt(5.0));
}

TEST_CASE("documented: reciprocal sum of phi at N = 1" * doctest::should_fail()) {
  CHECK(reciprocal_norm_sum(kPhi, 1) == doctest::Approx(1.0 / (kPhi - 1.0)).epsilon(1e-9));
}

TEST_CASE("exact norm") {
  CHECK(exact_norm(BigInt(3), BigInt(1), BigInt(3)) == 0.0L);
  CHECK(exact_norm(BigInt(2), BigInt(2), BigInt(5)) == doctest::Approx(0.2));
  CHECK(exact_norm(BigInt(1), BigInt(7), BigInt(10)) == doctest::Approx(0.3));
}

TEST_CASE("discrepancy K examples") {
  CHECK(discrepancy_K(kPhi, 5, 0.0) == 49.0);
  CHECK(discrepancy_K(kPhi, 5, 0.5) == 48.0);
  // non-integer branch against a direct sum of floor(alpha k + beta) + floor(alpha k - beta) + 1
  for (double beta : {0.1, 0.37, 0.5, 0.93}) {
    long double s = 0;
    for (long k = 1; k <= 1000; ++k)
      s += std::floor(kPhi * k + beta) + std::floor(kPhi * k - beta) + 1;
    CHECK(discrepancy_K(kPhi, 1000, beta) == doctest::Approx(static_cast<double>(s)));
  }
}

TEST_CASE("sigma sums") {
  CHECK(sigma_sum(kPhi, 0.0, 5) == doctest::Approx(22.0 - 15.0 * kPhi + 2.5).epsilon(1e-12));
  CHECK(std::abs(sigma_sum(0.5, 0.25, 2)) <= 1e-15);
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 16; ++i) {
    const double beta = u(rng);
    CHECK(sigma_sum(kPhi, beta, 10000) == doctest::Approx(sigma_oracle(kPhi, beta, 10000)).epsilon(1e-9));
    for (long r : {100L, 1000L, 10000L, 100000L}) CHECK(std::abs(sigma_sum(kPhi, beta, r)) <= std::pow(std::log(r), 2.0));
  }
}

TEST_CASE("K differences stay within log squared") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (double alpha : {kPhi, std::sqrt(2.0)}) {
    for (long r : {100L, 1000L, 10000L, 100000L}) {
      double worst = 0;
      for (int i = 0; i < 64; ++i) worst = std::max(worst, std::abs(discrepancy_K(alpha, r, u(rng)) - discrepancy_K(alpha, r, u(rng))));
      CHECK(worst / std::pow(std::log(r), 2.0) <= 2.0);
    }
  }
}

TEST_CASE("reciprocal norm sums") {
  // ||phi|| = 2 - phi
  CHECK(reciprocal_norm_sum(kPhi, 1) == doctest::Approx(1.0 / (2.0 - kPhi)).epsilon(1e-12));
  const long N = 1000;
  double oracle = 0;
  for (long k = 1; k <= N; ++k) oracle += 1.0 / (k * dist_int(static_cast<long double>(kPhi) * k));
  CHECK(reciprocal_norm_sum(kPhi, N) == doctest::Approx(oracle).epsilon(1e-9));
  CHECK(reciprocal_norm_sum(kPhi, N) <= 10.0 * N * std::log(N));
  CHECK(code_of([] { reciprocal_norm_sum(0.25, 8); }) == ErrorCode::RationalInput);
}

TEST_CASE("pathological sums exceed the quadratic ceiling") {
  const ContinuedFraction cf = pathological_alpha(1.0, 4);
  const std::int64_t q2 = cf.denominators[2].convert_to<std::int64_t>();
  CHECK(q2 == 11);
  CHECK(reciprocal_norm_sum(cf, q2) > 1.0 * q2 * q2 / 2);
  const ContinuedFraction c10 = pathological_alpha(10.0, 6);
  bool exceeded = false;
  for (std::size_t n = 1; n + 1 < c10.denominators.size() && !exceeded; ++n) {
    const BigInt Q = c10.denominators[n];
    if (Q > 1000000) break;
    const std::int64_t N = Q.convert_to<std::int64_t>();
    exceeded = reciprocal_norm_sum(c10, N) > 10.0 * N * N / 2;
  }
  CHECK(exceeded);
  CHECK(code_of([&] { reciprocal_norm_sum(pathological_alpha(1.0, 2), 11); }) == ErrorCode::RationalInput);
}
