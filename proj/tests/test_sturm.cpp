#include <doctest.h>

#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "helpers.hpp"
#include "liouville/actions.hpp"
#include "liouville/ebk.hpp"
#include "liouville/sturm.hpp"

using namespace liouville;
using testing::code_of;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double k4Pi2 = 4 * kPi * kPi;

// Lowest `count` eigenvalues of the periodic second-order difference operator -d^2 + V on n points.
std::vector<double> fd_hill(const std::function<double(double)>& V, int n, int count) {
  std::vector<double> a(static_cast<std::size_t>(n) * n, 0.0);
  const double h = 1.0 / n, inv = 1.0 / (h * h);
  for (int i = 0; i < n; ++i) {
    a[i * n + i] = 2 * inv + V(i * h);
    a[i * n + (i + 1) % n] -= inv;
    a[i * n + (i + n - 1) % n] -= inv;
  }
  std::vector<double> w(n), z(1);
  std::vector<lapack_int> support(2);
  lapack_int found = 0;
  const lapack_int info =
      LAPACKE_dsyevr(LAPACK_ROW_MAJOR, 'N', 'I', 'U', n, a.data(), n, 0, 0, 1, count, 0.0, &found, w.data(),
                     z.data(), 1, support.data());
  REQUIRE(info == 0);
  w.resize(found);
  return w;
}

std::vector<double> flat_levels(double scale, double limit) {
  std::vector<double> out;
  for (int i = -10; i <= 10; ++i)
    for (int j = -10; j <= 10; ++j) {
      const double e = k4Pi2 * (i * i + j * j) * scale;
      if (e <= limit) out.push_back(e);
    }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST_CASE("Hill spectra of constant potentials") {
  const auto zero = hill_spectrum(PotentialSpec::constant(0.0), 26, 5).values;
  const std::vector<double> want{0, k4Pi2, k4Pi2, 4 * k4Pi2, 4 * k4Pi2};
  for (int i = 0; i < 5; ++i) CHECK(std::abs(zero[i] - want[i]) <= 1e-9 * std::max(1.0, want[i]));
  const auto seven = hill_spectrum(PotentialSpec::constant(7.0), 26, 5).values;
  for (int i = 0; i < 5; ++i) CHECK(seven[i] == doctest::Approx(want[i] + 7.0).epsilon(1e-12));
}

TEST_CASE("Hill spectrum of 10 cos against a Richardson finite-difference oracle") {
  const PotentialSpec V{0.0, {{10.0, 0.0}}};
  const auto got = hill_spectrum(V, 36, 10);
  auto v = [](double q) { return 10 * std::cos(2 * kPi * q); };
  const auto coarse = fd_hill(v, 2048, 10), fine = fd_hill(v, 4096, 10);
  for (int i = 0; i < 10; ++i) {
    const double oracle = (4 * fine[i] - coarse[i]) / 3;
    CHECK(std::abs(got.values[i] - oracle) <= 1e-6 * std::max(1.0, std::abs(oracle)));
  }
  for (int i = 1; i < 10; ++i) CHECK(got.values[i] >= got.values[i - 1]);
  CHECK(got.values[1] - got.values[0] > 1e-10);
}

TEST_CASE("discretized Hill operator is symmetric") {
  const HillOperator op{PotentialSpec{1.5, {{0.7, -0.3}, {0.2, 0.9}}}, 20};
  const Eigen::MatrixXd a = op.matrix();
  CHECK((a - a.transpose()).cwiseAbs().maxCoeff() <= 1e-12 * a.cwiseAbs().maxCoeff());
  CHECK(code_of([] { hill_spectrum(PotentialSpec::constant(0.0), 4, 5); }) == ErrorCode::OutOfRange);
}

TEST_CASE("second family grows with E") {
  const MetricSpec m = testing::sample();
  for (int m2 : {0, 3, 6}) {
    double prev = etilde_second(m, m2, 0.0, 32);
    for (double E = 5; E <= 500; E += 5) {
      const double cur = etilde_second(m, m2, E, 32);
      CHECK(cur > prev);
      prev = cur;
    }
  }
}

TEST_CASE("flat joint eigenpairs in closed form") {
  const MetricSpec flat = testing::flat();
  const auto p = joint_eigenpair(flat, 1, 1, {0.8 * 2 * k4Pi2, 1.25 * 2 * k4Pi2});
  CHECK(p.E == doctest::Approx(2 * k4Pi2).epsilon(1e-9));
  CHECK(p.Etilde == doctest::Approx(3 * k4Pi2).epsilon(1e-9));
  CHECK(p.c == doctest::Approx(1.5).epsilon(1e-9));
  const auto z = joint_eigenpair(flat, 0, 0, {0.0, 1.0});
  CHECK(z.E == 0.0);
  CHECK(std::abs(z.Etilde) <= 1e-9);
  CHECK(code_of([&] { joint_eigenpair(flat, 1, 1, {1.0, 1.1}); }) == ErrorCode::NoBracket);
}

TEST_CASE("flat separation reproduces the direct spectrum below 100") {
  const MetricSpec flat = testing::flat();
  std::vector<double> separated;
  for (int m1 = 0; m1 <= 4; ++m1)
    for (int m2 = 0; m2 <= 4; ++m2) {
      const int n1 = (m1 + 1) / 2, n2 = (m2 + 1) / 2;
      const double guess = k4Pi2 * (n1 * n1 + n2 * n2);
      if (guess > 100) continue;
      const auto bracket = guess == 0 ? std::pair{0.0, 1.0} : std::pair{0.8 * guess, 1.25 * guess};
      separated.push_back(joint_eigenpair(flat, m1, m2, bracket).E);
    }
  std::sort(separated.begin(), separated.end());
  const auto direct = direct_2d_spectrum(flat, 9, 16);
  REQUIRE(separated.size() == 9);
  for (int i = 0; i < 9; ++i) CHECK(std::abs(separated[i] - direct[i]) <= 1e-6 * std::max(1.0, direct[i]));
}

TEST_CASE("direct spectra of flat tori") {
  const auto one = direct_2d_spectrum(testing::flat(), 13, 16);
  const auto want = flat_levels(1.0, 4 * k4Pi2);
  for (int i = 0; i < 13; ++i) CHECK(std::abs(one[i] - want[i]) <= 1e-6 * std::max(1.0, want[i]));
  const auto two = direct_2d_spectrum(testing::unchecked(3.0, 1.0), 13, 16);
  for (int i = 0; i < 13; ++i) CHECK(std::abs(two[i] - want[i] / 2) <= 1e-6 * std::max(1.0, want[i]));
  CHECK(code_of([] { direct_2d_spectrum(testing::unchecked(1.0, 2.0), 4, 16); }) == ErrorCode::NotPositive);
}

TEST_CASE("sample metric: simple zero eigenvalue and a separated pair inside the direct spectrum") {
  const MetricSpec m = testing::sample();
  const auto direct = direct_2d_spectrum(m, 160, 64);
  CHECK(std::abs(direct[0]) <= 1e-8);
  CHECK(direct[1] > 1.0);

  const ActionCurve ac(m);
  const double l = solve_quantization(ac, 6, 6).lambda;
  const auto p = joint_eigenpair(m, 6, 6, {0.8 * l * l, 1.25 * l * l});
  REQUIRE(p.E < direct.back());
  double nearest = 1e300;
  for (double e : direct) nearest = std::min(nearest, std::abs(e - p.E));
  CHECK(nearest <= 1e-4 * p.E);
  CHECK(p.c >= 0.5);
  CHECK(p.c <= 4.0);
}

TEST_CASE("counting function") {
  const auto s = direct_2d_spectrum(testing::flat(), 13, 16);
  CHECK(counting_function(s, 2 * kPi + 0.1) == 5.0);
  CHECK(counting_function(s, 0.0) == 1.0);
  CHECK(counting_function(s, 2 * kPi - 1e-6) == 1.0);
  CHECK(code_of([&] { counting_function(s, 100.0); }) == ErrorCode::Truncated);
}
