#include "liouville/sturm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <lapacke.h>

#include <boost/math/tools/toms748_solve.hpp>

#include "liouville/errors.hpp"

namespace liouville {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kFourPiSq = kTwoPi * kTwoPi;
constexpr int kMaxResolution = 4096;

// Frequency of basis function i in {1, sqrt2 cos, sqrt2 sin, ...}.
int frequency(int i) { return (i + 1) / 2; }

Eigen::VectorXd stiffness_diagonal(int N) {
  Eigen::VectorXd d(2 * N + 1);
  for (int i = 0; i < d.size(); ++i) {
    const double w = kTwoPi * frequency(i);
    d[i] = w * w;
  }
  return d;
}

// Eigenvalues il..iu (1-based, inclusive) of the symmetric matrix a (overwritten).
std::vector<double> symmetric_eigenvalues(Eigen::MatrixXd a, int il, int iu) {
  const int n = static_cast<int>(a.rows());
  std::vector<double> w(n);
  std::vector<double> z(static_cast<std::size_t>(n) * (iu - il + 1));
  std::vector<lapack_int> support(2 * static_cast<std::size_t>(iu - il + 1));
  lapack_int found = 0;
  const lapack_int info = LAPACKE_dsyevr(LAPACK_COL_MAJOR, 'N', 'I', 'U', n, a.data(), n, 0.0, 0.0, il, iu, 0.0,
                                         &found, w.data(), z.data(), n, support.data());
  if (info != 0) fail(ErrorCode::NoConvergence, "dsyevr failed with info " + std::to_string(info));
  w.resize(found);
  return w;
}

double relative_scale(double v) { return std::max(std::abs(v), kFourPiSq); }

double max_relative_change(const std::vector<double>& a, const std::vector<double>& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i)
    worst = std::max(worst, std::abs(a[i] - b[i]) / relative_scale(b[i]));
  return worst;
}

double hill_eigenvalue(const PotentialSpec& V, int N, int index) {
  const HillOperator op{V, N};
  return symmetric_eigenvalues(op.matrix(), index + 1, index + 1).front();
}

int minimal_resolution(int count) { return 2 * count + 16; }

}  // namespace

Eigen::MatrixXd multiplication_matrix(const PotentialSpec& p, int N) {
  const int dim = 2 * N + 1;
  const int samples = 4 * N + 2 * static_cast<int>(p.degree()) + 2;
  Eigen::MatrixXd basis(samples, dim);
  Eigen::VectorXd weight(samples);
  for (int s = 0; s < samples; ++s) {
    const double q = static_cast<double>(s) / samples;
    weight[s] = eval(p, q) / samples;
    basis(s, 0) = 1.0;
    for (int n = 1; n <= N; ++n) {
      basis(s, 2 * n - 1) = std::sqrt(2.0) * std::cos(kTwoPi * n * q);
      basis(s, 2 * n) = std::sqrt(2.0) * std::sin(kTwoPi * n * q);
    }
  }
  Eigen::MatrixXd t = basis.transpose() * weight.asDiagonal() * basis;
  return 0.5 * (t + t.transpose());
}

Eigen::MatrixXd HillOperator::matrix() const {
  Eigen::MatrixXd a = multiplication_matrix(V, N);
  a.diagonal() += stiffness_diagonal(N);
  return a;
}

std::vector<double> hill_eigenvalues(const HillOperator& op, int count) {
  if (count < 1 || count > op.dimension()) fail(ErrorCode::OutOfRange, "eigenvalue count out of range");
  return symmetric_eigenvalues(op.matrix(), 1, count);
}

HillSpectrum hill_spectrum(const PotentialSpec& V, int N, int count) {
  if (count < 1) fail(ErrorCode::OutOfRange, "count must be positive");
  if (N < minimal_resolution(count)) fail(ErrorCode::OutOfRange, "resolution must be at least 2 count + 16");
  std::vector<double> coarse = hill_eigenvalues({V, N}, count);
  for (int n = 2 * N; n <= kMaxResolution; n *= 2) {
    std::vector<double> fine = hill_eigenvalues({V, n}, count);
    if (max_relative_change(coarse, fine) <= 1e-9) return {fine, n};
    coarse = std::move(fine);
  }
  fail(ErrorCode::NoConvergence, "Hill spectrum did not settle by N = " + std::to_string(kMaxResolution));
}

double JointEigenpair::lambda() const { return std::sqrt(std::max(0.0, E)); }

double etilde_first(const MetricSpec& m, int m1, double E, int N) {
  return -hill_eigenvalue(m.u1.scaled(-E), N, m1);
}

double etilde_second(const MetricSpec& m, int m2, double E, int N) {
  return hill_eigenvalue(m.u2.scaled(E), N, m2);
}

JointEigenpair joint_eigenpair(const MetricSpec& m, int m1, int m2, std::pair<double, double> bracket) {
  if (m1 < 0 || m2 < 0) fail(ErrorCode::OutOfRange, "indices must be non-negative");
  auto [lo, hi] = bracket;
  lo = std::max(0.0, lo);
  if (!(hi > lo)) fail(ErrorCode::NoBracket, "empty bracket");

  // resolution certified at the largest energy the solve may visit
  const double e_cap = hi * std::pow(1.5, 8);
  const int count = std::max(m1, m2) + 2;
  const int n1 = hill_spectrum(m.u1.scaled(-e_cap), minimal_resolution(count), count).resolution;
  const int n2 = hill_spectrum(m.u2.scaled(e_cap), minimal_resolution(count), count).resolution;
  auto g = [&](double E) { return etilde_first(m, m1, E, n1) - etilde_second(m, m2, E, n2); };
  const double g_tol = 1e-12 * kFourPiSq;

  double g_lo = g(lo), g_hi = g(hi);
  for (int widen = 0; widen < 8 && g_lo * g_hi > 0 && std::abs(g_lo) > g_tol; ++widen) {
    lo /= 1.5;
    hi *= 1.5;
    g_lo = g(lo);
    g_hi = g(hi);
  }
  double E;
  if (std::abs(g_lo) <= g_tol) {
    E = lo;
  } else if (std::abs(g_hi) <= g_tol) {
    E = hi;
  } else if (g_lo * g_hi > 0) {
    fail(ErrorCode::NoBracket, "g(E) has no sign change in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
  } else {
    std::uintmax_t iterations = 200;
    auto tol = [](double a, double b) { return std::abs(a - b) <= 1e-11 * std::max(1.0, std::abs(a)); };
    const auto root = boost::math::tools::toms748_solve(g, lo, hi, g_lo, g_hi, tol, iterations);
    E = 0.5 * (root.first + root.second);
  }

  // The m-th eigenvalue must be separated from the neighbor outside its pair (2k-1, 2k).
  auto check_pairing = [&](const PotentialSpec& V, int N, int index) {
    const int cross = index % 2 == 0 ? index + 1 : index - 1;
    if (cross < 0) return;
    const std::vector<double> mu = hill_eigenvalues({V, N}, std::max(index, cross) + 1);
    if (std::abs(mu[index] - mu[cross]) <= 1e-9 * relative_scale(mu[index]))
      fail(ErrorCode::IndexingAmbiguity, "eigenvalues " + std::to_string(index) + " and " + std::to_string(cross) +
                                             " coincide at the root");
  };
  check_pairing(m.u1.scaled(-E), n1, m1);
  check_pairing(m.u2.scaled(E), n2, m2);

  JointEigenpair out;
  out.m1 = m1;
  out.m2 = m2;
  out.E = E;
  out.Etilde = 0.5 * (etilde_first(m, m1, E, n1) + etilde_second(m, m2, E, n2));
  out.c = E > 0 ? out.Etilde / E : 0.0;
  return out;
}

std::vector<double> direct_2d_eigenvalues(const MetricSpec& m, int count, int N) {
  if (min_conformal_factor(m) <= 0.0) fail(ErrorCode::NotPositive, "U1 - U2 must be positive everywhere");
  const int K = (N - 1) / 2;
  const int L = 2 * K + 1;
  const int dim = L * L;
  if (count < 1 || count > dim) fail(ErrorCode::OutOfRange, "eigenvalue count out of range");

  const Eigen::MatrixXd t1 = multiplication_matrix(m.u1, K);
  const Eigen::MatrixXd t2 = multiplication_matrix(m.u2, K);
  const Eigen::VectorXd d = stiffness_diagonal(K);
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(dim, dim);
  Eigen::MatrixXd b = Eigen::MatrixXd::Zero(dim, dim);
  for (int i = 0; i < L; ++i)
    for (int j = 0; j < L; ++j) {
      const int row = i * L + j;
      a(row, row) = d[i] + d[j];
      for (int k = 0; k < L; ++k) {
        b(row, k * L + j) += t1(i, k);
        b(row, i * L + k) -= t2(j, k);
      }
    }

  std::vector<double> w(dim);
  std::vector<double> z(static_cast<std::size_t>(dim) * count);
  std::vector<lapack_int> ifail(dim);
  lapack_int found = 0;
  const lapack_int info =
      LAPACKE_dsygvx(LAPACK_COL_MAJOR, 1, 'N', 'I', 'U', dim, a.data(), dim, b.data(), dim, 0.0, 0.0, 1, count,
                     0.0, &found, w.data(), z.data(), dim, ifail.data());
  if (info != 0) fail(ErrorCode::NoConvergence, "dsygvx failed with info " + std::to_string(info));
  w.resize(found);
  return w;
}

std::vector<double> direct_2d_spectrum(const MetricSpec& m, int count, int N) {
  if (N < 8) fail(ErrorCode::OutOfRange, "grid resolution must be at least 8");
  const std::vector<double> fine = direct_2d_eigenvalues(m, count, N);
  const std::vector<double> coarse = direct_2d_eigenvalues(m, count, 3 * N / 4);
  if (max_relative_change(coarse, fine) > 1e-6)
    fail(ErrorCode::NoConvergence, "2-D spectrum changed by more than 1e-6 between N = " +
                                       std::to_string(3 * N / 4) + " and N = " + std::to_string(N));
  return fine;
}

double counting_function(const std::vector<double>& spectrum, double lambda) {
  const double e = lambda * lambda;
  if (spectrum.empty() || e > spectrum.back()) fail(ErrorCode::Truncated, "lambda^2 exceeds the computed spectrum");
  const double cut = e + 1e-9 * std::max(1.0, e);
  return static_cast<double>(std::upper_bound(spectrum.begin(), spectrum.end(), cut) - spectrum.begin());
}

}  // namespace liouville
