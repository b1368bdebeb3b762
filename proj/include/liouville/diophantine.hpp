#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <utility>
#include <vector>

namespace liouville {

using BigInt = boost::multiprecision::checked_int1024_t;

/** alpha = [a0; a1, a2, ...] with convergents P_n / Q_n. */
struct ContinuedFraction {
  std::vector<BigInt> partial_quotients;
  std::vector<BigInt> numerators;    // P_0..P_n
  std::vector<BigInt> denominators;  // Q_0..Q_n

  std::size_t depth() const { return partial_quotients.empty() ? 0 : partial_quotients.size() - 1; }
  long double value() const;  // P_n / Q_n at the deepest level

  static ContinuedFraction from_quotients(std::vector<BigInt> quotients);
};

/** Expansion of alpha by floor/reciprocal iteration in extended precision. depth <= 40. */
ContinuedFraction continued_fraction(double alpha, int depth);

/** a0 = 0, a1 = 2, a_{n+1} = floor(C Q_n^2) + 1 exactly; depth <= 12. */
ContinuedFraction pathological_alpha(double C, int depth);

struct TypicalityReport {
  double tau = 0;
  double delta_est = 0;
  std::int64_t kmax = 0;
  std::pair<std::int64_t, std::int64_t> worst_pair{0, 0};  // (k1, k2)
  double delta_min = 1e-6;
  bool passed = false;
};

/** min over 1 <= k <= kmax of ||alpha k|| k log(1+k)^tau. */
TypicalityReport typicality_test(double alpha, double tau, std::int64_t kmax, double delta_min = 1e-6);

/**
 * Same scan with ||alpha k|| from the deepest convergent in exact integer
 * arithmetic; the scan stops below Q_n where that convergent stops
 * representing the expansion, so kmax is clipped to Q_n - 1.
 */
TypicalityReport typicality_test(const ContinuedFraction& cf, double tau, std::int64_t kmax,
                                 double delta_min = 1e-6);

/** K(alpha, r, beta) from the integer-part formula (both branches). */
double discrepancy_K(double alpha, std::int64_t r, double beta);

/** sum_{k=1}^r sigma(alpha k + beta), sigma(t) = floor(t) - t + 1/2. */
double sigma_sum(double alpha, double beta, std::int64_t r);

/** sum_{k=1}^N 1 / (k ||alpha k||). */
double reciprocal_norm_sum(double alpha, std::int64_t N);
double reciprocal_norm_sum(const ContinuedFraction& cf, std::int64_t N);

/** Distance to the nearest integer of k * P / Q, exact. */
long double exact_norm(const BigInt& k, const BigInt& P, const BigInt& Q);

}  // namespace liouville
