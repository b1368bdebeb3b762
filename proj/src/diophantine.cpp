#include "liouville/diophantine.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "liouville/errors.hpp"

namespace liouville {

namespace {

long double frac_distance(long double x) { return std::fabs(x - std::nearbyint(x)); }

void record(TypicalityReport& report, std::int64_t k, long double norm, long double nearest) {
  const double value = static_cast<double>(norm * static_cast<long double>(k) *
                                           std::pow(std::log1p(static_cast<long double>(k)), report.tau));
  if (value < report.delta_est) {
    report.delta_est = value;
    report.worst_pair = {-static_cast<std::int64_t>(nearest), k};
  }
}

}  // namespace

ContinuedFraction ContinuedFraction::from_quotients(std::vector<BigInt> quotients) {
  ContinuedFraction cf;
  cf.partial_quotients = std::move(quotients);
  BigInt p_prev2 = 0, p_prev = 1, q_prev2 = 1, q_prev = 0;
  for (const BigInt& a : cf.partial_quotients) {
    const BigInt p = a * p_prev + p_prev2;
    const BigInt q = a * q_prev + q_prev2;
    cf.numerators.push_back(p);
    cf.denominators.push_back(q);
    p_prev2 = p_prev, p_prev = p;
    q_prev2 = q_prev, q_prev = q;
  }
  return cf;
}

long double ContinuedFraction::value() const {
  return numerators.back().convert_to<long double>() / denominators.back().convert_to<long double>();
}

ContinuedFraction continued_fraction(double alpha, int depth) {
  if (depth < 0 || depth > 40) fail(ErrorCode::OutOfRange, "depth must lie in [0, 40]");
  long double x = alpha;
  std::vector<BigInt> quotients;
  long double a = std::floor(x);
  quotients.push_back(BigInt(static_cast<long long>(a)));
  long double frac = x - a;
  for (int level = 1; level <= depth; ++level) {
    if (frac < 1e-15L)
      fail(ErrorCode::PrecisionExhausted,
           "expansion terminates at level " + std::to_string(level - 1) + " in working precision");
    x = 1.0L / frac;
    a = std::floor(x);
    if (a > static_cast<long double>(std::numeric_limits<long long>::max()))
      fail(ErrorCode::PrecisionExhausted, "partial quotient exceeds working precision");
    quotients.push_back(BigInt(static_cast<long long>(a)));
    frac = x - a;
  }
  return ContinuedFraction::from_quotients(std::move(quotients));
}

ContinuedFraction pathological_alpha(double C, int depth) {
  if (depth < 1 || depth > 12) fail(ErrorCode::OutOfRange, "depth must lie in [1, 12]");
  if (!(C > 0)) fail(ErrorCode::OutOfRange, "C must be positive");
  // C = mantissa * 2^exponent exactly, so floor(C Q^2) is computed without rounding.
  int exponent = 0;
  const double frac = std::frexp(C, &exponent);
  const long long mantissa = static_cast<long long>(std::ldexp(frac, 53));
  exponent -= 53;

  std::vector<BigInt> quotients{0, 2};
  BigInt q_prev = 1, q = 2;  // Q_0, Q_1
  int level = 1;
  try {
    for (; level < depth; ++level) {
      BigInt scaled = BigInt(mantissa) * q * q;
      if (exponent >= 0) scaled <<= exponent;
      else scaled >>= -exponent;
      const BigInt a = scaled + 1;
      quotients.push_back(a);
      const BigInt next = a * q + q_prev;
      q_prev = q;
      q = next;
    }
  } catch (const std::overflow_error&) {
    fail(ErrorCode::Overflow, "denominator exceeds 1024 bits at level " + std::to_string(level));
  } catch (const std::range_error&) {
    fail(ErrorCode::Overflow, "denominator exceeds 1024 bits at level " + std::to_string(level));
  }
  try {
    return ContinuedFraction::from_quotients(std::move(quotients));
  } catch (const std::overflow_error&) {
    fail(ErrorCode::Overflow, "convergent exceeds 1024 bits at level " + std::to_string(level));
  }
}

TypicalityReport typicality_test(double alpha, double tau, std::int64_t kmax, double delta_min) {
  if (kmax < 1) fail(ErrorCode::OutOfRange, "kmax must be >= 1");
  TypicalityReport report;
  report.tau = tau;
  report.kmax = kmax;
  report.delta_min = delta_min;
  report.delta_est = std::numeric_limits<double>::infinity();
  const long double a = alpha;
  for (std::int64_t k = 1; k <= kmax; ++k) {
    const long double x = a * static_cast<long double>(k);
    record(report, k, frac_distance(x), std::nearbyint(x));
  }
  report.passed = report.delta_est >= delta_min;
  return report;
}

long double exact_norm(const BigInt& k, const BigInt& P, const BigInt& Q) {
  BigInt r = (k * P) % Q;
  if (r < 0) r += Q;
  const BigInt d = r < Q - r ? r : Q - r;
  return d.convert_to<long double>() / Q.convert_to<long double>();
}

TypicalityReport typicality_test(const ContinuedFraction& cf, double tau, std::int64_t kmax,
                                 double delta_min) {
  if (kmax < 1) fail(ErrorCode::OutOfRange, "kmax must be >= 1");
  const BigInt& P = cf.numerators.back();
  const BigInt& Q = cf.denominators.back();
  if (Q <= 1) fail(ErrorCode::RationalInput, "continued fraction has no nontrivial convergent");
  if (BigInt(kmax) >= Q) kmax = (Q - 1).convert_to<std::int64_t>();
  TypicalityReport report;
  report.tau = tau;
  report.kmax = kmax;
  report.delta_min = delta_min;
  report.delta_est = std::numeric_limits<double>::infinity();
  for (std::int64_t k = 1; k <= kmax; ++k) {
    const BigInt kk = k;
    const BigInt num = kk * P;
    // nearest integer to k P / Q
    BigInt nearest = num / Q;
    if (2 * (num - nearest * Q) > Q) nearest += 1;
    record(report, k, exact_norm(kk, P, Q), nearest.convert_to<long double>());
  }
  report.passed = report.delta_est >= delta_min;
  return report;
}

double discrepancy_K(double alpha, std::int64_t r, double beta) {
  if (r < 1) fail(ErrorCode::OutOfRange, "r must be >= 1");
  const long double a = alpha, b = beta;
  long long sum = 0;
  if (beta == std::floor(beta)) {
    for (std::int64_t k = 1; k <= r; ++k) sum += static_cast<long long>(std::floor(a * k));
    return static_cast<double>(r + 2 * sum);
  }
  for (std::int64_t k = 1; k <= r; ++k) {
    const long double x = a * static_cast<long double>(k);
    sum += static_cast<long long>(std::floor(x + 1.0L - b)) + static_cast<long long>(std::floor(x + b));
  }
  return static_cast<double>(sum);
}

double sigma_sum(double alpha, double beta, std::int64_t r) {
  if (r < 1) fail(ErrorCode::OutOfRange, "r must be >= 1");
  const long double a = alpha, b = beta;
  long double sum = 0.0L, compensation = 0.0L;
  for (std::int64_t k = 1; k <= r; ++k) {
    const long double t = a * static_cast<long double>(k) + b;
    const long double term = std::floor(t) - t + 0.5L - compensation;
    const long double next = sum + term;
    compensation = (next - sum) - term;
    sum = next;
  }
  return static_cast<double>(sum);
}

double reciprocal_norm_sum(double alpha, std::int64_t N) {
  if (N < 1) fail(ErrorCode::OutOfRange, "N must be >= 1");
  const long double a = alpha;
  long double sum = 0.0L;
  for (std::int64_t k = 1; k <= N; ++k) {
    const long double x = a * static_cast<long double>(k);
    const long double norm = frac_distance(x);
    if (norm <= 1e-15L * static_cast<long double>(k))
      fail(ErrorCode::RationalInput, "||alpha k|| vanishes at working precision for k = " + std::to_string(k));
    sum += 1.0L / (static_cast<long double>(k) * norm);
  }
  return static_cast<double>(sum);
}

double reciprocal_norm_sum(const ContinuedFraction& cf, std::int64_t N) {
  if (N < 1) fail(ErrorCode::OutOfRange, "N must be >= 1");
  const BigInt& P = cf.numerators.back();
  const BigInt& Q = cf.denominators.back();
  if (BigInt(N) >= Q)
    fail(ErrorCode::RationalInput, "N reaches the deepest denominator; extend the expansion");
  long double sum = 0.0L;
  for (std::int64_t k = 1; k <= N; ++k)
    sum += 1.0L / (static_cast<long double>(k) * exact_norm(BigInt(k), P, Q));
  return static_cast<double>(sum);
}

}  // namespace liouville
