#pragma once

#include <string>
#include <vector>

namespace liouville {

/** Coefficients of cos(2*pi*n*q) and sin(2*pi*n*q) for one frequency n >= 1. */
struct Harmonic {
  double cos_coeff = 0.0;
  double sin_coeff = 0.0;
  bool operator==(const Harmonic&) const = default;
};

/**
 * A 1-periodic trigonometric polynomial
 *   p(q) = mean + sum_n cos_n cos(2 pi n q) + sin_n sin(2 pi n q).
 */
struct PotentialSpec {
  double mean = 0.0;
  std::vector<Harmonic> harmonics;  // harmonics[n-1] holds frequency n

  static PotentialSpec constant(double value);

  std::size_t degree() const { return harmonics.size(); }
  bool is_constant() const;

  PotentialSpec scaled(double factor) const;
  PotentialSpec translated(double dq) const;  // q -> p(q - dq)
  PotentialSpec plus(const PotentialSpec& other, double factor = 1.0) const;

  bool operator==(const PotentialSpec&) const = default;
};

/** Value of the deriv_order-th derivative of p at q. */
double eval(const PotentialSpec& p, double q, int deriv_order = 0);

enum class MetricKind { liouville, revolution, unchecked_test };

const char* to_string(MetricKind kind);

/** Conformal factor U1(q1) - U2(q2); for revolution U2 is the zero potential. */
struct MetricSpec {
  PotentialSpec u1;
  PotentialSpec u2;
  MetricKind kind = MetricKind::liouville;
  bool operator==(const MetricSpec&) const = default;
};

struct CriticalConstants {
  double c1 = 0, c2 = 0, c3 = 0, c4 = 0;
  double M1 = 0, m1 = 0, M2 = 0, m2 = 0;
  double d2U1_M1 = 0, d2U1_m1 = 0, d2U2_M2 = 0, d2U2_m2 = 0;
};

/**
 * Energies and positions of the extrema of U1 and U2. Liouville and
 * revolution metrics must have exactly one nondegenerate max and min per
 * potential; the unchecked-test kind reports global extrema without checks.
 */
CriticalConstants critical_constants(const MetricSpec& m);

struct ConditionResult {
  int index = 0;
  bool passed = false;
  std::string detail;
};

struct ValidationReport {
  std::vector<ConditionResult> conditions;  // conditions (1)..(4)
  bool passed() const;
};

ValidationReport validate_omega(const MetricSpec& m);

/** Throws InvalidConfig when a checked kind fails validation. */
void require_valid(const MetricSpec& m);

/** Minimum of U1 - U2 over the torus (U1 alone for revolution). */
double min_conformal_factor(const MetricSpec& m);

}  // namespace liouville
