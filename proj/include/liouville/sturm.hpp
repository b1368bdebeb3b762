#pragma once

#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "liouville/metric.hpp"

namespace liouville {

/**
 * -d^2/dq^2 + V on 1-periodic functions, discretized in the real Fourier
 * basis {1, sqrt2 cos 2 pi n q, sqrt2 sin 2 pi n q : 1 <= n <= N}.
 */
struct HillOperator {
  PotentialSpec V;
  int N = 32;

  int dimension() const { return 2 * N + 1; }
  Eigen::MatrixXd matrix() const;
};

/** Multiplication by p in the real Fourier basis with frequencies up to N (exact for trig polynomials). */
Eigen::MatrixXd multiplication_matrix(const PotentialSpec& p, int N);

/** Lowest `count` eigenvalues of the discretized operator at fixed resolution (no certification). */
std::vector<double> hill_eigenvalues(const HillOperator& op, int count);

struct HillSpectrum {
  std::vector<double> values;
  int resolution = 0;  // N at which the doubling test passed
};

/**
 * Lowest `count` periodic eigenvalues, certified by doubling N until the
 * max change relative to max(|mu|, 4 pi^2) is at most 1e-9.
 */
HillSpectrum hill_spectrum(const PotentialSpec& V, int N, int count);

struct JointEigenpair {
  int m1 = 0, m2 = 0;
  double E = 0.0;
  double Etilde = 0.0;
  double c = 0.0;  // Etilde / E (0 when E = 0)
  double lambda() const;
};

/** Etilde^(1)_{m1}(E) = -mu_{m1}(-d^2 - E U1) and Etilde^(2)_{m2}(E) = nu_{m2}(-d^2 + E U2). */
double etilde_first(const MetricSpec& m, int m1, double E, int N);
double etilde_second(const MetricSpec& m, int m2, double E, int N);

/**
 * Root of g(E) = Etilde^(1)_{m1}(E) - Etilde^(2)_{m2}(E) in the bracket,
 * widened by 1.5x up to 8 times when g does not change sign.
 */
JointEigenpair joint_eigenpair(const MetricSpec& m, int m1, int m2, std::pair<double, double> bracket);

/**
 * Lowest `count` eigenvalues E = lambda^2 of -(d1^2 + d2^2) psi = E (U1 - U2) psi,
 * Fourier-Galerkin with N modes per axis; the result is checked against a
 * 3N/4 solve and must agree to 1e-6 relative.
 */
std::vector<double> direct_2d_spectrum(const MetricSpec& m, int count, int N = 64);

/** Same generalized solve at one resolution, without the convergence check. */
std::vector<double> direct_2d_eigenvalues(const MetricSpec& m, int count, int N);

/** Number of eigenvalues E_j <= lambda^2, with multiplicity. */
double counting_function(const std::vector<double>& spectrum, double lambda);

}  // namespace liouville
