#pragma once

#include <memory>
#include <vector>

#include "liouville/metric.hpp"

namespace liouville {

/**
 * Action integral X(e) of a 1-periodic potential W at level e <= max W:
 * rotation  X(e) = int_0^1 (W - e)^{1/2}        for e <= min W,
 * libration X(e) = int_{W >= e} (W - e)^{1/2}    for e >= min W,
 * with first and second derivatives in e.
 */
class LevelIntegral {
 public:
  LevelIntegral(PotentialSpec w, double q_max, double w_max, double curvature_max, double q_min,
                double w_min);

  double value(double e) const;
  double d1(double e) const;
  double d2(double e) const;

  double w_max() const { return w_max_; }
  double w_min() const { return w_min_; }
  bool is_constant() const { return w_max_ == w_min_; }

 private:
  struct Turning {
    double left, right;
  };
  Turning turning_points(double e) const;
  double level_point(double target, double a, double b, bool increasing) const;

  PotentialSpec w_;
  double q_max_, w_max_, curvature_max_, q_min_, w_min_;
};

enum class Region { A1, A2, A3 };
const char* to_string(Region region);

struct KappaZero {
  double c = 0;
  int order = 1;  // 1 for a simple zero, 2 for "higher"
};

/**
 * The action curve c -> (F1(c), F2(c)) on [c4, c1] with derivatives,
 * curvature, the polar angle alpha(c) and the graph parametrization
 * t -> f(t) used for lattice counting.
 */
class ActionCurve {
 public:
  explicit ActionCurve(MetricSpec metric);

  const MetricSpec& metric() const { return metric_; }
  const CriticalConstants& constants() const { return cc_; }
  double c_min() const { return cc_.c4; }
  double c_max() const { return cc_.c1; }

  double F(double c, int which) const;
  double dF(double c, int which) const;
  double d2F(double c, int which) const;
  double F1(double c) const { return F(c, 1); }
  double F2(double c) const { return F(c, 2); }

  /** F2'' F1' - F1'' F2', the numerator of the curvature. */
  double curvature_numerator(double c) const;
  double kappa(double c) const;
  std::vector<KappaZero> kappa_zeros(double tol = 1e-10) const;

  /** dF_which(c_sep + side*h) / log h for the separatrix of F_which (c2 or c3). */
  std::vector<double> log_asymptotic_ratio(int which, const std::vector<double>& offsets,
                                           int side = 1) const;

  Region region(double c) const;
  bool has_separatrix(int which) const;  // c2 < c1 for 1, c4 < c3 for 2

  double alpha(double c) const;
  double c_at_alpha(double alpha) const;
  double G(double alpha) const;

  double F1_max() const { return F1_at_c4_; }
  double c_at_F1(double t) const;
  /** Graph height f(t) = F2(c) where F1(c) = t, for t in [0, F1(c4)]. */
  double height(double t) const;

 private:
  void check_range(double c) const;
  std::size_t table_index_F1(double t) const;

  MetricSpec metric_;
  CriticalConstants cc_;
  std::shared_ptr<const LevelIntegral> i1_;  // W = U1 at e = c
  std::shared_ptr<const LevelIntegral> i2_;  // W = -U2 at e = -c
  double F1_at_c4_ = 0;
  std::vector<double> table_c_, table_F1_, table_alpha_;
};

struct PolarCurve {
  const ActionCurve* curve = nullptr;
  double alpha0 = 0, alpha1 = 0, alpha2 = 0, alpha3 = 0;
  double m = 0, M = 0;   // bounds on G
  double delta = 0;      // measured separation constant of gamma and (1+eps) gamma
  double lipschitz = 0;  // max |dG/dalpha| over consecutive samples

  double G(double alpha) const { return curve->G(alpha); }
};

/** Polar data from 1024 samples of G; delta measured with eps = 0.01. */
PolarCurve polar(const ActionCurve& ac);

struct PerturbationDirection {
  int perturbed = 1;           // which potential carries the nonzero profile
  std::vector<double> grid;    // sample positions in [0, 1)
  std::vector<double> u1_tilde, u2_tilde;
  PotentialSpec u1_fourier, u2_fourier;  // truncated Fourier projections of the samples
  double epsilon_derivative = 0;         // d/d eps of F2''F1' - F1''F2' at c_tilde
};

/** Perturbation direction moving a curvature zero at c_tilde off zero. */
PerturbationDirection perturbation_direction(const ActionCurve& ac, double c_tilde, double tol = 1e-6,
                                             std::size_t samples = 1024, std::size_t harmonics = 96);

}  // namespace liouville
