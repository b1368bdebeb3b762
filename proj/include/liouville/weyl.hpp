#pragma once

#include <memory>
#include <string>
#include <vector>

#include "liouville/actions.hpp"
#include "liouville/diophantine.hpp"
#include "liouville/ebk.hpp"
#include "liouville/lattice.hpp"

namespace liouville {

/**
 * The action curve as a BoundaryCurve with parameter c in [c4, c1].
 * F1 and F2 are replaced by piecewise Chebyshev interpolants on panels
 * graded geometrically toward c4, c3, c2 and c1 so that lattice counting at
 * large r does not pay for a quadrature per query.
 */
class ActionDomainCurve final : public BoundaryCurve {
 public:
  explicit ActionDomainCurve(std::shared_ptr<const ActionCurve> curve);

  double radius(double theta) const override;
  GraphPoint graph(double x) const override;
  double param_at_angle(double theta) const override { return c_at_alpha(theta); }
  Vec2 point(double c) const override { return {F1(c), F2(c)}; }
  Vec2 tangent(double c) const override;
  std::vector<double> breakpoints() const override;

  double F1(double c) const;
  double F2(double c) const;
  double c_at_alpha(double alpha) const;
  double c_at_F1(double t) const;
  const ActionCurve& action_curve() const { return *curve_; }

 private:
  struct Panel {
    double a, b;
    std::vector<double> f1, f2;  // values at Chebyshev-Lobatto nodes
  };
  double interpolate(const Panel& p, const std::vector<double>& values, double c) const;
  const Panel& panel_for(double c) const;

  std::shared_ptr<const ActionCurve> curve_;
  std::vector<Panel> panels_;
  std::vector<double> panel_starts_;
  std::vector<double> node_unit_, weight_;  // nodes on [-1, 1] and barycentric weights
};

/** Action domains A (whole quarter) and A1, A2, A3 as star domains over the interpolated curve. */
struct ActionDomains {
  std::shared_ptr<const ActionDomainCurve> curve;
  double alpha1 = 0, alpha2 = 0;
  StarDomain whole() const;
  bool has(Region r) const;  // false when the sector has zero opening
  StarDomain region(Region r) const;
  Vec2 shift(Region r) const;  // (0, pi/2) in A1, 0 in A2, (pi/2, 0) in A3
};
ActionDomains action_domains(std::shared_ptr<const ActionCurve> ac);

double area_torus(const MetricSpec& m);
/** 1/2 int_0^{pi/2} G(alpha)^2 d alpha over the interpolated curve, split at alpha1 and alpha2. */
double area_action_domain(const ActionCurve& ac);

enum class Source { direct, ebk, lattice };
const char* to_string(Source s);
Source parse_source(const std::string& s);

struct RemainderSample {
  double lambda = 0.0;
  double N = 0.0, N_min = 0.0, N_max = 0.0;
  double weyl_term = 0.0;
  double R = 0.0;
  double R_worst() const;  // the endpoint of [N_min, N_max] - weyl_term farther from zero
};

struct RemainderSeries {
  Source source = Source::lattice;
  double area_torus = 0.0;
  std::vector<RemainderSample> samples;
  bool fitted = false;
  double exponent = 0.0, constant = 0.0;
  std::string fit_note;  // why no fit was made
};

/** Lattice-source count 2 [N_(0,pi/2)(A1) + N_0(A2) + N_(pi/2,0)(A3)] - 1 with transition bands. */
CountInterval lattice_count(const ActionDomains& domains, double lambda);

RemainderSeries remainder_series(Source source, const MetricSpec& m, const std::vector<double>& lambda_values);

/** Exponent of the series from lattice::fit_exponent on the worst-case remainders. */
void fit_series(RemainderSeries& series);

struct NondegeneracyItem {
  int index = 0;
  std::string name;
  std::vector<double> values;
  std::vector<TypicalityReport> typicality;
  bool passed = false;
  std::string detail;
};

struct NondegeneracyReport {
  bool revolution = false;
  double tau = 2.0;
  std::int64_t kmax = 0;
  std::vector<KappaZero> kappa_zeros;
  std::vector<NondegeneracyItem> items;  // conditions (1)..(4)
  bool passed() const;
};

NondegeneracyReport nondegeneracy_report(const MetricSpec& m, double tau = 2.0, std::int64_t kmax = 100000);

struct WeylConstantFit {
  double coefficient = 0.0;
  double expected = 0.0;
  double relative_error = 0.0;
};
/** Least-squares coefficient a of N = a lambda^2, compared with Area(T) / (4 pi). */
WeylConstantFit infer_weyl_constant(const RemainderSeries& series);

/**
 * Comparison fixture with a rational-slope edge: the triangle under the
 * segment (1, 0)-(0, 1). At r just below 2 pi n, n + 1 points of 2 pi Z^2
 * sit on r times the hypotenuse and all leave the count together.
 */
StarDomain degenerate_fixture();
std::vector<double> resonant_radii(int n_min, int n_max, int count);

}  // namespace liouville
