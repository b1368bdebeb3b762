#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <memory>
#include <unordered_map>
#include <utility>
#include <vector>

namespace liouville {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

enum class PieceTag { rational_slope, typical_slope, curved };

/** Height and slope of a boundary graph y = f(x). */
struct GraphPoint {
  double height = 0.0;
  double slope = 0.0;
};

/**
 * Curved boundary arc in the closed first quadrant, star-shaped about the
 * origin and a graph over x in [0, radius(0)] that decreases to 0 there.
 * The parameter s runs counterclockwise (increasing polar angle).
 */
class BoundaryCurve {
 public:
  virtual ~BoundaryCurve() = default;

  virtual double radius(double theta) const = 0;
  virtual GraphPoint graph(double x) const = 0;
  virtual double param_at_angle(double theta) const = 0;
  virtual Vec2 point(double s) const = 0;
  virtual Vec2 tangent(double s) const = 0;
  /** Parameters where the curve is not smooth (for quadrature splitting). */
  virtual std::vector<double> breakpoints() const { return {}; }
  /** True when composite Gauss-Legendre panels sized by phase are exact enough. */
  virtual bool uniform_speed() const { return false; }

  /** Distance from p to the curve restricted to s in [s0, s1]. */
  virtual double distance(Vec2 p, double s0, double s1) const;
};

class CircleArc final : public BoundaryCurve {
 public:
  explicit CircleArc(double radius) : r_(radius) {}
  double radius(double) const override { return r_; }
  GraphPoint graph(double x) const override;
  double param_at_angle(double theta) const override { return theta; }
  Vec2 point(double s) const override;
  Vec2 tangent(double s) const override;
  bool uniform_speed() const override { return true; }
  double distance(Vec2 p, double s0, double s1) const override;

 private:
  double r_;
};

/** Straight segment from (x_intercept, 0) to (0, y_intercept). */
class Hypotenuse final : public BoundaryCurve {
 public:
  Hypotenuse(double x_intercept, double y_intercept) : a_(x_intercept), b_(y_intercept) {}
  double radius(double theta) const override;
  GraphPoint graph(double x) const override;
  double param_at_angle(double theta) const override;
  Vec2 point(double s) const override;
  Vec2 tangent(double s) const override;
  bool uniform_speed() const override { return true; }

 private:
  double a_, b_;
};

/** Membership of a point relative to a closed domain with a boundary band. */
enum class Membership { outside = -1, boundary = 0, interior = 1 };

/**
 * Planar domain star-shaped about the origin: either a disk centered at the
 * origin, or a sector theta_lo <= theta <= theta_hi (inside the first
 * quadrant) under a BoundaryCurve.
 */
class StarDomain {
 public:
  static StarDomain disk(double radius = 1.0);
  static StarDomain quarter_disk(double radius = 1.0);
  static StarDomain sector(std::shared_ptr<const BoundaryCurve> curve, double theta_lo, double theta_hi,
                           PieceTag lo_tag = PieceTag::rational_slope,
                           PieceTag hi_tag = PieceTag::rational_slope);

  bool is_disk() const { return disk_; }
  double theta_min() const { return theta_lo_; }
  double theta_max() const { return theta_hi_; }
  double radius(double theta) const;
  double area() const;
  double max_radius() const;
  double x_min() const;
  double x_max() const;
  const BoundaryCurve& curve() const { return *curve_; }

  struct Piece {
    enum class Kind { segment, arc } kind;
    PieceTag tag;
    Vec2 start, end;     // segments
    double s0 = 0, s1 = 0;  // arcs
  };
  /** Boundary pieces in counterclockwise order. */
  std::vector<Piece> pieces() const;

  /** Closed-domain membership without tolerance. */
  bool contains(Vec2 p) const;
  /** Polar classification with a boundary band of half-width tol. */
  Membership classify(Vec2 p, double tol) const;
  double boundary_distance(Vec2 p) const;

  /** Vertical section at abscissa x: [lo, hi] plus slopes of the bounding graphs. */
  struct Column {
    bool empty = true;
    double lo = 0, hi = 0;
    double lo_slope = 0, hi_slope = 0;
    bool hi_on_curve = false;  // hi lies on the arc (else on a ray)
  };
  Column column(double x) const;

 private:
  bool disk_ = false;
  double theta_lo_ = 0, theta_hi_ = 0;
  PieceTag lo_tag_ = PieceTag::rational_slope, hi_tag_ = PieceTag::rational_slope;
  std::shared_ptr<const BoundaryCurve> curve_;
  double x_corner_hi_ = 0;  // abscissa where the upper ray meets the arc
  double x_end_ = 0;        // abscissa where the lower ray meets the arc
};

struct LatticeCount {
  std::int64_t interior = 0;
  std::int64_t boundary = 0;
  double weighted() const { return static_cast<double>(interior) + 0.5 * static_cast<double>(boundary); }
  LatticeCount& operator+=(const LatticeCount& o) {
    interior += o.interior;
    boundary += o.boundary;
    return *this;
  }
};

/** Weighted count of (2 pi Z^2 + a) and (2 pi Z^2 - a) in rD, boundary band 1e-9 r. */
LatticeCount count_exact(const StarDomain& D, Vec2 a, double r);

/** Count for the single translate 2 pi Z^2 + a. */
LatticeCount count_translate(const StarDomain& D, Vec2 a, double r, double tol);

/**
 * Radial bump: psi = 1 on [0, 1/3], psi = T(s)^p on [1/3, b] with T a
 * smooth step to 0 at b = 0.9, and p chosen so that the plane integral of
 * psi(|x|) equals 1.
 */
class Mollifier {
 public:
  Mollifier();
  double profile(double s) const;
  double kernel(Vec2 x, double eps) const;
  double mass() const;             // 2 pi int psi(s) s ds
  double fourier(double xi) const;  // 2 pi int psi(s) J0(xi s) s ds
  double support() const { return support_; }
  double exponent() const { return exponent_; }
  static constexpr double flat_radius = 1.0 / 3.0;

 private:
  double step(double s) const;
  double support_ = 0.9;
  double exponent_ = 1.0;
};

/** Sum over both translates of (Psi_eps * chi_D)(k / r), eps = r^{-eps_exponent}. */
double count_mollified(const StarDomain& D, Vec2 a, double r, double eps_exponent = 4.0 / 3.0);

/** Number of lattice points whose mollified value needed quadrature in the last call pattern. */
struct MollifiedDetail {
  double value = 0.0;
  std::int64_t shell_points = 0;
};
MollifiedDetail count_mollified_detail(const StarDomain& D, Vec2 a, double r,
                                       double eps_exponent = 4.0 / 3.0);

/** Fourier transform of chi_D at r k via the boundary integral; k != 0. */
std::complex<double> chi_hat(const StarDomain& D, std::pair<int, int> k, double r);

/** (r^2 / 2 pi^2) sum_{|k| <= kmax} cos<a,k> chi_hat(D, k, r) Psi_hat(r^{-1/3} k). */
double poisson_partial_sum(const StarDomain& D, Vec2 a, double r, int kmax);

struct SlopeTag {
  bool rational = true;
  std::int64_t p = 0, q = 1;  // slope p / q for rational rays
  double alpha = 0.0;         // slope for typical rays
  static SlopeTag make_rational(std::int64_t p, std::int64_t q) { return {true, p, q, 0.0}; }
  static SlopeTag make_typical(double alpha) { return {false, 0, 1, alpha}; }
};

/** Points v of 2 pi Z^2 + a with 0 < dist(v, ray) <= r^{-1/3}; the ray has length r. */
std::int64_t near_line_count(const SlopeTag& slope, Vec2 a, double r);

struct RemainderPoint {
  double r = 0.0;
  double R = 0.0;
};

/** Exact counts minus Area r^2 / (2 pi^2) at each r (parallel over r). */
std::vector<RemainderPoint> remainder_series(const StarDomain& D, Vec2 a, const std::vector<double>& r_values);

struct ExponentFit {
  double exponent = 0.0;
  double constant = 0.0;
  std::size_t blocks = 0;
};

/** Log-log least squares of the dyadic-block max |R| against r. */
ExponentFit fit_exponent(const std::vector<RemainderPoint>& series);

}  // namespace liouville
