#include "liouville/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "liouville/errors.hpp"
#include "liouville/parallel.hpp"
#include "quadrature.hpp"

namespace liouville {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kBoundaryBand = 1e-9;

double segment_distance(Vec2 p, Vec2 a, Vec2 b) {
  const double ex = b.x - a.x, ey = b.y - a.y;
  const double len2 = ex * ex + ey * ey;
  double s = len2 > 0 ? ((p.x - a.x) * ex + (p.y - a.y) * ey) / len2 : 0.0;
  s = std::clamp(s, 0.0, 1.0);
  return std::hypot(p.x - a.x - s * ex, p.y - a.y - s * ey);
}

bool is_vertical(double theta) { return theta >= kPi / 2 - 1e-15; }

}  // namespace

// ---------------------------------------------------------------------------
// Boundary curves

double BoundaryCurve::distance(Vec2 p, double s0, double s1) const {
  constexpr int kSamples = 256;
  auto d = [&](double s) {
    const Vec2 q = point(s);
    return std::hypot(p.x - q.x, p.y - q.y);
  };
  int best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= kSamples; ++i) {
    const double v = d(s0 + (s1 - s0) * i / kSamples);
    if (v < best_d) best_d = v, best = i;
  }
  // golden-section refinement around the best sample
  double a = s0 + (s1 - s0) * std::max(0, best - 1) / kSamples;
  double b = s0 + (s1 - s0) * std::min(kSamples, best + 1) / kSamples;
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = b - g * (b - a), x2 = a + g * (b - a);
  double f1 = d(x1), f2 = d(x2);
  for (int it = 0; it < 80; ++it) {
    if (f1 < f2) {
      b = x2, x2 = x1, f2 = f1;
      x1 = b - g * (b - a), f1 = d(x1);
    } else {
      a = x1, x1 = x2, f1 = f2;
      x2 = a + g * (b - a), f2 = d(x2);
    }
  }
  return std::min({best_d, f1, f2});
}

GraphPoint CircleArc::graph(double x) const {
  const double h = std::sqrt(std::max(0.0, r_ * r_ - x * x));
  const double slope = h > 0 ? -x / h : -std::numeric_limits<double>::infinity();
  return {h, slope};
}

Vec2 CircleArc::point(double s) const { return {r_ * std::cos(s), r_ * std::sin(s)}; }

Vec2 CircleArc::tangent(double s) const { return {-r_ * std::sin(s), r_ * std::cos(s)}; }

double CircleArc::distance(Vec2 p, double s0, double s1) const {
  double theta = std::atan2(p.y, p.x);
  if (theta < s0) theta += kTwoPi;
  if (theta >= s0 && theta <= s1) return std::abs(std::hypot(p.x, p.y) - r_);
  const Vec2 a = point(s0), b = point(s1);
  return std::min(std::hypot(p.x - a.x, p.y - a.y), std::hypot(p.x - b.x, p.y - b.y));
}

double Hypotenuse::radius(double theta) const {
  return 1.0 / (std::cos(theta) / a_ + std::sin(theta) / b_);
}

GraphPoint Hypotenuse::graph(double x) const { return {std::max(0.0, b_ * (1.0 - x / a_)), -b_ / a_}; }

double Hypotenuse::param_at_angle(double theta) const { return radius(theta) * std::sin(theta) / b_; }

Vec2 Hypotenuse::point(double s) const { return {a_ * (1.0 - s), b_ * s}; }

Vec2 Hypotenuse::tangent(double) const { return {-a_, b_}; }

// ---------------------------------------------------------------------------
// StarDomain

StarDomain StarDomain::disk(double radius) {
  StarDomain d;
  d.disk_ = true;
  d.theta_lo_ = 0.0;
  d.theta_hi_ = kTwoPi;
  d.lo_tag_ = d.hi_tag_ = PieceTag::curved;
  d.curve_ = std::make_shared<CircleArc>(radius);
  d.x_end_ = radius;
  return d;
}

StarDomain StarDomain::quarter_disk(double radius) {
  return sector(std::make_shared<CircleArc>(radius), 0.0, kPi / 2);
}

StarDomain StarDomain::sector(std::shared_ptr<const BoundaryCurve> curve, double theta_lo, double theta_hi,
                              PieceTag lo_tag, PieceTag hi_tag) {
  if (!(theta_lo >= 0.0 && theta_lo < theta_hi && theta_hi <= kPi / 2 + 1e-15))
    fail(ErrorCode::OutOfRange, "sector angles must satisfy 0 <= lo < hi <= pi/2");
  StarDomain d;
  d.curve_ = std::move(curve);
  d.theta_lo_ = theta_lo;
  d.theta_hi_ = is_vertical(theta_hi) ? kPi / 2 : theta_hi;
  d.lo_tag_ = lo_tag;
  d.hi_tag_ = hi_tag;
  d.x_end_ = d.curve_->radius(theta_lo) * std::cos(theta_lo);
  d.x_corner_hi_ = is_vertical(d.theta_hi_) ? 0.0 : d.curve_->radius(d.theta_hi_) * std::cos(d.theta_hi_);
  return d;
}

double StarDomain::radius(double theta) const { return curve_->radius(theta); }

double StarDomain::area() const {
  if (disk_) {
    const double r = curve_->radius(0.0);
    return kPi * r * r;
  }
  std::vector<double> cuts{theta_lo_};
  for (double s : curve_->breakpoints()) {
    const Vec2 p = curve_->point(s);
    const double t = std::atan2(p.y, p.x);
    if (t > theta_lo_ && t < theta_hi_) cuts.push_back(t);
  }
  cuts.push_back(theta_hi_);
  std::sort(cuts.begin(), cuts.end());
  double total = 0.0;
  auto f = [&](double t) {
    const double rho = curve_->radius(t);
    return 0.5 * rho * rho;
  };
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
    total += quad::integrate_endpoint_singular(f, cuts[i], cuts[i + 1], 1e-14);
  return total;
}

double StarDomain::max_radius() const {
  if (disk_) return curve_->radius(0.0);
  double best = 0.0;
  for (int i = 0; i <= 512; ++i) best = std::max(best, curve_->radius(theta_lo_ + (theta_hi_ - theta_lo_) * i / 512));
  return best;
}

double StarDomain::x_min() const { return disk_ ? -x_end_ : 0.0; }

double StarDomain::x_max() const { return x_end_; }

std::vector<StarDomain::Piece> StarDomain::pieces() const {
  using Kind = Piece::Kind;
  if (disk_) return {Piece{Kind::arc, PieceTag::curved, {}, {}, 0.0, kTwoPi}};
  const double s_lo = curve_->param_at_angle(theta_lo_);
  const double s_hi = curve_->param_at_angle(theta_hi_);
  const Vec2 e_lo = curve_->point(s_lo), e_hi = curve_->point(s_hi);
  return {Piece{Kind::segment, lo_tag_, {0.0, 0.0}, e_lo, 0, 0},
          Piece{Kind::arc, PieceTag::curved, {}, {}, s_lo, s_hi},
          Piece{Kind::segment, hi_tag_, e_hi, {0.0, 0.0}, 0, 0}};
}

bool StarDomain::contains(Vec2 p) const {
  const double n = std::hypot(p.x, p.y);
  if (disk_) return n <= x_end_;
  if (n == 0.0) return true;
  const double theta = std::atan2(p.y, p.x);
  if (theta < theta_lo_ || theta > theta_hi_) return false;
  return n <= curve_->radius(theta);
}

Membership StarDomain::classify(Vec2 p, double tol) const {
  const double n = std::hypot(p.x, p.y);
  if (disk_) {
    const double d = x_end_ - n;
    return d < -tol ? Membership::outside : (d <= tol ? Membership::boundary : Membership::interior);
  }
  if (n <= tol) return Membership::boundary;
  const double dl = p.y * std::cos(theta_lo_) - p.x * std::sin(theta_lo_);
  const double du = is_vertical(theta_hi_) ? p.x : p.x * std::sin(theta_hi_) - p.y * std::cos(theta_hi_);
  if (dl < -tol || du < -tol) return Membership::outside;
  const double theta = std::clamp(std::atan2(p.y, p.x), theta_lo_, theta_hi_);
  const double dr = curve_->radius(theta) - n;
  if (dr < -tol) return Membership::outside;
  if (dl <= tol || du <= tol || dr <= tol) return Membership::boundary;
  return Membership::interior;
}

double StarDomain::boundary_distance(Vec2 p) const {
  if (disk_) return std::abs(std::hypot(p.x, p.y) - x_end_);
  double best = std::numeric_limits<double>::infinity();
  for (const Piece& piece : pieces()) {
    if (piece.kind == Piece::Kind::segment) best = std::min(best, segment_distance(p, piece.start, piece.end));
    else best = std::min(best, curve_->distance(p, piece.s0, piece.s1));
  }
  return best;
}

StarDomain::Column StarDomain::column(double x) const {
  Column col;
  if (disk_) {
    if (x < -x_end_ || x > x_end_) return col;
    const GraphPoint g = curve_->graph(x);
    col.empty = false;
    col.lo = -g.height, col.hi = g.height;
    col.lo_slope = -g.slope, col.hi_slope = g.slope;
    col.hi_on_curve = true;
    return col;
  }
  if (x < 0.0 || x > x_end_) return col;
  col.empty = false;
  col.lo = theta_lo_ == 0.0 ? 0.0 : x * std::tan(theta_lo_);
  col.lo_slope = std::tan(theta_lo_);
  if (!is_vertical(theta_hi_) && x <= x_corner_hi_) {
    col.hi = x * std::tan(theta_hi_);
    col.hi_slope = std::tan(theta_hi_);
  } else {
    const GraphPoint g = curve_->graph(x);
    col.hi = g.height;
    col.hi_slope = g.slope;
    col.hi_on_curve = true;
  }
  col.hi = std::max(col.hi, col.lo);
  return col;
}

// ---------------------------------------------------------------------------
// Exact counting

LatticeCount count_translate(const StarDomain& D, Vec2 a, double r, double tol) {
  LatticeCount count;
  const double x_lo = r * D.x_min() - tol, x_hi = r * D.x_max() + tol;
  const auto k_begin = static_cast<std::int64_t>(std::ceil((x_lo - a.x) / kTwoPi));
  const auto k_end = static_cast<std::int64_t>(std::floor((x_hi - a.x) / kTwoPi));
  const bool y_axis_edge = !D.is_disk() && is_vertical(D.theta_max());
  const double unit_tol = tol / r;

  for (std::int64_t k = k_begin; k <= k_end; ++k) {
    const double X = kTwoPi * static_cast<double>(k) + a.x;
    const double x = std::clamp(X / r, D.x_min(), D.x_max());
    const StarDomain::Column col = D.column(x);
    if (col.empty) continue;
    const double lo = r * col.lo, hi = r * col.hi;
    auto j_at_least = [&](double y) { return static_cast<std::int64_t>(std::ceil((y - a.y) / kTwoPi)); };
    auto j_at_most = [&](double y) { return static_cast<std::int64_t>(std::floor((y - a.y) / kTwoPi)); };

    if (y_axis_edge && std::abs(X) <= tol) {
      const std::int64_t j0 = j_at_least(lo - tol), j1 = j_at_most(hi + tol);
      if (j1 >= j0) count.boundary += j1 - j0 + 1;
      continue;
    }
    // vertical half-width of the boundary band, capped at the column span
    const double cap = hi - lo + 2.0 * tol;
    const double band_lo = std::min(cap, 2.0 * tol * (1.0 + std::abs(col.lo_slope)));
    const double band_hi = std::min(cap, 2.0 * tol * (1.0 + std::abs(col.hi_slope)));
    const std::int64_t j_min = j_at_least(lo - band_lo);
    const std::int64_t j_max = j_at_most(hi + band_hi);
    if (j_min > j_max) continue;

    auto classify_range = [&](std::int64_t j0, std::int64_t j1) {
      for (std::int64_t j = j0; j <= j1; ++j) {
        const double Y = kTwoPi * static_cast<double>(j) + a.y;
        switch (D.classify({X / r, Y / r}, unit_tol)) {
          case Membership::interior: ++count.interior; break;
          case Membership::boundary: ++count.boundary; break;
          case Membership::outside: break;
        }
      }
    };
    const std::int64_t i_lo = std::max(j_min, j_at_most(lo + band_lo) + 1);
    const std::int64_t i_hi = std::min(j_max, j_at_least(hi - band_hi) - 1);
    if (i_lo <= i_hi) {
      count.interior += i_hi - i_lo + 1;
      classify_range(j_min, i_lo - 1);
      classify_range(i_hi + 1, j_max);
    } else {
      classify_range(j_min, j_max);
    }
  }
  return count;
}

LatticeCount count_exact(const StarDomain& D, Vec2 a, double r) {
  if (!(r > 0)) fail(ErrorCode::OutOfRange, "r must be positive");
  const double tol = kBoundaryBand * r;
  LatticeCount total = count_translate(D, a, r, tol);
  total += count_translate(D, {-a.x, -a.y}, r, tol);
  return total;
}

// ---------------------------------------------------------------------------
// Lattice points near a ray

std::int64_t near_line_count(const SlopeTag& slope, Vec2 a, double r) {
  if (!(r > 1)) fail(ErrorCode::OutOfRange, "r must exceed 1");
  double ux, uy;
  if (slope.rational) {
    if (slope.p == 0 && slope.q == 0) fail(ErrorCode::OutOfRange, "slope p/q needs (p, q) != 0");
    const double n = std::hypot(static_cast<double>(slope.p), static_cast<double>(slope.q));
    ux = static_cast<double>(slope.q) / n, uy = static_cast<double>(slope.p) / n;
  } else {
    const double n = std::hypot(1.0, slope.alpha);
    ux = 1.0 / n, uy = slope.alpha / n;
  }
  const double delta = std::pow(r, -1.0 / 3.0);
  const Vec2 end{r * ux, r * uy};
  const double x_lo = std::min(0.0, end.x) - delta, x_hi = std::max(0.0, end.x) + delta;
  const double y_lo = std::min(0.0, end.y) - delta, y_hi = std::max(0.0, end.y) + delta;
  const double on_line = 1e-12 * std::max(1.0, r);

  std::int64_t count = 0;
  const auto k_begin = static_cast<std::int64_t>(std::ceil((x_lo - a.x) / kTwoPi));
  const auto k_end = static_cast<std::int64_t>(std::floor((x_hi - a.x) / kTwoPi));
  for (std::int64_t k = k_begin; k <= k_end; ++k) {
    const double X = kTwoPi * static_cast<double>(k) + a.x;
    double lo = y_lo, hi = y_hi;
    if (std::abs(ux) > 1e-12) {
      const double y_line = X * uy / ux, half = delta / std::abs(ux);
      lo = std::max(lo, y_line - half);
      hi = std::min(hi, y_line + half);
    }
    const auto j0 = static_cast<std::int64_t>(std::ceil((lo - a.y) / kTwoPi));
    const auto j1 = static_cast<std::int64_t>(std::floor((hi - a.y) / kTwoPi));
    for (std::int64_t j = j0; j <= j1; ++j) {
      const Vec2 v{X, kTwoPi * static_cast<double>(j) + a.y};
      bool exactly_on = false;
      if (slope.rational && a.x == 0.0 && a.y == 0.0) {
        // (2 pi k, 2 pi j) lies on the line through the origin iff p k == q j
        exactly_on = slope.p * k == slope.q * j;
        const double along = v.x * ux + v.y * uy;
        exactly_on = exactly_on && along >= 0.0 && along <= r;
      }
      const double d = segment_distance(v, {0.0, 0.0}, end);
      if (exactly_on || d <= on_line) continue;
      if (d <= delta) ++count;
    }
  }
  return count;
}

// ---------------------------------------------------------------------------
// Remainders and exponent fits

std::vector<RemainderPoint> remainder_series(const StarDomain& D, Vec2 a, const std::vector<double>& r_values) {
  if (!std::is_sorted(r_values.begin(), r_values.end()))
    fail(ErrorCode::OutOfRange, "r values must be sorted ascending");
  const double area = D.area();
  std::vector<RemainderPoint> out(r_values.size());
  parallel_for(r_values.size(), [&](std::size_t i) {
    const double r = r_values[i];
    out[i] = {r, count_exact(D, a, r).weighted() - area * r * r / (2.0 * kPi * kPi)};
  });
  return out;
}

ExponentFit fit_exponent(const std::vector<RemainderPoint>& series) {
  if (series.size() < 8) fail(ErrorCode::InsufficientRange, "need at least 8 samples");
  double r_min = std::numeric_limits<double>::infinity(), r_max = 0.0;
  for (const auto& s : series) {
    if (!(s.r > 0)) fail(ErrorCode::InsufficientRange, "r values must be positive");
    r_min = std::min(r_min, s.r);
    r_max = std::max(r_max, s.r);
  }
  if (std::log10(r_max / r_min) < 1.5) fail(ErrorCode::InsufficientRange, "samples must span 1.5 decades");

  // Max |R| over each dyadic block [r_min 2^b, r_min 2^{b+1}).
  std::vector<std::pair<double, double>> envelope;  // (r at the max, max |R|)
  std::vector<int> block_of(series.size());
  int last_block = -1;
  for (const auto& s : series) {
    const int b = static_cast<int>(std::floor(std::log2(s.r / r_min) + 1e-12));
    const double v = std::abs(s.R);
    if (b != last_block) {
      envelope.emplace_back(s.r, v);
      last_block = b;
    } else if (v > envelope.back().second) {
      envelope.back() = {s.r, v};
    }
  }
  std::vector<std::pair<double, double>> pts;
  for (const auto& [r, v] : envelope)
    if (v > 0) pts.emplace_back(std::log(r), std::log(v));
  if (pts.size() < 2) fail(ErrorCode::InsufficientRange, "fewer than two nonzero dyadic blocks");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& [x, y] : pts) sx += x, sy += y, sxx += x * x, sxy += x * y;
  const double n = static_cast<double>(pts.size());
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  const double intercept = (sy - slope * sx) / n;
  return {slope, std::exp(intercept), pts.size()};
}

}  // namespace liouville
