#include "liouville/actions.hpp"

#include <algorithm>
#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <functional>
#include <tuple>
#include <limits>
#include <numbers>

#include "liouville/errors.hpp"
#include "quadrature.hpp"

namespace liouville {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTaylorSwitch = 1e-2;  // u^2 below which the level gap uses its Taylor form
constexpr int kTaylorTerms = 16;
constexpr std::size_t kTableIntervals = 1024;

// Level gap D(u)/u^2 with D(u) = W(t + sigma u^2) - e and W(t) = e. Below
// the switch the Taylor series in s = u^2 avoids cancellation in W - e.
struct GapRatio {
  const PotentialSpec& w;
  double t, e, sigma;
  double coeff[kTaylorTerms];  // sigma^k W^(k)(t) / k!, k = 1..

  GapRatio(const PotentialSpec& w_, double t_, double e_, double sigma_)
      : w(w_), t(t_), e(e_), sigma(sigma_) {
    double factorial = 1.0, sign = 1.0;
    for (int k = 1; k <= kTaylorTerms; ++k) {
      factorial *= k;
      sign *= sigma;
      coeff[k - 1] = sign * eval(w_, t_, k) / factorial;
    }
  }

  double operator()(double u) const {
    const double s = u * u;
    if (s < kTaylorSwitch) {
      double acc = 0.0;
      for (int k = kTaylorTerms - 1; k >= 0; --k) acc = acc * s + coeff[k];
      return acc;
    }
    return (eval(w, t + sigma * s, 0) - e) / s;
  }
};

template <class F>
double solve_bracketed(F&& f, double a, double b, double fa, double fb) {
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  std::uintmax_t iterations = 200;
  auto tol = [](double x, double y) { return std::abs(x - y) <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(x)); };
  const auto r = boost::math::tools::toms748_solve(f, a, b, fa, fb, tol, iterations);
  return 0.5 * (r.first + r.second);
}

}  // namespace

// ---------------------------------------------------------------------------
// LevelIntegral

LevelIntegral::LevelIntegral(PotentialSpec w, double q_max, double w_max, double curvature_max,
                             double q_min, double w_min)
    : w_(std::move(w)), q_max_(q_max), w_max_(w_max), curvature_max_(curvature_max), q_min_(q_min),
      w_min_(w_min) {
  double offset = q_max_ - q_min_;
  offset -= std::floor(offset);
  if (offset < 1e-9 || offset > 1.0 - 1e-9) offset = 0.5;
  q_max_ = q_min_ + offset;
}

double LevelIntegral::level_point(double target, double a, double b, bool increasing) const {
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (a + b);
    if (mid <= a || mid >= b) break;
    const bool below = eval(w_, mid, 0) < target;
    if (below == increasing) a = mid;
    else b = mid;
  }
  return 0.5 * (a + b);
}

LevelIntegral::Turning LevelIntegral::turning_points(double e) const {
  return {level_point(e, q_min_, q_max_, true), level_point(e, q_max_, q_min_ + 1.0, false)};
}

double LevelIntegral::value(double e) const {
  if (e >= w_max_) return 0.0;
  if (e <= w_min_) {
    auto g = [&](double q) { return std::sqrt(std::max(0.0, eval(w_, q, 0) - e)); };
    return quad::integrate(g, q_min_, q_max_) + quad::integrate(g, q_max_, q_min_ + 1.0);
  }
  const Turning tp = turning_points(e);
  double total = 0.0;
  for (const auto& [t, end, sigma] : {std::tuple{tp.left, q_max_, 1.0}, std::tuple{tp.right, q_max_, -1.0}}) {
    const GapRatio ratio(w_, t, e, sigma);
    auto g = [&](double u) { return 2.0 * u * u * std::sqrt(std::max(0.0, ratio(u))); };
    total += quad::integrate(g, 0.0, std::sqrt(std::abs(end - t)));
  }
  return total;
}

double LevelIntegral::d1(double e) const {
  if (is_constant()) {
    if (e >= w_max_) fail(ErrorCode::SingularPoint, "derivative diverges at the constant level");
    return -0.5 / std::sqrt(w_max_ - e);
  }
  if (e >= w_max_) return -kPi / std::sqrt(-2.0 * curvature_max_);
  if (e == w_min_) fail(ErrorCode::SingularPoint, "derivative diverges at the separatrix level");
  if (e < w_min_) {
    auto g = [&](double q) { return 1.0 / std::sqrt(eval(w_, q, 0) - e); };
    return -0.5 * (quad::integrate(g, q_min_, q_max_) + quad::integrate(g, q_max_, q_min_ + 1.0));
  }
  const Turning tp = turning_points(e);
  double total = 0.0;
  for (const auto& [t, end, sigma] : {std::tuple{tp.left, q_max_, 1.0}, std::tuple{tp.right, q_max_, -1.0}}) {
    const GapRatio ratio(w_, t, e, sigma);
    auto g = [&](double u) { return 2.0 / std::sqrt(ratio(u)); };
    total += quad::integrate(g, 0.0, std::sqrt(std::abs(end - t)));
  }
  return -0.5 * total;
}

double LevelIntegral::d2(double e) const {
  if (is_constant()) {
    if (e >= w_max_) fail(ErrorCode::SingularPoint, "second derivative diverges at the constant level");
    return -0.25 / std::pow(w_max_ - e, 1.5);
  }
  if (e >= w_max_) fail(ErrorCode::SingularPoint, "second derivative is only a limit at the top level");
  if (e == w_min_) fail(ErrorCode::SingularPoint, "second derivative diverges at the separatrix level");
  if (e < w_min_) {
    auto g = [&](double q) { return std::pow(eval(w_, q, 0) - e, -1.5); };
    return -0.25 * (quad::integrate(g, q_min_, q_max_) + quad::integrate(g, q_max_, q_min_ + 1.0));
  }
  // Split each side at the point s where W - e reaches half its peak gap.
  // On [t, s] substitute w = W(q) and integrate by parts; on [s_L, s_R]
  // differentiate under the integral.
  const Turning tp = turning_points(e);
  const double half = e + 0.5 * (w_max_ - e);
  const double s_left = level_point(half, tp.left, q_max_, true);
  const double s_right = level_point(half, q_max_, tp.right, false);
  double total = 0.0;
  for (const auto& [t, s, sigma] : {std::tuple{tp.left, s_left, 1.0}, std::tuple{tp.right, s_right, -1.0}}) {
    const GapRatio ratio(w_, t, e, sigma);
    auto g = [&](double u) {
      const double q = t + sigma * u * u;
      const double w1 = eval(w_, q, 1);
      return 2.0 / std::sqrt(ratio(u)) * eval(w_, q, 2) / (w1 * w1);
    };
    const double edge = 1.0 / (std::sqrt(eval(w_, s, 0) - e) * std::abs(eval(w_, s, 1)));
    total += -edge - quad::integrate(g, 0.0, std::sqrt(std::abs(s - t)));
  }
  auto mid = [&](double q) { return std::pow(eval(w_, q, 0) - e, -1.5); };
  total += 0.5 * quad::integrate(mid, s_left, s_right);
  return -0.5 * total;
}

// ---------------------------------------------------------------------------
// ActionCurve

const char* to_string(Region region) {
  switch (region) {
    case Region::A1: return "A1";
    case Region::A2: return "A2";
    case Region::A3: return "A3";
  }
  return "?";
}

ActionCurve::ActionCurve(MetricSpec metric) : metric_(std::move(metric)) {
  require_valid(metric_);
  cc_ = critical_constants(metric_);
  i1_ = std::make_shared<LevelIntegral>(metric_.u1, cc_.M1, cc_.c1, cc_.d2U1_M1, cc_.m1, cc_.c2);
  // F2 is the action of W = -U2 at level -c: its top is at m2 and its floor at M2.
  i2_ = std::make_shared<LevelIntegral>(metric_.u2.scaled(-1.0), cc_.m2, -cc_.c4, -cc_.d2U2_m2, cc_.M2,
                                        -cc_.c3);
  if (!(cc_.c1 > cc_.c4)) fail(ErrorCode::InvalidConfig, "action curve needs c1 > c4");

  F1_at_c4_ = F(cc_.c4, 1);
  table_c_.resize(kTableIntervals + 1);
  table_F1_.resize(kTableIntervals + 1);
  table_alpha_.resize(kTableIntervals + 1);
  for (std::size_t i = 0; i <= kTableIntervals; ++i) {
    const double c = i == kTableIntervals
                         ? cc_.c1
                         : cc_.c4 + (cc_.c1 - cc_.c4) * static_cast<double>(i) / kTableIntervals;
    table_c_[i] = c;
    table_F1_[i] = F(c, 1);
    table_alpha_[i] = std::atan2(F(c, 2), table_F1_[i]);
  }
  table_F1_.front() = F1_at_c4_;
  table_F1_.back() = 0.0;
  table_alpha_.front() = 0.0;
  table_alpha_.back() = kPi / 2;
}

void ActionCurve::check_range(double c) const {
  if (!(c >= cc_.c4 && c <= cc_.c1))
    fail(ErrorCode::OutOfRange, "c = " + std::to_string(c) + " outside [c4, c1]");
}

double ActionCurve::F(double c, int which) const {
  check_range(c);
  return which == 1 ? i1_->value(c) : i2_->value(-c);
}

double ActionCurve::dF(double c, int which) const {
  check_range(c);
  return which == 1 ? i1_->d1(c) : -i2_->d1(-c);
}

double ActionCurve::d2F(double c, int which) const {
  check_range(c);
  return which == 1 ? i1_->d2(c) : i2_->d2(-c);
}

bool ActionCurve::has_separatrix(int which) const {
  return which == 1 ? cc_.c2 < cc_.c1 : cc_.c4 < cc_.c3;
}

double ActionCurve::curvature_numerator(double c) const {
  const double band = 1e-6 * (cc_.c1 - cc_.c4);
  if ((has_separatrix(1) && std::abs(c - cc_.c2) < band) ||
      (has_separatrix(2) && std::abs(c - cc_.c3) < band))
    fail(ErrorCode::SingularPoint, "curvature diverges at the separatrix levels");
  return d2F(c, 2) * dF(c, 1) - d2F(c, 1) * dF(c, 2);
}

double ActionCurve::kappa(double c) const {
  const double w = curvature_numerator(c);
  const double a = dF(c, 1), b = dF(c, 2);
  return w / std::pow(a * a + b * b, 1.5);
}

std::vector<KappaZero> ActionCurve::kappa_zeros(double tol) const {
  constexpr int kNodes = 2048;
  const double eps = 1e-4 * (cc_.c1 - cc_.c4);
  std::vector<std::pair<double, double>> intervals;
  if (metric_.kind != MetricKind::revolution && has_separatrix(2))
    intervals.emplace_back(cc_.c4 + eps, cc_.c3 - eps);
  // kappa at c1 itself is a limit; the scan stops eps short of it.
  intervals.emplace_back(cc_.c2 + eps, cc_.c1 - eps);

  std::vector<KappaZero> zeros;
  auto order_of = [&](double c) {
    const double h = 1e-5 * (cc_.c1 - cc_.c4);
    const double slope = (kappa(c + h) - kappa(c - h)) / (2 * h);
    return std::abs(slope) > 1e-6 ? 1 : 2;
  };
  for (const auto& [lo, hi] : intervals) {
    if (!(hi > lo)) continue;
    double prev_c = lo, prev_k = kappa(lo);
    for (int j = 1; j < kNodes; ++j) {
      const double c = lo + (hi - lo) * j / (kNodes - 1);
      const double k = kappa(c);
      if (k == 0.0) {
        zeros.push_back({c, order_of(c)});
      } else if (prev_k != 0.0 && (k < 0) != (prev_k < 0)) {
        double a = prev_c, b = c, fa = prev_k;
        while (b - a > tol) {
          const double m = 0.5 * (a + b);
          const double fm = kappa(m);
          if ((fm < 0) == (fa < 0)) a = m, fa = fm;
          else b = m;
        }
        const double root = 0.5 * (a + b);
        zeros.push_back({root, order_of(root)});
      }
      prev_c = c, prev_k = k;
    }
  }
  return zeros;
}

std::vector<double> ActionCurve::log_asymptotic_ratio(int which, const std::vector<double>& offsets,
                                                      int side) const {
  if (which != 1 && which != 2) fail(ErrorCode::OutOfRange, "which must be 1 or 2");
  if (!has_separatrix(which) || (which == 2 && metric_.kind == MetricKind::revolution))
    fail(ErrorCode::OutOfRange, "no separatrix for this action");
  const double c_sep = which == 1 ? cc_.c2 : cc_.c3;
  std::vector<double> out;
  double previous = std::numeric_limits<double>::infinity();
  for (double h : offsets) {
    if (!(h >= 1e-8) || !(h < previous)) fail(ErrorCode::OutOfRange, "offsets must decrease and stay >= 1e-8");
    previous = h;
    out.push_back(dF(c_sep + (side >= 0 ? h : -h), which) / std::log(h));
  }
  return out;
}

Region ActionCurve::region(double c) const {
  if (c <= cc_.c3) return Region::A1;
  if (c >= cc_.c2) return Region::A3;
  return Region::A2;
}

double ActionCurve::alpha(double c) const { return std::atan2(F(c, 2), F(c, 1)); }

double ActionCurve::c_at_alpha(double a) const {
  if (a <= 0.0) return cc_.c4;
  if (a >= kPi / 2) return cc_.c1;
  const auto it = std::upper_bound(table_alpha_.begin(), table_alpha_.end(), a);
  const std::size_t i = static_cast<std::size_t>(it - table_alpha_.begin()) - 1;
  auto f = [&](double c) { return alpha(c) - a; };
  return solve_bracketed(f, table_c_[i], table_c_[i + 1], table_alpha_[i] - a, table_alpha_[i + 1] - a);
}

double ActionCurve::G(double a) const {
  const double c = c_at_alpha(a);
  return std::hypot(F(c, 1), F(c, 2));
}

std::size_t ActionCurve::table_index_F1(double t) const {
  // table_F1_ is decreasing; find i with F1[i] >= t >= F1[i+1].
  const auto it = std::lower_bound(table_F1_.begin(), table_F1_.end(), t, std::greater<double>());
  std::size_t i = static_cast<std::size_t>(it - table_F1_.begin());
  return i == 0 ? 0 : std::min(i - 1, kTableIntervals - 1);
}

double ActionCurve::c_at_F1(double t) const {
  if (t <= 0.0) return cc_.c1;
  if (t >= F1_at_c4_) return cc_.c4;
  const std::size_t i = table_index_F1(t);
  auto f = [&](double c) { return F(c, 1) - t; };
  return solve_bracketed(f, table_c_[i], table_c_[i + 1], table_F1_[i] - t, table_F1_[i + 1] - t);
}

double ActionCurve::height(double t) const { return F(c_at_F1(t), 2); }

// ---------------------------------------------------------------------------
// Polar form

PolarCurve polar(const ActionCurve& ac) {
  constexpr int kSamples = 1024;
  constexpr double kEps = 0.01;
  const CriticalConstants& cc = ac.constants();
  PolarCurve pc;
  pc.curve = &ac;
  pc.alpha0 = 0.0;
  pc.alpha1 = ac.alpha(cc.c3);
  pc.alpha2 = ac.alpha(cc.c2);
  pc.alpha3 = kPi / 2;

  std::vector<double> xs(kSamples), ys(kSamples), gs(kSamples);
  pc.m = std::numeric_limits<double>::infinity();
  pc.M = 0.0;
  for (int j = 0; j < kSamples; ++j) {
    const double a = (kPi / 2) * j / (kSamples - 1);
    const double c = ac.c_at_alpha(a);
    xs[j] = ac.F(c, 1);
    ys[j] = ac.F(c, 2);
    gs[j] = std::hypot(xs[j], ys[j]);
    pc.m = std::min(pc.m, gs[j]);
    pc.M = std::max(pc.M, gs[j]);
    if (j > 0) {
      const double da = (kPi / 2) / (kSamples - 1);
      pc.lipschitz = std::max(pc.lipschitz, std::abs(gs[j] - gs[j - 1]) / da);
    }
  }
  // Distance from each point of (1+eps) gamma to the polyline through gamma.
  double min_dist = std::numeric_limits<double>::infinity();
  for (int j = 0; j < kSamples; ++j) {
    const double px = (1 + kEps) * xs[j], py = (1 + kEps) * ys[j];
    double best = std::numeric_limits<double>::infinity();
    for (int k = 0; k + 1 < kSamples; ++k) {
      const double ex = xs[k + 1] - xs[k], ey = ys[k + 1] - ys[k];
      const double len2 = ex * ex + ey * ey;
      double s = len2 > 0 ? ((px - xs[k]) * ex + (py - ys[k]) * ey) / len2 : 0.0;
      s = std::clamp(s, 0.0, 1.0);
      best = std::min(best, std::hypot(px - xs[k] - s * ex, py - ys[k] - s * ey));
    }
    min_dist = std::min(min_dist, best);
  }
  pc.delta = min_dist / kEps;
  return pc;
}

// ---------------------------------------------------------------------------
// Perturbation directions

PerturbationDirection perturbation_direction(const ActionCurve& ac, double c_tilde, double tol,
                                             std::size_t samples, std::size_t harmonics) {
  const CriticalConstants& cc = ac.constants();
  const bool low = ac.has_separatrix(2) && c_tilde >= cc.c4 && c_tilde < cc.c3;
  const bool high = c_tilde > cc.c2 && c_tilde <= cc.c1;
  if (!low && !high) fail(ErrorCode::OutOfRange, "c_tilde must lie in [c4, c3) or (c2, c1]");
  const double k = ac.kappa(c_tilde);
  if (std::abs(k) > tol) fail(ErrorCode::NotAZero, "kappa(c_tilde) = " + std::to_string(k));

  constexpr double kClip = 1e-3;
  auto clipped = [&](double x) { return std::abs(x) < kClip ? std::copysign(kClip, x) : x; };
  const MetricSpec& m = ac.metric();
  std::function<double(double)> profile;
  PerturbationDirection out;
  if (low) {
    out.perturbed = 1;
    const double d1 = ac.dF(c_tilde, 2), d2 = ac.d2F(c_tilde, 2);
    profile = [&, d1, d2](double q) {
      const double x = clipped(eval(m.u1, q) - c_tilde);
      return d2 / 4.0 * std::pow(x, -1.5) - 3.0 * d1 / 8.0 * std::pow(x, -2.5);
    };
  } else {
    out.perturbed = 2;
    const double d1 = ac.dF(c_tilde, 1), d2 = ac.d2F(c_tilde, 1);
    profile = [&, d1, d2](double q) {
      const double x = clipped(c_tilde - eval(m.u2, q));
      return -3.0 * d1 / 8.0 * std::pow(x, -2.5) - d2 / 4.0 * std::pow(x, -1.5);
    };
  }

  out.grid.resize(samples);
  std::vector<double> values(samples);
  for (std::size_t j = 0; j < samples; ++j) {
    out.grid[j] = static_cast<double>(j) / samples;
    values[j] = profile(out.grid[j]);
  }
  // Truncated Fourier projection by the trapezoid rule on the periodic grid.
  PotentialSpec fourier;
  for (double v : values) fourier.mean += v / samples;
  for (std::size_t n = 1; n <= harmonics && 2 * n < samples; ++n) {
    double a = 0, b = 0;
    for (std::size_t j = 0; j < samples; ++j) {
      const double arg = 2 * kPi * n * out.grid[j];
      a += values[j] * std::cos(arg);
      b += values[j] * std::sin(arg);
    }
    fourier.harmonics.push_back({2.0 * a / samples, 2.0 * b / samples});
  }
  const std::vector<double> zeros(samples, 0.0);
  if (out.perturbed == 1) {
    out.u1_tilde = values, out.u2_tilde = zeros, out.u1_fourier = fourier;
  } else {
    out.u1_tilde = zeros, out.u2_tilde = values, out.u2_fourier = fourier;
  }
  // With this choice the first variation of F2''F1' - F1''F2' is int profile^2.
  out.epsilon_derivative =
      quad::integrate([&](double q) { const double v = profile(q); return v * v; }, 0.0, 1.0, 1e-12);
  return out;
}

}  // namespace liouville
