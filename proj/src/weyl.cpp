#include "liouville/weyl.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <set>

#include <boost/math/tools/toms748_solve.hpp>

#include "liouville/errors.hpp"
#include "liouville/parallel.hpp"
#include "liouville/sturm.hpp"
#include "quadrature.hpp"

namespace liouville {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr int kChebyshevDegree = 16;
constexpr int kGradingLevels = 28;

template <class F>
double solve_monotone(F&& f, double a, double b, double fa, double fb) {
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  std::uintmax_t iterations = 200;
  auto tol = [](double x, double y) {
    return std::abs(x - y) <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(x));
  };
  const auto r = boost::math::tools::toms748_solve(f, a, b, fa, fb, tol, iterations);
  return 0.5 * (r.first + r.second);
}

// Panel breakpoints on [0, 1], graded geometrically toward both ends.
std::vector<double> unit_breakpoints() {
  std::set<double> cuts{0.0, 1.0};
  for (int k = 3; k <= kGradingLevels; ++k) {
    cuts.insert(std::ldexp(1.0, -k));
    cuts.insert(1.0 - std::ldexp(1.0, -k));
  }
  for (int i = 1; i < 8; ++i) cuts.insert(i / 8.0);
  return {cuts.begin(), cuts.end()};
}

// Integral over one period of f, split at a point where f may have a kink.
template <class F>
double periodic_integral(F&& f, double kink) {
  return quad::integrate([&](double q) { return f(q); }, kink, kink + 1.0, 1e-13);
}

double worst(double a, double b) { return std::abs(a) >= std::abs(b) ? a : b; }

}  // namespace

// ---------------------------------------------------------------------------
// Interpolated action curve

ActionDomainCurve::ActionDomainCurve(std::shared_ptr<const ActionCurve> curve) : curve_(std::move(curve)) {
  const int n = kChebyshevDegree;
  for (int j = 0; j <= n; ++j) {
    node_unit_.push_back(std::cos(kPi * j / n));
    weight_.push_back((j % 2 == 0 ? 1.0 : -1.0) * (j == 0 || j == n ? 0.5 : 1.0));
  }
  const auto& cc = curve_->constants();
  std::vector<std::pair<double, double>> intervals;
  for (auto [a, b] : {std::pair{cc.c4, cc.c3}, std::pair{cc.c3, cc.c2}, std::pair{cc.c2, cc.c1}})
    if (b > a) intervals.emplace_back(a, b);
  const std::vector<double> unit = unit_breakpoints();
  for (auto [a, b] : intervals)
    for (std::size_t i = 0; i + 1 < unit.size(); ++i) {
      const double pa = a + (b - a) * unit[i];
      const double pb = i + 2 == unit.size() ? b : a + (b - a) * unit[i + 1];
      if (pb > pa) panels_.push_back({pa, pb, {}, {}});
    }
  parallel_for(panels_.size(), [&](std::size_t i) {
    Panel& p = panels_[i];
    for (double x : node_unit_) {
      const double c = std::clamp(0.5 * (p.a + p.b) + 0.5 * (p.b - p.a) * x, p.a, p.b);
      p.f1.push_back(curve_->F1(c));
      p.f2.push_back(curve_->F2(c));
    }
  });
  for (const Panel& p : panels_) panel_starts_.push_back(p.a);
}

double ActionDomainCurve::interpolate(const Panel& p, const std::vector<double>& values, double c) const {
  const double x = (2.0 * c - p.a - p.b) / (p.b - p.a);
  double num = 0.0, den = 0.0;
  for (std::size_t j = 0; j < node_unit_.size(); ++j) {
    const double d = x - node_unit_[j];
    if (d == 0.0) return values[j];
    const double w = weight_[j] / d;
    num += w * values[j];
    den += w;
  }
  return num / den;
}

const ActionDomainCurve::Panel& ActionDomainCurve::panel_for(double c) const {
  const auto it = std::upper_bound(panel_starts_.begin(), panel_starts_.end(), c);
  const std::size_t i = it == panel_starts_.begin() ? 0 : static_cast<std::size_t>(it - panel_starts_.begin()) - 1;
  return panels_[std::min(i, panels_.size() - 1)];
}

double ActionDomainCurve::F1(double c) const {
  c = std::clamp(c, curve_->c_min(), curve_->c_max());
  const Panel& p = panel_for(c);
  return interpolate(p, p.f1, c);
}

double ActionDomainCurve::F2(double c) const {
  c = std::clamp(c, curve_->c_min(), curve_->c_max());
  const Panel& p = panel_for(c);
  return interpolate(p, p.f2, c);
}

double ActionDomainCurve::c_at_alpha(double alpha) const {
  if (alpha <= 0.0) return curve_->c_min();
  if (alpha >= kPi / 2) return curve_->c_max();
  auto angle = [&](const Panel& p, std::size_t j) { return std::atan2(p.f2[j], p.f1[j]); };
  // panel ends are the first and last Lobatto nodes (x = 1 at j = 0)
  auto lo_it = std::partition_point(panels_.begin(), panels_.end(),
                                    [&](const Panel& p) { return angle(p, 0) < alpha; });
  const Panel& p = lo_it == panels_.end() ? panels_.back() : *lo_it;
  auto f = [&](double c) { return std::atan2(interpolate(p, p.f2, c), interpolate(p, p.f1, c)) - alpha; };
  return solve_monotone(f, p.a, p.b, angle(p, kChebyshevDegree) - alpha, angle(p, 0) - alpha);
}

double ActionDomainCurve::c_at_F1(double t) const {
  const Panel& first = panels_.front();
  if (t >= first.f1[kChebyshevDegree]) return curve_->c_min();
  if (t <= 0.0) return curve_->c_max();
  // F1 decreases in c: find the first panel whose right-end value is <= t
  auto it = std::partition_point(panels_.begin(), panels_.end(), [&](const Panel& p) { return p.f1[0] > t; });
  const Panel& p = it == panels_.end() ? panels_.back() : *it;
  auto f = [&](double c) { return interpolate(p, p.f1, c) - t; };
  return solve_monotone(f, p.a, p.b, p.f1[kChebyshevDegree] - t, p.f1[0] - t);
}

double ActionDomainCurve::radius(double theta) const {
  const double c = c_at_alpha(theta);
  return std::hypot(F1(c), F2(c));
}

GraphPoint ActionDomainCurve::graph(double x) const {
  const double c = c_at_F1(x);
  const double delta = 1e-7 * (curve_->c_max() - curve_->c_min());
  const double ca = std::max(curve_->c_min(), c - delta), cb = std::min(curve_->c_max(), c + delta);
  const double d1 = F1(cb) - F1(ca), d2 = F2(cb) - F2(ca);
  const double slope = d1 != 0.0 ? d2 / d1 : -std::numeric_limits<double>::infinity();
  return {std::max(0.0, F2(c)), slope};
}

Vec2 ActionDomainCurve::tangent(double c) const {
  try {
    return {curve_->dF(c, 1), curve_->dF(c, 2)};
  } catch (const Error&) {
    const double h = 1e-9 * (curve_->c_max() - curve_->c_min());
    return {(F1(c + h) - F1(c - h)) / (2 * h), (F2(c + h) - F2(c - h)) / (2 * h)};
  }
}

std::vector<double> ActionDomainCurve::breakpoints() const {
  const auto& cc = curve_->constants();
  std::vector<double> out;
  for (double c : {cc.c3, cc.c2})
    if (c > cc.c4 && c < cc.c1) out.push_back(c);
  return out;
}

// ---------------------------------------------------------------------------
// Action domains

ActionDomains action_domains(std::shared_ptr<const ActionCurve> ac) {
  ActionDomains d;
  auto curve = std::make_shared<ActionDomainCurve>(ac);
  const auto& cc = ac->constants();
  d.alpha1 = cc.c3 > cc.c4 ? std::atan2(curve->F2(cc.c3), curve->F1(cc.c3)) : 0.0;
  d.alpha2 = cc.c2 < cc.c1 ? std::atan2(curve->F2(cc.c2), curve->F1(cc.c2)) : kPi / 2;
  d.curve = std::move(curve);
  return d;
}

StarDomain ActionDomains::whole() const { return StarDomain::sector(curve, 0.0, kPi / 2); }

bool ActionDomains::has(Region r) const {
  switch (r) {
    case Region::A1: return alpha1 > 1e-12;
    case Region::A2: return alpha2 - alpha1 > 1e-12;
    case Region::A3: return kPi / 2 - alpha2 > 1e-12;
  }
  return false;
}

StarDomain ActionDomains::region(Region r) const {
  switch (r) {
    case Region::A1: return StarDomain::sector(curve, 0.0, alpha1, PieceTag::rational_slope, PieceTag::typical_slope);
    case Region::A2: return StarDomain::sector(curve, alpha1, alpha2, PieceTag::typical_slope, PieceTag::typical_slope);
    case Region::A3:
      return StarDomain::sector(curve, alpha2, kPi / 2, PieceTag::typical_slope, PieceTag::rational_slope);
  }
  return whole();
}

Vec2 ActionDomains::shift(Region r) const {
  switch (r) {
    case Region::A1: return {0.0, kPi / 2};
    case Region::A2: return {0.0, 0.0};
    case Region::A3: return {kPi / 2, 0.0};
  }
  return {};
}

double area_torus(const MetricSpec& m) { return m.u1.mean - m.u2.mean; }

double area_action_domain(const ActionCurve& ac) {
  // G from the interpolated curve: exact actions near c1 and c4 are too slow for
  // the endpoint clustering of the double-exponential rule
  const ActionDomainCurve curve(std::make_shared<const ActionCurve>(ac));
  const auto& cc = ac.constants();
  std::vector<double> cuts{0.0};
  for (double c : {cc.c3, cc.c2})
    if (c > cc.c4 && c < cc.c1) cuts.push_back(std::atan2(curve.F2(c), curve.F1(c)));
  cuts.push_back(kPi / 2);
  std::sort(cuts.begin(), cuts.end());
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
    total += quad::integrate_endpoint_singular([&](double a) { return 0.5 * std::pow(curve.radius(a), 2); },
                                                cuts[i], cuts[i + 1], 1e-12);
  return total;
}

// ---------------------------------------------------------------------------
// Remainder series

const char* to_string(Source s) {
  switch (s) {
    case Source::direct: return "direct";
    case Source::ebk: return "ebk";
    case Source::lattice: return "lattice";
  }
  return "?";
}

Source parse_source(const std::string& s) {
  if (s == "direct") return Source::direct;
  if (s == "ebk") return Source::ebk;
  if (s == "lattice") return Source::lattice;
  fail(ErrorCode::InvalidConfig, "unknown source '" + s + "'");
}

double RemainderSample::R_worst() const { return worst(N_min - weyl_term, N_max - weyl_term); }

CountInterval lattice_count(const ActionDomains& domains, double lambda) {
  double weighted = 0.0;
  std::vector<std::pair<Region, StarDomain>> sectors;
  for (Region r : {Region::A1, Region::A2, Region::A3}) {
    if (!domains.has(r)) continue;
    sectors.emplace_back(r, domains.region(r));
    weighted += count_exact(sectors.back().second, domains.shift(r), lambda).weighted();
  }
  CountInterval out;
  out.N = 2.0 * weighted - 1.0;

  // Points near a separatrix ray whose lattice assignment is uncertain.
  const ActionCurve& ac = domains.curve->action_curve();
  const auto& cc = ac.constants();
  const double w = std::pow(lambda, -2.0 / 3.0);
  double u_in = 0.0, u_out = 0.0;
  const double tol = 1e-9 * lambda;
  for (auto [c_sep, below, above] : {std::tuple{cc.c3, Region::A1, Region::A2}, std::tuple{cc.c2, Region::A2, Region::A3}}) {
    if (!(c_sep > cc.c4 && c_sep < cc.c1)) continue;
    const double ca = std::max(cc.c4, c_sep - w), cb = std::min(cc.c1, c_sep + w);
    const double ta = std::atan2(domains.curve->F2(ca), domains.curve->F1(ca));
    const double tb = std::atan2(domains.curve->F2(cb), domains.curve->F1(cb));
    double g_lo = std::numeric_limits<double>::infinity(), g_hi = 0.0;
    for (int i = 0; i <= 8; ++i) {
      const double g = domains.curve->radius(ta + (tb - ta) * i / 8);
      g_lo = std::min(g_lo, g);
      g_hi = std::max(g_hi, g);
    }
    const double r_lo = std::max(0.0, lambda * g_lo - kPi), r_hi = lambda * g_hi + kPi;
    const double x_lo = r_lo * std::cos(tb), x_hi = r_hi * std::cos(ta);
    const double y_lo = r_lo * std::sin(ta), y_hi = r_hi * std::sin(tb);
    for (const auto& [region, sector] : sectors) {
      if (region != below && region != above) continue;
      const Vec2 a = domains.shift(region);
      for (int sign : {1, -1}) {
        const Vec2 s{sign * a.x, sign * a.y};
        const auto k0 = static_cast<std::int64_t>(std::ceil((x_lo - s.x) / kTwoPi));
        const auto k1 = static_cast<std::int64_t>(std::floor((x_hi - s.x) / kTwoPi));
        const auto j0 = static_cast<std::int64_t>(std::ceil((y_lo - s.y) / kTwoPi));
        const auto j1 = static_cast<std::int64_t>(std::floor((y_hi - s.y) / kTwoPi));
        for (std::int64_t k = k0; k <= k1; ++k)
          for (std::int64_t j = j0; j <= j1; ++j) {
            const Vec2 P{kTwoPi * static_cast<double>(k) + s.x, kTwoPi * static_cast<double>(j) + s.y};
            const double theta = std::atan2(P.y, P.x);
            if (theta < ta || theta > tb) continue;
            const double rho = std::hypot(P.x, P.y), g = lambda * domains.curve->radius(theta);
            if (std::abs(rho - g) > kPi) continue;
            const Membership mem = sector.classify({P.x / lambda, P.y / lambda}, tol / lambda);
            if (mem == Membership::interior) u_in += 2.0;
            else if (mem == Membership::boundary) u_in += 1.0;
            else u_out += 2.0;
          }
      }
    }
  }
  out.N_min = out.N - u_in;
  out.N_max = out.N + u_out;
  return out;
}

void fit_series(RemainderSeries& series) {
  std::vector<RemainderPoint> pts;
  for (const auto& s : series.samples) pts.push_back({s.lambda, s.R_worst()});
  try {
    const ExponentFit fit = fit_exponent(pts);
    series.fitted = true;
    series.exponent = fit.exponent;
    series.constant = fit.constant;
    series.fit_note.clear();
  } catch (const Error& e) {
    series.fitted = false;
    series.fit_note = e.what();
  }
}

RemainderSeries remainder_series(Source source, const MetricSpec& m, const std::vector<double>& lambda_values) {
  if (lambda_values.empty()) fail(ErrorCode::InsufficientData, "no lambda values");
  if (!std::is_sorted(lambda_values.begin(), lambda_values.end()))
    fail(ErrorCode::OutOfRange, "lambda values must be sorted ascending");
  RemainderSeries series;
  series.source = source;
  series.area_torus = area_torus(m);
  const double lambda_max = lambda_values.back();
  std::vector<CountInterval> counts(lambda_values.size());

  switch (source) {
    case Source::direct: {
      const double weyl = series.area_torus * lambda_max * lambda_max / (4 * kPi);
      const int count = static_cast<int>(std::ceil(1.3 * weyl + 8.0 * lambda_max)) + 50;
      const std::vector<double> spectrum = direct_2d_spectrum(m, count, 64);
      for (std::size_t i = 0; i < lambda_values.size(); ++i) {
        const double n = counting_function(spectrum, lambda_values[i]);
        counts[i] = {n, n, n};
      }
      break;
    }
    case Source::ebk: {
      const ActionCurve ac(m);
      const EbkSpectrum spectrum = ebk_spectrum(ac, lambda_max + kTwoPi);
      if (!spectrum.defects.empty())
        fail(ErrorCode::NoRegionConsistent, "EBK sweep left " + std::to_string(spectrum.defects.size()) +
                                                " unsolved indices, first: " + spectrum.defects.front().message);
      for (std::size_t i = 0; i < lambda_values.size(); ++i) counts[i] = ebk_count(spectrum, lambda_values[i]);
      break;
    }
    case Source::lattice: {
      const ActionDomains domains = action_domains(std::make_shared<const ActionCurve>(m));
      parallel_for(lambda_values.size(), [&](std::size_t i) { counts[i] = lattice_count(domains, lambda_values[i]); });
      break;
    }
  }
  for (std::size_t i = 0; i < lambda_values.size(); ++i) {
    RemainderSample s;
    s.lambda = lambda_values[i];
    s.N = counts[i].N;
    s.N_min = counts[i].N_min;
    s.N_max = counts[i].N_max;
    s.weyl_term = series.area_torus * s.lambda * s.lambda / (4 * kPi);
    s.R = s.N - s.weyl_term;
    series.samples.push_back(s);
  }
  fit_series(series);
  return series;
}

// ---------------------------------------------------------------------------
// Nondegeneracy

bool NondegeneracyReport::passed() const {
  return std::all_of(items.begin(), items.end(), [](const auto& i) { return i.passed; });
}

NondegeneracyReport nondegeneracy_report(const MetricSpec& m, double tau, std::int64_t kmax) {
  const ActionCurve ac(m);
  const CriticalConstants& cc = ac.constants();
  NondegeneracyReport report;
  report.revolution = m.kind == MetricKind::revolution;
  report.tau = tau;
  report.kmax = kmax;

  auto typical = [&](NondegeneracyItem& item) {
    item.passed = true;
    for (double v : item.values) {
      if (!std::isfinite(v) || v == 0.0) {
        item.passed = false;
        item.detail = "ratio is zero or not finite";
        item.typicality.push_back({});
        continue;
      }
      item.typicality.push_back(typicality_test(v, tau, kmax));
      item.passed = item.passed && item.typicality.back().passed;
    }
  };

  NondegeneracyItem one{1, "curvature zeros are finite and of first order", {}, {}, true, ""};
  report.kappa_zeros = ac.kappa_zeros();
  for (const auto& z : report.kappa_zeros) {
    one.values.push_back(z.c);
    if (z.order != 1) one.passed = false;
  }
  one.detail = std::to_string(report.kappa_zeros.size()) + " zero(s)";
  report.items.push_back(one);

  NondegeneracyItem two{2, "F2'/F1' at curvature zeros is typical", {}, {}, true, ""};
  for (const auto& z : report.kappa_zeros) two.values.push_back(ac.dF(z.c, 2) / ac.dF(z.c, 1));
  typical(two);
  report.items.push_back(two);

  const double d1_c1 = -kPi * std::pow(-2.0 * cc.d2U1_M1, -0.5);
  NondegeneracyItem three{3, "F2'/F1' at c1 and c4 is typical", {}, {}, true, ""};
  if (report.revolution) {
    three.name = "F2'/F1' at c1 is typical";
    three.values.push_back(0.5 * std::pow(cc.c1, -0.5) / d1_c1);
  } else {
    const double i_c1 = periodic_integral([&](double q) { return std::pow(cc.c1 - eval(m.u2, q), -0.5); }, 0.0);
    const double i_c4 = periodic_integral([&](double q) { return std::pow(eval(m.u1, q) - cc.c4, -0.5); }, 0.0);
    three.values.push_back(i_c1 / (-2.0 * kPi * std::pow(-2.0 * cc.d2U1_M1, -0.5)));
    three.values.push_back(2.0 * kPi * std::pow(2.0 * cc.d2U2_m2, -0.5) / i_c4);
  }
  typical(three);
  report.items.push_back(three);

  NondegeneracyItem four{4, "F2/F1 at c2 and c3 is typical", {}, {}, true, ""};
  auto f1_at = [&](double c) {
    return periodic_integral([&](double q) { return std::sqrt(std::max(0.0, eval(m.u1, q) - c)); }, cc.m1);
  };
  if (report.revolution) {
    four.name = "F2/F1 at c2 is typical";
    four.values.push_back(std::sqrt(cc.c2) / f1_at(cc.c2));
  } else {
    auto f2_at = [&](double c) {
      return periodic_integral([&](double q) { return std::sqrt(std::max(0.0, c - eval(m.u2, q))); }, cc.M2);
    };
    four.values.push_back(f2_at(cc.c2) / f1_at(cc.c2));
    four.values.push_back(f2_at(cc.c3) / f1_at(cc.c3));
  }
  typical(four);
  report.items.push_back(four);
  return report;
}

WeylConstantFit infer_weyl_constant(const RemainderSeries& series) {
  if (series.samples.size() < 10) fail(ErrorCode::InsufficientData, "need at least 10 samples");
  double num = 0.0, den = 0.0;
  for (const auto& s : series.samples) {
    const double l2 = s.lambda * s.lambda;
    num += s.N * l2;
    den += l2 * l2;
  }
  WeylConstantFit fit;
  fit.coefficient = num / den;
  fit.expected = series.area_torus / (4 * kPi);
  fit.relative_error = std::abs(fit.coefficient - fit.expected) / fit.expected;
  return fit;
}

StarDomain degenerate_fixture() {
  return StarDomain::sector(std::make_shared<Hypotenuse>(1.0, 1.0), 0.0, kPi / 2);
}

std::vector<double> resonant_radii(int n_min, int n_max, int count) {
  if (n_min < 1 || n_max <= n_min || count < 2) fail(ErrorCode::OutOfRange, "need 1 <= n_min < n_max, count >= 2");
  std::set<int> ns;
  for (int i = 0; i < count; ++i)
    ns.insert(static_cast<int>(std::lround(n_min * std::pow(static_cast<double>(n_max) / n_min, i / (count - 1.0)))));
  std::vector<double> out;
  for (int n : ns) out.push_back(kTwoPi * n * (1.0 - 1e-7));
  return out;
}

}  // namespace liouville
