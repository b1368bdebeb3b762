#include "liouville/metric.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "liouville/errors.hpp"

namespace liouville {

namespace {

constexpr int kScanPoints = 4096;
constexpr double kDegenerateCurvature = 1e-9;

struct Extremum {
  double q;
  double value;
  double curvature;
  bool is_max;
};

struct ExtremaScan {
  std::vector<Extremum> extrema;
  int maxima = 0;
  int minima = 0;
};

double bisect_derivative(const PotentialSpec& p, double a, double b) {
  double fa = eval(p, a, 1);
  for (int it = 0; it < 200 && b - a > 1e-13; ++it) {
    const double mid = 0.5 * (a + b);
    const double fm = eval(p, mid, 1);
    if (fm == 0.0) return mid;
    if ((fa < 0) == (fm < 0)) {
      a = mid;
      fa = fm;
    } else {
      b = mid;
    }
  }
  return 0.5 * (a + b);
}

// Sign changes of p' on a uniform periodic grid, refined by bisection.
ExtremaScan scan_extrema(const PotentialSpec& p) {
  ExtremaScan scan;
  if (p.is_constant()) return scan;
  std::vector<int> sign(kScanPoints);
  for (int i = 0; i < kScanPoints; ++i) {
    const double d = eval(p, static_cast<double>(i) / kScanPoints, 1);
    sign[i] = d > 0 ? 1 : (d < 0 ? -1 : 0);
  }
  std::vector<int> nonzero;
  for (int i = 0; i < kScanPoints; ++i)
    if (sign[i] != 0) nonzero.push_back(i);
  if (nonzero.empty()) return scan;
  const std::size_t count = nonzero.size();
  for (std::size_t k = 0; k < count; ++k) {
    const int i = nonzero[k];
    const int j = nonzero[(k + 1) % count];
    if (sign[i] == sign[j]) continue;
    const int gap = (j - i + kScanPoints) % kScanPoints;
    const double a = static_cast<double>(i) / kScanPoints;
    const double b = a + static_cast<double>(gap == 0 ? kScanPoints : gap) / kScanPoints;
    double q;
    if (gap == 2) {
      q = a + 1.0 / kScanPoints;  // a single exact zero on the grid
    } else {
      q = bisect_derivative(p, a, b);
    }
    q -= std::floor(q);
    Extremum e{q, eval(p, q, 0), eval(p, q, 2), sign[i] > 0};
    scan.extrema.push_back(e);
    (e.is_max ? scan.maxima : scan.minima) += 1;
  }
  return scan;
}

struct GlobalExtrema {
  double max_q = 0, max_value = 0, max_curvature = 0;
  double min_q = 0, min_value = 0, min_curvature = 0;
};

GlobalExtrema global_extrema(const PotentialSpec& p, const ExtremaScan& scan) {
  GlobalExtrema g;
  if (scan.extrema.empty()) {
    g.max_value = g.min_value = eval(p, 0.0);
    g.max_curvature = g.min_curvature = eval(p, 0.0, 2);
    return g;
  }
  bool have_max = false, have_min = false;
  for (const auto& e : scan.extrema) {
    if (e.is_max && (!have_max || e.value > g.max_value)) {
      g.max_q = e.q, g.max_value = e.value, g.max_curvature = e.curvature, have_max = true;
    }
    if (!e.is_max && (!have_min || e.value < g.min_value)) {
      g.min_q = e.q, g.min_value = e.value, g.min_curvature = e.curvature, have_min = true;
    }
  }
  return g;
}

std::string describe_extrema(const char* name, const ExtremaScan& scan) {
  std::ostringstream os;
  os << name << ": " << scan.maxima << " max, " << scan.minima << " min";
  return os.str();
}

// Empty string when the potential has one nondegenerate max and min.
std::string extremum_problem(const char* name, const ExtremaScan& scan) {
  if (scan.maxima != 1 || scan.minima != 1) return describe_extrema(name, scan);
  for (const auto& e : scan.extrema) {
    if (std::abs(e.curvature) < kDegenerateCurvature) {
      std::ostringstream os;
      os << name << ": degenerate extremum at q=" << e.q;
      return os.str();
    }
  }
  return {};
}

void check_extrema(const char* name, const ExtremaScan& scan) {
  if (scan.maxima != 1 || scan.minima != 1)
    fail(ErrorCode::MultipleExtrema, describe_extrema(name, scan));
  const std::string problem = extremum_problem(name, scan);
  if (!problem.empty()) fail(ErrorCode::DegenerateExtremum, problem);
}

}  // namespace

PotentialSpec PotentialSpec::constant(double value) { return PotentialSpec{value, {}}; }

bool PotentialSpec::is_constant() const {
  return std::all_of(harmonics.begin(), harmonics.end(),
                     [](const Harmonic& h) { return h.cos_coeff == 0.0 && h.sin_coeff == 0.0; });
}

PotentialSpec PotentialSpec::scaled(double factor) const {
  PotentialSpec out{mean * factor, harmonics};
  for (auto& h : out.harmonics) {
    h.cos_coeff *= factor;
    h.sin_coeff *= factor;
  }
  return out;
}

PotentialSpec PotentialSpec::translated(double dq) const {
  PotentialSpec out{mean, harmonics};
  for (std::size_t n = 1; n <= out.harmonics.size(); ++n) {
    const double phi = 2.0 * std::numbers::pi * static_cast<double>(n) * dq;
    const double c = std::cos(phi), s = std::sin(phi);
    const Harmonic h = harmonics[n - 1];
    out.harmonics[n - 1] = {h.cos_coeff * c - h.sin_coeff * s, h.cos_coeff * s + h.sin_coeff * c};
  }
  return out;
}

PotentialSpec PotentialSpec::plus(const PotentialSpec& other, double factor) const {
  PotentialSpec out{mean + factor * other.mean, harmonics};
  if (out.harmonics.size() < other.harmonics.size()) out.harmonics.resize(other.harmonics.size());
  for (std::size_t i = 0; i < other.harmonics.size(); ++i) {
    out.harmonics[i].cos_coeff += factor * other.harmonics[i].cos_coeff;
    out.harmonics[i].sin_coeff += factor * other.harmonics[i].sin_coeff;
  }
  return out;
}

double eval(const PotentialSpec& p, double q, int deriv_order) {
  if (deriv_order < 0) fail(ErrorCode::OutOfRange, "negative derivative order");
  double sum = deriv_order == 0 ? p.mean : 0.0;
  const int phase = deriv_order % 4;
  for (std::size_t n = 1; n <= p.harmonics.size(); ++n) {
    const Harmonic& h = p.harmonics[n - 1];
    if (h.cos_coeff == 0.0 && h.sin_coeff == 0.0) continue;
    const double omega = 2.0 * std::numbers::pi * static_cast<double>(n);
    const double arg = omega * q;
    const double c = std::cos(arg), s = std::sin(arg);
    // d^k cos = omega^k cos(arg + k pi/2), d^k sin = omega^k sin(arg + k pi/2)
    double dc, ds;
    switch (phase) {
      case 0: dc = c, ds = s; break;
      case 1: dc = -s, ds = c; break;
      case 2: dc = -c, ds = -s; break;
      default: dc = s, ds = -c; break;
    }
    sum += std::pow(omega, deriv_order) * (h.cos_coeff * dc + h.sin_coeff * ds);
  }
  return sum;
}

const char* to_string(MetricKind kind) {
  switch (kind) {
    case MetricKind::liouville: return "liouville";
    case MetricKind::revolution: return "revolution";
    case MetricKind::unchecked_test: return "unchecked-test";
  }
  return "unknown";
}

CriticalConstants critical_constants(const MetricSpec& m) {
  const bool checked = m.kind != MetricKind::unchecked_test;
  const ExtremaScan s1 = scan_extrema(m.u1);
  if (checked) check_extrema("U1", s1);
  const GlobalExtrema g1 = global_extrema(m.u1, s1);

  CriticalConstants cc;
  cc.c1 = g1.max_value, cc.M1 = g1.max_q, cc.d2U1_M1 = g1.max_curvature;
  cc.c2 = g1.min_value, cc.m1 = g1.min_q, cc.d2U1_m1 = g1.min_curvature;
  if (m.kind == MetricKind::revolution) return cc;

  const ExtremaScan s2 = scan_extrema(m.u2);
  if (checked) check_extrema("U2", s2);
  const GlobalExtrema g2 = global_extrema(m.u2, s2);
  cc.c3 = g2.max_value, cc.M2 = g2.max_q, cc.d2U2_M2 = g2.max_curvature;
  cc.c4 = g2.min_value, cc.m2 = g2.min_q, cc.d2U2_m2 = g2.min_curvature;
  return cc;
}

bool ValidationReport::passed() const {
  return std::all_of(conditions.begin(), conditions.end(),
                     [](const ConditionResult& c) { return c.passed; });
}

ValidationReport validate_omega(const MetricSpec& m) {
  ValidationReport report;
  report.conditions.push_back({1, true, "smooth: finite trigonometric series"});
  report.conditions.push_back({2, true, "1-periodic: finite trigonometric series"});

  const bool revolution = m.kind == MetricKind::revolution;
  const ExtremaScan s1 = scan_extrema(m.u1);
  std::string problem = extremum_problem("U1", s1);
  if (!revolution) {
    const ExtremaScan s2 = scan_extrema(m.u2);
    const std::string p2 = extremum_problem("U2", s2);
    if (!p2.empty()) problem += (problem.empty() ? "" : "; ") + p2;
  }
  report.conditions.push_back(
      {3, problem.empty(), problem.empty() ? "one nondegenerate max and min per potential" : problem});

  std::ostringstream os;
  bool positive;
  const double min_u1 = global_extrema(m.u1, s1).min_value;
  if (revolution) {
    positive = min_u1 > 0.0 && m.u2.mean == 0.0 && m.u2.is_constant();
    os << "min U1 = " << min_u1 << (m.u2.is_constant() && m.u2.mean == 0.0 ? "" : "; U2 must vanish");
  } else {
    const double max_u2 = global_extrema(m.u2, scan_extrema(m.u2)).max_value;
    positive = min_u1 > max_u2;
    os << "min U1 = " << min_u1 << ", max U2 = " << max_u2;
  }
  report.conditions.push_back({4, positive, os.str()});
  return report;
}

void require_valid(const MetricSpec& m) {
  if (m.kind == MetricKind::unchecked_test) return;
  const ValidationReport report = validate_omega(m);
  for (const auto& c : report.conditions)
    if (!c.passed)
      fail(ErrorCode::InvalidConfig,
           std::string(to_string(m.kind)) + " metric fails condition (" + std::to_string(c.index) +
               "): " + c.detail);
}

double min_conformal_factor(const MetricSpec& m) {
  const double min_u1 = global_extrema(m.u1, scan_extrema(m.u1)).min_value;
  if (m.kind == MetricKind::revolution) return min_u1;
  return min_u1 - global_extrema(m.u2, scan_extrema(m.u2)).max_value;
}

}  // namespace liouville
