#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/tools/toms748_solve.hpp>

#include "liouville/errors.hpp"
#include "liouville/lattice.hpp"
#include "liouville/parallel.hpp"
#include "quadrature.hpp"

namespace liouville {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr int kAngularSamples = 256;

double smooth_zero(double u) { return u > 0 ? std::exp(-1.0 / u) : 0.0; }

// Angular measure of {phi : p + rho e^{i phi} in D}.
double angular_inside(const StarDomain& D, Vec2 p, double rho) {
  auto inside = [&](double phi) { return D.contains({p.x + rho * std::cos(phi), p.y + rho * std::sin(phi)}); };
  const double h = kTwoPi / kAngularSamples;
  double total = 0.0;
  bool prev = inside(0.0);
  double run_start = 0.0;  // start of the current inside run (if prev)
  for (int i = 1; i <= kAngularSamples; ++i) {
    const double phi = h * i;
    const bool cur = inside(phi);
    if (cur != prev) {
      double lo = phi - h, hi = phi;
      for (int it = 0; it < 44; ++it) {
        const double mid = 0.5 * (lo + hi);
        (inside(mid) == prev ? lo : hi) = mid;
      }
      const double cross = 0.5 * (lo + hi);
      if (cur) run_start = cross;
      else total += cross - run_start;
      prev = cur;
    }
  }
  if (prev) total += kTwoPi - run_start;
  return total;
}

double point_distance(Vec2 p, Vec2 q) { return std::hypot(p.x - q.x, p.y - q.y); }

// Radii at which the circle about p changes how it meets the boundary.
std::vector<double> structure_radii(const StarDomain& D, Vec2 p) {
  std::vector<double> out;
  if (D.is_disk()) {
    const double n = std::hypot(p.x, p.y), R = D.x_max();
    out = {std::abs(R - n), R + n};
    return out;
  }
  for (const auto& piece : D.pieces()) {
    if (piece.kind == StarDomain::Piece::Kind::segment) {
      const double ex = piece.end.x - piece.start.x, ey = piece.end.y - piece.start.y;
      const double len2 = ex * ex + ey * ey;
      const double t = std::clamp(((p.x - piece.start.x) * ex + (p.y - piece.start.y) * ey) / len2, 0.0, 1.0);
      out.push_back(point_distance(p, {piece.start.x + t * ex, piece.start.y + t * ey}));
      out.push_back(point_distance(p, piece.start));
      out.push_back(point_distance(p, piece.end));
    } else {
      out.push_back(D.curve().distance(p, piece.s0, piece.s1));
    }
  }
  return out;
}

// Integral of exp(-i w t) over t in [0, 1].
std::complex<double> unit_phase_integral(double w) {
  const std::complex<double> iw(0.0, w);
  if (std::abs(w) < 1e-3) {
    std::complex<double> term = 1.0, sum = 0.0;
    for (int n = 0; n < 8; ++n) {
      sum += term;
      term *= -iw / static_cast<double>(n + 2);
    }
    return sum;
  }
  return (1.0 - std::exp(-iw)) / iw;
}

using GL = boost::math::quadrature::gauss<double, 20>;

template <class F>
std::complex<double> gl_panels(F&& f, double a, double b, int panels) {
  const auto& x = GL::abscissa();
  const auto& w = GL::weights();
  std::complex<double> total = 0.0;
  const double h = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    const double mid = a + (p + 0.5) * h, half = 0.5 * h;
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (x[i] == 0.0) total += w[i] * half * f(mid);
      else total += w[i] * half * (f(mid - half * x[i]) + f(mid + half * x[i]));
    }
  }
  return total;
}

}  // namespace

// ---------------------------------------------------------------------------
// Mollifier

Mollifier::Mollifier() {
  auto mass_at = [this](double p) {
    exponent_ = p;
    return mass() - 1.0;
  };
  std::uintmax_t iterations = 200;
  auto tol = [](double a, double b) { return std::abs(a - b) <= 1e-15 * std::max(1.0, std::abs(a)); };
  const auto r = boost::math::tools::toms748_solve(mass_at, 1e-3, 500.0, tol, iterations);
  exponent_ = 0.5 * (r.first + r.second);
}

double Mollifier::step(double s) const {
  if (s <= flat_radius) return 1.0;
  if (s >= support_) return 0.0;
  const double t = (s - flat_radius) / (support_ - flat_radius);
  const double a = smooth_zero(1.0 - t), b = smooth_zero(t);
  return a / (a + b);
}

double Mollifier::profile(double s) const {
  s = std::abs(s);
  if (s <= flat_radius) return 1.0;
  if (s >= support_) return 0.0;
  return std::pow(step(s), exponent_);
}

double Mollifier::kernel(Vec2 x, double eps) const { return profile(std::hypot(x.x, x.y) / eps) / (eps * eps); }

double Mollifier::mass() const {
  auto f = [this](double s) { return profile(s) * s; };
  return kPi * flat_radius * flat_radius + kTwoPi * gl_panels(f, flat_radius, support_, 32).real();
}

double Mollifier::fourier(double xi) const {
  // composite Gauss-Legendre with panels sized to the Bessel oscillation
  auto f = [&](double s) { return profile(s) * std::cyl_bessel_j(0.0, xi * s) * s; };
  const int panels = 8 + static_cast<int>(std::ceil(std::abs(xi) / kPi));
  return kTwoPi * (gl_panels(f, 0.0, flat_radius, panels).real() + gl_panels(f, flat_radius, support_, 2 * panels).real());
}

// ---------------------------------------------------------------------------
// Mollified counting

MollifiedDetail count_mollified_detail(const StarDomain& D, Vec2 a, double r, double eps_exponent) {
  if (!(r >= 2)) fail(ErrorCode::OutOfRange, "r must be at least 2");
  static const Mollifier psi;
  const double eps = std::pow(r, -eps_exponent);
  const double reach = eps * psi.support();
  const double rmax = D.max_radius();
  const double x_lo = r * (D.x_min() - reach), x_hi = r * (D.x_max() + reach);
  const double y_lo = r * (D.is_disk() ? -rmax - reach : -reach), y_hi = r * (rmax + reach);

  MollifiedDetail out;
  for (int sign : {1, -1}) {
    const Vec2 shift{sign * a.x, sign * a.y};
    const auto k0 = static_cast<std::int64_t>(std::ceil((x_lo - shift.x) / kTwoPi));
    const auto k1 = static_cast<std::int64_t>(std::floor((x_hi - shift.x) / kTwoPi));
    const auto j0 = static_cast<std::int64_t>(std::ceil((y_lo - shift.y) / kTwoPi));
    const auto j1 = static_cast<std::int64_t>(std::floor((y_hi - shift.y) / kTwoPi));
    for (std::int64_t k = k0; k <= k1; ++k) {
      for (std::int64_t j = j0; j <= j1; ++j) {
        const Vec2 p{(kTwoPi * static_cast<double>(k) + shift.x) / r, (kTwoPi * static_cast<double>(j) + shift.y) / r};
        const double d = D.boundary_distance(p);
        const bool in = D.contains(p);
        if (d > reach) {
          out.value += in ? 1.0 : 0.0;
          continue;
        }
        ++out.shell_points;
        // (Psi_eps * chi_D)(p) = int psi(s) s A(eps s) ds with A the angular inside measure
        const double s_star = std::min(d / eps, psi.support());
        auto f = [&](double s) { return psi.profile(s) * s * angular_inside(D, p, eps * s); };
        double v = in ? kTwoPi * quad::integrate([&](double s) { return psi.profile(s) * s; }, 0.0, s_star, 1e-12) : 0.0;
        // A(eps s) has kinks where the circle touches a boundary piece or passes a corner
        std::vector<double> cuts{Mollifier::flat_radius, psi.support()};
        for (double t : structure_radii(D, p)) cuts.push_back(t / eps);
        std::sort(cuts.begin(), cuts.end());
        double lo = s_star;
        for (double cut : cuts) {
          cut = std::min(cut, psi.support());
          if (cut > lo) {
            // s = lo + (cut - lo) u^2 absorbs the square-root onset at a tangency
            const double w = cut - lo;
            auto g = [&](double u) { return f(lo + w * u * u) * 2.0 * w * u; };
            v += gl_panels(g, 0.0, 1.0, 4).real();
            lo = cut;
          }
        }
        out.value += v;
      }
    }
  }
  return out;
}

double count_mollified(const StarDomain& D, Vec2 a, double r, double eps_exponent) {
  return count_mollified_detail(D, a, r, eps_exponent).value;
}

// ---------------------------------------------------------------------------
// Boundary-integral Fourier transform

std::complex<double> chi_hat(const StarDomain& D, std::pair<int, int> k, double r) {
  if (k.first == 0 && k.second == 0) fail(ErrorCode::ZeroFrequency, "k = 0; use the domain area");
  const double k1 = k.first, k2 = k.second;
  const double k_sq = k1 * k1 + k2 * k2;
  const std::complex<double> prefactor = 1.0 / (std::complex<double>(0.0, r) * k_sq);
  auto phase = [&](Vec2 x) { return r * (x.x * k1 + x.y * k2); };

  std::complex<double> total = 0.0;
  for (const auto& piece : D.pieces()) {
    if (piece.kind == StarDomain::Piece::Kind::segment) {
      const double dx = piece.end.x - piece.start.x, dy = piece.end.y - piece.start.y;
      const double w = r * (dx * k1 + dy * k2);
      total += (k2 * dx - k1 * dy) * std::polar(1.0, -phase(piece.start)) * unit_phase_integral(w);
      continue;
    }
    const BoundaryCurve& curve = D.curve();
    auto integrand = [&](double s) {
      const Vec2 x = curve.point(s), t = curve.tangent(s);
      return std::polar(1.0, -phase(x)) * (k2 * t.x - k1 * t.y);
    };
    std::vector<double> cuts{piece.s0};
    for (double b : curve.breakpoints())
      if (b > piece.s0 && b < piece.s1) cuts.push_back(b);
    cuts.push_back(piece.s1);
    for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
      const double s0 = cuts[c], s1 = cuts[c + 1];
      // panel count from the total phase variation along the arc
      double variation = 0.0, prev = phase(curve.point(s0));
      for (int i = 1; i <= 64; ++i) {
        const double cur = phase(curve.point(s0 + (s1 - s0) * i / 64));
        variation += std::abs(cur - prev);
        prev = cur;
      }
      int panels = std::max(2, static_cast<int>(std::ceil(variation / (3.0 * kPi))) + 1);
      std::complex<double> value = gl_panels(integrand, s0, s1, panels);
      if (!curve.uniform_speed()) {
        for (int it = 0; it < 12; ++it) {
          panels *= 2;
          const std::complex<double> refined = gl_panels(integrand, s0, s1, panels);
          const bool done = std::abs(refined - value) <= 1e-11 * std::max(1.0, std::abs(refined));
          value = refined;
          if (done) break;
        }
      }
      total += value;
    }
  }
  return prefactor * total;
}

double poisson_partial_sum(const StarDomain& D, Vec2 a, double r, int kmax) {
  if (kmax < 0) fail(ErrorCode::OutOfRange, "kmax must be non-negative");
  static const Mollifier psi;
  const double scale = r * r / (2.0 * kPi * kPi);
  const double xi_scale = std::pow(r, -1.0 / 3.0);
  const std::int64_t kmax_sq = static_cast<std::int64_t>(kmax) * kmax;

  // Psi_hat depends only on |k|^2; evaluate it once per occurring norm.
  std::vector<char> needed(static_cast<std::size_t>(kmax_sq) + 1, 0);
  for (std::int64_t k1 = 0; k1 <= kmax; ++k1)
    for (std::int64_t k2 = 0; k1 * k1 + k2 * k2 <= kmax_sq; ++k2) needed[k1 * k1 + k2 * k2] = 1;
  std::vector<std::int64_t> norms;
  for (std::size_t n = 1; n < needed.size(); ++n)
    if (needed[n]) norms.push_back(static_cast<std::int64_t>(n));
  std::vector<double> psi_hat(needed.size(), 0.0);
  parallel_for(norms.size(), [&](std::size_t i) {
    psi_hat[norms[i]] = psi.fourier(xi_scale * std::sqrt(static_cast<double>(norms[i])));
  });

  // Terms for k and -k are complex conjugates: sum a half-plane, double the real part.
  std::vector<double> rows(static_cast<std::size_t>(kmax) + 1, 0.0);
  parallel_for(rows.size(), [&](std::size_t row) {
    const int k1 = static_cast<int>(row);
    double acc = 0.0;
    for (int k2 = -kmax; k2 <= kmax; ++k2) {
      if (k1 == 0 && k2 <= 0) continue;
      const std::int64_t n = static_cast<std::int64_t>(k1) * k1 + static_cast<std::int64_t>(k2) * k2;
      if (n > kmax_sq) continue;
      acc += 2.0 * std::cos(a.x * k1 + a.y * k2) * psi_hat[n] * chi_hat(D, {k1, k2}, r).real();
    }
    rows[row] = acc;
  });
  double sum = D.area();
  for (double v : rows) sum += v;
  return scale * sum;
}

}  // namespace liouville
