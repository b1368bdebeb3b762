#include "liouville/ebk.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <numbers>
#include <sstream>

#include <boost/math/tools/toms748_solve.hpp>

#include "liouville/errors.hpp"
#include "liouville/parallel.hpp"

namespace liouville {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

int level(int m) { return (m + 1) / 2; }
double parity_sign(int m) { return m % 2 == 0 ? 1.0 : -1.0; }

struct Interval {
  double lo, hi;
};

Interval region_interval(const CriticalConstants& cc, Region r) {
  switch (r) {
    case Region::A1: return {cc.c4, cc.c3};
    case Region::A2: return {cc.c3, cc.c2};
    case Region::A3: return {cc.c2, cc.c1};
  }
  return {cc.c4, cc.c1};
}

double margin_in(const Interval& iv, double c) { return std::min(c - iv.lo, iv.hi - c); }

bool near_separatrix(const ActionCurve& ac, double c, double width) {
  const auto& cc = ac.constants();
  return (ac.has_separatrix(1) && std::abs(c - cc.c2) < width) ||
         (ac.has_separatrix(2) && std::abs(c - cc.c3) < width);
}

}  // namespace

double target_first(int m1, Region region) {
  return kTwoPi * level(m1) + (region == Region::A3 ? parity_sign(m1) * kPi / 2 : 0.0);
}

double target_second(int m2, Region region) {
  return kTwoPi * level(m2) + (region == Region::A1 ? parity_sign(m2) * kPi / 2 : 0.0);
}

std::vector<RegionCandidate> quantization_candidates(const ActionCurve& ac, int m1, int m2) {
  const auto& cc = ac.constants();
  std::vector<RegionCandidate> out;
  for (Region region : {Region::A1, Region::A2, Region::A3}) {
    RegionCandidate cand;
    cand.region = region;
    const double t1 = target_first(m1, region), t2 = target_second(m2, region);
    const Interval iv = region_interval(cc, region);
    if (t1 == 0.0 && t2 == 0.0) {
      out.push_back(cand);
      continue;
    }
    if (t1 == 0.0 || t2 == 0.0) {
      // axis index: c pinned to the endpoint where the other action vanishes
      cand.c = t2 == 0.0 ? cc.c4 : cc.c1;
      cand.lambda = t2 == 0.0 ? t1 / ac.F1(cand.c) : t2 / ac.F2(cand.c);
      cand.solvable = std::isfinite(cand.lambda);
      cand.margin = margin_in(iv, cand.c);
      cand.consistent = cand.solvable && cand.margin >= 0.0;
      out.push_back(cand);
      continue;
    }
    // F2 t1 - t2 F1 is strictly increasing in c, negative at c4 and positive at c1
    auto h = [&](double c) { return ac.F2(c) * t1 - t2 * ac.F1(c); };
    const double h_lo = h(cc.c4), h_hi = h(cc.c1);
    double c;
    if (h_lo >= 0.0) {
      c = cc.c4;
    } else if (h_hi <= 0.0) {
      c = cc.c1;
    } else {
      std::uintmax_t iterations = 200;
      auto tol = [](double a, double b) { return std::abs(a - b) <= 1e-14 * std::max(1.0, std::abs(a)); };
      const auto root = boost::math::tools::toms748_solve(h, cc.c4, cc.c1, h_lo, h_hi, tol, iterations);
      c = 0.5 * (root.first + root.second);
    }
    cand.c = c;
    cand.lambda = std::hypot(t1, t2) / std::hypot(ac.F1(c), ac.F2(c));
    cand.solvable = true;
    cand.margin = margin_in(iv, c);
    cand.consistent = cand.margin >= 0.0;
    out.push_back(cand);
  }
  return out;
}

QuantizationSolution solve_quantization(const ActionCurve& ac, int m1, int m2) {
  if (m1 < 0 || m2 < 0) fail(ErrorCode::OutOfRange, "indices must be non-negative");
  if (m1 == 0 && m2 == 0) fail(ErrorCode::DegenerateIndex, "(0, 0) is the constant mode with lambda = 0");
  const std::vector<RegionCandidate> cands = quantization_candidates(ac, m1, m2);

  const RegionCandidate* best = nullptr;
  int consistent = 0;
  for (const auto& c : cands)
    if (c.consistent) {
      ++consistent;
      if (!best || c.margin > best->margin) best = &c;
    }
  bool forced = consistent > 1;
  if (!best) {
    // no region contains its own solution: take the nearest one inside the transition width
    for (const auto& c : cands)
      if (c.solvable && (!best || c.margin > best->margin)) best = &c;
    if (!best || -best->margin > std::pow(best->lambda, -2.0 / 3.0)) {
      std::ostringstream msg;
      msg << "no region consistent for (" << m1 << ", " << m2 << "):";
      for (const auto& c : cands)
        msg << ' ' << to_string(c.region) << "(lambda=" << c.lambda << ", c=" << c.c << ')';
      fail(ErrorCode::NoRegionConsistent, msg.str());
    }
    forced = true;
  }

  QuantizationSolution s;
  s.m1 = m1;
  s.m2 = m2;
  s.lambda = best->lambda;
  s.c = best->c;
  s.region = best->region;
  s.pinned = target_first(m1, best->region) == 0.0 || target_second(m2, best->region) == 0.0;
  s.T1 = target_first(m1, best->region);
  s.T2 = target_second(m2, best->region);
  s.transition_flag = forced || near_separatrix(ac, s.c, std::pow(s.lambda, -2.0 / 3.0));
  s.asymptotic_regime = std::hypot(m1, m2) >= 4.0;
  if (s.transition_flag) s.uncertainty = (kPi / 2) / std::hypot(ac.F1(s.c), ac.F2(s.c));
  return s;
}

EbkSpectrum ebk_spectrum(const ActionCurve& ac, double lambda_max) {
  if (!(lambda_max >= 1.0)) fail(ErrorCode::OutOfRange, "lambda_max must be at least 1");
  const double r = lambda_max + kTwoPi;
  double g_max = 0.0;
  for (int i = 0; i <= 256; ++i) g_max = std::max(g_max, ac.G(kPi / 2 * i / 256));
  const int n_max = static_cast<int>(std::ceil(1.01 * r * g_max / kTwoPi));

  std::vector<std::pair<int, int>> indices;
  for (int n1 = 0; n1 <= n_max; ++n1)
    for (int n2 = 0; n2 <= n_max; ++n2) {
      if (n1 == 0 && n2 == 0) continue;
      const double rho = kTwoPi * std::hypot(n1, n2);
      if (rho > r * ac.G(std::atan2(static_cast<double>(n2), static_cast<double>(n1)))) continue;
      for (int m1 : n1 == 0 ? std::vector<int>{0} : std::vector<int>{2 * n1 - 1, 2 * n1})
        for (int m2 : n2 == 0 ? std::vector<int>{0} : std::vector<int>{2 * n2 - 1, 2 * n2})
          indices.emplace_back(m1, m2);
    }

  std::vector<QuantizationSolution> solved(indices.size());
  std::vector<std::string> errors(indices.size());
  parallel_for(indices.size(), [&](std::size_t i) {
    try {
      solved[i] = solve_quantization(ac, indices[i].first, indices[i].second);
    } catch (const Error& e) {
      errors[i] = e.what();
    }
  });

  EbkSpectrum out;
  for (std::size_t i = 0; i < indices.size(); ++i) {
    if (!errors[i].empty()) out.defects.push_back({indices[i].first, indices[i].second, errors[i]});
    else if (solved[i].lambda <= lambda_max) out.solutions.push_back(solved[i]);
  }
  std::stable_sort(out.solutions.begin(), out.solutions.end(),
                   [](const auto& a, const auto& b) { return a.lambda < b.lambda; });
  return out;
}

CountInterval ebk_count(const EbkSpectrum& spectrum, double lambda) {
  CountInterval out{1.0, 1.0, 1.0};
  for (const auto& s : spectrum.solutions) {
    if (s.lambda <= lambda) {
      out.N += 1;
      out.N_max += 1;
      if (!(s.transition_flag && s.lambda > lambda - s.uncertainty)) out.N_min += 1;
    } else if (s.transition_flag && s.lambda <= lambda + s.uncertainty) {
      out.N_max += 1;
    }
  }
  return out;
}

}  // namespace liouville
