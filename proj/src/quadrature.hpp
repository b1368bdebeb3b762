#pragma once

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

namespace liouville::quad {

constexpr double kDefaultTolerance = 1e-12;
constexpr unsigned kMaxDepth = 18;

/** Adaptive Gauss-Kronrod (15/31) on [a, b]; returns 0 for empty ranges. */
template <class F>
double integrate(F&& f, double a, double b, double tol = kDefaultTolerance) {
  if (!(b > a)) return 0.0;
  return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, kMaxDepth, tol);
}

/**
 * Double-exponential rule on [a, b] for integrands that are smooth inside but
 * have derivative singularities at the ends (cuts at separatrix angles).
 */
template <class F>
double integrate_endpoint_singular(F&& f, double a, double b, double tol = kDefaultTolerance) {
  if (!(b > a)) return 0.0;
  static thread_local boost::math::quadrature::tanh_sinh<double> rule;
  return rule.integrate(f, a, b, tol);
}

}  // namespace liouville::quad
