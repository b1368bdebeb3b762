#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>

#include "liouville/config.hpp"
#include "liouville/errors.hpp"
#include "liouville/metric.hpp"

namespace testing {

inline liouville::MetricSpec fixture(const std::string& name) {
  return liouville::load_metric(std::string(LIOUVILLE_FIXTURES) + "/" + name + ".json");
}

inline liouville::MetricSpec sample() { return fixture("sample"); }
inline liouville::MetricSpec flat() { return fixture("flat"); }
inline liouville::MetricSpec revolution() { return fixture("revolution"); }

inline liouville::MetricSpec unchecked(double u1, double u2) {
  liouville::MetricSpec m;
  m.u1 = liouville::PotentialSpec::constant(u1);
  m.u2 = liouville::PotentialSpec::constant(u2);
  m.kind = liouville::MetricKind::unchecked_test;
  return m;
}

// Code of the liouville::Error thrown by f, or nullopt when f returns.
template <class F>
std::optional<liouville::ErrorCode> code_of(F&& f) {
  try {
    f();
  } catch (const liouville::Error& e) {
    return e.code();
  }
  return std::nullopt;
}

inline double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace testing
