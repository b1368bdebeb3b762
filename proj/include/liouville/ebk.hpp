#pragma once

#include <string>
#include <vector>

#include "liouville/actions.hpp"

namespace liouville {

struct QuantizationSolution {
  int m1 = 0, m2 = 0;
  double lambda = 0.0;
  double c = 0.0;
  Region region = Region::A2;
  bool transition_flag = false;
  bool asymptotic_regime = true;  // false when |m| < 4
  bool pinned = false;            // axis index solved with c at an endpoint
  double uncertainty = 0.0;       // lambda window of a flagged index (0 when unflagged)
  double T1 = 0.0, T2 = 0.0;      // shifted targets lambda F1(c), lambda F2(c)
};

/** Shifted quantization targets for a region. */
double target_first(int m1, Region region);
double target_second(int m2, Region region);

/** One candidate per region: (lambda, c) from the region's targets. */
struct RegionCandidate {
  Region region = Region::A2;
  bool solvable = false;
  bool consistent = false;
  double lambda = 0.0, c = 0.0;
  double margin = 0.0;  // signed distance of c into the region's interval
};
std::vector<RegionCandidate> quantization_candidates(const ActionCurve& ac, int m1, int m2);

QuantizationSolution solve_quantization(const ActionCurve& ac, int m1, int m2);

struct EbkDefect {
  int m1 = 0, m2 = 0;
  std::string message;
};

struct EbkSpectrum {
  std::vector<QuantizationSolution> solutions;  // sorted by lambda, (0,0) excluded
  std::vector<EbkDefect> defects;
};

EbkSpectrum ebk_spectrum(const ActionCurve& ac, double lambda_max);

struct CountInterval {
  double N = 0.0, N_min = 0.0, N_max = 0.0;
};

/** 1 (the zero mode) plus the number of solutions with lambda_i <= lambda, with flagged-index bands. */
CountInterval ebk_count(const EbkSpectrum& spectrum, double lambda);

}  // namespace liouville
