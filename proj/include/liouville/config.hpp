#pragma once

#include <string>

#include "liouville/metric.hpp"

namespace liouville {

/**
 * Metric configuration as JSON:
 *   {"kind": "liouville" | "revolution" | "unchecked-test",
 *    "u1": {"mean": 3.0, "harmonics": [[1.0, 0.0]]},
 *    "u2": {"mean": 1.0, "harmonics": [[0.0, 0.5]]}}
 * harmonics[n-1] = [cos coefficient, sin coefficient] of frequency n.
 * "u2" may be omitted (zero potential). Unknown keys are rejected.
 * Parsing does not validate class membership; see require_valid.
 */
MetricSpec parse_metric(const std::string& text);
MetricSpec load_metric(const std::string& path);
std::string dump_metric(const MetricSpec& m);

}  // namespace liouville
