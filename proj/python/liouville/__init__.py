"""Python bindings for the liouville C++ core."""

from ._core import (
    ActionCurve,
    CriticalConstants,
    LiouvilleError,
    MetricSpec,
    area_action_domain,
    area_torus,
    continued_fraction,
    count_disk,
    count_quarter_disk,
    counting_function,
    critical_constants,
    direct_spectrum,
    ebk_spectrum,
    hill_spectrum,
    load_metric,
    nondegeneracy_passed,
    parse_metric,
    remainder_series,
    typicality_test,
    validate,
)

__all__ = [
    "ActionCurve",
    "CriticalConstants",
    "LiouvilleError",
    "MetricSpec",
    "area_action_domain",
    "area_torus",
    "continued_fraction",
    "count_disk",
    "count_quarter_disk",
    "counting_function",
    "critical_constants",
    "direct_spectrum",
    "ebk_spectrum",
    "hill_spectrum",
    "load_metric",
    "nondegeneracy_passed",
    "parse_metric",
    "remainder_series",
    "typicality_test",
    "validate",
]
