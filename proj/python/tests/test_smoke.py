import math
from pathlib import Path

import pytest

import liouville

FIXTURES = Path(__file__).resolve().parents[2] / "fixtures"


def metric(name):
    return liouville.load_metric(str(FIXTURES / f"{name}.json"))


def test_round_trip_and_validation():
    m = metric("sample")
    assert liouville.parse_metric(m.dump()) == m
    assert all(ok for ok, _ in liouville.validate(m))
    assert not all(ok for ok, _ in liouville.validate(metric("flat")))


def test_endpoint_derivative():
    ac = liouville.ActionCurve(metric("sample"))
    assert ac.dF(ac.constants.c1, 1) == pytest.approx(-1 / (2 * math.sqrt(2)), rel=1e-6)
    assert ac.dF(ac.constants.c4, 2) == pytest.approx(0.5, rel=1e-6)


def test_area_identity():
    m = metric("revolution")
    ratio = liouville.area_torus(m) / (4 * math.pi)
    assert ratio == pytest.approx(liouville.area_action_domain(liouville.ActionCurve(m)) / math.pi**2, abs=1e-6)


def test_flat_spectra():
    direct = liouville.direct_spectrum(metric("flat"), 13, 16)
    assert direct[1] == pytest.approx(4 * math.pi**2, rel=1e-8)
    assert liouville.counting_function(direct, 2 * math.pi + 0.1) == 5
    ebk = liouville.ebk_spectrum(liouville.ActionCurve(metric("flat")), 7.0)
    assert len(ebk) == 4
    assert ebk[0]["lambda"] == pytest.approx(2 * math.pi)
    assert liouville.hill_spectrum(7.0, 26, 1)[0] == pytest.approx(7.0)


def test_lattice_and_diophantine():
    assert liouville.count_disk(2 * math.pi) == 6
    assert liouville.count_quarter_disk(2 * math.pi) == 3
    assert liouville.continued_fraction((1 + math.sqrt(5)) / 2, 5) == [1, 1, 1, 1, 1, 1]
    assert liouville.typicality_test((1 + math.sqrt(5)) / 2, 1.0, 1000)["passed"]


def test_errors_carry_codes():
    with pytest.raises(liouville.LiouvilleError) as info:
        liouville.counting_function([0.0, 1.0], 100.0)
    assert info.value.code == "Truncated"
    with pytest.raises(liouville.LiouvilleError):
        liouville.parse_metric("{")
