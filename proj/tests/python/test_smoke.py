import json
import math
import os

import pytest

import arakelov as ak

OMEGA = sum(math.exp(-math.pi * n * n) for n in range(-8, 9))
DATA = os.environ.get("ARAKELOV_DATA", os.path.join(os.path.dirname(__file__), "..", "..", "data"))


def test_field_info():
    f = ak.field("73")
    assert f.degree == 2 and f.r1 == 2
    assert abs(f.regulator - math.log(1068 + 125 * math.sqrt(73))) < 1e-12
    assert ak.field("-1").info()["w"] == 4


def test_trivial_divisor_of_q():
    q = ak.field("Q")
    t = ak.h0(ak.Divisor(q, [0.0]))
    assert abs(t["k0"] - OMEGA) < 1e-12


def test_riemann_roch_and_ideal():
    f = ak.field("-5")
    d = ak.Divisor(f, [0.3], ideal="[[2,0],[1,1]]")
    assert abs(d.degree - (0.3 - math.log(2))) < 1e-12
    assert abs(ak.rr_defect(d)) < 1e-9
    assert abs(d.dual().degree - (math.log(20) - d.degree)) < 1e-10


def test_zeta_and_two_variable():
    z = ak.completed_zeta(ak.field("Q"), 2.0)
    assert abs(z["value"] - math.pi / 3) < 1e-9
    a, b = ak.two_variable_zeta_Q(-1, -2), ak.two_variable_zeta_Q(-2, -1)
    assert abs(a - b) < 1e-10
    # P^1 over F_2
    s = 0.4
    closed = (2 - 1) * 2 ** -s / ((1 - 2 ** -s) * (1 - 2 ** (1 - s)))
    assert abs(ak.curve_two_variable_zeta(2, 0, 1, {}, s, 1 - s) - closed) < 1e-12


def test_eta():
    e = ak.eta(ak.field("-1"))
    assert abs(e["eta"] - OMEGA ** 2 * (2 + math.sqrt(2)) / 4) < 1e-9


def test_bundle_from_file():
    with open(os.path.join(DATA, "bundles", "bundle_rank2_gaussian.json")) as fh:
        desc = json.load(fh)
    m = ak.Bundle(ak.field("-1"), desc)
    assert m.rank == 2
    assert abs(m.rr_defect()) < 1e-9
    assert abs(ak.trivial_bundle(ak.field("Q"), 2).h0()["k0"] - OMEGA ** 2) < 1e-12


def test_errors():
    with pytest.raises(ak.ValidationError):
        ak.field("4")
    with pytest.raises(ak.BudgetExceededError):
        ak.trivial_bundle(ak.field_from_descriptor({"polynomial": [1, 1, 1, 1, 1], "w": 10}), 4).h0()
