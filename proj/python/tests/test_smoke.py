import math
from fractions import Fraction

import numpy as np
import pytest

import sasaki5


def test_homogeneous_structure_solves_hypo():
    eta = sasaki5.homogeneous_structure()
    assert max(sasaki5.residual_hypo(eta)) < 1e-12


def test_case_i_closed_form():
    eta = sasaki5.closed_form_case_i(1.0, 0, 0.0)
    assert eta[0, 0] == pytest.approx(1 / 3)
    assert eta[0, 3] == pytest.approx(1.0)
    assert np.all(eta[1] == 0)


def test_turning_points_and_roots():
    tp = sasaki5.turning_points(-9 / 2197)
    assert tp == pytest.approx([math.sqrt(1 / 13), math.sqrt(3 / 13)])
    assert sasaki5.cubic_roots_exact("-9/2197") == ["-3/52", "1/13", "3/13"]
    with pytest.raises(sasaki5.SasakiError):
        sasaki5.turning_points(-0.02)


def test_case_ii_flow_conserves_A():
    flow = sasaki5.evolve_case_ii(0.3, -9 / 2197, C=6.0, t1=0.5, sample_every=100)
    assert flow["reason"] == "completed"
    assert flow["max_drift"] < 1e-8
    h = flow["state"][:, 0]
    assert np.all(np.diff(h) > 0)


def test_enumeration_and_classification():
    table = sasaki5.enumerate_families(13)
    rows = [(r["delta_minus"], r["delta_plus"], r["A"]) for r in table["families"]]
    assert ("1/13", "3/13", "-9/2197") in rows
    v = sasaki5.classify(Fraction(-9, 2197), 6)
    assert v["verdict"]["branch"] == "YpqBranch"
    assert v["extension"]["pass"]
    assert sasaki5.classify("-1/108", 6)["verdict"]["branch"] == "NoCompactExtension"


def test_einstein_residual():
    x = sasaki5.ypq_sample_points(-9 / 2197, 6.0, 1)[0]
    report = sasaki5.ricci(-9 / 2197, 6.0, x)
    assert report["einstein_residual"] < 1e-4


def test_case_iii_rejected():
    rej = sasaki5.reject_case_iii(0.4, 0.3, 0.0, 0.1, 0.2, m=1)
    assert rej["report"]["branch"] == "Reject"
    assert rej["report"]["obstruction"]
