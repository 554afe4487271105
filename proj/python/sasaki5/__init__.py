"""Cohomogeneity-one Einstein-Sasaki 5-metrics on SU(2) x U(1).

Thin layer over the compiled ``_core`` module. Functions ending in ``_json`` in
the core return JSON text; the wrappers here decode it.
"""

import json

from . import _core
from ._core import (
    SasakiError,
    case_ii_structure,
    closed_form_case_i,
    cubic_roots,
    cubic_roots_exact,
    evolve_case_ii,
    evolve_case_iii,
    evolve_general,
    homogeneous_structure,
    residual_hypo,
    turning_points,
    wq,
    ypq_metric,
    ypq_sample_points,
)

__all__ = [
    "SasakiError",
    "case_ii_structure",
    "classify",
    "closed_form_case_i",
    "cubic_roots",
    "cubic_roots_exact",
    "enumerate_families",
    "evolve_case_ii",
    "evolve_case_iii",
    "evolve_general",
    "homogeneous_structure",
    "normal_form",
    "reject_case_iii",
    "residual_hypo",
    "ricci",
    "turning_points",
    "wq",
    "ypq_metric",
    "ypq_sample_points",
]


def _exact(x):
    # Accept "p/q" strings, ints and fractions.Fraction.
    return str(x)


def enumerate_families(bound, m=0, c_max=64):
    """Quasi-regular families with root denominators up to ``bound``."""
    return json.loads(_core.enumerate_json(bound, m, c_max))


def classify(A, C, m=0, check=True):
    """Verdict for (A, C, m); with ``check`` also the per-end extension reports."""
    return json.loads(_core.classify_json(_exact(A), _exact(C), m, check))


def reject_case_iii(h, k, b, c, a, m=0):
    return json.loads(_core.reject_case_iii_json(h, k, b, c, a, m))


def normal_form(eta, m=0):
    return json.loads(_core.normal_form_json(eta, m))


def ricci(A, C, point, fd_step=1e-3):
    return json.loads(_core.ricci_json(A, C, point, fd_step))
