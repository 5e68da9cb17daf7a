from __future__ import annotations

import itertools
from fractions import Fraction
from math import gcd, isqrt

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from scheme_lab.errors import DomainViolation
from scheme_lab.families import (
    FAMILIES,
    complement_design,
    enumerate_args,
    evaluate_triple,
    family_params,
    family_verdict,
)


@pytest.mark.parametrize("fid, args, triple", [
    (1, {"q": 2, "m": 2}, (7, 3, 1)),
    (2, {"n": 4}, (15, 7, 3)),
    (6, {"t": 2}, (16, 6, 2)),
    (7, {"q": 2, "m": 1}, (16, 6, 2)),
    (8, {"m": 2}, (11, 5, 2)),
    (9, {"m": 2}, (36, 15, 6)),
    (13, {"d": 0}, (16, 6, 2)),
])
def test_small_members(fid, args, triple):
    assert family_params(fid, args) == triple


SMALL_V = 20000


@pytest.mark.parametrize("fid", sorted(FAMILIES))
def test_sweep_matches_grid_search(fid):
    """The pruned sweep finds exactly the members a bounded grid search finds."""
    spec = FAMILIES[fid]
    grids = []
    for name, start in zip(spec.params, spec.starts):
        grids.append(spec.fixed.get(name, range(start, start + 40)))
    brute = set()
    for vals in itertools.product(*grids):
        args = dict(zip(spec.params, vals))
        try:
            if spec.formula(*vals)[0] > SMALL_V:
                continue
            v, k, lam = family_params(fid, args)
        except (DomainViolation, ZeroDivisionError):
            continue
        assert k * (k - 1) == lam * (v - 1)
        if v <= SMALL_V:
            brute.add(tuple(vals))
    swept = {tuple(a[p] for p in spec.params) for a in enumerate_args(fid, vmax=SMALL_V)}
    in_box = {t for t in swept if all(x in g for x, g in zip(t, grids))}
    assert in_box == brute


def reference_failures(v: int, k: int, lam: int) -> set[str]:
    out = set()
    s = isqrt(k - lam)
    if s * s != k - lam:
        out.add("order s integral")
    if sympy.isprime(v):
        out.add("v composite")
    if gcd(v, k) == 1:
        out.add("gcd(v, k) > 1")
    if s * s == k - lam and 1 < k < v - 1:
        if gcd(v, s) == 1:
            out.add("gcd(v, s) > 1")
        integral = [Fraction(k * (k + e * s), v).denominator == 1 for e in (1, -1)]
        if sum(integral) != 1:
            out.add("exactly one linking value integral")
    return out


designs = [(v, k, lam) for v in range(5, 400) for k in range(2, v // 2 + 1) for lam in range(1, k)
           if k * (k - 1) == lam * (v - 1)]


@given(st.sampled_from(designs))
def test_evaluate_triple_against_reference(design):
    feasible, failing, _, verdicts = evaluate_triple(*design)
    assert set(failing) == reference_failures(*design)
    assert feasible == (not failing)
    assert all(v.witness is not None for v in verdicts if v.failed)


def test_complement_design():
    assert complement_design(16, 6, 2) == (16, 10, 6)
    v, k, lam = complement_design(*family_params(8, {"m": 3}))
    assert k * (k - 1) == lam * (v - 1)


def test_domain_errors():
    with pytest.raises(DomainViolation):
        family_params(22, {})
    with pytest.raises(DomainViolation):
        family_params(1, {"q": 2})
    with pytest.raises(DomainViolation):
        family_params(1, {"q": 6, "m": 2})
    with pytest.raises(DomainViolation):
        family_params(6, {"t": 1})
    with pytest.raises(DomainViolation):
        family_params(4, {"variant": 4, "n": 1})
    with pytest.raises(DomainViolation):
        list(enumerate_args(6, {"x": range(3)}))
    with pytest.raises(DomainViolation):
        family_verdict(1, {"q": [6], "m": [2]})


def test_report_json():
    report = family_verdict(6, vmax=10**4)
    doc = report.to_json()
    assert doc["family"] == 6 and doc["summary"]["status"] == "pass"
    assert len(doc["instances"]) == report.feasible_count == len(report.instances)
    assert doc["instances"][0]["design"] == [16, 6, 2]


def test_sweep_respects_explicit_ranges():
    report = family_verdict(12, {"q": [2, 3], "d": [1], "m": [1, 2]}, vmax=10**9)
    assert {(i.args["q"], i.args["m"]) for i in report.instances} == {(2, 1), (2, 2), (3, 1), (3, 2)}
    assert report.summary.passed
