from __future__ import annotations

from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.special import eval_gegenbauer

from scheme_lab import catalog
from scheme_lab.catalog import lssd_parameters
from scheme_lab.errors import NoCutoffFound, NotAnSRGSpectrum, NotASymmetricDesign, UnsupportedDimension
from scheme_lab.feasibility import (
    check_fc,
    cutoff_from_spectrum,
    default_cap,
    degree_cutoff,
    gegenbauer_eval,
    lssd_feasibility,
    opd_conditions,
    relative_bound,
    run_battery,
    schoenberg_theta,
    srg_parameters,
)
from scheme_lab.scheme import verify_scheme_axioms
from scheme_lab.verdict import Report

from support import built_schemes


def normalised_gegenbauer(m: int, degree: int, t: float) -> float:
    alpha = (m - 2) / 2
    return eval_gegenbauer(degree, alpha, t) / eval_gegenbauer(degree, alpha, 1.0)


@settings(max_examples=60)
@given(st.integers(3, 30), st.integers(0, 12), st.fractions(-1, 1, max_denominator=20))
def test_gegenbauer_matches_scipy(m, degree, t):
    assert float(gegenbauer_eval(m, degree, t)) == pytest.approx(normalised_gegenbauer(m, degree, float(t)), abs=1e-9)


def test_gegenbauer_dimension_three_is_legendre():
    # P_2(t) = (3t^2 - 1)/2
    assert gegenbauer_eval(3, 2, Fraction(1, 2)) == Fraction(-1, 8)


def test_gegenbauer_refuses_floats_and_bad_degree():
    with pytest.raises(TypeError):
        gegenbauer_eval(5, 2, 0.5)
    with pytest.raises(ValueError):
        gegenbauer_eval(5, -1, 0)
    with pytest.raises(UnsupportedDimension):
        gegenbauer_eval(2, 3, 0)


def numeric_theta(scheme, ps, i: int, lmax: int) -> np.ndarray:
    """Eigenvalues of the entrywise Gegenbauer image of the spherical Gram matrix, from floats."""
    D = range(ps.d + 1)
    A = [scheme.relation(j).astype(float) for j in D]
    E = [sum(float(ps.Q[r, j]) * A[r] for r in D) / scheme.n for j in D]
    m = int(ps.multiplicities[i])
    gram = np.clip(E[i] * scheme.n / m, -1, 1)
    out = np.zeros((lmax + 1, ps.d + 1))
    for l in range(lmax + 1):
        G = normalised_gegenbauer(m, l, gram)
        for j in D:
            out[l, j] = np.trace(G @ E[j]) / max(np.trace(E[j]), 1e-12)
    return out


@pytest.mark.parametrize("name, i", [("hypercube 4", 1), ("hypercube 4", 2), ("Petersen", 1),
                                     ("Petersen", 2),
                                     ("worked LSSD(16,10,6;3)", 1), ("worked LSSD(16,10,6;3)", 2)])
def test_theta_matches_float_gram_oracle(name, i):
    scheme = built_schemes()[name]
    ps = verify_scheme_axioms(scheme)
    table = schoenberg_theta(ps, i, 6)
    expected = numeric_theta(scheme, ps, i, 6)
    got = np.array([[float(x) for x in row] for row in table.rows])
    assert np.allclose(got, expected, atol=1e-6)
    # a genuine spherical embedding never produces a negative coefficient
    assert table.first_negative() is None


def test_cutoff_is_first_degree_under_bound():
    ps = catalog.primitive_441()
    m = int(ps.multiplicities[1])
    lam = [ps.Q[j, 1] / m for j in range(ps.d + 1)]
    x = degree_cutoff(ps, 1)

    def total(y):
        s = Fraction(0)
        for j in range(1, ps.d + 1):
            prod = Fraction(1)
            for l in range(2, y + 2):
                mu = Fraction(l - 1, l + m - 3)
                lam2 = lam[j] ** 2
                prod *= lam2 if (1 + mu) ** 2 * lam2 >= 4 * mu else mu
            s += prod * ps.valencies[j] * (1 + lam[j] ** 2)
        return s

    assert total(x) <= Fraction(1, ps.n)
    assert x == 1 or total(x - 1) > Fraction(1, ps.n)


def test_cutoff_cap(monkeypatch):
    with pytest.raises(NoCutoffFound):
        cutoff_from_spectrum(10, 3, [9], [Fraction(1)], Fraction(1, 10), cap=5)
    monkeypatch.setenv("SCHEME_LAB_CAP", "7")
    assert default_cap() == 7
    monkeypatch.setenv("SCHEME_LAB_CAP", "0")
    with pytest.raises(ValueError):
        default_cap()


def test_fc_on_catalog_and_negative_krein():
    for factory in catalog.NAMED.values():
        assert all(v.passed for v in check_fc(factory())), factory
    # nine fibers of (16,6,2) designs push q^1_11 below zero
    _, info = lssd_feasibility(16, 6, 2, 9)
    assert info.q111 == Fraction(-2, 9)
    failed = {v.test_id for v in check_fc(lssd_parameters(16, 6, 2, 9)) if v.failed}
    assert "FC1 Krein" in failed


@pytest.mark.parametrize("name", ["hypercube 3", "hypercube 4", "Petersen", "K33", "worked LSSD(16,10,6;3)"])
def test_realised_schemes_pass_battery(name):
    report = run_battery(verify_scheme_axioms(built_schemes()[name]))
    assert report.status != "infeasible", report.failing()


def test_irrational_spectrum_is_inconclusive():
    report = run_battery(verify_scheme_axioms(built_schemes()["C8"], require_spectrum=False))
    assert report.status == "inconclusive"


def test_report_json_round_trip():
    report = run_battery(catalog.primitive_441())
    again = Report.from_json(report.to_json())
    assert again.status == report.status == "infeasible"
    assert [v.witness for v in again.verdicts] == [v.witness for v in report.verdicts]


def test_lssd_requires_design():
    with pytest.raises(NotASymmetricDesign):
        lssd_feasibility(16, 6, 3, 3)
    with pytest.raises(ValueError):
        lssd_feasibility(16, 6, 2, 1)


designs = [(v, k, lam) for v in range(4, 200) for k in range(2, v - 1) for lam in range(1, k)
           if k * (k - 1) == lam * (v - 1)]


@pytest.mark.parametrize("v, k, lam", designs[:60])
def test_lssd_linking_values(v, k, lam):
    """Block intersections across fibers take two values; their moments must be solvable."""
    verdicts, info = lssd_feasibility(v, k, lam, 3)
    if info.s is None:
        assert any(vd.failed for vd in verdicts)
        return
    s = int(info.s)
    assert s * s == k - lam
    if info.mu is None:
        return
    assert info.mu - info.nu == (s if info.heaviness == "mu-heavy" else -s)
    # x blocks meet a fixed block in mu points and v - x in nu points:
    # first moment k^2, second moment k^2 + k(k-1)lambda
    x = (k * k - v * info.nu) / (info.mu - info.nu)
    assert x.denominator == 1 and 0 <= x <= v
    assert x * info.mu ** 2 + (v - x) * info.nu ** 2 == k * k + k * (k - 1) * lam


def test_lssd_two_fibers_skips_multi_conditions():
    verdicts, _ = lssd_feasibility(16, 6, 2, 2)
    by = {v.test_id: v for v in verdicts}
    assert by["order s integral"].status == "inapplicable"
    assert by["v composite"].status == "inapplicable"


def test_relative_bound_values():
    assert relative_bound(3, Fraction(1, 3)) == 4
    assert relative_bound(5, Fraction(1, 3)) == 10
    assert relative_bound(9, Fraction(1, 3)) is None
    with pytest.raises(ValueError):
        relative_bound(3, 1)


def test_srg_parameters_against_petersen():
    A = built_schemes()["Petersen"].relation(1).astype(float)
    eig = np.round(np.linalg.eigvalsh(A)).astype(int)
    params = srg_parameters(3, 1, -2)
    assert params["v"] == 10 and params["lambda"] == 0 and params["mu"] == 1
    assert params["f"] == int((eig == 1).sum()) and params["g"] == int((eig == -2).sum())
    with pytest.raises(NotAnSRGSpectrum):
        srg_parameters(3, 2, 1)


def test_opd_conditions_dimension_criterion():
    # Petersen: v / (1 + k beta^2) with beta = 1/3 gives 15/2, so no integer dimension induces it
    verdicts = {v.test_id: v for v in opd_conditions((10, 3, 1, -2), beta=Fraction(1, 3), m=5)}
    assert verdicts["srg spectrum consistent"].passed
    assert verdicts["dimension induces scheme"].failed
