"""Shared fixtures-as-functions: built schemes, printed tables, small oracles."""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

import numpy as np

from scheme_lab.connectivity import distance_scheme
from scheme_lab.constructions import (
    cameron_seidel,
    degenerate_lssd,
    hypercube_scheme,
    lssd_from_oa_hadamard,
    worked_example,
)
from scheme_lab.graphs import complete_multipartite, cycle, petersen
from scheme_lab.scheme import ConcreteScheme, ParameterSet, verify_scheme_axioms


def F(x) -> Fraction:
    return Fraction(x)


def grid(rows) -> list[list[Fraction]]:
    return [[Fraction(x) for x in r] for r in rows]


def sign_grid(text: str) -> np.ndarray:
    """Rows of '+'/'-' characters to a +-1 integer array."""
    rows = [ln.strip() for ln in text.strip().splitlines() if ln.strip()]
    return np.array([[1 if c == "+" else -1 for c in r] for r in rows], dtype=np.int64)


@lru_cache(maxsize=None)
def worked_lssd():
    oa, h, _ = worked_example()
    return lssd_from_oa_hadamard(oa, h)


@lru_cache(maxsize=None)
def built_schemes() -> dict[str, ConcreteScheme]:
    """Every concrete scheme the suite builds; all have at most 256 vertices."""
    return {
        "hypercube 3": hypercube_scheme(3),
        "hypercube 4": hypercube_scheme(4),
        "Cameron-Seidel (2,8)": cameron_seidel(2, 8),
        "worked LSSD(16,10,6;3)": worked_lssd().scheme,
        "degenerate LSSD (4,3)": degenerate_lssd(4, 3),
        "Petersen": distance_scheme(petersen(), "Petersen"),
        "C4": distance_scheme(cycle(4), "C4"),
        "C5": distance_scheme(cycle(5), "C5"),
        "C8": distance_scheme(cycle(8), "C8"),
        "K33": distance_scheme(complete_multipartite(2, 3), "K33"),
    }


@lru_cache(maxsize=None)
def built_parameters(name: str) -> ParameterSet:
    return verify_scheme_axioms(built_schemes()[name], require_spectrum=False)


# Intersection matrices of the 3-cube; entry [k][j] of the i-th matrix is p^k_ij.
HYPERCUBE3_L = [
    grid([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]]),
    grid([[0, 3, 0, 0], [1, 0, 2, 0], [0, 2, 0, 1], [0, 0, 3, 0]]),
    grid([[0, 0, 3, 0], [0, 2, 0, 1], [1, 0, 2, 0], [0, 3, 0, 0]]),
    grid([[0, 0, 0, 1], [0, 0, 1, 0], [0, 1, 0, 0], [1, 0, 0, 0]]),
]

# Printed eigenmatrices and Krein arrays of the two 6-vertex schemes.
K33_P = grid([[1, 3, 2], [1, 0, -1], [1, -3, 2]])
K33_Q = grid([[1, 4, 1], [1, 0, -1], [1, -2, 1]])
K33_LSTAR = {1: grid([[0, 4, 0], [1, 2, 1], [0, 4, 0]]), 2: grid([[0, 0, 1], [0, 1, 0], [1, 0, 0]])}
OCTAHEDRON_P = K33_Q
OCTAHEDRON_Q = K33_P
OCTAHEDRON_LSTAR = {1: grid([[0, 3, 0], [1, 0, 2], [0, 3, 0]]), 2: grid([[0, 0, 2], [0, 2, 0], [1, 0, 1]])}

# Degree-l Gegenbauer eigenvalues for the 441-point example as printed:
# rows are idempotents j = 0..3, columns degrees l = 0..6.
PRIMITIVE_441_THETA = [
    [441, 0, 0, 4.95, 0.43, -0.11, 0.93],
    [0, 22.05, 4.5, 0.38, 0.67, 0.84, 0.97],
    [0, 0, 1.95, 1.09, 0.81, 1, 1.04],
    [0, 0, 0, 0.97, 1.17, 1.02, 0.98],
]


def cameron_seidel_intersection_table(r: int, w: int) -> list[list[Fraction]]:
    """Printed closed forms for (p^j_11, p^j_12, p^j_13, p^j_22, p^j_23, p^j_33), j = 0..3, unscaled."""
    e = 2 ** r
    a, b = Fraction(2) ** (r - 2), Fraction(2) ** (r - 1)
    rows = [
        [(2 * e + 2) * (w - 1), 0, 0, e * e - 1, 0, (2 * e - 2) * (w - 1)],
        [(e + 3) * (w - 2), (e + 1) - Fraction(2) ** (1 - r), (e - 1) * (w - 2), 0, e - 1, (Fraction(e, 4) - 1) * (w - 2)],
        [(e + 2) * (w - 1), 0, e * (w - 1), e * e - 2, 0, (e - 2) * (w - 1)],
        [(e + 1) * (w - 2), e + 1, (e + 1) * (w - 2), 0, (e - 1) - 1, (Fraction(e, 4) - 3) * (w - 2)],
    ]
    scale = [a, b, a, 1, b, a]
    return [[Fraction(x) * s for x, s in zip(row, scale)] for row in rows]


def cameron_seidel_krein_table(r: int, w: int) -> list[list[Fraction]]:
    """Printed closed forms for (q^j_11, q^j_12, q^j_13, q^j_22, q^j_23, q^j_33), j = 0..3."""
    N = Fraction(2 ** (2 * r))
    return [
        [N - 1, 0, 0, (w - 1) * (N - 1), 0, w - 1],
        [N / w - 2, N * Fraction(w - 1, w), 0, N * (w - 1) ** 2 / w - 2 * (w - 1), w - 1, 0],
        [N / w, N * Fraction(w - 1, w) - 2, 1, N * (w - 1) ** 2 / w + 2 * (w - 2), w - 2, 0],
        [0, N - 1, 0, (w - 2) * (N - 1), 0, w - 2],
    ]


PAIRS = [(1, 1), (1, 2), (1, 3), (2, 2), (2, 3), (3, 3)]

# Printed entries that disagree with the built scheme, keyed by (row j, pair index),
# mapped to the value the built scheme actually has.
CS_INTERSECTION_ERRATA = {(3, 4): Fraction(5), (1, 5): Fraction(18), (3, 5): Fraction(6)}
CS_KREIN_ERRATA = {(2, 3): Fraction(86)}

# First mixed block of the worked LSSD example, one row per line.
WORKED_H12 = """
+----+++-+++-+++
-++++----+++-+++
-+++-++++----+++
-+++-+++-++++---
-+--+-+++-+++-++
+-++-+--+-+++-++
+-+++-++-+--+-++
+-+++-+++-++-+--
--+-++-+++-+++-+
++-+--+-++-+++-+
++-+++-+--+-++-+
++-+++-+++-+--+-
---++++-+++-+++-
+++----++++-+++-
+++-+++----++++-
+++-+++-+++----+
"""
