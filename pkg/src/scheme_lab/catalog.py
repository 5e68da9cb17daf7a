"""Named parameter sets used in tests, the CLI and the benchmarks."""

from __future__ import annotations

from fractions import Fraction as F

from .rational import RMatrix, rational_sqrt
from .scheme import ParameterSet, p_from_q, parameters_from_eigenmatrices, q_from_p


def _m(rows) -> RMatrix:
    return RMatrix([[F(x) for x in r] for r in rows])


# 3-class primitive Q-polynomial parameter set on 441 points, ruled out by
# a negative Gegenbauer eigenvalue at degree 5
PRIMITIVE_441_P = _m([
    [1, 100, 240, 100],
    [1, 37, -12, -26],
    [1, 2, -12, 9],
    [1, -5, 9, -5],
])
PRIMITIVE_441_Q = _m([
    [1, 20, 180, 240],
    [1, F(37, 5), F(18, 5), -12],
    [1, -1, -9, 9],
    [1, F(-26, 5), F(81, 5), -12],  # printed as 91/5; P Q = n I forces 81/5
])

# 4-class Q-bipartite parameter set on 9984 points that survives the battery
QBIP_9984_P = _m([
    [1, 1116, 7750, 1116, 1],
    [1, 186, 0, -186, -1],
    [1, 24, -50, 24, 1],
    [1, -6, 0, 6, -1],
    [1, -36, 70, -36, 1],
])
QBIP_9984_Q = _m([
    [1, 156, 2976, 4836, 2015],
    [1, 26, 64, -26, -65],
    [1, 0, F(-96, 5), 0, F(91, 5)],
    [1, -26, 64, 26, -65],
    [1, -156, 2976, -4836, 2015],
])

# 4-class Q-bipartite parameter set on 594 points, excluded by the fifth
# Q-bipartite inequality
QBIP_594_P = _m([
    [1, 128, 336, 128, 1],
    [1, 64, 0, -64, -1],
    [1, 20, -42, 20, 1],
    [1, -2, 0, 2, -1],
    [1, -4, 6, -4, 1],
])
QBIP_594_Q = _m([
    [1, 9, 44, 288, 252],
    [1, F(9, 2), F(55, 8), F(-9, 2), F(-63, 8)],
    [1, 0, F(-11, 2), 0, F(9, 2)],
    [1, F(-9, 2), F(55, 8), F(9, 2), F(-63, 8)],
    [1, -9, 44, -288, 252],
])

# halved 7-cube: metric and cometric, primitive, 64 points
HALVED_7CUBE_P = _m([
    [1, 21, 35, 7],
    [1, 9, -5, -5],
    [1, 1, -5, 3],
    [1, -3, 3, -1],
])
HALVED_7CUBE_Q = _m([
    [1, 7, 21, 35],
    [1, 3, 1, -5],
    [1, -1, -3, 3],
    [1, -5, 9, -5],
])

# dual polar graph B_3(2) on 135 points
B32_P = _m([
    [1, 14, 56, 64],
    [1, 5, 2, -8],  # printed as -2; nontrivial rows of P sum to 0
    [1, -1, -4, 4],
    [1, -7, 14, -8],
])
B32_Q = _m([
    [1, 35, 84, 15],
    [1, F(25, 2), -6, F(-15, 2)],
    [1, F(5, 4), -6, F(15, 4)],
    [1, F(-35, 8), F(21, 4), F(-15, 8)],
])

# K_{3,3} and its dual, the octahedron K_{2,2,2}
K33_P = _m([[1, 3, 2], [1, 0, -1], [1, -3, 2]])
OCTAHEDRON_P = _m([[1, 4, 1], [1, 0, -1], [1, -2, 1]])


def primitive_441() -> ParameterSet:
    return parameters_from_eigenmatrices(PRIMITIVE_441_P, PRIMITIVE_441_Q, "primitive 441")


def qbipartite_9984() -> ParameterSet:
    return parameters_from_eigenmatrices(QBIP_9984_P, QBIP_9984_Q, "Q-bipartite 9984")


def qbipartite_594() -> ParameterSet:
    return parameters_from_eigenmatrices(QBIP_594_P, QBIP_594_Q, "Q-bipartite 594")


def k33() -> ParameterSet:
    return parameters_from_eigenmatrices(K33_P, q_from_p(K33_P), "K33")


def octahedron() -> ParameterSet:
    return parameters_from_eigenmatrices(OCTAHEDRON_P, q_from_p(OCTAHEDRON_P), "octahedron")


def halved_7cube() -> ParameterSet:
    return parameters_from_eigenmatrices(HALVED_7CUBE_P, HALVED_7CUBE_Q, "halved 7-cube")


def b32() -> ParameterSet:
    return parameters_from_eigenmatrices(B32_P, B32_Q, "B3(2)")


def lssd_second_eigenmatrix(v: int, k: int, lam: int, w: int, mu_heavy: bool = True) -> RMatrix:
    """Q of the 3-class scheme of an LSSD(v, k, lambda; w).

    Relations: 0, the design relation of block size k, same fiber, the
    complementary design. Idempotents: E0, the simplex idempotent (rank v-1),
    the large one (rank (v-1)(w-1)), the fiber idempotent (rank w-1). The
    simplex idempotent is positive on the mu-heavy relation.
    """
    s = rational_sqrt(F(k - lam))
    if s is None or s == 0:
        raise ValueError("k - lambda must be a positive square")
    a, b = F(v - k) / s, F(-k) / s
    if not mu_heavy:
        a, b = -a, -b
    return _m([
        [1, v - 1, (v - 1) * (w - 1), w - 1],
        [1, a, -a, -1],
        [1, -1, -(w - 1), w - 1],
        [1, b, -b, -1],
    ])


def lssd_parameters(v: int, k: int, lam: int, w: int, mu_heavy: bool | None = None) -> ParameterSet:
    """Parameter set of an LSSD(v, k, lambda; w); heaviness from the design when omitted."""
    if mu_heavy is None:
        s = rational_sqrt(F(k - lam))
        mu_heavy = s is not None and (k * (k - s)) % v == 0
    Q = lssd_second_eigenmatrix(v, k, lam, w, mu_heavy)
    return parameters_from_eigenmatrices(p_from_q(Q), Q, f"LSSD({v},{k},{lam};{w})")


NAMED = {
    "primitive-441": primitive_441,
    "qbipartite-9984": qbipartite_9984,
    "qbipartite-594": qbipartite_594,
    "halved-7-cube": halved_7cube,
    "b32": b32,
    "k33": k33,
    "octahedron": octahedron,
}
