"""Feasibility battery for association scheme parameter sets.

Every comparison is exact. Decimal renderings found in the literature are
only ever compared after rounding our exact values.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, isqrt
from typing import Sequence

from .errors import NoCutoffFound, NotAnSRGSpectrum, NotASymmetricDesign, UnsupportedDimension
from .rational import rational_sqrt, to_rational
from .scheme import KreinArray, ParameterSet, QOrdering, polynomial_orderings
from .verdict import Report, Verdict, check, inapplicable

__all__ = [
    "Verdict",
    "ThetaTable",
    "check_fc",
    "gegenbauer_eval",
    "schoenberg_theta",
    "theta_via_entrywise",
    "degree_cutoff",
    "cutoff_from_spectrum",
    "krein_q22",
    "cometric_bounds",
    "cometric_theta",
    "LssdInfo",
    "lssd_feasibility",
    "relative_bound",
    "srg_parameters",
    "opd_conditions",
    "four_class_qbipartite_condition",
    "run_battery",
    "default_cap",
]

ZERO = Fraction(0)
ONE = Fraction(1)


def default_cap() -> int:
    """Degree cap for the Gegenbauer battery; SCHEME_LAB_CAP overrides 64."""
    raw = os.environ.get("SCHEME_LAB_CAP")
    if raw is None:
        return 64
    cap = int(raw)
    if cap < 1:
        raise ValueError("SCHEME_LAB_CAP must be positive")
    return cap


# ---------------------------------------------------------------- FC1-FC3


def check_fc(ps: ParameterSet) -> list[Verdict]:
    """Krein nonnegativity, integrality of intersection numbers, absolute bound."""
    D = range(ps.d + 1)
    out: list[Verdict] = []

    if ps.q_tensor is None:
        reason = "spectrum is irrational; Krein parameters unavailable"
        out.append(inapplicable("FC1 Krein", reason, "Krein condition"))
    else:
        neg = next(((i, j, k, ps.q(i, j, k)) for i in D for j in D for k in D if ps.q(i, j, k) < 0), None)
        out.append(check("FC1 Krein", neg is None, list(neg) if neg else None, "Krein condition"))

    bad = next(
        ((i, j, k, ps.p(i, j, k)) for i in D for j in D for k in D
         if ps.p(i, j, k) < 0 or ps.p(i, j, k).denominator != 1),
        None,
    )
    out.append(check("FC2 intersection numbers", bad is None, list(bad) if bad else None,
                     "intersection numbers are nonnegative integers"))

    if ps.P is None:
        out.append(inapplicable("FC2 multiplicities", "spectrum is irrational", "multiplicities are positive integers"))
        out.append(inapplicable("FC3 absolute bound", "spectrum is irrational", "absolute bound"))
        return out

    mults = ps.multiplicities
    badm = next(((j, m) for j, m in enumerate(mults) if m <= 0 or m.denominator != 1), None)
    out.append(check("FC2 multiplicities", badm is None, list(badm) if badm else None,
                     "multiplicities are positive integers"))

    viol = None
    for i in D:
        for j in range(i, ps.d + 1):
            total = sum((mults[k] for k in D if ps.q(i, j, k) != 0), ZERO)
            cap = mults[i] * (mults[i] + 1) / 2 if i == j else mults[i] * mults[j]
            if total > cap:
                viol = (i, j, total, cap)
                break
        if viol:
            break
    out.append(check("FC3 absolute bound", viol is None, list(viol) if viol else None, "absolute bound"))
    return out


# ---------------------------------------------------------------- Gegenbauer


def gegenbauer_eval(m: int, degree: int, t) -> Fraction:
    """Normalised Gegenbauer polynomial Q^m_degree(t), so that Q(1) = 1."""
    t = to_rational(t)
    if degree < 0:
        raise ValueError("degree must be nonnegative")
    if degree >= 2 and m < 3:
        raise UnsupportedDimension(f"dimension {m} < 3 is not supported beyond degree 1")
    prev, cur = ONE, t
    if degree == 0:
        return prev
    for l in range(2, degree + 1):
        prev, cur = cur, ((2 * l + m - 4) * t * cur - (l - 1) * prev) / (l + m - 3)
    return cur


@dataclass(frozen=True)
class ThetaTable:
    """Eigenvalues of the degree-l Gegenbauer polynomial applied to (n/m_i) E_i.

    ``rows[l][j]`` is the coefficient of E_j.
    """

    base_idempotent: int
    n: int
    m: int
    rows: tuple[tuple[Fraction, ...], ...]

    @property
    def lmax(self) -> int:
        return len(self.rows) - 1

    def value(self, degree: int, j: int) -> Fraction:
        return self.rows[degree][j]

    def first_negative(self) -> tuple[int, int, Fraction] | None:
        for l, row in enumerate(self.rows):
            for j, x in enumerate(row):
                if x < 0:
                    return (l, j, x)
        return None

    def verdict(self) -> Verdict:
        neg = self.first_negative()
        tid = f"Schoenberg E{self.base_idempotent}"
        if neg is None:
            return check(tid, True, self.lmax, "positive definite functions on the sphere",
                         note=f"checked degrees 0..{self.lmax}")
        return check(tid, False, list(neg), "positive definite functions on the sphere")

    def rounded(self, places: int = 2) -> list[list[float]]:
        return [[round(float(x), places) for x in row] for row in self.rows]


def _check_dim(m: Fraction) -> int:
    if m.denominator != 1 or m < 3:
        raise UnsupportedDimension(f"multiplicity {m} must be an integer >= 3")
    return int(m)


def _find_q_ordering(ps: ParameterSet, i: int) -> QOrdering | None:
    if ps.q_tensor is None:
        return None
    for qo in polynomial_orderings(ps)[1]:
        if qo.idempotent_order[1] == i:
            return qo
    return None


def schoenberg_theta(ps: ParameterSet, i: int, lmax: int, ordering: QOrdering | None = None) -> ThetaTable:
    """Exact theta table for idempotent i up to degree lmax.

    When ``ordering`` is a Q-polynomial ordering with E_1 = E_i the tridiagonal
    Krein recurrence is used; otherwise the matrix recurrence on L*_i.
    """
    if ps.q_tensor is None:
        raise UnsupportedDimension("Krein parameters unavailable for an irrational spectrum")
    m = _check_dim(ps.multiplicities[i])
    if lmax < 0:
        raise ValueError("lmax must be nonnegative")
    if ordering is not None and ordering.idempotent_order[1] == i:
        raw = cometric_theta(ordering.krein_array, ps.n, lmax)
        order = ordering.idempotent_order
        rows = []
        for row in raw:
            out = [ZERO] * (ps.d + 1)
            for pos, idx in enumerate(order):
                out[idx] = row[pos]
            rows.append(tuple(out))
        return ThetaTable(i, ps.n, m, tuple(rows))

    size = ps.d + 1
    L = ps.Lstar(i)
    Lrows = L.rows

    def apply(vec):
        return [sum((Lrows[k][j] * vec[j] for j in range(size) if vec[j]), ZERO) / m for k in range(size)]

    c_prev = [ONE if j == 0 else ZERO for j in range(size)]
    rows = [c_prev]
    if lmax >= 1:
        c_cur = [Fraction(1, m) if j == i else ZERO for j in range(size)]
        rows.append(c_cur)
        for l in range(2, lmax + 1):
            t = apply(c_cur)
            nxt = [((2 * l + m - 4) * t[j] - (l - 1) * c_prev[j]) / (l + m - 3) for j in range(size)]
            c_prev, c_cur = c_cur, nxt
            rows.append(c_cur)
    return ThetaTable(i, ps.n, m, tuple(tuple(ps.n * x for x in r) for r in rows))


def cometric_theta(ka: KreinArray, n: int, lmax: int) -> list[list[Fraction]]:
    """Theta rows from the three-term recurrence along the Krein array."""
    m = _check_dim(Fraction(ka.m))
    d = ka.d
    a = ka.a_star

    def b(j):
        return ka.b_star[j] if 0 <= j < d else ZERO

    def c(j):
        return ka.c_star[j - 1] if 1 <= j <= d else ZERO

    rows = [[Fraction(n) if j == 0 else ZERO for j in range(d + 1)]]
    if lmax >= 1:
        rows.append([Fraction(n, m) if j == 1 else ZERO for j in range(d + 1)])
    for l in range(2, lmax + 1):
        p1, p2 = rows[-1], rows[-2]
        row = []
        for j in range(d + 1):
            s = a[j] * p1[j]
            if j >= 1:
                s += c(j) * p1[j - 1]
            if j < d:
                s += b(j) * p1[j + 1]
            row.append(((2 * l + m - 4) * s - (l - 1) * m * p2[j]) / (m * (l + m - 3)))
        rows.append(row)
    return rows


def theta_via_entrywise(ps: ParameterSet, i: int, degree: int) -> list[Fraction]:
    """Independent route: apply the Gegenbauer polynomial entrywise, then expand in the idempotents."""
    m = _check_dim(ps.multiplicities[i])
    D = range(ps.d + 1)
    vals = [gegenbauer_eval(m, degree, ps.Q[j, i] / m) for j in D]
    return [sum((vals[j] * ps.P[k, j] for j in D), ZERO) for k in D]


# ---------------------------------------------------------------- degree cutoff


def _gamma(mu: Fraction, lam2: Fraction) -> Fraction:
    return lam2 if (1 + mu) ** 2 * lam2 >= 4 * mu else mu


def cutoff_from_spectrum(n: int, m: int, valencies: Sequence, lambdas: Sequence, bound, cap: int | None = None) -> int:
    """Smallest x with sum_j prod_{l=2}^{x+1} gamma_{l,j} k_j (1 + lambda_j^2) <= bound.

    ``valencies`` and ``lambdas`` run over the relations that enter the sum.
    """
    cap = default_cap() if cap is None else cap
    ks = [to_rational(k) for k in valencies]
    lam2 = [to_rational(x) ** 2 for x in lambdas]
    bound = to_rational(bound)
    weights = [k * (1 + l2) for k, l2 in zip(ks, lam2)]
    prods = [ONE] * len(ks)
    for x in range(1, cap + 1):
        l = x + 1
        mu = Fraction(l - 1, l + m - 3)
        prods = [p * _gamma(mu, l2) for p, l2 in zip(prods, lam2)]
        if sum((p * w for p, w in zip(prods, weights)), ZERO) <= bound:
            return x
    raise NoCutoffFound(cap)


def degree_cutoff(ps: ParameterSet, i: int, cap: int | None = None, ordering: QOrdering | None = None) -> int:
    """Degree beyond which the theta conditions for E_i hold automatically.

    A Q-bipartite ordering with E_1 = E_i switches to the sharper bipartite
    criterion, which drops the antipodal relation and relaxes the bound to 4/n.
    """
    m = _check_dim(ps.multiplicities[i])
    if ordering is None:
        ordering = _find_q_ordering(ps, i)
    ks = ps.valencies
    lam = [ps.Q[j, i] / m for j in range(ps.d + 1)]
    if ordering is not None and ordering.q_bipartite and ordering.idempotent_order[1] == i:
        rel = ordering.relation_order[1:-1]
        bound = Fraction(4, ps.n)
    else:
        rel = range(1, ps.d + 1)
        bound = Fraction(1, ps.n)
    return cutoff_from_spectrum(ps.n, m, [ks[j] for j in rel], [lam[j] for j in rel], bound, cap)


# ---------------------------------------------------------------- cometric bounds


def krein_q22(ka: KreinArray) -> Fraction:
    """q^2_22 from the Krein array alone, via L*_2 = (L*_1^2 - a*_1 L*_1 - m I) / c*_2."""
    if ka.d < 2:
        return ZERO
    L1 = ka.krein_matrix()
    sq = L1 @ L1
    a1 = ka.a_star[1]
    return (sq[2, 2] - a1 * L1[2, 2] - ka.m) / ka.c_star[1]


def cometric_bounds(ka: KreinArray, q22_2=None) -> list[Verdict]:
    """Inequalities on the Krein array that follow from low-degree theta values.

    Part (iv) is evaluated as a lower bound; it is the rearrangement of
    theta_{5,3} >= 0. Parts needing theta_{l,j} with j > d are inapplicable.
    The degree-4 condition on theta_{4,1} is implied by part (vi) and is not
    evaluated separately.
    """
    m = Fraction(ka.m)
    if m <= 2:
        raise UnsupportedDimension("cometric bounds need m > 2")
    d = ka.d
    q22 = krein_q22(ka) if q22_2 is None else to_rational(q22_2)
    a = list(ka.a_star) + [ZERO] * 4

    def b(j):
        return ka.b_star[j] if 0 <= j < d else ZERO

    def c(j):
        return ka.c_star[j - 1] if 1 <= j <= d else ZERO

    a1, a2, a3 = a[1], a[2], a[3]
    b1c2 = b(1) * c(2)
    cq = c(2) * q22
    cite = "cometric Gegenbauer bounds"
    out: list[Verdict] = []

    def ge(tag, lhs, rhs, need_d=1):
        tid = f"cometric ({tag})"
        if d < need_d:
            out.append(inapplicable(tid, f"needs at least {need_d} classes", cite))
        else:
            out.append(check(tid, lhs >= rhs, [lhs, rhs], cite))

    ge("i", a1 ** 2 + b1c2, 2 * m * (m - 1) / (m + 2))
    ge("ii", a1 ** 2 + 2 * a1 * a2 + cq, 4 * m * (m - 2) / (m + 4), 2)
    ge("iii",
       6 * m * (m - 1) * (m - 4) / ((m + 4) * (m + 6)) + ((3 * a1 * (a1 + a2) + cq) * b1c2 + a1 ** 4) / m,
       (7 * m - 18) * (a1 ** 2 + b1c2) / (m + 6))
    s4 = sum((b(i) * c(i + 1) + a[i] * sum(a[i:4]) for i in range(1, 4)), ZERO)
    ge("iv", s4, 3 * (3 * m - 2) / (m + 6), 3)
    ge("v",
       16 * m * (m - 1) / ((m + 4) * (m + 8)) + (a1 ** 4 + (3 * a1 * (a1 + a2) + cq) * b1c2) / ((m - 2) * m),
       12 * (a1 ** 2 + b1c2) / (m + 8))
    if a1 > 0:
        ge("vi", a1 ** 2 + b1c2 * (2 + a2 / a1), 4 * m * (2 * m - 3) / (m + 6))
        if d >= 2:
            lhs = (a1 ** 2 + 2 * a1 * a2 - a2 ** 2 + 2 * cq
                   + (b(2) * c(3) * (a3 - a1) - m * a2) / (a1 + a2))
            ge("vii", lhs, 6 * m * (m - 4) / (m + 6), 2)
        else:
            out.append(inapplicable("cometric (vii)", "needs at least 2 classes", cite))
    else:
        out.append(inapplicable("cometric (vi)", "first Krein a* is zero", cite))
        out.append(inapplicable("cometric (vii)", "first Krein a* is zero", cite))

    if all(x == 0 for x in ka.a_star):
        qcite = "Q-bipartite Gegenbauer bounds"

        def qge(tag, lhs, rhs, need_d=1):
            tid = f"Q-bipartite ({tag})"
            if d < need_d:
                out.append(inapplicable(tid, f"needs at least {need_d} classes", qcite))
            else:
                out.append(check(tid, lhs >= rhs, [lhs, rhs], qcite))

        qge("i", b1c2, 2 * m * (m - 1) / (m + 2))
        qge("ii", cq, 4 * m * (m - 2) / (m + 4), 2)
        qge("iii", 6 * m * (m - 1) * (m - 4) / ((m + 4) * (m + 6)) + b1c2 * cq / m,
            b1c2 * (7 * m - 18) / (m + 6))
        qge("iv", sum((b(i) * c(i + 1) for i in range(1, 4)), ZERO), 3 * (3 * m - 2) / (m + 6), 3)
        if b1c2 == 0:
            out.append(inapplicable("Q-bipartite (v)", "b*_1 c*_2 is zero", qcite))
        else:
            qge("v", 16 * m * (m - 1) / ((m + 4) * b1c2) + cq * (m + 8) / ((m - 2) * m), Fraction(12))
    return out


# ---------------------------------------------------------------- LSSD


@dataclass(frozen=True)
class LssdInfo:
    s: Fraction | None
    mu: Fraction | None
    nu: Fraction | None
    heaviness: str | None  # "mu-heavy" or "nu-heavy"
    optimism: str | None  # "optimistic", "pessimistic" or None when 2k = v
    q111: Fraction | None


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def lssd_feasibility(v: int, k: int, lam: int, w: int) -> tuple[list[Verdict], LssdInfo]:
    """Necessary conditions for a linked system of w symmetric (v, k, lam) designs."""
    if k * (k - 1) != lam * (v - 1) or not 0 < k < v or lam < 0:
        raise NotASymmetricDesign(f"({v}, {k}, {lam}) violates k(k-1) = lambda(v-1)")
    if w < 2:
        raise ValueError("need at least two fibers")
    multi = w > 2
    nondeg = 1 < k < v - 1
    why = "only binding with more than two fibers"
    out: list[Verdict] = []

    s = rational_sqrt(Fraction(k - lam))
    s_ok = s is not None and s.denominator == 1
    if multi:
        out.append(check("order s integral", s_ok, k - lam, "mu and nu are integers"))
    else:
        out.append(inapplicable("order s integral", why, "mu and nu are integers"))
    if not s_ok:
        return out, LssdInfo(None, None, None, None, None, None)
    s_int = int(s)

    plus = Fraction(k * (k + s_int), v)
    minus = Fraction(k * (k - s_int), v)
    ints = [x.denominator == 1 for x in (plus, minus)]
    if minus.denominator == 1:
        nu, mu, heavy = minus, minus + s_int, "mu-heavy"
    elif plus.denominator == 1:
        nu, mu, heavy = plus, plus - s_int, "nu-heavy"
    else:
        nu = mu = heavy = None

    cite = "linking parameters"
    if not multi:
        out.append(inapplicable("exactly one linking value integral", why, cite))
    elif not nondeg:
        out.append(inapplicable("exactly one linking value integral", "degenerate design", cite))
    else:
        out.append(check("exactly one linking value integral", sum(ints) == 1, [plus, minus], cite))
    for tid, ok, wit in (
        ("gcd(v, k) > 1", gcd(v, k) > 1, gcd(v, k)),
        ("gcd(v, s) > 1", gcd(v, s_int) > 1, gcd(v, s_int)),
        ("v composite", not _is_prime(v), v),
    ):
        if not multi:
            out.append(inapplicable(tid, why, "divisibility"))
        elif not nondeg:
            out.append(inapplicable(tid, "degenerate design", "divisibility"))
        else:
            out.append(check(tid, ok, wit, "divisibility"))

    if heavy is None:
        return out, LssdInfo(s, None, None, None, None, None)

    sign = (2 * k - v) * (mu - nu)
    optimism = "optimistic" if sign > 0 else ("pessimistic" if sign < 0 else None)
    # q111 is written for the mu-heavy member of the complementary pair
    km = k if heavy == "mu-heavy" else v - k
    q111 = Fraction((1 - w) * (2 * km - v) + (v - 2) * s_int, w * s_int)
    if sign > 0:
        noda = Fraction((v - 2) * s_int, 2 * km - v) + 1
        out.append(check("Noda bound", w <= noda, [Fraction(w), noda], "fiber count bound"))
    else:
        out.append(inapplicable("Noda bound", "vacuous unless the system is optimistic", "fiber count bound"))
    out.append(check("Krein q^1_11 >= 0", q111 >= 0, q111, "Krein condition"))
    return out, LssdInfo(s, mu, nu, heavy, optimism, q111)


# ---------------------------------------------------------------- line systems


def relative_bound(n: int, alpha) -> Fraction | None:
    """Relative bound on equiangular lines at angle alpha, or None if n alpha^2 >= 1."""
    alpha = to_rational(alpha)
    if not 0 < alpha < 1:
        raise ValueError("angle must lie strictly between 0 and 1")
    a2 = alpha * alpha
    if n * a2 >= 1:
        return None
    return n * (1 - a2) / (1 - n * a2)


def srg_parameters(k, r, s) -> dict:
    """(v, k, lambda, mu, f, g) from the spectrum k > r > s of a connected srg."""
    k, r, s = (to_rational(x) for x in (k, r, s))
    if not k > r > s:
        raise NotAnSRGSpectrum("eigenvalues must satisfy k > r > s")
    mu = k + r * s
    if mu <= 0:
        raise NotAnSRGSpectrum("k + r s must be positive")
    v = (k - r) * (k - s) / mu
    lam = mu + r + s
    f = (s + 1) * k * (k - s) / (mu * (s - r))
    for name, val in (("v", v), ("lambda", lam), ("f", f)):
        if val.denominator != 1 or val < 0:
            raise NotAnSRGSpectrum(f"{name} = {val} is not a nonnegative integer")
    return {"v": int(v), "k": k, "lambda": lam, "mu": mu, "f": int(f), "g": int(v) - int(f) - 1}


def opd_conditions(srg: Sequence, beta=None, m=None, delsarte_coclique: bool = False) -> list[Verdict]:
    """Conditions on an orthogonal projective double of a strongly regular graph.

    ``srg`` is (v, k, r, s) with eigenvalues k > r > s. ``delsarte_coclique``
    asserts that the graph has a coclique meeting the Delsarte bound.
    """
    v, k, r, s = (to_rational(x) for x in srg)
    params = srg_parameters(k, r, s)
    out: list[Verdict] = []
    out.append(check("srg spectrum consistent", params["v"] == v, [v, Fraction(params["v"])], "srg parameters"))

    delsarte = v / (1 - k / s)
    out.append(check("Delsarte coclique bound", True, delsarte, "Delsarte bound"))

    if delsarte_coclique and (m is None or to_rational(m) == delsarte):
        root = rational_sqrt(-s)
        complete_bipartite = s == -k
        if beta is not None:
            bt = to_rational(beta)
            ok = bt * bt * (-s) == 1
            out.append(check("beta = 1/sqrt(-s)", ok, [bt, -s], "Delsarte coclique forces the angle"))
        ok_int = complete_bipartite or (root is not None and root.denominator == 1)
        out.append(check("sqrt(-s) integral", ok_int, -s, "Delsarte coclique forces the angle"))
    else:
        out.append(inapplicable("beta = 1/sqrt(-s)", "no Delsarte coclique asserted in this dimension",
                                "Delsarte coclique forces the angle"))

    if beta is not None and m is not None:
        bt, mm = to_rational(beta), to_rational(m)
        need = v / (1 + k * bt * bt)
        if mm < v:
            out.append(check("dimension induces scheme", mm == need, [mm, need], "dimension criterion"))
        else:
            out.append(inapplicable("dimension induces scheme", "criterion needs m < v", "dimension criterion"))
    else:
        out.append(inapplicable("dimension induces scheme", "beta and m not both given", "dimension criterion"))
    return out


def four_class_qbipartite_condition(k, r, s) -> Verdict:
    """Stated necessary condition for 4-class Q-bipartite, non-Q-antipodal schemes.

    k, r, s are P_01, P_21, P_41 under the natural ordering.
    """
    k, r, s = (to_rational(x) for x in (k, r, s))
    tid = "four-class Q-bipartite square condition"
    note = "per stated theorem"
    cite = "four-class Q-bipartite bound"
    if s >= 0 or s.denominator != 1 or isqrt(int(-s)) ** 2 != -s or isqrt(int(-s)) <= 1:
        return check(tid, False, s, cite, note)
    n = Fraction(isqrt(int(-s)))
    val = (15 * n ** 4 * (2 * n ** 2 - 3) * r ** 2 + (n ** 6 - 45 * k * n ** 2 + 76 * k) * n ** 2 * r
           + k * (16 * k + n ** 6) * (n ** 2 - 2))
    return check(tid, val >= 0, val, cite, note)


# ---------------------------------------------------------------- battery


def run_battery(ps: ParameterSet, lmax: int | None = None, cap: int | None = None, label: str | None = None) -> Report:
    """Run every applicable test and aggregate the verdicts.

    Gegenbauer conditions run on E_1 of each Q-polynomial ordering, or on
    every idempotent when there is none. Without a certified cutoff they are
    checked up to the cap and the report is marked inconclusive.
    """
    cap = default_cap() if cap is None else cap
    report = Report(label or ps.provenance or "parameter set")
    report.verdicts.extend(check_fc(ps))
    if ps.q_tensor is None:
        report.inconclusive = True
        report.data["note"] = "irrational spectrum: spectral tests skipped"
        return report

    p_orders, q_orders = polynomial_orderings(ps)
    report.data["p_orderings"] = [list(o) for o in p_orders]
    report.data["q_orderings"] = [list(o.idempotent_order) for o in q_orders]

    for qo in q_orders:
        tag = f"E1={qo.idempotent_order[1]}"
        if qo.krein_array.m <= 2:
            report.verdicts.append(inapplicable(f"cometric bounds [{tag}]", "m <= 2", "cometric Gegenbauer bounds"))
            continue
        q22 = ps.permuted(idempotent_order=qo.idempotent_order).q(2, 2, 2) if ps.d >= 2 else ZERO
        for v in cometric_bounds(qo.krein_array, q22):
            report.verdicts.append(Verdict(f"{v.test_id} [{tag}]", v.status, v.witness, v.citation, v.note))

    targets = [(qo.idempotent_order[1], qo) for qo in q_orders] or [(i, None) for i in range(1, ps.d + 1)]
    theta_data = []
    for i, qo in targets:
        mi = ps.multiplicities[i]
        if mi.denominator != 1 or mi < 3:
            report.verdicts.append(inapplicable(f"Schoenberg E{i}", f"multiplicity {mi} < 3",
                                                "positive definite functions on the sphere"))
            continue
        entry = {"idempotent": i}
        try:
            cutoff = degree_cutoff(ps, i, cap, qo)
            top = cutoff - 1
            entry["cutoff"] = cutoff
        except NoCutoffFound:
            top = cap
            entry["cutoff"] = None
            report.inconclusive = True
        if lmax is not None:
            if lmax < top:
                report.inconclusive = True
            top = lmax
        table = schoenberg_theta(ps, i, top, qo)
        entry["checked_to"] = top
        report.verdicts.append(table.verdict())
        theta_data.append(entry)
    report.data["schoenberg"] = theta_data
    if report.inconclusive:
        report.data["note"] = "inconclusive beyond cap"
    return report
