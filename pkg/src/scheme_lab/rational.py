"""Exact rational scalars and dense matrices.

All arithmetic is carried out with :class:`fractions.Fraction`. Matrices are
immutable row-major tuples; every operation returns a new matrix.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    DimensionMismatch,
    IrrationalSpectrum,
    SingularMatrix,
    ZeroLeadEntry,
)

Rational = Fraction

_RATIONAL_RE = re.compile(r"^\s*([+-]?\d+)(?:\s*/\s*(\d+))?\s*$")


def to_rational(x) -> Fraction:
    """Coerce ints, Fractions and ``"p/q"`` strings. Floats are refused."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(x, (int, np.integer)):
        return Fraction(int(x))
    if isinstance(x, str):
        return parse_rational(x)
    raise TypeError(f"cannot convert {type(x).__name__} {x!r} to an exact rational")


def parse_rational(text: str) -> Fraction:
    m = _RATIONAL_RE.match(text)
    if not m:
        raise ValueError(f"malformed rational {text!r}")
    num = int(m.group(1))
    den = int(m.group(2)) if m.group(2) is not None else 1
    if den == 0:
        raise ValueError(f"zero denominator in {text!r}")
    return Fraction(num, den)


def format_rational(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def is_integer(x: Fraction) -> bool:
    return Fraction(x).denominator == 1


def rational_sqrt(x: Fraction) -> Fraction | None:
    """Exact square root if ``x`` is the square of a rational, else None."""
    x = Fraction(x)
    if x < 0:
        return None
    rn, rd = math.isqrt(x.numerator), math.isqrt(x.denominator)
    if rn * rn == x.numerator and rd * rd == x.denominator:
        return Fraction(rn, rd)
    return None


class RMatrix:
    """Dense immutable matrix of Fractions."""

    __slots__ = ("_rows", "nrows", "ncols", "_hash")

    def __init__(self, rows: Iterable[Iterable]):
        data = tuple(tuple(to_rational(x) for x in r) for r in rows)
        ncols = len(data[0]) if data else 0
        if any(len(r) != ncols for r in data):
            raise DimensionMismatch("ragged rows")
        self._rows = data
        self.nrows = len(data)
        self.ncols = ncols
        self._hash = None

    @classmethod
    def _raw(cls, rows: tuple) -> "RMatrix":
        obj = cls.__new__(cls)
        obj._rows = rows
        obj.nrows = len(rows)
        obj.ncols = len(rows[0]) if rows else 0
        obj._hash = None
        return obj

    # constructors
    @classmethod
    def identity(cls, n: int) -> "RMatrix":
        one, zero = Fraction(1), Fraction(0)
        return cls._raw(tuple(tuple(one if i == j else zero for j in range(n)) for i in range(n)))

    @classmethod
    def zeros(cls, r: int, c: int | None = None) -> "RMatrix":
        c = r if c is None else c
        z = Fraction(0)
        return cls._raw(tuple((z,) * c for _ in range(r)))

    @classmethod
    def ones(cls, r: int, c: int | None = None) -> "RMatrix":
        c = r if c is None else c
        o = Fraction(1)
        return cls._raw(tuple((o,) * c for _ in range(r)))

    @classmethod
    def diag(cls, values: Sequence) -> "RMatrix":
        vals = [to_rational(v) for v in values]
        n = len(vals)
        z = Fraction(0)
        return cls._raw(tuple(tuple(vals[i] if i == j else z for j in range(n)) for i in range(n)))

    @classmethod
    def column(cls, values: Sequence) -> "RMatrix":
        return cls([[v] for v in values])

    @classmethod
    def from_numpy(cls, arr) -> "RMatrix":
        arr = np.asarray(arr)
        if arr.dtype.kind == "f":
            raise TypeError("floating arrays cannot be converted exactly")
        return cls._raw(tuple(tuple(Fraction(int(x)) if not isinstance(x, Fraction) else x for x in row) for row in arr.tolist()))

    # access
    @property
    def shape(self) -> tuple[int, int]:
        return (self.nrows, self.ncols)

    @property
    def rows(self) -> tuple:
        return self._rows

    def __getitem__(self, idx):
        i, j = idx
        return self._rows[i][j]

    def row(self, i: int) -> tuple:
        return self._rows[i]

    def col(self, j: int) -> tuple:
        return tuple(r[j] for r in self._rows)

    def tolist(self) -> list[list[Fraction]]:
        return [list(r) for r in self._rows]

    def to_float(self) -> np.ndarray:
        return np.array([[float(x) for x in r] for r in self._rows], dtype=float)

    def to_int_array(self) -> np.ndarray:
        if not self.is_integral():
            raise ValueError("matrix has non-integral entries")
        return np.array([[int(x) for x in r] for r in self._rows], dtype=np.int64).reshape(self.nrows, self.ncols)

    def is_integral(self) -> bool:
        return all(x.denominator == 1 for r in self._rows for x in r)

    def is_square(self) -> bool:
        return self.nrows == self.ncols

    def is_symmetric(self) -> bool:
        return self.is_square() and all(
            self._rows[i][j] == self._rows[j][i] for i in range(self.nrows) for j in range(i + 1, self.ncols)
        )

    def distinct_entries(self) -> set:
        return {x for r in self._rows for x in r}

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "RMatrix":
        return RMatrix._raw(tuple(tuple(self._rows[i][j] for j in cols) for i in rows))

    # equality
    def __eq__(self, other) -> bool:
        return isinstance(other, RMatrix) and self._rows == other._rows

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self._rows)
        return self._hash

    def __repr__(self) -> str:
        body = "; ".join(" ".join(format_rational(x) for x in r) for r in self._rows[:8])
        more = " ..." if self.nrows > 8 else ""
        return f"RMatrix({self.nrows}x{self.ncols}: [{body}{more}])"

    # arithmetic
    def __add__(self, other: "RMatrix") -> "RMatrix":
        return mat_add(self, other)

    def __sub__(self, other: "RMatrix") -> "RMatrix":
        return mat_add(self, scalar_mul(-1, other))

    def __neg__(self) -> "RMatrix":
        return scalar_mul(-1, self)

    def __matmul__(self, other: "RMatrix") -> "RMatrix":
        return mat_mul(self, other)

    def __mul__(self, c) -> "RMatrix":
        return scalar_mul(c, self)

    __rmul__ = __mul__

    @property
    def T(self) -> "RMatrix":
        return transpose(self)

    def trace(self) -> Fraction:
        return sum((self._rows[i][i] for i in range(min(self.nrows, self.ncols))), Fraction(0))


def mat_mul(a: RMatrix, b: RMatrix) -> RMatrix:
    if a.ncols != b.nrows:
        raise DimensionMismatch(f"cannot multiply {a.shape} by {b.shape}")
    bcols = [b.col(j) for j in range(b.ncols)]
    zero = Fraction(0)
    out = []
    for r in a.rows:
        nz = [(k, x) for k, x in enumerate(r) if x]
        out.append(tuple(sum((x * c[k] for k, x in nz), zero) for c in bcols))
    return RMatrix._raw(tuple(out))


def mat_add(a: RMatrix, b: RMatrix) -> RMatrix:
    if a.shape != b.shape:
        raise DimensionMismatch(f"cannot add {a.shape} and {b.shape}")
    return RMatrix._raw(tuple(tuple(x + y for x, y in zip(ra, rb)) for ra, rb in zip(a.rows, b.rows)))


def scalar_mul(c, a: RMatrix) -> RMatrix:
    c = to_rational(c)
    return RMatrix._raw(tuple(tuple(c * x for x in r) for r in a.rows))


def entrywise_mul(a: RMatrix, b: RMatrix) -> RMatrix:
    if a.shape != b.shape:
        raise DimensionMismatch(f"Schur product needs equal shapes, got {a.shape} and {b.shape}")
    return RMatrix._raw(tuple(tuple(x * y for x, y in zip(ra, rb)) for ra, rb in zip(a.rows, b.rows)))


def transpose(a: RMatrix) -> RMatrix:
    return RMatrix._raw(tuple(zip(*a.rows)) if a.nrows else ())


def kronecker(a: RMatrix, b: RMatrix) -> RMatrix:
    rows = []
    for ra in a.rows:
        for rb in b.rows:
            rows.append(tuple(x * y for x in ra for y in rb))
    return RMatrix._raw(tuple(rows))


def linear_combination(coeffs: Sequence, mats: Sequence[RMatrix]) -> RMatrix:
    if not mats:
        raise DimensionMismatch("empty combination")
    acc = scalar_mul(coeffs[0], mats[0])
    for c, m in zip(coeffs[1:], mats[1:]):
        if c:
            acc = mat_add(acc, scalar_mul(c, m))
    return acc


def _echelon(rows: list[list[Fraction]]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form over Q; returns (rows, pivot columns)."""
    m = [list(r) for r in rows]
    nrows = len(m)
    ncols = len(m[0]) if m else 0
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, nrows) if m[i][c] != 0), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(nrows):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return m, pivots


def rank(a: RMatrix) -> int:
    """Rank by fraction-free (Bareiss) elimination on a cleared-denominator copy."""
    if a.nrows == 0 or a.ncols == 0:
        return 0
    rows = []
    for r in a.rows:
        den = math.lcm(*(x.denominator for x in r))
        rows.append([int(x * den) for x in r])
    return _bareiss_rank(rows)


def _bareiss_rank(m: list[list[int]]) -> int:
    nrows, ncols = len(m), len(m[0])
    rk, prev = 0, 1
    for c in range(ncols):
        p = next((i for i in range(rk, nrows) if m[i][c] != 0), None)
        if p is None:
            continue
        m[rk], m[p] = m[p], m[rk]
        piv = m[rk][c]
        for i in range(rk + 1, nrows):
            mi = m[i]
            f = mi[c]
            m[i] = [(piv * mi[j] - f * m[rk][j]) // prev for j in range(ncols)]
        prev = piv
        rk += 1
        if rk == nrows:
            break
    return rk


def inverse(a: RMatrix) -> RMatrix:
    if not a.is_square():
        raise DimensionMismatch("inverse of a non-square matrix")
    n = a.nrows
    aug = [list(r) + [Fraction(int(i == j)) for j in range(n)] for i, r in enumerate(a.rows)]
    red, piv = _echelon(aug)
    if piv[:n] != list(range(n)):
        raise SingularMatrix("matrix is singular")
    return RMatrix._raw(tuple(tuple(r[n:]) for r in red))


def solve(a: RMatrix, b: RMatrix) -> RMatrix:
    return mat_mul(inverse(a), b)


def nullspace(a: RMatrix) -> list[list[Fraction]]:
    red, piv = _echelon(a.tolist())
    free = [c for c in range(a.ncols) if c not in piv]
    basis = []
    for f in free:
        v = [Fraction(0)] * a.ncols
        v[f] = Fraction(1)
        for row, pc in zip(red, piv):
            v[pc] = -row[f]
        basis.append(v)
    return basis


def det(a: RMatrix) -> Fraction:
    if not a.is_square():
        raise DimensionMismatch("determinant of a non-square matrix")
    m = [list(r) for r in a.rows]
    n = len(m)
    d = Fraction(1)
    for c in range(n):
        p = next((i for i in range(c, n) if m[i][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            m[c], m[p] = m[p], m[c]
            d = -d
        d *= m[c][c]
        inv = 1 / m[c][c]
        for i in range(c + 1, n):
            if m[i][c]:
                f = m[i][c] * inv
                m[i] = [x - f * y for x, y in zip(m[i], m[c])]
    return d


# polynomials: coefficient lists, lowest degree first


def char_poly(a: RMatrix) -> list[Fraction]:
    """Monic characteristic polynomial det(xI - A) via Hessenberg reduction."""
    if not a.is_square():
        raise DimensionMismatch("characteristic polynomial of a non-square matrix")
    n = a.nrows
    h = [list(r) for r in a.rows]
    # reduce to upper Hessenberg form by similarity transforms
    for c in range(n - 2):
        p = next((i for i in range(c + 1, n) if h[i][c] != 0), None)
        if p is None:
            continue
        if p != c + 1:
            h[c + 1], h[p] = h[p], h[c + 1]
            for r in h:
                r[c + 1], r[p] = r[p], r[c + 1]
        piv = h[c + 1][c]
        for i in range(c + 2, n):
            if h[i][c]:
                f = h[i][c] / piv
                h[i] = [x - f * y for x, y in zip(h[i], h[c + 1])]
                for r in h:
                    r[c + 1] += f * r[i]
    # recurrence on leading principal minors of xI - H
    polys: list[list[Fraction]] = [[Fraction(1)]]
    for k in range(1, n + 1):
        prev = polys[k - 1]
        cur = [Fraction(0)] + prev  # x * p_{k-1}
        cur = _poly_add(cur, [-h[k - 1][k - 1] * c for c in prev])
        prod = Fraction(1)
        for i in range(1, k):
            prod *= h[k - i][k - i - 1]
            if prod == 0:
                break
            coef = h[k - i - 1][k - 1] * prod
            cur = _poly_add(cur, [-coef * c for c in polys[k - i - 1]])
        polys.append(cur)
    return _poly_trim(polys[n])


def _poly_add(p, q):
    out = [Fraction(0)] * max(len(p), len(q))
    for i, c in enumerate(p):
        out[i] += c
    for i, c in enumerate(q):
        out[i] += c
    return out


def _poly_trim(p):
    p = list(p)
    while len(p) > 1 and p[-1] == 0:
        p.pop()
    return p


def poly_eval(p: Sequence[Fraction], x: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in reversed(p):
        acc = acc * x + c
    return acc


def _poly_divmod(p, q):
    p = [Fraction(c) for c in p]
    q = _poly_trim(q)
    if len(p) < len(q):
        return [Fraction(0)], p
    out = [Fraction(0)] * (len(p) - len(q) + 1)
    lead = q[-1]
    for i in range(len(out) - 1, -1, -1):
        c = p[i + len(q) - 1] / lead
        out[i] = c
        if c:
            for j, qc in enumerate(q):
                p[i + j] -= c * qc
    return out, _poly_trim(p[: len(q) - 1] or [Fraction(0)])


def _poly_gcd(p, q):
    p, q = _poly_trim(p), _poly_trim(q)
    while not (len(q) == 1 and q[0] == 0):
        _, r = _poly_divmod(p, q)
        p, q = q, r
    return [c / p[-1] for c in p]


def _integer_primitive(p) -> list[int]:
    den = math.lcm(*(Fraction(c).denominator for c in p))
    ints = [int(Fraction(c) * den) for c in p]
    g = math.gcd(*ints) or 1
    return [c // g for c in ints]


def _divisors(n: int) -> list[int]:
    n = abs(n)
    small, large = [], []
    i = 1
    while i * i <= n:
        if n % i == 0:
            small.append(i)
            if i * i != n:
                large.append(n // i)
        i += 1
    return small + large[::-1]


def rational_roots(p: Sequence[Fraction]) -> tuple[dict[Fraction, int], list[int]]:
    """Rational roots of ``p`` with multiplicities, plus the residual factor.

    Candidates are p/q with q dividing the leading coefficient and p dividing
    the constant term of the primitive integer polynomial. The numerators are
    taken near the numerically located real roots, which is where any rational
    root must lie; every candidate is confirmed by exact evaluation.
    """
    poly = _poly_trim([Fraction(c) for c in p])
    roots: dict[Fraction, int] = {}
    while len(poly) > 1 and poly[0] == 0:
        roots[Fraction(0)] = roots.get(Fraction(0), 0) + 1
        poly = poly[1:]
    while len(poly) > 1:
        ints = _integer_primitive(poly)
        sqfree = _poly_divmod(poly, _poly_gcd(poly, _poly_derivative(poly)))[0]
        found = _roots_of_squarefree(sqfree, ints[-1], ints[0])
        if not found:
            break
        for r in found:
            while True:
                q, rem = _poly_divmod(poly, [-r, Fraction(1)])
                if any(rem):
                    break
                poly = q
                roots[r] = roots.get(r, 0) + 1
    return roots, _integer_primitive(poly)


def _poly_derivative(p):
    return [i * c for i, c in enumerate(p)][1:] or [Fraction(0)]


def _roots_of_squarefree(p, lead: int, const: int) -> list[Fraction]:
    p = _poly_trim(p)
    deg = len(p) - 1
    if deg == 0:
        return []
    if deg == 1:
        return [-p[0] / p[1]]
    ints = _integer_primitive(p)
    approx = np.roots([float(c) for c in reversed(ints)]) if all(abs(c) < 1e300 for c in ints) else []
    qs = _divisors(lead) if abs(lead) < 10**12 else [1]
    out: list[Fraction] = []
    for z in approx:
        if abs(z.imag) > 1e-6 * max(1.0, abs(z.real)):
            continue
        for q in qs:
            centre = round(z.real * q)
            for num in (centre - 1, centre, centre + 1):
                cand = Fraction(num, q)
                if cand in out:
                    continue
                if const and cand.numerator and const % cand.numerator != 0:
                    continue
                if poly_eval(p, cand) == 0:
                    out.append(cand)
    if not out and abs(const) <= 10**6 and abs(lead) <= 10**6:
        # exhaustive rational root test for small coefficients
        for q in _divisors(lead):
            for num in _divisors(const) if const else [0]:
                for s in (1, -1):
                    cand = Fraction(s * num, q)
                    if cand not in out and poly_eval(p, cand) == 0:
                        out.append(cand)
    return out


@dataclass(frozen=True)
class EigenPair:
    value: Fraction
    multiplicity: int
    vector: RMatrix  # column vector

    def __iter__(self):
        yield self.value
        yield self.vector


def rational_eigen(m: RMatrix, require_lead: bool = False) -> list[EigenPair]:
    """All eigenvalues of ``m`` with one eigenvector each.

    Eigenvectors are scaled so entry 0 is 1 when it can be; otherwise the first
    nonzero entry is 1, or :class:`ZeroLeadEntry` is raised under
    ``require_lead``. Eigenvalues are returned in decreasing order.
    """
    if not m.is_square():
        raise DimensionMismatch("eigenvalues of a non-square matrix")
    cp = char_poly(m)
    roots, residual = rational_roots(cp)
    if len(residual) > 1:
        raise IrrationalSpectrum(residual)
    pairs = []
    n = m.nrows
    for lam in sorted(roots, reverse=True):
        shifted = m - scalar_mul(lam, RMatrix.identity(n))
        basis = nullspace(shifted)
        vec = next((v for v in basis if v[0] != 0), None)
        if vec is None:
            if require_lead:
                raise ZeroLeadEntry(f"eigenvector for {lam} has zero entry 0")
            vec = basis[0]
            lead = next(x for x in vec if x != 0)
        else:
            lead = vec[0]
        vec = [x / lead for x in vec]
        pairs.append(EigenPair(lam, roots[lam], RMatrix.column(vec)))
    return pairs
