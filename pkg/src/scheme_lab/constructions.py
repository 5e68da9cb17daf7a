"""Concrete schemes and the combinatorial ingredients used to build them."""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from typing import Sequence

import numpy as np

from .errors import FormSetUnavailable, NotPrimePower, NotRegular, SymbolMismatch
from .scheme import ConcreteScheme

__all__ = [
    "hypercube_scheme",
    "degenerate_lssd",
    "QuadraticFormSet",
    "gf2_rank",
    "kerdock_forms",
    "cameron_seidel",
    "cameron_seidel_gram",
    "OrthogonalArray",
    "HadamardMatrix",
    "parse_grid",
    "load_grid",
    "seberry_hadamard_36",
    "worked_example",
    "OaHadamardLssd",
    "lssd_from_oa_hadamard",
    "GaloisField",
    "prime_power",
    "oa_from_mols",
    "oa_product",
    "hadamard_tensor",
    "MenonParams",
    "menon_params",
]


# ---------------------------------------------------------------- small schemes


def hypercube_scheme(n: int) -> ConcreteScheme:
    """Hamming scheme H(n, 2): relations by Hamming distance."""
    if n < 1:
        raise ValueError("n must be positive")
    idx = np.arange(2 ** n, dtype=np.uint64)
    x = idx[:, None] ^ idx[None, :]
    dist = np.zeros(x.shape, dtype=np.int64)
    for b in range(n):
        dist += ((x >> np.uint64(b)) & np.uint64(1)).astype(np.int64)
    return ConcreteScheme(dist, f"{n}-cube")


def degenerate_lssd(v: int, w: int) -> ConcreteScheme:
    """w copies of one v-set, joined by w-cliques through matching positions.

    Relation 1: same position, other fiber. Relation 2: same fiber.
    Relation 3: everything else.
    """
    if v < 2 or w < 2:
        raise ValueError("need v >= 2 and w >= 2")
    fiber = np.repeat(np.arange(w), v)
    pos = np.tile(np.arange(v), w)
    same_f = fiber[:, None] == fiber[None, :]
    same_p = pos[:, None] == pos[None, :]
    lab = np.where(same_f & same_p, 0, np.where(same_p, 1, np.where(same_f, 2, 3)))
    fibers = [list(range(a * v, (a + 1) * v)) for a in range(w)]
    return ConcreteScheme(lab, f"degenerate LSSD({v},1,0;{w})", fibers)


# ---------------------------------------------------------------- quadratic forms over GF(2)


def gf2_rank(mat: np.ndarray) -> int:
    """Rank over GF(2) using integer bitset rows."""
    rows = [int("".join("1" if x else "0" for x in r[::-1]) or "0", 2) for r in np.asarray(mat) % 2]
    rank = 0
    ncols = np.asarray(mat).shape[1]
    for bit in range(ncols):
        pivot = next((i for i in range(rank, len(rows)) if rows[i] >> bit & 1), None)
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        for i in range(len(rows)):
            if i != rank and rows[i] >> bit & 1:
                rows[i] ^= rows[rank]
        rank += 1
    return rank


@dataclass(frozen=True)
class QuadraticFormSet:
    """Alternating bilinear forms over GF(2) with pairwise full-rank sums."""

    dimension: int
    forms: tuple[np.ndarray, ...]

    def __post_init__(self):
        n = self.dimension
        if n % 2:
            raise ValueError("dimension must be even")
        for f in self.forms:
            if f.shape != (n, n) or (f != f.T).any() or np.diag(f).any():
                raise ValueError("forms must be symmetric with zero diagonal")
        for a, b in itertools.combinations(range(len(self.forms)), 2):
            if gf2_rank((self.forms[a] + self.forms[b]) % 2) != n:
                raise ValueError(f"forms {a} and {b} have a degenerate sum")

    def __len__(self) -> int:
        return len(self.forms)

    def values(self, i: int) -> np.ndarray:
        """Truth table of the quadratic form sum_{a<b} B_ab x_a x_b.

        Vector index = sum x_a 2^a, so coordinate 0 is the least significant bit.
        """
        n = self.dimension
        B = self.forms[i]
        idx = np.arange(2 ** n)
        bits = (idx[:, None] >> np.arange(n)[None, :]) & 1
        out = np.zeros(2 ** n, dtype=np.int64)
        for a in range(n):
            for b in range(a + 1, n):
                if B[a, b]:
                    out ^= bits[:, a] & bits[:, b]
        return out


_FORMS_R2 = [
    "0000 0000 0000 0000",
    "0100 1000 0001 0010",
    "0010 0001 1001 0110",
    "0110 1011 1100 0100",
    "0001 0011 0101 1110",
    "0101 1010 0100 1000",
    "0011 0010 1101 1010",
    "0111 1001 1000 1100",
]


def _gf2_poly_field(r: int):
    """Multiplication and trace on GF(2^r), elements as bit masks."""
    for poly in range(1 << r, 1 << (r + 1)):
        def mul(a, b, poly=poly):
            out = 0
            while b:
                if b & 1:
                    out ^= a
                b >>= 1
                a <<= 1
                if a >> r & 1:
                    a ^= poly
            return out
        # field iff x has full multiplicative order structure: every nonzero invertible
        if all(any(mul(a, b) == 1 for b in range(1, 1 << r)) for a in range(1, 1 << r)):
            def trace(a, mul=mul):
                t, x = 0, a
                for _ in range(r):
                    t ^= x
                    x = mul(x, x)
                return t & 1
            return mul, trace
    raise RuntimeError("no irreducible polynomial found")


def kerdock_forms(r: int, w: int | None = None) -> QuadraticFormSet:
    """A set of forms on GF(2)^(2r) with pairwise nondegenerate sums.

    r = 2 uses the classical set of eight forms. Otherwise the forms
    B_a((x1,x2),(y1,y2)) = Tr(a (x1 y2 + x2 y1)) over GF(2^r) give 2^r forms.
    """
    n = 2 * r
    if r == 2:
        forms = [np.array([[int(c) for c in row] for row in f.split()], dtype=np.int64) for f in _FORMS_R2]
    else:
        if r < 1:
            raise ValueError("r must be positive")
        mul, trace = _gf2_poly_field(r)
        q = 1 << r
        forms = []
        for a in range(q):
            B = np.zeros((n, n), dtype=np.int64)
            # basis: coordinates 0..r-1 for x1, r..2r-1 for x2
            for i in range(r):
                for j in range(r):
                    val = trace(mul(a, mul(1 << i, 1 << j)))
                    B[i, r + j] = B[r + j, i] = val
            forms.append(B)
    available = len(forms)
    w = available if w is None else w
    if w > available:
        raise FormSetUnavailable(f"only {available} forms available for r = {r}, asked for {w}")
    return QuadraticFormSet(n, tuple(forms[:w]))


def _cs_vectors(forms: QuadraticFormSet) -> list[np.ndarray]:
    """For each form, the 2^n shortened coset words (full length, last coordinate 0)."""
    n = forms.dimension
    N = 2 ** n
    idx = np.arange(N)
    bits = (idx[:, None] >> np.arange(n)[None, :]) & 1
    # all linear functionals a.x, one row per a
    lin = (bits @ bits.T) % 2  # lin[a, x] = a.x
    out = []
    for i in range(len(forms)):
        q = forms.values(i)
        words = (q[None, :] + lin) % 2
        # choose the constant so the last coordinate is 0
        words = (words + words[:, -1:]) % 2
        out.append(words)
    return out


def cameron_seidel(r: int, w: int, forms: QuadraticFormSet | None = None) -> ConcreteScheme:
    """Linked system from w Kerdock-type quadratic forms on GF(2)^(2r).

    w fibers of 2^(2r) vertices each. Relation 1: positive inner product
    between fibers, relation 2: same fiber, relation 3: negative inner product.
    """
    if not 2 <= w <= 2 ** (2 * r - 1):
        raise ValueError("need 2 <= w <= 2^(2r-1)")
    forms = forms if forms is not None else kerdock_forms(r, w)
    if len(forms) < w:
        raise FormSetUnavailable(f"form set has {len(forms)} forms, need {w}")
    words = np.vstack(_cs_vectors(QuadraticFormSet(forms.dimension, forms.forms[:w])))
    N = 2 ** (2 * r)
    # Hamming distance via inner product of +-1 vectors
    pm = 1 - 2 * words.astype(np.int64)
    ip = pm @ pm.T  # = N - 2 wt
    fiber = np.repeat(np.arange(w), N)
    same = fiber[:, None] == fiber[None, :]
    lab = np.where(same, 2, np.where(ip > 0, 1, 3))
    np.fill_diagonal(lab, 0)
    fibers = [list(range(a * N, (a + 1) * N)) for a in range(w)]
    return ConcreteScheme(lab, f"Cameron-Seidel(r={r}, w={w})", fibers)


def cameron_seidel_gram(r: int, w: int) -> tuple[np.ndarray, int]:
    """Integer Gram numerators of the linked simplices; divide by 2^(2r) - 1."""
    forms = kerdock_forms(r, w)
    words = np.vstack(_cs_vectors(forms))
    pm = 1 - 2 * words[:, :-1].astype(np.int64)  # drop the fixed last coordinate
    return pm @ pm.T, 2 ** (2 * r) - 1


# ---------------------------------------------------------------- arrays and Hadamard matrices


@dataclass(frozen=True, eq=False)
class OrthogonalArray:
    """n^2 x N array over symbols 1..n; each column pair covers every ordered pair once."""

    entries: np.ndarray

    def __post_init__(self):
        e = np.asarray(self.entries, dtype=np.int64)
        object.__setattr__(self, "entries", e)
        rows, cols = e.shape
        n = int(round(rows ** 0.5))
        if n * n != rows:
            raise ValueError("row count must be a perfect square")
        if e.min() < 1 or e.max() > n:
            raise ValueError(f"symbols must lie in 1..{n}")
        for a, b in itertools.combinations(range(cols), 2):
            code = (e[:, a] - 1) * n + (e[:, b] - 1)
            if len(np.unique(code)) != rows:
                raise ValueError(f"columns {a} and {b} repeat an ordered pair")

    @property
    def n(self) -> int:
        return int(round(self.entries.shape[0] ** 0.5))

    @property
    def columns(self) -> int:
        return self.entries.shape[1]

    def restrict(self, cols: Sequence[int]) -> "OrthogonalArray":
        return OrthogonalArray(self.entries[:, list(cols)])


@dataclass(frozen=True, eq=False)
class HadamardMatrix:
    entries: np.ndarray

    def __post_init__(self):
        h = np.asarray(self.entries, dtype=np.int64)
        object.__setattr__(self, "entries", h)
        n = h.shape[0]
        if h.shape != (n, n) or not np.isin(h, (-1, 1)).all():
            raise ValueError("Hadamard matrix must be square with entries +-1")
        if not np.array_equal(h @ h.T, n * np.eye(n, dtype=np.int64)):
            raise ValueError("H H^T != n I")

    @property
    def order(self) -> int:
        return self.entries.shape[0]

    @property
    def regular(self) -> bool:
        h = self.entries
        rs, cs = h.sum(axis=1), h.sum(axis=0)
        return bool((rs == rs[0]).all() and (cs == rs[0]).all() and rs[0] ** 2 == self.order)

    @property
    def row_sum(self) -> int | None:
        return int(self.entries[0].sum()) if self.regular else None


def parse_grid(text: str) -> np.ndarray:
    """Whitespace-separated integer grid; '+' and '-' (or the Unicode minus) map to +-1.

    A line without spaces made only of signs is read character by character.
    """
    rows = []
    for line in text.splitlines():
        line = line.strip().replace("−", "-")
        if not line or line.startswith("#"):
            continue
        if " " not in line and set(line) <= {"+", "-"}:
            toks = list(line)
        else:
            toks = line.split()
        rows.append([1 if t == "+" else -1 if t == "-" else int(t) for t in toks])
    if len({len(r) for r in rows}) > 1:
        raise ValueError("ragged grid")
    return np.array(rows, dtype=np.int64)


def load_grid(path) -> np.ndarray:
    with open(path, encoding="utf-8") as fh:
        return parse_grid(fh.read())


def _data(name: str):
    return resources.files("scheme_lab").joinpath("data", name)


@lru_cache(maxsize=None)
def seberry_hadamard_36() -> HadamardMatrix:
    """Regular Hadamard matrix of order 36 (row sums 6)."""
    return HadamardMatrix(parse_grid(_data("hadamard_36.txt").read_text(encoding="utf-8")))


@lru_cache(maxsize=None)
def worked_example() -> tuple[OrthogonalArray, HadamardMatrix, dict[tuple[int, int], np.ndarray]]:
    """The 16 x 3 array, the order-4 Hadamard matrix and the three printed mixed Gram blocks."""
    doc = json.loads(_data("worked_example_16.json").read_text(encoding="utf-8"))
    grams = {(int(k[0]), int(k[1])): np.array(v, dtype=np.int64) for k, v in doc["mixed_grams"].items()}
    return OrthogonalArray(np.array(doc["oa"])), HadamardMatrix(np.array(doc["hadamard"])), grams


# ---------------------------------------------------------------- OA + Hadamard


@dataclass(frozen=True, eq=False)
class OaHadamardLssd:
    scheme: ConcreteScheme
    bases: list[np.ndarray]  # basis i as columns of an n^2 x n^2 matrix
    mixed: dict[tuple[int, int], np.ndarray]  # (a, b) -> basis_a^T basis_b, a < b


def _basis(oa: OrthogonalArray, col: int, h: np.ndarray) -> np.ndarray:
    n = oa.n
    M = np.zeros((n * n, n * n), dtype=np.int64)
    c = oa.entries[:, col]
    for j in range(1, n + 1):
        rows = np.flatnonzero(c == j)
        for l in range(n):
            M[rows, (j - 1) * n + l] = h[:, l]
    return M


def _int_product(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Exact integer product through float64 BLAS (entries stay far below 2^53)."""
    return np.rint(a.astype(np.float64) @ b.astype(np.float64)).astype(np.int64)


def lssd_from_oa_hadamard(oa: OrthogonalArray, h: HadamardMatrix,
                          per_column: Sequence[HadamardMatrix] | None = None,
                          build_scheme: bool = True) -> OaHadamardLssd:
    """Unbiased bases from an orthogonal array, then the linked system they induce.

    ``per_column`` optionally assigns a different Hadamard matrix to each OA column.
    """
    hs = list(per_column) if per_column is not None else [h] * oa.columns
    if len(hs) != oa.columns:
        raise ValueError("need one Hadamard matrix per column")
    for hm in hs:
        if hm.order != oa.n:
            raise SymbolMismatch(f"Hadamard order {hm.order} differs from symbol count {oa.n}")
        if not hm.regular:
            raise NotRegular("the Hadamard matrix must be regular")
    bases = [_basis(oa, i, hs[i].entries) for i in range(oa.columns)]
    mixed = {}
    for a, b in itertools.combinations(range(oa.columns), 2):
        mixed[(a, b)] = _int_product(bases[a].T, bases[b])
    scheme = None
    if build_scheme:
        v = oa.n * oa.n
        N = oa.columns
        lab = np.full((N * v, N * v), 2, dtype=np.int64)
        for (a, b), G in mixed.items():
            blk = np.where(G > 0, 1, 3)
            lab[a * v:(a + 1) * v, b * v:(b + 1) * v] = blk
            lab[b * v:(b + 1) * v, a * v:(a + 1) * v] = blk.T
        np.fill_diagonal(lab, 0)
        fibers = [list(range(a * v, (a + 1) * v)) for a in range(N)]
        scheme = ConcreteScheme(lab, f"OA+Hadamard LSSD(v={v}; w={N})", fibers)
    return OaHadamardLssd(scheme, bases, mixed)


# ---------------------------------------------------------------- finite fields and MOLS


def prime_power(q: int) -> tuple[int, int] | None:
    """(p, e) with q = p^e, or None."""
    if q < 2:
        return None
    p = q
    f = 2
    while f * f <= q:
        if q % f == 0:
            p = f
            break
        f += 1 if f == 2 else 2
    e, x = 0, q
    while x % p == 0:
        x //= p
        e += 1
    return (p, e) if x == 1 else None


class GaloisField:
    """GF(p^e) with elements 0..q-1 encoded as base-p digit vectors."""

    def __init__(self, q: int):
        pe = prime_power(q)
        if pe is None:
            raise NotPrimePower(f"{q} is not a prime power")
        self.q, (self.p, self.e) = q, pe
        p, e = self.p, self.e
        self.add = np.zeros((q, q), dtype=np.int64)
        for a in range(q):
            for b in range(q):
                self.add[a, b] = self._enc([(x + y) % p for x, y in zip(self._dec(a), self._dec(b))])
        for modulus in itertools.product(range(p), repeat=e):
            mul = self._mul_table(list(modulus))
            if all((mul[a, 1:] == 1).any() for a in range(1, q)):
                self.mul = mul
                break
        else:  # pragma: no cover
            raise RuntimeError("no irreducible polynomial")

    def _dec(self, a: int) -> list[int]:
        return [(a // self.p ** i) % self.p for i in range(self.e)]

    def _enc(self, digits) -> int:
        return sum(d * self.p ** i for i, d in enumerate(digits))

    def _mul_table(self, low: list[int]) -> np.ndarray:
        # x^e = -(low[0] + low[1] x + ...)
        p, e, q = self.p, self.e, self.q
        out = np.zeros((q, q), dtype=np.int64)
        for a in range(q):
            da = self._dec(a)
            for b in range(q):
                db = self._dec(b)
                prod = [0] * (2 * e - 1)
                for i, x in enumerate(da):
                    for j, y in enumerate(db):
                        prod[i + j] = (prod[i + j] + x * y) % p
                for deg in range(2 * e - 2, e - 1, -1):
                    c = prod[deg]
                    if c:
                        prod[deg] = 0
                        for i, lo in enumerate(low):
                            prod[deg - e + i] = (prod[deg - e + i] - c * lo) % p
                out[a, b] = self._enc(prod[:e])
        return out


def oa_from_mols(q: int) -> OrthogonalArray:
    """OA(q^2, q+1) from the q-1 field-based MOLS plus row and column coordinates."""
    if prime_power(q) is None:
        raise NotPrimePower(f"{q} is not a prime power")
    if q > 16:
        raise ValueError("only prime powers up to 16 are supported")
    F = GaloisField(q)
    rows = []
    for x in range(q):
        for y in range(q):
            row = [x, y] + [int(F.add[x, F.mul[a, y]]) for a in range(1, q)]
            rows.append([s + 1 for s in row])
    return OrthogonalArray(np.array(rows))


def oa_product(a: OrthogonalArray, b: OrthogonalArray) -> OrthogonalArray:
    """Product of two arrays on the first min(N_a, N_b) columns."""
    cols = min(a.columns, b.columns)
    na, nb = a.n, b.n
    ea, eb = a.entries[:, :cols] - 1, b.entries[:, :cols] - 1
    rows = (ea[:, None, :] * nb + eb[None, :, :]).reshape(-1, cols) + 1
    return OrthogonalArray(rows)


def hadamard_tensor(a: HadamardMatrix, b: HadamardMatrix) -> HadamardMatrix:
    return HadamardMatrix(np.kron(a.entries, b.entries))


# ---------------------------------------------------------------- Menon parameters


@dataclass(frozen=True)
class MenonParams:
    u: int
    design: tuple[int, int, int]
    complement: tuple[int, int, int]
    max_fibers: int


def menon_params(u: int) -> MenonParams:
    """(4u^2, 2u^2+u, u^2+u), its complement, and the fiber bound for optimistic systems."""
    if u < 1:
        raise ValueError("u must be positive")
    v = 4 * u * u
    design = (v, 2 * u * u + u, u * u + u)
    comp = (v, 2 * u * u - u, u * u - u)
    return MenonParams(u, design, comp, 2 if u % 2 else 2 * u * u)
