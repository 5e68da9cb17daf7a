"""Symmetric association schemes at the parameter level and the vertex level."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import kernels
from .errors import (
    DimensionMismatch,
    IrrationalSpectrum,
    NotAScheme,
    RepeatedEigenvalue,
    SingularMatrix,
)
from .rational import (
    RMatrix,
    inverse,
    rational_eigen,
    scalar_mul,
    to_rational,
)
from .verdict import Verdict, check

Tensor = tuple  # [i][j][k] -> Fraction


def _freeze_tensor(t) -> Tensor:
    return tuple(tuple(tuple(Fraction(x) for x in row) for row in plane) for plane in t)


@dataclass(frozen=True, eq=False)
class ParameterSet:
    """Eigenmatrices plus both structure-constant tensors.

    ``p_tensor[i][j][k]`` is the intersection number p^k_ij and
    ``q_tensor[i][j][k]`` the Krein parameter q^k_ij. ``P``/``Q`` may be
    ``None`` for schemes with an irrational spectrum (intersection data only).
    """

    d: int
    n: int
    P: RMatrix | None
    Q: RMatrix | None
    p_tensor: Tensor
    q_tensor: Tensor | None
    provenance: str = ""

    @property
    def valencies(self) -> tuple[Fraction, ...]:
        return tuple(self.p_tensor[i][i][0] for i in range(self.d + 1))

    @property
    def multiplicities(self) -> tuple[Fraction, ...]:
        if self.Q is not None:
            return tuple(self.Q.row(0))
        return tuple(self.q_tensor[j][j][0] for j in range(self.d + 1))

    @property
    def has_spectrum(self) -> bool:
        return self.P is not None

    def p(self, i: int, j: int, k: int) -> Fraction:
        return self.p_tensor[i][j][k]

    def q(self, i: int, j: int, k: int) -> Fraction:
        return self.q_tensor[i][j][k]

    def L(self, i: int) -> RMatrix:
        """Intersection array: entry (k, j) is p^k_ij."""
        r = range(self.d + 1)
        return RMatrix._raw(tuple(tuple(self.p_tensor[i][j][k] for j in r) for k in r))

    def Lstar(self, i: int) -> RMatrix:
        """Krein array: entry (k, j) is q^k_ij."""
        r = range(self.d + 1)
        return RMatrix._raw(tuple(tuple(self.q_tensor[i][j][k] for j in r) for k in r))

    def same_parameters(self, other: "ParameterSet") -> bool:
        return (
            self.n == other.n
            and self.P == other.P
            and self.Q == other.Q
            and self.p_tensor == other.p_tensor
            and self.q_tensor == other.q_tensor
        )

    def __eq__(self, other) -> bool:
        return isinstance(other, ParameterSet) and self.same_parameters(other)

    def __hash__(self) -> int:
        return hash((self.n, self.P, self.Q))

    def permuted(self, relation_order: Sequence[int] | None = None, idempotent_order: Sequence[int] | None = None) -> "ParameterSet":
        """Relabel relations and/or idempotents; index 0 must stay fixed."""
        ro = list(relation_order) if relation_order is not None else list(range(self.d + 1))
        io = list(idempotent_order) if idempotent_order is not None else list(range(self.d + 1))
        if ro[0] != 0 or io[0] != 0:
            raise ValueError("index 0 must stay in place")
        p = tuple(tuple(tuple(self.p_tensor[ro[i]][ro[j]][ro[k]] for k in range(self.d + 1)) for j in range(self.d + 1)) for i in range(self.d + 1))
        q = None
        if self.q_tensor is not None:
            q = tuple(tuple(tuple(self.q_tensor[io[i]][io[j]][io[k]] for k in range(self.d + 1)) for j in range(self.d + 1)) for i in range(self.d + 1))
        P = self.P.submatrix(io, ro) if self.P is not None else None
        Q = self.Q.submatrix(ro, io) if self.Q is not None else None
        return ParameterSet(self.d, self.n, P, Q, p, q, self.provenance)


# eigenmatrix conversions


def _n_from_first_row(M: RMatrix) -> Fraction:
    row = M.row(0)
    if any(x <= 0 for x in row):
        raise ValueError("first row must be positive (valencies or multiplicities)")
    return sum(row, Fraction(0))


def q_from_p(P: RMatrix) -> RMatrix:
    """Second eigenmatrix: Q = n * P^-1."""
    n = _n_from_first_row(P)
    try:
        return scalar_mul(n, inverse(P))
    except SingularMatrix:
        raise SingularMatrix("first eigenmatrix is singular") from None


def p_from_q(Q: RMatrix) -> RMatrix:
    n = _n_from_first_row(Q)
    try:
        return scalar_mul(n, inverse(Q))
    except SingularMatrix:
        raise SingularMatrix("second eigenmatrix is singular") from None


def tensors_from_eigenmatrices(P: RMatrix, Q: RMatrix) -> tuple[Tensor, Tensor]:
    """Both structure-constant tensors from P and Q."""
    if P.shape != Q.shape or not P.is_square():
        raise DimensionMismatch("P and Q must be square of equal size")
    size = P.nrows
    n = sum(P.row(0), Fraction(0))
    k = P.row(0)
    m = Q.row(0)
    p = [[[Fraction(0)] * size for _ in range(size)] for _ in range(size)]
    q = [[[Fraction(0)] * size for _ in range(size)] for _ in range(size)]
    for i in range(size):
        for j in range(i, size):
            for l in range(size):
                sp = sum((m[h] * P[h, i] * P[h, j] * P[h, l] for h in range(size)), Fraction(0)) / (n * k[l])
                sq = sum((k[h] * Q[h, i] * Q[h, j] * Q[h, l] for h in range(size)), Fraction(0)) / (n * m[l])
                p[i][j][l] = p[j][i][l] = sp
                q[i][j][l] = q[j][i][l] = sq
    return _freeze_tensor(p), _freeze_tensor(q)


def parameters_from_eigenmatrices(P: RMatrix, Q: RMatrix, provenance: str = "") -> ParameterSet:
    if P.shape != Q.shape or not P.is_square():
        raise DimensionMismatch("P and Q must be square of equal size")
    n = sum(P.row(0), Fraction(0))
    if P @ Q != scalar_mul(n, RMatrix.identity(P.nrows)):
        raise ValueError("eigenmatrices are inconsistent: P Q is not n I")
    p, q = tensors_from_eigenmatrices(P, Q)
    return ParameterSet(P.nrows - 1, _as_count(n), P, Q, p, q, provenance)


def parameters_from_P(P: RMatrix) -> ParameterSet:
    P = P if isinstance(P, RMatrix) else RMatrix(P)
    return parameters_from_eigenmatrices(P, q_from_p(P), "P")


def parameters_from_Q(Q: RMatrix) -> ParameterSet:
    Q = Q if isinstance(Q, RMatrix) else RMatrix(Q)
    return parameters_from_eigenmatrices(p_from_q(Q), Q, "Q")


def _as_count(n: Fraction) -> int:
    n = Fraction(n)
    if n.denominator != 1:
        raise ValueError(f"vertex count {n} is not an integer")
    return int(n)


def _valencies_from_array(L: RMatrix, known_index: int) -> list[Fraction] | None:
    """Solve [L]_{lj} k_l = [L]_{jl} k_j outward from k_0 = 1; None if underdetermined."""
    size = L.nrows
    vals: list[Fraction | None] = [None] * size
    vals[0] = Fraction(1)
    frontier = [0]
    while frontier:
        l = frontier.pop()
        for j in range(size):
            if vals[j] is None and L[l, j] != 0 and L[j, l] != 0:
                vals[j] = L[l, j] * vals[l] / L[j, l]
                frontier.append(j)
    if any(v is None for v in vals):
        return None
    return vals  # type: ignore[return-value]


def eigen_from_L1(L1: RMatrix, valencies: Sequence | None = None) -> tuple[RMatrix, RMatrix, tuple[Fraction, ...]]:
    """Eigenmatrices from an intersection array with d+1 distinct eigenvalues.

    Columns of Q are the eigenvectors (leading entry 1) scaled by their
    multiplicities m_j = n / (v_j^T diag(k) v_j). Idempotent 0 is the
    eigenvalue equal to the valency; the rest follow in decreasing order.
    """
    L1 = L1 if isinstance(L1, RMatrix) else RMatrix(L1)
    size = L1.nrows
    if valencies is None:
        ks = _valencies_from_array(L1, 1)
        if ks is None:
            raise ValueError("valencies cannot be recovered from this array; pass them explicitly")
    else:
        ks = [to_rational(x) for x in valencies]
    pairs = rational_eigen(L1, require_lead=True)
    if len(pairs) != size:
        raise RepeatedEigenvalue(f"array has {len(pairs)} distinct eigenvalues, need {size}")
    n = sum(ks, Fraction(0))
    trivial = next((idx for idx, pr in enumerate(pairs) if all(x == 1 for x in pr.vector.col(0))), None)
    if trivial is None:
        raise ValueError("no all-ones eigenvector: not an intersection array")
    order = [trivial] + [i for i in range(size) if i != trivial]
    cols = []
    mults = []
    for idx in order:
        v = pairs[idx].vector.col(0)
        norm = sum((ks[h] * v[h] * v[h] for h in range(size)), Fraction(0))
        m = n / norm
        mults.append(m)
        cols.append([m * x for x in v])
    Q = RMatrix._raw(tuple(tuple(cols[j][h] for j in range(size)) for h in range(size)))
    P = scalar_mul(n, inverse(Q))
    return P, Q, tuple(mults)


def _generic_combination(arrays: Sequence[RMatrix]) -> RMatrix:
    """A combination sum_i t^i L_i whose eigenvalues are (generically) distinct."""
    size = arrays[0].nrows
    for t in itertools.chain(range(2, 12), (17, 29, 101)):
        combo = RMatrix.zeros(size)
        for i, L in enumerate(arrays[1:], start=1):
            combo = combo + scalar_mul(Fraction(t) ** (i - 1), L)
        try:
            pairs = rational_eigen(combo, require_lead=True)
        except IrrationalSpectrum:
            raise
        except Exception:
            continue
        if len(pairs) == size:
            return combo
    raise RepeatedEigenvalue("no combination of the arrays separates the idempotents")


def parameters_from_intersection_tensor(p: Tensor, provenance: str = "intersection numbers") -> ParameterSet:
    """Complete a ParameterSet from the intersection numbers alone."""
    p = _freeze_tensor(p)
    size = len(p)
    r = range(size)
    arrays = [RMatrix._raw(tuple(tuple(p[i][j][k] for j in r) for k in r)) for i in r]
    ks = [p[i][i][0] for i in r]
    if size == 1:
        one = RMatrix([[1]])
        return ParameterSet(0, 1, one, one, p, ((( Fraction(1),),),), provenance)
    combo = _generic_combination(arrays)
    _, Q, _ = eigen_from_L1(combo, ks)
    P = p_from_q(Q)
    # order idempotents by the eigenvalues of relation 1 (descending), ties by the combination
    order = [0] + sorted(range(1, size), key=lambda j: tuple(-P[j, i] for i in range(1, size)))
    P = P.submatrix(order, list(r))
    Q = Q.submatrix(list(r), order)
    _, q = tensors_from_eigenmatrices(P, Q)
    return ParameterSet(size - 1, _as_count(sum(ks, Fraction(0))), P, Q, p, q, provenance)


def parameters_from_krein_tensor(q: Tensor, provenance: str = "Krein parameters") -> ParameterSet:
    """Dual completion: treat q as intersection data of the formal dual."""
    dual = parameters_from_intersection_tensor(q, provenance)
    P, Q = dual.Q, dual.P
    order = [0] + sorted(range(1, dual.d + 1), key=lambda i: -Q[i, 1])
    P = P.submatrix(list(range(dual.d + 1)), order)
    Q = Q.submatrix(order, list(range(dual.d + 1)))
    p, q2 = tensors_from_eigenmatrices(P, Q)
    return ParameterSet(dual.d, dual.n, P, Q, p, q2, provenance)


@dataclass(frozen=True)
class KreinArray:
    d: int
    b_star: tuple[Fraction, ...]
    c_star: tuple[Fraction, ...]  # c*_1 .. c*_d

    @property
    def m(self) -> Fraction:
        return self.b_star[0]

    @property
    def a_star(self) -> tuple[Fraction, ...]:
        """a*_i = m - b*_i - c*_i with b*_d = c*_0 = 0."""
        out = []
        for i in range(self.d + 1):
            b = self.b_star[i] if i < self.d else Fraction(0)
            c = self.c_star[i - 1] if i >= 1 else Fraction(0)
            out.append(self.m - b - c)
        return tuple(out)

    def krein_matrix(self) -> RMatrix:
        size = self.d + 1
        a = self.a_star
        rows = []
        for i in range(size):
            row = [Fraction(0)] * size
            if i >= 1:
                row[i - 1] = self.c_star[i - 1]
            row[i] = a[i]
            if i < self.d:
                row[i + 1] = self.b_star[i]
            rows.append(row)
        return RMatrix(rows)

    def multiplicities(self) -> list[Fraction]:
        mults = [Fraction(1)]
        for i in range(1, self.d + 1):
            mults.append(mults[-1] * self.b_star[i - 1] / self.c_star[i - 1])
        return mults


def parameters_from_krein_array(ka: KreinArray) -> ParameterSet:
    """ParameterSet of a cometric scheme from its Krein array."""
    L1s = ka.krein_matrix()
    Pd, Qd, _ = eigen_from_L1(L1s, ka.multiplicities())
    ps = parameters_from_eigenmatrices(Qd, Pd, "Krein array")
    return ps


# concrete schemes


class ConcreteScheme:
    """Vertex-level scheme stored as a relation-label matrix.

    ``labels[x, y] = i`` iff (x, y) lies in relation i. Relation matrices are
    materialised on demand as int8 arrays (``relation``) or exact RMatrix
    (``relation_matrix``).
    """

    def __init__(self, labels, name: str = "", fibers: Sequence[Sequence[int]] | None = None):
        lab = np.asarray(labels, dtype=np.int64)
        if lab.ndim != 2 or lab.shape[0] != lab.shape[1]:
            raise DimensionMismatch("label matrix must be square")
        self.labels = lab
        self.labels.setflags(write=False)
        self.n = lab.shape[0]
        self.d = int(lab.max()) if self.n else 0
        self.name = name
        self.fibers = [list(f) for f in fibers] if fibers is not None else None
        self._check_invariants()

    @classmethod
    def from_relations(cls, relations: Sequence, name: str = "") -> "ConcreteScheme":
        mats = [np.asarray(r.to_int_array() if isinstance(r, RMatrix) else r, dtype=np.int64) for r in relations]
        n = mats[0].shape[0]
        lab = np.full((n, n), -1, dtype=np.int64)
        for i, A in enumerate(mats):
            if A.shape != (n, n) or not np.isin(A, (0, 1)).all():
                raise NotAScheme(f"relation {i} is not a 0/1 matrix of order {n}")
            if (lab[A == 1] != -1).any():
                raise NotAScheme(f"relation {i} overlaps an earlier relation")
            lab[A == 1] = i
        if (lab == -1).any():
            raise NotAScheme("relations do not cover every pair")
        return cls(lab, name)

    def _check_invariants(self) -> None:
        lab = self.labels
        if self.n == 0:
            raise NotAScheme("empty scheme")
        if not (np.diag(lab) == 0).all() or (lab == 0).sum() != self.n:
            raise NotAScheme("relation 0 must be exactly the diagonal")
        if (lab != lab.T).any():
            raise NotAScheme("relations must be symmetric")
        present = np.unique(lab)
        if present.tolist() != list(range(self.d + 1)):
            raise NotAScheme("relation labels must be 0..d with every relation nonempty")

    def relation(self, i: int) -> np.ndarray:
        return (self.labels == i).astype(np.int8)

    @property
    def relations(self) -> list[np.ndarray]:
        return [self.relation(i) for i in range(self.d + 1)]

    def relation_matrix(self, i: int) -> RMatrix:
        return RMatrix.from_numpy(self.relation(i))

    def graph(self, i: int) -> np.ndarray:
        """Boolean adjacency of relation i."""
        return self.labels == i

    def neighbours(self, x: int, i: int) -> np.ndarray:
        return np.flatnonzero(self.labels[x] == i)

    def intersection_tensor(self) -> Tensor:
        """p^k_ij from relation products; raises NotAScheme if not constant."""
        size = self.d + 1
        mats = self.relations
        p = [[[Fraction(0)] * size for _ in range(size)] for _ in range(size)]
        for i in range(size):
            for j in range(i, size):
                prod = kernels.zero_one_product(mats[i], mats[j])
                values, bad = kernels.relation_constants(prod, self.labels, size)
                if bad is not None:
                    (a, b), (c, e) = bad
                    raise NotAScheme(
                        f"A_{i} A_{j} is not constant on relation {int(self.labels[a, b])}: "
                        f"cells ({a},{b}) and ({c},{e}) give {int(prod[a, b])} and {int(prod[c, e])}",
                        pair=(i, j),
                        cells=((a, b), (c, e)),
                    )
                for k in range(size):
                    p[i][j][k] = p[j][i][k] = Fraction(int(values[k]))
        return _freeze_tensor(p)

    def __repr__(self) -> str:
        return f"ConcreteScheme({self.name or 'unnamed'}, n={self.n}, d={self.d})"


def verify_scheme_axioms(s: ConcreteScheme, require_spectrum: bool = True) -> ParameterSet:
    """Check the intersection-number axioms and complete the parameters.

    With ``require_spectrum=False`` a scheme whose eigenvalues are irrational
    still yields its intersection numbers (P, Q and q set to None).
    """
    p = s.intersection_tensor()
    try:
        ps = parameters_from_intersection_tensor(p, provenance=f"verified {s.name or 'scheme'}")
    except IrrationalSpectrum:
        if require_spectrum:
            raise
        return ParameterSet(s.d, s.n, None, None, p, None, f"verified {s.name or 'scheme'} (irrational spectrum)")
    return ps


# identities


def parameter_identities_report(ps: ParameterSet) -> list[Verdict]:
    """Evaluate the 26 standard parameter identities exactly."""
    if not ps.has_spectrum:
        raise ValueError("identities need the eigenmatrices")
    D = range(ps.d + 1)
    p, q, P, Q = ps.p_tensor, ps.q_tensor, ps.P, ps.Q
    k, m, n = ps.valencies, ps.multiplicities, ps.n
    z = Fraction(0)
    out: list[Verdict] = []

    def first_violation(gen):
        for item in gen:
            if item is not None:
                return item
        return None

    def add(tag: str, name: str, viol):
        out.append(check(f"identity ({tag})", viol is None, witness=viol, citation=f"parameter identity: {name}"))

    for dual, (t, L, E, kk) in enumerate(((p, P, Q, k), (q, Q, P, m))):
        s = "'" if dual else ""
        add("i" + s, "index 0 acts as identity", first_violation(
            [(0, j, l)] if t[0][j][l] != (1 if j == l else 0) else None for j in D for l in D))
        add("ii" + s, "zero-index constants give valencies", first_violation(
            [(i, j)] if t[i][j][0] != (kk[i] if i == j else 0) else None for i in D for j in D))
        add("iii" + s, "symmetry in the lower indices", first_violation(
            [(i, j, l)] if t[i][j][l] != t[j][i][l] else None for i in D for j in D for l in D))
        add("iv" + s, "index raising", first_violation(
            [(i, j, l)] if t[i][j][l] * kk[l] != t[i][l][j] * kk[j] else None for i in D for j in D for l in D))
        add("v" + s, "row sums", first_violation(
            [(i, l)] if sum((t[i][j][l] for j in D), z) != kk[i] else None for i in D for l in D))
        add("vi" + s, "associativity", first_violation(
            [(i, j, h, mm)]
            if sum((t[i][j][l] * t[l][h][mm] for l in D), z) != sum((t[i][l][mm] * t[j][h][l] for l in D), z)
            else None
            for i in D for j in D for h in D for mm in D))
        add("vii" + s, "eigenvalue products", first_violation(
            [(i, j, h)] if L[i, j] * L[i, h] != sum((t[j][h][l] * L[i, l] for l in D), z) else None
            for i in D for j in D for h in D))
        if not dual:
            viii = first_violation(
                [(i, j, h)] if P[j, i] * Q[h, j] != sum((p[i][l][h] * Q[l, j] for l in D), z) else None
                for i in D for j in D for h in D)
        else:
            viii = first_violation(
                [(i, j, h)] if P[i, j] * Q[j, h] != sum((q[h][l][i] * P[l, j] for l in D), z) else None
                for i in D for j in D for h in D)
        add("viii" + s, "eigenvector relation between the arrays and the other eigenmatrix", viii)
        add("ix" + s, "trace of the arrays", first_violation(
            [(i,)] if sum((L[j, i] for j in D), z) != sum((t[h][i][h] for h in D), z) else None for i in D))
        add("x" + s, "first column is all ones", first_violation([(j,)] if L[j, 0] != 1 else None for j in D))
        add("xi" + s, "first row gives valencies", first_violation([(i,)] if L[0, i] != kk[i] else None for i in D))
        other = m if not dual else k
        add("xii" + s, "orthogonality", first_violation(
            [(i, h)] if sum((other[j] * L[j, i] * L[j, h] for j in D), z) != (n * kk[i] if i == h else 0) else None
            for i in D for h in D))
        add("xiii" + s, "structure constants from the eigenmatrix", first_violation(
            [(i, j, l)]
            if t[i][j][l] * n * kk[l] != sum((other[h] * L[h, i] * L[h, j] * L[h, l] for h in D), z)
            else None
            for i in D for j in D for l in D))
    return out


# imprimitivity


@dataclass(frozen=True)
class ImprimitivitySystem:
    index_set_I: tuple[int, ...]
    index_set_J: tuple[int, ...]
    fibers: int
    fiber_size: int
    subscheme: ParameterSet | None = field(default=None, compare=False)
    quotient: ParameterSet | None = field(default=None, compare=False)

    @property
    def w(self) -> int:
        return self.fibers

    @property
    def r(self) -> int:
        return self.fiber_size


def _restrict(t: Tensor, idx: Sequence[int]) -> Tensor:
    return tuple(tuple(tuple(t[i][j][k] for k in idx) for j in idx) for i in idx)


def find_imprimitivity(ps: ParameterSet, with_parameters: bool = True) -> list[ImprimitivitySystem]:
    """All nontrivial systems of imprimitivity, by exhaustive subset search."""
    out = []
    D = list(range(ps.d + 1))
    k = ps.valencies
    for size in range(1, ps.d):
        for rest in itertools.combinations(D[1:], size):
            I = (0,) + rest
            closed = all(ps.p_tensor[i][j][l] == 0 or l in I for i in I for j in I for l in D)
            if not closed:
                continue
            r = sum((k[i] for i in I), Fraction(0))
            if ps.n % int(r):
                continue
            w = ps.n // int(r)
            J: tuple[int, ...] = ()
            if ps.has_spectrum:
                J = tuple(j for j in D if sum((ps.P[j, i] for i in I), Fraction(0)) == r)
                mult_sum = sum((ps.multiplicities[j] for j in J), Fraction(0))
                if mult_sum != w:
                    continue
            sub = quo = None
            if with_parameters:
                sub = _try(lambda: parameters_from_intersection_tensor(_restrict(ps.p_tensor, I), "subscheme"))
                if ps.q_tensor is not None and J:
                    quo = _try(lambda: parameters_from_krein_tensor(_restrict(ps.q_tensor, J), "quotient"))
            out.append(ImprimitivitySystem(I, J, w, int(r), sub, quo))
    return out


def _try(fn):
    try:
        return fn()
    except Exception:
        return None


def quotient_intersection_numbers(ps: ParameterSet, system: ImprimitivitySystem) -> Tensor:
    """Quotient intersection numbers from the classes of the equivalence.

    Relations are grouped into classes by which fibre pairs they join; the
    quotient constant p~^c_ab = (1/r) * sum over i in class a, j in class b of
    p^k_ij for any fixed k in class c.
    """
    I = set(system.index_set_I)
    D = range(ps.d + 1)
    classes: list[list[int]] = [sorted(I)]
    assigned = set(I)
    for i in D:
        if i in assigned:
            continue
        # all relations reachable by composing with the subscheme on both sides
        cls = sorted({l for l in D if any(ps.p_tensor[a][i][c] and ps.p_tensor[c][b][l] for a in I for b in I for c in D)})
        classes.append(cls)
        assigned.update(cls)
    r = system.fiber_size
    size = len(classes)
    out = [[[Fraction(0)] * size for _ in range(size)] for _ in range(size)]
    for a, ca in enumerate(classes):
        for b, cb in enumerate(classes):
            for c, cc in enumerate(classes):
                rep = cc[0]
                out[a][b][c] = sum((ps.p_tensor[i][j][rep] for i in ca for j in cb), Fraction(0)) / r
    return _freeze_tensor(out)


# polynomial orderings


def _tridiagonal_order(t: Tensor, i: int) -> list[int] | None:
    """Ordering making array i irreducible tridiagonal, if one exists."""
    size = len(t)
    # layers of the distribution diagram of i starting from 0
    order = [0]
    seen = {0}
    layer = [0]
    while layer:
        nxt = sorted({k for j in layer for k in range(size) if t[i][j][k] != 0 and k not in seen})
        if len(nxt) > 1:
            return None
        if not nxt:
            break
        order.extend(nxt)
        seen.update(nxt)
        layer = nxt
    if len(order) != size or order[1] != i:
        return None
    pos = {v: idx for idx, v in enumerate(order)}
    for j in range(size):
        for k in range(size):
            gap = abs(pos[j] - pos[k])
            val = t[i][j][k]
            if gap > 1 and val != 0:
                return None
            if gap == 1 and val == 0:
                return None
    return order


@dataclass(frozen=True)
class QOrdering:
    idempotent_order: tuple[int, ...]
    krein_array: KreinArray
    relation_order: tuple[int, ...]
    q_bipartite: bool
    q_antipodal: bool


def natural_relation_order(ps: ParameterSet, e1: int) -> tuple[int, ...]:
    """Relations sorted by Q[i, e1] descending; ties are an error."""
    col = [ps.Q[i, e1] for i in range(ps.d + 1)]
    if len(set(col)) != len(col):
        raise ValueError(f"idempotent {e1} has repeated entries; natural ordering undefined")
    return tuple(sorted(range(ps.d + 1), key=lambda i: -col[i]))


def polynomial_orderings(ps: ParameterSet) -> tuple[list[tuple[int, ...]], list[QOrdering]]:
    """All P-polynomial and Q-polynomial orderings."""
    p_orders = []
    for i in range(1, ps.d + 1):
        o = _tridiagonal_order(ps.p_tensor, i)
        if o is not None:
            p_orders.append(tuple(o))
    q_orders = []
    if ps.q_tensor is not None:
        for j in range(1, ps.d + 1):
            o = _tridiagonal_order(ps.q_tensor, j)
            if o is None:
                continue
            L = ps.permuted(idempotent_order=o).Lstar(1)
            d = ps.d
            b = tuple(L[i, i + 1] for i in range(d))
            c = tuple(L[i, i - 1] for i in range(1, d + 1))
            ka = KreinArray(d, b, c)
            qperm = ps.permuted(idempotent_order=o)
            q_bip = all(a == 0 for a in ka.a_star)
            q_anti = d >= 1 and all(qperm.q_tensor[d][d][kk] == 0 for kk in range(1, d))
            q_orders.append(QOrdering(tuple(o), ka, natural_relation_order(ps, o[1]), q_bip, q_anti))
    return p_orders, q_orders


def closure_dims(ps: ParameterSet) -> tuple[list[int], list[int]]:
    """Dimensions of the algebra generated by each A_i and the Schur algebra of each E_j."""
    D = range(ps.d + 1)
    a_dims = [len({ps.P[j, i] for j in D}) for i in D]
    e_dims = [len({ps.Q[i, j] for i in D}) for j in D]
    return a_dims, e_dims


def formal_dual(ps: ParameterSet) -> ParameterSet | Verdict:
    """Swap the roles of P and Q; return the failing verdict if the dual is not integral."""
    dual = ParameterSet(ps.d, ps.n, ps.Q, ps.P, ps.q_tensor, ps.p_tensor, "formal dual")
    D = range(ps.d + 1)
    bad = next(
        ((i, j, k, dual.p_tensor[i][j][k]) for i in D for j in D for k in D
         if dual.p_tensor[i][j][k] < 0 or dual.p_tensor[i][j][k].denominator != 1),
        None,
    )
    if bad is not None:
        return check("formal dual integrality", False, witness=list(bad),
                     citation="intersection numbers must be nonnegative integers (FC2)")
    neg = next(((i, j, k) for i in D for j in D for k in D if dual.q_tensor[i][j][k] < 0), None)
    if neg is not None:
        return check("formal dual Krein", False, witness=list(neg), citation="Krein nonnegativity (FC1)")
    return dual
