from __future__ import annotations

import itertools

import networkx as nx
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from scheme_lab.constructions import (
    GaloisField,
    HadamardMatrix,
    OrthogonalArray,
    cameron_seidel,
    cameron_seidel_gram,
    degenerate_lssd,
    gf2_rank,
    hadamard_tensor,
    hypercube_scheme,
    kerdock_forms,
    lssd_from_oa_hadamard,
    menon_params,
    oa_from_mols,
    oa_product,
    parse_grid,
    prime_power,
    seberry_hadamard_36,
    worked_example,
)
from scheme_lab.errors import FormSetUnavailable, NotPrimePower, NotRegular, SymbolMismatch
from scheme_lab.scheme import verify_scheme_axioms


@pytest.mark.parametrize("n", [2, 3, 5])
def test_hypercube_matches_networkx_distances(n):
    g = nx.hypercube_graph(n)
    order = sorted(g.nodes, key=lambda t: sum(b << i for i, b in enumerate(t)))
    dist = dict(nx.all_pairs_shortest_path_length(g))
    expected = np.array([[dist[a][b] for b in order] for a in order])
    assert np.array_equal(hypercube_scheme(n).labels, expected)


@pytest.mark.parametrize("v, w", [(2, 2), (3, 4), (5, 3)])
def test_degenerate_lssd_valencies(v, w):
    ps = verify_scheme_axioms(degenerate_lssd(v, w), require_spectrum=False)
    assert ps.valencies == (1, w - 1, v - 1, (v - 1) * (w - 1))


def span_rank(rows: np.ndarray) -> int:
    """log2 of the number of distinct GF(2) combinations of the rows."""
    span = {tuple(np.zeros(rows.shape[1], dtype=int))}
    for r in rows:
        span |= {tuple((np.array(s) + r) % 2) for s in span}
    return len(span).bit_length() - 1


@settings(max_examples=60)
@given(st.integers(1, 6).flatmap(lambda r: st.integers(1, 6).flatmap(
    lambda c: st.lists(st.lists(st.integers(0, 1), min_size=c, max_size=c), min_size=r, max_size=r))))
def test_gf2_rank_matches_span(rows):
    m = np.array(rows)
    assert gf2_rank(m) == span_rank(m)


@pytest.mark.parametrize("r, count", [(2, 8), (3, 8), (4, 16)])
def test_kerdock_forms_pairwise_nondegenerate(r, count):
    forms = kerdock_forms(r)
    assert len(forms) == count
    for a, b in itertools.combinations(forms.forms, 2):
        assert gf2_rank((a + b) % 2) == 2 * r


def test_kerdock_forms_limit():
    with pytest.raises(FormSetUnavailable):
        kerdock_forms(3, 9)


def test_cameron_seidel_r3_is_a_scheme():
    ps = verify_scheme_axioms(cameron_seidel(3, 3), require_spectrum=False)
    assert ps.n == 192
    assert ps.valencies[2] == 63


def test_cameron_seidel_gram_is_linked_simplices():
    G, den = cameron_seidel_gram(2, 3)
    N = 16
    assert den == 15 and (np.diag(G) == 15).all()
    for a in range(3):
        blk = G[a * N:(a + 1) * N, a * N:(a + 1) * N]
        assert set(np.unique(blk[~np.eye(N, dtype=bool)])) == {-1}
    cross = G[:N, N:2 * N]
    assert set(np.unique(cross)) == {-5, 3}
    # positive semidefinite with rank 15 (plus numerical noise)
    eig = np.linalg.eigvalsh(G.astype(float))
    assert eig.min() > -1e-9 and int((eig > 1e-9).sum()) == 15


def covers_all_pairs(oa: np.ndarray, n: int) -> bool:
    for a, b in itertools.combinations(range(oa.shape[1]), 2):
        pairs = {(x, y) for x, y in zip(oa[:, a], oa[:, b])}
        if len(pairs) != n * n or len(oa) != n * n:
            return False
    return True


@pytest.mark.parametrize("q", [2, 3, 4, 5, 7, 8, 9])
def test_oa_from_mols(q):
    oa = oa_from_mols(q)
    assert oa.columns == q + 1
    assert covers_all_pairs(oa.entries, q)


def test_oa_rejections():
    with pytest.raises(NotPrimePower):
        oa_from_mols(6)
    with pytest.raises(ValueError):
        OrthogonalArray(np.array([[1, 1], [1, 2], [2, 1], [2, 1]]))
    with pytest.raises(ValueError):
        OrthogonalArray(np.ones((3, 2), dtype=int))


def test_oa_product():
    oa = oa_product(oa_from_mols(2), oa_from_mols(3))
    assert oa.n == 6 and oa.columns == 3
    assert covers_all_pairs(oa.entries, 6)


@pytest.mark.parametrize("q", [4, 8, 9, 16])
def test_galois_field_axioms(q):
    F = GaloisField(q)
    elems = range(q)
    for a in range(1, q):
        assert sum(1 for b in elems if F.mul[a, b] == 1) == 1
    for a, b, c in itertools.product(elems, repeat=3):
        if (a * 7 + b * 3 + c) % 5:  # sample
            continue
        assert F.mul[a, F.add[b, c]] == F.add[F.mul[a, b], F.mul[a, c]]
        assert F.mul[a, F.mul[b, c]] == F.mul[F.mul[a, b], c]


@pytest.mark.parametrize("q, expected", [(1, None), (2, (2, 1)), (12, None), (27, (3, 3)), (49, (7, 2))])
def test_prime_power(q, expected):
    assert prime_power(q) == expected


def test_hadamard_validation():
    with pytest.raises(ValueError):
        HadamardMatrix(np.array([[1, 1], [1, 1]]))
    h36 = seberry_hadamard_36()
    assert h36.order == 36 and h36.row_sum == 6
    h2 = HadamardMatrix(np.array([[1, 1], [1, -1]]))
    assert not h2.regular and h2.row_sum is None
    assert hadamard_tensor(h2, h2).order == 4


def test_lssd_from_oa_preconditions():
    oa, h, _ = worked_example()
    with pytest.raises(SymbolMismatch):
        lssd_from_oa_hadamard(oa_from_mols(3), h)
    irregular = HadamardMatrix(np.array([[1, 1, 1, 1], [1, -1, 1, -1], [1, 1, -1, -1], [1, -1, -1, 1]]))
    with pytest.raises(NotRegular):
        lssd_from_oa_hadamard(oa, irregular)


def test_lssd_from_oa_blocks_are_hadamard():
    oa, h, _ = worked_example()
    built = lssd_from_oa_hadamard(oa, h)
    for G in built.mixed.values():
        assert np.isin(G, (-1, 1)).all()
        assert np.array_equal(G @ G.T, 16 * np.eye(16, dtype=np.int64))


@pytest.mark.parametrize("u", [1, 2, 3])
def test_menon_params(u):
    mp = menon_params(u)
    for v, k, lam in (mp.design, mp.complement):
        assert k * (k - 1) == lam * (v - 1)
    assert mp.design[1] + mp.complement[1] == mp.design[0]


def test_parse_grid_forms():
    assert parse_grid("+-\n-+").tolist() == [[1, -1], [-1, 1]]
    assert parse_grid("# comment\n1 −1\n0 2").tolist() == [[1, -1], [0, 2]]
    with pytest.raises(ValueError):
        parse_grid("1 2\n3")
