"""Distribution diagrams, twins and vertex connectivity of basis relations."""

from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .graphs import SimpleGraph, bits
from .scheme import ConcreteScheme, ParameterSet, verify_scheme_axioms
from .verdict import Verdict, check, inapplicable

DEFAULT_VERTEX_CAP = 512


# ---------------------------------------------------------------- distribution diagrams


@dataclass(frozen=True)
class DistributionDiagram:
    """Unweighted distribution diagram H_i on nodes 0..d; (j, k) is an edge iff p^k_ij > 0."""

    d: int
    relation: int
    edges: frozenset[tuple[int, int]]

    def adjacent(self, j: int, k: int) -> bool:
        return (min(j, k), max(j, k)) in self.edges

    def neighbours(self, j: int) -> list[int]:
        return [k for k in range(self.d + 1) if k != j and self.adjacent(j, k)]

    def has_loop(self, j: int) -> bool:
        return (j, j) in self.edges

    def is_connected_without(self, removed: Iterable[int]) -> bool:
        gone = set(removed)
        nodes = [j for j in range(self.d + 1) if j not in gone]
        if not nodes:
            return True
        seen = {nodes[0]}
        q = deque([nodes[0]])
        while q:
            j = q.popleft()
            for k in self.neighbours(j):
                if k not in gone and k not in seen:
                    seen.add(k)
                    q.append(k)
        return len(seen) == len(nodes)

    def distance_from_zero(self) -> list[int | None]:
        dist: list[int | None] = [None] * (self.d + 1)
        dist[0] = 0
        q = deque([0])
        while q:
            j = q.popleft()
            for k in self.neighbours(j):
                if dist[k] is None:
                    dist[k] = dist[j] + 1  # type: ignore[operator]
                    q.append(k)
        return dist


def distribution_diagram(ps: ParameterSet, i: int) -> DistributionDiagram:
    if not 1 <= i <= ps.d:
        raise ValueError(f"relation index must lie in 1..{ps.d}")
    size = ps.d + 1
    edges = frozenset((min(j, k), max(j, k)) for j in range(size) for k in range(size) if ps.p_tensor[i][j][k] > 0)
    return DistributionDiagram(ps.d, i, edges)


# ---------------------------------------------------------------- twins and shapes


def twins(g: SimpleGraph) -> list[tuple[int, int]]:
    groups: dict[int, list[int]] = {}
    for x in range(g.n):
        groups.setdefault(g.nbr[x], []).append(x)
    return sorted((a, b) for grp in groups.values() for i, a in enumerate(grp) for b in grp[i + 1:])


def is_complete_multipartite(g: SimpleGraph) -> bool:
    """Non-adjacency (plus equality) is an equivalence relation."""
    for x in range(g.n):
        for y in range(x + 1, g.n):
            if not g.adjacent(x, y) and g.nbr[x] != g.nbr[y]:
                return False
    return True


def is_cycle(g: SimpleGraph) -> bool:
    return g.n >= 3 and all(d == 2 for d in g.degrees) and g.is_connected()


def relation_graph(scheme: ConcreteScheme, i: int) -> SimpleGraph:
    return SimpleGraph(scheme.graph(i))


def has_induced_k211(g: SimpleGraph) -> bool:
    """K_4 minus an edge: an edge xy with two non-adjacent common neighbours."""
    for x, y in g.edges():
        common = bits(g.nbr[x] & g.nbr[y])
        for idx, a in enumerate(common):
            if any(not g.adjacent(a, b) for b in common[idx + 1:]):
                return True
    return False


# ---------------------------------------------------------------- vertex connectivity


def _local_connectivity(g: SimpleGraph, s: int, t: int, cap: int) -> int:
    """Internally vertex-disjoint s-t paths (non-adjacent s, t), stopping at ``cap``.

    Vertex x is split into in-node 2x and out-node 2x+1 joined by a unit arc;
    every edge xy becomes out(x) -> in(y) and out(y) -> in(x).
    """
    n = g.n
    head: list[int] = []
    cap_arr: list[int] = []
    adj: list[list[int]] = [[] for _ in range(2 * n)]

    def add(u: int, v: int, c: int) -> None:
        adj[u].append(len(head))
        head.append(v)
        cap_arr.append(c)
        adj[v].append(len(head))
        head.append(u)
        cap_arr.append(0)

    big = n
    for x in range(n):
        add(2 * x, 2 * x + 1, big if x in (s, t) else 1)
    for x, y in g.edges():
        add(2 * x + 1, 2 * y, 1)
        add(2 * y + 1, 2 * x, 1)
    src, sink = 2 * s + 1, 2 * t
    flow = 0
    while flow < cap:
        prev = [-1] * (2 * n)
        prev[src] = -2
        q = deque([src])
        found = False
        while q and not found:
            u = q.popleft()
            for a in adj[u]:
                if cap_arr[a] > 0:
                    v = head[a]
                    if prev[v] == -1:
                        prev[v] = a
                        if v == sink:
                            found = True
                            break
                        q.append(v)
        if not found:
            break
        v = sink
        while v != src:
            a = prev[v]
            cap_arr[a] -= 1
            cap_arr[a ^ 1] += 1
            v = head[a ^ 1]
        flow += 1
    return flow


def vertex_connectivity(g: SimpleGraph, limit: int | None = None) -> int:
    """Vertex connectivity, or ``limit`` if it is at least ``limit``.

    Even's scheme: some vertex among the first kappa+1 lies outside a minimum
    cut, so only pairs (i, j) with i <= current bound need a flow computation.
    """
    n = g.n
    if n <= 1:
        return 0
    if not g.is_connected():
        return 0
    best = min(min(g.degrees), n - 1)
    if limit is not None:
        best = min(best, limit)
    i = 0
    while i <= best and i < n:
        for j in range(i + 1, n):
            if not g.adjacent(i, j):
                best = min(best, _local_connectivity(g, i, j, best))
        i += 1
    return best


def is_disconnecting(g: SimpleGraph, T: Iterable[int]) -> bool:
    mask = sum(1 << x for x in set(T))
    return len(g.components(mask)) > 1


# ---------------------------------------------------------------- main theorem


def _closed_neighbourhood(g: SimpleGraph, a: int) -> int:
    return g.nbr[a] | (1 << a)


def _basepoints(n: int, vertex_cap: int, seed: int = 0) -> tuple[list[int], bool]:
    if n <= vertex_cap:
        return list(range(n)), False
    rng = random.Random(seed)
    return sorted(rng.sample(range(n), vertex_cap)), True


def tmain_check(scheme: ConcreteScheme, i: int, ps: ParameterSet | None = None,
                vertex_cap: int = DEFAULT_VERTEX_CAP) -> Verdict:
    """Evaluate the four equivalent statements for relation i and compare them.

    (1) some a has Gamma minus a-perp connected, (2) every a does, (3) H_i minus
    {0, i} is connected, (4) Gamma is twin-free.
    """
    ps = ps if ps is not None else verify_scheme_axioms(scheme, require_spectrum=False)
    g = relation_graph(scheme, i)
    tid = f"connectivity equivalence R{i}"
    cite = "main connectivity theorem"
    if not g.is_connected():
        return inapplicable(tid, "relation graph is disconnected", cite)
    if is_complete_multipartite(g):
        return inapplicable(tid, "relation graph is complete multipartite", cite)
    pts, sampled = _basepoints(g.n, vertex_cap)
    conn = [g.is_connected(_closed_neighbourhood(g, a)) for a in pts]
    s1, s2 = any(conn), all(conn)
    s3 = distribution_diagram(ps, i).is_connected_without((0, i))
    s4 = not twins(g)
    note = "sampled" if sampled else ""
    return check(tid, s1 == s2 == s3 == s4, [s1, s2, s3, s4], cite, note)


def spectral_cut_check(scheme: ConcreteScheme, i: int, T: Iterable[int], ps: ParameterSet | None = None) -> Verdict:
    """If T disconnects the K_{2,1,1}-free relation graph, then |T| > p^i_ii."""
    g = relation_graph(scheme, i)
    T = sorted(set(T))
    tid = f"spectral cut bound R{i}"
    cite = "spectral cut lemma"
    if not g.is_connected():
        return inapplicable(tid, "relation graph is disconnected", cite)
    if has_induced_k211(g):
        return inapplicable(tid, "relation graph contains an induced K_{2,1,1}", cite)
    if not is_disconnecting(g, T):
        return inapplicable(tid, "T does not disconnect the graph", cite)
    ps = ps if ps is not None else verify_scheme_axioms(scheme, require_spectrum=False)
    lam = ps.p_tensor[i][i][i]
    return check(tid, len(T) > lam, [len(T), lam], cite)


# ---------------------------------------------------------------- projection properties


def projection_is_homomorphism(scheme: ConcreteScheme, i: int, a: int, diagram: DistributionDiagram) -> bool:
    lab = scheme.labels
    phi = lab[a]
    xs, ys = np.nonzero(lab == i)
    return all(diagram.adjacent(j, k) for j, k in set(zip(phi[xs].tolist(), phi[ys].tolist())))


def distances_match_diagram(scheme: ConcreteScheme, i: int, diagram: DistributionDiagram, a: int) -> bool:
    g = relation_graph(scheme, i)
    dist = g.distances_from(a)
    want = diagram.distance_from_zero()
    return all(dist[b] == want[int(scheme.labels[a, b])] for b in range(scheme.n))


def open_neighbourhood_components_ok(g: SimpleGraph, a: int) -> bool:
    """Gamma minus Gamma(a) has at most one component with more than one vertex."""
    comps = g.components(g.nbr[a])
    return sum(1 for c in comps if c & (c - 1)) <= 1


def maximal_cliques(g: SimpleGraph, limit: int | None = None) -> list[int]:
    """Bron-Kerbosch with pivoting over bitsets; returns clique bitsets."""
    out: list[int] = []

    def expand(r: int, p: int, x: int) -> None:
        if limit is not None and len(out) >= limit:
            return
        if not p and not x:
            out.append(r)
            return
        pivot_pool = p | x
        u = max(bits(pivot_pool), key=lambda y: (g.nbr[y] & p).bit_count())
        for v in bits(p & ~g.nbr[u]):
            expand(r | (1 << v), p & g.nbr[v], x & g.nbr[v])
            p &= ~(1 << v)
            x |= 1 << v

    expand(0, (1 << g.n) - 1, 0)
    return out


def clique_removal_connected(g: SimpleGraph, clique: int) -> bool:
    return g.is_connected(clique)


# ---------------------------------------------------------------- schemes from graphs


def distance_scheme(g: SimpleGraph, name: str = "") -> ConcreteScheme:
    """Distance relations of a connected graph (a scheme iff the graph is distance-regular)."""
    lab = np.array([g.distances_from(x) for x in range(g.n)], dtype=np.int64)
    if (lab < 0).any():
        raise ValueError("graph is disconnected")
    return ConcreteScheme(lab, name or "distance scheme")


# ---------------------------------------------------------------- survey


SMALL_EXCEPTIONS = {(4, 2, 0, 2): "C4", (5, 2, 0, 1): "C5", (6, 3, 0, 3): "K33", (10, 3, 0, 1): "Petersen"}


@dataclass(frozen=True)
class RelationSurvey:
    relation: int
    connected: bool
    diameter: int | None
    connectivity: int | None
    tmain: Verdict
    exception: str | None


def survey_relations(scheme: ConcreteScheme, ps: ParameterSet | None = None, connectivity_limit: int = 4,
                     vertex_cap: int = DEFAULT_VERTEX_CAP) -> list[RelationSurvey]:
    """Connectivity facts for every basis relation of a scheme."""
    ps = ps if ps is not None else verify_scheme_axioms(scheme, require_spectrum=False)
    out = []
    for i in range(1, scheme.d + 1):
        g = relation_graph(scheme, i)
        connected = g.is_connected()
        diam = g.diameter() if connected else None
        kappa = vertex_connectivity(g, connectivity_limit) if connected else None
        exc = None
        if diam == 2 and kappa is not None and kappa < 4:
            srg = g.srg_parameters()
            exc = SMALL_EXCEPTIONS.get(srg) if srg else None
        out.append(RelationSurvey(i, connected, diam, kappa, tmain_check(scheme, i, ps, vertex_cap), exc))
    return out
