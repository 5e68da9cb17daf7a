"""Small undirected simple graphs with bitset neighbourhoods."""

from __future__ import annotations

from collections import deque
from typing import Iterable, Sequence

import numpy as np

from .errors import DimensionMismatch


class SimpleGraph:
    """Loop-free symmetric graph on vertices 0..n-1.

    Neighbourhoods are kept as Python int bitsets (bit y of ``nbr[x]`` set iff
    x ~ y); ``adjacency`` gives a read-only boolean numpy view.
    """

    __slots__ = ("n", "nbr", "_adj")

    def __init__(self, adjacency):
        adj = np.asarray(adjacency).astype(bool)
        if adj.ndim != 2 or adj.shape[0] != adj.shape[1]:
            raise DimensionMismatch("adjacency must be square")
        if (adj != adj.T).any():
            raise ValueError("adjacency must be symmetric")
        if adj.diagonal().any():
            raise ValueError("graph must be loop-free")
        self.n = adj.shape[0]
        self.nbr = [sum(1 << int(y) for y in np.flatnonzero(adj[x])) for x in range(self.n)]
        adj.setflags(write=False)
        self._adj = adj

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "SimpleGraph":
        adj = np.zeros((n, n), dtype=bool)
        for a, b in edges:
            adj[a, b] = adj[b, a] = True
        return cls(adj)

    @property
    def adjacency(self) -> np.ndarray:
        return self._adj

    def degree(self, x: int) -> int:
        return self.nbr[x].bit_count()

    @property
    def degrees(self) -> list[int]:
        return [b.bit_count() for b in self.nbr]

    def is_regular(self) -> bool:
        return len(set(self.degrees)) <= 1

    def edges(self) -> list[tuple[int, int]]:
        return [(x, y) for x in range(self.n) for y in _bits(self.nbr[x]) if x < y]

    def edge_count(self) -> int:
        return sum(self.degrees) // 2

    def neighbours(self, x: int) -> list[int]:
        return list(_bits(self.nbr[x]))

    def adjacent(self, x: int, y: int) -> bool:
        return bool(self.nbr[x] >> y & 1)

    def components(self, removed: int = 0) -> list[int]:
        """Connected components (as bitsets) after deleting the vertex bitset ``removed``."""
        alive = ((1 << self.n) - 1) & ~removed
        out = []
        while alive:
            start = (alive & -alive).bit_length() - 1
            comp = 1 << start
            frontier = comp
            while frontier:
                x = (frontier & -frontier).bit_length() - 1
                frontier &= frontier - 1
                new = self.nbr[x] & alive & ~comp
                comp |= new
                frontier |= new
            out.append(comp)
            alive &= ~comp
        return out

    def is_connected(self, removed: int = 0) -> bool:
        return len(self.components(removed)) <= 1

    def distances_from(self, x: int) -> list[int]:
        dist = [-1] * self.n
        dist[x] = 0
        q = deque([x])
        while q:
            a = q.popleft()
            for b in _bits(self.nbr[a]):
                if dist[b] < 0:
                    dist[b] = dist[a] + 1
                    q.append(b)
        return dist

    def diameter(self) -> int:
        best = 0
        for x in range(self.n):
            d = self.distances_from(x)
            if min(d) < 0:
                raise ValueError("graph is disconnected")
            best = max(best, max(d))
        return best

    def induced(self, vertices: Sequence[int]) -> "SimpleGraph":
        idx = list(vertices)
        return SimpleGraph(self._adj[np.ix_(idx, idx)])

    def complement(self) -> "SimpleGraph":
        c = ~self._adj
        np.fill_diagonal(c, False)
        return SimpleGraph(c)

    def srg_parameters(self) -> tuple[int, int, int, int] | None:
        """(v, k, lambda, mu) if strongly regular (and neither complete nor empty)."""
        if not self.is_regular() or self.n < 3:
            return None
        k = self.degree(0)
        lam = mu = None
        for x in range(self.n):
            for y in range(x + 1, self.n):
                c = (self.nbr[x] & self.nbr[y]).bit_count()
                if self.adjacent(x, y):
                    if lam is None:
                        lam = c
                    elif lam != c:
                        return None
                else:
                    if mu is None:
                        mu = c
                    elif mu != c:
                        return None
        if lam is None or mu is None:
            return None
        return self.n, k, lam, mu

    def __repr__(self) -> str:
        return f"SimpleGraph(n={self.n}, m={self.edge_count()})"


def _bits(b: int):
    while b:
        low = b & -b
        yield low.bit_length() - 1
        b ^= low


def bits(b: int) -> list[int]:
    return list(_bits(b))


def cycle(n: int) -> SimpleGraph:
    return SimpleGraph.from_edges(n, ((i, (i + 1) % n) for i in range(n)))


def complete(n: int) -> SimpleGraph:
    return SimpleGraph.from_edges(n, ((i, j) for i in range(n) for j in range(i + 1, n)))


def complete_multipartite(parts: int, size: int) -> SimpleGraph:
    n = parts * size
    return SimpleGraph.from_edges(n, ((i, j) for i in range(n) for j in range(i + 1, n) if i // size != j // size))


def petersen() -> SimpleGraph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return SimpleGraph.from_edges(10, outer + spokes + inner)


def paley(q: int) -> SimpleGraph:
    """Paley graph on GF(q), q = 1 mod 4."""
    from .constructions import GaloisField

    if q % 4 != 1:
        raise ValueError("Paley graphs need q = 1 mod 4")
    F = GaloisField(q)
    squares = {int(F.mul[x, x]) for x in range(1, q)}
    # a ~ b iff a = b + c for a nonzero square c
    return SimpleGraph.from_edges(q, ((int(F.add[b, c]), b) for b in range(q) for c in squares if int(F.add[b, c]) < b))
