"""Labeled weighted graph on V^(m) and exact shortest paths.

Each word ``w`` with ``|w| <= m`` and each unordered boundary pair
``{j1, j2}`` contributes one edge between the images of ``P_j1`` and
``P_j2`` under ``psi_w``.  Under weights ``alpha`` that edge costs
``alpha_w``.  Edge labels store ``iota = (j1, j2)`` with ``j1 < j2``;
traversal from the ``P_j2`` side emits the swapped pair.
"""
from __future__ import annotations

import heapq
import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import dijkstra as _csgraph_dijkstra

from .fractal import FractalSpec, Level, VertexId, format_word, level, words_upto
from .rational import IntScale, fmt, word_weight

# float64 represents integers exactly below this bound
_EXACT_FLOAT_INT = 2 ** 53


@dataclass(frozen=True)
class LabeledEdge:
    u: int
    v: int
    iota: tuple[int, int]
    word: tuple

    def weight(self, alpha) -> Fraction:
        return word_weight(alpha, self.word)

    def oriented(self, start: int) -> tuple[int, int]:
        """Label of this edge when traversed starting from ``start``."""
        return self.iota if start == self.u else (self.iota[1], self.iota[0])


class LevelGraph:
    def __init__(self, spec: FractalSpec, m: int):
        self.spec = spec
        self.m = m
        self.level: Level = level(spec, m)
        self.edges: list[LabeledEdge] = []
        self._lookup: dict[tuple[int, int], int] = {}
        self.adj: list[list[tuple[int, int]]] = [[] for _ in range(len(self.level))]
        for w in words_upto(spec.k, m):
            for j1, j2 in itertools.combinations(range(1, spec.N + 1), 2):
                u = self.level.cid((w, j1))
                v = self.level.cid((w, j2))
                key = (min(u, v), max(u, v))
                if u == v or key in self._lookup:
                    raise ValueError(
                        f"edge {format_word(w, spec.k)}:{j1}-{j2} collides; spec violates the cell axioms")
                n = len(self.edges)
                self._lookup[key] = n
                self.edges.append(LabeledEdge(u, v, (j1, j2), w))
                self.adj[u].append((v, n))
                self.adj[v].append((u, n))

    def __len__(self) -> int:
        return len(self.level)

    @property
    def vertices(self) -> list[VertexId]:
        return [VertexId(self.m, c) for c in range(len(self.level))]

    def edge_between(self, a: int, b: int) -> LabeledEdge | None:
        n = self._lookup.get((min(a, b), max(a, b)))
        return None if n is None else self.edges[n]

    def boundary(self, j: int) -> int:
        return self.level.boundary(j)

    # -- shortest paths --------------------------------------------------

    def _scaled_weights(self, alpha) -> tuple[IntScale, list[int]]:
        sc = IntScale(alpha, self.m)
        return sc, [sc.scaled(e.word) for e in self.edges]

    def distances_from(self, alpha, source: int, prefix: tuple | None = None) -> list[Fraction | None]:
        """Exact single-source distances; ``prefix`` restricts to edges of that sub-cell."""
        sc, wts = self._scaled_weights(alpha)
        n = len(prefix) if prefix is not None else 0
        dist: list[int | None] = [None] * len(self)
        dist[source] = 0
        heap = [(0, source)]
        done = [False] * len(self)
        while heap:
            d, x = heapq.heappop(heap)
            if done[x]:
                continue
            done[x] = True
            for y, ei in self.adj[x]:
                if prefix is not None and self.edges[ei].word[:n] != prefix:
                    continue
                nd = d + wts[ei]
                if dist[y] is None or nd < dist[y]:
                    dist[y] = nd
                    heapq.heappush(heap, (nd, y))
        return [None if d is None else sc.unscale(d) for d in dist]

    def scaled_rows(self, alpha, sources) -> tuple[IntScale, np.ndarray]:
        """Distances times D**m as an integer-valued array (one row per source).

        scipy's Dijkstra is used when every path sum stays below 2**53, where
        float64 holds integers exactly; otherwise a pure-Python run on ints.
        Unreachable entries are -1.
        """
        sources = list(sources)
        sc, wts = self._scaled_weights(tuple(alpha))
        if sum(wts) < _EXACT_FLOAT_INT:
            rows = [e.u for e in self.edges] + [e.v for e in self.edges]
            cols = [e.v for e in self.edges] + [e.u for e in self.edges]
            mat = csr_matrix((np.array(wts + wts, dtype=np.float64), (rows, cols)), shape=(len(self), len(self)))
            D = _csgraph_dijkstra(mat, directed=True, indices=sources)
            D[~np.isfinite(D)] = -1
            return sc, D.astype(np.int64)
        out = np.empty((len(sources), len(self)), dtype=object)
        for r, s in enumerate(sources):
            row = self.distances_from(alpha, s)
            out[r] = [-1 if d is None else int(d * sc.unit) for d in row]
        return sc, out

    def distance_rows(self, alpha, sources) -> dict[int, list[Fraction | None]]:
        sources = list(sources)
        sc, D = self.scaled_rows(alpha, sources)
        return {s: [None if x < 0 else sc.unscale(int(x)) for x in row] for s, row in zip(sources, D)}


@lru_cache(maxsize=32)
def build_level_graph(spec: FractalSpec, m: int) -> LevelGraph:
    return LevelGraph(spec, m)


def _cid(g: LevelGraph, v) -> int:
    if isinstance(v, VertexId):
        if v.level != g.m:
            raise ValueError(f"vertex from level {v.level} used on level {g.m}")
        return v.class_id
    return int(v)


def shortest_distance(g: LevelGraph, alpha, a, b, prefix: tuple | None = None) -> Fraction:
    a, b = _cid(g, a), _cid(g, b)
    if a == b:
        return Fraction(0)
    d = g.distances_from(alpha, a, prefix)[b]
    if d is None:
        raise ValueError("target unreachable")
    return d


def cell_diameter(g: LevelGraph, alpha, word) -> Fraction:
    """Max distance in the full graph between level-m vertices of cell ``word``."""
    cell = sorted(g.level.cell(tuple(word)))
    sc, D = g.scaled_rows(alpha, cell)
    sub = D[:, cell]
    if (sub < 0).any():
        raise ValueError("graph not connected")
    return sc.unscale(int(sub.max()))


def connectedness(g: LevelGraph) -> bool:
    """Connectivity of V^(m) through cell edges (nonempty words) for m >= 1.

    The empty-word edges of V^(0) are left out: they would join any two
    boundary points and hide a disconnected (Cantor-like) fractal.
    """
    if len(g) <= 1:
        return True
    use_all = g.m == 0
    seen = {0}
    stack = [0]
    while stack:
        x = stack.pop()
        for y, ei in g.adj[x]:
            if (use_all or g.edges[ei].word) and y not in seen:
                seen.add(y)
                stack.append(y)
    return len(seen) == len(g)


def to_dot(g: LevelGraph, alpha=None) -> str:
    k = g.spec.k
    lines = [f'graph "{g.spec.name}_level{g.m}" {{']
    for c in range(len(g)):
        lines.append(f'  v{c} [label="{g.level.label_str(c)}"];')
    for e in g.edges:
        w = format_word(e.word, k)
        weight = fmt(e.weight(alpha)) if alpha is not None else f"a_{w}"
        lines.append(f'  v{e.u} -- v{e.v} [label="({e.iota[0]},{e.iota[1]})/{w}/{weight}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
