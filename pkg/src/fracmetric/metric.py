"""Finite-level path distances, chain distances and scaling reports.

Everything here is a level-m truncation: path distances use only edges of
V^(m), chain distances only words of length <= m.  Both are nonincreasing
in m and bound the limiting objects from above.
"""
from __future__ import annotations

import heapq
import itertools
import json
from dataclasses import dataclass
from fractions import Fraction

from .fractal import FractalSpec, VertexId, format_word, level, parse_address, words_upto
from .graph import build_level_graph, cell_diameter, shortest_distance
from .rational import IntScale, fmt, fmt_decimal, polyratio, word_weight


def _as_cid(spec: FractalSpec, m: int, a) -> int:
    """Accept a VertexId, a class id, an address tuple or an address string."""
    if isinstance(a, VertexId):
        if a.level == m:
            return a.class_id
        a = level(spec, a.level).members[a.class_id][0]
    if isinstance(a, int):
        return a
    if isinstance(a, str):
        a = parse_address(a, spec)
    return level(spec, m).cid(a)


def path_distance(spec: FractalSpec, alpha, m: int, a, b) -> Fraction:
    alpha = polyratio(alpha, spec.k)
    g = build_level_graph(spec, m)
    return shortest_distance(g, alpha, _as_cid(spec, m, a), _as_cid(spec, m, b))


class _ChainGraph:
    """Words of length <= m as nodes; two words are adjacent when their copies meet.

    Copies of comparable words are nested.  Copies of incomparable words meet
    exactly in their common cell points, read off the level-m classes.
    """

    def __init__(self, spec: FractalSpec, m: int):
        self.spec, self.m = spec, m
        lv = level(spec, m)
        self.words = list(words_upto(spec.k, m))
        self.index = {w: n for n, w in enumerate(self.words)}
        by_point: dict[int, list[int]] = {}
        for n, w in enumerate(self.words):
            for j in range(1, spec.N + 1):
                by_point.setdefault(lv.cid((w, j)), []).append(n)
        nbrs = [set() for _ in self.words]
        for ws in by_point.values():
            for a, b in itertools.combinations(ws, 2):
                nbrs[a].add(b)
                nbrs[b].add(a)
        for n, w in enumerate(self.words):
            for l in range(len(w)):
                p = self.index[w[:l]]
                nbrs[n].add(p)
                nbrs[p].add(n)
        self.nbrs = [sorted(s) for s in nbrs]
        # words whose copy contains a given level-m point
        self.containing = []
        for ms in lv.members:
            ws = {self.index[u[:l]] for u, _ in ms for l in range(m + 1)}
            self.containing.append(sorted(ws))

    def rows(self, alpha, sources) -> dict[int, list[Fraction]]:
        sc = IntScale(alpha, self.m)
        cost = [sc.scaled(w) for w in self.words]
        out = {}
        for a in sources:
            dist = [None] * len(self.words)
            heap = []
            for n in self.containing[a]:
                dist[n] = cost[n]
                heap.append((cost[n], n))
            heapq.heapify(heap)
            while heap:
                d, x = heapq.heappop(heap)
                if d != dist[x]:
                    continue
                for y in self.nbrs[x]:
                    nd = d + cost[y]
                    if dist[y] is None or nd < dist[y]:
                        dist[y] = nd
                        heapq.heappush(heap, (nd, y))
            row = []
            for b, ws in enumerate(self.containing):
                row.append(Fraction(0) if b == a else sc.unscale(min(dist[n] for n in ws)))
            out[a] = row
        return out


_chain_cache: dict = {}


def _chain_graph(spec: FractalSpec, m: int) -> _ChainGraph:
    key = (spec, m)
    if key not in _chain_cache:
        _chain_cache[key] = _ChainGraph(spec, m)
    return _chain_cache[key]


def chain_distance(spec: FractalSpec, alpha, m: int, a, b) -> Fraction:
    """Cheapest prechain of copies (words of length <= m) from ``a`` to ``b``."""
    alpha = polyratio(alpha, spec.k)
    a, b = _as_cid(spec, m, a), _as_cid(spec, m, b)
    return _chain_graph(spec, m).rows(alpha, [a])[a][b]


@dataclass
class ComparisonReport:
    m: int
    pairs: int
    violations: list
    max_ratio: Fraction | None

    @property
    def ok(self) -> bool:
        return not self.violations


def compare_path_chain(spec: FractalSpec, alpha, m: int, pairs=None) -> ComparisonReport:
    """Check chain <= path on each pair and record the largest path/chain ratio.

    ``pairs`` defaults to all unordered pairs of V^(m).
    """
    alpha = polyratio(alpha, spec.k)
    g = build_level_graph(spec, m)
    if pairs is None:
        pairs = list(itertools.combinations(range(len(g)), 2))
    else:
        pairs = [(_as_cid(spec, m, a), _as_cid(spec, m, b)) for a, b in pairs]
    sources = sorted({a for a, _ in pairs})
    prow = g.distance_rows(alpha, sources)
    crow = _chain_graph(spec, m).rows(alpha, sources)
    violations = []
    best = None
    for a, b in pairs:
        p, c = prow[a][b], crow[a][b]
        if c > p:
            violations.append((a, b, c, p))
        if c > 0:
            r = p / c
            if best is None or r > best:
                best = r
    return ComparisonReport(m, len(pairs), violations, best)


@dataclass
class ScalingRow:
    word: tuple
    alpha_w: Fraction
    diameter: Fraction
    ratio: Fraction


@dataclass
class ScalingReport:
    spec_name: str
    k: int
    m: int
    total_diameter: Fraction
    rows: list

    @property
    def min_ratio(self) -> Fraction:
        return min(r.ratio for r in self.rows)

    @property
    def max_ratio(self) -> Fraction:
        return max(r.ratio for r in self.rows)

    def to_json(self) -> dict:
        return {
            "fractal": self.spec_name,
            "level": self.m,
            "total_diameter": fmt(self.total_diameter),
            "rows": [{"word": format_word(r.word, self.k), "alpha_w": fmt(r.alpha_w),
                      "diameter": fmt(r.diameter), "ratio": fmt(r.ratio),
                      "ratio_decimal": fmt_decimal(r.ratio)} for r in self.rows],
            "min_ratio": fmt(self.min_ratio),
            "max_ratio": fmt(self.max_ratio),
        }

    def to_text(self) -> str:
        table = [("word", "alpha_w", "level-m diameter", "ratio", "ratio~")]
        for r in self.rows:
            table.append((format_word(r.word, self.k), fmt(r.alpha_w), fmt(r.diameter),
                          fmt(r.ratio), fmt_decimal(r.ratio)))
        widths = [max(len(row[c]) for row in table) for c in range(5)]
        lines = [f"{self.spec_name}: level {self.m}, level-m diameter {fmt(self.total_diameter)}"]
        lines += ["  ".join(cell.ljust(wd) for cell, wd in zip(row, widths)).rstrip() for row in table]
        lines.append(f"min ratio {fmt(self.min_ratio)} ({fmt_decimal(self.min_ratio)}), "
                     f"max ratio {fmt(self.max_ratio)} ({fmt_decimal(self.max_ratio)})")
        return "\n".join(lines)

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2)


def scaling_report(spec: FractalSpec, alpha, m: int, max_cell_depth: int) -> ScalingReport:
    """Cell diameters against alpha_w times the whole diameter, all at level m."""
    if not 0 <= max_cell_depth <= m:
        raise ValueError("cell depth must lie in 0..m")
    alpha = polyratio(alpha, spec.k)
    g = build_level_graph(spec, m)
    sc, D = g.scaled_rows(alpha, range(len(g)))
    total = sc.unscale(int(D.max()))
    rows = []
    for w in words_upto(spec.k, max_cell_depth):
        cell = sorted(g.level.cell(w))
        diam = sc.unscale(int(D[cell][:, cell].max()))
        aw = word_weight(alpha, w)
        rows.append(ScalingRow(w, aw, diam, diam / (aw * total)))
    rows.sort(key=lambda r: (len(r.word), r.word))
    return ScalingReport(spec.name, spec.k, m, total, rows)


__all__ = [
    "path_distance", "chain_distance", "compare_path_chain", "scaling_report",
    "ScalingReport", "ScalingRow", "ComparisonReport", "cell_diameter",
]
