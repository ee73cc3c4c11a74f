"""Labeled paths on V^(m), sums along paths, insertion and transfer operators.

A path step is labeled by the ordered boundary pair ``iota`` it realizes and
the word ``w`` of the cell it lies in, so the step from ``Q_{h-1}`` to
``Q_h`` is the image of ``(P_iota[0], P_iota[1])`` under ``psi_w``.  A weak
step (``Q_{h-1} == Q_h``) has label ``None`` and weight 0.

``Gamma`` values are plain dicts mapping each ordered pair to a strict
level-1 path between the corresponding boundary points.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .fractal import FractalSpec, format_word, level
from .graph import build_level_graph
from .rational import fmt, word_weight


class PathLimitExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class Step:
    iota: tuple[int, int] | None
    word: tuple | None

    @property
    def weak(self) -> bool:
        return self.iota is None


@dataclass(frozen=True)
class PathRecord:
    spec: FractalSpec
    m: int
    vertices: tuple[int, ...]
    steps: tuple[Step, ...]

    @property
    def n(self) -> int:
        return len(self.steps)

    @property
    def start(self) -> int:
        return self.vertices[0]

    @property
    def end(self) -> int:
        return self.vertices[-1]

    @property
    def strict(self) -> bool:
        return len(set(self.vertices)) == len(self.vertices)

    @property
    def strong(self) -> bool:
        return all(s.weak or len(s.word) > 0 for s in self.steps)

    def labels(self) -> list[tuple[int, int]]:
        return [s.iota for s in self.steps if not s.weak]

    def weights(self, alpha) -> list[Fraction]:
        return [Fraction(0) if s.weak else word_weight(alpha, s.word) for s in self.steps]

    def format(self, alpha=None) -> str:
        lv = level(self.spec, self.m)
        k = self.spec.k
        out = [lv.label_str(self.vertices[0])]
        for s, v in zip(self.steps, self.vertices[1:]):
            if s.weak:
                out.append(f"-(weak)-> {lv.label_str(v)}")
                continue
            w = format_word(s.word, k)
            wt = fmt(word_weight(alpha, s.word)) if alpha is not None else f"a_{w}"
            out.append(f"-({s.iota[0]},{s.iota[1]},{w},{wt})-> {lv.label_str(v)}")
        return " ".join(out)

    def addresses(self) -> list[str]:
        lv = level(self.spec, self.m)
        return [lv.label_str(v) for v in self.vertices]


def path_from_vertices(spec: FractalSpec, m: int, vertices: Iterable[int]) -> PathRecord:
    """Label a vertex sequence; raises ValueError if consecutive vertices are not adjacent."""
    g = build_level_graph(spec, m)
    vertices = tuple(vertices)
    if not vertices:
        raise ValueError("a path needs at least one vertex")
    steps = []
    for a, b in zip(vertices, vertices[1:]):
        if a == b:
            steps.append(Step(None, None))
            continue
        e = g.edge_between(a, b)
        if e is None:
            raise ValueError(f"{g.level.label_str(a)} and {g.level.label_str(b)} are not adjacent")
        steps.append(Step(e.oriented(a), e.word))
    return PathRecord(spec, m, vertices, tuple(steps))


def path_from_addresses(spec: FractalSpec, m: int, addresses) -> PathRecord:
    lv = level(spec, m)
    return path_from_vertices(spec, m, [lv.cid(a) for a in addresses])


def boundary_path(spec: FractalSpec, iota, m: int = 1) -> PathRecord:
    """The one-step path (P_j1, P_j2)."""
    lv = level(spec, m)
    return path_from_vertices(spec, m, [lv.boundary(iota[0]), lv.boundary(iota[1])])


def reverse(path: PathRecord) -> PathRecord:
    steps = tuple(Step(None, None) if s.weak else Step((s.iota[1], s.iota[0]), s.word)
                  for s in reversed(path.steps))
    return PathRecord(path.spec, path.m, path.vertices[::-1], steps)


def compose(p: PathRecord, q: PathRecord) -> PathRecord:
    if p.m != q.m or p.end != q.start:
        raise ValueError("paths do not meet")
    return PathRecord(p.spec, p.m, p.vertices + q.vertices[1:], p.steps + q.steps)


def lift(path: PathRecord, m: int) -> PathRecord:
    """Same path, vertices re-expressed at a deeper level ``m``."""
    src, dst = level(path.spec, path.m), level(path.spec, m)
    vs = tuple(dst.cid(src.members[v][0]) for v in path.vertices)
    return PathRecord(path.spec, m, vs, path.steps)


# ---------------------------------------------------------------------------
# sums along paths


def jhat(N: int) -> list[tuple[int, int]]:
    return [(a, b) for a in range(1, N + 1) for b in range(1, N + 1) if a != b]


def zero_vector(N: int) -> dict:
    return {i: Fraction(0) for i in jhat(N)}


def basis(N: int, iota) -> dict:
    x = zero_vector(N)
    x[tuple(iota)] = Fraction(1)
    return x


def H(x: dict) -> Fraction:
    return sum(x.values(), Fraction(0))


def sum_along(path: PathRecord, alpha) -> Fraction:
    return sum(path.weights(alpha), Fraction(0))


def hat_sigma(path: PathRecord, alpha) -> dict:
    x = zero_vector(path.spec.N)
    for s in path.steps:
        if not s.weak:
            x[s.iota] += word_weight(alpha, s.word)
    return x


# ---------------------------------------------------------------------------
# Gamma, insertion and transfer operators


def check_gamma_path(spec: FractalSpec, iota, path: PathRecord) -> None:
    """Raise ValueError unless ``path`` is a strict level-1 path from P_j1 to P_j2."""
    lv = level(spec, 1)
    if path.m != 1:
        raise ValueError("gamma paths live in V^(1)")
    if path.start != lv.boundary(iota[0]) or path.end != lv.boundary(iota[1]):
        raise ValueError(f"path for {iota} has wrong endpoints")
    if not path.strict or any(s.weak for s in path.steps):
        raise ValueError(f"path for {iota} is not strict")


def trivial_gamma(spec: FractalSpec) -> dict:
    return {iota: boundary_path(spec, iota) for iota in jhat(spec.N)}


def insert(gamma: dict, path: PathRecord) -> PathRecord:
    """Replace every step psi_w(P_iota) by psi_w(gamma[iota]); result is one level deeper."""
    spec = path.spec
    src = level(spec, path.m)
    lv1 = level(spec, 1)
    dst = level(spec, path.m + 1)
    vertices = [dst.cid(src.members[path.vertices[0]][0])]
    steps: list[Step] = []
    for s in path.steps:
        if s.weak:
            vertices.append(vertices[-1])
            steps.append(s)
            continue
        sub = gamma[s.iota]
        imgs = [lv1.image(s.word, v, dst) for v in sub.vertices]
        if imgs[0] != vertices[-1]:
            raise ValueError("gamma path does not start at the step's first vertex")
        vertices.extend(imgs[1:])
        steps.extend(Step(t.iota, s.word + t.word) for t in sub.steps)
    return PathRecord(spec, path.m + 1, tuple(vertices), tuple(steps))


def transfer_matrix(gamma: dict, alpha) -> dict:
    """Row iota holds the coefficients of T_gamma(e_iota)."""
    rows = {}
    for iota, p in gamma.items():
        rows[iota] = hat_sigma(p, alpha)
    return rows


def transfer_apply(gamma: dict, x: dict, alpha) -> dict:
    T = transfer_matrix(gamma, alpha)
    out = {i: Fraction(0) for i in x}
    for iota, coef in x.items():
        if coef == 0:
            continue
        for j, t in T[iota].items():
            if t:
                out[j] += coef * t
    return out


# ---------------------------------------------------------------------------
# enumeration


def enumerate_strict_paths(spec: FractalSpec, iota, limit: int | None = 100_000) -> list[PathRecord]:
    """All simple level-1 paths from P_j1 to P_j2, lexicographic by vertex ids."""
    g = build_level_graph(spec, 1)
    src, dst = g.boundary(iota[0]), g.boundary(iota[1])
    nbrs = [sorted(y for y, _ in g.adj[x]) for x in range(len(g))]
    found: list[tuple[int, ...]] = []
    stack = [src]
    on_path = {src}

    def dfs(x: int) -> None:
        for y in nbrs[x]:
            if y in on_path:
                continue
            if y == dst:
                found.append(tuple(stack) + (y,))
                if limit is not None and len(found) > limit:
                    raise PathLimitExceeded(f"more than {limit} strict paths for {iota}")
                continue
            stack.append(y)
            on_path.add(y)
            dfs(y)
            stack.pop()
            on_path.discard(y)

    dfs(src)
    return [path_from_vertices(spec, 1, vs) for vs in found]
