"""Combinatorial description of finitely ramified self-similar fractals.

A fractal is given by ``k`` cell maps, ``N`` boundary points (the fixed points
of the first ``N`` maps) and a list of glue rules ``i.j = i'.j'`` saying that
the image of boundary point ``j`` under map ``i`` coincides with the image of
boundary point ``j'`` under map ``i'``.  Everything downstream works on the
finite vertex sets V^(m) built here.

Words are tuples of 1-based cell indices; an address is ``(word, j)`` and
denotes the image of boundary point ``j`` under the composite map of ``word``.
"""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Iterator

Word = tuple  # tuple[int, ...]
Address = tuple  # tuple[Word, int]


class SpecError(ValueError):
    """Raised for malformed spec files; carries the offending line number."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


@dataclass(frozen=True)
class FractalSpec:
    name: str
    k: int
    N: int
    glues: tuple  # sorted tuple of ((i, j), (i2, j2)) with (i, j) < (i2, j2)

    def __post_init__(self):
        norm = tuple(sorted(tuple(sorted(g)) for g in self.glues))
        object.__setattr__(self, "glues", norm)

    @property
    def jhat(self) -> list[tuple[int, int]]:
        """Ordered pairs of distinct boundary indices, in lexicographic order."""
        return [(a, b) for a in range(1, self.N + 1) for b in range(1, self.N + 1) if a != b]


# ---------------------------------------------------------------------------
# words


def format_word(word: Word, k: int) -> str:
    if not word:
        return "e"
    if k <= 9:
        return "".join(str(i) for i in word)
    return ".".join(str(i) for i in word)


def parse_word(text: str, k: int) -> Word:
    text = text.strip()
    if text in ("e", ""):
        return ()
    if k <= 9:
        if not text.isdigit():
            raise ValueError(f"bad word {text!r}")
        word = tuple(int(c) for c in text)
    else:
        word = tuple(int(c) for c in text.split("."))
    if any(not 1 <= i <= k for i in word):
        raise ValueError(f"word {text!r} uses a cell index outside 1..{k}")
    return word


def format_address(addr: Address, k: int) -> str:
    word, j = addr
    return f"{format_word(word, k)}.{j}"


def parse_address(text: str, spec: FractalSpec) -> Address:
    """Parse ``<word>.<j>``; ``e.j`` is the boundary point P_j."""
    word_text, sep, j_text = text.strip().rpartition(".")
    if not sep or not j_text.isdigit():
        raise ValueError(f"bad address {text!r}, expected <word>.<j>")
    j = int(j_text)
    if not 1 <= j <= spec.N:
        raise ValueError(f"boundary index {j} outside 1..{spec.N}")
    return parse_word(word_text, spec.k), j


def words(k: int, m: int) -> Iterator[Word]:
    return itertools.product(range(1, k + 1), repeat=m)


def words_upto(k: int, m: int) -> Iterator[Word]:
    for length in range(m + 1):
        yield from words(k, length)


def reduce_address(addr: Address) -> Address:
    """Strip trailing fixed-point letters: (w j, j) and (w, j) are the same point."""
    word, j = addr
    while word and word[-1] == j:
        word = word[:-1]
    return word, j


def lift_address(addr: Address, m: int) -> Address:
    word, j = addr
    if len(word) > m:
        raise ValueError(f"address of length {len(word)} cannot be lifted to level {m}")
    return word + (j,) * (m - len(word)), j


# ---------------------------------------------------------------------------
# spec file parsing

_GLUE_RE = re.compile(r"^(\d+)\.(\d+)\s*=\s*(\d+)\.(\d+)$")


def parse_spec(text: str) -> FractalSpec:
    """Parse the line-oriented spec format. Axioms are checked by validate_spec."""
    name = k = N = None
    raw_glues: list[tuple[tuple, tuple, int]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        keyword, _, rest = line.partition(" ")
        rest = rest.strip()
        if keyword == "fractal":
            if not rest:
                raise SpecError("missing fractal name", lineno)
            name = rest
        elif keyword in ("cells", "boundary"):
            if not rest.isdigit():
                raise SpecError(f"{keyword} expects a positive integer", lineno)
            if keyword == "cells":
                k = int(rest)
            else:
                N = int(rest)
        elif keyword == "glue":
            mt = _GLUE_RE.match(rest)
            if mt is None:
                raise SpecError(f"bad glue {rest!r}, expected i.j = i'.j'", lineno)
            i1, j1, i2, j2 = (int(x) for x in mt.groups())
            raw_glues.append(((i1, j1), (i2, j2), lineno))
        else:
            raise SpecError(f"unknown keyword {keyword!r}", lineno)
    if name is None or k is None or N is None:
        raise SpecError("spec needs 'fractal', 'cells' and 'boundary' lines")
    if k < 2:
        raise SpecError("cells must be at least 2")
    if not 2 <= N <= k:
        raise SpecError("boundary must satisfy 2 <= N <= cells")
    seen = set()
    for a, b, lineno in raw_glues:
        for i, j in (a, b):
            if not 1 <= i <= k or not 1 <= j <= N:
                raise SpecError(f"glue address {i}.{j} out of range", lineno)
        if a[0] == b[0]:
            raise SpecError(f"non-injective-glue: {a[0]}.{a[1]} = {b[0]}.{b[1]} glues a cell to itself", lineno)
        key = tuple(sorted((a, b)))
        if key in seen:
            raise SpecError(f"duplicate glue {a[0]}.{a[1]} = {b[0]}.{b[1]}", lineno)
        seen.add(key)
    return FractalSpec(name, k, N, tuple((a, b) for a, b, _ in raw_glues))


def format_spec(spec: FractalSpec) -> str:
    lines = [f"fractal {spec.name}", f"cells {spec.k}", f"boundary {spec.N}"]
    lines += [f"glue {a[0]}.{a[1]} = {b[0]}.{b[1]}" for a, b in spec.glues]
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# identification closure


class _UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            # smaller root wins so the partition does not depend on union order
            if ra < rb:
                self.parent[rb] = ra
            else:
                self.parent[ra] = rb


@dataclass(frozen=True)
class VertexId:
    level: int
    class_id: int


@dataclass(eq=False)
class Level:
    """The identification classes of all N*k^m addresses at level m.

    Class ids are assigned in order of the lexicographically smallest member
    address, so they are independent of the order in which glues are applied.
    """

    spec: FractalSpec
    m: int
    glue_order: tuple | None = None
    class_of: dict = field(init=False, repr=False)
    members: list = field(init=False, repr=False)

    def __post_init__(self):
        spec, m = self.spec, self.m
        all_words = list(words(spec.k, m))
        index = {w: n for n, w in enumerate(all_words)}

        def idx(addr: Address) -> int:
            return index[addr[0]] * spec.N + addr[1] - 1

        uf = _UnionFind(len(all_words) * spec.N)
        glues = self.glue_order if self.glue_order is not None else spec.glues
        # a level-1 glue under prefix u (|u| = l < m), padded to level m by the fixed-point rule
        for length in range(m):
            for u in words(spec.k, length):
                pad = m - length - 1
                for (i1, j1), (i2, j2) in glues:
                    a = (u + (i1,) + (j1,) * pad, j1)
                    b = (u + (i2,) + (j2,) * pad, j2)
                    uf.union(idx(a), idx(b))
        class_of: dict = {}
        members: list = []
        root_to_class: dict = {}
        for w in all_words:
            for j in range(1, spec.N + 1):
                addr = (w, j)
                root = uf.find(idx(addr))
                cid = root_to_class.get(root)
                if cid is None:
                    cid = root_to_class[root] = len(members)
                    members.append([])
                class_of[addr] = cid
                members[cid].append(addr)
        self.class_of = class_of
        self.members = [tuple(ms) for ms in members]

    def __len__(self) -> int:
        return len(self.members)

    def vertex(self, addr: Address) -> VertexId:
        return VertexId(self.m, self.cid(addr))

    def cid(self, addr: Address) -> int:
        word, j = addr
        if len(word) != self.m:
            addr = lift_address(addr, self.m)
        return self.class_of[addr]

    def boundary(self, j: int) -> int:
        return self.class_of[((j,) * self.m, j)]

    def label(self, cid: int) -> Address:
        """Shortest address of a class (after stripping fixed-point suffixes)."""
        reduced = {reduce_address(a) for a in self.members[cid]}
        return min(reduced, key=lambda a: (len(a[0]), a[0], a[1]))

    def label_str(self, cid: int) -> str:
        return format_address(self.label(cid), self.spec.k)

    def cell(self, word: Word) -> set[int]:
        if len(word) > self.m:
            raise ValueError(f"word of length {len(word)} exceeds level {self.m}")
        n = len(word)
        return {cid for cid, ms in enumerate(self.members) if any(a[0][:n] == word for a in ms)}

    def image(self, word: Word, cid: int, target: "Level") -> int:
        """Class at ``target`` of psi_word applied to vertex ``cid`` of this level."""
        w, j = self.members[cid][0]
        return target.cid((word + w, j))


@lru_cache(maxsize=64)
def level(spec: FractalSpec, m: int) -> Level:
    if m < 0:
        raise ValueError("level must be nonnegative")
    return Level(spec, m)


def canonicalize(spec: FractalSpec, m: int, addr: Address) -> VertexId:
    if len(addr[0]) != m:
        raise ValueError(f"address word has length {len(addr[0])}, expected level {m}")
    return level(spec, m).vertex(addr)


def vertex_count(spec: FractalSpec, m: int) -> int:
    return len(level(spec, m))


def cell_vertices(spec: FractalSpec, m: int, word: Word) -> set[VertexId]:
    return {VertexId(m, c) for c in level(spec, m).cell(tuple(word))}


# ---------------------------------------------------------------------------
# validation


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str = ""


@dataclass
class ValidationReport:
    checks: list[CheckResult]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def check(self, name: str) -> CheckResult:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def __str__(self) -> str:
        lines = []
        for c in self.checks:
            status = "pass" if c.passed else "FAIL"
            lines.append(f"{status:4}  {c.name}" + (f"  ({c.detail})" if c.detail else ""))
        lines.append("overall: " + ("pass" if self.passed else "FAIL"))
        return "\n".join(lines)


def _components(n: int, edges: Iterable[tuple[int, int]]) -> int:
    uf = _UnionFind(n)
    for a, b in edges:
        uf.union(a, b)
    return len({uf.find(x) for x in range(n)})


def validate_spec(spec: FractalSpec) -> ValidationReport:
    """Check the structural axioms; failures are reported, never raised."""
    checks = []

    bad = [g for g in spec.glues if g[0][0] == g[1][0]]
    checks.append(CheckResult("glue-cells-distinct", not bad,
                              "; ".join(f"{a[0]}.{a[1]}={b[0]}.{b[1]}" for a, b in bad)))
    out_of_range = [g for g in spec.glues for i, j in g if not (1 <= i <= spec.k and 1 <= j <= spec.N)]
    checks.append(CheckResult("indices-in-range", not out_of_range and 2 <= spec.N <= spec.k))
    if out_of_range or not 2 <= spec.N <= spec.k:
        return ValidationReport(checks)

    lv = Level(spec, 1)

    # psi_i injective: a class never holds two addresses of the same cell
    collapsed = [lv.label_str(c) for c, ms in enumerate(lv.members)
                 if len({a[0] for a in ms}) < len(ms)]
    checks.append(CheckResult("cell-maps-injective", not collapsed,
                              "collapsed points: " + ", ".join(collapsed) if collapsed else ""))

    # a boundary point is only ever reached as its own fixed point
    touched = []
    for h in range(1, spec.N + 1):
        ms = lv.members[lv.class_of[((h,), h)]]
        if len(ms) > 1:
            touched.append(f"P{h}")
    checks.append(CheckResult("boundary-fixed-points-only", not touched,
                              "boundary points glued: " + ", ".join(touched) if touched else ""))

    over = []
    for i1, i2 in itertools.combinations(range(1, spec.k + 1), 2):
        shared = lv.cell((i1,)) & lv.cell((i2,))
        if len(shared) > 1:
            over.append(f"cells {i1},{i2} share {len(shared)} points")
    checks.append(CheckResult("cells-meet-in-at-most-one-point", not over, "; ".join(over)))

    edges = []
    for w in words(spec.k, 1):
        ids = [lv.class_of[(w, j)] for j in range(1, spec.N + 1)]
        edges += [(a, b) for a, b in zip(ids, ids[1:])]
    ncomp = _components(len(lv), edges)
    checks.append(CheckResult("connected", ncomp == 1, f"{ncomp} components" if ncomp != 1 else ""))
    return ValidationReport(checks)
