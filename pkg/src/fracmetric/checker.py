"""Decide uniform positivity of the transfer-operator products, with certificates.

For a weight vector ``u`` on ordered boundary pairs, the Bellman operator is

    phi(u)(iota) = min over strict level-1 paths p from P_j1 to P_j2 of
                   sum_h alpha_{w(h, p)} * u(iota(h, p))

and ``g_n = phi^n(1)`` is the smallest value of ``H(T_{gamma_1} ... T_{gamma_n} e_iota)``
over all choices of gamma (a gamma picks one path per pair independently, so
the minimum splits per pair).  The polyratio is uniformly positive iff ``g_n``
stays bounded away from zero.

Certificates:

* ``ProvenUP(u)``: ``u > 0`` with ``phi(u) >= u``.  Monotonicity and
  homogeneity give ``g_n >= u / max(u)`` for every n.
* ``ProvenNotUP(S, policy, v, lam)``: a fixed path per pair in S, all of whose
  labels stay in S, with transfer matrix ``M`` satisfying ``M v <= lam v`` for
  ``v > 0`` and ``lam < 1``.  Repeating that gamma drives H to zero like lam**n.

phi is evaluated by Dijkstra on the level-1 graph with edge cost
``alpha_w * u(label)``; nonnegative costs make shortest walks simple paths.
"""
from __future__ import annotations

import enum
import heapq
import json
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .fractal import FractalSpec, level, parse_address
from .graph import build_level_graph
from .paths import PathRecord, check_gamma_path, hat_sigma, jhat, path_from_vertices
from .rational import fmt, polyratio, solve_exact, word_weight

DEFAULT_MAX_DEPTH = 256
_CHECKPOINTS = (4, 8, 16, 32, 64, 128, 256)


class _Level1:
    """Level-1 graph arranged for repeated Bellman sweeps."""

    def __init__(self, spec: FractalSpec, alpha):
        g = build_level_graph(spec, 1)
        self.spec = spec
        self.g = g
        self.n = len(g)
        self.pairs = jhat(spec.N)
        self.bnd = {j: g.boundary(j) for j in range(1, spec.N + 1)}
        self.alpha = alpha
        self.wx = [word_weight(alpha, e.word) for e in g.edges]
        self.wf = [float(w) for w in self.wx]
        self.arcs = [[(y, ei, g.edges[ei].oriented(x)) for y, ei in sorted(g.adj[x])] for x in range(self.n)]
        self.direct = {(a, b): g._lookup[(min(self.bnd[a], self.bnd[b]), max(self.bnd[a], self.bnd[b]))]
                       for a, b in self.pairs}

    def dijkstra(self, src: int, u: dict, exact: bool, allowed=None, skip_edge=None):
        wts = self.wx if exact else self.wf
        zero = Fraction(0) if exact else 0.0
        dist = {src: zero}
        pred: dict[int, int] = {}
        heap = [(zero, src)]
        done = set()
        while heap:
            d, x = heapq.heappop(heap)
            if x in done:
                continue
            done.add(x)
            for y, ei, lab in self.arcs[x]:
                if ei == skip_edge or (allowed is not None and lab not in allowed):
                    continue
                nd = d + wts[ei] * u[lab]
                if y not in dist or nd < dist[y]:
                    dist[y] = nd
                    pred[y] = x
                    heapq.heappush(heap, (nd, y))
        return dist, pred

    def _trace(self, pred, src, dst) -> tuple[int, ...]:
        vs = [dst]
        while vs[-1] != src:
            vs.append(pred[vs[-1]])
        return tuple(reversed(vs))

    def phi(self, u: dict, exact: bool = True, with_paths: bool = False):
        out = {}
        paths = {}
        for a in range(1, self.spec.N + 1):
            src = self.bnd[a]
            dist, pred = self.dijkstra(src, u, exact)
            for b in range(1, self.spec.N + 1):
                if b == a:
                    continue
                out[(a, b)] = dist[self.bnd[b]]
                if with_paths:
                    paths[(a, b)] = self._trace(pred, src, self.bnd[b])
        return (out, paths) if with_paths else out

    def best_path(self, iota, u: dict, exact: bool, allowed=None, nontrivial=False):
        """Cheapest path for one pair, optionally avoiding the direct boundary edge."""
        src, dst = self.bnd[iota[0]], self.bnd[iota[1]]
        skip = self.direct[iota] if nontrivial else None
        dist, pred = self.dijkstra(src, u, exact, allowed=allowed, skip_edge=skip)
        if dst not in dist:
            return None, None
        return dist[dst], self._trace(pred, src, dst)

    def row(self, vertices) -> dict:
        p = path_from_vertices(self.spec, 1, vertices)
        return hat_sigma(p, self.alpha)


# ---------------------------------------------------------------------------
# verdicts


class MetricStatus(enum.Enum):
    METRIC = "METRIC"
    NOT_METRIC = "NOT_METRIC"
    UNDECIDED = "UNDECIDED"


def _pair_key(iota) -> str:
    return f"({iota[0]},{iota[1]})"


def _parse_pair(text: str) -> tuple[int, int]:
    a, b = text.strip().strip("()").split(",")
    return int(a), int(b)


@dataclass
class ProvenUP:
    u: dict

    @property
    def c3(self) -> Fraction:
        """Witnessed uniform lower bound min(u) / max(u)."""
        return min(self.u.values()) / max(self.u.values())

    def to_json(self) -> dict:
        return {"kind": "up", "u": {_pair_key(i): fmt(x) for i, x in sorted(self.u.items())},
                "c3": fmt(self.c3)}

    def summary(self) -> str:
        return "ProvenUP"


@dataclass
class ProvenNotUP:
    S: list
    policy: dict  # pair -> PathRecord
    v: dict
    lam: Fraction

    def to_json(self) -> dict:
        return {
            "kind": "notup",
            "S": [_pair_key(i) for i in self.S],
            "policy": {_pair_key(i): self.policy[i].addresses() for i in self.S},
            "v": {_pair_key(i): fmt(self.v[i]) for i in self.S},
            "lambda": fmt(self.lam),
        }

    def summary(self) -> str:
        return f"ProvenNotUP λ={fmt(self.lam)}"


@dataclass
class Undecided:
    depth: int
    floor: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"kind": "undecided", "depth": self.depth,
                "floor": {_pair_key(i): x for i, x in sorted(self.floor.items())}}

    def summary(self) -> str:
        lo = min(self.floor.values()) if self.floor else float("nan")
        return f"Undecided depth={self.depth} min g={lo:.6g}"


Verdict = ProvenUP | ProvenNotUP | Undecided


def metric_verdict(verdict) -> MetricStatus:
    if isinstance(verdict, ProvenUP):
        return MetricStatus.METRIC
    if isinstance(verdict, ProvenNotUP):
        return MetricStatus.NOT_METRIC
    return MetricStatus.UNDECIDED


# ---------------------------------------------------------------------------
# operations


def phi_apply(spec: FractalSpec, alpha, u: dict) -> dict:
    alpha = polyratio(alpha, spec.k)
    ctx = _Level1(spec, alpha)
    return ctx.phi({i: Fraction(u[i]) for i in ctx.pairs})


def dp_iterate(spec: FractalSpec, alpha, max_depth: int) -> list[dict]:
    """g_0 = 1, g_n = phi(g_{n-1}); stops early at an exact fixed point."""
    if max_depth < 1:
        raise ValueError("max_depth must be at least 1")
    alpha = polyratio(alpha, spec.k)
    ctx = _Level1(spec, alpha)
    seq = [{i: Fraction(1) for i in ctx.pairs}]
    for _ in range(max_depth):
        nxt = ctx.phi(seq[-1])
        seq.append(nxt)
        if nxt == seq[-2]:
            break
    return seq


def verify_up_certificate(spec: FractalSpec, alpha, u: dict) -> bool:
    alpha = polyratio(alpha, spec.k)
    pairs = jhat(spec.N)
    try:
        u = {i: Fraction(u[i]) for i in pairs}
    except KeyError:
        return False
    if any(x <= 0 for x in u.values()):
        return False
    ctx = _Level1(spec, alpha)
    image = ctx.phi(u)
    return all(image[i] >= u[i] for i in pairs)


def _coerce_path(spec: FractalSpec, p) -> PathRecord:
    if isinstance(p, PathRecord):
        return p
    lv = level(spec, 1)
    return path_from_vertices(spec, 1, [lv.cid(parse_address(a, spec)) for a in p])


def verify_notup_certificate(spec: FractalSpec, alpha, S, policy: dict, v: dict, lam) -> bool:
    alpha = polyratio(alpha, spec.k)
    S = [tuple(i) for i in S]
    lam = Fraction(lam)
    pairs = set(jhat(spec.N))
    if not S or len(set(S)) != len(S) or not set(S) <= pairs or lam >= 1:
        return False
    Sset = set(S)
    try:
        vv = {i: Fraction(v[i]) for i in S}
        rows = {}
        for i in S:
            p = _coerce_path(spec, policy[i])
            check_gamma_path(spec, i, p)
            if not set(p.labels()) <= Sset:
                return False
            rows[i] = hat_sigma(p, alpha)
    except (KeyError, ValueError):
        return False
    if any(x <= 0 for x in vv.values()):
        return False
    for i in S:
        mv = sum((rows[i][j] * vv[j] for j in S), Fraction(0))
        if mv > lam * vv[i]:
            return False
    return True


def verify_certificate(spec: FractalSpec, alpha, cert) -> bool:
    """Check a certificate object or its JSON form."""
    if isinstance(cert, ProvenUP):
        return verify_up_certificate(spec, alpha, cert.u)
    if isinstance(cert, ProvenNotUP):
        return verify_notup_certificate(spec, alpha, cert.S, cert.policy, cert.v, cert.lam)
    if isinstance(cert, str):
        cert = json.loads(cert)
    try:
        kind = cert["kind"]
        if kind == "up":
            u = {_parse_pair(k): Fraction(x) for k, x in cert["u"].items()}
            return verify_up_certificate(spec, alpha, u)
        if kind == "notup":
            S = [_parse_pair(k) for k in cert["S"]]
            policy = {_parse_pair(k): p for k, p in cert["policy"].items()}
            v = {_parse_pair(k): Fraction(x) for k, x in cert["v"].items()}
            return verify_notup_certificate(spec, alpha, S, policy, v, Fraction(cert["lambda"]))
    except (KeyError, TypeError, ValueError, ZeroDivisionError):
        return False
    return False


# ---------------------------------------------------------------------------
# certificate search


def _normalize(u: dict) -> dict:
    top = max(u.values())
    return {i: x / top for i, x in u.items()}


def _spectral_radius(M: list[list[Fraction]]) -> tuple[float, np.ndarray]:
    A = np.array([[float(x) for x in row] for row in M])
    vals, vecs = np.linalg.eig(A)
    k = int(np.argmax(np.abs(vals)))
    vec = np.abs(np.real(vecs[:, k]))
    return float(np.abs(vals[k])), vec


def _try_notup(ctx: _Level1, S: list, weights: dict) -> ProvenNotUP | None:
    """Stationary contracting policy on S guided by float ``weights``."""
    Sset = set(S)
    floor = max(max(weights[i] for i in S), 1e-300) * 1e-12
    u = {i: max(weights[i], floor) if i in Sset else 1.0 for i in ctx.pairs}
    policy = {}
    for i in S:
        _, vs = ctx.best_path(i, u, exact=False, allowed=Sset)
        if vs is None:
            return None
        policy[i] = vs
    rows = {i: ctx.row(policy[i]) for i in S}
    M = [[rows[i][j] for j in S] for i in S]
    rho, perron = _spectral_radius(M)
    if not rho < 1 - 1e-12:
        return None
    records = {i: path_from_vertices(ctx.spec, 1, policy[i]) for i in S}

    lams = []
    for d in (10, 100, 1000, 10 ** 4, 10 ** 6):
        lam = Fraction(rho).limit_denominator(d)
        if lam < 1 and lam not in lams:
            lams.append(lam)
    vecs = [{i: Fraction(1) for i in S}]
    if perron.max() > 0:
        p = perron / perron.max()
        vecs.append({i: Fraction(max(float(x), 1e-9)).limit_denominator(10 ** 6) for i, x in zip(S, p)})
    for lam in lams:
        for v in vecs:
            if verify_notup_certificate(ctx.spec, ctx.alpha, S, records, v, lam):
                return ProvenNotUP(list(S), records, v, lam)
    # v = (I - M/lam)^{-1} 1 is positive whenever rho(M) < lam
    lam = Fraction((rho + 1) / 2).limit_denominator(10 ** 6)
    if not rho < lam < 1:
        return None
    n = len(S)
    A = [[(Fraction(int(r == c)) - M[r][c] / lam) for c in range(n)] for r in range(n)]
    sol = solve_exact(A, [Fraction(1)] * n)
    if sol is None:
        return None
    v = dict(zip(S, sol))
    if verify_notup_certificate(ctx.spec, ctx.alpha, S, records, v, lam):
        return ProvenNotUP(list(S), records, v, lam)
    return None


def _notup_candidates(ctx: _Level1, x: dict) -> list[list]:
    order = sorted(ctx.pairs, key=lambda i: (x[i], i))
    cands = [order[:k] for k in range(1, len(order) + 1)]
    for i in ctx.pairs:
        cands.append([i])
        cands.append(sorted([i, (i[1], i[0])]))
    seen, out = set(), []
    for S in cands:
        key = tuple(sorted(S))
        if key not in seen:
            seen.add(key)
            out.append(sorted(S))
    return out


def _search_notup(ctx: _Level1, x: dict) -> ProvenNotUP | None:
    for S in _notup_candidates(ctx, x):
        cert = _try_notup(ctx, S, x)
        if cert is not None:
            return cert
    return None


def _search_up(ctx: _Level1, x: dict, rounds: int = 40) -> ProvenUP | None:
    """Policy iteration for a positive exact fixed point of phi, seeded by float ``x``."""
    top = max(x.values())
    if top <= 0:
        return None
    y = {i: x[i] / top for i in ctx.pairs}
    fixed = {i for i in ctx.pairs if y[i] > 1 - 1e-9}
    policy = {}
    for i in ctx.pairs:
        if i not in fixed:
            _, vs = ctx.best_path(i, y, exact=False, nontrivial=True)
            if vs is None:
                return None
            policy[i] = vs
    for _ in range(rounds):
        S = [i for i in ctx.pairs if i not in fixed]
        if S:
            rows = {i: ctx.row(policy[i]) for i in S}
            A = [[Fraction(int(i == j)) - rows[i][j] for j in S] for i in S]
            b = [sum((rows[i][j] for j in fixed), Fraction(0)) for i in S]
            sol = solve_exact(A, b)
            if sol is None:
                return None
            u = {i: Fraction(1) for i in fixed}
            u.update(zip(S, sol))
        else:
            u = {i: Fraction(1) for i in ctx.pairs}
        if any(val <= 0 for val in u.values()):
            return None
        image, paths = ctx.phi(u, exact=True, with_paths=True)
        improve = [i for i in ctx.pairs if image[i] < u[i]]
        if not improve:
            return ProvenUP(_normalize(u))
        for i in improve:
            policy[i] = paths[i]
            fixed.discard(i)
    return None


def check_up(spec: FractalSpec, alpha, max_depth: int = DEFAULT_MAX_DEPTH, exact_depth: int = 8):
    """Decide uniform positivity; every returned certificate has been re-verified."""
    alpha = polyratio(alpha, spec.k)
    ctx = _Level1(spec, alpha)
    ones = {i: Fraction(1) for i in ctx.pairs}

    def emit(cert):
        if cert is not None and verify_certificate(spec, alpha, cert):
            return cert
        return None

    if verify_up_certificate(spec, alpha, ones):
        return ProvenUP(ones)

    # short exact run: catches finite convergence and whole-vector decay
    g = ones
    for _ in range(min(exact_depth, max_depth)):
        nxt = ctx.phi(g)
        if nxt == g:
            if min(g.values()) > 0:
                cert = emit(ProvenUP(_normalize(g)))
                if cert is not None:
                    return cert
            break
        g = nxt
    if max(g.values()) < 1:
        cert = emit(_try_notup(ctx, list(ctx.pairs), {i: float(x) for i, x in g.items()}))
        if cert is not None:
            return cert

    # float shadow guides the exact searches; it never decides
    x = {i: 1.0 for i in ctx.pairs}
    scale = 0.0  # log of the factor divided out of x
    depth = 0
    tried = set()
    for checkpoint in _CHECKPOINTS:
        if checkpoint > max_depth:
            checkpoint = max_depth
        while depth < checkpoint:
            x = ctx.phi(x, exact=False)
            depth += 1
            top = max(x.values())
            if top <= 0:
                break
            if top < 1e-100:
                x = {i: v / top for i, v in x.items()}
                scale += np.log(top)
        if max(x.values()) <= 0:
            break
        key = tuple(round(x[i] / max(x.values()), 9) for i in ctx.pairs)
        if key not in tried:
            tried.add(key)
            decayed = scale < 0 or min(x.values()) < 1e-3 * max(x.values()) or max(x.values()) < 1 - 1e-9
            searches = (_search_notup, _search_up) if decayed else (_search_up, _search_notup)
            for search in searches:
                cert = emit(search(ctx, x))
                if cert is not None:
                    return cert
        if depth >= max_depth:
            break
    floor = {i: float(v) * float(np.exp(scale)) for i, v in x.items()}
    return Undecided(depth, floor)
