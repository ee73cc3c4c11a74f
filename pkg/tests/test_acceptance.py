"""Acceptance suite: one test per criterion, one PASS/FAIL line each.

Run with ``pytest tests/test_acceptance.py -v`` (lines are repeated in the
terminal summary) or directly with ``python tests/test_acceptance.py``.
"""
import itertools
import random
import time
from fractions import Fraction as F
from functools import lru_cache

import numpy as np

from fracmetric.catalog import BUILTIN_NAMES, builtin, closed_form_metric
from fracmetric.checker import (MetricStatus, ProvenUP, check_up, metric_verdict,
                                verify_notup_certificate, verify_up_certificate)
from fracmetric.fractal import parse_address
from fracmetric.graph import build_level_graph
from fracmetric.metric import compare_path_chain, path_distance, scaling_report
from fracmetric.paths import (H, basis, hat_sigma, insert, jhat, path_from_addresses, path_from_vertices,
                              transfer_apply)

import oracles

try:
    from conftest import ACCEPTANCE_LINES
except ImportError:  # run as a plain script
    ACCEPTANCE_LINES = []


def report(n, title, ok, detail):
    line = f"{'PASS' if ok else 'FAIL'}  criterion {n:>2}: {title} -- {detail}"
    print(line)
    ACCEPTANCE_LINES.append(line)
    assert ok, line


@lru_cache(maxsize=None)
def grid(name):
    """Run the checker over the criterion grid once; reused by later criteria."""
    spec = builtin(name)
    if name == "gasket":
        values = [F(i, 10) for i in range(1, 10)]
    else:
        values = [F(i, 5) for i in range(1, 5)]
    t0 = time.perf_counter()
    rows = [(alpha, check_up(spec, alpha)) for alpha in itertools.product(values, repeat=spec.k)]
    return rows, time.perf_counter() - t0


def grid_agreement(n, name, limit):
    rows, elapsed = grid(name)
    mismatch = undecided = 0
    for alpha, cert in rows:
        status = metric_verdict(cert)
        undecided += status is MetricStatus.UNDECIDED
        expected = MetricStatus.METRIC if closed_form_metric(name, alpha) else MetricStatus.NOT_METRIC
        mismatch += status is not expected
    # the independent closed-form oracle agrees with the catalog's
    assert all(oracles.closed_form(name, a) == closed_form_metric(name, a) for a, _ in rows)
    ok = mismatch == 0 and undecided == 0 and elapsed < limit
    report(n, f"{name} grid agreement", ok,
           f"{len(rows)} points, {mismatch} mismatches, {undecided} undecided, {elapsed:.1f}s (limit {limit}s)")


def test_criterion_01_gasket_grid():
    grid_agreement(1, "gasket", 60)


def test_criterion_02_vicsek_grid():
    grid_agreement(2, "vicsek", 300)


def random_ratio(rng):
    q = rng.randint(2, 60)
    return F(rng.randint(1, q - 1), q)


def test_criterion_03_interval():
    spec = builtin("interval")
    rng = random.Random(2024)
    cases = []
    for n in range(200):
        a = random_ratio(rng)
        # every fifth case sits exactly on the boundary sum = 1
        b = 1 - a if n % 5 == 0 else random_ratio(rng)
        cases.append((a, b))
    wrong = 0
    for alpha in cases:
        cert = check_up(spec, alpha)
        wrong += isinstance(cert, ProvenUP) != (sum(alpha) >= 1)
    # distances P1 -> P2: Dijkstra against the closed recursion, and against brute force for m <= 3
    dist_bad = brute_bad = literal_bad = 0
    for alpha in cases[:60]:
        s = sum(alpha)
        for m in range(7):
            d = path_distance(spec, alpha, m, "e.1", "e.2")
            dist_bad += d != min(F(1), s) ** m
            if s <= 1:
                literal_bad += d != s ** m
            if m <= 3:
                brute_bad += d != oracles.brute_path_distance(spec, alpha, m, ((), 1), ((), 2))
    ok = wrong == 0 and dist_bad == 0 and brute_bad == 0 and literal_bad == 0
    report(3, "interval closed recursion", ok,
           f"200 polyratios, {wrong} verdict errors; levels 0..6: {dist_bad} mismatches with min(1, a1+a2)^m "
           f"({literal_bad} with (a1+a2)^m where a1+a2 <= 1), {brute_bad} brute-force mismatches at m <= 3")


def test_criterion_04_half_fast_path():
    rng = random.Random(7)
    bad = total = 0
    for name in BUILTIN_NAMES:
        spec = builtin(name)
        for _ in range(100):
            alpha = tuple(F(1, 2) + F(rng.randint(0, 49), 100) for _ in range(spec.k))
            cert = check_up(spec, alpha)
            total += 1
            ones = {i: F(1) for i in jhat(spec.N)}
            ok = isinstance(cert, ProvenUP) and cert.u == ones and verify_up_certificate(spec, alpha, cert.u)
            bad += not ok
    report(4, "ratios >= 1/2 give the unit certificate", bad == 0, f"{total} cases, {bad} failures")


def _mutations(cert):
    """Single-rational perturbations as (label, mutated part) pairs."""
    out = []
    if isinstance(cert, ProvenUP):
        i = sorted(cert.u)[0]
        for label, f in (("negate", lambda x: -x), ("zero", lambda x: F(0)),
                         ("double", lambda x: 2 * x), ("halve", lambda x: x / 2), ("plus one", lambda x: x + 1)):
            out.append((label, {**cert.u, i: f(cert.u[i])}))
    else:
        i = cert.S[0]
        out.append(("lambda=1", ("lam", F(1))))
        out.append(("lambda/2", ("lam", cert.lam / 2)))
        for label, f in (("negate v", lambda x: -x), ("double v", lambda x: 2 * x), ("halve v", lambda x: x / 2)):
            out.append((label, ("v", {**cert.v, i: f(cert.v[i])})))
    return out


def _oracle_ok(spec, alpha, cert, mutated=None):
    if isinstance(cert, ProvenUP):
        return oracles.up_certificate_ok(spec, alpha, mutated if mutated is not None else cert.u)
    lam, v = cert.lam, cert.v
    if mutated is not None:
        if mutated[0] == "lam":
            lam = mutated[1]
        else:
            v = mutated[1]
    policy = {i: [parse_address(a, spec) for a in cert.policy[i].addresses()] for i in cert.S}
    return oracles.notup_certificate_ok(spec, alpha, cert.S, policy, v, lam)


def _verify(spec, alpha, cert, mutated=None):
    if isinstance(cert, ProvenUP):
        return verify_up_certificate(spec, alpha, mutated if mutated is not None else cert.u)
    lam, v = cert.lam, cert.v
    if mutated is not None:
        if mutated[0] == "lam":
            lam = mutated[1]
        else:
            v = mutated[1]
    return verify_notup_certificate(spec, alpha, cert.S, cert.policy, v, lam)


def test_criterion_05_certificate_soundness():
    certs = []
    for name in ("gasket", "vicsek"):
        certs += [(name, alpha, cert) for alpha, cert in grid(name)[0]]
    rng = random.Random(5)
    for _ in range(100):
        alpha = (random_ratio(rng), random_ratio(rng))
        certs.append(("interval", alpha, check_up(builtin("interval"), alpha)))
    reverify_bad = sum(not _verify(builtin(n), a, c) for n, a, c in certs)

    # mutation test on a sample, judged against the enumeration oracle
    sample = [c for c in certs if c[0] != "vicsek"][::7] + [c for c in certs if c[0] == "vicsek"][::64]
    oracle_bad = disagree = rejected = must_reject_missed = tried = 0
    for name, alpha, cert in sample:
        spec = builtin(name)
        oracle_bad += not _oracle_ok(spec, alpha, cert)
        for label, mutated in _mutations(cert):
            tried += 1
            got = _verify(spec, alpha, cert, mutated)
            want = _oracle_ok(spec, alpha, cert, mutated)
            disagree += got != want
            rejected += not got
            if label in ("negate", "zero", "lambda=1", "negate v"):
                must_reject_missed += got
    ok = reverify_bad == 0 and oracle_bad == 0 and disagree == 0 and must_reject_missed == 0 and rejected > 0
    report(5, "certificate soundness", ok,
           f"{len(certs)} certificates re-verified, {reverify_bad} failures; {len(sample)} also accepted by the "
           f"oracle ({oracle_bad} not); {tried} single-rational mutations, {rejected} rejected, "
           f"{disagree} verifier/oracle disagreements, {must_reject_missed} invalid mutations accepted")


def random_gamma(spec, rng):
    return {i: path_from_addresses(spec, 1, oracles.random_strict_path(spec, i, rng)) for i in jhat(spec.N)}


def random_walk(spec, m, rng, steps):
    g = build_level_graph(spec, m)
    v = rng.randrange(len(g))
    vs = [v]
    for _ in range(steps):
        if rng.random() < 0.15:
            vs.append(vs[-1])  # weak step
        else:
            vs.append(rng.choice(g.adj[vs[-1]])[0])
    return path_from_vertices(spec, m, vs)


def test_criterion_06_insertion_identity():
    rng = random.Random(6)
    bad = 0
    for case in range(500):
        name = BUILTIN_NAMES[case % 3]
        spec = builtin(name)
        alpha = tuple(F(rng.randint(1, 19), 20) for _ in range(spec.k))
        m = rng.randint(0, 1 if name == "vicsek" else 2)
        gammas = [random_gamma(spec, rng) for _ in range(rng.randint(1, 2 if name == "vicsek" else 3))]
        p = random_walk(spec, m, rng, rng.randint(1, 5))
        x = hat_sigma(p, alpha)
        for g in reversed(gammas):
            p = insert(g, p)
            x = transfer_apply(g, x, alpha)
        bad += hat_sigma(p, alpha) != x
    report(6, "sums along inserted paths equal transfer products", bad == 0, f"500 cases, {bad} failures")


def test_criterion_07_h_recursion():
    rng = random.Random(77)
    bad = 0
    for case in range(500):
        spec = builtin(BUILTIN_NAMES[case % 3])
        alpha = tuple(F(rng.randint(1, 19), 20) for _ in range(spec.k))
        gammas = [random_gamma(spec, rng) for _ in range(rng.randint(1, 4))]
        head, last = gammas[:-1], gammas[-1]
        iota = rng.choice(jhat(spec.N))

        def product(gs, x):
            for g in reversed(gs):
                x = transfer_apply(g, x, alpha)
            return x

        lhs = H(product(gammas, basis(spec.N, iota)))
        step = transfer_apply(last, basis(spec.N, iota), alpha)
        rhs = sum((c * H(product(head, basis(spec.N, j))) for j, c in step.items() if c), F(0))
        bad += lhs != rhs
    report(7, "H of a product splits over the last factor", bad == 0, f"500 products, {bad} failures")


def test_criterion_08_chain_below_path():
    rng = random.Random(8)
    bad = pairs = 0
    for name in BUILTIN_NAMES:
        spec = builtin(name)
        for _ in range(20):
            alpha = tuple(F(rng.randint(1, 19), 20) for _ in range(spec.k))
            rep = compare_path_chain(spec, alpha, 2)
            pairs += rep.pairs
            bad += len(rep.violations)
    report(8, "chain distance <= path distance on V^(2)", bad == 0,
           f"3 fractals x 20 polyratios, {pairs} pairs, {bad} violations")


def test_criterion_09_scaling_report():
    g = scaling_report(builtin("gasket"), (F(1, 2),) * 3, 4, 2)
    v = scaling_report(builtin("vicsek"), (F(3, 10),) * 4 + (F(2, 5),), 4, 2)
    ok_g = all(r.ratio == 1 for r in g.rows) and len(g.rows) == 13
    ok_v = all(0 < r.ratio <= 1 for r in v.rows) and v.min_ratio > 0 and v.max_ratio <= 1 and len(v.rows) == 31
    report(9, "scaling report", ok_g and ok_v,
           f"gasket {len(g.rows)} cells, ratios in [{g.min_ratio}, {g.max_ratio}]; "
           f"vicsek {len(v.rows)} cells, ratios in [{v.min_ratio}, {v.max_ratio}]")


def test_criterion_10_lower_bound():
    checked = bad = 0
    for name in ("gasket", "vicsek"):
        spec = builtin(name)
        g = build_level_graph(spec, 3)
        n = len(g)
        for alpha, cert in grid(name)[0]:
            if not isinstance(cert, ProvenUP):
                continue
            assert max(cert.u.values()) == 1
            bound = min(cert.u.values()) * min(alpha) ** 3
            sc, D = g.scaled_rows(alpha, range(n))
            off = D[~np.eye(n, dtype=bool)]
            checked += 1
            bad += not (off.min() >= 0 and sc.unscale(int(off.min())) >= bound)
    report(10, "pairwise V^(3) distances above min(u) * min(alpha)^3", bad == 0 and checked > 0,
           f"{checked} certified polyratios, {bad} violations")


if __name__ == "__main__":
    import sys
    failed = 0
    for name, fn in sorted(globals().items()):
        if name.startswith("test_criterion_"):
            try:
                fn()
            except AssertionError:
                failed += 1
    sys.exit(1 if failed else 0)
