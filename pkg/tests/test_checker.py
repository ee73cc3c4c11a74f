import json
import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from fracmetric import checker
from fracmetric.catalog import BUILTIN_NAMES, builtin, closed_form_metric
from fracmetric.checker import (MetricStatus, ProvenNotUP, ProvenUP, Undecided, check_up, dp_iterate,
                                metric_verdict, phi_apply, verify_certificate, verify_notup_certificate,
                                verify_up_certificate)
from fracmetric.fractal import parse_address
from fracmetric.paths import jhat

import oracles


def ones(N):
    return {i: F(1) for i in jhat(N)}


def ratio_vectors(k):
    return st.lists(st.fractions(F(1, 10), F(9, 10), max_denominator=10), min_size=k, max_size=k).map(tuple)


def test_phi_examples():
    iv = builtin("interval")
    assert phi_apply(iv, (F(3, 10), F(3, 10)), ones(2)) == {(1, 2): F(3, 5), (2, 1): F(3, 5)}
    gk = builtin("gasket")
    img = phi_apply(gk, (F(2, 5), F(1, 2), F(3, 5)), ones(3))
    assert img[(1, 2)] == F(9, 10)
    assert img[(1, 3)] == 1 and img[(2, 3)] == 1


@pytest.mark.parametrize("name", BUILTIN_NAMES)
def test_phi_matches_enumeration(name):
    spec = builtin(name)
    rng = random.Random(11)
    for _ in range(6 if name != "vicsek" else 2):
        alpha = tuple(F(rng.randint(1, 9), 10) for _ in range(spec.k))
        u = {i: F(rng.randint(1, 12), rng.randint(1, 12)) for i in jhat(spec.N)}
        assert phi_apply(spec, alpha, u) == oracles.phi(spec, alpha, u)


@settings(max_examples=30, deadline=None)
@given(st.sampled_from(["interval", "gasket"]), st.data())
def test_phi_homogeneous_and_monotone(name, data):
    spec = builtin(name)
    alpha = data.draw(ratio_vectors(spec.k))
    pos = st.fractions(F(1, 20), F(5), max_denominator=20)
    u = {i: data.draw(pos) for i in jhat(spec.N)}
    bump = {i: u[i] + data.draw(st.fractions(F(0), F(2), max_denominator=10)) for i in u}
    c = data.draw(pos)
    pu = phi_apply(spec, alpha, u)
    assert phi_apply(spec, alpha, {i: c * x for i, x in u.items()}) == {i: c * x for i, x in pu.items()}
    hi = phi_apply(spec, alpha, bump)
    assert all(hi[i] >= pu[i] for i in u)
    # the direct boundary edge caps the minimum
    assert all(pu[i] <= u[i] for i in u)


def test_dp_nonincreasing_and_stops_at_fixed_point():
    seq = dp_iterate(builtin("gasket"), (F(2, 5), F(1, 2), F(3, 5)), 6)
    for a, b in zip(seq, seq[1:]):
        assert all(b[i] <= a[i] for i in a)
    assert seq[1][(1, 2)] == F(9, 10)
    seq = dp_iterate(builtin("gasket"), (F(1, 2),) * 3, 50)
    assert len(seq) == 2 and seq[0] == seq[1]
    with pytest.raises(ValueError):
        dp_iterate(builtin("gasket"), (F(1, 2),) * 3, 0)


def test_vicsek_exact_fixed_point():
    alpha = (F(1, 5), F(1, 5), F(4, 5), F(4, 5), F(9, 20))
    cert = check_up(builtin("vicsek"), alpha)
    assert isinstance(cert, ProvenUP)
    assert cert.u[(1, 2)] == cert.u[(2, 1)] == F(8, 11)
    assert cert.c3 == F(8, 11)
    assert oracles.up_certificate_ok(builtin("vicsek"), alpha, cert.u)


def test_gasket_notup_certificate():
    alpha = (F(2, 5), F(1, 2), F(3, 5))
    cert = check_up(builtin("gasket"), alpha)
    assert isinstance(cert, ProvenNotUP)
    assert cert.lam == F(9, 10)
    assert cert.summary() == "ProvenNotUP λ=9/10"
    data = cert.to_json()
    policy = {checker._parse_pair(k): [parse_address(a, builtin("gasket")) for a in v] for k, v in data["policy"].items()}
    S = [checker._parse_pair(s) for s in data["S"]]
    v = {checker._parse_pair(k): F(x) for k, x in data["v"].items()}
    assert oracles.notup_certificate_ok(builtin("gasket"), alpha, S, policy, v, F(data["lambda"]))


def test_interval_notup():
    cert = check_up(builtin("interval"), (F(3, 10), F(3, 10)))
    assert isinstance(cert, ProvenNotUP)
    assert cert.lam == F(3, 5)


def test_half_is_fast_path():
    for name in BUILTIN_NAMES:
        spec = builtin(name)
        cert = check_up(spec, (F(1, 2),) * spec.k)
        assert isinstance(cert, ProvenUP) and set(cert.u.values()) == {1}


@settings(max_examples=40, deadline=None)
@given(ratio_vectors(3))
def test_gasket_verdict_matches_closed_form(alpha):
    cert = check_up(builtin("gasket"), alpha)
    expected = MetricStatus.METRIC if closed_form_metric("gasket", alpha) else MetricStatus.NOT_METRIC
    assert metric_verdict(cert) is expected
    assert verify_certificate(builtin("gasket"), alpha, cert)
    assert verify_certificate(builtin("gasket"), alpha, json.dumps(cert.to_json()))


def test_verifiers_reject_malformed():
    gk = builtin("gasket")
    alpha = (F(1, 2),) * 3
    u = ones(3)
    assert verify_up_certificate(gk, alpha, u)
    assert not verify_up_certificate(gk, alpha, {**u, (1, 2): F(0)})
    del u[(1, 2)]
    assert not verify_up_certificate(gk, alpha, u)
    assert not verify_certificate(gk, alpha, {"kind": "other"})
    assert not verify_certificate(gk, alpha, {"kind": "up"})
    assert not verify_notup_certificate(gk, alpha, [], {}, {}, F(1, 2))
    # a level-1 walk that is not a strict path from P1 to P2
    bad = {(1, 2): ["e.1", "1.3", "e.1", "1.2", "e.2"]}
    assert not verify_notup_certificate(gk, (F(1, 10),) * 3, [(1, 2)], bad, {(1, 2): F(1)}, F(1, 2))


def test_notup_policy_must_stay_inside_S():
    gk = builtin("gasket")
    alpha = (F(1, 10),) * 3
    # e.1 -> 1.3 -> 3.2 -> e.2 uses label (3,2) from cell 3
    policy = {(1, 2): ["e.1", "1.3", "3.2", "e.2"]}
    assert not verify_notup_certificate(gk, alpha, [(1, 2)], policy, {(1, 2): F(1)}, F(9, 10))
    policy = {(1, 2): ["e.1", "1.2", "e.2"]}
    assert verify_notup_certificate(gk, alpha, [(1, 2)], policy, {(1, 2): F(1)}, F(1, 5))
    assert not verify_notup_certificate(gk, alpha, [(1, 2)], policy, {(1, 2): F(1)}, F(1, 6))


def test_undecided_when_searches_fail(monkeypatch):
    monkeypatch.setattr(checker, "_search_up", lambda ctx, x: None)
    monkeypatch.setattr(checker, "_search_notup", lambda ctx, x: None)
    monkeypatch.setattr(checker, "_try_notup", lambda ctx, S, w: None)
    cert = check_up(builtin("gasket"), (F(2, 5), F(1, 2), F(3, 5)), max_depth=16)
    assert isinstance(cert, Undecided) and cert.depth == 16
    assert metric_verdict(cert) is MetricStatus.UNDECIDED
    assert cert.to_json()["kind"] == "undecided"
    # the floor tracks the decaying minimum: (9/10)^16 on the (1,2) coordinate
    assert cert.floor[(1, 2)] == pytest.approx(0.9 ** 16, rel=1e-9)


def _swap(x):
    return {(b, a): val for (a, b), val in x.items()}


@settings(max_examples=25, deadline=None)
@given(st.sampled_from(["interval", "gasket"]), st.data())
def test_phi_commutes_with_pair_swap(name, data):
    # reversing a path swaps every label and keeps every weight
    spec = builtin(name)
    alpha = data.draw(ratio_vectors(spec.k))
    u = {i: data.draw(st.fractions(F(1, 10), F(3), max_denominator=10)) for i in jhat(spec.N)}
    assert phi_apply(spec, alpha, _swap(u)) == _swap(phi_apply(spec, alpha, u))


def test_vicsek_phi_commutes_with_pair_swap():
    spec = builtin("vicsek")
    rng = random.Random(4)
    alpha = tuple(F(rng.randint(1, 9), 10) for _ in range(5))
    u = {i: F(rng.randint(1, 9), rng.randint(1, 9)) for i in jhat(4)}
    assert phi_apply(spec, alpha, _swap(u)) == _swap(phi_apply(spec, alpha, u))
