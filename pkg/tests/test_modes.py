import numpy as np
import pytest
from hypothesis import given, strategies as st

from lowmode.modes import (COS, SIN, RD_SCALAR, VELOCITY, VORTICITY,
                           ModeVector, SpanSet, TrigMode, canonical,
                           make_mode, polarization_frame, span_of)


def test_canonical_examples():
    assert canonical((-1, 2)) == ((1, -2), -1)
    assert canonical((0, 3)) == ((0, 3), 1)
    assert canonical((0, -1, 0)) == ((0, 1, 0), -1)


@given(st.lists(st.integers(-9, 9), min_size=1, max_size=3))
def test_canonical_involution(coords):
    k = tuple(coords)
    kc, s = canonical(k)
    kc2, s2 = canonical(kc)
    assert kc2 == kc and s2 == 1
    neg, sn = canonical(tuple(-c for c in k))
    assert neg == kc
    if any(c != 0 for c in k):
        assert sn == -s


def test_make_mode_folding():
    m, s = make_mode((-1, 2), SIN, VORTICITY)
    assert m.k == (1, -2) and s == -1
    m, s = make_mode((-1, 2), COS, VORTICITY)
    assert m.k == (1, -2) and s == 1
    m, s = make_mode((0, 0), COS, VORTICITY)
    assert m is None and s == 0
    m, s = make_mode((-3,), SIN, RD_SCALAR)
    assert m.k == (3,) and s == -1
    with pytest.raises(ValueError):
        make_mode((1,), COS, RD_SCALAR)
    with pytest.raises(ValueError):
        make_mode((1, 0, 0), COS, VELOCITY, pol=None)


def test_polarization_frame_constraints():
    for k in [(1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 0), (2, -1, 3), (1, 1, 1)]:
        kc, _ = canonical(k)
        a0, a1 = polarization_frame(kc)
        kv = np.array(kc, dtype=float)
        assert abs(np.dot(a0, kv)) < 1e-14
        assert abs(np.dot(a1, kv)) < 1e-14
        assert abs(np.dot(a0, a1)) < 1e-14
        assert abs(np.dot(a0, a0) - 1.0 / (4 * np.pi)) < 1e-14
        assert abs(np.dot(a1, a1) - 1.0 / (4 * np.pi)) < 1e-14


def test_frame_deterministic():
    a = polarization_frame((1, 2, 3))
    b = polarization_frame((1, 2, 3))
    assert np.array_equal(a[0], b[0]) and np.array_equal(a[1], b[1])


def _mode(k, parity=SIN):
    return TrigMode((k,), parity, RD_SCALAR)


def test_spanset_idempotent_insert():
    s = SpanSet()
    v = ModeVector({_mode(1): 1.0, _mode(3): -0.25})
    assert s.insert(v)
    d = s.dim
    assert not s.insert(v)
    assert not s.insert(v.scaled(3.7))
    assert s.dim == d


def test_spanset_membership_and_equality():
    v1 = ModeVector({_mode(1): 1.0})
    v2 = ModeVector({_mode(2): 0.5, _mode(1): 1.0})
    s = span_of([v1, v2])
    assert s.dim == 2
    assert s.contains(ModeVector({_mode(2): -4.0}))
    assert not s.contains(ModeVector({_mode(3): 1.0}))
    t = span_of([v2, v1.scaled(-2.0)])
    assert s.equals(t)


@given(st.lists(st.tuples(st.integers(1, 6), st.floats(-3, 3)), min_size=1,
                max_size=6))
def test_span_dim_order_independent(entries):
    vecs = []
    for k, c in entries:
        if abs(c) > 1e-3:
            vecs.append(ModeVector({_mode(k): c, _mode(k + 1): 1.0}))
    if not vecs:
        return
    fwd = span_of(vecs)
    rev = span_of(list(reversed(vecs)))
    assert fwd.dim == rev.dim
    assert fwd.equals(rev)


def test_covered_modes():
    s = span_of([ModeVector({_mode(1): 1.0, _mode(2): 1.0}),
                 ModeVector({_mode(1): 1.0, _mode(2): -1.0})])
    cov = s.covered_modes([_mode(1), _mode(2), _mode(3)])
    assert cov == [_mode(1), _mode(2)]
