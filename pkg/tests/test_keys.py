import pytest
from hypothesis import given, strategies as st

from dynmsf.keys import (ABSENT, MAX_EDGE_ID, WEIGHT_LIMIT, TotalWeight, check_weight, compare,
                         decode, is_phantom, phantom_key, real_key)

weights = st.integers(-WEIGHT_LIMIT + 1, WEIGHT_LIMIT - 1)
ids = st.integers(0, MAX_EDGE_ID)


def test_tie_broken_by_id():
    assert compare(TotalWeight(5, 3), TotalWeight(5, 7)) == -1


def test_phantom_below_every_real_weight():
    assert compare(TotalWeight(0, 0, phantom=True), TotalWeight(-10**9, 0)) == -1
    assert phantom_key(MAX_EDGE_ID) < real_key(-WEIGHT_LIMIT + 1, 0)


def test_weight_dominates():
    assert compare(TotalWeight(2, 9), TotalWeight(3, 0)) == -1
    assert compare(TotalWeight(3, 0), TotalWeight(3, 0)) == 0


@given(weights, ids, weights, ids)
def test_key_order_is_the_total_order(w1, i1, w2, i2):
    a, b = TotalWeight(w1, i1), TotalWeight(w2, i2)
    want = compare(a, b)
    got = (a.key() > b.key()) - (a.key() < b.key())
    assert got == want
    assert a.key() < ABSENT


@given(weights, ids)
def test_decode_round_trip(w, i):
    assert decode(real_key(w, i)) == TotalWeight(w, i)
    assert not is_phantom(real_key(w, i))


@given(ids)
def test_phantom_round_trip(i):
    assert decode(phantom_key(i)) == TotalWeight(0, i, phantom=True)


@pytest.mark.parametrize("bad", [1.5, "3", True, None])
def test_non_integer_weights_rejected(bad):
    with pytest.raises(TypeError):
        check_weight(bad)


def test_weight_and_id_limits():
    with pytest.raises(ValueError):
        check_weight(WEIGHT_LIMIT)
    with pytest.raises(ValueError):
        real_key(0, MAX_EDGE_ID + 1)
    with pytest.raises(ValueError):
        phantom_key(-1)
